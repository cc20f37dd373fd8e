"""Three-user deterministic interference channel with invertible outputs.

Each user sends ``X_i = (u_i, w_i)`` in ``Z_q x Z_q``. The interference
seen by other receivers is ``V_i = u_i``. Receiver j adds the two
interfering symbols onto its own input, one per coordinate:

    Y_j = (u_j + V_a mod q, w_j + V_b mod q)

with ``(a, b)`` its two interferers. Given ``X_j`` the output determines
``(V_a, V_b)``, which is the invertibility property the region relies on.

Users and receivers are indexed 0, 1, 2 in code. Entropy-table keys use
1-based labels, e.g. ``"H(Y_1|V_23)"``.
"""

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import AlphabetTooLarge
from .polytope import Polytope, fm_eliminate, remove_redundant

MAX_STATES = 10**7
USERS = (0, 1, 2)
SUBSETS = tuple(s for r in range(4) for s in itertools.combinations(USERS, r))


@dataclass(frozen=True)
class DetChannel:
    """Deterministic channel on the ``q**6`` joint input alphabet.

    ``interferers[j]`` lists the users whose V lands on the first and second
    output coordinate of receiver j. ``output`` maps ``(x, v_a, v_b)`` arrays
    (with ``x`` of shape (2, ...)) to the output label in ``range(q*q)``.
    """

    q: int
    interferers: tuple = ((1, 2), (0, 2), (0, 1))
    drop_second: bool = False

    def g(self, u, w):
        return u

    def output(self, j, u_j, w_j, v_a, v_b):
        q = self.q
        y0 = (u_j + v_a) % q
        y1 = (w_j + v_b) % q
        if self.drop_second:
            return y0
        return y0 * q + y1


def build_canonical_det_channel(q):
    if q < 2:
        raise ValueError("q must be at least 2")
    return DetChannel(int(q))


@dataclass(frozen=True)
class ProductDistribution:
    """Independent per-user distributions, each a (q, q) array over (u, w)."""

    p: tuple

    def __post_init__(self):
        arrs = []
        for pi in self.p:
            a = np.array(pi, dtype=float)
            q = int(round(np.sqrt(a.size)))
            a = a.reshape(q, q)
            if np.any(a < 0) or abs(a.sum() - 1) > 1e-12:
                raise ValueError("each user distribution must be a probability vector")
            a.setflags(write=False)
            arrs.append(a)
        if len(arrs) != 3 or len({a.shape for a in arrs}) != 1:
            raise ValueError("need three distributions over the same alphabet")
        object.__setattr__(self, "p", tuple(arrs))

    @property
    def q(self):
        return self.p[0].shape[0]

    @classmethod
    def uniform(cls, q):
        return cls([np.full((q, q), 1.0 / q**2)] * 3)

    @classmethod
    def point_mass(cls, q, symbols=((0, 0), (0, 0), (0, 0))):
        out = []
        for u, w in symbols:
            a = np.zeros((q, q))
            a[u, w] = 1.0
            out.append(a)
        return cls(out)

    @classmethod
    def dirichlet(cls, q, rng):
        return cls([rng.dirichlet(np.ones(q * q)).reshape(q, q) for _ in range(3)])


def _entropy(weights):
    w = weights[weights > 0]
    return float(-(w * np.log2(w)).sum()) if w.size else 0.0


class _Enumeration:
    """All ``q**6`` joint input states with their probabilities."""

    def __init__(self, dc, dist):
        q = dc.q
        if dist.q != q:
            raise ValueError("distribution alphabet does not match the channel")
        if q**6 > MAX_STATES:
            raise AlphabetTooLarge(f"q={q} gives {q**6} states (limit {MAX_STATES})")
        self.q = q
        self.prob = np.einsum("ab,cd,ef->abcdef", *dist.p).ravel()
        idx = np.indices((q,) * 6).reshape(6, -1)
        self.u = idx[[0, 2, 4]]
        self.w = idx[[1, 3, 5]]
        self.x = self.u * q + self.w
        self.v = np.vstack([dc.g(self.u[i], self.w[i]) for i in USERS])
        self.y = []
        for j in USERS:
            a, b = dc.interferers[j]
            self.y.append(dc.output(j, self.u[j], self.w[j], self.v[a], self.v[b]))

    def H(self, *labels):
        """Joint entropy of the given label arrays."""
        if not labels:
            return 0.0
        key = np.zeros_like(labels[0])
        for lab in labels:
            key = key * (int(lab.max()) + 1) + lab
        _, inv = np.unique(key, return_inverse=True)
        return _entropy(np.bincount(inv.ravel(), weights=self.prob))


def check_invertibility(dc, dist, tol=1e-9):
    """True iff H(Y_j | X_j) = H(V_a) + H(V_b) at every receiver."""
    e = _Enumeration(dc, dist)
    for j in USERS:
        a, b = dc.interferers[j]
        lhs = e.H(e.y[j], e.x[j]) - e.H(e.x[j])
        if abs(lhs - e.H(e.v[a]) - e.H(e.v[b])) > tol:
            return False
    return True


def _label(S):
    return "".join(str(i + 1) for i in S)


@dataclass(frozen=True)
class EntropyTable:
    """``cond[(j, S)] = H(Y_j | V_S)`` and ``hv[i] = H(V_i)``, in bits."""

    cond: dict
    hv: tuple
    hy_given_x: tuple = ()

    def H(self, j, S=()):
        return self.cond[(j, tuple(sorted(S)))]

    def to_dict(self):
        out = {f"H(Y_{j + 1}|V_{_label(S)})": v for (j, S), v in sorted(self.cond.items())}
        for i, v in enumerate(self.hv):
            out[f"H(V_{i + 1})"] = v
        return out

    def to_json(self):
        return json.dumps(self.to_dict())


def entropy_table(dc, dist):
    """Every H(Y_j | V_S) by exhaustive enumeration of the joint input space."""
    e = _Enumeration(dc, dist)
    cond = {}
    for j in USERS:
        for S in SUBSETS:
            vs = [e.v[i] for i in S]
            cond[(j, S)] = e.H(e.y[j], *vs) - e.H(*vs)
    hv = tuple(e.H(e.v[i]) for i in USERS)
    hyx = tuple(e.H(e.y[j], e.x[j]) - e.H(e.x[j]) for j in USERS)
    return EntropyTable(cond, hv, hyx)


def mutual_informations(dc, dist):
    """I(X_j; Y_j) for each user, by enumeration."""
    e = _Enumeration(dc, dist)
    return tuple(e.H(e.y[j]) - (e.H(e.y[j], e.x[j]) - e.H(e.x[j])) for j in USERS)


# Converse region for the labelling (1,2,3). Each entry is the rate weight
# vector and the right side as (multiplicity, receiver, conditioning set),
# all 1-based.
REGION_123 = (
    ((1, 0, 0), ((1, 1, (2, 3)),)),
    ((1, 1, 0), ((1, 1, (1, 2, 3)), (1, 2, (3,)))),
    ((1, 1, 0), ((1, 1, (1, 3)), (1, 2, (2, 3)))),
    ((2, 1, 0), ((1, 1, (3,)), (1, 1, (1, 2, 3)), (1, 2, (2, 3)))),
    ((1, 1, 1), ((1, 1, (1,)), (1, 2, (2, 3)), (1, 3, (1, 2, 3)))),
    ((1, 1, 1), ((1, 1, (1, 3)), (1, 2, (1, 2)), (1, 3, (2, 3)))),
    ((1, 1, 1), ((1, 1, (1, 2, 3)), (1, 2, (1,)), (1, 3, (2, 3)))),
    ((1, 1, 1), ((1, 1, (1, 2, 3)), (1, 2, (1, 2, 3)), (1, 3, ()))),
    ((2, 1, 1), ((1, 1, ()), (1, 1, (1, 2, 3)), (1, 2, (2, 3)), (1, 3, (1, 2, 3)))),
    ((2, 1, 1), ((1, 1, (1,)), (1, 1, (1, 2, 3)), (1, 2, (2, 3)), (1, 3, (2, 3)))),
    ((2, 1, 1), ((1, 1, (1, 3)), (1, 1, (2,)), (1, 2, (1, 2, 3)), (1, 3, (2, 3)))),
    ((2, 1, 1), ((1, 1, (1, 2, 3)), (1, 1, (3,)), (1, 2, (1, 2)), (1, 3, (2, 3)))),
    ((2, 1, 1), ((1, 1, (1, 2, 3)), (1, 1, (3,)), (1, 2, (2,)), (1, 3, (1, 2, 3)))),
    ((2, 1, 1), ((1, 1, (1, 2, 3)), (1, 1, (1, 2)), (1, 2, (2, 3)), (1, 3, (3,)))),
    ((2, 1, 1), ((2, 1, (1, 2, 3)), (1, 2, ()), (1, 3, (2, 3)))),
    ((2, 1, 1), ((2, 1, (1, 2, 3)), (1, 2, (2,)), (1, 3, (3,)))),
    ((3, 1, 1), ((2, 1, (1, 2, 3)), (1, 1, ()), (1, 2, (2, 3)), (1, 3, (2, 3)))),
    ((3, 1, 1), ((2, 1, (1, 2, 3)), (1, 1, (2,)), (1, 2, (2, 3)), (1, 3, (3,)))),
    ((2, 2, 1), ((1, 1, ()), (1, 1, (1, 3)), (2, 2, (1, 2, 3)), (1, 3, (2, 3)))),
    ((2, 2, 1), ((1, 1, ()), (1, 1, (1, 2, 3)), (1, 2, (1, 2, 3)), (1, 2, (2, 3)), (1, 3, (1, 3)))),
    ((2, 2, 1), ((1, 1, ()), (1, 1, (1, 2, 3)), (2, 2, (1, 2, 3)), (1, 3, (3,)))),
    ((2, 2, 1), ((1, 1, (1,)), (1, 1, (1, 2, 3)), (1, 2, (1, 2, 3)), (1, 2, (2, 3)), (1, 3, (3,)))),
    ((2, 2, 1), ((2, 1, (1, 3)), (1, 2, (1, 2, 3)), (1, 2, (2,)), (1, 3, (2, 3)))),
    ((3, 2, 1), ((2, 1, (1, 2, 3)), (1, 1, ()), (1, 2, (1, 2, 3)), (1, 2, (2, 3)), (1, 3, (3,)))),
    ((3, 2, 1), ((2, 1, (1, 2, 3)), (1, 1, ()), (2, 2, (2, 3)), (1, 3, (1, 3)))),
    ((3, 2, 1), ((2, 1, (1, 2, 3)), (1, 1, (1,)), (2, 2, (2, 3)), (1, 3, (3,)))),
    ((3, 2, 1), ((3, 1, (1, 2, 3)), (1, 2, (2, 3)), (1, 2, ()), (1, 3, (3,)))),
    ((4, 2, 1), ((3, 1, (1, 2, 3)), (1, 1, ()), (2, 2, (2, 3)), (1, 3, (3,)))),
)


def region_rows(t, perm=(0, 1, 2)):
    """The 28 converse inequalities with labels relabelled by ``perm``.

    Label k (1-based) in the template becomes user ``perm[k-1]``.
    """
    A, b = [], []
    for weights, terms in REGION_123:
        a = np.zeros(3)
        for k, wgt in enumerate(weights):
            a[perm[k]] += wgt
        rhs = sum(mult * t.H(perm[y - 1], [perm[s - 1] for s in S]) for mult, y, S in terms)
        A.append(a)
        b.append(rhs)
    return np.array(A), np.array(b)


def theorem1_region(t, prune=False):
    """Intersection of the converse inequalities over all six relabellings."""
    blocks = [region_rows(t, perm) for perm in itertools.permutations(USERS)]
    A = np.vstack([blk[0] for blk in blocks])
    b = np.concatenate([blk[1] for blk in blocks])
    p = Polytope(A, b, np.ones(3, dtype=bool))
    return remove_redundant(p) if prune else p


def achievable_constraints(t):
    """Decoding constraints over (R1p, R2p, R3p, R1c, R2c, R3c).

    Receiver j decodes its private message together with the common
    messages of all three users; each row bounds a subset of the rates that
    can be in error by the entropy of Y_j given the correctly decoded
    common parts.
    """
    A, b = [], []
    for j in USERS:
        k, l = (i for i in USERS if i != j)
        # (common messages counted, conditioning set)
        for commons, S in (
            ((j, k, l), ()),
            ((j, k), (l,)),
            ((j, l), (k,)),
            ((k, l), (j,)),
            ((k,), (j, l)),
            ((l,), (j, k)),
            ((j,), (k, l)),
            ((), (j, k, l)),
        ):
            a = np.zeros(6)
            a[j] = 1.0
            for i in commons:
                a[3 + i] += 1.0
            A.append(a)
            b.append(t.H(j, S))
    return Polytope(np.array(A), np.array(b), np.ones(6, dtype=bool))


def project_to_rates(p):
    """Eliminate the private rates after substituting R_i = R_ip + R_ic.

    Variables after substitution are (R1, R2, R3, R1p, R2p, R3p), with
    R_ic >= 0 becoming R_ip - R_i <= 0.
    """
    if p.dim != 6:
        raise ValueError("expected the six-variable split-rate polytope")
    ap, ac = p.A[:, :3], p.A[:, 3:]
    A = np.hstack([ac, ap - ac])
    extra = np.hstack([-np.eye(3), np.eye(3)])
    q = Polytope(np.vstack([A, extra]), np.concatenate([p.b, np.zeros(3)]), np.ones(6, dtype=bool))
    for k in (5, 4, 3):
        q = fm_eliminate(q, k)
    return q


def converse_chain_value(t):
    """4H(Y1) + 2H(Y2) + H(Y3) - 3H(V1) - 5H(V2) - 6H(V3).

    Equals 4 I(X1;Y1) + 2 I(X2;Y2) + I(X3;Y3) for an invertible channel and
    never exceeds the right side of the (4, 2, 1) facet.
    """
    hv = t.hv
    return 4 * t.H(0) + 2 * t.H(1) + t.H(2) - 3 * hv[0] - 5 * hv[1] - 6 * hv[2]
