"""Halfspace polytopes over rate vectors.

A polytope is the set ``{x : A x <= b}`` intersected with ``x_k >= 0`` for
every coordinate flagged in ``nonneg``. Linear programs are solved with a
small dense two-phase simplex using Bland's rule, which is plenty for the
handful of variables and at most a few hundred rows met here.
"""

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, Unbounded

PIVOT_TOL = 1e-9
COEF_TOL = 1e-12
MAX_PIVOTS = 50_000


@dataclass(frozen=True)
class Polytope:
    A: np.ndarray
    b: np.ndarray
    nonneg: np.ndarray

    def __post_init__(self):
        nonneg = np.array(self.nonneg, dtype=bool).ravel()
        A = np.array(self.A, dtype=float).reshape(-1, nonneg.size)
        b = np.array(self.b, dtype=float).ravel()
        if A.shape[0] != b.size:
            raise ValueError("A and b disagree on the number of rows")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("halfspace coefficients must be finite")
        for arr in (A, b, nonneg):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "nonneg", nonneg)

    @classmethod
    def from_halfspaces(cls, halfspaces, dim, nonneg=True):
        rows = [np.asarray(a, dtype=float) for a, _ in halfspaces]
        A = np.vstack(rows) if rows else np.zeros((0, dim))
        b = np.array([bb for _, bb in halfspaces], dtype=float)
        flags = np.full(dim, nonneg, dtype=bool) if np.isscalar(nonneg) else nonneg
        return cls(A, b, flags)

    @property
    def dim(self):
        return self.nonneg.size

    @property
    def halfspaces(self):
        return [(self.A[i].copy(), float(self.b[i])) for i in range(len(self.b))]

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        if np.any(x[self.nonneg] < -tol):
            return False
        return bool(np.all(self.A @ x <= self.b + tol))

    def to_json(self):
        return json.dumps({
            "dim": self.dim,
            "halfspaces": [{"a": a.tolist(), "b": b} for a, b in self.halfspaces],
            "nonneg": self.nonneg.tolist(),
        })

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text) if isinstance(text, str) else text
        hs = [(h["a"], h["b"]) for h in obj["halfspaces"]]
        return cls.from_halfspaces(hs, obj["dim"], np.array(obj["nonneg"], dtype=bool))


# -- simplex ---------------------------------------------------------------

def _pivot(T, r, c):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run_simplex(T, basis, n_allowed):
    """Maximize over tableau ``T`` in place; the last row holds -reduced costs.

    Only columns below ``n_allowed`` may enter. Bland's rule: the entering
    column is the lowest-index improving one, and ratio ties leave by the
    lowest basic index.
    """
    m = T.shape[0] - 1
    for _ in range(MAX_PIVOTS):
        obj = T[-1, :n_allowed]
        improving = np.nonzero(obj < -PIVOT_TOL)[0]
        if improving.size == 0:
            return
        c = improving[0]
        col = T[:m, c]
        rows = np.nonzero(col > PIVOT_TOL)[0]
        if rows.size == 0:
            raise Unbounded("objective is unbounded")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        r = ties[np.argmin(np.asarray(basis)[ties])]
        _pivot(T, r, c)
        basis[r] = c
    raise RuntimeError("simplex did not terminate")


def linprog_max(c, A, b, nonneg):
    """Maximize ``c @ x`` subject to ``A x <= b`` and ``x[nonneg] >= 0``.

    Returns
    -------
    value : float
    x : ndarray
        An optimal point.

    Raises
    ------
    Unbounded, Infeasible
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    nonneg = np.asarray(nonneg, dtype=bool)
    m, n = A.shape
    free = np.nonzero(~nonneg)[0]
    # Free variables are split as x = x+ - x-.
    Aw = np.hstack([A, -A[:, free]])
    cw = np.concatenate([c, -c[free]])
    nw = Aw.shape[1]

    neg = b < 0
    n_art = int(neg.sum())
    ncols = nw + m + n_art
    T = np.zeros((m + 1, ncols + 1))
    sign = np.where(neg, -1.0, 1.0)
    T[:m, :nw] = Aw * sign[:, None]
    T[:m, nw:nw + m] = np.diag(sign)
    T[:m, -1] = b * sign
    basis = list(range(nw, nw + m))
    art_rows = np.nonzero(neg)[0]
    for k, r in enumerate(art_rows):
        T[r, nw + m + k] = 1.0
        basis[r] = nw + m + k

    if n_art:
        # Phase 1: maximize -sum(artificials).
        T[-1, nw + m:ncols] = 1.0
        for r in art_rows:
            T[-1] -= T[r]
        _run_simplex(T, basis, ncols)
        if T[-1, -1] < -1e-7 * max(1.0, np.abs(b).max()):
            raise Infeasible("constraints are infeasible")
        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if basis[r] >= nw + m:
                nz = np.nonzero(np.abs(T[r, :nw + m]) > PIVOT_TOL)[0]
                if nz.size:
                    _pivot(T, r, nz[0])
                    basis[r] = nz[0]
                else:
                    keep[r] = False
        rows = np.concatenate([np.nonzero(keep)[0], [m]])
        T = np.hstack([T[rows, :nw + m], T[rows, -1:]])
        basis = [basis[r] for r in np.nonzero(keep)[0]]
        m = len(basis)

    T[-1] = 0.0
    T[-1, :nw] = -cw
    for r, j in enumerate(basis):
        if j < nw and cw[j] != 0:
            T[-1] += cw[j] * T[r]
    _run_simplex(T, basis, nw + m)

    y = np.zeros(T.shape[1] - 1)
    for r, j in enumerate(basis):
        y[j] = T[r, -1]
    x = y[:n].copy()
    x[free] -= y[n:nw]
    return float(c @ x), x


def support(p, direction):
    """``max d.x`` over the polytope.

    Raises
    ------
    Unbounded
        If the polytope is unbounded in ``direction``.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (p.dim,):
        raise ValueError("direction has wrong dimension")
    value, _ = linprog_max(d, p.A, p.b, p.nonneg)
    return value


# -- row hygiene ----------------------------------------------------------

def _normalize_rows(A, b):
    """Scale each row so its smallest nonzero |coefficient| is 1."""
    A = A.copy()
    b = b.copy()
    A[np.abs(A) < COEF_TOL] = 0.0
    for i in range(A.shape[0]):
        nz = np.abs(A[i][A[i] != 0])
        if nz.size:
            s = nz.min()
            A[i] /= s
            b[i] /= s
    return A, b


def _dedupe(A, b):
    """Drop trivial rows and keep the tightest copy of repeated rows."""
    best = {}
    zero_rows = []
    for i in range(A.shape[0]):
        if not np.any(A[i]):
            zero_rows.append(i)
            continue
        key = tuple(np.round(A[i], 9))
        if key not in best or b[i] < b[best[key]]:
            best[key] = i
    # A zero row 0 <= b is either vacuous or certifies emptiness; keep the latter.
    infeasible = [i for i in zero_rows if b[i] < -1e-9]
    keep = sorted(best.values()) + infeasible[:1]
    return A[keep], b[keep]


def remove_redundant(p, tol=1e-9):
    """Drop halfspaces implied by the others (and by nonnegativity)."""
    A, b = _dedupe(*_normalize_rows(p.A, p.b))
    if np.any(np.all(A == 0, axis=1)):
        return Polytope(A, b, p.nonneg)
    keep = np.ones(A.shape[0], dtype=bool)
    for i in range(A.shape[0]):
        keep[i] = False
        try:
            value, _ = linprog_max(A[i], A[keep], b[keep], p.nonneg)
        except Unbounded:
            keep[i] = True
            continue
        except Infeasible:
            keep[i] = True
            break
        if value > b[i] + tol * max(1.0, abs(b[i])):
            keep[i] = True
    return Polytope(A[keep], b[keep], p.nonneg)


def fm_eliminate(p, var_index, prune=True):
    """Project out coordinate ``var_index`` by Fourier-Motzkin elimination."""
    k = int(var_index)
    if not 0 <= k < p.dim:
        raise IndexError("var_index out of range")
    A, b = p.A, p.b
    if p.nonneg[k]:
        row = np.zeros(p.dim)
        row[k] = -1.0
        A = np.vstack([A, row])
        b = np.append(b, 0.0)
    coef = A[:, k]
    pos = np.nonzero(coef > COEF_TOL)[0]
    neg = np.nonzero(coef < -COEF_TOL)[0]
    zero = np.nonzero(np.abs(coef) <= COEF_TOL)[0]
    rows = [A[zero]]
    rhs = [b[zero]]
    if pos.size and neg.size:
        up = A[pos] / coef[pos, None]
        bu = b[pos] / coef[pos]
        lo = A[neg] / -coef[neg, None]
        bl = b[neg] / -coef[neg]
        rows.append((up[:, None, :] + lo[None, :, :]).reshape(-1, p.dim))
        rhs.append((bu[:, None] + bl[None, :]).ravel())
    A2 = np.delete(np.vstack(rows), k, axis=1)
    b2 = np.concatenate(rhs)
    out = Polytope(A2, b2, np.delete(p.nonneg, k))
    return remove_redundant(out) if prune else out


# -- comparison -----------------------------------------------------------

def default_directions(dim, n_random=200, seed=0):
    """Nonzero vectors of {-1,0,1}^dim followed by seeded unit-sphere directions.

    The grid is ordered sparsest first (coordinate axes, positive before
    negative) so that witnesses are as readable as possible.
    """
    grid = [v for v in itertools.product((1, 0, -1), repeat=dim) if any(v)]
    grid = [np.array(v, dtype=float) for v in sorted(grid, key=lambda v: sum(map(abs, v)))]
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_random, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return np.vstack(grid + [g]) if n_random else np.vstack(grid)


def polytope_equal(p, q, dirs=None, tol=1e-6):
    """Compare two polytopes through their support functions.

    Returns
    -------
    equal : bool
    witness : tuple or None
        ``(direction, support_p, support_q)`` for the first direction that
        disagrees by more than ``tol``.
    """
    if p.dim != q.dim:
        raise ValueError("polytopes live in different dimensions")
    if dirs is None:
        dirs = default_directions(p.dim)
    for d in np.atleast_2d(dirs):
        sp, sq = support(p, d), support(q, d)
        if abs(sp - sq) > tol:
            return False, (d, sp, sq)
    return True, None


def worst_support_gap(p, q, dirs=None):
    """Largest |support(p, d) - support(q, d)| over ``dirs`` and its direction."""
    if dirs is None:
        dirs = default_directions(p.dim)
    worst, where = 0.0, None
    for d in np.atleast_2d(dirs):
        gap = abs(support(p, d) - support(q, d))
        if where is None or gap > worst:
            worst, where = gap, d
    return worst, where
