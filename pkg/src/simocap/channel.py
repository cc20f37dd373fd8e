"""SIMO interference channel instances.

Two flavours are provided:

* ``SymmetricSimoChannel``: K = N + 1 users, unit-norm directions, every
  direct link at SNR ``snr`` and every cross link at INR ``snr**alpha``.
* ``GeneralSimoChannel``: arbitrary vectors ``H[j, i]`` (transmitter i to
  receiver j) with per-user powers ``P[i]``.

Only the products ``sqrt(P_i) * H[j, i]`` enter any rate expression, which
``scaled_links`` exposes for both types.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDraw, NotPSD, ZeroVector

NORM_TOL = 1e-9
GENERAL_POSITION = 1 - 1e-6
MAX_REJECTIONS = 100


@dataclass(frozen=True)
class SymmetricSimoChannel:
    """Symmetric (N+1)-user 1xN SIMO interference channel.

    Attributes
    ----------
    H : ndarray, shape (K, K, N)
        ``H[j, i]`` is the direction from transmitter i to receiver j.
    snr : float
        Direct-link SNR (rho).
    alpha : float
        Interference exponent, INR = rho**alpha.
    """

    H: np.ndarray
    snr: float
    alpha: float

    def __post_init__(self):
        H = np.array(self.H, dtype=complex)
        H.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "snr", float(self.snr))
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def K(self):
        return self.H.shape[0]

    @property
    def N(self):
        return self.H.shape[2]

    @property
    def inr(self):
        return self.snr**self.alpha

    @property
    def P(self):
        return np.ones(self.K)

    def link_powers(self):
        """Received power of every link, ``G[j, i]``."""
        G = np.full((self.K, self.K), self.inr)
        np.fill_diagonal(G, self.snr)
        return G

    def with_params(self, snr=None, alpha=None):
        """Same directions at a different operating point."""
        return SymmetricSimoChannel(
            self.H,
            self.snr if snr is None else snr,
            self.alpha if alpha is None else alpha,
        )

    def to_general(self):
        """Equivalent general channel with unit-norm direct links and P = snr."""
        scale = np.full((self.K, self.K), np.sqrt(self.inr / self.snr))
        np.fill_diagonal(scale, 1.0)
        return GeneralSimoChannel(
            self.H * scale[:, :, None], np.full(self.K, self.snr), normalized_direct=True
        )


@dataclass(frozen=True)
class GeneralSimoChannel:
    """K-user SIMO interference channel with explicit vectors and powers."""

    H: np.ndarray
    P: np.ndarray
    normalized_direct: bool = False

    def __post_init__(self):
        H = np.array(self.H, dtype=complex)
        P = np.array(self.P, dtype=float)
        if H.ndim != 3 or H.shape[0] != H.shape[1]:
            raise ValueError(f"H must have shape (K, K, N), got {H.shape}")
        if H.shape[0] < 2:
            raise ValueError("need at least two users")
        if P.shape != (H.shape[0],):
            raise ValueError("P must hold one power per user")
        H.setflags(write=False)
        P.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "P", P)

    @property
    def K(self):
        return self.H.shape[0]

    @property
    def N(self):
        return self.H.shape[2]

    def link_powers(self):
        return np.tile(self.P, (self.K, 1))

    def permuted(self, order):
        """Relabel users so that new user a is old user ``order[a]``."""
        order = np.asarray(order)
        return GeneralSimoChannel(
            self.H[np.ix_(order, order)], self.P[order], self.normalized_direct
        )

    def subchannel(self, users):
        return self.permuted(users)


def scaled_links(ch):
    """Array ``A[j, i] = sqrt(power_ji) * H[j, i]`` of received signal vectors."""
    return ch.H * np.sqrt(ch.link_powers())[:, :, None]


def as_general(ch):
    if isinstance(ch, GeneralSimoChannel):
        return ch
    return ch.to_general()


def _unit_columns(rng, shape):
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def _max_correlation(H):
    worst = 0.0
    for j in range(H.shape[0]):
        V = H[j]
        norms = np.linalg.norm(V, axis=1)
        if np.any(norms == 0):
            return np.inf
        U = V / norms[:, None]
        C = np.abs(U.conj() @ U.T)
        np.fill_diagonal(C, 0.0)
        worst = max(worst, float(C.max()))
    return worst


def generate_symmetric(N, snr, alpha, seed):
    """Random symmetric channel with i.i.d. complex Gaussian directions.

    The directions depend only on ``(N, seed)``, so sweeping ``snr`` or
    ``alpha`` with a fixed seed keeps the geometry fixed.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if snr <= 0 or alpha < 0:
        raise ValueError("need snr > 0 and alpha >= 0")
    rng = np.random.default_rng(seed)
    K = N + 1
    for _ in range(MAX_REJECTIONS):
        H = _unit_columns(rng, (K, K, N))
        # N = 1 vectors are all collinear; general position is vacuous there.
        if N == 1 or _max_correlation(H) <= GENERAL_POSITION:
            return SymmetricSimoChannel(H, snr, alpha)
    raise DegenerateDraw(f"no general-position draw in {MAX_REJECTIONS} attempts")


@dataclass(frozen=True)
class GramSpec3:
    """Correlations of the ordered triple (interferer a, interferer b, desired).

    ``c = a^H b``, ``c1 = a^H d``, ``c2 = b^H d``.
    """

    c: complex
    c1: complex
    c2: complex

    def matrix(self):
        c, c1, c2 = complex(self.c), complex(self.c1), complex(self.c2)
        return np.array(
            [[1, c, c1], [np.conj(c), 1, c2], [np.conj(c1), np.conj(c2), 1]], dtype=complex
        )

    @property
    def c_sq(self):
        return abs(self.c) ** 2


def realize_gram3(gram, tol=1e-9):
    """Three unit vectors in C^2 with Gram matrix ``gram.matrix()``.

    Returned as rows (a, b, d). This is a Cholesky factorization that is
    allowed to stop at rank two; a residual third pivot above ``tol`` means
    the requested Gram matrix needs three dimensions and is rejected.
    """
    c, c1, c2 = complex(gram.c), complex(gram.c1), complex(gram.c2)
    if max(abs(c), abs(c1), abs(c2)) > 1 + tol:
        raise NotPSD("correlations must have modulus at most 1")
    a = np.array([1, 0], dtype=complex)
    s = np.sqrt(max(0.0, 1 - abs(c) ** 2))
    b = np.array([c, s], dtype=complex)
    if s > tol:
        d1 = (c2 - np.conj(c) * c1) / s
    else:
        if abs(c2 - np.conj(c) * c1) > tol:
            raise NotPSD("collinear interferers require c2 = conj(c) * c1")
        d1 = np.sqrt(max(0.0, 1 - abs(c1) ** 2))
    residual = 1 - abs(c1) ** 2 - abs(d1) ** 2
    if abs(residual) > tol:
        raise NotPSD(f"Gram matrix is not PSD of rank <= 2 (third pivot {residual:.3g})")
    d = np.array([c1, d1], dtype=complex)
    return np.vstack([a, b, d / np.linalg.norm(d)])


def random_gram3(c_sq, rng):
    """Realizable GramSpec3 with real ``c = sqrt(c_sq)`` and random c1, c2."""
    c = np.sqrt(c_sq)
    s = np.sqrt(1 - c_sq)
    r = np.sqrt(rng.uniform())
    c1 = r * np.exp(2j * np.pi * rng.uniform())
    d1 = np.sqrt(1 - r**2) * np.exp(2j * np.pi * rng.uniform())
    c2 = c * c1 + s * d1
    return GramSpec3(complex(c), complex(c1), complex(c2))


# (interferer a, interferer b) per receiver, matching the ordering of the
# correlation definitions: c = H12'H13 = H21'H23 = H32'H31.
COMPLETE_SYMMETRY_ORDER = ((1, 2), (0, 2), (1, 0))


def _haar_unitary(rng, n):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def generate_completely_symmetric3(snr, alpha, gram, seed):
    """Three-user, two-antenna channel with identical geometry at every receiver."""
    triple = realize_gram3(gram)
    rng = np.random.default_rng(seed)
    H = np.zeros((3, 3, 2), dtype=complex)
    for j, (ia, ib) in enumerate(COMPLETE_SYMMETRY_ORDER):
        U = _haar_unitary(rng, 2)
        a, b, d = triple @ U.T
        H[j, ia], H[j, ib], H[j, j] = a, b, d
    return SymmetricSimoChannel(H, snr, alpha)


def generate_strong3(seed, cross_range=(1.2, 3.0), max_c_sq=0.2, power=2.0**10):
    """Random three-user, two-antenna general channel with unit direct links.

    Cross-link norms are uniform on ``cross_range`` and the two interferers
    at each receiver have |c|^2 uniform on [0, max_c_sq].
    """
    lo, hi = cross_range
    if not 0 < lo <= hi or not 0 <= max_c_sq < 1:
        raise ValueError("need 0 < lo <= hi and 0 <= max_c_sq < 1")
    rng = np.random.default_rng(seed)
    H = np.zeros((3, 3, 2), dtype=complex)
    for j in range(3):
        k, l = (i for i in range(3) if i != j)
        U = _haar_unitary(rng, 2)
        c = np.sqrt(rng.uniform(0, max_c_sq)) * np.exp(2j * np.pi * rng.uniform())
        H[j, k] = U[:, 0] * rng.uniform(lo, hi)
        H[j, l] = (c * U[:, 0] + np.sqrt(1 - abs(c) ** 2) * U[:, 1]) * rng.uniform(lo, hi)
        d = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        H[j, j] = d / np.linalg.norm(d)
    return GeneralSimoChannel(H, np.full(3, float(power)), normalized_direct=True)


def correlation(ch, j, k, i):
    """Normalized inner product ``H[j,k]^H H[j,i]`` at receiver j."""
    if k == i:
        raise ValueError("need two distinct transmitters")
    x, y = ch.H[j, k], ch.H[j, i]
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ZeroVector("correlation with a zero vector")
    return complex(np.vdot(x, y) / (nx * ny))


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(ch):
    """List every violated invariant of a channel; empty means valid."""
    out = []
    H = ch.H
    if not np.all(np.isfinite(H)):
        out.append("non-finite channel entries")
    norms = np.linalg.norm(H, axis=2)
    if isinstance(ch, SymmetricSimoChannel):
        if ch.K != ch.N + 1:
            out.append(f"K = {ch.K} but N + 1 = {ch.N + 1}")
        if not ch.snr > 0:
            out.append("snr must be positive")
        if not ch.alpha >= 0:
            out.append("alpha must be nonnegative")
        for j, i in zip(*np.nonzero(np.abs(norms - 1) > NORM_TOL)):
            out.append(f"norm of H[{j}][{i}] is {norms[j, i]:.6g}, expected 1")
    else:
        if np.any(ch.P < 0) or not np.all(np.isfinite(ch.P)):
            out.append("powers must be finite and nonnegative")
        if ch.normalized_direct:
            for j in range(ch.K):
                if abs(norms[j, j] - 1) > NORM_TOL:
                    out.append(f"direct link H[{j}][{j}] has norm {norms[j, j]:.6g}")
    if ch.N > 1:
        for j in range(ch.K):
            for k in range(ch.K):
                for i in range(k + 1, ch.K):
                    if norms[j, k] == 0 or norms[j, i] == 0:
                        continue
                    if abs(correlation(ch, j, k, i)) > GENERAL_POSITION:
                        out.append(f"receiver {j}: H[{j}][{k}] and H[{j}][{i}] nearly collinear")
    return ValidationReport(out)


def channel_to_json(ch):
    """Serialize to ``{K, N, snr, alpha, H, P}``; floats round-trip exactly."""
    H = [[[[float(z.real), float(z.imag)] for z in ch.H[j, i]] for i in range(ch.K)]
         for j in range(ch.K)]
    sym = isinstance(ch, SymmetricSimoChannel)
    obj = {
        "K": ch.K,
        "N": ch.N,
        "snr": ch.snr if sym else None,
        "alpha": ch.alpha if sym else None,
        "H": H,
        "P": [float(p) for p in ch.P],
    }
    if not sym:
        obj["normalized_direct"] = bool(ch.normalized_direct)
    return json.dumps(obj)


def channel_from_json(text):
    obj = json.loads(text) if isinstance(text, str) else text
    raw = np.asarray(obj["H"], dtype=float)
    H = raw[..., 0] + 1j * raw[..., 1]
    if obj.get("snr") is not None:
        return SymmetricSimoChannel(H, obj["snr"], obj["alpha"])
    return GeneralSimoChannel(H, obj["P"], bool(obj.get("normalized_direct", False)))
