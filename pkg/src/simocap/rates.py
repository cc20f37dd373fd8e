"""Achievable symmetric rates: decode-all, Han-Kobayashi split, and TIN.

Every log-det here has the form ``log2 det(I + sum_k p_k h_k h_k^H)`` and is
evaluated from the columns ``sqrt(p_k) h_k`` (see ``linalg.logdet_eye_plus``)
so that powers near 2**60 do not wash out the identity.
"""

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import scaled_links
from .errors import NonPositiveDefinite
from .linalg import hermitian_part, logdet_eye_plus
from .polytope import Polytope


@dataclass(frozen=True)
class PowerSplit:
    p_private: float
    p_common: float


@dataclass(frozen=True)
class RateAssignment:
    r_private: tuple
    r_common: tuple

    @property
    def total(self):
        return tuple(p + c for p, c in zip(self.r_private, self.r_common))


def subsets(n):
    """Nonempty subsets of range(n) in order of increasing size."""
    return [S for r in range(1, n + 1) for S in itertools.combinations(range(n), r)]


def _columns(vectors):
    if len(vectors) == 0:
        return np.zeros((0, 0), dtype=complex)
    return np.column_stack(vectors)


def mac_bounds(noise_cols, signal_cols):
    """Subset bounds of a MAC with noise ``I + W W^H``.

    Parameters
    ----------
    noise_cols : ndarray, shape (N, m) or None
        Columns of W.
    signal_cols : ndarray, shape (N, n)
        Column k is ``sqrt(P_k) h_k``.

    Returns
    -------
    dict
        ``{S: log2 det(I + W W^H + sum_S P h h^H) - log2 det(I + W W^H)}``.
    """
    signal_cols = np.asarray(signal_cols, dtype=complex)
    n_dim = signal_cols.shape[0]
    if noise_cols is None:
        noise_cols = np.zeros((n_dim, 0), dtype=complex)
    base = logdet_eye_plus(noise_cols)
    out = {}
    for S in subsets(signal_cols.shape[1]):
        out[S] = logdet_eye_plus(np.hstack([noise_cols, signal_cols[:, S]])) - base
    return out


def _bounds_to_polytope(bounds, n):
    A = np.zeros((len(bounds), n))
    b = np.zeros(len(bounds))
    for r, (S, val) in enumerate(bounds.items()):
        A[r, list(S)] = 1.0
        b[r] = val
    return Polytope(A, b, np.ones(n, dtype=bool))


def mac_region(effective_noise, signals):
    """Capacity region of a Gaussian MAC with colored noise.

    Parameters
    ----------
    effective_noise : array_like, shape (N, N)
        Hermitian positive-definite noise covariance.
    signals : list of (vector, power)

    Returns
    -------
    Polytope
        One row ``sum_S R_k <= log2 det(I + Q^-1 sum_S P_k h_k h_k^H)`` per
        nonempty subset S.
    """
    Q = hermitian_part(effective_noise)
    try:
        L = np.linalg.cholesky(Q)
    except np.linalg.LinAlgError as exc:
        raise NonPositiveDefinite("noise covariance is not positive definite") from exc
    if np.any(np.real(np.diag(L)) ** 2 <= 1e-14):
        raise NonPositiveDefinite("noise covariance is not positive definite")
    if any(p < 0 for _, p in signals):
        raise ValueError("powers must be nonnegative")
    cols = _columns([np.sqrt(p) * np.asarray(h, dtype=complex) for h, p in signals])
    white = scipy.linalg.solve_triangular(L, cols, lower=True)
    return _bounds_to_polytope(mac_bounds(None, white), len(signals))


def symmetric_point(bounds):
    """Largest R with (R, ..., R) inside, for 0/1 subset constraints.

    Returns ``(R, S)`` with S the binding subset.
    """
    return min(((val / len(S), S) for S, val in bounds.items()), key=lambda t: t[0])


def decode_all_bounds(ch):
    """Per-receiver MAC bounds when every receiver decodes every message.

    Users whose signal does not reach receiver j at all are left out of
    receiver j's decoding set. Subsets are keyed by global user index.
    """
    A = scaled_links(ch)
    out = []
    for j in range(ch.K):
        present = [i for i in range(ch.K) if i == j or np.any(A[j, i] != 0)]
        local = mac_bounds(None, A[j, present].T)
        out.append({tuple(present[k] for k in S): v for S, v in local.items()})
    return out


def decode_all_region(ch):
    """Intersection of the K per-receiver MAC regions."""
    blocks = [_bounds_to_polytope(b, ch.K) for b in decode_all_bounds(ch)]
    return Polytope(np.vstack([p.A for p in blocks]), np.concatenate([p.b for p in blocks]),
                    np.ones(ch.K, dtype=bool))


def decode_all_symmetric_rate(ch, return_binding=False):
    """Symmetric rate of the decode-all scheme (works for general channels too)."""
    best = None
    for j, bounds in enumerate(decode_all_bounds(ch)):
        r, S = symmetric_point(bounds)
        if best is None or r < best[0]:
            best = (r, j, S)
    return best if return_binding else best[0]


def hk_split(inr):
    """Private power puts the private signal at the unintended noise floor."""
    if inr < 0:
        raise ValueError("inr must be nonnegative")
    p = 1.0 / inr if inr > 1 else 1.0
    return PowerSplit(p, 1.0 - p)


def _private_noise(ch, j, split):
    """Columns of the private interference seen at receiver j."""
    amp = np.sqrt(ch.inr * split.p_private)
    return _columns([amp * ch.H[j, i] for i in range(ch.K) if i != j]).reshape(ch.N, -1)


def hk_private_rate(ch):
    """min_j log2 det(I + (I + private interference)^-1 rho p_p H_jj H_jj^H)."""
    split = hk_split(ch.inr)
    if split.p_private == 0:
        return 0.0
    rates = []
    for j in range(ch.K):
        W = _private_noise(ch, j, split)
        sig = np.sqrt(ch.snr * split.p_private) * ch.H[j, j][:, None]
        rates.append(logdet_eye_plus(np.hstack([W, sig])) - logdet_eye_plus(W))
    return max(0.0, min(rates))


def hk_common_bounds(ch):
    """Common-message MAC bounds at each receiver, private signals as noise."""
    split = hk_split(ch.inr)
    out = []
    for j in range(ch.K):
        W = np.hstack([
            _private_noise(ch, j, split),
            np.sqrt(ch.snr * split.p_private) * ch.H[j, j][:, None],
        ])
        powers = np.full(ch.K, ch.inr * split.p_common)
        powers[j] = ch.snr * split.p_common
        sig = (ch.H[j] * np.sqrt(powers)[:, None]).T
        out.append(mac_bounds(W, sig))
    return out


def hk_common_symmetric_rate(ch, return_binding=False):
    """Largest common rate decodable by every receiver."""
    split = hk_split(ch.inr)
    if split.p_common == 0:
        return (0.0, None, None) if return_binding else 0.0
    best = None
    for j, bounds in enumerate(hk_common_bounds(ch)):
        r, S = symmetric_point(bounds)
        if best is None or r < best[0]:
            best = (max(r, 0.0), j, S)
    return best if return_binding else best[0]


def hk_symmetric_rate(ch):
    return hk_private_rate(ch) + hk_common_symmetric_rate(ch)


def tin_rate(ch):
    """Every receiver treats all interference as noise."""
    A = scaled_links(ch)
    rates = []
    for j in range(ch.K):
        W = np.delete(A[j], j, axis=0).T
        rates.append(logdet_eye_plus(np.hstack([W, A[j, j][:, None]])) - logdet_eye_plus(W))
    return min(rates)


def inner_symmetric(ch):
    """Best of decode-all, Han-Kobayashi and TIN."""
    return max(decode_all_symmetric_rate(ch), hk_symmetric_rate(ch), tin_rate(ch))
