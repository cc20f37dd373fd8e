"""Outer bounds on the symmetric rate and on the capacity region.

General-channel bounds take a ``GeneralSimoChannel``; symmetric channels are
converted with ``SymmetricSimoChannel.to_general``. Since every expression
depends on ``sqrt(P_i) H_ji`` only, all formulas below work on the scaled
link vectors ``A[j, i]`` and never invert a power.
"""

import itertools
from dataclasses import dataclass
from math import factorial

import numpy as np

from .channel import GeneralSimoChannel, SymmetricSimoChannel, as_general, scaled_links
from .linalg import logdet_eye_plus, whiten_columns
from .polytope import Polytope
from .rates import _bounds_to_polytope, mac_bounds, symmetric_point


@dataclass(frozen=True)
class WeightedRateBound:
    """``sum_k weights[k] * R_k <= value``."""

    weights: tuple
    value: float

    @property
    def total_weight(self):
        return float(sum(self.weights))


@dataclass(frozen=True)
class NoiseScales3:
    a1: float
    a2: float
    a3: float

    def as_tuple(self):
        return (self.a1, self.a2, self.a3)


def single_user_bound(ch):
    """log2(1 + rho ||H_jj||^2), minimized over users."""
    A = scaled_links(ch)
    return float(min(np.log2(1 + np.vdot(A[j, j], A[j, j]).real) for j in range(ch.K)))


def _cols(A, j, users):
    if not users:
        return np.zeros((A.shape[2], 0), dtype=complex)
    return np.column_stack([A[j, i] for i in users])


def many_to_one_bound(ch):
    """Sum-rate bound with receiver 0 the only one hit by interference.

    Three terms: receiver 0 treating interference as noise, the
    interference-free single-user rates of users 1..K-1, and the residual
    interference after those users are decoded.
    """
    ch = as_general(ch)
    A = scaled_links(ch)
    K = ch.K
    others = list(range(1, K))
    W = _cols(A, 0, others)
    t1 = logdet_eye_plus(np.hstack([W, A[0, 0][:, None]])) - logdet_eye_plus(W)
    g = np.array([np.vdot(A[i, i], A[i, i]).real for i in others])
    t2 = float(np.sum(np.log2(1 + g)))
    t3 = logdet_eye_plus(W / np.sqrt(1 + g)[None, :])
    return t1 + t2 + t3


def _reorder(ch, j):
    """Relabel users so that user j comes first."""
    order = [j] + [i for i in range(ch.K) if i != j]
    return ch.permuted(order)


def many_to_one_symmetric(ch):
    """min over the interfered receiver of the sum bound, divided by K."""
    g = as_general(ch)
    return min(many_to_one_bound(_reorder(g, j)) for j in range(g.K)) / g.K


def two_user_bound(ch, pair):
    """Symmetric-rate bound from the two users in ``pair = (j, k)``.

    Receiver j sees user k's interference; the result is half the sum-rate
    bound of that two-user pair.
    """
    j, k = pair
    if j == k:
        raise ValueError("pair must hold two distinct users")
    A = scaled_links(ch)
    t1 = logdet_eye_plus(np.column_stack([A[j, k], A[j, j]]))
    inr = np.vdot(A[j, k], A[j, k]).real
    snr = np.vdot(A[k, k], A[k, k]).real
    return 0.5 * t1 + 0.5 * float(np.log2(1 + snr / (1 + inr)))


def two_user_min(ch):
    return min(two_user_bound(ch, (j, k)) for j in range(ch.K) for k in range(ch.K) if j != k)


def _reduced(A, i, rows, cond_rx, cond_users):
    """Columns C with C C^H = H_rows (P^-1 + G^H G)^-1 H_rows^H (scaled form)."""
    Hi = _cols(A, i, rows)
    G = _cols(A, cond_rx, cond_users)
    return whiten_columns(Hi, G)


def new_outer_bound(ch):
    """Weighted sum bound R_1 + 2(R_2 + ... + R_{K-1}) + R_K <= value.

    With K = 2 the middle sum is empty and the bound is the two-user
    R_1 + R_2 bound of the same genie construction.
    """
    ch = as_general(ch)
    A = scaled_links(ch)
    K = ch.K
    if K < 2:
        raise ValueError("need at least two users")
    first, last = 0, K - 1

    def scaled(j, i, by_rx, by_user):
        g = np.vdot(A[by_rx, by_user], A[by_rx, by_user]).real
        return A[j, i] / np.sqrt(1 + g)

    t1 = logdet_eye_plus(np.column_stack(
        [A[first, i] for i in range(1, K)] + [scaled(first, first, last, first)]))
    t2 = logdet_eye_plus(np.column_stack(
        [A[last, i] for i in range(K - 1)] + [scaled(last, last, first, last)]))
    value = t1 + t2
    for i in range(1, K - 1):
        # 0-based user i; user sets follow the block definitions.
        set1 = list(range(0, i + 1))
        set2 = list(range(i + 1, K))
        set3 = [K - 1] + list(range(1, i + 1))
        set4 = [0] + list(range(i + 1, K - 1))
        c1 = _reduced(A, i, set1, last, set1)
        c2 = _reduced(A, i, set2, first, set2)
        c3 = _reduced(A, i, set3, first, set3)
        c4 = _reduced(A, i, set4, last, set4)
        value += logdet_eye_plus(np.hstack([c1, c2]))
        value += logdet_eye_plus(np.hstack([c3, c4]))
    weights = (1,) + (2,) * (K - 2) + (1,)
    return WeightedRateBound(weights, float(value))


def _orderings(K):
    if factorial(K) <= 24:
        return list(itertools.permutations(range(K)))
    rot = [tuple(np.roll(np.arange(K), s)) for s in range(K)]
    return rot + [r[::-1] for r in rot]


def symmetric_new_bound(ch):
    """Symmetric-rate bound from the weighted bound, divided by its weight 2N.

    Each relabelling of the users gives a valid bound; the smallest is kept
    (all of them for K <= 4, rotations and reflections beyond that).
    """
    g = as_general(ch)
    best = np.inf
    for order in _orderings(g.K):
        wb = new_outer_bound(g.permuted(order))
        best = min(best, wb.value / wb.total_weight)
    return float(best)


def pair_genie_bound(ch):
    """Symmetric-rate bound from every two-user subchannel.

    Handing the remaining users' signals to both receivers as a genie leaves
    a two-user channel, whose weighted bound R_j + R_k <= value still holds.
    """
    g = as_general(ch)
    if g.K < 3:
        return symmetric_new_bound(g)
    return float(min(new_outer_bound(g.subchannel(pair)).value / 2
                     for pair in itertools.combinations(range(g.K), 2)))


def noise_scales(ch3):
    """The three noise reductions a_k of the strong-interference bound."""
    g = as_general(ch3)
    if g.K != 3 or g.N != 2:
        raise ValueError("needs a 3-user channel with 2 receive antennas")
    out = []
    for k in range(3):
        l, m = (i for i in range(3) if i != k)
        nl, nm = np.linalg.norm(g.H[k, l]), np.linalg.norm(g.H[k, m])
        if nl == 0 or nm == 0:
            out.append(0.0)
            continue
        c = np.vdot(g.H[k, l], g.H[k, m]) / (nl * nm)
        s = np.sqrt(max(0.0, 1 - abs(c) ** 2))
        out.append(float(min(1.0, s * max(nl, nm), min(nl, nm))))
    return NoiseScales3(*out)


def strong_mac_bounds(ch3):
    """Per-receiver MAC bounds with noise a_k^2 I (powers divided by a_k^2)."""
    g = as_general(ch3)
    a = noise_scales(g).as_tuple()
    A = scaled_links(g)
    return a, [mac_bounds(None, A[k].T / a[k]) for k in range(3)]


def strong_mac_outer(ch3):
    """Outer region: intersection of three noise-reduced MAC regions."""
    a, per_rx = strong_mac_bounds(ch3)
    blocks = [_bounds_to_polytope(b, 3) for b in per_rx]
    region = Polytope(np.vstack([p.A for p in blocks]), np.concatenate([p.b for p in blocks]),
                      np.ones(3, dtype=bool))
    return NoiseScales3(*a), region


def strong_mac_symmetric(ch3):
    _, per_rx = strong_mac_bounds(ch3)
    return min(symmetric_point(b)[0] for b in per_rx)


def corollary_report(ch3, tol=1e-12):
    """Per-receiver check that both interferers can be decoded at full noise."""
    g = as_general(ch3)
    if g.K != 3 or g.N != 2:
        raise ValueError("needs a 3-user channel with 2 receive antennas")
    out = []
    for k in range(3):
        l, m = (i for i in range(3) if i != k)
        nl, nm = np.linalg.norm(g.H[k, l]), np.linalg.norm(g.H[k, m])
        if min(nl, nm) < 1 - tol:
            out.append(False)
            continue
        c2 = abs(np.vdot(g.H[k, l], g.H[k, m])) ** 2 / (nl * nm) ** 2
        out.append(bool(1 - c2 >= min(1 / nl**2, 1 / nm**2) - tol))
    return tuple(out)


def corollary_conditions(ch3, tol=1e-12):
    """True when every receiver can decode all messages at full noise."""
    return all(corollary_report(ch3, tol))


def outer_components(ch):
    """Each symmetric-rate outer bound, by name."""
    out = {
        "single_user": single_user_bound(ch),
        "two_user_min": two_user_min(ch),
        "many_to_one_sym": many_to_one_symmetric(ch),
        "new_bound_sym": symmetric_new_bound(ch),
        "pair_genie_sym": pair_genie_bound(ch),
    }
    if ch.K == 3 and ch.N == 2:
        out["strong_mac_sym"] = strong_mac_symmetric(ch)
    return out


def outer_symmetric(ch):
    """Smallest of all implemented symmetric-rate outer bounds."""
    return min(outer_components(ch).values())
