"""Generalized degrees of freedom, O(1) capacity, slopes and gap scans.

Closed forms accept ``fractions.Fraction`` arguments and then evaluate
exactly; floats give floats.
"""

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import outer_symmetric
from .channel import (
    GramSpec3,
    generate_completely_symmetric3,
    generate_symmetric,
    random_gram3,
)
from .errors import CertificateViolated, DegenerateChannel
from .linalg import logdet_eye_plus, whiten_against
from .rates import inner_symmetric

DEFAULT_RHO_PAIR = (2.0**40, 2.0**60)


def breakpoints(N):
    """The four alpha values where the GDOF curve changes slope."""
    return (Fraction(1, 2), Fraction(N + 1, 2 * N + 1), Fraction(1), Fraction(N + 1, N))


def gdof_theorem(N, alpha):
    """Symmetric GDOF per user of the (N+1)-user 1xN SIMO channel."""
    if N < 1 or alpha < 0:
        raise ValueError("need N >= 1 and alpha >= 0")
    b1, b2, b3, b4 = breakpoints(N)
    if alpha <= b1:
        return 1 - alpha / N
    if alpha <= b2:
        return Fraction(N - 1, N) + alpha / N
    if alpha <= b3:
        return 1 - alpha / (N + 1)
    if alpha <= b4:
        return N * alpha / (N + 1)
    return Fraction(1) if isinstance(alpha, Fraction) else 1.0


def gdof_tin(alpha):
    """GDOF of treating interference as noise."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return max(1 - alpha, 0)


def gdof_orthogonal(N):
    """Time division among the K = N+1 users: each gets 1/K of the time.

    During its slot a user can boost its power by K, so the rate is
    (1/K) log(1 + K rho) and the slope is 1/K.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    return Fraction(1, N + 1)


def gdof_many_to_one(N, alpha):
    """Slope of the many-to-one sum bound divided by K."""
    if alpha <= 1:
        return 1 - alpha / (N + 1)
    return N * alpha / (N + 1)


def gdof_new_bound(N, alpha):
    """Slope of the weighted bound divided by 2N, for alpha <= (N+1)/(2N+1)."""
    return max(1 - alpha / N, Fraction(N - 1, N) + alpha / N)


@dataclass(frozen=True)
class GdofPoint:
    N: int
    alpha: float
    d_sym: float

    @classmethod
    def at(cls, N, alpha):
        return cls(N, alpha, float(gdof_theorem(N, alpha)))


def o1_capacity(N, log_snr, log_inr):
    """Symmetric capacity up to a constant, in the same log units as the inputs."""
    if log_snr <= 0:
        raise ValueError("log_snr must be positive")
    S, I = log_snr, log_inr
    if I < 0:
        return S
    if I < S / 2:
        return S - I / N
    if I <= (N + 1) / (2 * N + 1) * S:
        return (N - 1) / N * S + I / N
    if I <= S:
        return S - I / (N + 1)
    if I <= (N + 1) / N * S:
        return N / (N + 1) * I
    return S


# -- lemma checks -----------------------------------------------------------

@dataclass(frozen=True)
class SlopeReport:
    slope: float
    predicted: float
    error: float
    values: tuple
    log2_rho: tuple


def _check_pair(H1, H2, alpha, beta):
    H1 = np.atleast_2d(np.asarray(H1, dtype=complex))
    H2 = np.atleast_2d(np.asarray(H2, dtype=complex))
    N = H1.shape[0]
    if H2.shape[0] != N:
        raise DegenerateChannel("H1 and H2 must have the same number of rows")
    r1, r2 = H1.shape[1], H2.shape[1]
    if alpha < beta:
        raise DegenerateChannel("need alpha >= beta")
    if r1 > N or r2 > N or r1 + r2 < N:
        raise DegenerateChannel("need r1, r2 <= N and r1 + r2 >= N")
    if np.linalg.matrix_rank(H1) < r1 or np.linalg.matrix_rank(H2) < r2:
        raise DegenerateChannel("H1 or H2 is column rank deficient")
    if np.linalg.matrix_rank(np.hstack([H1, H2])) < N:
        raise DegenerateChannel("H1 and H2 together do not span the receive space")
    return H1, H2, N, r1, r2


def _slope(f, rho_pair):
    l1, l2 = np.log2(rho_pair[0]), np.log2(rho_pair[1])
    if not l2 > l1:
        raise ValueError("rho_pair must be increasing")
    v1, v2 = f(rho_pair[0]), f(rho_pair[1])
    return (v2 - v1) / (l2 - l1), (v1, v2), (l1, l2)


def lemma1_value(H1, H2, alpha, beta, rho):
    """log2 det(I + rho^alpha H1 H1^H + rho^beta H2 H2^H)."""
    return logdet_eye_plus(np.hstack([rho ** (alpha / 2) * H1, rho ** (beta / 2) * H2]))


def lemma2_value(H1, H2, alpha, beta, rho):
    """log2 det(I + (I + rho^beta H2 H2^H)^-1 rho^alpha H1 H1^H), by whitening."""
    return logdet_eye_plus(whiten_against(rho ** (alpha / 2) * H1, rho ** (beta / 2) * H2))


def verify_lemma1(H1, H2, alpha, beta, rho_pair=DEFAULT_RHO_PAIR):
    H1, H2, N, r1, _ = _check_pair(H1, H2, alpha, beta)
    slope, vals, logs = _slope(lambda r: lemma1_value(H1, H2, alpha, beta, r), rho_pair)
    pred = r1 * alpha + (N - r1) * beta
    return SlopeReport(slope, pred, abs(slope - pred), vals, logs)


def verify_lemma2(H1, H2, alpha, beta, rho_pair=DEFAULT_RHO_PAIR):
    H1, H2, N, r1, r2 = _check_pair(H1, H2, alpha, beta)
    slope, vals, logs = _slope(lambda r: lemma2_value(H1, H2, alpha, beta, r), rho_pair)
    pred = r1 * alpha + (N - r1 - r2) * beta
    return SlopeReport(slope, pred, abs(slope - pred), vals, logs)


# -- numeric GDOF -----------------------------------------------------------

def estimate_gdof_numeric(rate_fn, N, alpha, rho_pair=DEFAULT_RHO_PAIR, seeds=range(5),
                          channel_fn=None):
    """Median over seeds of the slope of ``rate_fn`` against log2(rho).

    ``channel_fn(N, snr, alpha, seed)`` builds the channel (default
    ``generate_symmetric``); the directions stay fixed across the two SNRs.
    """
    rho1, rho2 = rho_pair
    if not rho2 > rho1 or rho2 / rho1 < 2.0**10:
        raise ValueError("rho_pair must increase by a factor of at least 2**10")
    channel_fn = channel_fn or generate_symmetric
    dl = np.log2(rho2) - np.log2(rho1)
    slopes = []
    for s in seeds:
        ch = channel_fn(N, rho1, alpha, s)
        slopes.append((rate_fn(ch.with_params(snr=rho2)) - rate_fn(ch)) / dl)
    if not slopes:
        raise ValueError("need at least one seed")
    return float(np.median(slopes))


# -- gap certificate --------------------------------------------------------

def certificate(c_sq):
    """Gap guarantee in bits for interferer correlation |c|^2."""
    if c_sq >= 1:
        return np.inf
    return max(3.0, 8 / 3 - np.log2(1 - c_sq) / 3)


def _rx0_blocks(ch):
    H = ch.H
    return np.column_stack([H[0, 1], H[0, 2]]), H[0, 0][:, None]


def interferer_logdet_closed_form(inr, c):
    """log2(1 + 2 inr + inr^2 (1 - |c|^2)) for two unit interferers."""
    return float(np.log2(1 + 2 * inr + inr**2 * (1 - abs(c) ** 2)))


def loosened_weighted_bound(ch):
    """Loosened weighted bound (3 users, 2 antennas, identical geometry).

    The loosening replaces rho^a G (I + rho^a B^H B)^-1 G^H by G G^H, which
    needs the smallest eigenvalue of B^H B to be at least 1 - rho^-a. With
    interferer correlation c that eigenvalue is 1 - |c|, so for c != 0 and
    large INR the result can fall below an achievable rate. Kept for
    inspection only; ``gap_point`` does not use it.
    """
    G, d = _rx0_blocks(ch)
    rho, inr = ch.snr, ch.inr
    t = logdet_eye_plus(np.hstack([np.sqrt(inr) * G, np.sqrt(rho / inr) * d]))
    return 0.5 * t + 0.5 * (2 + np.log2(1 + rho / inr))


def loosened_many_to_one(ch):
    """Symmetric-rate bound from loosening the many-to-one bound (3 users)."""
    G, d = _rx0_blocks(ch)
    rho, inr = ch.snr, ch.inr
    full = logdet_eye_plus(np.hstack([np.sqrt(inr) * G, np.sqrt(rho) * d]))
    intf = logdet_eye_plus(np.sqrt(inr) * G)
    resid = logdet_eye_plus(np.sqrt(inr / rho) * G)
    return (full - intf) / 3 + 2 / 3 * np.log2(1 + rho) + resid / 3


@dataclass(frozen=True)
class GapRow:
    log2_rho: float
    alpha: float
    c_sq: float
    seed: int
    inner_bits: float
    outer_bits: float
    gap_bits: float
    certificate_bits: float

    @property
    def violated(self):
        return self.gap_bits > self.certificate_bits + 1e-6


GAP_COLUMNS = ("log2_rho", "alpha", "c_sq", "seed", "inner_bits", "outer_bits", "gap_bits",
               "certificate_bits")


@dataclass
class GapReport:
    rows: list = field(default_factory=list)

    @property
    def violations(self):
        return [r for r in self.rows if r.violated]

    @property
    def max_gap(self):
        return max(r.gap_bits for r in self.rows)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(GAP_COLUMNS)
        for r in self.rows:
            w.writerow([format_number(getattr(r, c)) for c in GAP_COLUMNS])
        return buf.getvalue()

    def to_json(self):
        return json.dumps([asdict(r) for r in self.rows], indent=1)


def format_number(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


@dataclass(frozen=True)
class GapGrid:
    """Grid for ``gap_scan``.

    ``grams`` holds GramSpec3 instances or plain |c|^2 values; a plain value
    gets real ``c = sqrt(c_sq)`` and a seed-dependent pair (c1, c2).
    """

    log2_rho: tuple
    alpha: tuple
    grams: tuple
    seeds: tuple

    def points(self):
        for l in self.log2_rho:
            for a in self.alpha:
                for g in self.grams:
                    for s in self.seeds:
                        yield l, a, g, s

    def __len__(self):
        return len(self.log2_rho) * len(self.alpha) * len(self.grams) * len(self.seeds)


def gap_point(log2_rho, alpha, gram, seed):
    """Inner bound, outer bound and certificate at one grid point."""
    if isinstance(gram, GramSpec3):
        c_sq = float(gram.c_sq)
    else:
        c_sq = float(gram)
        gram = random_gram3(c_sq, np.random.default_rng([int(seed), 7]))
    ch = generate_completely_symmetric3(2.0**log2_rho, alpha, gram, seed)
    inner = inner_symmetric(ch)
    outer = min(outer_symmetric(ch), loosened_many_to_one(ch))
    return GapRow(float(log2_rho), float(alpha), c_sq, int(seed), inner, outer,
                  outer - inner, certificate(c_sq))


def gap_scan(grid, raise_on_violation=True, map_fn=map):
    """Evaluate every grid point and check the gap certificate.

    Raises
    ------
    CertificateViolated
        With the first violating row attached, if any gap exceeds its
        certificate by more than 1e-6.
    """
    if len(grid) == 0:
        raise ValueError("empty grid")
    rows = list(map_fn(lambda p: gap_point(*p), list(grid.points())))
    report = GapReport(rows)
    bad = report.violations
    if bad and raise_on_violation:
        raise CertificateViolated(f"gap exceeds certificate at {bad[0]}", report)
    return report
