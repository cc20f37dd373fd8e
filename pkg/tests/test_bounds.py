import numpy as np
import pytest

from _oracles import logdet2, many_to_one_oracle, weighted_bound_oracle
from simocap.bounds import (
    corollary_conditions,
    corollary_report,
    many_to_one_bound,
    many_to_one_symmetric,
    new_outer_bound,
    noise_scales,
    outer_components,
    outer_symmetric,
    pair_genie_bound,
    single_user_bound,
    strong_mac_outer,
    symmetric_new_bound,
    two_user_bound,
)
from simocap.channel import (
    GeneralSimoChannel,
    SymmetricSimoChannel,
    generate_strong3,
    generate_symmetric,
    scaled_links,
)
from simocap.gdof import gdof_theorem
from simocap.polytope import default_directions, support
from simocap.rates import decode_all_region, inner_symmetric


def rand_general(rng, K, N, log2_p=(0, 12)):
    H = rng.standard_normal((K, K, N)) + 1j * rng.standard_normal((K, K, N))
    return GeneralSimoChannel(H, 2.0 ** rng.uniform(*log2_p, K))


def sym_channel(N, rho, alpha, seed=0):
    return generate_symmetric(N, rho, alpha, seed)


def test_single_user_examples():
    assert single_user_bound(sym_channel(2, 3.0, 0.5)) == pytest.approx(2.0, abs=1e-12)
    ch = generate_strong3(0)
    zero = GeneralSimoChannel(ch.H, [0, 0, 0])
    assert single_user_bound(zero) == 0.0
    big = single_user_bound(sym_channel(2, 2.0**30, 0.5))
    assert big == pytest.approx(30 + np.log2(1 + 2.0**-30), abs=1e-12)


def test_many_to_one_zero_power():
    ch = rand_general(np.random.default_rng(0), 3, 2)
    assert many_to_one_bound(GeneralSimoChannel(ch.H, [0, 0, 0])) == 0.0


def test_many_to_one_decoupled_pair():
    H = np.zeros((2, 2, 1), dtype=complex)
    H[0, 0] = 0.7 + 0.2j
    H[1, 1] = -1.3j
    H[1, 0] = 5.0
    ch = GeneralSimoChannel(H, [10.0, 20.0])
    ref = np.log2(1 + 10 * abs(H[0, 0, 0]) ** 2) + np.log2(1 + 20 * abs(H[1, 1, 0]) ** 2)
    assert many_to_one_bound(ch) == pytest.approx(ref, abs=1e-12)


def test_many_to_one_matches_conditional_entropies():
    rng = np.random.default_rng(1)
    for _ in range(100):
        ch = rand_general(rng, 3, 2)
        assert many_to_one_bound(ch) == pytest.approx(many_to_one_oracle(scaled_links(ch)),
                                                      abs=1e-9)


def test_many_to_one_matches_closed_form():
    rng = np.random.default_rng(2)
    for _ in range(50):
        ch = rand_general(rng, 4, 3)
        H, P = ch.H, ch.P
        Q = np.eye(3) + sum(P[i] * np.outer(H[0, i], H[0, i].conj()) for i in range(1, 4))
        t1 = logdet2(Q + P[0] * np.outer(H[0, 0], H[0, 0].conj())) - logdet2(Q)
        g = [np.linalg.norm(H[i, i]) ** 2 * P[i] for i in range(1, 4)]
        t2 = sum(np.log2(1 + x) for x in g)
        M = np.eye(3) + sum(P[i] / (1 + g[i - 1]) * np.outer(H[0, i], H[0, i].conj())
                            for i in range(1, 4))
        assert many_to_one_bound(ch) == pytest.approx(t1 + t2 + logdet2(M), abs=1e-9)


def test_new_bound_zero_power_and_weights():
    ch = rand_general(np.random.default_rng(3), 3, 2)
    wb = new_outer_bound(GeneralSimoChannel(ch.H, [0, 0, 0]))
    assert wb.value == pytest.approx(0.0, abs=1e-15)
    assert new_outer_bound(ch).weights == (1, 2, 1)
    assert new_outer_bound(rand_general(np.random.default_rng(4), 5, 4)).weights == (1, 2, 2, 2, 1)


def test_new_bound_tiny_powers_go_to_zero():
    ch = rand_general(np.random.default_rng(5), 4, 3)
    assert new_outer_bound(GeneralSimoChannel(ch.H, np.full(4, 1e-12))).value < 1e-9


@pytest.mark.parametrize("K,N", [(3, 2), (4, 3), (4, 2), (5, 2)])
def test_new_bound_matches_raw_covariances(K, N):
    rng = np.random.default_rng(10 * K + N)
    for _ in range(30):
        ch = rand_general(rng, K, N)
        ref = weighted_bound_oracle(scaled_links(ch))
        assert new_outer_bound(ch).value == pytest.approx(ref, abs=1e-9)


def test_new_bound_symmetric_instance_matches_oracle():
    ch = sym_channel(2, 1e4, 0.7, seed=3)
    ref = weighted_bound_oracle(scaled_links(ch))
    assert new_outer_bound(ch.to_general()).value == pytest.approx(ref, abs=1e-9)


def _slope(fn, N, alpha, lo, hi, seed=0):
    ch = sym_channel(N, 2.0**lo, alpha, seed)
    return (fn(ch.with_params(snr=2.0**hi)) - fn(ch)) / (hi - lo)


def test_new_bound_slope_alpha_025():
    assert _slope(symmetric_new_bound, 2, 0.25, 20, 30) == pytest.approx(0.875, abs=0.02)


def test_new_bound_slope_alpha_05():
    assert _slope(symmetric_new_bound, 2, 0.5, 40, 60) == pytest.approx(0.75, abs=0.02)


def test_new_bound_at_unit_snr():
    v = symmetric_new_bound(sym_channel(2, 1.0, 0.5))
    assert np.isfinite(v) and v >= 0


def test_two_user_interference_free():
    H = np.zeros((3, 3, 2), dtype=complex)
    for j in range(3):
        H[j, j, 0] = 1
    ch = GeneralSimoChannel(H, np.full(3, 1000.0))
    assert two_user_bound(ch, (0, 1)) == pytest.approx(np.log2(1001), abs=1e-12)


def test_two_user_orthogonal_alpha_one():
    rho = 2.0**20
    H = np.zeros((2, 2, 2), dtype=complex)
    H[0, 0] = [1, 0]
    H[0, 1] = [0, 1]
    H[1, 1] = [1, 0]
    H[1, 0] = [0, 1]
    ch = SymmetricSimoChannel(H, rho, 1.0)
    ref = 0.5 * np.log2((1 + rho) ** 2) + 0.5 * np.log2(1 + rho / (1 + rho))
    assert two_user_bound(ch, (0, 1)) == pytest.approx(ref, abs=1e-12)
    assert ref == pytest.approx(20.5, abs=1e-5)


def test_two_user_det_ratio():
    ch = sym_channel(2, 1e5, 0.6, seed=1)
    j, k = 2, 0
    M = (np.eye(2) + ch.inr * np.outer(ch.H[j, k], ch.H[j, k].conj())
         + ch.snr * np.outer(ch.H[j, j], ch.H[j, j].conj()))
    ref = 0.5 * logdet2(M) + 0.5 * np.log2(1 + ch.snr / (1 + ch.inr))
    assert two_user_bound(ch, (j, k)) == pytest.approx(ref, abs=1e-9)
    with pytest.raises(ValueError):
        two_user_bound(ch, (1, 1))


def _strong_channel(norms, cs):
    """Receiver k gets interferers with the given norms and correlation."""
    H = np.zeros((3, 3, 2), dtype=complex)
    for k in range(3):
        l, m = (i for i in range(3) if i != k)
        H[k, k] = [1, 0]
        H[k, l] = norms[k][0] * np.array([1, 0])
        H[k, m] = norms[k][1] * np.array([cs[k], np.sqrt(1 - abs(cs[k]) ** 2)])
    return GeneralSimoChannel(H, np.full(3, 100.0), normalized_direct=True)


def test_noise_scale_examples():
    ch = _strong_channel([(2, 2), (0.5, 3), (1, 1)], [0, 0, 0])
    a = noise_scales(ch).as_tuple()
    assert a[0] == pytest.approx(1.0)
    assert a[1] == pytest.approx(0.5)


def test_noise_scale_formula():
    ch = _strong_channel([(2, 3), (0.9, 1.5), (4, 0.3)], [0.8, 0.2j, 0.99])
    for k, a in enumerate(noise_scales(ch).as_tuple()):
        l, m = (i for i in range(3) if i != k)
        nl, nm = np.linalg.norm(ch.H[k, l]), np.linalg.norm(ch.H[k, m])
        c = np.vdot(ch.H[k, l], ch.H[k, m]) / (nl * nm)
        assert a == pytest.approx(min(1, np.sqrt(1 - abs(c) ** 2) * max(nl, nm), min(nl, nm)))


def test_strong_region_unmodified_when_scales_are_one():
    ch = _strong_channel([(2, 2), (3, 1.5), (1, 1)], [0, 0.3, 0])
    a, region = strong_mac_outer(ch)
    assert a.as_tuple() == (1.0, 1.0, 1.0)
    inner = decode_all_region(ch)
    for d in default_directions(3, n_random=20):
        assert support(region, d) == pytest.approx(support(inner, d), abs=1e-9)


def test_corollary_examples():
    assert corollary_conditions(_strong_channel([(1, 1)] * 3, [0, 0, 0]))
    c = np.sqrt(0.9)
    assert not corollary_conditions(_strong_channel([(2, 2)] * 3, [c, c, c]))
    assert corollary_report(_strong_channel([(2, 2), (2, 2), (2, 2)], [0, c, 0])) == (
        True, False, True)
    assert not corollary_conditions(_strong_channel([(0.5, 0.5)] * 3, [0, 0, 0]))


@pytest.mark.parametrize("seed", range(20))
def test_strong_region_contains_decode_all(seed):
    ch = generate_strong3(seed, cross_range=(0.2, 3.0), max_c_sq=0.9)
    _, region = strong_mac_outer(ch)
    inner = decode_all_region(ch)
    for d in default_directions(3, n_random=10, seed=seed):
        assert support(region, d) >= support(inner, d) - 1e-9


@pytest.mark.parametrize("seed", range(20))
def test_corollary_gives_capacity(seed):
    ch = generate_strong3(seed)
    assert corollary_conditions(ch)
    a, region = strong_mac_outer(ch)
    assert a.as_tuple() == (1.0, 1.0, 1.0)
    inner = decode_all_region(ch)
    for d in default_directions(3, n_random=10, seed=seed):
        assert support(region, d) == pytest.approx(support(inner, d), abs=1e-9)


def test_outer_examples_slopes():
    N = 2
    s = _slope(outer_symmetric, N, 1.6, 40, 60)
    assert s == pytest.approx(1.0, abs=0.02)
    s = _slope(many_to_one_symmetric, N, 1.0, 40, 60)
    assert s == pytest.approx(N / (N + 1), abs=0.02)


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0, 1.25, 1.5])
def test_many_to_one_slope(N, alpha):
    expected = N * alpha / (N + 1) if alpha >= 1 else 1 - alpha / (N + 1)
    assert _slope(many_to_one_symmetric, N, alpha, 40, 60) == pytest.approx(expected, abs=0.02)


def test_outer_above_inner_sweep():
    rng = np.random.default_rng(11)
    for seed in range(40):
        N = int(rng.integers(1, 4))
        ch = sym_channel(N, 2.0 ** rng.uniform(0, 50), rng.uniform(0, 2.5), seed)
        assert outer_symmetric(ch) >= inner_symmetric(ch) - 1e-9


def test_pair_bound_is_component_and_valid():
    ch = sym_channel(2, 2.0**30, 0.1, seed=0)
    comps = outer_components(ch)
    assert comps["pair_genie_sym"] == pair_genie_bound(ch)
    assert set(comps) >= {"single_user", "two_user_min", "many_to_one_sym", "new_bound_sym",
                          "strong_mac_sym"}
    assert comps["pair_genie_sym"] >= inner_symmetric(ch) - 1e-9


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 1.0, 1.2, 1.6])
def test_outer_slope_tracks_gdof(alpha):
    s = _slope(outer_symmetric, 2, alpha, 40, 60)
    assert s == pytest.approx(float(gdof_theorem(2, alpha)), abs=0.03)
