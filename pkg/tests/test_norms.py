"""Weights, mixed (quasi-)norms, and the randomized theorem verifiers."""

import math

import numpy as np
import pytest

from metaplectic import (
    GridSpec,
    Matrix,
    MixedNormParams,
    TFGrid,
    Weight,
    check_moderate,
    compose_triple,
    counterexample_swap_ratio,
    dilate_table,
    dilation_constant,
    dilation_norm_ratio,
    equivalence_check,
    gaussian,
    mixed_norm,
    modulation_norm,
    random_gaussian_mix,
    stft_matrix,
    swap_rotate,
    tau_wigner_matrix,
)

SPEC = GridSpec.self_dual(1, 32)
G = gaussian(SPEC)


def _random_table(rng, spec=None):
    spec = spec or GridSpec.self_dual(2, 32)
    sig = random_gaussian_mix(spec, rng, terms=3, spread=0.2)
    return TFGrid(spec, sig.samples, provenance="random")


# ---------- weights ----------


def test_polynomial_weight_moderate_family():
    rng = np.random.default_rng(0)
    for s in (1.5, -1.5, 0.0):
        m = Weight.polynomial(s)
        v = Weight.polynomial(abs(s))
        rep = check_moderate(m, v, rng, bound=1.0 + 1e-9)
        assert rep.moderate
    # constant weight trivially moderate with respect to itself
    one = Weight.constant()
    assert check_moderate(one, one, rng, bound=1.0 + 1e-12).moderate


def test_weight_equivalence_bracket():
    # v_s(z) / (1 + |z|^2)^(s/2) stays in [2^(-|s|/2), 2^(|s|/2)]
    rng = np.random.default_rng(1)
    for s in (2.0, -1.0):
        pts = rng.uniform(-5, 5, size=(4000, 2))
        ratio = Weight.polynomial(s)(pts) / (1 + np.sum(pts ** 2, axis=-1)) ** (s / 2)
        assert np.all(ratio >= 2 ** (-abs(s) / 2) - 1e-12)
        assert np.all(ratio <= 2 ** (abs(s) / 2) + 1e-12)


def test_weight_must_be_positive_and_even():
    bad = Weight(lambda pts: pts[..., 0])
    with pytest.raises(ValueError):
        bad(np.zeros((3, 2)))
    rng = np.random.default_rng(2)
    assert Weight.polynomial(1.0).is_even_sampled(rng, dim=2)
    lopsided = Weight(lambda pts: np.exp(pts[..., 0]))
    assert not lopsided.is_even_sampled(rng, dim=2)


# ---------- mixed norms ----------


def test_mixed_norm_matches_two_norm():
    rng = np.random.default_rng(3)
    table = _random_table(rng)
    params = MixedNormParams(p=2.0, q=2.0)
    direct = float(np.sqrt(np.sum(np.abs(table.values) ** 2) * table.spec.cell))
    assert abs(mixed_norm(table, params) - direct) <= 1e-12


def test_mixed_norm_single_cell_closed_form():
    spec = GridSpec(d=2, n=16, extent=8.0)
    vals = np.zeros(spec.shape, dtype=complex)
    vals[3, 7] = 2.0
    table = TFGrid(spec, vals)
    h = spec.spacing
    for p, q in [(1.0, 1.0), (2.0, 1.0), (0.5, 3.0)]:
        want = 2.0 * h ** (1.0 / p) * h ** (1.0 / q)
        assert abs(mixed_norm(table, MixedNormParams(p=p, q=q)) - want) <= 1e-12


def test_mixed_norm_indicator_closed_form():
    # F_a = indicator of [0, a) x [0, 1): mixed norm a^(1/p)
    spec = GridSpec(d=2, n=128, extent=32.0)
    ax = spec.axis()
    for a in (1, 2, 4):
        vals = np.outer((ax >= 0) & (ax < a), (ax >= 0) & (ax < 1)).astype(complex)
        table = TFGrid(spec, vals)
        for p, q in [(2.0, 1.0), (1.0, 2.0), (4.0, 2.0)]:
            assert abs(mixed_norm(table, MixedNormParams(p=p, q=q)) - a ** (1.0 / p)) <= 1e-12


def test_mixed_norm_homogeneous():
    rng = np.random.default_rng(4)
    table = _random_table(rng)
    params = MixedNormParams(p=1.0, q=3.0)
    base = mixed_norm(table, params)
    scaled = TFGrid(table.spec, table.values * (-2.5 + 1.0j))
    assert abs(mixed_norm(scaled, params) - abs(-2.5 + 1.0j) * base) <= 1e-10 * base


def test_mixed_norm_triangle_and_quasi_triangle():
    rng = np.random.default_rng(5)
    spec = GridSpec.self_dual(2, 16)
    for _ in range(20):
        a = _random_table(rng, spec)
        b = _random_table(rng, spec)
        both = TFGrid(spec, a.values + b.values)
        for p, q in [(1.0, 2.0), (2.0, 2.0), (3.0, 1.0)]:
            params = MixedNormParams(p=p, q=q)
            assert mixed_norm(both, params) <= mixed_norm(a, params) + mixed_norm(b, params) + 1e-12
        for p, q in [(0.5, 2.0), (2.0, 0.5), (0.5, 0.5)]:
            params = MixedNormParams(p=p, q=q)
            const = 2.0 ** (1.0 / min(p, q) - 1.0)
            bound = const * (mixed_norm(a, params) + mixed_norm(b, params))
            assert mixed_norm(both, params) <= bound + 1e-12


def test_mixed_norm_infinite_exponents():
    spec = GridSpec(d=2, n=16, extent=8.0)
    vals = np.zeros(spec.shape, dtype=complex)
    vals[2, 3] = 3.0
    vals[5, 9] = -4.0
    table = TFGrid(spec, vals)
    assert mixed_norm(table, MixedNormParams(p=math.inf, q=math.inf)) == 4.0
    h = spec.spacing
    got = mixed_norm(table, MixedNormParams(p=math.inf, q=1.0))
    assert abs(got - (3.0 + 4.0) * h) <= 1e-12


def test_mixed_norm_weighted():
    spec = GridSpec(d=2, n=16, extent=8.0)
    vals = np.zeros(spec.shape, dtype=complex)
    vals[12, 12] = 1.0  # point (2, 2): weight (1 + sqrt(8))
    table = TFGrid(spec, vals)
    params = MixedNormParams(p=1.0, q=1.0, weight=Weight.polynomial(1.0))
    h = spec.spacing
    want = (1.0 + math.sqrt(8.0)) * h * h
    assert abs(mixed_norm(table, params) - want) <= 1e-12


def test_modulation_norm_two_two_is_moyal():
    rng = np.random.default_rng(6)
    for _ in range(5):
        f = random_gaussian_mix(SPEC, rng)
        got = modulation_norm(f, G, MixedNormParams(p=2.0, q=2.0))
        assert abs(got - f.norm() * G.norm()) <= 1e-8
    zero_window = G.with_samples(np.zeros(32))
    with pytest.raises(ValueError):
        modulation_norm(G, zero_window, MixedNormParams(p=2.0, q=2.0))


def test_modulation_norm_window_robustness():
    rng = np.random.default_rng(7)
    g1 = gaussian(SPEC, width=1.0)
    g2 = gaussian(SPEC, width=1.5)
    params = MixedNormParams(p=1.0, q=2.0)
    ratios = []
    for _ in range(10):
        f = random_gaussian_mix(SPEC, rng)
        ratios.append(modulation_norm(f, g1, params) / modulation_norm(f, g2, params))
    ratios = np.array(ratios)
    assert np.all(ratios > 0.2) and np.all(ratios < 5.0)
    assert ratios.max() / ratios.min() <= 2.0


def test_modulation_norm_inclusion_monotonicity():
    # sample-sum normalization: larger exponents give smaller norms
    rng = np.random.default_rng(8)
    for _ in range(5):
        f = random_gaussian_mix(SPEC, rng)
        n12 = modulation_norm(f, G, MixedNormParams(p=1.0, q=2.0), cell_measure=False)
        n22 = modulation_norm(f, G, MixedNormParams(p=2.0, q=2.0), cell_measure=False)
        n24 = modulation_norm(f, G, MixedNormParams(p=2.0, q=4.0), cell_measure=False)
        assert n22 <= n12 + 1e-12
        assert n24 <= n22 + 1e-12


def test_exponent_validation():
    with pytest.raises(ValueError):
        MixedNormParams(p=0.0, q=1.0)
    with pytest.raises(ValueError):
        MixedNormParams(p=1.0, q=-2.0)


# ---------- dilations ----------


def test_dilate_table_identity_and_swap_rotation():
    rng = np.random.default_rng(9)
    table = _random_table(rng)
    out = dilate_table(np.eye(2), table)
    assert np.max(np.abs(out.values - table.values)) == 0.0
    # swap rotation is F(-y, x); applying four times returns the table
    four = swap_rotate(swap_rotate(swap_rotate(swap_rotate(table))))
    inner = (slice(1, None), slice(1, None))  # wrap edge excluded
    assert np.max(np.abs(four.values[inner] - table.values[inner])) <= 1e-12


def test_dilation_ratio_identity_and_shear():
    rng = np.random.default_rng(10)
    params = MixedNormParams(p=1.0, q=2.0)
    rep_id = dilation_norm_ratio(np.eye(2), params, rng, trials=10)
    assert abs(rep_id.mean_ratio - 1.0) <= 1e-9 and rep_id.std_ratio <= 1e-9
    rep_shear = dilation_norm_ratio(np.array([[1.0, 1.0], [0.0, 1.0]]), params, rng, trials=20)
    assert rep_shear.passed and abs(rep_shear.expected - 1.0) < 1e-12


def test_dilation_ratio_matches_constant():
    rng = np.random.default_rng(11)
    s = np.array([[2.0, 0.0], [0.0, 1.0]])
    params = MixedNormParams(p=1.0, q=2.0)
    rep = dilation_norm_ratio(s, params, rng, trials=30)
    want = 2.0 ** (0.5 - 1.0)
    assert abs(dilation_constant(s, params) - want) <= 1e-12
    assert rep.passed
    assert abs(rep.mean_ratio - want) / want <= 0.02


def test_dilation_ratio_rejects_lower_block():
    rng = np.random.default_rng(12)
    with pytest.raises(ValueError):
        dilation_norm_ratio(np.array([[1.0, 0.0], [1.0, 1.0]]), MixedNormParams(p=1, q=2), rng)


# ---------- equivalence ----------


def test_equivalence_stft_ratio_is_one():
    rng = np.random.default_rng(13)
    for p, q in [(2.0, 2.0), (1.0, 2.0)]:
        rep = equivalence_check(stft_matrix(1), G, MixedNormParams(p=p, q=q), rng,
                                trials=5, spec=SPEC)
        assert abs(rep.min_ratio - 1.0) <= 1e-6
        assert abs(rep.max_ratio - 1.0) <= 1e-6


def test_equivalence_upper_triangular_family_bounded():
    rng = np.random.default_rng(14)
    e = Matrix.rational([[1, 1], [0, 1]])
    a = compose_triple(e, Matrix.zeros(2, 2), Matrix.rational([[0, 1], [-1, 0]]))
    rep = equivalence_check(a, G, MixedNormParams(p=1.0, q=2.0), rng, trials=15, spec=SPEC)
    assert rep.passed
    assert rep.max_ratio / rep.min_ratio <= 10.0


def test_equivalence_tau_half_p_equals_q():
    # spread <= 1.5 across 100 random Gaussians-plus-noise trials
    rng = np.random.default_rng(15)
    a = tau_wigner_matrix("1/2", 1)
    factory = lambda: random_gaussian_mix(SPEC, rng, terms=3, spread=0.2, noise=0.02)
    rep = equivalence_check(a, G, MixedNormParams(p=2.0, q=2.0), rng, trials=100,
                            spec=SPEC, signal_factory=factory)
    assert rep.max_ratio / rep.min_ratio <= 1.5


def test_equivalence_enforces_hypotheses():
    rng = np.random.default_rng(16)
    rot = compose_triple(
        Matrix.rational([[0, 1], [-1, 0]]), Matrix.zeros(2, 2), Matrix.identity(2)
    )
    with pytest.raises(ValueError):
        equivalence_check(rot, G, MixedNormParams(p=1.0, q=2.0), rng, spec=SPEC)
    with pytest.raises(ValueError):
        equivalence_check(tau_wigner_matrix(0, 1), G, MixedNormParams(p=2.0, q=2.0), rng,
                          spec=SPEC)  # not shift-invertible


def test_equivalence_negative_control_spread_grows():
    # rotated shift block with p != q: the ratio spread widens with the grid
    rot = compose_triple(
        Matrix.rational([[0, 1], [-1, 0]]), Matrix.zeros(2, 2), Matrix.identity(2)
    )
    params = MixedNormParams(p=1.0, q=2.0)
    spreads = []
    for n in (32, 64):
        spec = GridSpec.self_dual(1, n)
        widths = [4.0 / spec.extent, 1.0, spec.extent / 4.0]
        state = {"i": 0}

        def factory():
            w = widths[state["i"] % len(widths)]
            state["i"] += 1
            return gaussian(spec, width=w)

        rep = equivalence_check(
            rot, gaussian(spec), params, np.random.default_rng(0), trials=len(widths),
            spec=spec, enforce_hypotheses=False, signal_factory=factory,
        )
        spreads.append(rep.max_ratio / rep.min_ratio)
    assert spreads[1] > 1.2 * spreads[0] > 1.2


# ---------- counterexample ----------


def test_counterexample_closed_ratios_and_slope():
    rep = counterexample_swap_ratio(2.0, 1.0)
    assert rep.ratios == pytest.approx((1.0, math.sqrt(2), 2.0, 2 ** 1.5), abs=1e-12)
    assert rep.slope == pytest.approx(0.5, abs=1e-12)
    assert rep.passed
    rep_inv = counterexample_swap_ratio(1.0, 2.0)
    assert rep_inv.slope == pytest.approx(-0.5, abs=1e-12)


def test_counterexample_rejects_equal_exponents_and_overflow():
    with pytest.raises(ValueError):
        counterexample_swap_ratio(2.0, 2.0)
    with pytest.raises(ValueError):
        counterexample_swap_ratio(2.0, 1.0, a_values=(64,))


def test_swap_rotation_matches_analytic_indicator():
    spec = GridSpec(d=2, n=128, extent=32.0)
    ax = spec.axis()
    a = 4
    table = TFGrid(spec, np.outer((ax >= 0) & (ax < a), (ax >= 0) & (ax < 1)).astype(complex))
    rotated = swap_rotate(table)
    want = np.outer((ax >= 0) & (ax < 1), (-ax >= 0) & (-ax < a)).astype(complex)
    assert np.max(np.abs(rotated.values - want)) == 0.0
