"""Discrete metaplectic operators: exact grid ops and the kernel pipeline."""

import random

import numpy as np
import pytest

from metaplectic import (
    DiscreteSignal,
    GridSpec,
    Matrix,
    chirp_mul,
    decompose_generators,
    dilate,
    fourier,
    free_kernel_apply,
    gaussian,
    inverse_fourier,
    metaplectic_apply,
    partial_fourier_2,
    random_symplectic_word,
    schrodinger,
    stft_matrix,
    symplectic_form,
    tensor,
    tf_shift,
)

SPEC64 = GridSpec.self_dual(1, 64)
SPEC32 = GridSpec.self_dual(1, 32)


def _peak_aligned_dev(a, b):
    i = np.argmax(np.abs(b))
    phase = b.reshape(-1)[i] / a.reshape(-1)[i]
    phase /= abs(phase)
    return np.max(np.abs(phase * a - b))


def test_fourier_gaussian_fixed_point():
    g = gaussian(SPEC64)
    assert np.max(np.abs(fourier(g).samples - g.samples)) <= 1e-6


def test_fourier_parseval_and_inverse():
    rng = np.random.default_rng(0)
    f = DiscreteSignal(SPEC64, rng.normal(size=64) + 1j * rng.normal(size=64))
    assert abs(fourier(f).norm() - f.norm()) <= 1e-10
    assert np.max(np.abs(inverse_fourier(fourier(f)).samples - f.samples)) <= 1e-12


def test_fourier_squared_is_parity():
    rng = np.random.default_rng(1)
    f = DiscreteSignal(SPEC64, rng.normal(size=64) + 1j * rng.normal(size=64))
    twice = fourier(fourier(f)).samples
    idx = (64 - np.arange(64)) % 64
    assert np.max(np.abs(twice - f.samples[idx])) <= 1e-12


def test_fourier_requires_self_dual():
    f = DiscreteSignal(GridSpec(d=1, n=64, extent=10.0), np.ones(64))
    with pytest.raises(ValueError):
        fourier(f)


def test_chirp_transform_law():
    # F(Phi_c) = |c|^(-1/2) exp(i pi sgn(c)/4) Phi_{-1/c}; checked on the
    # central quarter band at the alias cap |c| = n / (2 T^2) = 1/2.
    spec = GridSpec.self_dual(1, 1 << 16)
    c = 0.5
    chirp = chirp_mul(np.array([[c]]), DiscreteSignal(spec, np.ones(spec.shape)))
    got = fourier(chirp).samples
    ax = spec.axis()
    want = abs(c) ** -0.5 * np.exp(1j * np.pi / 4) * np.exp(-1j * np.pi * ax ** 2 / c)
    mid = slice(spec.n // 2 - spec.n // 8, spec.n // 2 + spec.n // 8)
    assert np.max(np.abs(got[mid] - want[mid])) <= 1e-2


def test_chirp_basics():
    f = gaussian(SPEC64, center=[0.4])
    assert np.max(np.abs(chirp_mul(np.zeros((1, 1)), f).samples - f.samples)) == 0.0
    out = chirp_mul(np.array([[0.5]]), f)
    assert np.max(np.abs(np.abs(out.samples) - np.abs(f.samples))) <= 1e-15
    with pytest.raises(ValueError):
        chirp_mul(np.array([[0.0, 1.0], [2.0, 0.0]]), tensor(f, f))


def test_chirp_shift_intertwining_modulus():
    # V_C maps pi(x, xi) to pi(x, Cx + xi); moduli agree sample by sample
    f = gaussian(SPEC64, center=[0.2])
    c = np.array([[1.0]])
    h = SPEC64.spacing
    z = np.array([4 * h, 2 * h])
    lhs = chirp_mul(c, tf_shift(f, z))
    image = np.array([z[0], c[0, 0] * z[0] + z[1]])
    rhs = tf_shift(chirp_mul(c, f), image)
    assert np.max(np.abs(np.abs(lhs.samples) - np.abs(rhs.samples))) <= 1e-8


def test_dilate_identity_reflection_composition():
    f = gaussian(SPEC64, center=[0.3], momentum=[0.5])
    assert np.max(np.abs(dilate(np.eye(1), f).samples - f.samples)) == 0.0
    refl = dilate(-np.eye(1), f)
    assert np.max(np.abs(dilate(-np.eye(1), refl).samples - f.samples)) == 0.0
    # composition: dilate(E, dilate(F, .)) = dilate(F E, .)
    spec2 = GridSpec.self_dual(2, 16)
    g2 = gaussian(spec2, center=[0.2, -0.1])
    e = np.array([[1.0, 1.0], [0.0, 1.0]])
    fm = np.array([[1.0, 0.0], [-1.0, 1.0]])
    lhs = dilate(e, dilate(fm, g2))
    rhs = dilate(fm @ e, g2)
    assert np.max(np.abs(lhs.samples - rhs.samples)) <= 1e-12
    assert abs(dilate(e, g2).norm() - g2.norm()) <= 1e-12  # unimodular: unitary


def test_dilate_kernel_fallback_scalar():
    # T_2 f = sqrt(2) f(2x) through the kernel route
    f = gaussian(SPEC64, momentum=[0.3])
    got = dilate(np.array([[2.0]]), f)
    ax = SPEC64.axis()
    want = np.sqrt(2.0) * np.exp(-np.pi * (2 * ax) ** 2) * np.exp(2j * np.pi * 0.3 * 2 * ax)
    assert _peak_aligned_dev(got.samples, want) <= 1e-3


def test_dilate_kernel_fallback_rotation():
    spec2 = GridSpec.self_dual(2, 32)
    g2 = gaussian(spec2)
    e = 0.5 * np.array([[1.0, 1.0], [-1.0, 1.0]])
    got = dilate(e, g2)
    pts = spec2.points()
    mapped = np.einsum("ij,...j->...i", e, pts)
    want = np.sqrt(abs(np.linalg.det(e))) * np.exp(-np.pi * np.sum(mapped ** 2, axis=-1))
    assert _peak_aligned_dev(got.samples, want) <= 1e-6


def test_dilate_incompatible_without_fallback():
    f = gaussian(SPEC64)
    with pytest.raises(ValueError):
        dilate(np.array([[1.5]]), f, kernel_fallback=False)
    with pytest.raises(ValueError):
        dilate(np.zeros((1, 1)), f)


def test_tf_shift_identity_and_composition_phase():
    f = gaussian(SPEC64, center=[0.1])
    assert np.max(np.abs(tf_shift(f, [0.0, 0.0]).samples - f.samples)) == 0.0
    h = SPEC64.spacing
    z = np.array([3 * h, 5 * h])
    zp = np.array([-2 * h, 4 * h])
    lhs = tf_shift(tf_shift(f, zp), z)
    rhs = tf_shift(f, z + zp)
    phase = np.exp(-2j * np.pi * zp[1] * z[0])
    assert np.max(np.abs(lhs.samples - phase * rhs.samples)) <= 1e-12
    assert abs(tf_shift(f, z).norm() - f.norm()) <= 1e-12
    with pytest.raises(ValueError):
        tf_shift(f, [0.3 * h, 0.0])


def test_schrodinger_tensor_identity():
    # rho(z) f (x) rho(w) g = exp(2 pi i tau) rho(z1, w1, z2, w2)(f (x) g)
    spec = GridSpec.self_dual(1, 16)
    f = gaussian(spec, center=[0.2])
    g = gaussian(spec, momentum=[0.4])
    h = spec.spacing
    z = np.array([2 * h, -h])
    w = np.array([-3 * h, 2 * h])
    tau = 0.3
    lhs = tensor(schrodinger(f, z, tau), schrodinger(g, w, tau))
    big = np.array([z[0], w[0], z[1], w[1]])
    rhs = schrodinger(tensor(f, g), big, tau)
    assert np.max(np.abs(lhs.samples - np.exp(2j * np.pi * tau) * rhs.samples)) <= 1e-10


def test_word_shapes():
    assert [fac.kind for fac in decompose_generators(symplectic_form(1)).factors] == ["J"]
    c = Matrix.rational([[1, 0], [0, -1]])
    from metaplectic import chirp_matrix

    word = decompose_generators(chirp_matrix(c))
    assert [fac.kind for fac in word.factors] == ["V"]
    assert decompose_generators(Matrix.identity(4)).factors == ()
    word_ast = decompose_generators(stft_matrix(1))
    assert len(word_ast.factors) <= 6


def test_word_reconstruction_random():
    rng = random.Random(17)
    for _ in range(300):
        for d in (1, 2):
            s = random_symplectic_word(d, rng)
            word = decompose_generators(s)
            assert len(word.factors) <= 6
            assert np.max(np.abs(word.product() - s.to_numpy())) <= 1e-10


def test_decompose_rejects_non_symplectic():
    with pytest.raises(ValueError):
        decompose_generators(np.eye(3))
    with pytest.raises(ValueError):
        decompose_generators(2.0 * np.eye(2))


def test_apply_matches_exact_operators():
    f = gaussian(SPEC64, center=[0.3], momentum=[-0.2])
    viaj = metaplectic_apply(symplectic_form(1), f)
    assert np.max(np.abs(viaj.samples - fourier(f).samples)) <= 1e-12
    c = np.array([[0.5]])
    from metaplectic import chirp_matrix

    viac = metaplectic_apply(chirp_matrix(Matrix.rational([["1/2"]])), f)
    assert np.max(np.abs(viac.samples - chirp_mul(c, f).samples)) <= 1e-12


def test_free_kernel_of_form_matches_fourier():
    f = gaussian(SPEC64, center=[0.3], momentum=[0.4])
    got = free_kernel_apply(symplectic_form(1).to_numpy(), f)
    assert np.max(np.abs(got.samples - fourier(f).samples)) <= 1e-12
    with pytest.raises(ValueError):
        free_kernel_apply(np.eye(2), f)  # upper-right block singular


def test_free_kernel_matches_fourier_multiplier():
    # V_{-I}^T lifts to F Phi_I F^-1; moduli agree within quadrature error
    f = gaussian(SPEC64, center=[0.3], momentum=[0.4])
    vt = np.array([[1.0, -1.0], [0.0, 1.0]])
    lhs = free_kernel_apply(vt, f)
    rhs = fourier(chirp_mul(np.array([[1.0]]), inverse_fourier(f)))
    assert np.max(np.abs(np.abs(lhs.samples) - np.abs(rhs.samples))) <= 1e-3


def test_apply_intertwines_shifts():
    # S-hat pi(z) = phase pi(Sz) S-hat; moduli compared on the grid
    f = gaussian(SPEC64)
    h = SPEC64.spacing
    cases = [
        (symplectic_form(1).to_numpy(), np.array([2 * h, 3 * h]), 1e-10),
        (np.array([[1.0, 0.0], [1.0, 1.0]]), np.array([2 * h, 3 * h]), 1e-10),
        (np.array([[1.5, 0.0], [0.0, 1 / 1.5]]), np.array([2 * h, 3 * h]), 1e-3),
    ]
    for s, z, tol in cases:
        image = s @ z
        steps = image / h
        assert np.max(np.abs(steps - np.rint(steps))) < 1e-9
        lhs = metaplectic_apply(s, tf_shift(f, z))
        rhs = tf_shift(metaplectic_apply(s, f), image)
        assert np.max(np.abs(np.abs(lhs.samples) - np.abs(rhs.samples))) <= tol


def test_apply_composition_law_in_modulus():
    rng = random.Random(18)
    f = gaussian(SPEC64, center=[0.2])
    for _ in range(5):
        s1 = random_symplectic_word(1, rng).to_numpy()
        s2 = random_symplectic_word(1, rng).to_numpy()
        lhs = metaplectic_apply(s1, metaplectic_apply(s2, f))
        rhs = metaplectic_apply(s1 @ s2, f)
        assert np.max(np.abs(np.abs(lhs.samples) - np.abs(rhs.samples))) <= 1e-3


def test_apply_preserves_norm():
    # exact paths are unitary to rounding; sampled-kernel paths within 1e-3
    rng = random.Random(19)
    f = gaussian(SPEC64, center=[0.2], momentum=[0.3])
    for _ in range(20):
        s = random_symplectic_word(1, rng)
        word = decompose_generators(s)
        kernel_path = any(fac.kind == "FK" for fac in word.factors) or any(
            fac.kind == "D" and np.max(np.abs(fac.mat - np.rint(fac.mat))) > 1e-9
            for fac in word.factors
        )
        got = metaplectic_apply(s, f, word=word)
        assert abs(got.norm() - f.norm()) <= (1e-3 if kernel_path else 1e-10)


def test_partial_fourier_tensor_and_parity():
    spec = GridSpec.self_dual(1, 32)
    f = gaussian(spec, center=[0.2])
    g = gaussian(spec, momentum=[0.3])
    prod = tensor(f, g)
    lhs = partial_fourier_2(prod)
    rhs = tensor(f, fourier(g))
    assert np.max(np.abs(lhs.samples - rhs.samples)) <= 1e-10
    twice = partial_fourier_2(lhs).samples
    idx = (32 - np.arange(32)) % 32
    assert np.max(np.abs(twice - prod.samples[:, idx])) <= 1e-10
    with pytest.raises(ValueError):
        partial_fourier_2(f)


def test_partial_fourier_matches_pipeline():
    from metaplectic import partial_fourier_matrix

    spec = GridSpec.self_dual(1, 16)
    prod = tensor(gaussian(spec, center=[0.2]), gaussian(spec, momentum=[0.3]))
    lhs = partial_fourier_2(prod)
    rhs = metaplectic_apply(partial_fourier_matrix(1), prod)
    assert np.max(np.abs(np.abs(lhs.samples) - np.abs(rhs.samples))) <= 1e-3


def test_kernel_budget_enforced():
    spec = GridSpec.self_dual(2, 64)  # 4096^2 kernel cells: over budget
    f = gaussian(spec)
    with pytest.raises(ValueError):
        free_kernel_apply(np.block(
            [[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]]
        ), f)
