"""Time-frequency distributions: STFT, the tau-Wigner family, and the general
metaplectic family, plus covariance and reproducing-formula verifiers.

Two evaluation routes exist for each distribution: a direct discrete sum
(exact paths) and the metaplectic pipeline Ahat(f (x) conj(g)) via the
generator-word machinery.  Cross-checks compare moduli because pipeline
outputs are defined up to a global phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .grids import DiscreteSignal, GridSpec, tensor
from .matrices import Matrix
from .operators import (
    fourier,
    grid_lookup,
    metaplectic_apply,
    tf_shift,
)
from .symplectic import stft_matrix, tau_wigner_matrix


@dataclass(frozen=True)
class TFGrid:
    """Phase-space table of a distribution: values[i, j, ...] at (x_i, xi_j).

    The first half of the axes index the time block, the second half the
    frequency block, both on the signal's (self-dual) grid.
    """

    spec: GridSpec
    values: np.ndarray = field(repr=False)
    provenance: str = ""

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=complex)
        if arr.shape != self.spec.shape:
            raise ValueError(f"values shape {arr.shape} != grid shape {self.spec.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", arr)

    def as_signal(self):
        return DiscreteSignal(self.spec, self.values)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.spec.cell))

    def inner(self, other):
        if self.spec != other.spec:
            raise ValueError("grid mismatch")
        return complex(np.sum(self.values * np.conj(other.values)) * self.spec.cell)


def _check_pair(f, g):
    if f.spec != g.spec:
        raise ValueError("signals live on different grids")
    if not f.spec.is_self_dual():
        raise ValueError("distributions need a self-dual grid")


def stft(f, g):
    """V_g f(x, xi) = sum_t f(t) conj(g(t - x)) exp(-2 pi i xi.t) cell.

    Direct discrete sum with periodic window translation; one FFT per time
    shift.  V_g f(0, 0) = <f, g> and the 2-norm identity
    ||V_g f|| = ||f|| ||g|| holds to rounding.
    """
    _check_pair(f, g)
    if g.norm() == 0.0:
        raise ValueError("window must be nonzero")
    n, d = f.spec.n, f.spec.d
    out_spec = f.spec.doubled()
    out = np.empty(out_spec.shape, dtype=complex)
    axes = tuple(range(d))
    for flat in range(n ** d):
        idx = np.unravel_index(flat, f.spec.shape)
        steps = tuple(int(k) - n // 2 for k in idx)
        windowed = f.samples * np.conj(np.roll(g.samples, steps, axis=axes))
        out[idx] = fourier(DiscreteSignal(f.spec, windowed)).samples
    return TFGrid(out_spec, out, provenance="stft")


def _dyadic(tau, n):
    frac = Fraction(tau).limit_denominator(1 << 20) if isinstance(tau, float) else Fraction(tau)
    if isinstance(tau, float) and abs(float(frac) - tau) > 1e-12:
        raise ValueError(f"tau={tau} is not a dyadic rational")
    q = frac.denominator
    if q & (q - 1):
        raise ValueError(f"tau={tau} needs a power-of-two denominator")
    if q > n // 4:
        raise ValueError(f"tau denominator {q} too fine for n={n}")
    return frac.numerator, q


def tau_wigner(tau, f, g):
    """Direct sum of the tau-Wigner integrand over the grid-compatible lattice.

    W_tau(f, g)(x, xi) = sum_t f(x + tau t) conj(g(x - (1 - tau) t))
    exp(-2 pi i xi.t) weight.  For tau = a/q (dyadic) the lattice is t in
    q.spacing.Z, sampled at rate q; output frequency rows outside the
    subsampled band are identically zero (the band-limited model has no
    such modes).  tau in {0, 1} runs at full rate and reproduces the
    closed product forms exactly.
    """
    _check_pair(f, g)
    if f.spec.d != 1:
        raise ValueError("tau-Wigner direct sum is implemented for 1-D signals")
    n = f.spec.n
    a, q = _dyadic(tau, n)
    h = f.spec.spacing
    p = n // q
    js = np.arange(p) - p // 2
    out_spec = f.spec.doubled()
    out = np.zeros(out_spec.shape, dtype=complex)
    half = n // 2
    # Subsampled lattices (q >= 2) resolve modes strictly inside the band
    # (-p/2, p/2); the folded edge mode is dropped with the out-of-band rows.
    lo, hi = (half - p // 2, half + p // 2) if q == 1 else (half - p // 2 + 1, half + p // 2)
    for mi in range(n):
        idx_f = (mi + a * js) % n
        idx_g = (mi - (q - a) * js) % n
        rho = f.samples[idx_f] * np.conj(g.samples[idx_g])
        modes = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(rho))) * (q * h)
        out[mi, lo:hi] = modes[lo - (half - p // 2) : hi - (half - p // 2)]
    return TFGrid(out_spec, out, provenance=f"tau-wigner tau={a}/{q}")


def rihaczek_closed(f, g):
    """Closed form of the tau = 0 distribution: f(x) conj(ghat(xi)) e^{-2 pi i xi x}."""
    _check_pair(f, g)
    if f.spec.d != 1:
        raise ValueError("closed form implemented for 1-D signals")
    gh = fourier(g).samples
    ax = f.spec.axis()
    vals = np.multiply.outer(f.samples, np.conj(gh)) * np.exp(
        -2j * np.pi * np.outer(ax, ax)
    )
    return TFGrid(f.spec.doubled(), vals, provenance="rihaczek")


def conjugate_rihaczek_closed(f, g):
    """Closed form of the tau = 1 distribution: fhat(xi) conj(g(x)) e^{2 pi i xi x}."""
    _check_pair(f, g)
    if f.spec.d != 1:
        raise ValueError("closed form implemented for 1-D signals")
    fh = fourier(f).samples
    ax = f.spec.axis()
    vals = np.multiply.outer(np.conj(g.samples), fh).reshape(
        f.spec.n, f.spec.n
    ) * np.exp(2j * np.pi * np.outer(ax, ax))
    return TFGrid(f.spec.doubled(), vals, provenance="conjugate-rihaczek")


def wigner_general(a, f, g, word=None):
    """W_A(f, g) = Ahat(f (x) conj(g)) through the generator-word pipeline.

    a is the 4d x 4d symplectic matrix at the doubled level.  Dense kernel
    factors limit this to desk-scale grids; the result carries the usual
    global phase ambiguity.
    """
    _check_pair(f, g)
    am = a.to_numpy() if isinstance(a, Matrix) else np.asarray(a, dtype=float)
    if am.shape[0] != 4 * f.spec.d:
        raise ValueError(
            f"matrix size {am.shape[0]} does not match doubled level {4 * f.spec.d}"
        )
    prod = tensor(f, g.with_samples(np.conj(g.samples)))
    out = metaplectic_apply(am, prod, word=word)
    return TFGrid(out.spec, out.samples, provenance="metaplectic-pipeline")


def wigner_via_normal_form(e, c, deform, f, g):
    """Shift-invertible normal form: the distribution as a deformed STFT.

        W(z) = |det E|^(-1/2) Phi_C(E^-1 z) V_{delta g} f(E^-1 z)

    with Phi_C the chirp of the full chirp slot C (twist + block swap) and
    delta the deformation projection applied to the window.  E^-1 z is
    evaluated by integer re-indexing with zero extension when E^-1 is an
    integer matrix, else by nearest-sample lookup (error O(spacing)).
    """
    _check_pair(f, g)
    em = e.to_numpy() if isinstance(e, Matrix) else np.asarray(e, dtype=float)
    cm = c.to_numpy() if isinstance(c, Matrix) else np.asarray(c, dtype=float)
    dm = deform.to_numpy() if isinstance(deform, Matrix) else np.asarray(deform, dtype=float)
    two_d = 2 * f.spec.d
    if em.shape != (two_d, two_d) or cm.shape != (two_d, two_d) or dm.shape != (two_d, two_d):
        raise ValueError(f"normal form blocks must be {two_d}x{two_d}")
    det = float(np.linalg.det(em))
    if abs(det) < 1e-12:
        raise ValueError("normal form needs invertible E")
    window = metaplectic_apply(dm, g)
    table = stft(f, window)
    ei = np.linalg.inv(em)
    looked = grid_lookup(table.values, table.spec, ei)
    pts = table.spec.points().reshape(-1, two_d)
    w = pts @ ei.T
    phase = np.exp(1j * np.pi * np.einsum("pi,ij,pj->p", w, cm, w)).reshape(
        table.spec.shape
    )
    vals = phase * looked / np.sqrt(abs(det))
    return TFGrid(table.spec, vals, provenance="normal-form")


def distribution_evaluator(a, tol=1e-9):
    """Best evaluator for W_A: exact direct sums for the recognized STFT and
    dyadic tau-Wigner matrices, the dense pipeline otherwise."""
    am = a.to_numpy() if isinstance(a, Matrix) else np.asarray(a, dtype=float)
    if am.ndim != 2 or am.shape[0] != am.shape[1] or am.shape[0] % 4:
        raise ValueError("distribution matrices are 4d x 4d")
    d = am.shape[0] // 4
    if np.max(np.abs(am - stft_matrix(d).to_numpy())) <= tol:
        return stft
    t = float(am[0, d])  # the tau slot of the tau-Wigner block layout
    if np.max(np.abs(am - tau_wigner_matrix(t, d, mode="float64").to_numpy())) <= tol:
        try:
            _dyadic(t, 4 << 10)
            return lambda f, g: tau_wigner(t, f, g)
        except ValueError:
            pass
    return lambda f, g: wigner_general(am, f, g)


@dataclass(frozen=True)
class CovarianceReport:
    modulus_deviation: float
    phase_deviation: float
    shift_steps: tuple


def covariance_check(a, w, f, g, evaluator=None):
    """Covariance of W_A under time-frequency shifts of the signal.

    Modulus form: max_z | |W(pi(w)f, g)(z)| - |W(f, g)(z - E w)| | where E
    is the shift block.  The full phase form multiplies the shifted table
    by the chirp of -twist(a) at w and the phase-space shift pi(Ew, Fw);
    it is compared after aligning the global phase at the peak sample.
    """
    am = a.to_numpy() if isinstance(a, Matrix) else np.asarray(a, dtype=float)
    if evaluator is None:
        evaluator = distribution_evaluator(am)
    from .matrices import from_numpy
    from .shift_invertible import chirp_twist
    from .symplectic import paired_submatrices

    w = np.asarray(w, dtype=float).reshape(-1)
    mat = from_numpy(am)
    sub = paired_submatrices(mat)
    e_w = sub.e.to_numpy() @ w
    f_w = sub.f.to_numpy() @ w
    h = f.spec.spacing
    steps = e_w / h
    if np.max(np.abs(steps - np.rint(steps))) > 1e-9:
        raise ValueError("image shift falls off the grid")
    steps = np.rint(steps).astype(int)
    base = evaluator(f, g)
    moved = evaluator(tf_shift(f, w), g)
    rolled = np.roll(base.values, steps, axis=tuple(range(base.spec.d)))
    modulus_dev = float(np.max(np.abs(np.abs(moved.values) - np.abs(rolled))))
    # full phase form; skipped when the frequency image leaves the dual grid
    twist = chirp_twist(mat).to_numpy()
    chirp = np.exp(-1j * np.pi * w @ twist @ w)
    try:
        shifted = tf_shift(
            DiscreteSignal(base.spec, base.values), np.concatenate([e_w, f_w])
        )
    except ValueError:
        return CovarianceReport(modulus_dev, float("nan"), tuple(steps))
    predicted = chirp * shifted.samples
    peak = np.unravel_index(np.argmax(np.abs(predicted)), predicted.shape)
    if abs(predicted[peak]) > 0 and abs(moved.values[peak]) > 0:
        align = moved.values[peak] / predicted[peak]
        align /= abs(align)
    else:
        align = 1.0
    phase_dev = float(np.max(np.abs(moved.values - align * predicted)))
    return CovarianceReport(modulus_dev, phase_dev, tuple(steps))


def reproducing_check(a, f, g, gamma, evaluator=None, max_n=32):
    """Relative error of the discrete reproducing formula.

    W(f, g) is reconstructed as the Riemann sum over all grid points w of
    V_g f(w) W(pi(w) gamma, g) / <gamma, g> with cell weight spacing^{2d},
    and compared to the direct evaluation in relative 2-norm.
    """
    if f.spec.n > max_n:
        raise ValueError(f"reproducing check capped at n <= {max_n}")
    am = a.to_numpy() if isinstance(a, Matrix) else np.asarray(a, dtype=float)
    if evaluator is None:
        evaluator = distribution_evaluator(am)
    pairing = gamma.inner(g)
    if abs(pairing) < 1e-12:
        raise ValueError("<gamma, g> too small for the reproducing formula")
    table = stft(f, g)
    lhs = evaluator(f, g)
    acc = np.zeros(lhs.spec.shape, dtype=complex)
    n, d = f.spec.n, f.spec.d
    h = f.spec.spacing
    cell = h ** (2 * d)
    ax = f.spec.axis()
    for flat in range(n ** (2 * d)):
        idx = np.unravel_index(flat, lhs.spec.shape)
        w = np.array([ax[k] for k in idx])
        coef = table.values[idx]
        if abs(coef) < 1e-14:
            continue
        acc += coef * evaluator(tf_shift(gamma, w), g).values
    rhs = acc * cell / pairing
    return float(
        np.sqrt(np.sum(np.abs(lhs.values - rhs) ** 2))
        / np.sqrt(np.sum(np.abs(lhs.values) ** 2))
    )
