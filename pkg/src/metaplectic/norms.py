"""Weights, weighted mixed (quasi-)norms on phase-space tables, modulation
norms, and randomized verifiers for the dilation, equivalence and
counterexample statements.

Unbounded-operator statements are recast at desk scale: boundedness becomes
ratio constancy across random inputs, non-boundedness becomes a power-law
growth of the swap-rotation ratio on indicator families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import TFGrid, stft, wigner_via_normal_form
from .grids import GridSpec, random_gaussian_mix
from .matrices import Matrix
from .shift_invertible import deformation, factorize
from .symplectic import block_swap


class Weight:
    """Moderate weight on phase space: strictly positive and even.

    Polynomial family: v_s(z) = (1 + |z|)^s.  Tabulated weights wrap any
    vectorized callable on points of shape (..., 2d).  claims records
    unverified metadata flags such as "submultiplicative" or "moderate";
    check_moderate() is the sampling verifier for the latter.
    """

    def __init__(self, fn, description="weight", claims=()):
        self._fn = fn
        self.description = description
        self.claims = tuple(claims)

    def __call__(self, points):
        vals = np.asarray(self._fn(np.asarray(points, dtype=float)), dtype=float)
        if np.any(vals <= 0):
            raise ValueError("weight must be strictly positive")
        return vals

    def __repr__(self):
        return f"Weight({self.description})"

    @classmethod
    def polynomial(cls, s):
        claims = ("submultiplicative",) if s >= 0 else ("moderate",)
        return cls(
            lambda pts: (1.0 + np.sqrt(np.sum(pts ** 2, axis=-1))) ** float(s),
            description=f"vs:{s}",
            claims=claims,
        )

    @classmethod
    def constant(cls):
        return cls(lambda pts: np.ones(pts.shape[:-1]), description="one")

    @classmethod
    def from_table(cls, spec, values, description="tabulated"):
        """Weight sampled on a grid; evaluation snaps to the nearest sample
        (clamped at the box edge)."""
        table = np.asarray(values, dtype=float)
        if table.shape != spec.shape:
            raise ValueError(f"table shape {table.shape} != grid shape {spec.shape}")
        if np.any(table <= 0):
            raise ValueError("weight table must be strictly positive")

        def lookup(pts):
            idx = np.rint(pts / spec.spacing).astype(int) + spec.n // 2
            idx = np.clip(idx, 0, spec.n - 1)
            return table[tuple(np.moveaxis(idx, -1, 0))]

        return cls(lookup, description=description)

    def is_even_sampled(self, rng, dim, radius=4.0, samples=256, tol=1e-9):
        pts = rng.uniform(-radius, radius, size=(samples, dim))
        a = self(pts)
        b = self(-pts)
        return bool(np.max(np.abs(a - b) / np.maximum(a, b)) <= tol)


@dataclass(frozen=True)
class ModerateReport:
    worst_ratio: float
    moderate: bool


def check_moderate(m, v, rng, dim=2, samples=2000, radius=4.0, bound=10.0):
    """Sample m(z1 + z2) / (v(z1) m(z2)) and report the worst ratio."""
    z1 = rng.uniform(-radius, radius, size=(samples, dim))
    z2 = rng.uniform(-radius, radius, size=(samples, dim))
    ratio = m(z1 + z2) / (v(z1) * m(z2))
    worst = float(np.max(ratio))
    return ModerateReport(worst_ratio=worst, moderate=worst <= bound)


@dataclass(frozen=True)
class MixedNormParams:
    """Exponents p, q in (0, inf] and an optional weight (default m == 1)."""

    p: float
    q: float
    weight: Weight | None = None

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError("exponents must be positive (inf allowed)")


def mixed_norm(table, params, cell_measure=True):
    """Weighted mixed (quasi-)norm: inner p-norm over the time block, outer
    q-norm over the frequency block.

    Riemann weights spacing^d per block when cell_measure is True; plain
    sample sums otherwise (the normalization used by the discrete inclusion
    comparisons).  Infinite exponents take the max over samples.
    """
    if isinstance(table, TFGrid):
        spec, values = table.spec, table.values
    else:
        spec, values = table.spec, table.samples
    if spec.d % 2:
        raise ValueError("mixed norm needs an even number of axes")
    if values.size == 0:
        raise ValueError("empty grid")
    d = spec.d // 2
    mag = np.abs(values)
    if params.weight is not None:
        mag = mag * params.weight(spec.points())
    cell = spec.spacing ** d if cell_measure else 1.0
    inner_axes = tuple(range(d))
    if math.isinf(params.p):
        inner = np.max(mag, axis=inner_axes)
    else:
        inner = (np.sum(mag ** params.p, axis=inner_axes) * cell) ** (1.0 / params.p)
    if math.isinf(params.q):
        return float(np.max(inner))
    return float((np.sum(inner ** params.q) * cell) ** (1.0 / params.q))


def modulation_norm(f, g, params, cell_measure=True):
    """Mixed norm of the STFT table: the discrete modulation-space norm."""
    if g.norm() == 0.0:
        raise ValueError("window must be nonzero")
    return mixed_norm(stft(f, g), params, cell_measure=cell_measure)


# ---------- grid-level dilations ----------


def dilate_table(s, table, wrap=False):
    """T_S F = |det S|^(1/2) F(S .) on a phase-space table, integer S.

    Zero extension outside the box by default (matches contained signals);
    wrap=True uses periodic lookup instead.
    """
    sm = s.to_numpy() if isinstance(s, Matrix) else np.asarray(s, dtype=float)
    si = np.rint(sm).astype(int)
    if np.max(np.abs(sm - si)) > 1e-9:
        raise ValueError("table dilation needs an integer matrix")
    spec = table.spec
    n = spec.n
    c = n // 2
    idx = np.indices(spec.shape).reshape(spec.d, -1).T
    mapped = (idx - c) @ si.T + c
    vals = np.zeros(idx.shape[0], dtype=complex)
    if wrap:
        vals = table.values[tuple((mapped % n).T)]
    else:
        ok = np.all((mapped >= 0) & (mapped < n), axis=1)
        vals[ok] = table.values[tuple(mapped[ok].T)]
    det = abs(float(np.linalg.det(sm)))
    out = np.sqrt(det) * vals.reshape(spec.shape)
    return TFGrid(spec, out, provenance=f"dilated({table.provenance})")


def swap_rotate(table):
    """F -> F o J^-1, i.e. (x, y) -> F(-y, x): the swap rotation of the plane."""
    spec = table.spec
    if spec.d != 2:
        raise ValueError("swap rotation implemented for 2-axis tables")
    n = spec.n
    i = np.arange(n)
    neg = (n - i) % n
    out = table.values[np.ix_(neg, i)].T
    return TFGrid(spec, out, provenance=f"rotated({table.provenance})")


@dataclass(frozen=True)
class RatioReport:
    theorem: str
    hypothesis: str
    trials: int
    min_ratio: float
    max_ratio: float
    mean_ratio: float
    std_ratio: float
    expected: float | None
    passed: bool

    def as_json(self):
        return {
            "theorem": self.theorem,
            "hypothesis": self.hypothesis,
            "trials": self.trials,
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "slope": None,
            "pass": self.passed,
        }


def dilation_constant(s, params):
    """Closed constant for upper-triangular S = [[A, B], [0, D]]:
    |det A|^(1/2 - 1/p) |det D|^(1/2 - 1/q)."""
    sm = s.to_numpy() if isinstance(s, Matrix) else np.asarray(s, dtype=float)
    d = sm.shape[0] // 2
    det_a = abs(float(np.linalg.det(sm[:d, :d])))
    det_d = abs(float(np.linalg.det(sm[d:, d:])))
    ip = 0.0 if math.isinf(params.p) else 1.0 / params.p
    iq = 0.0 if math.isinf(params.q) else 1.0 / params.q
    return det_a ** (0.5 - ip) * det_d ** (0.5 - iq)


def dilation_norm_ratio(s, params, rng, trials=100, spec=None, rel_tol=0.02):
    """Ratio mixed_norm(T_S F) / mixed_norm(F) over random contained tables.

    For upper-triangular S the ratio is the constant dilation_constant(s)
    for every F; the report records the spread and the comparison.
    """
    sm = s.to_numpy() if isinstance(s, Matrix) else np.asarray(s, dtype=float)
    d = sm.shape[0] // 2
    if np.max(np.abs(sm[d:, :d])) > 1e-12:
        raise ValueError("lower-left block must vanish (upper-triangular hypothesis)")
    if spec is None:
        spec = GridSpec.self_dual(2 * d, 64)
    ratios = []
    for _ in range(trials):
        sig = random_gaussian_mix(spec, rng, terms=4, spread=0.15)
        table = TFGrid(spec, sig.samples, provenance="random")
        num = mixed_norm(dilate_table(sm, table), params)
        den = mixed_norm(table, params)
        ratios.append(num / den)
    ratios = np.array(ratios)
    expected = dilation_constant(sm, params)
    mean = float(np.mean(ratios))
    std = float(np.std(ratios))
    passed = std / mean <= rel_tol and abs(mean - expected) / expected <= rel_tol
    return RatioReport(
        theorem="upper-triangular dilation isomorphism",
        hypothesis="S upper block-triangular, F contained in the box",
        trials=trials,
        min_ratio=float(np.min(ratios)),
        max_ratio=float(np.max(ratios)),
        mean_ratio=mean,
        std_ratio=std,
        expected=expected,
        passed=passed,
    )


def _is_upper_triangular(mat, tol=1e-12):
    arr = np.asarray(mat, dtype=float)
    return np.max(np.abs(np.tril(arr, -1))) <= tol


def equivalence_check(
    a,
    g,
    params,
    rng,
    trials=30,
    spec=None,
    spread_bound=10.0,
    enforce_hypotheses=True,
    signal_factory=None,
):
    """Spread of mixed_norm(W_A(f, g)) / modulation_norm(f, g) over random f.

    W_A is evaluated through the shift-invertible normal form, which is the
    route the equivalence statement rests on.  Hypotheses (shift
    invertibility; upper-triangular shift block when p != q; weight
    compatibility) are validated and violations raise unless explicitly
    disabled for negative controls.
    """
    am = a if isinstance(a, Matrix) else None
    if am is None:
        from .matrices import from_numpy

        am = from_numpy(np.asarray(a, dtype=float))
    trip = factorize(am)  # raises if not shift-invertible
    e_np = trip.e.to_numpy()
    if enforce_hypotheses:
        if params.p != params.q and not _is_upper_triangular(e_np):
            raise ValueError(
                "hypothesis violation: p != q needs an upper-triangular shift block"
            )
        if params.weight is not None:
            probe = rng.uniform(-2.0, 2.0, size=(512, e_np.shape[0]))
            ratio = params.weight(probe @ np.linalg.inv(e_np).T) / params.weight(probe)
            if np.max(ratio) > 1e3 or np.min(ratio) < 1e-3:
                raise ValueError("hypothesis violation: weight not shift-block compatible")
    chirp_full = trip.c + block_swap(trip.c.rows // 2, trip.c.mode)
    deform = deformation(am)
    if spec is None:
        spec = GridSpec.self_dual(1, 32)
    if signal_factory is None:
        signal_factory = lambda: random_gaussian_mix(spec, rng, terms=3, spread=0.2, noise=0.02)
    ratios = []
    for _ in range(trials):
        f = signal_factory()
        table = wigner_via_normal_form(trip.e, chirp_full, deform, f, g)
        num = mixed_norm(table, params)
        den = modulation_norm(f, g, params)
        ratios.append(num / den)
    ratios = np.array(ratios)
    spread = float(np.max(ratios) / np.min(ratios))
    return RatioReport(
        theorem="modulation-space characterization by shift-invertible distributions",
        hypothesis="shift-invertible; upper-triangular shift block when p != q",
        trials=trials,
        min_ratio=float(np.min(ratios)),
        max_ratio=float(np.max(ratios)),
        mean_ratio=float(np.mean(ratios)),
        std_ratio=float(np.std(ratios)),
        expected=None,
        passed=spread <= spread_bound,
    )


@dataclass(frozen=True)
class CounterexampleReport:
    theorem: str
    trials: int
    ratios: tuple
    slope: float
    expected_slope: float
    passed: bool

    def as_json(self):
        return {
            "theorem": self.theorem,
            "hypothesis": "p != q; indicator family [0, a] x [0, 1]",
            "trials": self.trials,
            "min_ratio": float(min(self.ratios)),
            "max_ratio": float(max(self.ratios)),
            "slope": self.slope,
            "pass": self.passed,
        }


def counterexample_swap_ratio(p, q, a_values=(1, 2, 4, 8), spec=None, slope_tol=0.05):
    """Growth of mixed norms under the swap rotation on indicator families.

    For F_a the indicator of [0, a) x [0, 1) the ratio
    mixed_norm(F_a o J^-1) / mixed_norm(F_a) equals a^(1/q - 1/p); the
    measured log-log slope certifies the non-boundedness direction at desk
    scale.  Rejected for p == q where the ratio is constant.
    """
    if p == q:
        raise ValueError("p == q gives a constant ratio; not a counterexample family")
    if spec is None:
        spec = GridSpec(d=2, n=128, extent=32.0)
    params = MixedNormParams(p=p, q=q)
    ax = spec.axis()
    ratios = []
    for a in a_values:
        if a >= spec.extent / 2:
            raise ValueError(f"indicator extent {a} does not fit the box")
        x_in = (ax >= 0.0) & (ax < float(a))
        y_in = (ax >= 0.0) & (ax < 1.0)
        table = TFGrid(spec, np.outer(x_in, y_in).astype(complex), provenance="indicator")
        ratios.append(mixed_norm(swap_rotate(table), params) / mixed_norm(table, params))
    logs_a = np.log(np.array(a_values, dtype=float))
    logs_r = np.log(np.array(ratios))
    slope = float(np.polyfit(logs_a, logs_r, 1)[0])
    ip = 0.0 if math.isinf(p) else 1.0 / p
    iq = 0.0 if math.isinf(q) else 1.0 / q
    expected = iq - ip
    passed = abs(slope - expected) <= slope_tol * max(abs(expected), 1e-12)
    return CounterexampleReport(
        theorem="swap rotation unbounded on mixed-norm spaces",
        trials=len(a_values),
        ratios=tuple(float(r) for r in ratios),
        slope=slope,
        expected_slope=expected,
        passed=passed,
    )
