"""Sampled complex functions on centered periodic grids.

The grid has N samples per axis (N a power of two) on [-T/2, T/2) with
spacing T/N.  The dual grid has spacing 1/T; choosing T = sqrt(N) makes the
grid self-dual so the Fourier transform maps the grid model to itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def _is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """d-dimensional sampling grid: N points per axis on [-T/2, T/2)."""

    d: int
    n: int
    extent: float

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if not _is_power_of_two(self.n) or self.n < 4:
            raise ValueError("samples per axis must be a power of two, at least 4")
        if self.extent <= 0:
            raise ValueError("extent must be positive")

    @classmethod
    def self_dual(cls, d, n):
        return cls(d=d, n=n, extent=math.sqrt(n))

    @property
    def spacing(self):
        return self.extent / self.n

    @property
    def shape(self):
        return (self.n,) * self.d

    @property
    def cell(self):
        """Riemann cell measure spacing^d."""
        return self.spacing ** self.d

    def is_self_dual(self, tol=1e-9):
        return abs(self.extent * self.extent - self.n) <= tol * self.n

    def axis(self):
        return (np.arange(self.n) - self.n // 2) * self.spacing

    def points(self):
        """Array of shape (*shape, d) with the sample coordinates."""
        ax = self.axis()
        mesh = np.meshgrid(*([ax] * self.d), indexing="ij")
        return np.stack(mesh, axis=-1)

    def doubled(self):
        """Grid for tensor products: twice the axes, same sampling."""
        return GridSpec(d=2 * self.d, n=self.n, extent=self.extent)


@dataclass(frozen=True)
class DiscreteSignal:
    """Complex samples on a GridSpec; inner products carry the cell measure."""

    spec: GridSpec
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.samples, dtype=complex)
        if arr.shape != self.spec.shape:
            raise ValueError(f"samples shape {arr.shape} != grid shape {self.spec.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "samples", arr)

    def with_samples(self, samples):
        return DiscreteSignal(self.spec, samples)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.spec.cell))

    def inner(self, other):
        """<f, g> = sum f conj(g) cell; conjugate-linear in the second slot."""
        if self.spec != other.spec:
            raise ValueError("grid mismatch")
        return complex(np.sum(self.samples * np.conj(other.samples)) * self.spec.cell)


def tensor(f, g):
    """(f (x) g)(y1, y2) = f(y1) g(y2) on the doubled grid."""
    if f.spec.n != g.spec.n or abs(f.spec.extent - g.spec.extent) > 1e-12:
        raise ValueError("tensor factors must share n and extent")
    spec = GridSpec(d=f.spec.d + g.spec.d, n=f.spec.n, extent=f.spec.extent)
    return DiscreteSignal(spec, np.multiply.outer(f.samples, g.samples))


def gaussian(spec, width=1.0, center=None, momentum=None):
    """exp(-pi |(x - c)/w|^2) exp(2 pi i p.x); the w=1, c=p=0 case is the
    fixed point of the Fourier transform."""
    pts = spec.points()
    c = np.zeros(spec.d) if center is None else np.asarray(center, dtype=float)
    p = np.zeros(spec.d) if momentum is None else np.asarray(momentum, dtype=float)
    q = np.sum(((pts - c) / float(width)) ** 2, axis=-1)
    phase = pts @ p
    return DiscreteSignal(spec, np.exp(-np.pi * q) * np.exp(2j * np.pi * phase))


def random_gaussian_mix(spec, rng, terms=3, spread=0.2, width_range=(0.8, 1.4), noise=0.0):
    """Random superposition of displaced Gaussians, well contained in the box.

    Used by the randomized verifiers; spread is the fraction of the half-box
    the centers and momenta may fill.
    """
    total = np.zeros(spec.shape, dtype=complex)
    half = spec.extent / 2.0
    for _ in range(terms):
        c = rng.uniform(-spread * half, spread * half, size=spec.d)
        p = rng.uniform(-spread * half, spread * half, size=spec.d)
        w = rng.uniform(*width_range)
        coef = rng.normal() + 1j * rng.normal()
        total += coef * gaussian(spec, width=w, center=c, momentum=p).samples
    if noise:
        total += noise * (rng.normal(size=spec.shape) + 1j * rng.normal(size=spec.shape))
    sig = DiscreteSignal(spec, total)
    nrm = sig.norm()
    if nrm == 0.0:
        return gaussian(spec)
    return sig.with_samples(total / nrm)
