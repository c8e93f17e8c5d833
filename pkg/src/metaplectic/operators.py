"""Discrete realizations of metaplectic operators on self-dual grids.

Exact grid operators: Fourier transform (centered unitary DFT), chirp
multiplication, time-frequency shifts, and dilations by integer unimodular
matrices.  Everything else is reached through a generator-word decomposition
whose grid-incompatible factors are applied as sampled quadratic-phase
kernels (dense matrices, desk scale only).  All operators realize their
projection up to a global unit-modulus phase, so cross-checks compare
moduli or align phases first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import Matrix, block_matrix

_KERNEL_CACHE = {}
_KERNEL_CACHE_LIMIT = 8
MAX_KERNEL_CELLS = 4 << 20  # dense kernel entry budget: N^{2d} squared


def _as_array(m, size=None):
    arr = m.to_numpy() if isinstance(m, Matrix) else np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected a square matrix")
    if size is not None and arr.shape[0] != size:
        raise ValueError(f"expected size {size}, got {arr.shape[0]}")
    return arr


def _require_self_dual(spec):
    if not spec.is_self_dual():
        raise ValueError(
            f"grid not self-dual: extent^2 = {spec.extent ** 2:.6g} != n = {spec.n}"
        )


def fourier(f):
    """Unitary Fourier transform in the 2-pi-in-exponent convention.

    Fhat(xi_j) = sum_k f(x_k) exp(-2 pi i xi_j . x_k) spacing^d, with the
    output re-centered on the (self-dual) grid.  Exactly unitary; the
    standard Gaussian is its fixed point.
    """
    _require_self_dual(f.spec)
    out = f.samples
    h = f.spec.spacing
    for ax in range(f.spec.d):
        out = np.fft.fftshift(
            np.fft.fft(np.fft.ifftshift(out, axes=ax), axis=ax), axes=ax
        ) * h
    return f.with_samples(out)


def inverse_fourier(f):
    """Exact inverse of fourier(): conjugate, transform, conjugate."""
    _require_self_dual(f.spec)
    return f.with_samples(np.conj(fourier(f.with_samples(np.conj(f.samples))).samples))


def partial_fourier_2(f):
    """Fourier transform in the second half of the variables only."""
    _require_self_dual(f.spec)
    if f.spec.d % 2:
        raise ValueError("partial transform needs an even number of variables")
    out = f.samples
    h = f.spec.spacing
    for ax in range(f.spec.d // 2, f.spec.d):
        out = np.fft.fftshift(
            np.fft.fft(np.fft.ifftshift(out, axes=ax), axis=ax), axes=ax
        ) * h
    return f.with_samples(out)


def chirp_mul(c, f, tol=1e-9):
    """Pointwise multiplication by exp(i pi x.Cx) for symmetric C.

    Preserves the 2-norm exactly.  Alias-free sampling needs
    max|C| <= n / (2 extent^2), i.e. 1/2 on a self-dual grid.
    """
    cm = _as_array(c, f.spec.d)
    if np.max(np.abs(cm - cm.T)) > tol * max(1.0, np.max(np.abs(cm))):
        raise ValueError("chirp matrix must be symmetric")
    pts = f.spec.points()
    q = np.einsum("...i,ij,...j->...", pts, cm, pts)
    return f.with_samples(np.exp(1j * np.pi * q) * f.samples)


def _integer_matrix(arr, tol=1e-9):
    r = np.rint(arr)
    return r.astype(int) if np.max(np.abs(arr - r)) <= tol else None


def grid_lookup(values, spec, mat):
    """Evaluate a grid table at the image points mat . x_k.

    Integer unimodular matrices wrap periodically (bijective, the periodic
    grid model); other integer matrices use zero extension (lookups outside
    the box read 0, matching contained signals); non-integer matrices fall
    back to nearest-sample with zero extension.
    """
    arr = np.asarray(mat, dtype=float)
    mi = _integer_matrix(arr)
    n = spec.n
    c = n // 2
    idx = np.indices(spec.shape).reshape(spec.d, -1).T
    if mi is not None:
        mapped = (idx - c) @ mi.T + c
        if abs(abs(np.linalg.det(arr)) - 1.0) < 1e-12:
            return values[tuple((mapped % n).T)].reshape(spec.shape)
    else:
        mapped = np.rint((idx - c) @ arr.T).astype(int) + c
    ok = np.all((mapped >= 0) & (mapped < n), axis=1)
    out = np.zeros(idx.shape[0], dtype=complex)
    out[ok] = values[tuple(mapped[ok].T)]
    return out.reshape(spec.shape)


def dilate(e, f, kernel_fallback=True):
    """T_E f = |det E|^(1/2) f(E .).

    Integer unimodular E acts by exact circular re-indexing (unitary);
    other integer E by zero-extended lookup; anything else goes through the
    sampled-kernel path unless kernel_fallback is disabled.
    """
    em = _as_array(e, f.spec.d)
    det = float(np.linalg.det(em))
    if abs(det) < 1e-12:
        raise ValueError("dilation matrix must be invertible")
    if _integer_matrix(em) is None:
        if not kernel_fallback:
            raise ValueError("grid-incompatible dilation and kernel fallback disabled")
        return _dilate_kernel(em, f)
    vals = grid_lookup(f.samples, f.spec, em)
    return f.with_samples(np.sqrt(abs(det)) * vals)


def tf_shift(f, z):
    """Time-frequency shift pi(x, xi) f = exp(2 pi i xi t) f(t - x).

    x must lie on the grid lattice and xi on the dual lattice; translation
    wraps periodically and modulation by dual-lattice frequencies respects
    the wrap exactly, so the operator is exactly unitary.
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    d = f.spec.d
    if z.size != 2 * d:
        raise ValueError(f"shift must have {2 * d} components")
    x, xi = z[:d], z[d:]
    h = f.spec.spacing
    steps = x / h
    if np.max(np.abs(steps - np.rint(steps))) > 1e-9:
        raise ValueError("off-grid translation")
    freqs = xi * f.spec.extent
    if np.max(np.abs(freqs - np.rint(freqs))) > 1e-9:
        raise ValueError("off-grid modulation")
    shifted = np.roll(f.samples, np.rint(steps).astype(int), axis=tuple(range(d)))
    phase = np.exp(2j * np.pi * (f.spec.points() @ xi))
    return f.with_samples(phase * shifted)


def schrodinger(f, z, tau=0.0):
    """rho(x, xi; tau) f = exp(2 pi i tau) exp(-pi i xi.x) pi(x, xi) f."""
    z = np.asarray(z, dtype=float).reshape(-1)
    d = f.spec.d
    scalar = np.exp(2j * np.pi * tau) * np.exp(-1j * np.pi * np.dot(z[d:], z[:d]))
    out = tf_shift(f, z)
    return out.with_samples(scalar * out.samples)


# ---------- generator words ----------


@dataclass(frozen=True)
class GeneratorFactor:
    """One word factor: 'J', 'V' (chirp block), 'D' (dilation block), or
    'FK' (full free matrix with invertible upper-right block).

    mat_inv caches the exact inverse of a 'D' block so reconstruction does
    not re-invert in floating point.
    """

    kind: str
    mat: np.ndarray | None = None
    mat_inv: np.ndarray | None = None

    def full_matrix(self, d):
        i = np.eye(d)
        z = np.zeros((d, d))
        if self.kind == "J":
            return np.block([[z, i], [-i, z]])
        if self.kind == "V":
            return np.block([[i, z], [self.mat, i]])
        if self.kind == "D":
            inv = self.mat_inv if self.mat_inv is not None else np.linalg.inv(self.mat)
            return np.block([[inv, z], [z, self.mat.T]])
        if self.kind == "FK":
            return np.array(self.mat, dtype=float)
        raise ValueError(f"unknown factor kind {self.kind!r}")


@dataclass(frozen=True)
class GeneratorWord:
    """Ordered factors whose matrix product equals the decomposed target."""

    d: int
    factors: tuple
    phase: complex = 1.0 + 0.0j

    def product(self):
        out = np.eye(2 * self.d)
        for fac in self.factors:
            out = out @ fac.full_matrix(self.d)
        return out


def _det_invertible(b):
    m = b.shape[0]
    scale = max(1.0, float(np.max(np.abs(b)))) if b.size else 1.0
    return abs(np.linalg.det(b)) > 1e-10 * scale ** m


def decompose_generators(s, tol=1e-9):
    """Write a symplectic matrix as a short word in {J, D, V} plus at most one
    free-kernel correction.

    If the upper-right block B is invertible the word is
    V_{D B^-1} D_{B^-1} J V_{B^-1 A}; if B = 0 it is V_{C A^-1} D_{A^-1};
    otherwise the matrix is right-multiplied by V_{tI}^T for the smallest
    t in {1, ..., 16} making At + B invertible, the free part is factored,
    and the correction V_{-tI}^T is appended as a free-kernel factor.

    Accepts a Matrix in either scalar mode or a float array; rational input
    runs the branch arithmetic exactly and only converts at the end.
    """
    if isinstance(s, Matrix):
        sm = s
    else:
        from .matrices import from_numpy

        sm = from_numpy(np.asarray(s, dtype=float))
    n = sm.rows
    if n != sm.cols or n % 2:
        raise ValueError("symplectic matrices are even-sized and square")
    d = n // 2
    from .symplectic import is_symplectic

    sym_tol = 0.0 if sm.mode == "rational" else tol * max(1.0, sm.max_abs()) ** 2
    if not is_symplectic(sm, tol=sym_tol):
        raise ValueError("input is not symplectic")
    factors = _decompose(sm, d)
    word = GeneratorWord(d=d, factors=tuple(factors))
    target = sm.to_numpy()
    if np.max(np.abs(word.product() - target)) > 1e-8 * max(1.0, sm.max_abs()):
        raise ValueError("generator decomposition failed to reconstruct the input")
    return word


def _near_zero(m, scale):
    if m.mode == "rational":
        return m.max_abs() == 0.0
    return m.max_abs() <= 1e-12 * max(1.0, scale)


def _prune(factors):
    out = []
    for fac in factors:
        if fac.kind == "V" and np.max(np.abs(fac.mat)) < 1e-14:
            continue
        if fac.kind == "D" and np.max(np.abs(fac.mat - np.eye(fac.mat.shape[0]))) < 1e-14:
            continue
        out.append(fac)
    return out


def _decompose(sm, d):
    a = sm.submatrix(0, d, 0, d)
    b = sm.submatrix(0, d, d, 2 * d)
    c = sm.submatrix(d, 2 * d, 0, d)
    dd = sm.submatrix(d, 2 * d, d, 2 * d)
    scale = sm.max_abs()
    if _near_zero(b, scale):
        ai = a.inv()
        return _prune(
            [
                GeneratorFactor("V", (c * ai).to_numpy()),
                GeneratorFactor("D", ai.to_numpy(), mat_inv=a.to_numpy()),
            ]
        )
    if b.is_invertible():
        bi = b.inv()
        return _prune(
            [
                GeneratorFactor("V", (dd * bi).to_numpy()),
                GeneratorFactor("D", bi.to_numpy(), mat_inv=b.to_numpy()),
                GeneratorFactor("J"),
                GeneratorFactor("V", (bi * a).to_numpy()),
            ]
        )
    ident = Matrix.identity(d, sm.mode)
    zero = Matrix.zeros(d, d, sm.mode)
    for t in range(1, 17):
        if (a.scale(t) + b).is_invertible():
            vpt = block_matrix([[ident, ident.scale(t)], [zero, ident]])
            free = _decompose(sm * vpt, d)
            corr = block_matrix([[ident, ident.scale(-t)], [zero, ident]])
            return free + [GeneratorFactor("FK", corr.to_numpy())]
    raise ValueError("no shear parameter t <= 16 regularizes the upper-right block")


# ---------- free quadratic-phase kernels ----------


def _kernel_key(sm, spec):
    return (sm.round(12).tobytes(), spec.d, spec.n, round(spec.extent, 12))


def _free_kernel_matrix(sm, spec):
    """Dense sampled kernel of the operator attached to a free symplectic
    matrix (invertible upper-right block):

        |det B|^{-1/2} exp(i pi (x.DB^-1 x - 2 B^-1 x.y + y.B^-1 A y)) cell
    """
    key = _kernel_key(sm, spec)
    hit = _KERNEL_CACHE.get(key)
    if hit is not None:
        return hit
    m = spec.d
    count = spec.n ** m
    if count * count > MAX_KERNEL_CELLS:
        raise ValueError(
            f"dense kernel would need {count}^2 cells; over the desk-scale budget"
        )
    a = sm[:m, :m]
    b = sm[:m, m:]
    dd = sm[m:, m:]
    bi = np.linalg.inv(b)
    pts = spec.points().reshape(-1, m)
    q_out = np.einsum("pi,ij,pj->p", pts, dd @ bi, pts)
    q_in = np.einsum("pi,ij,pj->p", pts, bi @ a, pts)
    cross = (pts @ bi.T) @ pts.T
    kern = np.exp(1j * np.pi * (q_out[:, None] - 2.0 * cross + q_in[None, :]))
    kern *= spec.cell / np.sqrt(abs(np.linalg.det(b)))
    if len(_KERNEL_CACHE) >= _KERNEL_CACHE_LIMIT:
        _KERNEL_CACHE.pop(next(iter(_KERNEL_CACHE)))
    _KERNEL_CACHE[key] = kern
    return kern


def free_kernel_apply(s, f):
    """Apply the sampled free kernel of s (upper-right block invertible)."""
    sm = _as_array(s, 2 * f.spec.d)
    if not _det_invertible(sm[: f.spec.d, f.spec.d :]):
        raise ValueError("free kernel needs an invertible upper-right block")
    kern = _free_kernel_matrix(sm, f.spec)
    return f.with_samples((kern @ f.samples.reshape(-1)).reshape(f.spec.shape))


def _dilate_kernel(em, f):
    """Grid-incompatible dilation via one free kernel and one exact Fourier.

    Two algebraically equal routes exist; pick the one whose auxiliary
    evaluation points stay inside the frequency band (operator norm <= 1
    side), which controls quadrature aliasing.
    """
    d = f.spec.d
    i = np.eye(d)
    z = np.zeros((d, d))
    d_e = np.block([[np.linalg.inv(em), z], [z, em.T]])
    jm = np.block([[z, i], [-i, z]])
    norm_contract = np.linalg.norm(np.linalg.inv(em).T, 2)
    norm_expand = np.linalg.norm(em, 2)
    if norm_contract <= norm_expand:
        return inverse_fourier(free_kernel_apply(jm @ d_e, f))
    return free_kernel_apply(d_e @ jm, inverse_fourier(f))


def metaplectic_apply(s, f, word=None):
    """Apply the metaplectic operator of a symplectic matrix to a signal.

    The generator word is applied rightmost factor first: J by FFT, V by
    chirp multiplication, D by exact re-indexing or the routed kernel
    fallback, FK by a dense kernel.  Output is defined up to a global
    unit-modulus phase.
    """
    if word is None:
        word = decompose_generators(s)
    if word.d != f.spec.d:
        raise ValueError(
            f"matrix level {word.d} does not match signal dimension {f.spec.d}"
        )
    out = f
    for fac in reversed(word.factors):
        if fac.kind == "J":
            out = fourier(out)
        elif fac.kind == "V":
            out = chirp_mul(fac.mat, out)
        elif fac.kind == "D":
            out = dilate(fac.mat, out, kernel_fallback=True)
        else:
            out = free_kernel_apply(fac.mat, out)
    return out
