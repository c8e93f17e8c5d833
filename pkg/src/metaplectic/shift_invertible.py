"""Shift-invertibility analysis of 4d x 4d symplectic matrices.

A phase-space distribution matrix is shift-invertible when the paired
submatrix e (built from blocks (1,1), (1,3), (2,1), (2,3)) is invertible.
Every such matrix factors as

    A = D_{e^-1} V_m V_L^T Lift(g)

with e invertible, m symmetric and g symplectic at half the level, and the
triple (e, m, g) <-> A correspondence is a bijection, realized here by
factorize() and compose_triple().
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import RATIONAL, Matrix, block_matrix
from .symplectic import (
    block_swap,
    chirp_matrix,
    dilation_matrix,
    is_symplectic,
    lift_matrix,
    paired_submatrices,
    quarter_blocks,
    symplectic_form,
)

_SYMPLECTIC_TOL = 1e-9


def _require_symplectic(a, what="input"):
    tol = 0.0 if a.mode == RATIONAL else _SYMPLECTIC_TOL * max(1.0, a.max_abs()) ** 2
    if not is_symplectic(a, tol=tol):
        raise ValueError(f"{what} is not symplectic")


def shift_block(a):
    """The 2d x 2d submatrix whose invertibility defines shift-invertibility."""
    return paired_submatrices(a).e


def is_shift_invertible(a):
    _require_symplectic(a)
    return shift_block(a).is_invertible()


def chirp_twist(a):
    """Symmetric matrix governing the quadratic phase in the covariance law.

    Assembled from the d x d blocks of a; symmetric whenever a is symplectic.
    """
    b = quarter_blocks(a)
    m11 = b.block(1, 1).T * b.block(3, 1) + b.block(2, 1).T * b.block(4, 1)
    m12 = b.block(3, 1).T * b.block(1, 3) + b.block(4, 1).T * b.block(2, 3)
    m21 = b.block(1, 3).T * b.block(3, 1) + b.block(2, 3).T * b.block(4, 1)
    m22 = b.block(1, 3).T * b.block(3, 3) + b.block(2, 3).T * b.block(4, 3)
    return block_matrix([[m11, m12], [m21, m22]])


def window_symplectic(a):
    """g = L e^-1 eps, the level-d symplectic factor acting on the window side."""
    sub = paired_submatrices(a)
    if not sub.e.is_invertible():
        raise ValueError("not shift-invertible: shift block is singular")
    d2 = sub.e.rows  # = 2d
    return block_swap(d2 // 2, a.mode) * sub.e.inv() * sub.eps


def reflect_conjugate(g):
    """Negate the two off-diagonal blocks of an even-sized square matrix.

    This is conjugation by diag(I, -I): the projection of the operator
    u -> conj(G-hat conj(u)).  An involution; preserves symplecticity.
    """
    if g.rows != g.cols or g.rows % 2:
        raise ValueError("expected an even square matrix")
    d = g.rows // 2
    lam = block_matrix(
        [
            [Matrix.identity(d, g.mode), Matrix.zeros(d, d, g.mode)],
            [Matrix.zeros(d, d, g.mode), -Matrix.identity(d, g.mode)],
        ]
    )
    return lam * g * lam


def deformation(a):
    """Symplectic projection of the window deformation operator: J conj(g).

    The deformation operator itself is fixed only up to sign by the two-fold
    cover; downstream comparisons are modulus-based.
    """
    g = window_symplectic(a)
    return symplectic_form(g.rows // 2, a.mode) * reflect_conjugate(g)


@dataclass(frozen=True)
class CGTriple:
    """(e, c, s): invertible x symmetric x symplectic, the factorization data."""

    e: Matrix
    c: Matrix
    s: Matrix


@dataclass(frozen=True)
class ShiftInvertibleData:
    e: Matrix
    m: Matrix
    g: Matrix
    deformation: Matrix


def compose_triple(e, c, s):
    """A = D_{e^-1} V_c V_L^T Lift(s); the inverse of factorize.

    The result is shift-invertible with shift block exactly e and window
    factor exactly s.
    """
    if e.rows != e.cols or e.rows % 2:
        raise ValueError("e must be square of even size")
    if not e.is_invertible():
        raise ValueError("e must be invertible")
    if not c.is_symmetric(0.0 if c.mode == RATIONAL else 1e-9):
        raise ValueError("c must be symmetric")
    d = e.rows // 2
    _require_symplectic(s, "s")
    if s.rows != 2 * d:
        raise ValueError(f"s must be {2 * d}x{2 * d} to match e")
    vlt = chirp_matrix(block_swap(d, e.mode), transposed=True)
    return dilation_matrix(e.inv()) * chirp_matrix(c) * vlt * lift_matrix(s)


def factorize(a):
    """Factor a shift-invertible matrix into its CGTriple (e, c, s).

    The chirp slot is verified by exact reconstruction; compose_triple on
    the returned triple reproduces a.
    """
    _require_symplectic(a)
    sub = paired_submatrices(a)
    if not sub.e.is_invertible():
        raise ValueError("not shift-invertible: shift block is singular")
    e = sub.e
    m = chirp_twist(a)
    g = block_swap(e.rows // 2, a.mode) * e.inv() * sub.eps
    tol = 0.0 if a.mode == RATIONAL else 1e-9 * max(1.0, a.max_abs())
    for cand in (m, m + block_swap(e.rows // 2, a.mode)):
        if compose_triple(e, cand, g).equals(a, tol):
            return CGTriple(e=e, c=cand, s=g)
    raise ValueError("factorization failed to reconstruct the input")


def reconstruct_blocks(e, c, s):
    """Paired submatrices of compose_triple(e, c, s), from the closed formulas.

    eps = e L s;  f = e^-T (c + U);  feps = e^-T (c + U^T) L s,
    with U the nilpotent block [[0, I], [0, 0]].
    """
    from .symplectic import Submatrices

    d = e.rows // 2
    i = Matrix.identity(d, e.mode)
    z = Matrix.zeros(d, d, e.mode)
    u = block_matrix([[z, i], [z, z]])
    lw = block_swap(d, e.mode)
    e_inv_t = e.inv().T
    return Submatrices(
        e=e,
        f=e_inv_t * (c + u),
        eps=e * lw * s,
        feps=e_inv_t * (c + u.T) * lw * s,
    )


def shift_invertible_data(a):
    """Bundle (e, m, g, deformation) for a shift-invertible matrix."""
    trip = factorize(a)
    return ShiftInvertibleData(
        e=trip.e,
        m=trip.c,
        g=trip.s,
        deformation=symplectic_form(trip.s.rows // 2, a.mode) * reflect_conjugate(trip.s),
    )
