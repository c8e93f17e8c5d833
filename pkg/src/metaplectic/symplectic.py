"""Named symplectic matrices, the defining check, and block extraction.

All constructors default to exact rational mode.  Sizes follow one rule:
a "level d" object acts on functions of d variables and is a 2d x 2d
matrix; phase-space distributions of d-variable signals live at level 2d,
so their matrices are 4d x 4d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .matrices import FLOAT, RATIONAL, Matrix, block_matrix


def symplectic_form(d, mode=RATIONAL):
    """J = [[0, I], [-I, 0]], the standard symplectic form at level d."""
    i = Matrix.identity(d, mode)
    z = Matrix.zeros(d, d, mode)
    return block_matrix([[z, i], [-i, z]])


def block_swap(d, mode=RATIONAL):
    """L = [[0, I], [I, 0]].  Swaps the two coordinate blocks; not symplectic."""
    i = Matrix.identity(d, mode)
    z = Matrix.zeros(d, d, mode)
    return block_matrix([[z, i], [i, z]])


def interleave_permutation(d, mode=RATIONAL):
    """4d x 4d permutation swapping the second and third d-blocks; not symplectic."""
    i = Matrix.identity(d, mode)
    z = Matrix.zeros(d, d, mode)
    return block_matrix(
        [
            [i, z, z, z],
            [z, z, i, z],
            [z, i, z, z],
            [z, z, z, i],
        ]
    )


def dilation_matrix(e):
    """D_E = [[E^-1, 0], [0, E^T]] for invertible E; projection of the dilation."""
    if not e.is_invertible():
        raise ValueError("dilation block must be invertible")
    z = Matrix.zeros(e.rows, e.cols, e.mode)
    return block_matrix([[e.inv(), z], [z, e.T]])


def chirp_matrix(c, transposed=False, tol=0.0):
    """V_C = [[I, 0], [C, I]] for symmetric C; V_C^T with transposed=True."""
    if c.rows != c.cols:
        raise ValueError("chirp block must be square")
    if not c.is_symmetric(tol if c.mode == FLOAT else 0.0):
        raise ValueError("chirp block must be symmetric")
    i = Matrix.identity(c.rows, c.mode)
    z = Matrix.zeros(c.rows, c.cols, c.mode)
    if transposed:
        return block_matrix([[i, c], [z, i]])
    return block_matrix([[i, z], [c, i]])


def stft_matrix(d, mode=RATIONAL):
    """The 4d x 4d matrix whose metaplectic image sends f (x) conj(g) to the STFT."""
    i = Matrix.identity(d, mode)
    z = Matrix.zeros(d, d, mode)
    return block_matrix(
        [
            [i, -i, z, z],
            [z, z, i, i],
            [z, z, z, -i],
            [-i, z, z, z],
        ]
    )


def tau_wigner_matrix(tau, d=1, mode=RATIONAL):
    """4d x 4d matrix of the tau-Wigner family; tau=1/2 is the Wigner transform."""
    if mode == RATIONAL:
        t = Fraction(tau) if not isinstance(tau, float) else Fraction(tau).limit_denominator(1 << 30)
        one = Fraction(1)
    else:
        t = float(tau)
        one = 1.0
    i = Matrix.identity(d, mode)
    z = Matrix.zeros(d, d, mode)
    return block_matrix(
        [
            [i.scale(one - t), i.scale(t), z, z],
            [z, z, i.scale(t), i.scale(-(one - t))],
            [z, z, i, i],
            [-i, i, z, z],
        ]
    )


def partial_fourier_matrix(d, mode=RATIONAL):
    """4d x 4d projection of the Fourier transform in the second variables."""
    i = Matrix.identity(d, mode)
    z = Matrix.zeros(d, d, mode)
    return block_matrix(
        [
            [i, z, z, z],
            [z, z, z, i],
            [z, z, i, z],
            [z, -i, z, z],
        ]
    )


def lift_matrix(g, tol=1e-9):
    """Embed a level-d symplectic G into level 2d, acting on the second variables.

    The lifted operator satisfies Lift(G)-hat (f (x) g) = f (x) (G-hat g).
    """
    if g.rows != g.cols or g.rows % 2:
        raise ValueError("lift expects an even-sized square matrix")
    d = g.rows // 2
    if not is_symplectic(g, tol=0.0 if g.mode == RATIONAL else tol):
        raise ValueError("lift expects a symplectic matrix")
    i = Matrix.identity(d, g.mode)
    z = Matrix.zeros(d, d, g.mode)
    g11 = g.submatrix(0, d, 0, d)
    g12 = g.submatrix(0, d, d, 2 * d)
    g21 = g.submatrix(d, 2 * d, 0, d)
    g22 = g.submatrix(d, 2 * d, d, 2 * d)
    return block_matrix(
        [
            [i, z, z, z],
            [z, g11, z, g12],
            [z, z, i, z],
            [z, g21, z, g22],
        ]
    )


_NAMED = {
    "symplectic-form": lambda d, mode, **kw: symplectic_form(d, mode),
    "block-swap": lambda d, mode, **kw: block_swap(d, mode),
    "interleave": lambda d, mode, **kw: interleave_permutation(d, mode),
    "stft": lambda d, mode, **kw: stft_matrix(d, mode),
    "partial-fourier": lambda d, mode, **kw: partial_fourier_matrix(d, mode),
    "tau-wigner": lambda d, mode, tau=None, **kw: tau_wigner_matrix(tau, d, mode),
    "dilation": lambda d, mode, e=None, **kw: dilation_matrix(e),
    "chirp": lambda d, mode, c=None, **kw: chirp_matrix(c),
    "chirp-t": lambda d, mode, c=None, **kw: chirp_matrix(c, transposed=True),
    "lift": lambda d, mode, s=None, **kw: lift_matrix(s),
}


def named_matrix(kind, d=1, mode=RATIONAL, **kwargs):
    """Dispatch constructor used by the CLI.  kind is one of _NAMED's keys."""
    try:
        builder = _NAMED[kind]
    except KeyError:
        raise ValueError(f"unknown matrix kind {kind!r}; choose from {sorted(_NAMED)}")
    return builder(d, mode, **kwargs)


def is_symplectic(m, d=None, tol=0.0):
    """True iff m^T J m = J, exactly (rational) or within max-norm tol (float)."""
    if m.rows != m.cols or m.rows % 2:
        raise ValueError(f"symplectic test needs an even square matrix, got {m.shape}")
    if d is not None and m.rows != 2 * d:
        raise ValueError(f"expected a {2 * d}x{2 * d} matrix, got {m.shape}")
    j = symplectic_form(m.rows // 2, m.mode)
    return (m.T * j * m).max_abs_diff(j) <= tol


@dataclass(frozen=True)
class BlockView:
    """The sixteen d x d blocks of a 4d x 4d matrix, row-major."""

    d: int
    grid: tuple  # 4-tuple of 4-tuples of Matrix

    def block(self, i, j):
        """1-based block access."""
        return self.grid[i - 1][j - 1]


def quarter_blocks(m):
    if m.rows != m.cols or m.rows % 4:
        raise ValueError(f"block view needs a 4d x 4d matrix, got {m.shape}")
    d = m.rows // 4
    grid = tuple(
        tuple(m.submatrix(i * d, (i + 1) * d, j * d, (j + 1) * d) for j in range(4))
        for i in range(4)
    )
    return BlockView(d, grid)


def reassemble(view):
    return block_matrix([list(row) for row in view.grid])


@dataclass(frozen=True)
class Submatrices:
    """The four 2d x 2d pairings of a 4d x 4d matrix.

    e pairs block-columns (1,3) of the upper half, f of the lower half;
    eps and feps pair block-columns (2,4).  For symplectic sources:
    e^T f - f^T e = J, eps^T feps - feps^T eps = J, e^T feps - f^T eps = 0.
    """

    e: Matrix
    f: Matrix
    eps: Matrix
    feps: Matrix


def paired_submatrices(m):
    b = quarter_blocks(m)
    return Submatrices(
        e=block_matrix([[b.block(1, 1), b.block(1, 3)], [b.block(2, 1), b.block(2, 3)]]),
        f=block_matrix([[b.block(3, 1), b.block(3, 3)], [b.block(4, 1), b.block(4, 3)]]),
        eps=block_matrix([[b.block(1, 2), b.block(1, 4)], [b.block(2, 2), b.block(2, 4)]]),
        feps=block_matrix([[b.block(3, 2), b.block(3, 4)], [b.block(4, 2), b.block(4, 4)]]),
    )


# ---------- random generation (seeded, exact) ----------


def random_invertible(n, rng, lo=-2, hi=2, mode=RATIONAL):
    """Small-entry invertible matrix; retries until the exact det is nonzero."""
    while True:
        m = Matrix.rational([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if m.det() != 0:
            return m if mode == RATIONAL else m.to_float()


def random_symmetric(n, rng, lo=-2, hi=2, mode=RATIONAL):
    vals = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            vals[i][j] = vals[j][i] = rng.randint(lo, hi)
    m = Matrix.rational(vals)
    return m if mode == RATIONAL else m.to_float()


def random_unimodular(n, rng, shears=4):
    """Integer matrix with det +-1, built from row shears and signed swaps."""
    m = Matrix.identity(n, RATIONAL)
    for _ in range(shears):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if n == 1:
            m = m.scale(rng.choice([1, -1]))
            continue
        shear = Matrix.identity(n, RATIONAL).entries()
        shear[i][j] = Fraction(rng.choice([-2, -1, 1, 2]))
        m = m * Matrix.rational(shear)
    if rng.random() < 0.5:
        flip = Matrix.identity(n, RATIONAL).entries()
        flip[0][0] = Fraction(-1)
        m = m * Matrix.rational(flip)
    return m


def random_symplectic_word(d, rng, length=8):
    """Random word in {J, D_E, V_C} with small exact entries; returns its product.

    These three families generate the symplectic group, so products of them
    sample (non-uniformly) from Sp(d, R).
    """
    m = Matrix.identity(2 * d, RATIONAL)
    n_factors = rng.randint(1, length)
    for _ in range(n_factors):
        pick = rng.randrange(3)
        if pick == 0:
            m = m * symplectic_form(d)
        elif pick == 1:
            m = m * dilation_matrix(random_unimodular(d, rng, shears=2))
        else:
            m = m * chirp_matrix(random_symmetric(d, rng, lo=-1, hi=1))
    return m
