"""Dense matrix algebra with two scalar modes: exact rationals and float64.

Rational mode backs every identity-level theorem check (zero tolerance);
float mode backs the FFT-adjacent numerics.  A matrix is homogeneous in
its scalar mode and immutable after construction.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

RATIONAL = "rational"
FLOAT = "float64"


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if x != int(x):
            raise TypeError(f"refusing to coerce non-integral float {x!r} to rational")
        return Fraction(int(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as rational scalar")


class Matrix:
    """Rectangular matrix, either exact rational or float64.

    Arithmetic never mixes modes; convert explicitly with to_float().
    """

    __slots__ = ("mode", "rows", "cols", "_frac", "_arr")

    def __init__(self, mode, rows, cols, frac=None, arr=None):
        self.mode = mode
        self.rows = rows
        self.cols = cols
        self._frac = frac
        self._arr = arr

    # ---------- constructors ----------

    @classmethod
    def rational(cls, entries):
        frac = tuple(tuple(_as_fraction(x) for x in row) for row in entries)
        rows = len(frac)
        if rows == 0:
            raise ValueError("empty matrix")
        cols = len(frac[0])
        if any(len(r) != cols for r in frac):
            raise ValueError("ragged rows")
        return cls(RATIONAL, rows, cols, frac=frac)

    @classmethod
    def from_float(cls, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("expected a non-empty 2-D array")
        arr.setflags(write=False)
        return cls(FLOAT, arr.shape[0], arr.shape[1], arr=arr)

    @classmethod
    def identity(cls, n, mode=RATIONAL):
        if mode == RATIONAL:
            one, zero = Fraction(1), Fraction(0)
            return cls.rational(
                [[one if i == j else zero for j in range(n)] for i in range(n)]
            )
        return cls.from_float(np.eye(n))

    @classmethod
    def zeros(cls, rows, cols, mode=RATIONAL):
        if mode == RATIONAL:
            zero = Fraction(0)
            return cls.rational([[zero] * cols for _ in range(rows)])
        return cls.from_float(np.zeros((rows, cols)))

    @classmethod
    def diagonal(cls, values, mode=RATIONAL):
        n = len(values)
        if mode == RATIONAL:
            vals = [_as_fraction(v) for v in values]
            return cls.rational(
                [[vals[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
            )
        return cls.from_float(np.diag(np.array(values, dtype=float)))

    # ---------- accessors ----------

    def __getitem__(self, ij):
        i, j = ij
        if self.mode == RATIONAL:
            return self._frac[i][j]
        return float(self._arr[i, j])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def entries(self):
        """Nested lists of entries (Fractions or floats)."""
        if self.mode == RATIONAL:
            return [list(r) for r in self._frac]
        return self._arr.tolist()

    def to_numpy(self):
        if self.mode == FLOAT:
            return np.array(self._arr, dtype=float)
        return np.array([[float(x) for x in row] for row in self._frac])

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return Matrix.from_float(self.to_numpy())

    # ---------- arithmetic ----------

    def _check_mode(self, other):
        if self.mode != other.mode:
            raise ValueError(f"mixed scalar modes: {self.mode} vs {other.mode}")

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check_mode(other)
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
            if self.mode == RATIONAL:
                a, b = self._frac, other._frac
                prod = tuple(
                    tuple(
                        sum(a[i][k] * b[k][j] for k in range(self.cols))
                        for j in range(other.cols)
                    )
                    for i in range(self.rows)
                )
                return Matrix(RATIONAL, self.rows, other.cols, frac=prod)
            return Matrix.from_float(self._arr @ other._arr)
        return self.scale(other)

    __matmul__ = __mul__

    def scale(self, c):
        if self.mode == RATIONAL:
            c = _as_fraction(c)
            return Matrix.rational([[x * c for x in row] for row in self._frac])
        return Matrix.from_float(self._arr * float(c))

    def __add__(self, other):
        self._check_mode(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        if self.mode == RATIONAL:
            return Matrix.rational(
                [
                    [x + y for x, y in zip(r1, r2)]
                    for r1, r2 in zip(self._frac, other._frac)
                ]
            )
        return Matrix.from_float(self._arr + other._arr)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(-1)

    @property
    def T(self):
        if self.mode == RATIONAL:
            return Matrix.rational(list(map(list, zip(*self._frac))))
        return Matrix.from_float(self._arr.T)

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        if self.mode == FLOAT:
            return float(np.linalg.det(self._arr))
        a = [list(r) for r in self._frac]
        n = self.rows
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det *= a[col][col]
            inv = Fraction(1) / a[col][col]
            for r in range(col + 1, n):
                if a[r][col] != 0:
                    f = a[r][col] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det

    def inv(self):
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        if self.mode == FLOAT:
            if not self.is_invertible():
                raise ValueError("singular matrix")
            return Matrix.from_float(np.linalg.inv(self._arr))
        n = self.rows
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._frac)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                raise ValueError("singular matrix")
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
            inv = Fraction(1) / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return Matrix.rational([row[n:] for row in a])

    def is_invertible(self, rel_tol=1e-10):
        """Exact rank test in rational mode; in float mode singular means
        |det| <= rel_tol * max_abs^n (scale-aware cutoff)."""
        if self.rows != self.cols:
            return False
        if self.mode == RATIONAL:
            return self.det() != 0
        return abs(self.det()) > rel_tol * self.max_abs() ** self.rows

    # ---------- comparisons / norms ----------

    def max_abs(self):
        if self.mode == RATIONAL:
            return float(max((abs(x) for row in self._frac for x in row), default=0))
        return float(np.max(np.abs(self._arr))) if self._arr.size else 0.0

    def max_abs_diff(self, other):
        self._check_mode(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.mode == RATIONAL:
            return float(
                max(
                    abs(x - y)
                    for r1, r2 in zip(self._frac, other._frac)
                    for x, y in zip(r1, r2)
                )
            )
        return float(np.max(np.abs(self._arr - other._arr)))

    def equals(self, other, tol=0.0):
        """Exact equality for tol == 0 (rational), max-norm tolerance otherwise."""
        if self.shape != other.shape or self.mode != other.mode:
            return False
        if self.mode == RATIONAL and tol == 0.0:
            return self._frac == other._frac
        return self.max_abs_diff(other) <= tol

    def is_symmetric(self, tol=0.0):
        return self.rows == self.cols and self.equals(self.T, tol)

    # ---------- block surgery ----------

    def submatrix(self, r0, r1, c0, c1):
        if self.mode == RATIONAL:
            return Matrix.rational([list(r[c0:c1]) for r in self._frac[r0:r1]])
        return Matrix.from_float(self._arr[r0:r1, c0:c1])

    def __repr__(self):
        return f"Matrix({self.mode}, {self.rows}x{self.cols})"


def block_matrix(grid):
    """Assemble a matrix from a 2-D grid of conforming blocks."""
    modes = {b.mode for row in grid for b in row}
    if len(modes) != 1:
        raise ValueError("blocks have mixed scalar modes")
    mode = modes.pop()
    if mode == RATIONAL:
        rows = []
        for brow in grid:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ValueError("block row heights disagree")
            for i in range(h):
                rows.append([x for b in brow for x in b._frac[i]])
        return Matrix.rational(rows)
    return Matrix.from_float(np.block([[b._arr for b in brow] for brow in grid]))


def from_numpy(arr):
    return Matrix.from_float(np.asarray(arr, dtype=float))
