"""Exact/float matrix plumbing."""

import random
from fractions import Fraction

import numpy as np
import pytest

from metaplectic import Matrix, block_matrix, from_numpy
from metaplectic.symplectic import random_invertible


def test_rational_arithmetic_is_exact():
    m = Matrix.rational([["1/3", 2], [5, "-7/2"]])
    third = Fraction(1, 3)
    assert m[0, 0] == third
    prod = m * m.inv()
    assert prod.equals(Matrix.identity(2))


def test_inverse_times_self_random():
    rng = random.Random(1)
    for _ in range(50):
        m = random_invertible(3, rng)
        assert (m.inv() * m).equals(Matrix.identity(3))
        assert (m * m.inv()).equals(Matrix.identity(3))


def test_det_multiplicative_and_singular():
    rng = random.Random(2)
    a = random_invertible(3, rng)
    b = random_invertible(3, rng)
    assert (a * b).det() == a.det() * b.det()
    singular = Matrix.rational([[1, 2], [2, 4]])
    assert singular.det() == 0
    with pytest.raises(ValueError):
        singular.inv()


def test_mode_mixing_rejected():
    with pytest.raises(ValueError):
        Matrix.identity(2) * Matrix.identity(2, "float64")
    with pytest.raises(TypeError):
        Matrix.rational([[0.5]])


def test_block_and_submatrix_roundtrip():
    rng = random.Random(3)
    m = random_invertible(4, rng)
    blocks = [[m.submatrix(2 * i, 2 * i + 2, 2 * j, 2 * j + 2) for j in range(2)] for i in range(2)]
    assert block_matrix(blocks).equals(m)


def test_float_invertibility_is_scale_aware():
    # |det| <= 1e-10 * max_abs^n classifies as singular
    assert Matrix.from_float(np.diag([1e-6, 1e-6])).is_invertible()
    assert not Matrix.from_float(np.zeros((2, 2))).is_invertible()
    assert not Matrix.from_float([[1.0, 1.0], [1.0, 1.0 + 1e-14]]).is_invertible()


def test_transpose_and_scale():
    m = Matrix.rational([[1, 2], [3, 4]])
    assert m.T.T.equals(m)
    assert m.scale(Fraction(1, 2)).scale(2).equals(m)
    f = m.to_float()
    assert f.mode == "float64"
    assert np.allclose(f.to_numpy(), [[1, 2], [3, 4]])


def test_max_abs_diff_and_equals_tol():
    a = from_numpy(np.eye(2))
    b = from_numpy(np.eye(2) + 1e-13)
    assert a.max_abs_diff(b) < 1e-12
    assert a.equals(b, tol=1e-12)
    assert not a.equals(b, tol=1e-14)
