import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from fermisim.errors import ShapeError, ValidationError
from fermisim.linalg import (block_matrix, check_antisymmetric, determinant,
                             matrix_exponential, pfaffian, skew_canonical_form)


def cofactor_det(a):
    n = a.shape[0]
    if n == 0:
        return 1.0
    if n == 1:
        return a[0, 0]
    return sum((-1) ** j * a[0, j] * cofactor_det(np.delete(a[1:], j, axis=1)) for j in range(n))


def brute_pfaffian(a):
    """Sum over perfect matchings with the crossing sign."""
    n = a.shape[0]
    if n == 0:
        return 1.0
    if n % 2:
        return 0.0
    total = 0.0
    for j in range(1, n):
        rest = [k for k in range(1, n) if k != j]
        total += (-1) ** (j - 1) * a[0, j] * brute_pfaffian(a[np.ix_(rest, rest)])
    return total


def skew(rng, m, complex_=True):
    a = rng.normal(size=(m, m))
    if complex_:
        a = a + 1j * rng.normal(size=(m, m))
    return a - a.T


class TestDeterminant:
    def test_identity(self):
        assert determinant(np.eye(3)) == pytest.approx(1.0)

    def test_two_by_two(self):
        a, b, c, d = 1.5, -2.0, 0.25 + 1j, 3.0
        assert determinant(np.array([[a, b], [c, d]])) == pytest.approx(a * d - b * c)

    def test_matches_cofactor_expansion(self, rng):
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        assert abs(determinant(a) - cofactor_det(a)) <= 1e-10

    def test_empty_is_one(self):
        assert determinant(np.zeros((0, 0))) == 1

    def test_non_square(self):
        with pytest.raises(ShapeError):
            determinant(np.zeros((2, 3)))


class TestPfaffian:
    def test_odd_dimension_is_exactly_zero(self, rng):
        assert pfaffian(skew(rng, 3)) == 0
        assert pfaffian(skew(rng, 7)) == 0

    def test_two_by_two(self):
        assert pfaffian(np.array([[0, 2.5 - 1j], [-2.5 + 1j, 0]])) == 2.5 - 1j

    def test_four_by_four_closed_form(self, rng):
        a = skew(rng, 4)
        expect = a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
        assert abs(pfaffian(a) - expect) <= 1e-14

    def test_matches_matching_expansion(self, rng):
        for m in (2, 4, 6, 8):
            a = skew(rng, m)
            assert abs(pfaffian(a) - brute_pfaffian(a)) <= 1e-10 * max(1, abs(brute_pfaffian(a)))

    def test_zero_pivot_needs_pivoting(self):
        # a[0,1] = 0 forces a row swap
        a = np.zeros((4, 4))
        a[0, 2], a[1, 3] = 2.0, 3.0
        a = a - a.T
        assert pfaffian(a) == pytest.approx(-6.0)

    @given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
    def test_sparse_complex_matrices_stay_finite(self, m, seed):
        # many exact zeros: the pivot must be the entry actually divided by
        rng = np.random.default_rng(seed)
        a = skew(rng, 2 * m) * (rng.random((2 * m, 2 * m)) < 0.3)
        a = np.triu(a, 1) - np.triu(a, 1).T
        with np.errstate(all="raise"):
            pf = pfaffian(a)
        assert abs(pf - brute_pfaffian(a)) <= 1e-10 * max(1, abs(pf))

    def test_singular(self):
        assert pfaffian(np.zeros((6, 6))) == 0

    def test_rejects_non_antisymmetric(self):
        with pytest.raises(ValidationError):
            pfaffian(np.ones((2, 2)))

    @given(st.integers(1, 12), st.integers(0, 2 ** 32 - 1))
    def test_square_is_determinant(self, m, seed):
        a = skew(np.random.default_rng(seed), 2 * m)
        pf, det = pfaffian(a), determinant(a)
        assert abs(pf * pf - det) <= 1e-8 * max(abs(det), 1e-300)

    @given(st.integers(0, 2 ** 32 - 1))
    def test_congruence(self, seed):
        # Pf(B A B^T) = det(B) Pf(A); with B a permutation this is the sign rule
        rng = np.random.default_rng(seed)
        a = skew(rng, 6)
        perm = rng.permutation(6)
        p = np.eye(6)[perm]
        sign = np.linalg.det(p)
        assert abs(pfaffian(p @ a @ p.T) - sign * pfaffian(a)) <= 1e-9 * max(1, abs(pfaffian(a)))

    def test_direct_sum_factorises(self, rng):
        a, b = skew(rng, 4), skew(rng, 6)
        full = scipy.linalg.block_diag(a, b)
        assert abs(pfaffian(full) - pfaffian(a) * pfaffian(b)) <= 1e-10


class TestExponential:
    def test_zero(self):
        assert np.allclose(matrix_exponential(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        th = np.array([0.3, -1.2, 2.0])
        assert np.allclose(matrix_exponential(np.diag(1j * th)), np.diag(np.exp(1j * th)),
                           atol=1e-14)

    @pytest.mark.parametrize("scale", [1e-4, 0.1, 1.0, 10.0, 200.0])
    def test_against_scipy(self, rng, scale):
        a = scale * (rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
        ref = scipy.linalg.expm(a)
        assert np.max(np.abs(matrix_exponential(a) - ref)) <= 1e-9 * max(1, np.max(np.abs(ref)))

    def test_antisymmetric_gives_rotation(self, rng):
        r = matrix_exponential(skew(rng, 8, complex_=False))
        assert np.allclose(r @ r.T, np.eye(8), atol=1e-12)
        assert np.linalg.det(r) == pytest.approx(1.0)


class TestCanonicalForm:
    def test_zero(self):
        w, eps = skew_canonical_form(np.zeros((4, 4)))
        assert np.allclose(eps, 0)
        assert np.allclose(w @ w.T, np.eye(4))

    def test_single_block(self):
        w, eps = skew_canonical_form(np.array([[0, 0.7], [-0.7, 0]]))
        assert eps == pytest.approx([0.7])
        assert np.allclose(w.T @ block_matrix(eps) @ w, [[0, 0.7], [-0.7, 0]])

    @given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
    def test_reconstructs(self, m, seed):
        a = skew(np.random.default_rng(seed), 2 * m, complex_=False)
        w, eps = skew_canonical_form(a)
        assert np.all(np.asarray(eps) >= 0)
        assert np.allclose(w @ w.T, np.eye(2 * m), atol=1e-10)
        assert np.allclose(w @ a @ w.T, block_matrix(eps), atol=1e-10)

    def test_degenerate_zero_blocks(self):
        a = np.zeros((6, 6))
        a[0, 1], a[1, 0] = 1.0, -1.0
        w, eps = skew_canonical_form(a)
        assert sorted(np.round(eps, 12)) == [0, 0, 1]
        assert np.allclose(w @ a @ w.T, block_matrix(eps), atol=1e-12)

    def test_check_antisymmetric(self):
        check_antisymmetric(np.array([[0, 1], [-1, 0]]))
        with pytest.raises(ValidationError):
            check_antisymmetric(np.array([[0, 1], [-1, 1e-3]]))
