import numpy as np
import pytest

import oracle
from sepchk import gf2
from sepchk.errors import AmbientMismatchError
from sepchk.gf2 import Gf2Matrix, Gf2Subspace

CYCLE3 = Gf2Matrix.from_dense([[1, 0, 1], [1, 1, 0], [0, 1, 1]])  # vertices x edges of a 3-cycle


def rand_matrix(rng, r, c, p=0.4):
    return (rng.random((r, c)) < p).astype(np.uint8)


class TestMatrix:
    def test_dense_round_trip_across_word_boundaries(self):
        rng = np.random.default_rng(1)
        for cols in (1, 63, 64, 65, 130):
            a = rand_matrix(rng, 5, cols)
            assert np.array_equal(Gf2Matrix.from_dense(a).to_dense(), a)

    def test_matmul_matches_integer_product_mod_2(self):
        rng = np.random.default_rng(2)
        a, b = rand_matrix(rng, 7, 70), rand_matrix(rng, 70, 9)
        got = (Gf2Matrix.from_dense(a) @ Gf2Matrix.from_dense(b)).to_dense()
        assert np.array_equal(got, (a.astype(int) @ b.astype(int)) % 2)

    def test_matvec(self):
        v = np.array([1, 1, 0], dtype=np.uint8)
        assert list(CYCLE3 @ v) == [1, 0, 1]

    def test_stacking_and_transpose(self):
        a = Gf2Matrix.from_dense([[1, 0], [0, 1]])
        b = Gf2Matrix.from_dense([[1, 1], [0, 0]])
        assert a.hstack(b).shape == (2, 4)
        assert a.vstack(b).shape == (4, 2)
        assert np.array_equal(b.T.to_dense(), [[1, 0], [1, 0]])
        assert (a + a).is_zero()

    def test_from_columns(self):
        m = Gf2Matrix.from_columns([[1, 0, 1], [0, 1, 1]], 3)
        assert np.array_equal(m.to_dense(), [[1, 0], [0, 1], [1, 1]])
        assert Gf2Matrix.from_columns([], 4).shape == (4, 0)


class TestRank:
    def test_identity(self):
        assert gf2.rank(Gf2Matrix.identity(3)) == 3

    def test_zero(self):
        assert gf2.rank(Gf2Matrix.zeros(4, 5)) == 0

    def test_three_cycle_boundary(self):
        assert gf2.rank(CYCLE3) == 2

    def test_against_textbook_elimination(self):
        rng = np.random.default_rng(3)
        for _ in range(60):
            r, c = rng.integers(1, 25, size=2)
            a = rand_matrix(rng, r, c, rng.uniform(0.1, 0.7))
            assert gf2.rank(Gf2Matrix.from_dense(a)) == oracle.rank(a.tolist())


class TestKernelImage:
    def test_identity_kernel_is_zero(self):
        assert gf2.kernel_basis(Gf2Matrix.identity(2)).dim == 0

    def test_row_one_one(self):
        k = gf2.kernel_basis(Gf2Matrix.from_dense([[1, 1]]))
        assert [list(v) for v in k.vectors()] == [[1, 1]]

    def test_three_cycle_kernel_by_enumeration(self):
        k = gf2.kernel_basis(CYCLE3)
        sols = [v for v in oracle.brute_kernel(CYCLE3.to_dense().tolist(), 3) if any(v)]
        assert k.dim == 1 and [list(k.vectors()[0])] == sols

    def test_kernel_vectors_are_solutions(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            a = rand_matrix(rng, 6, 10)
            m = Gf2Matrix.from_dense(a)
            k = gf2.kernel_basis(m)
            assert k.dim == 10 - oracle.rank(a.tolist())
            assert len(oracle.brute_kernel(a.tolist(), 10)) == 2 ** k.dim
            for v in k.vectors():
                assert not (m @ v).any()

    def test_image(self):
        assert gf2.image_basis(Gf2Matrix.zeros(3, 2)).dim == 0
        assert gf2.image_basis(Gf2Matrix.identity(3)) == Gf2Subspace.full(3)
        im = gf2.image_basis(Gf2Matrix.from_dense([[1, 1], [0, 0]]))
        assert [list(v) for v in im.vectors()] == [[1, 0]]


class TestContains:
    def test_full_contains_everything(self):
        assert gf2.contains(Gf2Subspace.full(3), Gf2Subspace.span([[1, 0, 1]], 3))

    def test_zero_contains_nothing_nonzero(self):
        assert not gf2.contains(Gf2Subspace.zero(2), Gf2Subspace.span([[1, 0]], 2))

    def test_reduction_of_extra_vector(self):
        a = Gf2Subspace.span([[1, 1, 0]], 3)
        b = Gf2Subspace.span([[1, 1, 0], [0, 0, 1]], 3)
        assert not gf2.contains(a, b) and gf2.contains(b, a)

    def test_mismatch(self):
        with pytest.raises(AmbientMismatchError):
            gf2.contains(Gf2Subspace.zero(2), Gf2Subspace.zero(3))

    def test_canonical_form_is_structural(self):
        a = Gf2Subspace.span([[1, 1, 0, 1], [0, 1, 1, 0]], 4)
        b = Gf2Subspace.span([[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]], 4)
        assert a == b and hash(a) == hash(b)
        assert [list(v) for v in a.vectors()] == [list(v) for v in b.vectors()]


class TestSolve:
    def test_identity(self):
        b = np.array([1, 0, 1], dtype=np.uint8)
        assert list(gf2.solve(Gf2Matrix.identity(3), b)) == [1, 0, 1]

    def test_free_variables_are_zero(self):
        assert list(gf2.solve(Gf2Matrix.from_dense([[1, 1]]), [1])) == [1, 0]

    def test_odd_vertex_chain_is_not_a_boundary(self):
        assert gf2.solve(CYCLE3, [1, 0, 0]) is None
        # every edge chain has an even boundary, so no chain hits a single vertex
        hits = [oracle.matvec(CYCLE3.to_dense().tolist(), list(e)) for e in np.ndindex(2, 2, 2)]
        assert [1, 0, 0] not in hits

    def test_none_iff_rank_grows(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            a = rand_matrix(rng, 8, 5)
            b = rand_matrix(rng, 8, 1)[:, 0]
            x = gf2.solve(Gf2Matrix.from_dense(a), b)
            aug = np.hstack([a, b[:, None]]).tolist()
            if x is None:
                assert oracle.rank(aug) == oracle.rank(a.tolist()) + 1
            else:
                assert oracle.matvec(a.tolist(), list(x)) == list(b)

    def test_solve_many(self):
        m = Gf2Matrix.identity(2)
        rhs = Gf2Matrix.from_dense([[1, 0], [1, 1]])
        sols = gf2.solve_many(m, rhs)
        assert [list(s) for s in sols] == [[1, 1], [0, 1]]
