import itertools

import numpy as np
import pytest

import oracle
from sepchk import homology as hm, simplicial as sc, theorems as th
from sepchk.errors import DimensionError, InvalidPairError, NotACycleError
from sepchk.simplicial import CellDesignation, SimplicialComplex


def cells(x):
    return [CellDesignation(s) for s in x.simplices(x.dim)]


class TestThm1:
    @pytest.mark.parametrize("builder", [sc.klein_bottle, sc.torus, lambda: sc.circle(6)])
    def test_every_top_cell(self, builder):
        x = builder()
        for u in cells(x):
            rep = th.check_thm1(x, u)
            assert rep.holds and rep.kernel_dim == 1
            assert th.verify_thm1_witness(x, u, rep.witness_cocycle)

    def test_klein_matches_oracle(self, quoted):
        kb = sc.klein_bottle()
        u = cells(kb)[7]
        assert th.check_thm1(kb, u).kernel_dim == oracle.thm1_kernel_dim(kb.maximal_simplices, u.cell) == 1
        quoted("has non-trivial kernel")

    def test_theta_cycle_edge(self):
        t = sc.theta_graph()
        for e in itertools.chain.from_iterable(sc.theta_arc_edges(3, a) for a in range(3)):
            rep = th.check_thm1(t, CellDesignation(e))
            assert rep.kernel_dim == oracle.thm1_kernel_dim(t.maximal_simplices, e) == 1

    def test_whisker_fails(self, quoted):
        w = sc.circle_with_whisker()
        rep = th.check_thm1(w, CellDesignation((8, 9)))
        assert not rep.holds and rep.kernel_dim == 0 and rep.witness_cocycle is None
        assert rep.to_dict() == {"holds": False, "kernel_dim": 0}
        quoted("induces an isomorphism on")

    def test_witness_verifier_rejects_junk(self):
        x = sc.circle(5)
        u = CellDesignation((0, 1))
        w = th.check_thm1(x, u).witness_cocycle
        assert not th.verify_thm1_witness(x, u, np.zeros_like(w))
        # a coboundary is a trivial class, so it is no witness
        cob = hm.coboundary_matrix(x, 0) @ np.array([1, 0, 0, 0, 0], dtype=np.uint8)
        assert not th.verify_thm1_witness(x, u, cob)


class TestThm2:
    def test_annulus_one_circle(self, quoted):
        k = 4
        rep = th.check_thm2(sc.annulus(k), sc.annulus_boundary(k, "inner"), CellDesignation((0, 1)))
        assert not rep.holds and rep.K.dim == 0 and rep.alpha is None
        quoted("is automatically trivial")

    def test_annulus_both_circles(self, quoted):
        k = 4
        a, both = sc.annulus(k), sc.annulus_boundary(k, "both")
        for u in cells(both):
            rep = th.check_thm2(a, both, u)
            assert rep.holds
            assert list(rep.alpha) == [1] * both.count(1)
        quoted("sum of the fundamental classes")

    @pytest.mark.parametrize("builder,cell", [
        (sc.theta_graph, (4, 5)), (sc.klein_bottle, None), (lambda: sc.circle(5), (0, 1))])
    def test_cones_always_work(self, builder, cell, quoted):
        x = builder()
        xhat, _ = sc.cone(x)
        u = CellDesignation(cell or x.simplices(2)[0])
        rep = th.check_thm2(xhat, x, u)
        assert rep.holds
        dim_k, dim_j, holds = oracle.thm2_dims(xhat.maximal_simplices, x.maximal_simplices, u.cell)
        assert (rep.K.dim, rep.J.dim, rep.holds) == (dim_k, dim_j, holds)
        check = th.verify_thm2_alpha(xhat, x, u, rep.alpha)
        assert check == {"cycle": True, "in_K": True, "outside_J": True}
        quoted("always satisfies the homological conditions")

    def test_alpha_verifier_rejects_j_elements(self):
        x = sc.theta_graph()
        xhat, _ = sc.cone(x)
        u = CellDesignation((4, 5))
        z = hm.homology_basis(sc.delete_open_cell(x, u), 1).representative(0)
        # a cycle avoiding U lies in J by definition
        pushed = np.array([z[sc.delete_open_cell(x, u).index(s)] if s != u.cell else 0
                           for s in x.simplices(1)], dtype=np.uint8)
        assert not th.verify_thm2_alpha(xhat, x, u, pushed)["outside_J"]

    def test_not_a_subcomplex(self):
        with pytest.raises(InvalidPairError):
            th.check_thm2(sc.circle(3), sc.circle(4), CellDesignation((0, 1)))


class TestManifoldPairs:
    def test_cone_on_cycle(self):
        cyc = sc.circle(3)
        assert list(th.manifold_pair_witness(sc.cone(cyc)[0], cyc)) == [1, 1, 1]

    def test_annulus(self):
        a, both = sc.annulus(4), sc.annulus_boundary(4, "both")
        w = th.manifold_pair_witness(a, both)
        # d of the sum of all triangles, computed from the oracle's own boundary matrix
        faces = oracle.faces_of(a.maximal_simplices)
        bd = oracle.matvec(oracle.boundary_rows(faces, 2), [1] * len(faces[2]))
        expect = [bd[faces[1].index(e)] for e in both.simplices(1)]
        assert list(w) == expect == [1] * 8

    def test_no_interior_rejected(self):
        x = sc.circle(4)
        with pytest.raises(InvalidPairError):
            th.manifold_pair_witness(x, x)

    def test_witness_lies_in_k(self):
        a, both = sc.annulus(5), sc.annulus_boundary(5, "both")
        w = th.manifold_pair_witness(a, both)
        rep = th.check_thm2(a, both, CellDesignation((0, 1)))
        assert rep.K.contains_vector(hm.homology_basis(both, 1).coordinates(w))

    def test_every_cell_of_a_manifold_pair(self):
        kb = sc.klein_bottle()
        cone, _ = sc.cone(kb)
        for u in cells(kb):
            assert th.check_thm1(kb, u).holds and th.check_thm2(cone, kb, u).holds


def subdivision_chain(x, bary, z, n):
    """Images of the n-simplices in supp(z) under barycentric subdivision."""
    out = {}
    for s, bit in zip(x.simplices(n), z):
        if bit:
            for perm in itertools.permutations(s):
                flag = tuple(sorted(bary[tuple(sorted(perm[:i + 1]))] for i in range(n + 1)))
                out[flag] = out.get(flag, 0) ^ 1
    return out


class TestUniversality:
    def test_circle(self):
        x = sc.circle(5)
        rep = th.cycle_to_pseudomanifold(x, np.ones(5, dtype=np.uint8), 1)
        assert not rep.subdivided
        assert [rep.Y.count(k) for k in (0, 1)] == [5, 5]
        assert sorted(rep.phi.vertex_map) == list(range(5))
        assert list(rep.pushforward_chain()) == [1] * 5

    def test_klein_fundamental_cycle(self):
        kb = sc.klein_bottle()
        z = np.ones(kb.count(2), dtype=np.uint8)
        rep = th.cycle_to_pseudomanifold(kb, z, 2)
        assert sc.is_pseudo_manifold(rep.Y, 2) and rep.Y.count(2) == kb.count(2)
        assert np.array_equal(rep.pushforward_chain(), z)
        assert list(rep.represented_class) == [1]

    def test_two_edge_disjoint_cycles(self):
        x = sc.figure_eight()
        z = np.ones(x.count(1), dtype=np.uint8)
        rep = th.cycle_to_pseudomanifold(x, z, 1)
        assert sc.is_pseudo_manifold(rep.Y, 1)
        assert hm.homology_basis(rep.Y, 0).dim == 2 and hm.homology_basis(rep.Y, 1).dim == 2

    def test_forced_subdivision(self):
        kb = sc.klein_bottle()
        z = np.ones(kb.count(2), dtype=np.uint8)
        rep = th.cycle_to_pseudomanifold(kb, z, 2, force_subdivision=True)
        assert rep.subdivided and sc.is_pseudo_manifold(rep.Y, 2)
        assert rep.Y.count(2) == 6 * kb.count(2)
        sd, bary = sc.barycentric_subdivision(kb)
        want = np.zeros(sd.count(2), dtype=np.uint8)
        for s, bit in subdivision_chain(kb, bary, z, 2).items():
            want[sd.index(s)] = bit
        basis = hm.homology_basis(sd, 2)
        assert np.array_equal(basis.coordinates(rep.pushforward_chain()), basis.coordinates(want))

    def test_zero_cycle(self):
        rep = th.cycle_to_pseudomanifold(sc.circle(4), np.zeros(4, dtype=np.uint8), 1)
        assert rep.Y.count(0) == 0 and not rep.represented_class.any()

    def test_errors(self):
        with pytest.raises(NotACycleError):
            th.cycle_to_pseudomanifold(sc.circle(4), [1, 0, 0, 0], 1)
        with pytest.raises(DimensionError):
            th.cycle_to_pseudomanifold(SimplicialComplex([(0,)]), [1], 0)
