"""Property checks over random inputs. Run through the acceptance suite; the
``sepchk`` hypothesis profile gives each 1000 derandomized examples."""

import numpy as np
from hypothesis import assume, given, strategies as st
from hypothesis.extra.numpy import arrays

import oracle
from sepchk import gf2, homology as hm, nerve as nv, separation as sp
from sepchk.simplicial import SimplicialComplex, SimplicialMap

matrices = st.integers(1, 12).flatmap(
    lambda r: st.integers(1, 70).flatmap(
        lambda c: arrays(np.uint8, (r, c), elements=st.integers(0, 1))))


@st.composite
def complexes(draw, n=7):
    tris = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=2, max_size=3, unique=True),
                         min_size=1, max_size=9))
    return SimplicialComplex([tuple(s) for s in tris])


@st.composite
def pairs(draw):
    x = draw(complexes())
    keep = draw(st.lists(st.sampled_from(x.maximal_simplices), max_size=len(x.maximal_simplices)))
    sub = SimplicialComplex(keep) if keep else SimplicialComplex([x.maximal_simplices[0][:1]])
    return x, sub


def image_map(x, vm):
    target = SimplicialComplex([tuple(sorted({vm[v] for v in s})) for s in x.maximal_simplices])
    return SimplicialMap(x, target, tuple(vm))


@given(matrices)
def prop_rank_nullity(dense):
    m = gf2.Gf2Matrix.from_dense(dense)
    ker = gf2.kernel_basis(m)
    assert gf2.rank(m) + ker.dim == m.cols
    assert gf2.rank(m) == oracle.rank(dense.tolist())
    for v in ker.vectors():
        assert not (m @ v).any()


@given(matrices, st.randoms(use_true_random=False))
def prop_canonical_subspace(dense, rnd):
    rows = [r for r in dense]
    a = gf2.Gf2Subspace.span(rows, dense.shape[1])
    # a different spanning set: random sums of the originals, plus the originals shuffled
    mixed = [np.bitwise_xor.reduce([r for r in rows if rnd.random() < 0.5] + [rows[0] * 0]) for _ in rows]
    rnd.shuffle(rows)
    b = gf2.Gf2Subspace.span(rows + mixed, dense.shape[1])
    assert a == b and hash(a) == hash(b)
    assert np.array_equal(a.basis.to_dense(), b.basis.to_dense())


@given(complexes())
def prop_boundary_squares_to_zero(x):
    for k in range(2, x.dim + 1):
        assert (hm.boundary_matrix(x, k - 1) @ hm.boundary_matrix(x, k)).is_zero()


@given(complexes())
def prop_cohomology_dims_match_homology(x):
    for k in range(x.dim + 1):
        want = oracle.betti(list(x.maximal_simplices), k)
        assert hm.homology_basis(x, k).dim == hm.cohomology_basis(x, k).dim == hm.betti_number(x, k) == want


@given(complexes(), st.lists(st.integers(0, 5), min_size=7, max_size=7),
       st.lists(st.integers(0, 3), min_size=6, max_size=6))
def prop_functoriality(x, vm1, vm2):
    f = image_map(x, vm1)
    g = image_map(f.target, vm2)
    assert f.is_valid() and g.is_valid()
    gf = g.compose(f)
    ident = hm.induced_on_homology(SimplicialMap.identity(x), 1 if x.dim else 0).matrix
    assert ident == gf2.Gf2Matrix.identity(ident.rows)
    for k in range(x.dim + 1):
        if k > f.target.dim or k > g.target.dim:
            continue
        step = hm.induced_on_homology(g, k).matrix @ hm.induced_on_homology(f, k).matrix
        assert hm.induced_on_homology(gf, k).matrix == step


@given(pairs())
def prop_connecting_map_exactness(pair):
    # the image of H_{n+1}(X̂, X) -> H_n(X) is the kernel of H_n(X) -> H_n(X̂)
    xhat, x = pair
    inc = SimplicialMap.inclusion(x, xhat)
    for n in range(min(x.dim, xhat.dim - 1) + 1):
        assert hm.connecting_map(xhat, x, n).image() == hm.induced_on_homology(inc, n).kernel()


points = arrays(np.float64, st.tuples(st.integers(2, 9), st.just(2)),
                elements=st.floats(0, 1, allow_nan=False, width=32), unique=True)


@given(points, st.floats(0.01, 0.4), st.floats(1.0, 2.0))
def prop_nerve_monotone_and_rips_contains_cech(pts, eps, growth):
    assume(len(np.unique(pts, axis=0)) == len(pts))
    cloud = nv.PointCloud(pts)
    small = nv.build_nerve(cloud, eps).complex
    big = nv.build_nerve(cloud, eps * growth).complex
    rips = nv.build_nerve(cloud, eps, mode="rips").complex
    assert small.all_simplices <= big.all_simplices
    assert small.all_simplices <= rips.all_simplices
    assert small.simplices(1) == rips.simplices(1)


occupancies = st.tuples(st.integers(1, 9), st.integers(1, 9)).flatmap(
    lambda s: arrays(bool, s, elements=st.booleans()))


@given(occupancies)
def prop_components_and_duality(occ):
    g = sp.Grid(np.zeros(2), 1.0, occ.shape, occ)
    lab = sp.complement_components(g)
    assert lab.count == oracle.flood_fill_count(occ)
    assert sp.duality_check(lab, g)["pass"]


ALL = [prop_rank_nullity, prop_canonical_subspace, prop_boundary_squares_to_zero, prop_cohomology_dims_match_homology, prop_functoriality, prop_connecting_map_exactness, prop_nerve_monotone_and_rips_contains_cech, prop_components_and_duality]
