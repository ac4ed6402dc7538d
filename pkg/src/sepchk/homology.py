"""Chain and cochain complexes over Z/2, (co)homology bases and induced maps.

Representatives are chosen greedily: the canonical basis of the boundary
space is extended by canonical cycle-space vectors in pivot order, so every
basis (and hence every induced matrix) is reproducible.

Cohomology bases are normalised to be Kronecker-dual to the homology bases,
which makes an induced map on cohomology the transpose of the induced map on
homology in the chosen bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from sepchk import gf2
from sepchk._backend import kernels
from sepchk.errors import DimensionError, InvalidCoverError, InvalidPairError, NotACycleError
from sepchk.gf2 import Gf2Matrix, Gf2Subspace
from sepchk.simplicial import SimplicialComplex, SimplicialMap


def _boundary(x: SimplicialComplex, k: int) -> Gf2Matrix:
    """``∂_k : C_k -> C_{k-1}`` for any ``k >= 0`` (empty beyond the top)."""
    cols = x.simplices(k)
    rows = x.simplices(k - 1) if k >= 1 else ()
    dense = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    if k >= 1:
        for j, s in enumerate(cols):
            for i in range(len(s)):
                dense[x.index(s[:i] + s[i + 1:]), j] = 1
    return Gf2Matrix.from_dense(dense)


def boundary_matrix(x: SimplicialComplex, k: int) -> Gf2Matrix:
    """Boundary matrix over Z/2; entry (τ, σ) is 1 iff τ is a facet of σ."""
    if not 0 <= k <= x.dim:
        raise DimensionError(f"k={k} outside 0..{x.dim}")
    return _boundary(x, k)


def coboundary_matrix(x: SimplicialComplex, k: int) -> Gf2Matrix:
    """``δ^k : C^k -> C^{k+1}``, the transpose of ``∂_{k+1}``."""
    return _boundary(x, k + 1).T


def boundary_columns(x: SimplicialComplex, k: int) -> list:
    """Sparse ``∂_k``: one sorted list of facet indices per k-simplex."""
    if k < 1:
        return [[] for _ in x.simplices(k)]
    return [sorted(x.index(s[:i] + s[i + 1:]) for i in range(len(s))) for s in x.simplices(k)]


def sparse_rank_of_boundary(x: SimplicialComplex, k: int) -> int:
    if k < 1 or x.count(k) == 0:
        return 0
    return kernels.sparse_rank(boundary_columns(x, k), x.count(k - 1))


def betti_number(x: SimplicialComplex, k: int) -> int:
    """``dim H_k(x; Z/2)`` from sparse boundary reductions (no bases)."""
    if k < 0:
        raise DimensionError("negative degree")
    return x.count(k) - sparse_rank_of_boundary(x, k) - sparse_rank_of_boundary(x, k + 1)


@dataclass(frozen=True)
class ChainComplexZ2:
    complex: SimplicialComplex
    boundaries: tuple

    @classmethod
    def of(cls, x: SimplicialComplex) -> "ChainComplexZ2":
        bds = tuple(_boundary(x, k) for k in range(x.dim + 2))
        for k in range(1, len(bds)):
            if bds[k - 1].rows and not (bds[k - 1] @ bds[k]).is_zero():
                raise AssertionError(f"boundary of boundary nonzero in degree {k}")
        return cls(x, bds)


@dataclass
class HomologyBasis:
    """Representatives for ``H_k`` (or ``H^k``) and a coordinate map.

    ``representatives`` has one column per class; ``boundaries`` spans the
    (co)boundary space in the same chain group.
    """

    k: int
    kind: str
    representatives: Gf2Matrix
    boundaries: Gf2Matrix
    cycle_op: Gf2Matrix
    complex: Optional[SimplicialComplex] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.representatives.cols

    @property
    def chain_length(self) -> int:
        return self.representatives.rows

    def representative(self, i: int) -> np.ndarray:
        return self.representatives.column(i)

    def chain(self, coords) -> np.ndarray:
        """Chain ``Σ c_i rep_i``."""
        return self.representatives @ gf2.as_vector(coords, self.dim)

    def is_cycle(self, z) -> bool:
        z = gf2.as_vector(z, self.chain_length)
        return self.cycle_op.rows == 0 or not (self.cycle_op @ z).any()

    def coordinates_many(self, chains: Gf2Matrix) -> Gf2Matrix:
        """Coordinates of each column of ``chains``; one column per input."""
        if chains.cols == 0:
            return Gf2Matrix(self.dim, 0)
        for j in range(chains.cols):
            if not self.is_cycle(chains.column(j)):
                raise NotACycleError(f"column {j} is not a {'co' if self.kind == 'cohomology' else ''}cycle")
        system = self.boundaries.hstack(self.representatives)
        sols = gf2.solve_many(system, chains)
        out = np.zeros((self.dim, chains.cols), dtype=np.uint8)
        nb = self.boundaries.cols
        for j, x in enumerate(sols):
            if x is None:
                raise AssertionError("cycle outside span of boundaries and representatives")
            out[:, j] = x[nb:]
        return Gf2Matrix.from_dense(out)

    def coordinates(self, z) -> np.ndarray:
        z = gf2.as_vector(z, self.chain_length)
        return self.coordinates_many(Gf2Matrix.from_columns([z], self.chain_length)).column(0)

    def is_zero_class(self, z) -> bool:
        return not self.coordinates(z).any()


@dataclass
class InducedMap:
    source_basis: HomologyBasis
    target_basis: HomologyBasis
    matrix: Gf2Matrix

    def kernel(self) -> Gf2Subspace:
        return gf2.kernel_basis(self.matrix)

    def image(self) -> Gf2Subspace:
        return gf2.image_basis(self.matrix)

    @property
    def rank(self) -> int:
        return gf2.rank(self.matrix)


def _greedy_basis(cycle_op: Gf2Matrix, boundary_op: Gf2Matrix, k: int, kind: str,
                  x: Optional[SimplicialComplex]) -> HomologyBasis:
    n = cycle_op.cols
    z = gf2.kernel_basis(cycle_op) if cycle_op.rows else Gf2Subspace.full(n)
    b = gf2.image_basis(boundary_op) if boundary_op.cols else Gf2Subspace.zero(n)
    bmat = b.basis.T if b.dim else Gf2Matrix(n, 0)
    if z.dim == b.dim:
        reps = Gf2Matrix(n, 0)
    else:
        stacked = bmat.hstack(z.basis.T) if b.dim else z.basis.T
        _, piv = gf2.rref(stacked)
        chosen = [p - b.dim for p in piv if p >= b.dim]
        if len(piv) != z.dim:
            raise AssertionError("boundary space not contained in cycle space")
        reps = Gf2Matrix.from_dense(z.basis.to_dense()[chosen].T)
    return HomologyBasis(k, kind, reps, bmat, cycle_op, x)


@lru_cache(maxsize=512)
def homology_basis(x: SimplicialComplex, k: int) -> HomologyBasis:
    if k < 0:
        raise DimensionError("negative degree")
    return _greedy_basis(_boundary(x, k), _boundary(x, k + 1), k, "homology", x)


def _raw_cohomology_basis(x: SimplicialComplex, k: int) -> HomologyBasis:
    delta_k = coboundary_matrix(x, k)
    delta_prev = coboundary_matrix(x, k - 1) if k >= 1 else Gf2Matrix(x.count(k), 0)
    return _greedy_basis(delta_k, delta_prev, k, "cohomology", x)


def _gf2_inverse(p: Gf2Matrix) -> Gf2Matrix:
    sols = gf2.solve_many(p, Gf2Matrix.identity(p.rows))
    if any(s is None for s in sols):
        raise AssertionError("Kronecker pairing is singular")
    return Gf2Matrix.from_columns(sols, p.cols)


@lru_cache(maxsize=512)
def cohomology_basis(x: SimplicialComplex, k: int) -> HomologyBasis:
    """Cocycle representatives, dual to :func:`homology_basis` under pairing."""
    if k < 0:
        raise DimensionError("negative degree")
    raw = _raw_cohomology_basis(x, k)
    hom = homology_basis(x, k)
    if raw.dim != hom.dim:
        raise AssertionError(f"dim H^{k} = {raw.dim} but dim H_{k} = {hom.dim}")
    if raw.dim == 0:
        return raw
    pairing = raw.representatives.T @ hom.representatives  # (cohom x hom)
    dual = raw.representatives @ _gf2_inverse(pairing).T
    return HomologyBasis(k, "cohomology", dual, raw.boundaries, raw.cycle_op, x)


def chain_map_matrix(f: SimplicialMap, k: int) -> Gf2Matrix:
    """``f_# : C_k(source) -> C_k(target)``; degenerate images go to zero."""
    src, tgt = f.source.simplices(k), f.target.simplices(k)
    dense = np.zeros((len(tgt), len(src)), dtype=np.uint8)
    for j, s in enumerate(src):
        img = f.image(s)
        if len(img) == k + 1:
            dense[f.target.index(img), j] = 1
    return Gf2Matrix.from_dense(dense)


def induced_on_homology(f: SimplicialMap, k: int) -> InducedMap:
    src, tgt = homology_basis(f.source, k), homology_basis(f.target, k)
    images = chain_map_matrix(f, k) @ src.representatives
    return InducedMap(src, tgt, tgt.coordinates_many(images))


def induced_on_cohomology(f: SimplicialMap, k: int) -> InducedMap:
    """``f^* : H^k(target) -> H^k(source)`` by cochain pullback."""
    src, tgt = cohomology_basis(f.target, k), cohomology_basis(f.source, k)
    pulled = chain_map_matrix(f, k).T @ src.representatives
    return InducedMap(src, tgt, tgt.coordinates_many(pulled))


# -- pairs ----------------------------------------------------------------------


def _check_pair(xhat: SimplicialComplex, x: SimplicialComplex) -> None:
    if not x.is_subcomplex_of(xhat):
        raise InvalidPairError("second complex is not a subcomplex of the first")


def relative_simplices(xhat: SimplicialComplex, x: SimplicialComplex, k: int) -> list:
    return [s for s in xhat.simplices(k) if s not in x]


def _relative_boundary(xhat: SimplicialComplex, x: SimplicialComplex, k: int) -> Gf2Matrix:
    cols = relative_simplices(xhat, x, k)
    rows = relative_simplices(xhat, x, k - 1) if k >= 1 else []
    ridx = {s: i for i, s in enumerate(rows)}
    dense = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, s in enumerate(cols):
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            if f in ridx:
                dense[ridx[f], j] = 1
    return Gf2Matrix.from_dense(dense)


def relative_homology(xhat: SimplicialComplex, x: SimplicialComplex, k: int) -> HomologyBasis:
    """``H_k(xhat, x)`` on chains spanned by simplices of ``xhat`` not in ``x``."""
    _check_pair(xhat, x)
    if k < 0:
        raise DimensionError("negative degree")
    return _greedy_basis(_relative_boundary(xhat, x, k), _relative_boundary(xhat, x, k + 1),
                         k, "relative", None)


def connecting_map(xhat: SimplicialComplex, x: SimplicialComplex, n: int) -> InducedMap:
    """``H_{n+1}(xhat, x) -> H_n(x)``: a relative cycle goes to its boundary."""
    rel = relative_homology(xhat, x, n + 1)
    hom = homology_basis(x, n)
    rel_cells = relative_simplices(xhat, x, n + 1)
    full = np.zeros((xhat.count(n), rel.dim), dtype=np.uint8)
    for j in range(rel.dim):
        c = rel.representative(j)
        for s, bit in zip(rel_cells, c):
            if bit:
                for i in range(len(s)):
                    full[xhat.index(s[:i] + s[i + 1:]), j] ^= 1
    inside = [xhat.index(s) for s in x.simplices(n)]
    outside = np.ones(xhat.count(n), dtype=bool)
    outside[inside] = False
    if full[outside].any():
        raise AssertionError("relative cycle has boundary outside the subcomplex")
    boundaries = Gf2Matrix.from_dense(full[inside])
    return InducedMap(rel, hom, hom.coordinates_many(boundaries))


# -- Mayer-Vietoris -------------------------------------------------------------


@dataclass
class MayerVietorisReport:
    """Exactness at each term of the cohomology Mayer-Vietoris sequence."""

    junctions: list
    connecting_ranks: dict

    @property
    def exact(self) -> bool:
        return all(j["exact"] for j in self.junctions)


def _cohom_restriction(sub: SimplicialComplex, amb: SimplicialComplex, k: int) -> Gf2Matrix:
    return induced_on_cohomology(SimplicialMap.inclusion(sub, amb), k).matrix


def _stack_rows(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    return Gf2Matrix.from_dense(np.vstack([a.to_dense(), b.to_dense()]))


def mv_connecting_matrix(x, a, c, k: int) -> Gf2Matrix:
    """``H^k(a ∩ b) -> H^{k+1}(x)``: extend by zero to ``a``, take δ, then
    extend by zero from ``a`` to ``x``."""
    hc = cohomology_basis(c, k)
    hx = cohomology_basis(x, k + 1)
    cols = []
    for j in range(hc.dim):
        gamma = hc.representative(j)
        ext = np.zeros(a.count(k), dtype=np.uint8)
        for s, bit in zip(c.simplices(k), gamma):
            if bit:
                ext[a.index(s)] = 1
        omega_a = coboundary_matrix(a, k) @ ext
        omega = np.zeros(x.count(k + 1), dtype=np.uint8)
        for t, bit in zip(a.simplices(k + 1), omega_a):
            if bit:
                omega[x.index(t)] = 1
        cols.append(omega)
    return hx.coordinates_many(Gf2Matrix.from_columns(cols, x.count(k + 1)))


def verify_mayer_vietoris(x: SimplicialComplex, a: SimplicialComplex,
                          b: SimplicialComplex) -> MayerVietorisReport:
    if not (a.is_subcomplex_of(x) and b.is_subcomplex_of(x)):
        raise InvalidCoverError("cover pieces must be subcomplexes")
    if a.all_simplices | b.all_simplices != x.all_simplices:
        raise InvalidCoverError("a ∪ b does not cover x")
    c = SimplicialComplex(a.all_simplices & b.all_simplices, close=False)
    top = x.dim
    dims = {name: [cohomology_basis(sp, k).dim for k in range(top + 2)]
            for name, sp in (("X", x), ("A", a), ("B", b), ("C", c))}

    restrict, difference, connecting = {}, {}, {}
    for k in range(top + 1):
        restrict[k] = _stack_rows(_cohom_restriction(a, x, k), _cohom_restriction(b, x, k))
        difference[k] = _cohom_restriction(c, a, k).hstack(_cohom_restriction(c, b, k))
        connecting[k] = mv_connecting_matrix(x, a, c, k)

    junctions = []

    def junction(term: str, k: int, incoming: Gf2Matrix, outgoing: Gf2Matrix) -> None:
        img = gf2.image_basis(incoming)
        ker = gf2.kernel_basis(outgoing)
        junctions.append({"term": term, "k": k, "image_dim": img.dim,
                          "kernel_dim": ker.dim, "exact": img == ker})

    junction("H^0(X)", 0, Gf2Matrix(dims["X"][0], 0), restrict[0])
    for k in range(top + 1):
        junction(f"H^{k}(A)+H^{k}(B)", k, restrict[k], difference[k])
        junction(f"H^{k}(A∩B)", k, difference[k], connecting[k])
        nxt = restrict[k + 1] if k + 1 <= top else Gf2Matrix(0, dims["X"][k + 1])
        junction(f"H^{k + 1}(X)", k + 1, connecting[k], nxt)
    ranks = {k: gf2.rank(connecting[k]) for k in connecting}
    return MayerVietorisReport(junctions, ranks)
