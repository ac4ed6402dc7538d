"""Hypothesis deciders for the two separation theorems, with witnesses.

Both checks work in the top degree ``n = dim X`` with U the open interior of
one designated top simplex, so ``X − U`` is the subcomplex obtained by
deleting that simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from sepchk import gf2, homology
from sepchk.errors import DimensionError, InvalidPairError, NotACycleError
from sepchk.gf2 import Gf2Matrix, Gf2Subspace
from sepchk.simplicial import (
    CellDesignation,
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    delete_open_cell,
    is_pseudo_manifold,
    is_pseudo_manifold_with_boundary,
)


@dataclass
class Thm1Report:
    n: int
    kernel_dim: int
    witness_cocycle: Optional[np.ndarray]

    @property
    def holds(self) -> bool:
        return self.kernel_dim >= 1

    def to_dict(self) -> dict:
        return {"holds": self.holds, "kernel_dim": self.kernel_dim}


@dataclass
class Thm2Report:
    """``K`` and ``J`` live in coordinates of the chosen basis of ``H_n(X)``."""

    n: int
    K: Gf2Subspace
    J: Gf2Subspace
    alpha: Optional[np.ndarray]
    alpha_coords: Optional[np.ndarray]

    @property
    def holds(self) -> bool:
        return not gf2.contains(self.J, self.K)

    def to_dict(self) -> dict:
        return {"holds": self.holds, "dimK": self.K.dim, "dimJ": self.J.dim}


def check_thm1(x: SimplicialComplex, u: CellDesignation) -> Thm1Report:
    """Kernel of ``H^n(X) -> H^n(X − U)`` induced by the inclusion."""
    u.check(x)
    n = x.dim
    xu = delete_open_cell(x, u)
    restriction = homology.induced_on_cohomology(SimplicialMap.inclusion(xu, x), n)
    ker = restriction.kernel()
    witness = None
    if ker.dim:
        witness = restriction.source_basis.chain(ker.vectors()[0])
    return Thm1Report(n, ker.dim, witness)


def verify_thm1_witness(x: SimplicialComplex, u: CellDesignation, w) -> bool:
    """``w`` is a non-trivial cocycle on X whose restriction to X − U is a
    coboundary. Uses only coboundary matrices and ``solve``."""
    n = x.dim
    w = gf2.as_vector(w, x.count(n))
    if (homology.coboundary_matrix(x, n) @ w).any():
        return False
    trivial = gf2.solve(homology.coboundary_matrix(x, n - 1), w) is not None if n >= 1 else not w.any()
    if trivial:
        return False
    xu = delete_open_cell(x, u)
    restricted = np.array([w[x.index(s)] for s in xu.simplices(n)], dtype=np.uint8)
    if n == 0:
        return not restricted.any()
    return gf2.solve(homology.coboundary_matrix(xu, n - 1), restricted) is not None


def check_thm2(xhat: SimplicialComplex, x: SimplicialComplex, u: CellDesignation) -> Thm2Report:
    """``K = ker(H_n X -> H_n X̂)``, ``J = im(H_n(X − U) -> H_n X)``; holds iff K ⊄ J."""
    if not x.is_subcomplex_of(xhat):
        raise InvalidPairError("X is not a subcomplex of X̂")
    u.check(x)
    n = x.dim
    i_star = homology.induced_on_homology(SimplicialMap.inclusion(x, xhat), n)
    xu = delete_open_cell(x, u)
    j_star = homology.induced_on_homology(SimplicialMap.inclusion(xu, x), n)
    K = i_star.kernel()
    J = j_star.image()
    alpha = coords = None
    for v in K.vectors():
        if not J.contains_vector(v):
            coords = v
            alpha = i_star.source_basis.chain(v)
            break
    return Thm2Report(n, K, J, alpha, coords)


def verify_thm2_alpha(xhat: SimplicialComplex, x: SimplicialComplex, u: CellDesignation, alpha) -> dict:
    """Chain-level re-check of the witness, independent of homology bases.

    ``in_K``: the pushed-forward chain is a boundary in X̂.
    ``outside_J``: alpha is not a cycle of X − U plus a boundary in X.
    """
    n = x.dim
    alpha = gf2.as_vector(alpha, x.count(n))
    is_cycle = not (homology._boundary(x, n) @ alpha).any()
    pushed = np.zeros(xhat.count(n), dtype=np.uint8)
    for s, bit in zip(x.simplices(n), alpha):
        pushed[xhat.index(s)] = bit
    in_k = gf2.solve(homology._boundary(xhat, n + 1), pushed) is not None

    xu = delete_open_cell(x, u)
    zxu = gf2.kernel_basis(homology._boundary(xu, n))
    cols = []
    for v in zxu.vectors():
        c = np.zeros(x.count(n), dtype=np.uint8)
        for s, bit in zip(xu.simplices(n), v):
            c[x.index(s)] = bit
        cols.append(c)
    cycles_xu = Gf2Matrix.from_columns(cols, x.count(n))
    system = cycles_xu.hstack(homology._boundary(x, n + 1))
    outside_j = gf2.solve(system, alpha) is None
    return {"cycle": is_cycle, "in_K": in_k, "outside_J": outside_j}


def manifold_pair_witness(xhat: SimplicialComplex, x: SimplicialComplex) -> np.ndarray:
    """Boundary of the relative fundamental chain, as an n-chain on ``x``."""
    n = x.dim
    if not is_pseudo_manifold_with_boundary((xhat, x), n):
        raise InvalidPairError("pair is not a pseudo-manifold with boundary")
    mu = np.zeros(xhat.count(n + 1), dtype=np.uint8)
    for s in homology.relative_simplices(xhat, x, n + 1):
        mu[xhat.index(s)] = 1
    bd = homology._boundary(xhat, n + 1) @ mu
    out = np.zeros(x.count(n), dtype=np.uint8)
    for s, bit in zip(xhat.simplices(n), bd):
        if bit:
            if s not in x:
                raise AssertionError("relative fundamental chain has boundary outside X")
            out[x.index(s)] = 1
    return out


# -- universality: cycles as pseudo-manifold images -----------------------------


@dataclass
class PseudoManifoldRepresentative:
    """``phi: Y -> target`` where target is X, or its barycentric subdivision
    when the direct gluing produced a collision (``subdivided``)."""

    Y: SimplicialComplex
    phi: SimplicialMap
    represented_class: np.ndarray
    n: int
    subdivided: bool

    @property
    def target(self) -> SimplicialComplex:
        return self.phi.target

    def fundamental_chain(self) -> np.ndarray:
        return np.ones(self.Y.count(self.n), dtype=np.uint8)

    def pushforward_chain(self) -> np.ndarray:
        return homology.chain_map_matrix(self.phi, self.n) @ self.fundamental_chain()


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _face_pairs(support: list, n: int) -> list:
    """Consecutive pairing of (copy, omitted position) incidences per face."""
    incid: dict = {}
    for i, s in enumerate(support):
        for p in range(n + 1):
            incid.setdefault(s[:p] + s[p + 1:], []).append((i, p))
    pairs = []
    for face in sorted(incid):
        inc = incid[face]
        if len(inc) % 2:
            raise NotACycleError(f"face {face} has odd incidence")
        pairs.extend((face, inc[t], inc[t + 1]) for t in range(0, len(inc), 2))
    return pairs


def _label(keys: list, uf: _UnionFind) -> dict:
    ids: dict = {}
    out = {}
    for key in keys:
        root = uf.find(key)
        if root not in ids:
            ids[root] = len(ids)
        out[key] = ids[root]
    return out


def _direct_gluing(x, support, n):
    uf = _UnionFind()
    slots = [(i, q) for i in range(len(support)) for q in range(n + 1)]
    for key in slots:
        uf.find(key)
    for _, (i, p), (j, r) in _face_pairs(support, n):
        si, sj = support[i], support[j]
        for q in range(n + 1):
            if q == p:
                continue
            uf.union((i, q), (j, sj.index(si[q])))
    label = _label(slots, uf)
    tops = [tuple(sorted({label[(i, q)] for q in range(n + 1)})) for i in range(len(support))]
    if any(len(t) != n + 1 for t in tops) or len(set(tops)) != len(tops):
        return None
    y = SimplicialComplex(tops)
    if not is_pseudo_manifold(y, n) or y.count(n) != len(support):
        return None
    vm = [0] * len(y.vertices)
    for (i, q), v in label.items():
        vm[v] = support[i][q]
    return y, SimplicialMap(y, x, tuple(vm))


def _flags(s: tuple) -> list:
    """Maximal chains of faces ending at ``s`` (as lists of faces, small first)."""
    if len(s) == 1:
        return [[s]]
    return [f + [s] for p in range(len(s)) for f in _flags(s[:p] + s[p + 1:])]


def _subdivided_gluing(x, support, n):
    sdx, bary = barycentric_subdivision(x)
    uf = _UnionFind()
    keys = []
    flags = [_flags(s) for s in support]
    for i, fl in enumerate(flags):
        for chain in fl:
            for t in chain:
                keys.append((i, t))
    for face, (i, _), (j, _) in _face_pairs(support, n):
        for chain in _flags(face):
            for t in chain:
                uf.union((i, t), (j, t))
    label = _label(keys, uf)
    tops = [tuple(sorted(label[(i, t)] for t in chain)) for i, fl in enumerate(flags) for chain in fl]
    y = SimplicialComplex(tops)
    vm = [0] * len(y.vertices)
    for (i, t), v in label.items():
        vm[v] = bary[t]
    return y, SimplicialMap(y, sdx, tuple(vm))


def cycle_to_pseudomanifold(x: SimplicialComplex, z, n: int,
                            force_subdivision: bool = False) -> PseudoManifoldRepresentative:
    """Glue one abstract n-simplex per simplex in ``supp(z)`` along paired faces.

    Faces are paired in sorted incidence order. If the glued object is not a
    simplicial pseudo-manifold (two copies collapse to one vertex set), the
    gluing is redone on barycentric subdivisions, where it always is.
    """
    if n < 1:
        raise DimensionError("cycles of degree >= 1 only")
    z = gf2.as_vector(z, x.count(n))
    if (homology._boundary(x, n) @ z).any():
        raise NotACycleError("input chain is not a cycle")
    support = [s for s, bit in zip(x.simplices(n), z) if bit]
    coords = homology.homology_basis(x, n).coordinates(z)
    if not support:
        return PseudoManifoldRepresentative(SimplicialComplex([]), SimplicialMap(SimplicialComplex([]), x, ()),
                                            coords, n, False)
    glued = None if force_subdivision else _direct_gluing(x, support, n)
    subdivided = glued is None
    if subdivided:
        glued = _subdivided_gluing(x, support, n)
    y, phi = glued
    return PseudoManifoldRepresentative(y, phi, coords, n, subdivided)
