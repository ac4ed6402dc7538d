"""Finite abstract simplicial complexes, simplicial maps and the spaces we test.

Simplices are sorted vertex tuples. Each complex keeps one sorted list per
dimension; list order (lexicographic) is the basis order of every chain group
built on top of it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence

from sepchk.errors import FormatError, InvalidDesignationError, InvalidPairError

Simplex = tuple


def _faces(s: Simplex) -> Iterable[Simplex]:
    for k in range(1, len(s)):
        yield from itertools.combinations(s, k)


def closure(simplices: Iterable[Sequence[int]]) -> set:
    out = set()
    for s in simplices:
        s = tuple(sorted(set(int(v) for v in s)))
        if not s or s in out:
            continue
        out.add(s)
        out.update(_faces(s))
    return out


class SimplicialComplex:
    """Immutable finite simplicial complex.

    ``SimplicialComplex(simplices)`` adds all faces. Pass ``close=False`` to
    keep exactly the given simplices (used to model broken inputs).
    """

    def __init__(self, simplices: Iterable[Sequence[int]], close: bool = True):
        if close:
            sset = closure(simplices)
        else:
            sset = {tuple(sorted(set(int(v) for v in s))) for s in simplices}
            sset.discard(())
        by_dim: dict[int, list] = {}
        for s in sset:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self.dim = max(by_dim) if by_dim else -1
        self._simplices = tuple(tuple(sorted(by_dim.get(k, ()))) for k in range(self.dim + 1))
        self._index = tuple({s: i for i, s in enumerate(level)} for level in self._simplices)

    def simplices(self, k: int) -> tuple:
        if 0 <= k <= self.dim:
            return self._simplices[k]
        return ()

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][s]

    def __contains__(self, s) -> bool:
        s = tuple(sorted(s))
        k = len(s) - 1
        return 0 <= k <= self.dim and s in self._index[k]

    @cached_property
    def vertices(self) -> tuple:
        return tuple(s[0] for s in self.simplices(0))

    @cached_property
    def all_simplices(self) -> frozenset:
        return frozenset(itertools.chain.from_iterable(self._simplices))

    @cached_property
    def maximal_simplices(self) -> tuple:
        out = [s for level in self._simplices for s in level if not self.cofaces(s)]
        return tuple(sorted(out, key=lambda s: (-len(s), s)))

    def cofaces(self, s: Simplex) -> list:
        """Simplices of one dimension higher having ``s`` as a face."""
        k = len(s) - 1
        return self._coface_table[k].get(s, []) if k < self.dim else []

    @cached_property
    def _coface_table(self) -> tuple:
        tables = []
        for k in range(self.dim):
            table: dict = {}
            for t in self._simplices[k + 1]:
                for i in range(len(t)):
                    table.setdefault(t[:i] + t[i + 1:], []).append(t)
            tables.append(table)
        return tuple(tables)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.count(k) for k in range(self.dim + 1))

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.all_simplices <= other.all_simplices

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._simplices == other._simplices

    def __hash__(self) -> int:
        return hash(self._simplices)

    def __repr__(self) -> str:
        counts = ", ".join(str(self.count(k)) for k in range(self.dim + 1))
        return f"SimplicialComplex(dim={self.dim}, f=({counts}))"


@dataclass(frozen=True)
class CellDesignation:
    """One top-dimensional simplex whose open interior plays the role of U."""

    cell: Simplex

    def __post_init__(self):
        object.__setattr__(self, "cell", tuple(sorted(int(v) for v in self.cell)))

    def check(self, x: SimplicialComplex) -> None:
        if self.cell not in x or len(self.cell) - 1 != x.dim:
            raise InvalidDesignationError(f"{self.cell} is not a top simplex of {x!r}")


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex map ``source -> target`` extended linearly over simplices."""

    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: tuple

    def __post_init__(self):
        vm = self.vertex_map
        if isinstance(vm, dict):
            vm = tuple(vm.get(v, -1) for v in range(max(vm, default=-1) + 1))
        object.__setattr__(self, "vertex_map", tuple(int(v) for v in vm))

    def image(self, s: Simplex) -> Simplex:
        return tuple(sorted({self.vertex_map[v] for v in s}))

    def is_valid(self) -> bool:
        try:
            return all(self.image(s) in self.target for s in self.source.all_simplices)
        except IndexError:
            return False

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """``self ∘ first``."""
        vm = [-1] * len(first.vertex_map)
        for v in first.source.vertices:
            vm[v] = self.vertex_map[first.vertex_map[v]]
        return SimplicialMap(first.source, self.target, tuple(vm))

    @classmethod
    def identity(cls, x: SimplicialComplex) -> "SimplicialMap":
        n = max(x.vertices, default=-1) + 1
        return cls(x, x, tuple(range(n)))

    @classmethod
    def inclusion(cls, sub: SimplicialComplex, ambient: SimplicialComplex) -> "SimplicialMap":
        if not sub.is_subcomplex_of(ambient):
            raise InvalidPairError("not a subcomplex")
        n = max(sub.vertices, default=-1) + 1
        return cls(sub, ambient, tuple(range(n)))


def validate(c: SimplicialComplex) -> bool:
    """Face-closed with dense vertex labels ``0..V-1``."""
    sset = c.all_simplices
    for s in sset:
        if any(f not in sset for f in _faces(s)):
            return False
    labels = sorted({v for s in sset for v in s})
    return labels == list(range(len(labels))) and len(labels) == c.count(0)


def delete_open_cell(x: SimplicialComplex, u: CellDesignation) -> SimplicialComplex:
    """``x`` minus the open top simplex ``u``; all proper faces stay."""
    u.check(x)
    return SimplicialComplex((s for s in x.all_simplices if s != u.cell), close=False)


def closed_cell(x: SimplicialComplex, u: CellDesignation) -> SimplicialComplex:
    u.check(x)
    return SimplicialComplex([u.cell])


def cone(x: SimplicialComplex) -> tuple[SimplicialComplex, SimplicialMap]:
    """Cone on ``x`` with apex ``max vertex + 1``, and the base inclusion."""
    apex = max(x.vertices, default=-1) + 1
    simplices = list(x.all_simplices) + [s + (apex,) for s in x.all_simplices] + [(apex,)]
    cx = SimplicialComplex(simplices, close=False)
    return cx, SimplicialMap.inclusion(x, cx)


def is_pseudo_manifold(x: SimplicialComplex, n: int) -> bool:
    if x.dim != n or n < 1:
        return False
    return all(len(x.cofaces(f)) == 2 for f in x.simplices(n - 1))


def is_pseudo_manifold_with_boundary(pair: tuple, n: int) -> bool:
    """Conditions on ``(xhat, x)``: x an n-pseudo-manifold, each n-simplex of x
    in exactly one (n+1)-simplex of xhat, others in exactly two."""
    xhat, x = pair
    if not x.is_subcomplex_of(xhat):
        raise InvalidPairError("second complex is not a subcomplex of the first")
    if xhat.dim != n + 1 or not is_pseudo_manifold(x, n):
        return False
    inner = set(x.simplices(n))
    for s in xhat.simplices(n):
        want = 1 if s in inner else 2
        if len(xhat.cofaces(s)) != want:
            return False
    return True


def barycentric_subdivision(x: SimplicialComplex) -> tuple[SimplicialComplex, dict]:
    """First barycentric subdivision; vertex ``i`` is the barycenter of the
    simplex ``order[i]``. Returns the complex and ``{simplex: vertex}``."""
    order = [s for k in range(x.dim + 1) for s in x.simplices(k)]
    vid = {s: i for i, s in enumerate(order)}
    flags = []
    for top in x.maximal_simplices:
        for perm in itertools.permutations(top):
            flags.append(tuple(vid[tuple(sorted(perm[: i + 1]))] for i in range(len(perm))))
    return SimplicialComplex(flags), vid


# -- builders -----------------------------------------------------------------


def circle(k: int = 3) -> SimplicialComplex:
    if k < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    return SimplicialComplex([(i, (i + 1) % k) for i in range(k)])


def path(k: int) -> SimplicialComplex:
    """Path on vertices 0..k-1."""
    if k == 1:
        return SimplicialComplex([(0,)])
    return SimplicialComplex([(i, i + 1) for i in range(k - 1)])


def sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex."""
    full = tuple(range(n + 2))
    return SimplicialComplex(itertools.combinations(full, n + 1))


def disk_2d(k: int = 6) -> SimplicialComplex:
    """Fan of k triangles; the boundary is ``circle(k)`` on vertices 0..k-1."""
    return SimplicialComplex([(i, (i + 1) % k, k) for i in range(k)])


def annulus(k: int = 4) -> SimplicialComplex:
    """S^1 x [0,1]: inner ring 0..k-1 is S^1 x {0}, ring k..2k-1 is S^1 x {1}."""
    if k < 3:
        raise ValueError("annulus needs k >= 3")
    tris = []
    for i in range(k):
        j = (i + 1) % k
        tris.append((i, j, k + i))
        tris.append((j, k + i, k + j))
    return SimplicialComplex(tris)


def annulus_boundary(k: int = 4, which: str = "both") -> SimplicialComplex:
    rings = {"inner": [0], "outer": [1], "both": [0, 1]}[which]
    return SimplicialComplex([(r * k + i, r * k + (i + 1) % k) for r in rings for i in range(k)])


def theta_graph(subdiv: int = 3) -> SimplicialComplex:
    """Junctions 0 and 1 joined by three arcs of ``subdiv`` edges each.

    Interior vertices of arc ``a`` are ``2 + a*(subdiv-1) + t``.
    """
    if subdiv < 2:
        raise ValueError("arcs need at least 2 edges")
    edges = []
    for a in range(3):
        chain = [0] + [2 + a * (subdiv - 1) + t for t in range(subdiv - 1)] + [1]
        edges.extend(zip(chain, chain[1:]))
    return SimplicialComplex(edges)


def theta_arc_edges(subdiv: int = 3, arc: int = 1) -> list:
    chain = [0] + [2 + arc * (subdiv - 1) + t for t in range(subdiv - 1)] + [1]
    return [tuple(sorted(e)) for e in zip(chain, chain[1:])]


def circle_with_whisker(k: int = 8, whisker: int = 2) -> SimplicialComplex:
    """``circle(k)`` with a path of ``whisker`` edges hanging off vertex 0."""
    chain = [0] + list(range(k, k + whisker))
    return SimplicialComplex([(i, (i + 1) % k) for i in range(k)] + list(zip(chain, chain[1:])))


def _grid_quotient(p: int, q: int, twist: bool) -> SimplicialComplex:
    def vid(i: int, j: int) -> int:
        i_wrapped = i % p
        if twist and (i // p) % 2:
            j = -j
        return i_wrapped * q + (j % q)

    tris = []
    for i in range(p):
        for j in range(q):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            tris.append((a, b, d))
            tris.append((a, c, d))
    return SimplicialComplex(tris)


def torus(p: int = 3, q: int = 3) -> SimplicialComplex:
    """p x q grid torus; vertex ``(i, j)`` is ``i*q + j``."""
    if p < 3 or q < 3:
        raise ValueError("grid torus needs p, q >= 3")
    return _grid_quotient(p, q, twist=False)


def klein_bottle(p: int = 3, q: int = 4) -> SimplicialComplex:
    """p x q grid with the j-coordinate reflected across the i-seam."""
    if p < 3 or q < 4:
        raise ValueError("grid Klein bottle needs p >= 3, q >= 4")
    return _grid_quotient(p, q, twist=True)


def figure_eight() -> SimplicialComplex:
    """Two triangles wedged at vertex 0."""
    return SimplicialComplex([(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])


# -- file format ----------------------------------------------------------------


def dumps_complex(x: SimplicialComplex, maximal_only: bool = True) -> str:
    lines = [f"dim {x.dim}"]
    simplices = x.maximal_simplices if maximal_only else sorted(x.all_simplices, key=lambda s: (len(s), s))
    lines += [" ".join(str(v) for v in s) for s in sorted(simplices, key=lambda s: (-len(s), s))]
    return "\n".join(lines) + "\n"


def loads_complex(text: str) -> SimplicialComplex:
    """Parse ``dim <n>`` then one simplex per line; faces are implied."""
    dim = None
    simplices = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "dim":
            if dim is not None or len(parts) != 2:
                raise FormatError(f"line {lineno}: bad dim header")
            try:
                dim = int(parts[1])
            except ValueError:
                raise FormatError(f"line {lineno}: bad dim header") from None
            continue
        if dim is None:
            raise FormatError("missing 'dim <n>' header")
        try:
            s = [int(p) for p in parts]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer vertex") from None
        if any(v < 0 for v in s) or len(set(s)) != len(s):
            raise FormatError(f"line {lineno}: bad simplex {s}")
        if len(s) - 1 > dim:
            raise FormatError(f"line {lineno}: simplex exceeds declared dim {dim}")
        simplices.append(s)
    if dim is None:
        raise FormatError("missing 'dim <n>' header")
    x = SimplicialComplex(simplices)
    if x.dim != dim:
        raise FormatError(f"declared dim {dim} but complex has dim {x.dim}")
    return x


def read_complex(path) -> SimplicialComplex:
    return loads_complex(Path(path).read_text())


def write_complex(x: SimplicialComplex, path) -> None:
    Path(path).write_text(dumps_complex(x))


@dataclass(frozen=True)
class ComplexPair:
    ambient: SimplicialComplex
    sub: SimplicialComplex
    cell: Optional[CellDesignation] = None


def loads_pair(text: str, base: Path) -> ComplexPair:
    """Pair file: ``ambient <file>``, ``sub <file>``, optional ``cell <v...>``."""
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key not in ("ambient", "sub", "cell") or not rest.strip():
            raise FormatError(f"line {lineno}: unknown pair field {key!r}")
        fields[key] = rest.strip()
    if "ambient" not in fields or "sub" not in fields:
        raise FormatError("pair file needs 'ambient' and 'sub' lines")
    ambient = read_complex(base / fields["ambient"])
    sub = read_complex(base / fields["sub"])
    if not sub.is_subcomplex_of(ambient):
        raise InvalidPairError("sub is not a subcomplex of ambient")
    cell = None
    if "cell" in fields:
        try:
            cell = CellDesignation(tuple(int(v) for v in fields["cell"].split()))
        except ValueError:
            raise FormatError("bad cell line") from None
    return ComplexPair(ambient, sub, cell)


def read_pair(path) -> ComplexPair:
    path = Path(path)
    return loads_pair(path.read_text(), path.parent)
