"""Raster-scale checks of the separation conclusions for PL maps.

The target sphere is modelled as a grid box in R^{n+1} plus one region at
infinity: unoccupied cells on the box boundary all belong to component 0.
Rasterization is conservative (a cell is occupied iff its closed cube meets
the image, decided exactly), so the complement labeling can never report a
separation that a raster leak would hide, nor invent one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage

from sepchk import geometry as geo
from sepchk._backend import kernels
from sepchk.errors import (
    DegenerateCellError,
    DimensionError,
    FormatError,
    GridError,
    InconsistentExtensionError,
    ResolutionError,
)
from sepchk.homology import betti_number
from sepchk.simplicial import CellDesignation, SimplicialComplex


@dataclass
class PLMap:
    """Vertex coordinates; extended affinely over each simplex."""

    domain: SimplicialComplex
    coords: np.ndarray

    def __post_init__(self):
        self.coords = np.atleast_2d(np.asarray(self.coords, dtype=float))
        need = max(self.domain.vertices, default=-1) + 1
        if len(self.coords) < need:
            raise DimensionError(f"coordinates for {len(self.coords)} vertices, need {need}")

    @property
    def ambient_dim(self) -> int:
        return self.coords.shape[1]

    def image(self, s) -> np.ndarray:
        return self.coords[list(s)]

    def exact(self, s) -> list:
        return [geo.frac_point(p) for p in self.image(s)]

    def restrict(self, sub: SimplicialComplex) -> "PLMap":
        return PLMap(sub, self.coords)


@dataclass
class Grid:
    """Cells ``[lo + i*h, lo + (i+1)*h]`` per axis, ``i < shape``."""

    lo: np.ndarray
    h: float
    shape: tuple
    occupancy: Optional[np.ndarray] = None

    @classmethod
    def from_box(cls, box: Sequence[float], h: float) -> "Grid":
        """``box`` is ``(x0, y0, x1, y1)`` or ``(x0, y0, z0, x1, y1, z1)``."""
        if h <= 0:
            raise GridError("cell size must be positive")
        d = len(box) // 2
        if d not in (2, 3) or len(box) != 2 * d:
            raise GridError("box needs 4 or 6 numbers")
        lo = np.array(box[:d], dtype=float)
        hi = np.array(box[d:], dtype=float)
        if np.any(hi <= lo):
            raise GridError("box upper corner must exceed lower corner")
        shape = tuple(int(math.ceil((b - a) / h - 1e-9)) for a, b in zip(lo, hi))
        return cls(lo, float(h), shape)

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def hi(self) -> np.ndarray:
        return self.lo + self.h * np.array(self.shape)

    def with_occupancy(self, occ: np.ndarray) -> "Grid":
        return Grid(self.lo.copy(), self.h, self.shape, occ)

    def cell_lo_exact(self, idx) -> tuple:
        hf = geo.exact(self.h)
        return tuple(geo.exact(a) + int(i) * hf for a, i in zip(self.lo, idx))

    def cell_centres(self, idx: np.ndarray) -> np.ndarray:
        return self.lo + (idx + 0.5) * self.h

    def check_contains(self, pts: np.ndarray) -> None:
        if pts.shape[1] != self.ndim:
            raise GridError(f"points live in R^{pts.shape[1]}, grid in R^{self.ndim}")
        if np.any(pts <= self.lo) or np.any(pts >= self.hi):
            raise GridError("grid box must strictly contain the image")


# -- rasterization -------------------------------------------------------------


def _float_axes(exact_axes: list) -> np.ndarray:
    return np.array([[float(c) for c in a] for a in exact_axes])


def simplex_cells(f: PLMap, grid: Grid, s) -> np.ndarray:
    """Indices (k x d) of cells whose closed cube meets ``f(s)``."""
    pts = f.image(s)
    h = grid.h
    first = np.floor((pts.min(axis=0) - grid.lo) / h).astype(int) - 1
    last = np.floor((pts.max(axis=0) - grid.lo) / h).astype(int) + 1
    first = np.maximum(first, 0)
    last = np.minimum(last, np.array(grid.shape) - 1)
    ranges = [np.arange(a, b + 1) for a, b in zip(first, last)]
    cand = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, grid.ndim)
    if len(cand) == 0:
        return cand
    verts = f.exact(s)
    axes = geo.separating_axes(verts)
    fa = _float_axes(axes)
    centres = grid.cell_centres(cand)
    scale = float(np.abs(pts).max() + np.abs(grid.lo).max() + h)
    sure_out = np.zeros(len(cand), dtype=bool)
    sure_in = np.ones(len(cand), dtype=bool)
    for a in fa:
        proj = pts @ a
        c = centres @ a
        r = h / 2 * np.abs(a).sum()
        gap = np.maximum(proj.min() - (c + r), (c - r) - proj.max())
        tol = 1e-9 * scale * np.abs(a).sum()
        sure_out |= gap > tol
        sure_in &= gap < -tol
    keep = sure_in.copy()
    ties = np.flatnonzero(~sure_out & ~sure_in)
    if len(ties):
        prep = geo.prepare_simplex(verts, axes)
        hf = geo.exact(h)
        for k in ties:
            keep[k] = geo.box_meets_prepared(prep, grid.cell_lo_exact(cand[k]), hf)
    return cand[keep]


def rasterize(f: PLMap, grid: Grid, simplices=None) -> Grid:
    """Conservative cover of ``f(domain)``: maximal simplices by default."""
    grid.check_contains(f.coords[list(f.domain.vertices)])
    occ = np.zeros(grid.shape, dtype=bool)
    for s in simplices if simplices is not None else f.domain.maximal_simplices:
        cells = simplex_cells(f, grid, s)
        if len(cells):
            occ[tuple(cells.T)] = True
    return grid.with_occupancy(occ)


# -- complement components ------------------------------------------------------


@dataclass
class ComponentLabeling:
    labels: np.ndarray  # -1 on occupied cells
    count: int
    sizes: list
    incident_to_U: set = field(default_factory=set)

    infinity_id = 0


def complement_components(grid: Grid) -> ComponentLabeling:
    if grid.occupancy is None:
        raise GridError("rasterize the grid first")
    labels, count = kernels.label_components(grid.occupancy.astype(np.uint8))
    labels = np.asarray(labels, dtype=np.int32)
    sizes = np.bincount(labels[labels >= 0].ravel(), minlength=count).tolist()
    return ComponentLabeling(labels, int(count), sizes)


def _face_neighbours(mask: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mask)
    for ax in range(mask.ndim):
        out |= np.roll(mask, 1, axis=ax) & _not_wrapped(mask.shape, ax, 1)
        out |= np.roll(mask, -1, axis=ax) & _not_wrapped(mask.shape, ax, -1)
    return out


def _not_wrapped(shape, ax: int, shift: int) -> np.ndarray:
    ok = np.ones(shape, dtype=bool)
    idx = [slice(None)] * len(shape)
    idx[ax] = 0 if shift == 1 else -1
    ok[tuple(idx)] = False
    return ok


def u_cells(f: PLMap, grid: Grid, u: CellDesignation) -> np.ndarray:
    """Boolean mask of cells met by f(U) and by no other maximal simplex.

    Cells around the boundary of U's simplex are shared with neighbouring
    simplices; dropping them keeps incidence a statement about U itself.
    """
    mask = np.zeros(grid.shape, dtype=bool)
    cells = simplex_cells(f, grid, u.cell)
    if len(cells):
        mask[tuple(cells.T)] = True
    for s in f.domain.maximal_simplices:
        if s != u.cell:
            other = simplex_cells(f, grid, s)
            if len(other):
                mask[tuple(other.T)] = False
    return mask


def _sample_points(f: PLMap, u: CellDesignation, count: int = 32) -> np.ndarray:
    pts = f.image(u.cell)
    n = len(u.cell) - 1
    if n == 1:
        t = (np.arange(count) + 0.5) / count
        return pts[0] + t[:, None] * (pts[1] - pts[0])
    m = 1
    while m * (m - 1) // 2 < count:
        m += 1
    bary = [(i + 1 / 3, j + 1 / 3) for i in range(m) for j in range(m - i - 1)]
    lam = np.array([(1 - (a + b) / m, a / m, b / m) for a, b in bary])
    return lam @ pts


def _point_box_distance(p: np.ndarray, lo: np.ndarray, h: float) -> np.ndarray:
    d = np.maximum(np.maximum(lo - p, 0), p - (lo + h))
    return np.sqrt((d ** 2).sum(axis=-1))


@dataclass
class ClosureReport:
    samples: int
    passed: int

    @property
    def all_pass(self) -> bool:
        return self.samples > 0 and self.passed == self.samples

    @property
    def fraction(self) -> float:
        return self.passed / self.samples if self.samples else 0.0


def incident_components(labeling: ComponentLabeling, grid: Grid, f: PLMap,
                        u: CellDesignation, samples: int = 32) -> tuple:
    """Components face-adjacent to U's cells, plus the closure report.

    Each sample point of f(U) passes when every incident component owns a
    cell within distance 2h, and there are exactly two incident components.
    """
    mask = u_cells(f, grid, u)
    if not mask.any():
        raise ResolutionError("no cell meets f(U) alone; refine the grid")
    near = _face_neighbours(mask) & (labeling.labels >= 0)
    incident = set(int(v) for v in np.unique(labeling.labels[near]))
    labeling.incident_to_U = incident

    pts = _sample_points(f, u, samples)
    reach = 2 * grid.h
    passed = 0
    for p in pts:
        lo_idx = np.maximum(np.floor((p - reach - grid.lo) / grid.h).astype(int), 0)
        hi_idx = np.minimum(np.floor((p + reach - grid.lo) / grid.h).astype(int), np.array(grid.shape) - 1)
        win = tuple(slice(a, b + 1) for a, b in zip(lo_idx, hi_idx))
        idx = np.stack(np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo_idx, hi_idx)],
                                   indexing="ij"), axis=-1)
        dist = _point_box_distance(p, grid.lo + idx * grid.h, grid.h)
        labs = labeling.labels[win][dist <= reach]
        owned = set(int(v) for v in np.unique(labs) if v >= 0)
        if len(incident) == 2 and incident <= owned:
            passed += 1
    return incident, ClosureReport(len(pts), passed)


# -- extensions -----------------------------------------------------------------


def interior_mask(occupancy: np.ndarray) -> np.ndarray:
    """Cells at distance greater than h from every occupied cell."""
    d = occupancy.ndim
    offs = np.array(np.meshgrid(*[np.arange(-2, 3)] * d, indexing="ij")).reshape(d, -1).T
    gap = np.maximum(np.abs(offs) - 1, 0)
    foot = ((gap ** 2).sum(axis=1) <= 1).reshape((5,) * d)
    return ~ndimage.binary_dilation(occupancy, structure=foot)


@dataclass
class Coverage:
    fractions: dict  # component id -> covered fraction of its interior cells

    def covers(self, cid: int) -> bool:
        return self.fractions.get(cid) == 1.0

    def covers_any(self) -> bool:
        return any(self.covers(c) for c in self.fractions)


def extension_covers(F: PLMap, f: PLMap, labeling: ComponentLabeling, grid: Grid,
                     components: Sequence[int]) -> Coverage:
    """Fraction of each component's interior cells met by ``F(X̂)``."""
    xv = list(f.domain.vertices)
    if not f.domain.is_subcomplex_of(F.domain):
        raise InconsistentExtensionError("extension domain does not contain X")
    if len(F.coords) <= max(xv) or not np.array_equal(F.coords[xv], f.coords[xv]):
        raise InconsistentExtensionError("F and f disagree on a vertex of X")
    covered = rasterize(F, Grid(grid.lo, grid.h, grid.shape)).occupancy
    inner = interior_mask(grid.occupancy)
    out = {}
    for cid in sorted(components):
        cells = (labeling.labels == cid) & inner
        total = int(cells.sum())
        out[cid] = float((cells & covered).sum()) / total if total else None
    return Coverage(out)


# -- duality --------------------------------------------------------------------


def occupied_complex(occupancy: np.ndarray) -> SimplicialComplex:
    """Each occupied square split along a diagonal into two triangles."""
    if occupancy.ndim != 2:
        raise DimensionError("duality check is planar only")
    nx, ny = occupancy.shape
    vid = lambda i, j: i * (ny + 1) + j  # noqa: E731
    tris = []
    for i, j in zip(*np.nonzero(occupancy)):
        a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
        tris += [(a, b, d), (a, c, d)]
    if not tris:
        return SimplicialComplex([])
    cx = SimplicialComplex(tris)
    # relabel densely
    vs = cx.vertices
    remap = {v: k for k, v in enumerate(vs)}
    return SimplicialComplex([tuple(remap[v] for v in t) for t in tris])


def duality_check(labeling: ComponentLabeling, grid: Grid) -> dict:
    cx = occupied_complex(grid.occupancy)
    h1 = betti_number(cx, 1) if cx.dim >= 1 else 0
    return {"components": labeling.count, "h1": h1, "pass": labeling.count - 1 == h1}


# -- injectivity ------------------------------------------------------------------


def check_injectivity_on_U(f: PLMap, u: CellDesignation) -> bool:
    """Exactly: does f(open U) avoid the image of every other point of X?"""
    u.check(f.domain)
    n = f.domain.dim
    if f.ambient_dim != n + 1:
        raise DimensionError(f"maps of {n}-complexes into R^{n + 1} only")
    sigma = f.exact(u.cell)
    if geo.hyperplane_normal(sigma) is None:
        raise DegenerateCellError(f"image of {u.cell} is degenerate")
    for tau in f.domain.maximal_simplices:
        if tau != u.cell and geo.meets_relative_interior(sigma, f.exact(tau)):
            return False
    return True


# -- files ------------------------------------------------------------------------


def loads_map(text: str, domain: SimplicialComplex) -> PLMap:
    rows: dict = {}
    width = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "vertex" or len(parts) not in (4, 5):
            raise FormatError(f"line {lineno}: expected 'vertex <id> <x> <y> [<z>]'")
        try:
            vid = int(parts[1])
            xyz = [float(v) for v in parts[2:]]
        except ValueError:
            raise FormatError(f"line {lineno}: bad number") from None
        if width is None:
            width = len(xyz)
        elif width != len(xyz):
            raise FormatError(f"line {lineno}: mixed coordinate dimensions")
        rows[vid] = xyz
    missing = [v for v in domain.vertices if v not in rows]
    if missing:
        raise FormatError(f"no coordinates for vertices {missing[:5]}")
    coords = np.zeros((max(rows) + 1, width))
    for v, xyz in rows.items():
        coords[v] = xyz
    return PLMap(domain, coords)


def read_map(path, domain: SimplicialComplex) -> PLMap:
    return loads_map(Path(path).read_text(), domain)


def dumps_map(f: PLMap) -> str:
    return "".join(f"vertex {v} " + " ".join(repr(float(c)) for c in f.coords[v]) + "\n"
                   for v in f.domain.vertices)


def write_map(f: PLMap, path) -> None:
    Path(path).write_text(dumps_map(f))


_PALETTE = ["#dde8f5", "#f6dcc4", "#d7efd2", "#efd4ea", "#f3efc0", "#cfeeee", "#e6d9c9"]


def svg(grid: Grid, labeling: ComponentLabeling, f: PLMap, u: Optional[CellDesignation] = None) -> str:
    """Occupied cells black, one fill per component, f(U) in red (planar only)."""
    if grid.ndim != 2:
        raise DimensionError("SVG output is planar only")
    nx, ny = grid.shape
    px = 6
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{nx * px}" height="{ny * px}">']
    for i in range(nx):
        for j in range(ny):
            lab = labeling.labels[i, j]
            fill = "#000000" if lab < 0 else _PALETTE[lab % len(_PALETTE)]
            out.append(f'<rect x="{i * px}" y="{(ny - 1 - j) * px}" width="{px}" height="{px}" fill="{fill}"/>')
    if u is not None:
        a, b = ((p - grid.lo) / grid.h * px for p in f.image(u.cell)[:2])
        out.append(f'<line x1="{a[0]:.2f}" y1="{ny * px - a[1]:.2f}" x2="{b[0]:.2f}" y2="{ny * px - b[1]:.2f}" '
                   'stroke="#d01010" stroke-width="3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def labeling_json(labeling: ComponentLabeling) -> str:
    return json.dumps({"components": labeling.count, "sizes": labeling.sizes,
                       "incident": sorted(labeling.incident_to_U)}, sort_keys=True)


# -- pipeline ---------------------------------------------------------------------


def simulate(f: PLMap, u: CellDesignation, grid: Grid, F: Optional[PLMap] = None) -> dict:
    """Conclusion-side report for one PL map, optionally with an extension.

    Incidence is only meaningful when f is injective on U; otherwise the
    ``incident``, ``closure_pass`` and ``coverage`` fields are ``None``.
    """
    injective = check_injectivity_on_U(f, u)
    g = rasterize(f, grid)
    lab = complement_components(g)
    out = {
        "injective_on_U": injective,
        "components": lab.count,
        "incident": None,
        "closure_pass": None,
        "coverage": None,
        "duality_pass": duality_check(lab, g)["pass"] if g.ndim == 2 else None,
        "_grid": g,
        "_labeling": lab,
    }
    if not injective:
        return out
    inc, closure = incident_components(lab, g, f, u)
    out["incident"] = sorted(inc)
    out["closure_pass"] = closure.all_pass
    if F is not None:
        cov = extension_covers(F, f, lab, g, sorted(inc))
        fr = [cov.fractions[c] for c in sorted(inc)] + [None, None]
        out["coverage"] = {"v1": fr[0], "v2": fr[1]}
    return out
