"""Nerves of ball covers of planar point samples, and their Z/2 ranks.

Only simplices up to triangles are built, which is all that first
cohomology needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from sepchk.errors import DimensionError, FormatError, SepchkError
from sepchk.homology import betti_number
from sepchk.simplicial import SimplicialComplex

U_LABEL = "U"


@dataclass
class PointCloud:
    points: np.ndarray
    labels: Optional[list] = None

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.labels is not None:
            self.labels = list(self.labels)
            if len(self.labels) != len(self.points):
                raise SepchkError("one label per point required")
        if len(self.points) and len(np.unique(self.points, axis=0)) != len(self.points):
            raise SepchkError("point cloud has duplicate points")

    def __len__(self) -> int:
        return len(self.points)

    def without(self, label: str = U_LABEL) -> "PointCloud":
        """The sub-cloud of points not carrying ``label``."""
        if self.labels is None:
            return PointCloud(self.points.copy(), None)
        keep = [i for i, lab in enumerate(self.labels) if lab != label]
        return PointCloud(self.points[keep], [self.labels[i] for i in keep])

    def label_mask(self, label: str = U_LABEL) -> np.ndarray:
        if self.labels is None:
            return np.zeros(len(self), dtype=bool)
        return np.array([lab == label for lab in self.labels], dtype=bool)


@dataclass
class NerveComplex:
    complex: SimplicialComplex
    scale: float
    mode: str


def _enclosing_radius(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Smallest-enclosing-ball radius for each triangle (rows of p, q, r)."""
    a2 = np.sum((q - r) ** 2, axis=1)
    b2 = np.sum((p - r) ** 2, axis=1)
    c2 = np.sum((p - q) ** 2, axis=1)
    longest = np.maximum(np.maximum(a2, b2), c2)
    # non-acute: the ball on the longest side as diameter contains the third point
    nonacute = 2 * longest >= a2 + b2 + c2
    u, v = q - p, r - p
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0] if p.shape[1] == 2 else np.linalg.norm(np.cross(u, v), axis=1)
    area2 = np.abs(cross)
    with np.errstate(divide="ignore", invalid="ignore"):
        circ = np.sqrt(a2 * b2 * c2) / (2 * area2)
    return np.where(nonacute | (area2 == 0), np.sqrt(longest) / 2, circ)


def build_nerve(cloud: PointCloud, eps: float, max_dim: int = 2, mode: str = "cech") -> NerveComplex:
    """Čech mode keeps a simplex iff its closed ε-balls share a point; Rips
    mode iff all pairwise distances are at most 2ε."""
    if not eps > 0:
        raise SepchkError("scale must be positive")
    if max_dim not in (1, 2):
        raise DimensionError("max_dim must be 1 or 2")
    if mode not in ("cech", "rips"):
        raise SepchkError(f"unknown nerve mode {mode!r}")
    n = len(cloud)
    simplices: list = [(i,) for i in range(n)]
    if n == 0:
        return NerveComplex(SimplicialComplex([]), eps, mode)
    tree = cKDTree(cloud.points)
    pairs = tree.query_pairs(2 * eps, output_type="ndarray")
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))] if len(pairs) else pairs
    simplices.extend(map(tuple, pairs.tolist()))
    if max_dim == 2 and len(pairs):
        nbrs: list = [set() for _ in range(n)]
        for i, j in pairs.tolist():
            nbrs[i].add(j)
        tris = [(i, j, k) for i, j in pairs.tolist() for k in nbrs[i] & nbrs[j] if k > j]
        if tris:
            tri = np.array(sorted(tris), dtype=np.int64)
            if mode == "cech":
                pts = cloud.points
                rad = _enclosing_radius(pts[tri[:, 0]], pts[tri[:, 1]], pts[tri[:, 2]])
                tri = tri[rad <= eps * (1 + 1e-12)]
            simplices.extend(map(tuple, tri.tolist()))
    return NerveComplex(SimplicialComplex(simplices, close=False), eps, mode)


def cech_rank_at_scale(cloud: PointCloud, eps: float, k: int, mode: str = "cech") -> int:
    """``dim H^k`` of the nerve at scale ε (equal to ``dim H_k`` over a field)."""
    if k < 0 or k > 1:
        raise DimensionError("nerves are built up to triangles; k must be 0 or 1")
    nerve = build_nerve(cloud, eps, k + 1, mode)
    return betti_number(nerve.complex, k)


def stability_check(cloud: PointCloud, eps1: float, eps2: float, k: int, mode: str = "cech") -> bool:
    if not eps1 < eps2:
        raise SepchkError("stability_check needs eps1 < eps2")
    return cech_rank_at_scale(cloud, eps1, k, mode) == cech_rank_at_scale(cloud, eps2, k, mode)


def scan_ranks(cloud: PointCloud, eps_values: Sequence[float], k: int, mode: str = "cech") -> list:
    return [cech_rank_at_scale(cloud, e, k, mode) for e in eps_values]


# -- Warsaw circle ---------------------------------------------------------------
#
# Sampling the sine arc uniformly does not work at small scales: near the
# limit segment the two sides of each extremum meet at an angle of order x^4,
# and wherever their distance passes 2ε the ε-balls leave tiny uncovered
# pockets, each one a spurious class in H^1 of the nerve. The arc is
# therefore sampled at parameters t_p ± τ symmetric about every extremum t_p,
# so each pair of points faces the other at equal height. The rungs of that
# ladder are placed so every quadrilateral before the crossing is filled at
# the lower design scale, and the crossing itself is stepped over in one
# chord, so the picture is the same at every scale in the design window.

DEFAULT_WINDOW = (0.00062, 0.00063)
DEFAULT_STEP = 0.0012


def _arc_point(t: float) -> np.ndarray:
    return np.array([1.0 / t, math.sin(t)])


def _tri_radius(a, b, c) -> float:
    return float(_enclosing_radius(a[None], b[None], c[None])[0])


def _rung_width(tp: float, tau: float) -> float:
    return abs(1.0 / (tp - tau) - 1.0 / (tp + tau))


def _chord(tp: float, ta: float, tb: float) -> float:
    return max(float(np.linalg.norm(_arc_point(tp + ta) - _arc_point(tp + tb))),
               float(np.linalg.norm(_arc_point(tp - ta) - _arc_point(tp - tb))))


def _quad_filled(tp: float, ta: float, tb: float, eps: float) -> bool:
    la, ra, lb, rb = (_arc_point(tp + ta), _arc_point(tp - ta), _arc_point(tp + tb), _arc_point(tp - tb))
    if ta == 0.0:
        return _tri_radius(la, lb, rb) <= eps
    one = max(_tri_radius(la, ra, rb), _tri_radius(la, lb, rb))
    other = max(_tri_radius(ra, la, lb), _tri_radius(ra, rb, lb))
    return min(one, other) <= eps


def _speed(t: float) -> float:
    return math.hypot(1.0 / (t * t), math.cos(t))


def _polyline_samples(vertices: Sequence, step: float) -> np.ndarray:
    out = []
    for a, b in zip(vertices[:-1], vertices[1:]):
        a, b = np.asarray(a, float), np.asarray(b, float)
        m = max(1, math.ceil(np.linalg.norm(b - a) / step))
        t = np.arange(m) / m
        out.append(a + t[:, None] * (b - a))
    out.append(np.asarray(vertices[-1], float)[None, :])
    return np.vstack(out)


def _plain_levels(a: float, b: float, step: float) -> list:
    """Parameters in ``[a, b]`` with consecutive arc chords at most ``step``."""
    out, t = [a], a
    while t < b:
        dt = 0.95 * step / max(_speed(t), 1e-12)
        nxt = min(b, t + dt)
        while np.linalg.norm(_arc_point(nxt) - _arc_point(t)) > step:
            nxt = t + (nxt - t) / 2
        out.append(nxt)
        t = nxt
    return out


def _ladder_levels(tp: float, tau_max: float, step: float, eps1: float, eps2: float) -> list:
    margin = 0.01 * eps1
    levels = []
    if _rung_width(tp, tau_max) > 2 * eps2 + margin:
        tau_a = brentq(lambda s: _rung_width(tp, s) - (2 * eps1 - margin), 0.0, tau_max)
        tau_b = brentq(lambda s: _rung_width(tp, s) - (2 * eps2 + margin), 0.0, tau_max)
        if _chord(tp, tau_a, tau_b) > step:
            raise SepchkError(f"scale window too wide for step {step} near t={tp:.3f}")
        # outside the crossing the rungs are too wide to matter
        left = _plain_levels(tp + tau_b, tp + tau_max, step)
        right = _plain_levels(tp - tau_max, tp - tau_b, step)
        outer = sorted({t - tp for t in left} | {tp - t for t in right})
        # a rung on each plain level keeps both sides within step
        for k in range(len(outer) - 1):
            while _chord(tp, outer[k], outer[k + 1]) > step:
                outer.insert(k + 1, (outer[k] + outer[k + 1]) / 2)
        levels.extend(outer)
        start = tau_a
    else:
        start = tau_max
    cur = start
    levels.append(cur)
    while cur > 0.0:
        if _chord(tp, 0.0, cur) <= step and _quad_filled(tp, 0.0, cur, eps1):
            break
        lo, hi = 0.0, cur
        for _ in range(48):
            mid = (lo + hi) / 2
            if _chord(tp, mid, cur) <= step and _quad_filled(tp, mid, cur, eps1):
                hi = mid
            else:
                lo = mid
        cur = hi
        levels.append(cur)
    levels.append(0.0)
    return sorted(set(levels))


def _sine_arc_samples(x_min: float, step: float, window: tuple) -> np.ndarray:
    """Points of ``(x, sin(1/x))``, ``x ∈ [x_min, 1]``, ordered from ``x_min``."""
    t_lo, t_hi = 1.0, 1.0 / x_min
    ts = {t_lo, t_hi}
    covered = []
    k = 0
    while math.pi / 2 + k * math.pi < t_hi:
        tp = math.pi / 2 + k * math.pi
        k += 1
        if tp <= t_lo:
            continue
        tau_max = min(math.pi / 2, t_hi - tp, tp - t_lo)
        for tau in _ladder_levels(tp, tau_max, step, *window):
            ts.update((tp - tau, tp + tau))
        covered.append((tp - tau_max, tp + tau_max))
    edges = [t_lo] + [c for pair in covered for c in pair] + [t_hi]
    for a, b in zip(edges[0::2], edges[1::2]):
        if b > a:
            ts.update(_plain_levels(a, b, step))
    t = np.array(sorted(ts, reverse=True))
    t = t[np.concatenate([[True], np.diff(t) < -1e-15])]
    return np.column_stack([1.0 / t, np.sin(t)])


def warsaw_circle_sample(m: int = 2000, x_min: float = 0.05, u_range: tuple = (0.5, 0.6),
                         window: tuple = DEFAULT_WINDOW, step: float = DEFAULT_STEP) -> PointCloud:
    """Sample of the sine arc over ``[x_min, 1]``, its limit segment, a
    horizontal connector from the arc's left end to the segment, and a return
    arc from ``(1, sin 1)`` down and around to ``(0, -1)``.

    ``m`` is a minimum point count; consecutive sine-arc samples are at most
    ``step`` apart. ``window`` is the pair of scales the arc sampling is
    designed for. Points on the sine arc with ``x`` inside ``u_range`` are
    labelled ``"U"``.
    """
    if m < 100:
        raise SepchkError("m must be at least 100")
    if not 0 < x_min < 1:
        raise SepchkError("x_min must lie in (0, 1)")
    if not 0 < window[0] < window[1]:
        raise SepchkError("window must be an increasing pair of positive scales")
    y0 = math.sin(1.0 / x_min)
    s1 = math.sin(1.0)
    ret = [(1.0, s1), (1.25, s1), (1.25, -1.5), (0.0, -1.5), (0.0, -1.0)]
    limit = [(0.0, -1.0), (0.0, y0), (0.0, 1.0)]
    connector = [(0.0, y0), (x_min, y0)]

    arc = _sine_arc_samples(x_min, step, window)
    pieces = [arc, _polyline_samples(ret, step)[1:], _polyline_samples(limit, step)[1:],
              _polyline_samples(connector, step)[1:-1]]
    pts = np.vstack(pieces)
    if len(pts) < m:
        return warsaw_circle_sample(m, x_min, u_range, window, step / 2)
    labels = [U_LABEL if i < len(arc) and u_range[0] < pts[i, 0] < u_range[1] else None
              for i in range(len(pts))]
    return PointCloud(pts, labels)


def max_consecutive_gap(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    return float(np.max(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def sine_arc_points(cloud: PointCloud, x_min: float) -> np.ndarray:
    """The leading run of points lying on the sine arc (in sampling order)."""
    pts = cloud.points
    on = np.abs(pts[:, 1] - np.sin(1.0 / np.maximum(pts[:, 0], 1e-300))) < 1e-9
    on &= pts[:, 0] >= x_min - 1e-12
    end = np.argmin(on) if not on.all() else len(on)
    return pts[:end]


# -- file format -----------------------------------------------------------------


def dumps_cloud(cloud: PointCloud) -> str:
    lines = []
    for i, p in enumerate(cloud.points):
        row = " ".join(repr(float(c)) for c in p)
        lab = cloud.labels[i] if cloud.labels is not None else None
        lines.append(f"{row} {lab}" if lab else row)
    return "\n".join(lines) + "\n"


def loads_cloud(text: str) -> PointCloud:
    pts, labels = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            coords = [float(parts[0]), float(parts[1])]
        except (ValueError, IndexError):
            raise FormatError(f"line {lineno}: expected 'x y [label]'") from None
        if len(parts) > 3:
            raise FormatError(f"line {lineno}: too many fields")
        pts.append(coords)
        labels.append(parts[2] if len(parts) == 3 else None)
    if not pts:
        raise FormatError("empty point cloud")
    return PointCloud(np.array(pts), labels if any(labels) else None)


def read_cloud(path) -> PointCloud:
    return loads_cloud(Path(path).read_text())


def write_cloud(cloud: PointCloud, path) -> None:
    Path(path).write_text(dumps_cloud(cloud))
