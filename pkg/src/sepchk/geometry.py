"""Exact predicates for PL images in R^2 and R^3.

Coordinates are turned into ``Fraction`` objects (exact for every float), so
the intersection and box tests below make no rounding decisions. Callers run
a float prefilter first and fall back here only near ties.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = tuple


def exact(c) -> Fraction:
    """The shortest decimal that rounds to ``c``: 0.05 means 1/20, not its binary neighbour."""
    if isinstance(c, (Fraction, int)):
        return Fraction(c)
    return Fraction(repr(float(c)))


def frac_point(p) -> Vec:
    return tuple(exact(c) for c in p)


def sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def dot(a: Vec, b: Vec):
    return sum(x * y for x, y in zip(a, b))


def cross(a: Vec, b: Vec) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def is_zero(v: Vec) -> bool:
    return all(c == 0 for c in v)


def hyperplane_normal(verts: Sequence[Vec]):
    """Normal of the hyperplane spanned by ``d`` points in R^d (d = 2, 3),
    or ``None`` when they are affinely dependent."""
    d = len(verts[0])
    if len(verts) != d:
        raise ValueError("need exactly d points for a hyperplane in R^d")
    if d == 2:
        e = sub(verts[1], verts[0])
        nrm = (-e[1], e[0])
    elif d == 3:
        nrm = cross(sub(verts[1], verts[0]), sub(verts[2], verts[0]))
    else:
        raise ValueError("only R^2 and R^3 are supported")
    return None if is_zero(nrm) else nrm


def _barycentric(y: Vec, verts: Sequence[Vec]) -> tuple:
    """Barycentric coordinates of ``y`` in the affine hull of ``verts``
    (assumed affinely independent and ``y`` in that hull)."""
    p0 = verts[0]
    es = [sub(v, p0) for v in verts[1:]]
    r = sub(y, p0)
    if len(es) == 1:
        lam1 = dot(r, es[0]) / dot(es[0], es[0])
        return (1 - lam1, lam1)
    g11, g12, g22 = dot(es[0], es[0]), dot(es[0], es[1]), dot(es[1], es[1])
    b1, b2 = dot(r, es[0]), dot(r, es[1])
    det = g11 * g22 - g12 * g12
    l1 = (b1 * g22 - b2 * g12) / det
    l2 = (g11 * b2 - g12 * b1) / det
    return (1 - l1 - l2, l1, l2)


def _section(tau: Sequence[Vec], base: Vec, nrm: Vec) -> list:
    """Generators of ``conv(tau) ∩ H`` for the hyperplane through ``base``
    with normal ``nrm``. Returns the vertices in a convex-position order when
    the whole of ``tau`` lies in H."""
    s = [dot(sub(q, base), nrm) for q in tau]
    if all(v == 0 for v in s):
        return list(tau)
    pts = [q for q, v in zip(tau, s) if v == 0]
    for a in range(len(tau)):
        for b in range(a + 1, len(tau)):
            if s[a] * s[b] < 0:
                t = s[a] / (s[a] - s[b])
                pts.append(tuple(qa + t * (qb - qa) for qa, qb in zip(tau[a], tau[b])))
    return pts


def _clip(poly: list, i: int) -> list:
    """Sutherland-Hodgman clip of a barycentric polygon by ``λ_i >= 0``."""
    out = []
    m = len(poly)
    for k in range(m):
        cur, nxt = poly[k], poly[(k + 1) % m]
        if cur[i] >= 0:
            out.append(cur)
        if (cur[i] >= 0) != (nxt[i] >= 0) and m > 1:
            t = cur[i] / (cur[i] - nxt[i])
            out.append(tuple(c + t * (n - c) for c, n in zip(cur, nxt)))
    return out


def meets_relative_interior(sigma: Sequence[Vec], tau: Sequence[Vec]) -> bool:
    """Does ``conv(tau)`` meet the relative interior of the codimension-one
    simplex ``conv(sigma)``? ``sigma`` must be non-degenerate."""
    nrm = hyperplane_normal(sigma)
    if nrm is None:
        raise ValueError("degenerate simplex")
    gens = _section(tau, sigma[0], nrm)
    if not gens:
        return False
    poly = [_barycentric(g, sigma) for g in gens]
    for i in range(len(sigma)):
        poly = _clip(poly, i)
        if not poly:
            return False
    # conv(poly) meets the open simplex iff each coordinate is positive somewhere
    return all(any(p[i] > 0 for p in poly) for i in range(len(sigma)))


def separating_axes(verts: Sequence[Vec]) -> list:
    """Candidate separating axes for a simplex against axis-aligned boxes."""
    d = len(verts[0])
    unit = [tuple(Fraction(int(i == k)) for i in range(d)) for k in range(d)]
    edges = [sub(verts[b], verts[a]) for a in range(len(verts)) for b in range(a + 1, len(verts))]
    axes = list(unit)
    if d == 2:
        axes += [(-e[1], e[0]) for e in edges]
    else:
        # pairwise edge crosses give every face normal of a triangle or tetrahedron
        axes += [cross(edges[i], edges[j]) for i in range(len(edges)) for j in range(i + 1, len(edges))]
        axes += [cross(e, u) for e in edges for u in unit]
    return [a for a in axes if not is_zero(a)]


def prepare_simplex(verts: Sequence[Vec], axes=None) -> list:
    """Per-axis ``(axis, min projection, max projection, |axis|_1)`` for repeated box tests."""
    axes = axes if axes is not None else separating_axes(verts)
    out = []
    for a in axes:
        proj = [dot(v, a) for v in verts]
        out.append((a, min(proj), max(proj), sum(abs(x) for x in a)))
    return out


def box_meets_prepared(prep: list, lo: Vec, h: Fraction) -> bool:
    half = h / 2
    centre = tuple(c + half for c in lo)
    for a, pmin, pmax, l1 in prep:
        c = dot(centre, a)
        r = half * l1
        if pmin > c + r or pmax < c - r:
            return False
    return True


def box_meets_simplex(verts: Sequence[Vec], lo: Vec, h: Fraction, axes=None) -> bool:
    """Closed box ``[lo, lo + h]^d`` against ``conv(verts)``, exactly."""
    return box_meets_prepared(prepare_simplex(verts, axes), lo, h)
