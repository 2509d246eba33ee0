"""Minimal-area Z^2 triangles with side lengths >= D and angles <= pi/2.

These minimizers determine the densest square-lattice packings: sigma equals
the doubled minimal area S, adjacent minimizer pairs span the maximally-dense
sublattices, and the congruence-class structure fixes the ground-state count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import intlin, lattice
from .errors import DomainError, NotAttainableError

Vec = tuple[int, int]


@dataclass(frozen=True)
class Triangle:
    """Canonical form of a Z^2 triangle (translation + point-group minimal)."""

    vertices: tuple[Vec, Vec, Vec]
    sides2: tuple[int, int, int]  # sorted squared side lengths
    area2: int                    # doubled area

    @property
    def is_isosceles(self) -> bool:
        a, b, c = self.sides2
        return a == b or b == c


@dataclass(frozen=True)
class TriangleClass:
    rep: Triangle
    m: int  # distinct sublattices spanned by the point-group orbit of rep


@dataclass(frozen=True)
class MTriangleReport:
    d2: int
    s: int                      # doubled minimal area; s/2 is the optimum
    classes: tuple[TriangleClass, ...]
    k: int                      # number of Z^2-congruence classes
    n0: int                     # max classes sharing one side-length multiset
    n1: int                     # number of distinct side-length multisets


def _sides2(p: Vec, q: Vec, r: Vec):
    def n2(u, v):
        return (u[0] - v[0]) ** 2 + (u[1] - v[1]) ** 2

    return tuple(sorted((n2(p, q), n2(q, r), n2(p, r))))


def _angles_ok(p: Vec, q: Vec, r: Vec) -> bool:
    # angle <= pi/2 at every vertex <=> nonnegative dot product of edge pairs
    for a, b, c in ((p, q, r), (q, p, r), (r, p, q)):
        u = (b[0] - a[0], b[1] - a[1])
        v = (c[0] - a[0], c[1] - a[1])
        if u[0] * v[0] + u[1] * v[1] < 0:
            return False
    return True


def canonical_triangle(verts) -> Triangle:
    """Unique representative under Z^2 congruence (point group + translation)."""
    pts = [(v[0], v[1]) for v in verts]
    best = None
    for m in lattice.point_group(lattice.Z2):
        img = sorted(lattice.apply_mat(m, p) for p in pts)
        base = img[0]
        moved = tuple(sorted((x - base[0], y - base[1]) for x, y in img))
        if best is None or moved < best:
            best = moved
    p, q, r = best
    area2 = lattice.doubled_area((*p, 0), (*q, 0), (*r, 0))
    if area2 == 0:
        raise DomainError(f"degenerate (collinear) triangle {verts}")
    return Triangle(vertices=best, sides2=_sides2(p, q, r), area2=area2)


def triangle_lattice(t: Triangle):
    """HNF basis of the sublattice spanned by two edges of t."""
    p, q, r = t.vertices
    return intlin.hnf((q[0] - p[0], q[1] - p[1]), (r[0] - p[0], r[1] - p[1]))


def lattice_orbit(t: Triangle):
    """Distinct edge-spanned sublattices over the point-group orbit of t."""
    p, q, r = t.vertices
    out = set()
    for m in lattice.point_group(lattice.Z2):
        a = lattice.apply_mat(m, (q[0] - p[0], q[1] - p[1]))
        b = lattice.apply_mat(m, (r[0] - p[0], r[1] - p[1]))
        out.add(intlin.hnf(a, b))
    return sorted(out)


def multiplicity_m(t: Triangle, d2: int) -> int:
    """Number of distinct sublattices spanned by the congruence class of t.

    Computed as the exact point-group orbit size of the edge lattice.  This is
    1 for d2=2 and otherwise 2 or 4; non-isosceles triangles always give 4,
    and isosceles ones give 2 exactly when the symmetry axis is a lattice
    mirror direction (else their mirror twin spans a different sublattice).
    """
    return len(lattice_orbit(t))


def solve_problem5(d2: int) -> MTriangleReport:
    """Exhaustively find all minimal triangles for d2 on Z^2.

    Enumeration bound: a feasible right isosceles triangle with legs
    ceil(sqrt(d2)) gives doubled area S_ub = ceil(sqrt(d2))^2, and the angle
    constraint forces every side of a triangle with doubled area S to satisfy
    l^2 <= 2*S.  All candidate vertices therefore lie within squared radius
    2*S_ub of a fixed vertex, which makes the scan below exhaustive.
    """
    if d2 < 2:
        raise DomainError(f"d2 must be at least 2, got {d2}")
    if not lattice.is_attainable(lattice.Z2, d2):
        raise NotAttainableError(lattice.Z2, d2)

    leg = math.isqrt(d2 - 1) + 1
    s_ub = leg * leg
    r2max = 2 * s_ub
    rad = math.isqrt(r2max)

    pts = [
        (x, y)
        for x in range(-rad, rad + 1)
        for y in range(-rad, rad + 1)
        if d2 <= x * x + y * y <= r2max
    ]
    # second vertex can be normalized into the first octant (x >= y >= 0)
    octant = [(x, y) for (x, y) in pts if x >= y >= 0]

    best = s_ub
    found = []
    for v2 in octant:
        n2v2 = v2[0] * v2[0] + v2[1] * v2[1]
        for v3 in pts:
            area2 = v2[0] * v3[1] - v2[1] * v3[0]
            if area2 <= 0 or area2 > best:
                continue
            dx, dy = v3[0] - v2[0], v3[1] - v2[1]
            if dx * dx + dy * dy < d2:
                continue
            n2v3 = v3[0] * v3[0] + v3[1] * v3[1]
            # dot products at the three vertices
            if v2[0] * v3[0] + v2[1] * v3[1] < 0:
                continue
            if n2v2 - (v2[0] * v3[0] + v2[1] * v3[1]) < 0:
                continue
            if n2v3 - (v2[0] * v3[0] + v2[1] * v3[1]) < 0:
                continue
            if area2 < best:
                best = area2
                found = [((0, 0), v2, v3)]
            else:
                found.append(((0, 0), v2, v3))

    if not found:
        # the seed right isosceles triangle is itself minimal
        found = [((0, 0), (leg, 0), (0, leg))]

    canon = sorted({canonical_triangle(v) for v in found},
                   key=lambda t: (t.sides2, t.vertices))
    classes = tuple(TriangleClass(rep=t, m=len(lattice_orbit(t))) for t in canon)
    by_sides = {}
    for t in canon:
        by_sides.setdefault(t.sides2, []).append(t)
    return MTriangleReport(
        d2=d2,
        s=best,
        classes=classes,
        k=len(canon),
        n0=max(len(v) for v in by_sides.values()),
        n1=len(by_sides),
    )


def congruence_partition(triangles) -> dict:
    """Group plane-congruent / lattice-congruent triangles of equal area."""
    canon = sorted({canonical_triangle(t.vertices if isinstance(t, Triangle) else t)
                    for t in triangles}, key=lambda t: (t.sides2, t.vertices))
    if len({t.area2 for t in canon}) > 1:
        raise DomainError("triangles do not share a doubled area")
    by_sides = {}
    for t in canon:
        by_sides.setdefault(t.sides2, []).append(t)
    return {
        "K": len(canon),
        "N0": max(len(v) for v in by_sides.values()),
        "N1": len(by_sides),
        "classes": canon,
    }


def naive_min_area2(d2: int) -> int:
    """Independent brute-force oracle for the optimum of solve_problem5.

    Scans every vertex pair in a disk of radius 2*ceil(sqrt(d2)) + 2 with one
    vertex pinned at the origin and no search-space reductions beyond the
    point-group normalization of the second vertex.
    """
    rad = 2 * (math.isqrt(d2 - 1) + 1) + 2
    pts = [
        (x, y)
        for x in range(-rad, rad + 1)
        for y in range(-rad, rad + 1)
        if x * x + y * y >= d2 and x * x + y * y <= rad * rad
    ]
    octant = [p for p in pts if p[0] >= p[1] >= 0]
    best = None
    for v2 in octant:
        for v3 in pts:
            area2 = v2[0] * v3[1] - v2[1] * v3[0]
            if area2 <= 0 or (best is not None and area2 >= best):
                continue
            dx, dy = v3[0] - v2[0], v3[1] - v2[1]
            if dx * dx + dy * dy < d2:
                continue
            if not _angles_ok((0, 0), v2, v3):
                continue
            best = area2
    return best
