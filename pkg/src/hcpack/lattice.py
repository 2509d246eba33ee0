"""Exact geometry of the unit triangular (A2), honeycomb (H2) and square (Z2) lattices.

Sites are (a, b, parity) integer tuples; parity is 0 except on the honeycomb,
which is handled as the triangular Bravais lattice with a two-site basis.
With the nearest-neighbour distance normalized to 1 on every lattice, all
squared distances are integers:

    A2:  da^2 + da*db + db^2
    Z2:  da^2 + db^2
    H2:  3*(da^2 + da*db + db^2) + 3*da*dp + dp^2   (dp = parity difference)

so admissibility decisions never touch floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import intlin
from .errors import CommensurabilityError, DomainError, InvalidSiteError

A2 = "A2"
H2 = "H2"
Z2 = "Z2"
KINDS = (A2, H2, Z2)

Site = tuple[int, int, int]
Vec = tuple[int, int]

# Gram coefficients (gaa, gab, gbb) of the translation form per lattice kind.
# For H2 this is the form of the Bravais (triangular) translation lattice.
_GRAM = {A2: (1, 1, 1), H2: (3, 3, 3), Z2: (1, 0, 1)}


def check_kind(kind):
    if kind not in KINDS:
        raise DomainError(f"unknown lattice kind {kind!r}")


def check_site(kind, site) -> Site:
    a, b, p = site
    if p not in (0, 1):
        raise InvalidSiteError(f"parity {p} out of range for site {site}")
    if p != 0 and kind != H2:
        raise InvalidSiteError(f"nonzero parity is only valid on H2, got {site} on {kind}")
    return (a, b, p)


def site(a, b, p=0) -> Site:
    return (a, b, p)


def form(kind, v: Vec) -> int:
    """Squared length of a parity-preserving displacement."""
    gaa, gab, gbb = _GRAM[kind]
    return gaa * v[0] * v[0] + gab * v[0] * v[1] + gbb * v[1] * v[1]


def displacement_norm2(kind, dv: Vec, dp: int = 0) -> int:
    """Squared Euclidean length of a site displacement (dv, parity change dp)."""
    if kind == H2:
        da, db = dv
        return 3 * (da * da + da * db + db * db) + 3 * da * dp + dp * dp
    if dp != 0:
        raise InvalidSiteError(f"parity change on {kind}")
    return form(kind, dv)


def squared_distance(kind, s: Site, t: Site) -> int:
    """Exact squared Euclidean distance between two sites (unit edge length)."""
    s = check_site(kind, s)
    t = check_site(kind, t)
    return displacement_norm2(kind, (t[0] - s[0], t[1] - s[1]), t[2] - s[2])


def cartesian(kind, s: Site) -> tuple[float, float]:
    """Embedding used only for rendering; never for admissibility decisions."""
    a, b, p = s
    r3 = math.sqrt(3.0)
    if kind == A2:
        return (a + 0.5 * b, 0.5 * r3 * b)
    if kind == Z2:
        return (float(a), float(b))
    # H2: Bravais basis (3/2, sqrt3/2), (0, sqrt3); second basis site at (1, 0)
    return (1.5 * a + p, r3 * (0.5 * a + b))


def is_attainable(kind, d2: int) -> bool:
    return bool(diophantine_solutions(kind, d2))


def diophantine_solutions(kind, d2: int) -> list[Vec]:
    """All (a, b) with 0 <= a <= b representing d2 in the lattice form, sorted by a.

    A2/H2 use a^2 + a*b + b^2 (Loeschian numbers), Z2 uses a^2 + b^2.
    An empty list means d2 is not attainable on the lattice.
    """
    check_kind(kind)
    if d2 < 1:
        raise DomainError(f"d2 must be positive, got {d2}")
    out = []
    if kind == Z2:
        a = 0
        while 2 * a * a <= d2:
            b2 = d2 - a * a
            b = math.isqrt(b2)
            if b * b == b2 and b >= a:
                out.append((a, b))
            a += 1
    else:
        a = 0
        while 3 * a * a <= d2:
            # b^2 + a*b + (a^2 - d2) = 0
            disc = 4 * d2 - 3 * a * a
            r = math.isqrt(disc)
            if r * r == disc and (r - a) % 2 == 0:
                b = (r - a) // 2
                if b >= a:
                    out.append((a, b))
            a += 1
    return out


def doubled_area(p: Site, q: Site, r: Site) -> int:
    """Twice the triangle area in lattice-basis units (0 iff collinear)."""
    return abs(intlin.det2((q[0] - p[0], q[1] - p[1]), (r[0] - p[0], r[1] - p[1])))


def _close(mats):
    mats = set(mats)
    while True:
        new = set()
        for m in mats:
            for n in mats:
                prod = (
                    (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
                    (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
                )
                if prod not in mats:
                    new.add(prod)
        if not new:
            return sorted(mats)
        mats |= new


_ROT6 = ((0, -1), (1, 1))      # 60-degree rotation in triangular basis coords
_REF_A2 = ((1, 1), (0, -1))    # reflection fixing the first basis vector's axis
_ROT4 = ((0, -1), (1, 0))
_REF_Z2 = ((1, 0), (0, -1))

_POINT_GROUP = {
    A2: _close([_ROT6, _REF_A2]),
    H2: _close([_ROT6, _REF_A2]),
    Z2: _close([_ROT4, _REF_Z2]),
}
assert len(_POINT_GROUP[A2]) == 12 and len(_POINT_GROUP[Z2]) == 8


def point_group(kind):
    """The lattice point group as integer matrices acting on basis coordinates."""
    check_kind(kind)
    return _POINT_GROUP[kind]


def apply_mat(m, v: Vec) -> Vec:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def symmetry_images(kind, v: Vec) -> set[Vec]:
    """Orbit of a displacement vector under the lattice point group."""
    return {apply_mat(m, v) for m in point_group(kind)}


def exclusion_deltas(kind, d2):
    """All nonzero displacements of squared length < d2, keyed by parity pair.

    Returns {(p_from, p_to): [(da, db), ...]}.  For A2/Z2 only (0, 0) is keyed.
    """
    check_kind(kind)
    out = {}
    if kind == H2:
        bound = math.isqrt(d2) + 2
        for pf in (0, 1):
            for pt in (0, 1):
                dp = pt - pf
                deltas = []
                for da in range(-bound, bound + 1):
                    for db in range(-bound, bound + 1):
                        if da == 0 and db == 0 and dp == 0:
                            continue
                        if displacement_norm2(kind, (da, db), dp) < d2:
                            deltas.append((da, db))
                out[(pf, pt)] = deltas
    else:
        bound = math.isqrt(4 * d2) + 2
        deltas = []
        for da in range(-bound, bound + 1):
            for db in range(-bound, bound + 1):
                if (da, db) != (0, 0) and form(kind, (da, db)) < d2:
                    deltas.append((da, db))
        out[(0, 0)] = deltas
    return out


@dataclass(frozen=True)
class Torus:
    """Finite quotient of a lattice by two independent period vectors."""

    kind: str
    p1: Vec
    p2: Vec
    _hnf: tuple[Vec, Vec] = field(init=False, repr=False)
    _reduced: tuple[Vec, Vec] = field(init=False, repr=False)

    def __post_init__(self):
        check_kind(self.kind)
        if intlin.det2(self.p1, self.p2) == 0:
            raise DomainError(f"torus periods {self.p1}, {self.p2} are collinear")
        object.__setattr__(self, "_hnf", intlin.hnf(self.p1, self.p2))
        object.__setattr__(
            self, "_reduced", intlin.gauss_reduce(self.p1, self.p2, _GRAM[self.kind])
        )

    @property
    def det(self) -> int:
        return abs(intlin.det2(self.p1, self.p2))

    @property
    def site_count(self) -> int:
        return self.det * (2 if self.kind == H2 else 1)

    def sites(self) -> list[Site]:
        reps = intlin.coset_reps(self._hnf)
        if self.kind == H2:
            return [(a, b, p) for (a, b) in reps for p in (0, 1)]
        return [(a, b, 0) for (a, b) in reps]

    def canon(self, s: Site) -> Site:
        a, b = intlin.reduce_mod(self._hnf, (s[0], s[1]))
        return (a, b, s[2])

    def translate(self, s: Site, dv: Vec) -> Site:
        return self.canon((s[0] + dv[0], s[1] + dv[1], s[2]))

    def min_image_norm2(self, dv: Vec, dp: int = 0) -> int:
        """Shortest squared length of dv + torus lattice (with parity change dp)."""
        r1, r2 = self._reduced
        den = intlin.det2(r1, r2)
        x_num = intlin.det2(dv, r2)
        y_num = intlin.det2(r1, dv)
        k1 = round(x_num / den) if den else 0
        k2 = round(y_num / den) if den else 0
        best = None
        for i in (-2, -1, 0, 1, 2):
            for j in (-2, -1, 0, 1, 2):
                w = (
                    dv[0] - (k1 + i) * r1[0] - (k2 + j) * r2[0],
                    dv[1] - (k1 + i) * r1[1] - (k2 + j) * r2[1],
                )
                q = displacement_norm2(self.kind, w, dp)
                if best is None or q < best:
                    best = q
        return best

    def squared_distance(self, s: Site, t: Site) -> int:
        """Torus metric: minimum over period images."""
        return self.min_image_norm2((t[0] - s[0], t[1] - s[1]), t[2] - s[2])

    def conflict_map(self, d2):
        """site -> sorted tuple of sites at torus distance < D, for hard-core checks.

        Raises if a period image of a single site violates the exclusion,
        i.e. the torus is too small to carry any d2-admissible particle.
        """
        deltas = exclusion_deltas(self.kind, d2)
        sites = self.sites()
        site_set = set(sites)
        conflicts = {s: set() for s in sites}
        for s in sites:
            pf = s[2]
            for (pa, pt), dvs in deltas.items() if self.kind == H2 else [((0, 0), deltas[(0, 0)])]:
                if self.kind == H2 and pa != pf:
                    continue
                target_p = pt if self.kind == H2 else 0
                for dv in dvs:
                    t = self.canon((s[0] + dv[0], s[1] + dv[1], target_p))
                    if t == s:
                        raise CommensurabilityError(
                            f"torus {self.p1}x{self.p2} is shorter than the exclusion "
                            f"distance for d2={d2}"
                        )
                    if t in site_set:
                        conflicts[s].add(t)
        return {s: tuple(sorted(c)) for s, c in conflicts.items()}

    def is_admissible(self, config, d2) -> bool:
        conflicts = self.conflict_map(d2)
        occ = set(config)
        return all(not (set(conflicts[s]) & occ) for s in occ)


def torus_from_cells(kind, template_vec: int, n1: int, n2: int) -> Torus:
    """Axis-aligned torus of n1 x n2 template cells with cell edge template_vec."""
    return Torus(kind, (template_vec * n1, 0), (0, template_vec * n2))
