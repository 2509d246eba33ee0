"""Maximally-dense sublattices, ground-state catalogs, densities and templates.

The catalog for (lattice, d2) holds the equivalence classes of maximally-dense
admissible sublattices, the per-parallelogram site count sigma, the total
ground-state count sigma * sum(m_k), the exact packing density, and the common
template lattice used by the contour machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import classify, intlin, lattice, mtriangles
from .errors import (
    BudgetExceededError,
    CommensurabilityError,
    NotAttainableError,
    UnsupportedCaseError,
)

Vec = tuple[int, int]
Basis = tuple[Vec, Vec]


@dataclass(frozen=True)
class PgsClass:
    """One equivalence class of ground states."""

    label: str                 # orientation tag: horizontal / vertical / axis / ...
    solution: tuple            # defining form solution (A2/H2) or triangle vertices (Z2)
    lattices: tuple[Basis, ...]
    m: int

    @property
    def count_factor(self) -> int:
        return self.m


@dataclass(frozen=True)
class DensityValue:
    """Exact packing density coeff * pi / sqrt(radical), radical in {1, 3}."""

    num: int
    den: int
    radical: int
    note: str = ""

    @property
    def coeff(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def value(self) -> float:
        return float(self.coeff) * math.pi / math.sqrt(self.radical)


@dataclass(frozen=True)
class Template:
    """Axis-aligned common-period lattice of all maximally-dense sublattices."""

    kind: str
    d2: int
    step: int  # basis is ((step, 0), (0, step)) in lattice coordinates

    @property
    def basis(self) -> Basis:
        return ((self.step, 0), (0, self.step))


@dataclass(frozen=True)
class PgsCatalog:
    kind: str
    d2: int
    case: classify.CaseLabel
    sigma: int
    classes: tuple[PgsClass, ...]
    pgs_count: int
    density: DensityValue
    dstar2: int | None = None
    s: int | None = None  # doubled minimal triangle area on Z2

    @property
    def k(self) -> int:
        return len(self.classes)


def _rot60(v: Vec) -> Vec:
    return (-v[1], v[0] + v[1])


def _orientation_label(kind, vectors) -> str:
    if kind == lattice.Z2:
        if any(v[1] == 0 or v[0] == 0 for v in vectors):
            return "axis"
        if any(abs(v[0]) == abs(v[1]) for v in vectors):
            return "diagonal"
        return "inclined"
    if kind == lattice.A2:
        horiz = any(v[1] == 0 for v in vectors)
        vert = any(2 * v[0] + v[1] == 0 for v in vectors)
    else:  # H2: Bravais embedding (3a/2, sqrt3*(a/2 + b))
        horiz = any(v[0] + 2 * v[1] == 0 for v in vectors)
        vert = any(v[0] == 0 for v in vectors)
    if horiz:
        return "horizontal"
    if vert:
        return "vertical"
    return "inclined"


def _triangular_class(kind, sol: Vec) -> PgsClass:
    """Class of the sublattice spanned by a form solution and its 60-degree mate."""
    v1 = sol
    v2 = _rot60(v1)
    orbit_vectors = lattice.symmetry_images(kind, v1)
    bases = set()
    for m in lattice.point_group(kind):
        bases.add(intlin.hnf(lattice.apply_mat(m, v1), lattice.apply_mat(m, v2)))
    return PgsClass(
        label=_orientation_label(kind, orbit_vectors),
        solution=sol,
        lattices=tuple(sorted(bases)),
        m=len(bases),
    )


def _check_supported(kind, d2):
    case = classify.classify(kind, d2)
    if case.tag == "NotAttainable":
        raise NotAttainableError(kind, d2)
    if case.tag == "HExceptional":
        raise UnsupportedCaseError(
            kind, d2, "HExceptional",
            f"H2 d2={d2}: densest packings are not all sublattices; "
            "only detection is supported",
        )
    if classify.sliding_status(kind, d2).sliding:
        raise UnsupportedCaseError(
            kind, d2, "sliding",
            f"{kind} d2={d2} slides: infinitely many maximal packings, "
            "no finite ground-state catalog",
        )
    return case


def mda_sublattices(kind, d2: int) -> list[PgsClass]:
    """Equivalence classes of maximally-dense admissible sublattices."""
    case = _check_supported(kind, d2)
    if kind == lattice.A2:
        sols = lattice.diophantine_solutions(kind, d2)
        return [_triangular_class(kind, s) for s in sols]
    if kind == lattice.H2:
        work = d2 if d2 % 3 == 0 else case.dstar2
        sols = lattice.diophantine_solutions(kind, work // 3)
        return [_triangular_class(kind, s) for s in sols]
    report = mtriangles.solve_problem5(d2)
    out = []
    for cls in report.classes:
        t = cls.rep
        p, q, r = t.vertices
        out.append(PgsClass(
            label=_orientation_label(kind, [(q[0] - p[0], q[1] - p[1]),
                                            (r[0] - p[0], r[1] - p[1])]),
            solution=t.vertices,
            lattices=tuple(mtriangles.lattice_orbit(t)),
            m=cls.m,
        ))
    return out


def packing_density(kind, d2: int, torus_budget: int = 600) -> DensityValue:
    """Exact maximal packing density; finite-torus estimate for sliding H2 values."""
    if not lattice.is_attainable(kind, d2):
        raise NotAttainableError(kind, d2)
    if kind == lattice.A2:
        return DensityValue(1, 2, 3)
    if kind == lattice.Z2:
        s = mtriangles.solve_problem5(d2).s if d2 > 1 else 1
        g = math.gcd(d2, 4 * s)
        return DensityValue(d2 // g, 4 * s // g, 1)
    # H2
    if d2 % 3 == 0 and d2 not in classify.H2_EXCEPTIONAL:
        return DensityValue(1, 2, 3)
    if d2 in classify.H2_EXCEPTIONAL:
        raise UnsupportedCaseError(kind, d2, "HExceptional",
                                   f"H2 d2={d2}: no closed-form density here")
    if d2 in classify.H2_SLIDING:
        from . import oracle  # local import to avoid a cycle

        side = 2 * (math.isqrt(d2) + 1) + 2
        torus = lattice.Torus(lattice.H2, (side, 0), (0, side))
        if torus.site_count > torus_budget:
            raise BudgetExceededError(
                f"H2 d2={d2} sliding density needs a {torus.site_count}-site torus",
                limit=torus_budget, requested=torus.site_count)
        result = oracle.max_packing_torus(kind, d2, torus, budget=torus_budget)
        # per-site fraction f: delta = pi*d2*f / (4 * site area), site area 3*sqrt3/4
        num = d2 * result.max_count
        den = 3 * torus.site_count
        g = math.gcd(num, den)
        return DensityValue(num // g, den // g, 3,
                            note=f"finite-torus estimate ({side}x{side} periods)")
    dst = classify.dstar(d2)
    g = math.gcd(d2, 2 * dst)
    return DensityValue(d2 // g, 2 * dst // g, 3)


def pgs_catalog(kind, d2: int) -> PgsCatalog:
    """Full ground-state catalog for a supported (lattice, d2) pair."""
    case = _check_supported(kind, d2)
    classes = mda_sublattices(kind, d2)
    dstar2 = case.dstar2
    s = None
    if kind == lattice.A2:
        sigma = d2
    elif kind == lattice.H2:
        work = d2 if d2 % 3 == 0 else dstar2
        sigma = 2 * work // 3
    else:
        s = mtriangles.solve_problem5(d2).s if d2 > 1 else 1
        sigma = s
    min_d2 = d2 if not dstar2 else dstar2
    for cls in classes:
        for basis in cls.lattices:
            r1, _ = intlin.gauss_reduce(*basis, lattice._GRAM[kind])
            q = lattice.form(kind, r1)
            assert q >= d2, (kind, d2, basis, q)
            assert q == min_d2 or kind == lattice.Z2, (kind, d2, basis, q)
            per_cell = len(intlin.coset_reps(basis)) * (2 if kind == lattice.H2 else 1)
            assert per_cell == sigma
    return PgsCatalog(
        kind=kind,
        d2=d2,
        case=case,
        sigma=sigma,
        classes=tuple(classes),
        pgs_count=sigma * sum(c.m for c in classes),
        density=packing_density(kind, d2),
        dstar2=dstar2,
        s=s,
    )


def template_lattice(kind, d2: int) -> Template:
    """Smallest axis-aligned common period of all maximally-dense sublattices."""
    classes = mda_sublattices(kind, d2)
    step = 1
    for cls in classes:
        for basis in cls.lattices:
            k1, k2 = intlin.min_axis_periods(basis)
            step = intlin.lcm(step, intlin.lcm(k1, k2))
    for cls in classes:
        for basis in cls.lattices:
            assert intlin.contains(basis, (step, 0)) and intlin.contains(basis, (0, step))
    return Template(kind=kind, d2=d2, step=step)


def particles_per_cell(catalog: PgsCatalog, template: Template) -> int:
    """Every ground state puts the same number of particles in each template cell."""
    sites = template.step ** 2 * (2 if catalog.kind == lattice.H2 else 1)
    q, r = divmod(sites, catalog.sigma)
    assert r == 0, (catalog.kind, catalog.d2, template.step, catalog.sigma)
    return q


def pgs_predicate(basis: Basis, anchor):
    """Membership test for the infinite ground state basis + anchor."""
    aa, ab, ap = anchor

    def member(site) -> bool:
        return site[2] == ap and intlin.contains(basis, (site[0] - aa, site[1] - ab))

    return member


def realize_pgs_on_torus(catalog: PgsCatalog, torus: lattice.Torus):
    """All distinct ground-state configurations on a commensurate torus."""
    if torus.kind != catalog.kind:
        raise CommensurabilityError("torus and catalog lattices differ")
    for cls in catalog.classes:
        for basis in cls.lattices:
            if not (intlin.contains(basis, torus.p1) and intlin.contains(basis, torus.p2)):
                raise CommensurabilityError(
                    f"torus periods {torus.p1}, {torus.p2} do not lie in the "
                    f"sublattice {basis}")
    sites = torus.sites()
    configs = []
    for cls in catalog.classes:
        for basis in cls.lattices:
            parities = (0, 1) if catalog.kind == lattice.H2 else (0,)
            for rep in intlin.coset_reps(basis):
                for p in parities:
                    member = pgs_predicate(basis, (rep[0], rep[1], p))
                    configs.append(frozenset(s for s in sites if member(s)))
    distinct = sorted({c for c in configs}, key=lambda c: sorted(c))
    assert len(distinct) == len(configs) == catalog.pgs_count, (
        len(distinct), len(configs), catalog.pgs_count)
    expected = torus.site_count // catalog.sigma
    assert all(len(c) == expected for c in distinct)
    return distinct
