"""Exact brute-force maximal packings on finite tori.

Branch and bound over the exclusion graph with a greedy clique-cover bound;
cliques approximate exclusion cells, so the bound is near-tight for these
instances.  Branching picks one member of the first active clique (or skips
it), which keeps the search deterministic and lets us enumerate every
optimizer exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import classify, intlin, lattice, mtriangles, pgs
from .errors import BudgetExceededError

Site = lattice.Site


@dataclass(frozen=True)
class PackingResult:
    kind: str
    d2: int
    torus: lattice.Torus
    max_count: int
    nodes: int
    optimizer_count: int | None = None
    optimizers: tuple = ()


def clique_partition(masks):
    """Greedy partition of vertices into mutually-conflicting groups."""
    n = len(masks)
    assigned = 0
    cliques = []
    for i in range(n):
        if assigned >> i & 1:
            continue
        cm = 1 << i
        cand = masks[i] & ~assigned
        while cand:
            low = cand & -cand
            j = low.bit_length() - 1
            if masks[j] & cm == cm:
                cm |= low
            cand ^= low
        assigned |= cm
        cliques.append(cm)
    return cliques


class MisSolver:
    """Deterministic max-independent-set search on bitmask adjacency.

    Prunes with a static greedy clique cover and, when provided, an extra
    bound callback (see BandBound) that exploits lattice row structure.
    """

    def __init__(self, masks, extra_bound=None):
        self.masks = masks
        self.cliques = clique_partition(masks)
        self.extra_bound = extra_bound
        self.nodes = 0

    def _bound(self, allowed, chosen, slack):
        """Upper bound on what can still be added to chosen inside allowed."""
        bound = sum(1 for cm in self.cliques if cm & allowed)
        if self.extra_bound is not None and bound >= slack:
            bound = min(bound, self.extra_bound(allowed, chosen))
        return bound

    def greedy_count(self) -> int:
        """First-fit independent set size; a quick incumbent for the search."""
        allowed = (1 << len(self.masks)) - 1
        count = 0
        while allowed:
            low = allowed & -allowed
            m = low.bit_length() - 1
            allowed &= ~self.masks[m] & ~low
            count += 1
        return count

    def _first_clique(self, allowed):
        for cm in self.cliques:
            members = cm & allowed
            if members:
                return members
        return 0

    def max_count(self, incumbent=0) -> int:
        best = max(self.greedy_count(), incumbent)
        masks = self.masks

        def rec(allowed, chosen, count):
            nonlocal best
            self.nodes += 1
            if allowed == 0:
                if count > best:
                    best = count
                return
            if count + self._bound(allowed, chosen, best + 1 - count) <= best:
                return
            members = self._first_clique(allowed)
            rest = allowed & ~members
            while members:
                low = members & -members
                members ^= low
                m = low.bit_length() - 1
                rec(rest & ~masks[m], chosen | low, count + 1)
            rec(rest, chosen, count)

        rec((1 << len(masks)) - 1, 0, 0)
        return best

    def enumerate_optima(self, target, cap=None, stop_after=None):
        """All independent sets of size target, as bitmasks (count, list).

        The list is truncated at cap entries; the count is exact unless
        stop_after is given, in which case the search stops early once that
        many optima are found.
        """
        masks = self.masks
        found = []
        count = 0

        def rec(allowed, chosen, size):
            nonlocal count
            self.nodes += 1
            if allowed == 0:
                if size == target:
                    count += 1
                    if cap is None or len(found) < cap:
                        found.append(chosen)
                return
            if stop_after is not None and count >= stop_after:
                return
            if size + self._bound(allowed, chosen, target - size) < target:
                return
            members = self._first_clique(allowed)
            rest = allowed & ~members
            while members:
                low = members & -members
                members ^= low
                m = low.bit_length() - 1
                rec(rest & ~masks[m], chosen | low, size + 1)
            rec(rest, chosen, size)

        rec((1 << len(masks)) - 1, 0, 0)
        return count, found


def _band_gap(kind, d2, h, col_axis):
    """Largest g: any two band sites with column distance <= g must conflict.

    A band is h consecutive rows; col_axis 0 means columns run along the
    first lattice coordinate.  Returns -1 when even same-column sites can be
    non-conflicting (band height too large for d2).
    """
    parities = ((0, 0), (0, 1), (1, 0), (1, 1)) if kind == lattice.H2 else ((0, 0),)
    t = 0
    while True:
        for dc in {t, -t}:
            for dr in range(-(h - 1), h):
                dv = (dc, dr) if col_axis == 0 else (dr, dc)
                for pf, pt in parities:
                    dp = pt - pf
                    if dv == (0, 0) and dp == 0:
                        continue
                    if lattice.displacement_norm2(kind, dv, dp) >= d2:
                        return t - 1
        t += 1


class BandBound:
    """Row-band upper bound for diagonal tori and plane windows.

    Within a band of h rows, sites whose columns are at most g apart always
    conflict, so a band holds at most the largest set of active columns with
    pairwise spacing > g (cyclic spacing on a torus).  That spacing maximum
    is computed exactly per active-column bitset and memoized.
    """

    def __init__(self, kind, d2, sites, n_cols, n_rows, cyclic=True, col_offset=0,
                 row_offset=0):
        best = None
        for col_axis in (0, 1):
            ncol, nrow = (n_cols, n_rows) if col_axis == 0 else (n_rows, n_cols)
            for h in range(1, min(nrow, 8) + 1):
                g = _band_gap(kind, d2, h, col_axis)
                if g < 0:
                    break
                bands = -(-nrow // h)
                cap = ncol // (g + 1) if cyclic else -(-ncol // (g + 1))
                if cap == 0:
                    continue
                score = bands * cap
                if best is None or score < best[0]:
                    best = (score, col_axis, h, g, cap)
        if best is None:
            self.usable = False
            return
        self.usable = True
        self.root_bound, col_axis, h, g, cap = best
        self.n_cols = n_cols if col_axis == 0 else n_rows
        self.gap = g + 1
        self.cyclic = cyclic
        self._memo = {}
        groups = {}
        for i, s in enumerate(sites):
            col, row = (s[0], s[1]) if col_axis == 0 else (s[1], s[0])
            col -= col_offset if col_axis == 0 else row_offset
            row -= row_offset if col_axis == 0 else col_offset
            key = (row // h, col)
            groups[key] = groups.get(key, 0) | (1 << i)
        bands = {}
        for (band, col), mask in groups.items():
            bands.setdefault(band, {})[col] = mask
        self.bands = []
        for _, colmap in sorted(bands.items()):
            bandmask = 0
            for m in colmap.values():
                bandmask |= m
            self.bands.append((sorted(colmap.items()), cap, bandmask))

    def _spacing_max(self, colbits):
        """Exact maximum number of set columns with pairwise spacing >= gap."""
        cached = self._memo.get(colbits)
        if cached is not None:
            return cached
        cols = []
        bits = colbits
        while bits:
            low = bits & -bits
            cols.append(low.bit_length() - 1)
            bits ^= low
        gap = self.gap
        if not self.cyclic:
            # greedy sweep is exact for linear spacing
            count = 0
            last = None
            for c in cols:
                if last is None or c - last >= gap:
                    count += 1
                    last = c
        else:
            count = 0
            n = self.n_cols
            for anchor_i, anchor in enumerate(cols):
                got = 1
                last = anchor
                for c in cols[anchor_i + 1:]:
                    if c - last >= gap and c - anchor <= n - gap:
                        got += 1
                        last = c
                if got > count:
                    count = got
        self._memo[colbits] = count
        return count

    def __call__(self, allowed, chosen):
        total = 0
        for colitems, cap, bandmask in self.bands:
            rem = cap - (chosen & bandmask).bit_count()
            if rem <= 0:
                continue
            colbits = 0
            for col, m in colitems:
                if m & allowed:
                    colbits |= 1 << col
            total += min(rem, self._spacing_max(colbits))
        return total


def exclusion_instance(kind, d2, torus):
    """(sites, adjacency bitmasks) of the hard-core exclusion graph on a torus."""
    conflicts = torus.conflict_map(d2)
    sites = sorted(conflicts)
    index = {s: i for i, s in enumerate(sites)}
    masks = []
    for s in sites:
        m = 0
        for t in conflicts[s]:
            m |= 1 << index[t]
        masks.append(m)
    return sites, masks


def max_packing_torus(kind, d2, torus, enumerate_all=False, budget=600, cap=512,
                      seed=None):
    """Certified maximum packing on a torus; optionally all optimizers.

    seed is an optional admissible configuration used as the starting
    incumbent; it is re-verified here and only speeds up the search, the
    refutation of anything larger stays exhaustive.
    """
    if torus.site_count > budget:
        raise BudgetExceededError(
            f"torus has {torus.site_count} sites, budget is {budget}",
            limit=budget, requested=torus.site_count)
    sites, masks = exclusion_instance(kind, d2, torus)
    extra = None
    hb = torus._hnf
    if hb[1][0] == 0:  # diagonal torus: rows and columns wrap independently
        band = BandBound(kind, d2, sites, hb[0][0], hb[1][1])
        if band.usable:
            extra = band
    incumbent = 0
    if seed is not None:
        index = {s: i for i, s in enumerate(sites)}
        for s in seed:
            for t in seed:
                assert s == t or not masks[index[s]] >> index[t] & 1, \
                    f"seed configuration violates the exclusion at {s}, {t}"
        incumbent = len(seed)
    solver = MisSolver(masks, extra_bound=extra)
    best = solver.max_count(incumbent)
    opt_count = None
    optimizers = ()
    if enumerate_all:
        n, found = solver.enumerate_optima(best, cap=cap)
        opt_count = n
        optimizers = tuple(
            frozenset(sites[i] for i in range(len(sites)) if mask >> i & 1)
            for mask in found
        )
    else:
        _, found = solver.enumerate_optima(best, cap=1, stop_after=1)
        optimizers = tuple(
            frozenset(sites[i] for i in range(len(sites)) if mask >> i & 1)
            for mask in found
        )
    return PackingResult(kind=kind, d2=d2, torus=torus, max_count=best,
                         nodes=solver.nodes, optimizer_count=opt_count,
                         optimizers=optimizers)


def reference_lattices(kind, d2):
    """Maximal-density sublattice bases, bypassing the sliding/exceptional guard.

    For sliding values these are still maximally dense periodic packings, just
    not the complete story; the witness machinery uses them as references.
    """
    if kind == lattice.Z2:
        report = mtriangles.solve_problem5(d2) if d2 > 1 else None
        if report is None:
            return [((1, 0), (0, 1))]
        out = []
        for cls in report.classes:
            out.extend(mtriangles.lattice_orbit(cls.rep))
        return sorted(set(out))
    work = d2
    if kind == lattice.H2:
        if d2 % 3 != 0:
            return []  # no honeycomb-inscribed sublattice at this distance
        work = d2 // 3
    sols = lattice.diophantine_solutions(kind, work)
    out = set()
    for sol in sols:
        for m in lattice.point_group(kind):
            v1 = lattice.apply_mat(m, sol)
            out.add(intlin.hnf(v1, (-v1[1], v1[0] + v1[1])))
    return sorted(out)


def _axis_torus(kind, d2, basis, min_side, budget):
    """Smallest axis-aligned torus commensurate with basis, side >= min_side."""
    k1, k2 = intlin.min_axis_periods(basis)
    step = intlin.lcm(k1, k2)
    side = step * max(1, -(-min_side // step))
    torus = lattice.Torus(kind, (side, 0), (0, side))
    if torus.site_count > budget:
        raise BudgetExceededError(
            f"axis torus for {kind} d2={d2} needs {torus.site_count} sites",
            limit=budget, requested=torus.site_count)
    return torus


def verify_density_formula(kind, d2, budget=600):
    """Check max density = 1/sigma on two commensurate tori of different sizes."""
    catalog = pgs.pgs_catalog(kind, d2)
    basis = catalog.classes[0].lattices[0]
    checks = []
    k = 2
    while len(checks) < 2:
        p1 = intlin.scale(basis[0], k)
        p2 = intlin.scale(basis[1], k)
        torus = lattice.Torus(kind, p1, p2)
        if torus.site_count > budget:
            if k == 2:
                raise BudgetExceededError(
                    f"no commensurate torus for {kind} d2={d2} fits in {budget} sites",
                    limit=budget, requested=torus.site_count)
            break
        result = max_packing_torus(kind, d2, torus, budget=budget)
        checks.append({
            "torus": (torus.p1, torus.p2),
            "site_count": torus.site_count,
            "max_count": result.max_count,
            "matches": result.max_count * catalog.sigma == torus.site_count,
            "nodes": result.nodes,
        })
        k += 1
    ok = len(checks) >= 2 and all(c["matches"] for c in checks)
    return {"kind": kind, "d2": d2, "sigma": catalog.sigma, "ok": ok, "checks": checks}


_BAND_DIRECTIONS = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)]


def _primitive(v):
    g = math.gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g)


def _band_shift_scan(kind, d2, torus, config, conflicts):
    """Try shifting one translation-band of config along a lattice direction.

    Returns (direction, shift, new_config) for the first density-preserving
    shift that yields a different admissible configuration, else None.
    """
    dirs = list(_BAND_DIRECTIONS)
    for basis in reference_lattices(kind, d2):
        for v in basis:
            dirs.append(_primitive(v))
    seen = set()
    for d in dirs:
        if d in seen or (-d[0], -d[1]) in seen:
            continue
        seen.add(d)
        # the transverse coordinate is invariant modulo its values on the periods
        mod = math.gcd(abs(intlin.det2(d, torus.p1)), abs(intlin.det2(d, torus.p2)))
        if mod == 0:
            continue
        bands = {}
        for s in config:
            bands.setdefault(intlin.det2(d, (s[0], s[1])) % mod, []).append(s)
        if len(bands) < 2:
            continue
        for key in sorted(bands):
            band = bands[key]
            rest = [s for s in config if s not in band]
            # orbit length of the band under +d on the torus
            t = 1
            probe = torus.translate(band[0], d)
            while probe != band[0]:
                probe = torus.translate(probe, d)
                t += 1
            for shift in range(1, t):
                dv = (d[0] * shift, d[1] * shift)
                moved = [torus.translate(s, dv) for s in band]
                new = frozenset(rest) | frozenset(moved)
                if len(new) != len(config) or new == config:
                    continue
                if all(not (set(conflicts[s]) & new) for s in new):
                    return {"direction": d, "shift": shift, "band": tuple(sorted(band)),
                            "shifted_config": new}
    return None


def sliding_witness(kind, d2, strip_length=None, budget=600):
    """Search for two maximal packings differing by one shifted band.

    Witness-based: a hit proves sliding at this size, absence at the tested
    size is only evidence.  Returns a witness dict or None.
    """
    if not lattice.is_attainable(kind, d2):
        return None
    min_side = strip_length or (2 * (math.isqrt(d2) + 1))
    references = []
    if kind == lattice.H2 and (d2 % 3 != 0 or d2 in classify.H2_EXCEPTIONAL):
        side = min_side + (min_side % 2)
        torus = lattice.Torus(kind, (side, 0), (0, side))
        if torus.site_count > budget:
            raise BudgetExceededError(
                f"witness torus for {kind} d2={d2} needs {torus.site_count} sites",
                limit=budget, requested=torus.site_count)
        result = max_packing_torus(kind, d2, torus, budget=budget)
        references.append((torus, result.optimizers[0], result.max_count))
    else:
        bases = reference_lattices(kind, d2)
        if not bases:
            return None
        torus = _axis_torus(kind, d2, bases[0], min_side, budget)
        for basis in bases:
            if not (intlin.contains(basis, torus.p1) and intlin.contains(basis, torus.p2)):
                continue
            sites = torus.sites()
            parities = (0, 1) if kind == lattice.H2 else (0,)
            for p in parities:
                member = pgs.pgs_predicate(basis, (0, 0, p))
                references.append(
                    (torus, frozenset(s for s in sites if member(s)), None))
            break
    for torus, config, max_count in references:
        conflicts = torus.conflict_map(d2)
        assert all(not (set(conflicts[s]) & config) for s in config)
        hit = _band_shift_scan(kind, d2, torus, config, conflicts)
        if hit is not None:
            hit.update({
                "kind": kind, "d2": d2, "torus": (torus.p1, torus.p2),
                "reference_config": config, "count": len(config),
                "max_count": max_count if max_count is not None else len(config),
            })
            return hit
    return None
