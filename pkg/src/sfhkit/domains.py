"""Domains: connecting classes, periodic lattices, Maslov index, admissibility.

Boundary conventions (fixed by the one-handle bigon calibration)
------------------------------------------------------------------
For a segment s let m(s) = n_left(s) - n_right(s), with regions touching
the suture counted as 0.  Along a curve C passing s_prev -> c -> s_next
the domain equation reads

    m(s_prev) - m(s_next) = coefficient of c in  d(d_C D).

A bigon class from x to y has d(d_alpha D) = y - x and d(d_beta D) = x - y.
A triangle class with corners x (alpha-beta), theta (beta-delta) and
y (alpha-delta) has d(d_alpha D) = y - x, d(d_beta D) = x - theta and
d(d_delta D) = theta - y.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import floor, ceil
from typing import Mapping, Sequence

from .diagram import CellDiagram, Generator, enumerate_generators
from .diagram.cells import seg_name
from .errors import MalformedDomain
from .linalg import (hnf_rows, integer_kernel, integer_solve, lattice_residue, lcm_of_denominators,
                     lp_maximize)

TRIANGLE_CONSTANT = 1  # mu_3 = e + n_x + n_theta + n_y - TRIANGLE_CONSTANT * d


# ---------------------------------------------------------------------------
# the linear system
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundarySystem:
    rows: tuple[tuple[str, int, str], ...]     # (family, circle, crossing)
    matrix: tuple[tuple[int, ...], ...]
    columns: tuple[str, ...]                   # interior region ids

    def rhs(self, coeffs: Mapping[str, Mapping[str, int]]) -> list[int]:
        return [coeffs.get(f, {}).get(c, 0) for f, _, c in self.rows]

    def boundary_of(self, n: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, n)) for row in self.matrix]


def _system(diag: CellDiagram) -> BoundarySystem:
    cache = diag.__dict__.setdefault("_sfh_cache", {})
    if "system" in cache:
        return cache["system"]
    cols = diag.interior_regions
    idx = diag.interior_index
    sides = diag.segment_sides
    rows, mat = [], []
    ncol = len(cols)

    def m_vec(seg):
        v = [0] * ncol
        l, r = sides[seg]
        if l in idx:
            v[idx[l]] += 1
        if r in idx:
            v[idx[r]] -= 1
        return v

    for fam, circs in zip(diag.families, diag.curves):
        for ci, circ in enumerate(circs):
            n = len(circ)
            for k, c in enumerate(circ):
                prev = m_vec(seg_name(fam, ci, (k - 1) % n))
                nxt = m_vec(seg_name(fam, ci, k))
                rows.append((fam, ci, c))
                mat.append(tuple(a - b for a, b in zip(prev, nxt)))
    out = BoundarySystem(tuple(rows), tuple(mat), tuple(cols))
    cache["system"] = out
    return out


def boundary_system(diag: CellDiagram) -> BoundarySystem:
    return _system(diag)


def _pair_rhs(diag: CellDiagram, x: Generator, y: Generator, families=None) -> dict:
    f, g = families or diag.families[:2]
    px, py = set(x.points), set(y.points)
    cf, cg = {}, {}
    for c in px | py:
        v = (c in py) - (c in px)
        if v:
            cf[c] = v
            cg[c] = -v
    return {f: cf, g: cg}


def _triangle_rhs(x: Generator, theta: Generator, y: Generator) -> dict:
    out = {"alpha": {}, "beta": {}, "delta": {}}

    def add(fam, pts, s):
        for c in pts:
            out[fam][c] = out[fam].get(c, 0) + s
    add("alpha", y.points, 1)
    add("alpha", x.points, -1)
    add("beta", x.points, 1)
    add("beta", theta.points, -1)
    add("delta", theta.points, 1)
    add("delta", y.points, -1)
    return out


# ---------------------------------------------------------------------------
# Domain objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    coefficients: tuple[int, ...]
    endpoints: tuple[Generator, ...]
    diagram: CellDiagram = field(compare=False, repr=False, hash=False)

    def __add__(self, other: "Domain") -> "Domain":
        """Juxtaposition x->y plus y->z (bigon classes)."""
        if len(self.endpoints) == 2 and len(other.endpoints) == 2:
            if self.endpoints[1] != other.endpoints[0]:
                raise MalformedDomain("endpoints do not concatenate")
            ends = (self.endpoints[0], other.endpoints[1])
        else:
            ends = _juxtapose_ends(self.endpoints, other.endpoints)
        return Domain(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
                      ends, self.diagram)

    def __neg__(self) -> "Domain":
        if len(self.endpoints) != 2:
            raise MalformedDomain("only bigon classes can be reversed")
        return Domain(tuple(-a for a in self.coefficients), self.endpoints[::-1], self.diagram)

    def by_region(self) -> dict[str, int]:
        return {r: a for r, a in zip(self.diagram.interior_regions, self.coefficients) if a}

    @property
    def is_positive(self) -> bool:
        return all(a >= 0 for a in self.coefficients)

    @property
    def total(self) -> int:
        return sum(self.coefficients)


def _juxtapose_ends(a, b):
    # periodic summand (x, x) added to anything keeps its endpoints
    if len(b) == 2 and b[0] == b[1]:
        return a
    if len(a) == 2 and a[0] == a[1]:
        return b
    raise MalformedDomain("cannot juxtapose these classes")


@dataclass(frozen=True)
class PeriodicDomainLattice:
    basis: tuple[tuple[int, ...], ...]
    arity: int
    columns: tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(lattice_residue(vec, hnf_rows(self.basis, len(self.columns))))


@dataclass(frozen=True)
class ConnectingResult:
    domain: Domain | None
    kernel: PeriodicDomainLattice
    status: str

    @property
    def solvable(self) -> bool:
        return self.domain is not None


def check_generator(diag: CellDiagram, g: Generator, families) -> None:
    f, h = families
    if len(g.points) != diag.d or len(set(g.points)) != diag.d:
        raise MalformedDomain(f"{g} is not a generator")
    seen_f, seen_h = set(), set()
    for p in g.points:
        c = diag.crossing_map.get(p)
        if c is None or set(c.families) != {f, h}:
            raise MalformedDomain(f"{p} is not a {f}-{h} crossing")
        cf = c.circles[c.families.index(f)]
        ch = c.circles[c.families.index(h)]
        seen_f.add(cf)
        seen_h.add(ch)
    if len(seen_f) != diag.d or len(seen_h) != diag.d:
        raise MalformedDomain(f"{g} does not use every circle once")


def connecting_domain(diag: CellDiagram, x: Generator, y: Generator) -> ConnectingResult:
    """Some domain in pi_2(x, y), or None if x and y lie in different classes."""
    fams = diag.families[:2]
    check_generator(diag, x, fams)
    check_generator(diag, y, fams)
    sysm = _system(diag)
    res = integer_solve(sysm.matrix, sysm.rhs(_pair_rhs(diag, x, y)), len(sysm.columns))
    lat = PeriodicDomainLattice(res.kernel, 2, sysm.columns)
    if not res.solvable:
        return ConnectingResult(None, lat, res.status)
    return ConnectingResult(Domain(res.solution, (x, y), diag), lat, "solvable")


def triangle_domain(triple: CellDiagram, x: Generator, theta: Generator, y: Generator) -> ConnectingResult:
    sysm = _system(triple)
    res = integer_solve(sysm.matrix, sysm.rhs(_triangle_rhs(x, theta, y)), len(sysm.columns))
    lat = PeriodicDomainLattice(res.kernel, 3, sysm.columns)
    if not res.solvable:
        return ConnectingResult(None, lat, res.status)
    return ConnectingResult(Domain(res.solution, (x, theta, y), triple), lat, "solvable")


def satisfies_boundary(dom: Domain) -> bool:
    diag = dom.diagram
    sysm = _system(diag)
    if len(dom.endpoints) == 2:
        rhs = sysm.rhs(_pair_rhs(diag, *dom.endpoints))
    else:
        rhs = sysm.rhs(_triangle_rhs(*dom.endpoints))
    return sysm.boundary_of(dom.coefficients) == rhs


def periodic_domain_basis(diag: CellDiagram) -> PeriodicDomainLattice:
    sysm = _system(diag)
    cache = diag.__dict__.setdefault("_sfh_cache", {})
    if "periodic" not in cache:
        ker = integer_kernel(sysm.matrix, len(sysm.columns))
        cache["periodic"] = PeriodicDomainLattice(tuple(map(tuple, ker)),
                                                  3 if diag.is_triple else 2, sysm.columns)
    return cache["periodic"]


def doubly_periodic_basis(triple: CellDiagram) -> PeriodicDomainLattice:
    """Lattice spanned by periodic domains whose boundary avoids one family."""
    sysm = _system(triple)
    seg_side = triple.segment_sides
    idx = triple.interior_index
    ncol = len(sysm.columns)
    gens = []
    for fam in triple.families:
        extra = []
        for s, (f, ci, k, a, b) in triple.segments.items():
            if f != fam:
                continue
            v = [0] * ncol
            l, r = seg_side[s]
            if l in idx:
                v[idx[l]] += 1
            if r in idx:
                v[idx[r]] -= 1
            extra.append(v)
        ker = integer_kernel(list(sysm.matrix) + extra, ncol)
        gens.extend(ker)
    return PeriodicDomainLattice(tuple(map(tuple, hnf_rows(gens, ncol))), 3, sysm.columns)


# ---------------------------------------------------------------------------
# Spin^c partition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpincPartition:
    generators: tuple[Generator, ...]
    class_of: tuple[int, ...]
    diagram: CellDiagram = field(compare=False, repr=False)

    @property
    def count(self) -> int:
        return len(set(self.class_of))

    def classes(self) -> list[list[Generator]]:
        out: list[list[Generator]] = [[] for _ in range(self.count)]
        for g, k in zip(self.generators, self.class_of):
            out[k].append(g)
        return out

    def class_id(self, g: Generator) -> int:
        return self.class_of[self.generators.index(g)]

    def witness(self, x: Generator, y: Generator) -> Domain | None:
        return connecting_domain(self.diagram, x, y).domain


def _point_vector(sysm: BoundarySystem, g: Generator, families) -> tuple[int, ...]:
    f, h = families
    pts = set(g.points)
    return tuple((1 if fam == f else -1 if fam == h else 0) * (c in pts) for fam, _, c in sysm.rows)


def image_lattice(diag: CellDiagram) -> list[list[int]]:
    cache = diag.__dict__.setdefault("_sfh_cache", {})
    if "image" not in cache:
        sysm = _system(diag)
        cols = [[row[j] for row in sysm.matrix] for j in range(len(sysm.columns))]
        cache["image"] = hnf_rows(cols, len(sysm.rows))
    return cache["image"]


def spinc_key(diag: CellDiagram, g: Generator, families=None) -> tuple[int, ...]:
    fams = families or diag.families[:2]
    sysm = _system(diag)
    return lattice_residue(_point_vector(sysm, g, fams), image_lattice(diag))


def spinc_partition(diag: CellDiagram) -> SpincPartition:
    gens = enumerate_generators(diag)
    keys: dict[tuple, int] = {}
    cls = []
    for g in gens:
        k = spinc_key(diag, g)
        if k not in keys:
            keys[k] = len(keys)
        cls.append(keys[k])
    return SpincPartition(tuple(gens), tuple(cls), diag)


# ---------------------------------------------------------------------------
# Maslov index
# ---------------------------------------------------------------------------

def euler_measures(diag: CellDiagram) -> tuple[Fraction, ...]:
    return tuple(Fraction(diag.region_map[r].euler_characteristic)
                 - Fraction(diag.region_map[r].corner_count, 4)
                 for r in diag.interior_regions)


def point_measure_vector(diag: CellDiagram, pts: Sequence[str]) -> list[Fraction]:
    """Linear functional n -> sum over pts of the average quadrant multiplicity."""
    idx = diag.interior_index
    v = [Fraction(0)] * len(idx)
    for p in pts:
        for q in diag.crossing_map[p].quadrants:
            if q in idx:
                v[idx[q]] += Fraction(1, 4)
    return v


def maslov_functional(diag: CellDiagram, endpoints: Sequence[Generator]) -> tuple[list[Fraction], Fraction]:
    """(w, const) with mu(n) = w.n + const."""
    e = euler_measures(diag)
    pts = [p for g in endpoints for p in g.points]
    pm = point_measure_vector(diag, pts)
    w = [a + b for a, b in zip(e, pm)]
    const = Fraction(0)
    if len(endpoints) == 3:
        const = -Fraction(TRIANGLE_CONSTANT * diag.d)
    return w, const


def maslov_index(domain: Domain) -> Fraction:
    diag = domain.diagram
    if len(domain.coefficients) != len(diag.interior_regions):
        raise MalformedDomain("coefficient vector does not match the interior regions")
    if len(domain.endpoints) not in (2, 3):
        raise MalformedDomain("endpoints must be a pair or a triple of generators")
    w, const = maslov_functional(diag, domain.endpoints)
    return sum((a * n for a, n in zip(w, domain.coefficients)), Fraction(0)) + const


def point_multiplicity(domain: Domain, p: str) -> Fraction:
    idx = domain.diagram.interior_index
    return sum((Fraction(domain.coefficients[idx[q]], 4)
                for q in domain.diagram.crossing_map[p].quadrants if q in idx), Fraction(0))


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    certificate: tuple[int, ...] | None
    periodic_rank: int
    lp_optimum: Fraction

    def __bool__(self) -> bool:
        return self.admissible


def check_admissibility(diag: CellDiagram) -> AdmissibilityResult:
    """Exact LP: maximise total coefficient over periodic P with 0 <= P <= 1."""
    cache = diag.__dict__.setdefault("_sfh_cache", {})
    if "admissible" in cache:
        return cache["admissible"]
    lat = periodic_domain_basis(diag)
    r = lat.rank
    if r == 0:
        res = AdmissibilityResult(True, None, 0, Fraction(0))
        cache["admissible"] = res
        return res
    nreg = len(lat.columns)
    cols = [[lat.basis[j][i] for j in range(r)] for i in range(nreg)]
    A_ub = cols + [[-a for a in row] for row in cols]
    b_ub = [1] * nreg + [0] * nreg
    c = [sum(lat.basis[j]) for j in range(r)]
    lp = lp_maximize(c, A_ub, b_ub)
    assert lp.status == "optimal"
    if lp.value > 0:
        scale = lcm_of_denominators(lp.x)
        z = [int(v * scale) for v in lp.x]
        cert = tuple(sum(z[j] * lat.basis[j][i] for j in range(r)) for i in range(nreg))
        res = AdmissibilityResult(False, cert, r, lp.value)
    else:
        res = AdmissibilityResult(True, None, r, lp.value)
    cache["admissible"] = res
    return res


def cone_search(diag: CellDiagram, bound: int = 4) -> tuple[int, ...] | None:
    """Brute-force oracle: a nonzero nonnegative periodic domain with lattice
    coordinates in [-bound, bound], or None."""
    lat = periodic_domain_basis(diag)
    r = lat.rank
    nreg = len(lat.columns)
    for z in product(range(-bound, bound + 1), repeat=r):
        if not any(z):
            continue
        v = tuple(sum(z[j] * lat.basis[j][i] for j in range(r)) for i in range(nreg))
        if all(a >= 0 for a in v) and any(v):
            return v
    return None


# ---------------------------------------------------------------------------
# enumeration of positive domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnumerationResult:
    domains: tuple[Domain, ...]
    complete: bool
    max_total: Fraction | None   # LP bound on the total coefficient (None = unbounded)
    bound: int

    @property
    def truncated(self) -> bool:
        return not self.complete


DEFAULT_BOUND = 64
CAP_ENV = "SFHKIT_ENUM_CAP"


def enumeration_cap() -> int:
    """Safety cap on the total coefficient, overridable through the environment."""
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_BOUND
    try:
        cap = int(raw)
    except ValueError:
        raise MalformedDomain(f"{CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise MalformedDomain(f"{CAP_ENV} must be nonnegative")
    return cap


def enumerate_positive_domains(diag: CellDiagram, endpoints: Sequence[Generator],
                               index, bound: int | None = None) -> EnumerationResult:
    """All domains D >= 0 with the given endpoints and Maslov index.

    The result is complete when the LP bound on the total coefficient lies
    within ``bound``; otherwise it is flagged as truncated.
    """
    if bound is None:
        bound = enumeration_cap()
    endpoints = tuple(endpoints)
    index = Fraction(index)
    if len(endpoints) == 2:
        base = connecting_domain(diag, *endpoints)
    elif len(endpoints) == 3:
        base = triangle_domain(diag, *endpoints)
    else:
        raise MalformedDomain("endpoints must be a pair or a triple")
    if not base.solvable:
        return EnumerationResult((), True, Fraction(0), bound)
    n0 = list(base.domain.coefficients)
    K = [list(v) for v in base.kernel.basis]
    r = len(K)
    nreg = len(n0)
    w, const = maslov_functional(diag, endpoints)
    # n = n0 + sum z_j K_j
    cols = [[K[j][i] for j in range(r)] for i in range(nreg)]
    A_ub = [[-a for a in row] for row in cols]
    b_ub = list(n0)
    wK = [sum(w[i] * K[j][i] for i in range(nreg)) for j in range(r)]
    target = index - const - sum(a * b for a, b in zip(w, n0))
    A_eq, b_eq = [wK], [target]
    tot = [sum(K[j]) for j in range(r)]
    if r == 0:
        ok = all(a >= 0 for a in n0) and target == 0 and sum(n0) <= bound
        doms = (Domain(tuple(n0), endpoints, diag),) if ok else ()
        return EnumerationResult(doms, True, Fraction(sum(n0)), bound)
    lp = lp_maximize(tot, A_ub, b_ub, A_eq, b_eq)
    if lp.status == "infeasible":
        return EnumerationResult((), True, None, bound)
    if lp.status == "unbounded":
        max_total = None
        cap = bound
        complete = False
    else:
        max_total = lp.value + sum(n0)
        cap = min(bound, floor(max_total))
        complete = max_total <= bound
    A_ub2 = A_ub + [tot]
    b_ub2 = b_ub + [cap - sum(n0)]
    found = []

    def rec(fixed: list[int]):
        j = len(fixed)
        if j == r:
            n = [n0[i] + sum(fixed[k] * K[k][i] for k in range(r)) for i in range(nreg)]
            if all(a >= 0 for a in n) and sum(n) <= cap:
                mu = sum((a * b for a, b in zip(w, n)), Fraction(0)) + const
                if mu == index:
                    found.append(tuple(n))
            return
        eq_fixed = [[1 if k == t else 0 for k in range(r)] for t in range(j)]
        cobj = [1 if k == j else 0 for k in range(r)]
        hi = lp_maximize(cobj, A_ub2, b_ub2, A_eq + eq_fixed, b_eq + fixed)
        if hi.status != "optimal":
            return
        lo = lp_maximize([-a for a in cobj], A_ub2, b_ub2, A_eq + eq_fixed, b_eq + fixed)
        for v in range(ceil(-lo.value), floor(hi.value) + 1):
            rec(fixed + [v])

    rec([])
    found.sort()
    return EnumerationResult(tuple(Domain(n, endpoints, diag) for n in found), complete,
                             max_total, bound)
