"""Chain complexes of nice diagrams, homology and distinguished generators."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd

from .diagram import CellDiagram, Generator, enumerate_generators, erase_family, is_nice
from .diagram.cells import rotation_system
from .domains import (Domain, check_admissibility, connecting_domain, enumerate_positive_domains,
                      maslov_index, periodic_domain_basis, point_multiplicity, satisfies_boundary,
                      spinc_partition)
from .errors import NotAdmissible, NotNice, NotTranslateType, TruncationWithoutCertificate
from .linalg import F2Homology, SparseMatrixF2, f2_homology, f2_kernel


# ---------------------------------------------------------------------------
# empty embedded bigons and rectangles
# ---------------------------------------------------------------------------

def _moved(x: Generator, y: Generator) -> tuple[set, set]:
    sx, sy = set(x.points), set(y.points)
    return sx - sy, sy - sx


def is_empty_polygon(dom: Domain) -> bool:
    """Embedded bigon (1 moved coordinate) or rectangle (2 moved) with empty interior."""
    x, y = dom.endpoints
    if any(a not in (0, 1) for a in dom.coefficients) or not any(dom.coefficients):
        return False
    ox, oy = _moved(x, y)
    if len(ox) not in (1, 2):
        return False
    quarter = Fraction(1, 4)
    if any(point_multiplicity(dom, p) != quarter for p in ox | oy):
        return False
    if any(point_multiplicity(dom, p) != 0 for p in set(x.points) & set(y.points)):
        return False
    diag = dom.diagram
    support = {r for r, a in zip(diag.interior_regions, dom.coefficients) if a}
    # no checkerboard crossings, connected support
    for c in diag.crossings:
        s = {q for q, r in enumerate(c.quadrants) if r in support}
        if s in ({0, 2}, {1, 3}):
            return False
    adj: dict[str, set] = {r: set() for r in support}
    for l, r in diag.segment_sides.values():
        if l in support and r in support and l != r:
            adj[l].add(r)
            adj[r].add(l)
    start = next(iter(support))
    seen, stack = {start}, [start]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return seen == support


def polygons(diag: CellDiagram, x: Generator, y: Generator) -> list[Domain]:
    ox, _ = _moved(x, y)
    if len(ox) not in (1, 2):
        return []
    res = enumerate_positive_domains(diag, (x, y), 1)
    if res.truncated:
        raise TruncationWithoutCertificate(f"domain enumeration {x} -> {y} was truncated")
    return [d for d in res.domains if is_empty_polygon(d)]


# ---------------------------------------------------------------------------
# chain complex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainComplex:
    diagram: CellDiagram = field(repr=False)
    generators: tuple[Generator, ...]
    boundary: SparseMatrixF2          # entry (i, j): g_i appears in d(g_j)
    spinc: tuple[int, ...]
    gradings: tuple[int, ...]
    divisors: tuple[int, ...]         # per class

    @property
    def dim(self) -> int:
        return len(self.generators)

    def index(self, g: Generator) -> int:
        return self.generators.index(g)

    def vector(self, gens) -> int:
        v = 0
        for g in gens:
            v ^= 1 << self.index(g)
        return v

    def d(self, g: Generator) -> list[Generator]:
        bits = self.boundary.apply(1 << self.index(g))
        return [h for i, h in enumerate(self.generators) if bits >> i & 1]

    def classes(self) -> list[int]:
        return sorted(set(self.spinc))

    def block_diagonal(self) -> bool:
        return all(self.spinc[r] == self.spinc[c] for r, c in self.boundary.entries)

    def grading_drops(self) -> bool:
        for r, c in self.boundary.entries:
            k = self.spinc[c]
            diff = self.gradings[c] - self.gradings[r] - 1
            dv = self.divisors[k]
            if (diff != 0) if dv == 0 else (diff % dv):
                return False
        return True


def _check_preconditions(diag: CellDiagram):
    ok, bad = is_nice(diag)
    if not ok:
        raise NotNice(f"region {bad} is not a bigon or square")
    adm = check_admissibility(diag)
    if not adm.admissible:
        raise NotAdmissible(f"nonnegative periodic domain {adm.certificate}")


def _cache(diag):
    return diag.__dict__.setdefault("_sfh_cache", {})


def differential_matrix(diag: CellDiagram) -> ChainComplex:
    cache = _cache(diag)
    if "complex" in cache:
        return cache["complex"]
    _check_preconditions(diag)
    part = spinc_partition(diag)
    gens = part.generators
    pairs = []
    for j, x in enumerate(gens):
        for i, y in enumerate(gens):
            if i == j or part.class_of[i] != part.class_of[j]:
                continue
            if len(polygons(diag, x, y)) % 2:
                pairs.append((i, j))
    bd = SparseMatrixF2.from_pairs(len(gens), len(gens), pairs)
    grads, divs = _gradings(diag, gens, part.class_of)
    cx = ChainComplex(diag, gens, bd, part.class_of, grads, divs)
    cache["complex"] = cx
    return cx


def brute_force_differential(diag: CellDiagram) -> SparseMatrixF2:
    """Oracle: parity of all 0/1 domains of index 1 with empty interior."""
    gens = enumerate_generators(diag)
    nreg = len(diag.interior_regions)
    vecs = [v for v in product((0, 1), repeat=nreg) if any(v)]
    pairs = []
    for j, x in enumerate(gens):
        for i, y in enumerate(gens):
            if i == j:
                continue
            shared = set(x.points) & set(y.points)
            cnt = 0
            for v in vecs:
                dom = Domain(v, (x, y), diag)
                if not satisfies_boundary(dom) or maslov_index(dom) != 1:
                    continue
                if any(point_multiplicity(dom, p) for p in shared):
                    continue
                cnt += 1
            if cnt % 2:
                pairs.append((i, j))
    return SparseMatrixF2.from_pairs(len(gens), len(gens), pairs)


# ---------------------------------------------------------------------------
# gradings
# ---------------------------------------------------------------------------

def _divisor(diag: CellDiagram, g: Generator) -> int:
    lat = periodic_domain_basis(diag)
    vals = []
    for b in lat.basis:
        mu = maslov_index(Domain(tuple(b), (g, g), diag))
        vals.append(int(mu))
    return reduce(gcd, (abs(v) for v in vals), 0)


def _gradings(diag, gens, class_of):
    grads = [0] * len(gens)
    ncls = max(class_of, default=-1) + 1
    divs = [0] * ncls
    rep: dict[int, Generator] = {}
    for i, g in enumerate(gens):
        k = class_of[i]
        if k not in rep:
            rep[k] = g
            divs[k] = _divisor(diag, g)
            continue
        dom = connecting_domain(diag, rep[k], g).domain
        mu = int(maslov_index(dom))
        grads[i] = -mu if divs[k] == 0 else (-mu) % divs[k]
    return tuple(grads), tuple(divs)


@dataclass(frozen=True)
class Grading:
    values: dict
    divisor: int

    def difference(self, a: Generator, b: Generator) -> int:
        d = self.values[a] - self.values[b]
        return d if self.divisor == 0 else d % self.divisor


def relative_grading(diag: CellDiagram, cls: int) -> Grading:
    """gr(x) - gr(y) = mu(any domain x -> y), modulo the periodic divisor."""
    part = spinc_partition(diag)
    members = [g for g, k in zip(part.generators, part.class_of) if k == cls]
    if not members:
        raise ValueError(f"Spin^c class {cls} is empty")
    base = members[0]
    div = _divisor(diag, base)
    vals = {}
    for g in members:
        mu = int(maslov_index(connecting_domain(diag, base, g).domain))
        vals[g] = -mu if div == 0 else (-mu) % div
    return Grading(vals, div)


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SFHResult:
    complex: ChainComplex = field(repr=False)
    homology: F2Homology = field(repr=False)
    class_ranks: tuple[tuple[int, int], ...]   # (class id, rank)

    @property
    def total(self) -> int:
        return self.homology.rank

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.complex.generators

    def coordinates(self, cycle_bits: int) -> int:
        """Bitset over homology basis indices of the class of a cycle."""
        return self.homology.project(cycle_bits)

    def is_boundary(self, cycle_bits: int) -> bool:
        return self.coordinates(cycle_bits) == 0

    def basis_generators(self) -> list[list[Generator]]:
        gens = self.complex.generators
        return [[g for i, g in enumerate(gens) if b >> i & 1] for b in self.homology.basis]

    def basis_classes(self) -> list[int]:
        out = []
        for b in self.homology.basis:
            i = (b & -b).bit_length() - 1
            out.append(self.complex.spinc[i])
        return out


def compute_sfh(diag: CellDiagram) -> SFHResult:
    cache = _cache(diag)
    if "sfh" in cache:
        return cache["sfh"]
    cx = differential_matrix(diag)
    bd = cx.boundary
    # homology per class, assembled so that basis vectors are class-homogeneous
    ranks = []
    for k in cx.classes():
        idx = [i for i, s in enumerate(cx.spinc) if s == k]
        pos = {g: n for n, g in enumerate(idx)}
        sub = SparseMatrixF2.from_pairs(len(idx), len(idx),
                                        [(pos[r], pos[c]) for r, c in bd.entries if c in pos])
        ranks.append((k, f2_homology(sub, sub).rank))
    hom = _homogeneous_homology(cx)
    res = SFHResult(cx, hom, tuple(ranks))
    assert res.total == sum(r for _, r in ranks)
    cache["sfh"] = res
    return res


def _homogeneous_homology(cx: ChainComplex) -> F2Homology:
    # kernel computed class by class so every basis vector is homogeneous
    bd = cx.boundary
    cycles = []
    for k in cx.classes():
        idx = [i for i, s in enumerate(cx.spinc) if s == k]
        pos = {g: n for n, g in enumerate(idx)}
        sub = SparseMatrixF2.from_pairs(len(idx), len(idx),
                                        [(pos[r], pos[c]) for r, c in bd.entries if c in pos])
        for z in f2_kernel(sub):
            cycles.append(sum(1 << idx[n] for n in range(len(idx)) if z >> n & 1))
    return f2_homology(bd, bd, cycles)


# ---------------------------------------------------------------------------
# Theta
# ---------------------------------------------------------------------------

def bigon_source(diag: CellDiagram, word) -> str | None:
    """Corner where the boundary arrives along the second family and leaves along the first."""
    rs = rotation_system(diag)
    n = len(word)
    for i in range(n):
        cur, prev = word[i], word[i - 1]
        if cur.lstrip("-")[0] == "a" and prev.lstrip("-")[0] != "a":
            seg = cur.lstrip("-")
            s, e = rs.seg_ends[seg]
            return s if not cur.startswith("-") else e
    return None


def select_theta(triple: CellDiagram, surgery_indices=None) -> Generator:
    """Top generator of the (beta, delta) sub-diagram.

    On translate indices the pair beta_i, delta_i must meet in two points
    bounding two bigons with a common source; on surgery indices in a
    single point.
    """
    if not triple.is_triple:
        raise NotTranslateType("select_theta needs a triple diagram")
    if surgery_indices is None:
        surgery_indices = triple.markings.get("triple", {}).get("surgery_indices", [])
    surgery = set(surgery_indices)
    sub = erase_family(triple, "alpha")
    points = []
    for i in range(triple.d):
        on = [c for c in sub.crossings if c.circles[0] == i]
        if any(c.circles[1] != i for c in on):
            raise NotTranslateType(f"beta_{i} meets a delta curve other than delta_{i}")
        if i in surgery:
            if len(on) != 1:
                raise NotTranslateType(f"surgery pair {i} must meet exactly once")
            points.append(on[0].id)
            continue
        if len(on) != 2:
            raise NotTranslateType(f"pair {i} meets in {len(on)} points, expected 2")
        ids = {c.id for c in on}
        sources = []
        for r in sub.regions:
            if r.touches_suture or not r.is_disk or r.corner_count != 2:
                continue
            w = r.boundary_words[0]
            corners = set()
            rs = rotation_system(sub)
            for a in w:
                s, e = rs.seg_ends[a.lstrip("-")]
                corners |= {s, e}
            if corners == ids:
                sources.append(bigon_source(sub, w))
        if len(sources) != 2 or sources[0] != sources[1] or sources[0] is None:
            raise NotTranslateType(f"pair {i} does not bound two bigons with a common source")
        points.append(sources[0])
    return Generator(tuple(points))
