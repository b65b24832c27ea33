"""Maps induced by special cobordisms: handles, triangles, composition, duality."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .complex import SFHResult, bigon_source, compute_sfh, select_theta
from .diagram import (CellDiagram, Generator, annulus_marking, attach_onehandle_annulus,
                      detach_annulus, erase_family, region_merge_map, translate_correspondence)
from .domains import (Domain, check_admissibility, connecting_domain, doubly_periodic_basis,
                      enumerate_positive_domains, point_multiplicity, euler_measures)
from .errors import (DimensionMismatch, MarkedSubdiagramInvalid, NotAChainComplex, NotAdmissible,
                     NotTranslateType, SubordinateConditionViolated, TruncationWithoutCertificate,
                     UncertifiedTriple)
from .linalg import SparseMatrixF2, hnf_rows, lattice_residue


# ---------------------------------------------------------------------------
# induced maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InducedMap:
    source: SFHResult = field(repr=False)
    target: SFHResult = field(repr=False)
    chain: SparseMatrixF2          # target generators x source generators
    matrix: SparseMatrixF2         # target homology basis x source homology basis
    routing: frozenset             # (source class, target class)
    provenance: tuple

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.rows, self.matrix.cols

    def is_identity(self) -> bool:
        return self.matrix == SparseMatrixF2.identity(self.matrix.rows) and \
            self.matrix.rows == self.matrix.cols

    def apply_class(self, bits: int) -> int:
        return self.matrix.apply(bits)

    def apply_chain(self, bits: int) -> int:
        return self.chain.apply(bits)

    def blocks(self) -> dict[tuple[int, int], SparseMatrixF2]:
        """Homology matrix restricted to each (source class, target class)."""
        sc = self.source.basis_classes()
        tc = self.target.basis_classes()
        out: dict[tuple[int, int], set] = {}
        for r, c in self.matrix.entries:
            out.setdefault((sc[c], tc[r]), set()).add((r, c))
        return {k: SparseMatrixF2(self.matrix.rows, self.matrix.cols, frozenset(v))
                for k, v in sorted(out.items())}


def induced_from_chain(source: SFHResult, target: SFHResult, chain: SparseMatrixF2,
                       provenance: tuple) -> InducedMap:
    """Verify the chain-map identity exactly, then descend to homology."""
    if chain.cols != source.complex.dim or chain.rows != target.complex.dim:
        raise DimensionMismatch(f"chain matrix {chain.rows}x{chain.cols} does not fit "
                                f"{target.complex.dim}x{source.complex.dim}")
    if target.complex.boundary @ chain != chain @ source.complex.boundary:
        raise NotAChainComplex(f"{provenance[0]}: map does not commute with the differentials")
    cols = [target.coordinates(chain.apply(z)) for z in source.homology.basis]
    matrix = SparseMatrixF2.from_columns(target.total, cols)
    ss, ts = source.complex.spinc, target.complex.spinc
    routing = frozenset((ss[c], ts[r]) for r, c in chain.entries)
    return InducedMap(source, target, chain, matrix, routing, provenance)


def generator_map(source: CellDiagram, target: CellDiagram,
                  fn: Callable[[Generator], Generator | None], provenance: tuple) -> InducedMap:
    """Map sending each generator to one generator (or zero)."""
    s, t = compute_sfh(source), compute_sfh(target)
    pairs = []
    for j, g in enumerate(s.generators):
        h = fn(g)
        if h is None:
            continue
        try:
            pairs.append((t.complex.index(h), j))
        except ValueError:
            raise DimensionMismatch(f"{g} maps to {h}, which is not a target generator") from None
    chain = SparseMatrixF2.from_pairs(t.complex.dim, s.complex.dim, pairs)
    return induced_from_chain(s, t, chain, provenance)


def pointwise_map(source: CellDiagram, target: CellDiagram, rename: Mapping[str, str] | None = None,
                  drop: Iterable[str] = (), add: Iterable[str] = (), provenance: tuple = ("pointwise",)
                  ) -> InducedMap:
    """Generator map renaming, dropping and adding intersection points.

    Used for identifications (isotopic translates, destabilisations); the
    chain-map property is checked like for every other map.
    """
    rename = dict(rename or {})
    drop, add = set(drop), tuple(add)
    by_points = {frozenset(g.points): g for g in compute_sfh(target).generators}

    def fn(g: Generator):
        pts = frozenset([rename.get(p, p) for p in g.points if p not in drop] + list(add))
        h = by_points.get(pts)
        if h is None:
            raise DimensionMismatch(f"{g} has no image among the target generators")
        return h
    return generator_map(source, target, fn, provenance)


def identity_map(diag: CellDiagram) -> InducedMap:
    return generator_map(diag, diag, lambda g: g, ("identity",))


# ---------------------------------------------------------------------------
# one- and three-handles
# ---------------------------------------------------------------------------

def one_handle_map(diag: CellDiagram, r1: str, r2: str) -> InducedMap:
    """x -> x x {theta} into the diagram with a one-handle annulus attached."""
    target = attach_onehandle_annulus(diag, r1, r2)
    theta = annulus_marking(target)["theta"]
    return generator_map(diag, target, lambda g: g.extend(theta), ("one_handle", r1, r2))


def validate_annulus_marking(diag: CellDiagram, marking: Mapping) -> tuple[str, str]:
    """Check the marked annulus piece; return (top point, bottom point).

    The top point is read off the bigons (both leave it), not from the
    marking labels, so the same marking works on the reversed diagram.
    """
    try:
        ai, bj = int(marking["alpha"]), int(marking["beta"])
        theta, low = marking["theta"], marking["low"]
        bigons = list(marking["bigons"])
    except (KeyError, TypeError, ValueError) as e:
        raise MarkedSubdiagramInvalid(f"incomplete annulus marking: {e}") from None
    if not (0 <= ai < diag.d and 0 <= bj < diag.d):
        raise MarkedSubdiagramInvalid("marked curve index out of range")
    if sorted(diag.alphas[ai]) != sorted([theta, low]) or sorted(diag.betas[bj]) != sorted([theta, low]):
        raise MarkedSubdiagramInvalid(
            f"marked alpha_{ai} and beta_{bj} must meet exactly in {{{theta}, {low}}} and nowhere else "
            f"(|alpha cap beta| = {len(set(diag.alphas[ai]) & set(diag.betas[bj]))})")
    if len(bigons) != 2:
        raise MarkedSubdiagramInvalid("the annulus needs exactly two bigons")
    for b in bigons:
        r = diag.region_map.get(b)
        if r is None or r.touches_suture or not r.is_disk or r.corner_count != 2:
            raise MarkedSubdiagramInvalid(f"{b} is not an interior bigon")
        corners = {c.id for c in diag.crossings if b in c.quadrants}
        if corners != {theta, low}:
            raise MarkedSubdiagramInvalid(f"bigon {b} does not have corners {theta}, {low}")
    for c in (theta, low):
        for q in diag.crossing_map[c].quadrants:
            if q not in bigons and not diag.region_map[q].touches_suture:
                raise MarkedSubdiagramInvalid(f"the annulus is not glued along suture regions at {c}")
    sources = {bigon_source(diag, diag.region_map[b].boundary_words[0]) for b in bigons}
    if len(sources) != 1 or None in sources:
        raise MarkedSubdiagramInvalid("the two bigons do not leave a common point")
    top = sources.pop()
    return top, (low if top == theta else theta)


def three_handle_map(diag: CellDiagram, marking: Mapping | None = None) -> InducedMap:
    """x x {theta} -> 0 and x x {low} -> x, removing a marked annulus piece."""
    if marking is None:
        try:
            marking = annulus_marking(diag)
        except KeyError:
            raise MarkedSubdiagramInvalid("diagram has no marked annulus") from None
    theta, low = validate_annulus_marking(diag, marking)
    target = detach_annulus(diag, int(marking["alpha"]), int(marking["beta"]), marking["theta"],
                            marking["low"],
                            marking["bigons"])

    def fn(g: Generator):
        if theta in g:
            return None
        return Generator(tuple(p for p in g.points if p != low))
    return generator_map(diag, target, fn, ("three_handle", theta))


# ---------------------------------------------------------------------------
# triangle maps
# ---------------------------------------------------------------------------

def _components(diag: CellDiagram, support: set) -> list[set]:
    adj: dict[str, set] = {r: set() for r in support}
    for l, r in diag.segment_sides.values():
        if l in support and r in support and l != r:
            adj[l].add(r)
            adj[r].add(l)
    comps, seen = [], set()
    for s in sorted(support):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        seen.add(s)
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    comp.add(nb)
                    stack.append(nb)
        comps.append(comp)
    return comps


def is_triangle_union(dom: Domain) -> bool:
    """d disjoint embedded triangles, each with one corner in x, theta and y."""
    diag = dom.diagram
    x, th, y = dom.endpoints
    if any(a not in (0, 1) for a in dom.coefficients):
        return False
    quarter = Fraction(1, 4)
    pts = list(x.points) + list(th.points) + list(y.points)
    if any(point_multiplicity(dom, p) != quarter for p in pts):
        return False
    support = {r for r, a in zip(diag.interior_regions, dom.coefficients) if a}
    for c in diag.crossings:
        s = {q for q, r in enumerate(c.quadrants) if r in support}
        if s in ({0, 2}, {1, 3}):
            return False
    comps = _components(diag, support) if support else []
    if len(comps) != diag.d:
        return False
    e = dict(zip(diag.interior_regions, euler_measures(diag)))
    for comp in comps:
        if sum(e[r] for r in comp) != quarter:
            return False
        for tup in (x, th, y):
            if sum(1 for p in tup.points
                   if any(q in comp for q in diag.crossing_map[p].quadrants)) != 1:
                return False
    return True


@dataclass(frozen=True)
class TriangleSpincClass:
    key: tuple
    witness: Domain | None = field(default=None, compare=False, hash=False, repr=False)


class _TriangleSpinc:
    """Canonical labels for triangle classes modulo doubly-periodic domains."""

    def __init__(self, triple: CellDiagram, source: SFHResult, target: SFHResult):
        self.triple = triple
        self.src, self.tgt = source, target
        self.lift_s = region_merge_map(triple, "delta")
        self.lift_t = region_merge_map(triple, "beta")
        lat = doubly_periodic_basis(triple)
        self.hnf = hnf_rows(lat.basis, len(triple.interior_regions))
        self.reps_s = self._reps(source)
        self.reps_t = self._reps(target)

    @staticmethod
    def _reps(sfh):
        reps = {}
        for g, k in zip(sfh.complex.generators, sfh.complex.spinc):
            reps.setdefault(k, g)
        return reps

    def _lift(self, dom: Domain, table) -> list[int]:
        by = dom.by_region()
        return [by.get(table[r], 0) for r in self.triple.interior_regions]

    def key(self, dom: Domain) -> tuple:
        x, th, y = dom.endpoints
        ks = self.src.complex.spinc[self.src.complex.index(x)]
        kt = self.tgt.complex.spinc[self.tgt.complex.index(y)]
        ds = connecting_domain(self.src.complex.diagram, self.reps_s[ks], x).domain
        dt = connecting_domain(self.tgt.complex.diagram, y, self.reps_t[kt]).domain
        v = [a + b + c for a, b, c in zip(self._lift(ds, self.lift_s), dom.coefficients,
                                          self._lift(dt, self.lift_t))]
        return (ks, kt, lattice_residue(v, self.hnf))


def _is_translate_built(triple: CellDiagram) -> bool:
    return triple.markings.get("triple", {}).get("translate_normal_form") == "two-bigon"


@dataclass(frozen=True)
class TriangleCount:
    source: SFHResult
    target: SFHResult
    counts: dict          # (target index, source index, class key) -> number of triangles
    theta: Generator


def count_triangles(triple: CellDiagram, theta: Generator) -> TriangleCount:
    cache = triple.__dict__.setdefault("_sfh_cache", {})
    ck = ("triangles", theta)
    if ck in cache:
        return cache[ck]
    if not triple.is_triple:
        raise UncertifiedTriple("triangle maps need a triple diagram")
    adm = check_admissibility(triple)
    if not adm.admissible:
        raise NotAdmissible(f"triple has nonnegative periodic domain {adm.certificate}")
    certified = _is_translate_built(triple)
    src = compute_sfh(erase_family(triple, "delta"))
    tgt = compute_sfh(erase_family(triple, "beta"))
    labels = _TriangleSpinc(triple, src, tgt)
    counts: dict[tuple, int] = {}
    for j, x in enumerate(src.generators):
        for i, y in enumerate(tgt.generators):
            res = enumerate_positive_domains(triple, (x, theta, y), 0)
            if res.truncated:
                raise TruncationWithoutCertificate(f"triangle enumeration {x}, {theta}, {y} truncated")
            for dom in res.domains:
                if not is_triangle_union(dom):
                    if certified:
                        continue
                    raise UncertifiedTriple(f"index-0 domain {dom.by_region()} is not a union of "
                                            f"embedded triangles")
                k = (i, j, labels.key(dom))
                counts[k] = counts.get(k, 0) + 1
    out = TriangleCount(src, tgt, counts, theta)
    cache[ck] = out
    return out


def triangle_map(triple: CellDiagram, theta: Generator | None = None,
                 spinc_filter: TriangleSpincClass | None = None) -> InducedMap:
    """F(x) = sum over index-0 triangles (x, theta, y) of y, counted mod 2."""
    if theta is None:
        theta = select_theta(triple)
    tc = count_triangles(triple, theta)
    acc: dict[tuple[int, int], int] = {}
    for (i, j, key), n in tc.counts.items():
        if spinc_filter is not None and key != spinc_filter.key:
            continue
        acc[(i, j)] = acc.get((i, j), 0) + n
    chain = SparseMatrixF2(tc.target.complex.dim, tc.source.complex.dim,
                           frozenset(k for k, n in acc.items() if n % 2))
    prov = ("triangle", str(theta)) if spinc_filter is None else ("triangle", str(theta), spinc_filter.key)
    return induced_from_chain(tc.source, tc.target, chain, prov)


def triangle_spinc_classes(triple: CellDiagram, theta: Generator | None = None) -> list[TriangleSpincClass]:
    if theta is None:
        theta = select_theta(triple)
    tc = count_triangles(triple, theta)
    return [TriangleSpincClass(k) for k in sorted({key for (_, _, key) in tc.counts})]


def filtered_triangle_maps(triple: CellDiagram, theta: Generator | None = None) -> dict:
    if theta is None:
        theta = select_theta(triple)
    return {c.key: triangle_map(triple, theta, c) for c in triangle_spinc_classes(triple, theta)}


def check_subordinate(triple: CellDiagram, surgery_indices: Iterable[int]) -> None:
    surgery = set(surgery_indices)
    if not triple.is_triple:
        raise SubordinateConditionViolated("link surgery needs a triple diagram")
    for i in surgery:
        if not 0 <= i < triple.d:
            raise SubordinateConditionViolated(f"surgery index {i} out of range")
    for c in triple.crossings:
        if c.families != ("beta", "delta"):
            continue
        bi, dj = c.circles
        if bi != dj:
            raise SubordinateConditionViolated(f"beta_{bi} meets delta_{dj} at {c.id}")
    for i in surgery:
        n = sum(1 for c in triple.crossings if c.families == ("beta", "delta") and c.circles == (i, i))
        if n != 1:
            raise SubordinateConditionViolated(f"beta_{i} meets delta_{i} in {n} points, expected 1")


def link_surgery_map(triple: CellDiagram, surgery_indices: Iterable[int] | None = None) -> InducedMap:
    if surgery_indices is None:
        surgery_indices = triple.markings.get("triple", {}).get("surgery_indices", [])
    surgery = sorted(set(surgery_indices))
    check_subordinate(triple, surgery)
    try:
        theta = select_theta(triple, surgery)
    except NotTranslateType as e:
        raise SubordinateConditionViolated(str(e)) from None
    m = triangle_map(triple, theta)
    return InducedMap(m.source, m.target, m.chain, m.matrix, m.routing,
                      ("link_surgery", tuple(surgery)))


def translate_identification(triple: CellDiagram) -> InducedMap:
    """(alpha, delta) -> (alpha, beta) via companion points, when no surgery is done."""
    if triple.markings.get("triple", {}).get("surgery_indices"):
        raise NotTranslateType("identification needs a triple without surgery curves")
    corr = {v: k for k, v in translate_correspondence(triple).items()}
    return generator_map(erase_family(triple, "beta"), erase_family(triple, "delta"),
                         lambda g: g.replace(corr), ("translate_identification",))


# ---------------------------------------------------------------------------
# composition and duality
# ---------------------------------------------------------------------------

def compose_special(maps: Sequence[InducedMap]) -> InducedMap:
    """maps[0] applied first."""
    if not maps:
        raise DimensionMismatch("nothing to compose")
    acc = maps[0]
    for m in maps[1:]:
        if m.source.complex.diagram.key() != acc.target.complex.diagram.key() or \
                m.chain.cols != acc.chain.rows:
            raise DimensionMismatch(f"cannot compose {acc.provenance[0]} with {m.provenance[0]}: "
                                    f"diagrams differ")
        chain = m.chain @ acc.chain
        ss, ts = acc.source.complex.spinc, m.target.complex.spinc
        routing = frozenset((ss[c], ts[r]) for r, c in chain.entries)
        acc = InducedMap(acc.source, m.target, chain, m.matrix @ acc.matrix,
                         routing, ("compose",) + tuple(x.provenance[0] for x in (acc, m)))
    return acc


@dataclass(frozen=True)
class DualityPairing:
    forward: SFHResult = field(repr=False)
    reverse: SFHResult = field(repr=False)

    def pair(self, a: int, b: int) -> int:
        """<a, b> for chains a in CF(Sigma), b in CF(-Sigma), as generator bitsets."""
        ga, gb = self.forward.generators, self.reverse.generators
        sa = {ga[i] for i in range(len(ga)) if a >> i & 1}
        sb = {gb[i] for i in range(len(gb)) if b >> i & 1}
        return len(sa & sb) % 2

    def matrix(self) -> SparseMatrixF2:
        ga, gb = self.forward.generators, self.reverse.generators
        pos = {g: i for i, g in enumerate(gb)}
        return SparseMatrixF2.from_pairs(len(ga), len(gb), [(i, pos[g]) for i, g in enumerate(ga)])

    def adjoint(self) -> bool:
        """<a, d b> = <d a, b> for all generator pairs."""
        P = self.matrix()
        return P @ self.reverse.complex.boundary == self.forward.complex.boundary.transpose() @ P


def duality_pairing(diag: CellDiagram) -> DualityPairing:
    from .diagram import reverse_orientation
    return DualityPairing(compute_sfh(diag), compute_sfh(reverse_orientation(diag)))
