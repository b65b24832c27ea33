"""Contact class EH, gluing maps and cobordism plans."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .cobordism import (InducedMap, compose_special, generator_map, identity_map,
                        link_surgery_map, one_handle_map, three_handle_map, translate_identification)
from .complex import SFHResult, compute_sfh
from .diagram import CellDiagram, Generator, enumerate_generators, erase_family
from .errors import GluingConditionViolated, MarkingNotCycleCertified, StepMismatch

OUTGOING = (0, 2)   # quadrants whose boundary leaves the crossing along alpha


# ---------------------------------------------------------------------------
# EH
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EHMarking:
    diagram: CellDiagram = field(repr=False)
    generator: Generator


def outgoing_violations(diag: CellDiagram, points: Sequence[str]) -> list[tuple[str, str]]:
    bad = []
    for p in points:
        c = diag.crossing_map.get(p)
        if c is None:
            raise MarkingNotCycleCertified(f"{p} is not a crossing")
        for q in OUTGOING:
            r = c.quadrants[q]
            if not diag.region_map[r].touches_suture:
                bad.append((p, r))
    return bad


def validate_eh_marking(marking: EHMarking) -> EHMarking:
    diag, x = marking.diagram, marking.generator
    if x not in enumerate_generators(diag):
        raise MarkingNotCycleCertified(f"{x} is not a generator")
    bad = outgoing_violations(diag, x.points)
    if bad:
        p, r = bad[0]
        raise MarkingNotCycleCertified(f"region {r} leaves {p} along alpha without touching the suture")
    sfh = compute_sfh(diag)
    if sfh.complex.d(x):
        raise MarkingNotCycleCertified(f"d{x} is nonzero")
    return marking


def marking_from(diag: CellDiagram, points: Sequence[str] | None = None) -> EHMarking:
    if points is None:
        points = diag.markings.get("eh", [])
    pts = set(points)
    for g in enumerate_generators(diag):
        if set(g.points) == pts:
            return EHMarking(diag, g)
    raise MarkingNotCycleCertified(f"no generator with points {sorted(pts)}")


@dataclass(frozen=True)
class EHClass:
    sfh: SFHResult = field(repr=False)
    generator: Generator
    coordinates: int      # bitset over the homology basis

    @property
    def is_zero(self) -> bool:
        return self.coordinates == 0

    def vector(self) -> list[int]:
        return [(self.coordinates >> i) & 1 for i in range(self.sfh.total)]


def eh_class(marking: EHMarking) -> EHClass:
    validate_eh_marking(marking)
    sfh = compute_sfh(marking.diagram)
    bits = 1 << sfh.complex.index(marking.generator)
    return EHClass(sfh, marking.generator, sfh.coordinates(bits))


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GluingData:
    """Sub-diagram (same crossing ids) inside a big diagram plus x'' on the rest."""
    sub: CellDiagram = field(repr=False)
    big: CellDiagram = field(repr=False)
    complement: tuple[str, ...]
    isolated_disks: int = 0


def check_gluing(data: GluingData) -> None:
    sub, big = data.sub, data.big
    if sub.families != big.families:
        raise GluingConditionViolated("sub-diagram and big diagram have different families")
    for c in sub.crossings:
        bc = big.crossing_map.get(c.id)
        if bc is None or bc.families != c.families:
            raise GluingConditionViolated(f"crossing {c.id} of the sub-diagram is missing in the big diagram")
    if big.d != sub.d + len(data.complement):
        raise GluingConditionViolated(f"x'' has {len(data.complement)} points, "
                                      f"expected {big.d - sub.d}")
    sub_ids = {c.id for c in sub.crossings}
    for circ in big.alphas + big.betas:
        if set(circ) & sub_ids and not set(circ) <= sub_ids:
            raise GluingConditionViolated("a sub-diagram curve meets the complement")
    if set(data.complement) & sub_ids:
        raise GluingConditionViolated("x'' uses a crossing of the sub-diagram")
    for p in data.complement:
        if p not in big.crossing_map:
            raise GluingConditionViolated(f"{p} is not a crossing of the big diagram")
    a_used = [big.crossing_map[p].circles[0] for p in data.complement]
    b_used = [big.crossing_map[p].circles[1] for p in data.complement]
    if len(set(a_used)) != len(a_used) or len(set(b_used)) != len(b_used):
        raise GluingConditionViolated("x'' uses a curve twice")
    bad = outgoing_violations(big, data.complement)
    if bad:
        p, r = bad[0]
        raise GluingConditionViolated(f"region {r} leaves {p} along alpha without touching the suture")
    if data.isolated_disks < 0:
        raise GluingConditionViolated("isolated disk count must be nonnegative")


def gluing_map(data: GluingData) -> InducedMap:
    """y -> (y, x''); isolated components are recorded as rank-1 disk factors."""
    check_gluing(data)
    big_gens = {frozenset(g.points): g for g in enumerate_generators(data.big)}
    extra = tuple(data.complement)

    def fn(g: Generator):
        h = big_gens.get(frozenset(g.points + extra))
        if h is None:
            raise GluingConditionViolated(f"({g}, x'') is not a generator of the big diagram")
        return h
    return generator_map(data.sub, data.big, fn,
                         ("glue", extra, {"isolated_disks": data.isolated_disks,
                                          "contact_compatibility": "assumed"}))


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Glue:
    data: GluingData


@dataclass(frozen=True)
class OneHandle:
    r1: str
    r2: str


@dataclass(frozen=True)
class ThreeHandle:
    marking: Mapping | None = None


@dataclass(frozen=True)
class LinkSurgery:
    triple: CellDiagram = field(repr=False)
    indices: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Translate:
    """Identify the (alpha, delta) end of a translate triple with its (alpha, beta) end."""
    triple: CellDiagram = field(repr=False)


Step = Union[Glue, OneHandle, ThreeHandle, LinkSurgery, Translate, "CobordismPlan"]


@dataclass(frozen=True)
class CobordismPlan:
    start: CellDiagram = field(repr=False)
    steps: tuple


@dataclass(frozen=True)
class PlanResult:
    map: InducedMap
    steps: tuple[InducedMap, ...]

    @property
    def classes(self) -> list[tuple[int, int]]:
        """(source class, target class) pairs carrying nonzero blocks."""
        return sorted(self.map.blocks())

    def by_source_class(self) -> dict:
        """F_s: the homology matrix restricted to source class s."""
        sc = self.map.source.basis_classes()
        out = {}
        for s in sorted(set(sc)):
            ents = frozenset((r, c) for r, c in self.map.matrix.entries if sc[c] == s)
            out[s] = ents
        return out


def _run_step(cur: CellDiagram, step) -> InducedMap:
    if isinstance(step, CobordismPlan) or isinstance(step, (list, tuple)):
        steps = step.steps if isinstance(step, CobordismPlan) else tuple(step)
        if isinstance(step, CobordismPlan) and step.start.key() != cur.key():
            raise StepMismatch("nested plan does not start where the previous step ended")
        return execute_plan(CobordismPlan(cur, steps)).map
    if isinstance(step, OneHandle):
        return one_handle_map(cur, step.r1, step.r2)
    if isinstance(step, ThreeHandle):
        return three_handle_map(cur, step.marking)
    if isinstance(step, Glue):
        if step.data.sub.key() != cur.key():
            raise StepMismatch("gluing sub-diagram does not match the current diagram")
        return gluing_map(step.data)
    if isinstance(step, LinkSurgery):
        if erase_family(step.triple, "delta").key() != cur.key():
            raise StepMismatch("triple's (alpha, beta) diagram does not match the current diagram")
        return link_surgery_map(step.triple, step.indices)
    if isinstance(step, Translate):
        if erase_family(step.triple, "beta").key() != cur.key():
            raise StepMismatch("triple's (alpha, delta) diagram does not match the current diagram")
        return translate_identification(step.triple)
    raise StepMismatch(f"unknown step {step!r}")


def execute_plan(plan: CobordismPlan) -> PlanResult:
    cur = plan.start
    maps = []
    for step in plan.steps:
        m = _run_step(cur, step)
        maps.append(m)
        cur = m.target.complex.diagram
    if not maps:
        maps = [identity_map(plan.start)]
    return PlanResult(compose_special(maps), tuple(maps))
