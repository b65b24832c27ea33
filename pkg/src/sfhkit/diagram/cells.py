"""Cell-complex encoding of sutured Heegaard (multi-)diagrams.

A diagram is stored as curve circuits (cyclic crossing lists per family),
crossings with their four quadrant regions, and regions with boundary words.

Conventions
-----------
At a crossing of families f < g (alpha < beta < delta) the f-curve is drawn
horizontally pointing east.  The g-curve points north (sign +1) or south
(sign -1).  Darts are numbered counterclockwise E=0, N=1, W=2, S=3 and
quadrant q sits between dart q and dart q+1, giving NE, NW, SW, SE.

Segment ``a{i}.{k}`` is the piece of alpha_i from circuit[k] to
circuit[k+1] (``b`` for beta, ``d`` for delta).  A curve without crossings
is the single segment ``.0``.  Boundary words run with the region on the
left; ``-a0.1`` traverses a segment backwards.  Suture circles are arcs
named ``s<name>`` and always form a word of their own.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

FAMILIES = ("alpha", "beta", "delta")
LETTER = {"alpha": "a", "beta": "b", "delta": "d"}
FAMILY_OF = {v: k for k, v in LETTER.items()}
QUADRANTS = ("NE", "NW", "SW", "SE")
SEGMENT_RE = re.compile(r"^(-?)([abd])(\d+)\.(\d+)$")
SUTURE_RE = re.compile(r"^s[A-Za-z0-9_:]*$")


def seg_name(family: str, circle: int, k: int) -> str:
    return f"{LETTER[family]}{circle}.{k}"


def parse_arc(arc: str):
    """Return ('seg', family, circle, k, forward) or ('suture', name)."""
    m = SEGMENT_RE.match(arc)
    if m:
        return ("seg", FAMILY_OF[m.group(2)], int(m.group(3)), int(m.group(4)), m.group(1) == "")
    if SUTURE_RE.match(arc):
        return ("suture", arc)
    return None


def is_suture_arc(arc: str) -> bool:
    return not SEGMENT_RE.match(arc)


def flip(arc: str) -> str:
    return arc[1:] if arc.startswith("-") else "-" + arc


def canonical_rotation(word: Sequence[str]) -> tuple[str, ...]:
    w = tuple(word)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def word_corners(word: Sequence[str]) -> int:
    if len(word) < 2:
        return 0
    return len(word)


@dataclass(frozen=True)
class Crossing:
    id: str
    families: tuple[str, str]
    circles: tuple[int, int]
    quadrants: tuple[str, str, str, str]
    sign: int

    @property
    def alpha_circle(self) -> int:
        return self.circles[0]

    @property
    def beta_circle(self) -> int:
        return self.circles[1]

    def quadrant(self, name: str) -> str:
        return self.quadrants[QUADRANTS.index(name)]


@dataclass(frozen=True)
class Region:
    id: str
    genus: int
    boundary_words: tuple[tuple[str, ...], ...]
    touches_suture: bool

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.boundary_words)

    @property
    def corner_count(self) -> int:
        return sum(word_corners(w) for w in self.boundary_words)

    @property
    def is_disk(self) -> bool:
        return self.genus == 0 and len(self.boundary_words) == 1 and not self.touches_suture


@dataclass(frozen=True)
class Orbit:
    """A traced boundary cycle: arcs[i] leaves corners[i] (empty if cornerless)."""
    arcs: tuple[str, ...]
    corners: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class CellDiagram:
    families: tuple[str, ...]
    curves: tuple[tuple[tuple[str, ...], ...], ...]
    crossings: tuple[Crossing, ...]
    regions: tuple[Region, ...]
    markings_json: str = field(default="{}")

    # ---- basic accessors -------------------------------------------------
    @property
    def d(self) -> int:
        return len(self.curves[0]) if self.curves else 0

    def family(self, name: str) -> tuple[tuple[str, ...], ...]:
        return self.curves[self.families.index(name)]

    @property
    def alphas(self):
        return self.family("alpha")

    @property
    def betas(self):
        return self.family("beta")

    @property
    def deltas(self):
        return self.family("delta")

    @property
    def is_triple(self) -> bool:
        return len(self.families) == 3

    @property
    def markings(self) -> dict:
        return json.loads(self.markings_json)

    @cached_property
    def crossing_map(self) -> dict[str, Crossing]:
        return {c.id: c for c in self.crossings}

    @cached_property
    def region_map(self) -> dict[str, Region]:
        return {r.id: r for r in self.regions}

    @cached_property
    def interior_regions(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.regions if not r.touches_suture)

    @cached_property
    def interior_index(self) -> dict[str, int]:
        return {r: i for i, r in enumerate(self.interior_regions)}

    @cached_property
    def segments(self) -> dict[str, tuple[str, int, int, str | None, str | None]]:
        """segment -> (family, circle, k, start crossing, end crossing)."""
        out = {}
        for fam, circs in zip(self.families, self.curves):
            for ci, circ in enumerate(circs):
                n = len(circ)
                if n == 0:
                    out[seg_name(fam, ci, 0)] = (fam, ci, 0, None, None)
                for k in range(n):
                    out[seg_name(fam, ci, k)] = (fam, ci, k, circ[k], circ[(k + 1) % n])
        return out

    @cached_property
    def segment_sides(self) -> dict[str, tuple[str, str]]:
        """segment -> (left region, right region)."""
        left, right = {}, {}
        for r in self.regions:
            for w in r.boundary_words:
                for a in w:
                    if is_suture_arc(a):
                        continue
                    if a.startswith("-"):
                        right[a[1:]] = r.id
                    else:
                        left[a] = r.id
        return {s: (left[s], right[s]) for s in self.segments}

    @cached_property
    def sutures(self) -> tuple[str, ...]:
        return tuple(sorted(a for r in self.regions for w in r.boundary_words
                            for a in w if is_suture_arc(a)))

    def crossings_between(self, f: str, g: str) -> tuple[Crossing, ...]:
        return tuple(c for c in self.crossings if set(c.families) == {f, g})

    def signs(self) -> dict[str, int]:
        return {c.id: c.sign for c in self.crossings}

    def key(self):
        """Name-independent identity used to check that complexes match."""
        regs = []
        for r in self.regions:
            cs = tuple(sorted((c.id, q) for c in self.crossings for q in range(4)
                              if c.quadrants[q] == r.id))
            curve_words = tuple(sorted(w for w in r.boundary_words if not is_suture_arc(w[0])))
            regs.append((cs, r.genus, r.touches_suture, curve_words if not cs else ()))
        return (self.families,
                tuple(tuple(canonical_rotation(c) for c in fam) for fam in self.curves),
                tuple(sorted(regs)))

    def summary(self) -> dict:
        return {
            "d": self.d,
            "families": list(self.families),
            "crossings": len(self.crossings),
            "regions": len(self.regions),
            "interior_regions": len(self.interior_regions),
            "euler_characteristic": self.euler_characteristic,
            "sutures": len(self.sutures),
        }

    @cached_property
    def euler_characteristic(self) -> int:
        e = sum(len(c) for fam in self.curves for c in fam)
        return sum(r.euler_characteristic for r in self.regions) - e + len(self.crossings)


class SuturedDiagram(CellDiagram):
    """Diagram with families (alpha, beta)."""


class TripleDiagram(CellDiagram):
    """Diagram with families (alpha, beta, delta)."""


def make_diagram(families, curves, crossings, regions, markings=None) -> CellDiagram:
    cls = TripleDiagram if len(families) == 3 else SuturedDiagram
    mk = json.dumps(markings or {}, sort_keys=True)
    return cls(tuple(families),
               tuple(tuple(tuple(c) for c in fam) for fam in curves),
               tuple(sorted(crossings, key=lambda c: c.id)),
               tuple(sorted(regions, key=lambda r: r.id)),
               mk)


# ---------------------------------------------------------------------------
# Tracing boundary cycles from a rotation system
# ---------------------------------------------------------------------------

class RotationSystem:
    """Curves plus crossing signs; determines all boundary cycles."""

    def __init__(self, families: Sequence[str], curves, signs: Mapping[str, int]):
        self.families = tuple(families)
        self.curves = tuple(tuple(None if c is None else tuple(c) for c in fam) for fam in curves)
        self.signs = dict(signs)
        self.pos: dict[str, dict[int, tuple[int, int]]] = {}
        for fi, fam in enumerate(self.curves):
            for ci, circ in enumerate(fam):
                for k, c in enumerate(circ or ()):
                    self.pos.setdefault(c, {})[fi] = (ci, k)
        self.seg_ends: dict[str, tuple[str | None, str | None]] = {}
        for fi, fam in enumerate(self.curves):
            for ci, circ in enumerate(fam):
                if circ is None:
                    continue
                n = len(circ)
                if n == 0:
                    self.seg_ends[seg_name(self.families[fi], ci, 0)] = (None, None)
                for k in range(n):
                    self.seg_ends[seg_name(self.families[fi], ci, k)] = (circ[k], circ[(k + 1) % n])
        self._darts = {c: self._make_darts(c) for c in self.pos}
        self._dart_index = {}
        for c, ds in self._darts.items():
            for i, dd in enumerate(ds):
                self._dart_index[(c,) + dd] = i

    def crossing_families(self, c: str) -> tuple[int, int]:
        fs = sorted(self.pos[c])
        if len(fs) != 2:
            raise ValueError(f"crossing {c} must lie on exactly two families")
        return fs[0], fs[1]

    def _make_darts(self, c: str):
        h, v = self.crossing_families(c)
        hc, hk = self.pos[c][h]
        vc, vk = self.pos[c][v]
        hn = len(self.curves[h][hc])
        vn = len(self.curves[v][vc])
        hf, vf = self.families[h], self.families[v]
        east = (seg_name(hf, hc, hk), True)
        west = (seg_name(hf, hc, (hk - 1) % hn), False)
        out = (seg_name(vf, vc, vk), True)
        inn = (seg_name(vf, vc, (vk - 1) % vn), False)
        if self.signs[c] > 0:
            return [east, out, west, inn]
        return [east, inn, west, out]

    def darts(self, c: str):
        return self._darts[c]

    def dart_index(self, c: str, seg: str, outgoing: bool) -> int:
        return self._dart_index[(c, seg, outgoing)]

    def step(self, c: str, q: int) -> tuple[str, tuple[str, int]]:
        """Leave corner (c, q) along dart q; return the arc and the next corner."""
        seg, out = self._darts[c][q]
        start, end = self.seg_ends[seg]
        c2 = end if out else start
        a = self._dart_index[(c2, seg, not out)]
        return ("" if out else "-") + seg, (c2, (a - 1) % 4)

    def orbits(self) -> list[Orbit]:
        seen = set()
        out = []
        for c in sorted(self.pos):
            for q in range(4):
                if (c, q) in seen:
                    continue
                arcs, corners = [], []
                cur = (c, q)
                while True:
                    seen.add(cur)
                    corners.append(cur)
                    arc, nxt = self.step(*cur)
                    arcs.append(arc)
                    if nxt == (c, q):
                        break
                    cur = nxt
                out.append(Orbit(tuple(arcs), tuple(corners)))
        for seg, (s, e) in self.seg_ends.items():
            if s is None:
                out.append(Orbit((seg,), ()))
                out.append(Orbit(("-" + seg,), ()))
        return out


def canonical_orbit(o: Orbit) -> Orbit:
    if len(o.arcs) < 2:
        return o
    n = len(o.arcs)
    best = min(range(n), key=lambda i: o.arcs[i:] + o.arcs[:i])
    return Orbit(o.arcs[best:] + o.arcs[:best], o.corners[best:] + o.corners[:best])


def corner_transition_sign_ok(rs: RotationSystem, arc1: str, arc2: str) -> tuple[str, int] | None:
    """If arc1 then arc2 is a legal turn, return the corner (crossing, quadrant)."""
    seg1, fwd1 = (arc1[1:], False) if arc1.startswith("-") else (arc1, True)
    seg2, fwd2 = (arc2[1:], False) if arc2.startswith("-") else (arc2, True)
    s1, e1 = rs.seg_ends[seg1]
    c = e1 if fwd1 else s1
    s2, e2 = rs.seg_ends[seg2]
    c2 = s2 if fwd2 else e2
    if c is None or c != c2:
        return None
    try:
        a = rs.dart_index(c, seg1, not fwd1)
        l = rs.dart_index(c, seg2, fwd2)
    except KeyError:
        return None
    if l == (a - 1) % 4:
        return (c, l)
    return None


def regions_from_orbits(orbit_region: Sequence[str], orbits: Sequence[Orbit],
                        meta: Mapping[str, tuple[int, tuple[tuple[str, ...], ...]]]) -> list[Region]:
    """Assemble regions; meta gives genus and suture words per region id."""
    words: dict[str, list[tuple[str, ...]]] = {rid: [] for rid in meta}
    for o, rid in zip(orbits, orbit_region):
        words.setdefault(rid, []).append(canonical_rotation(o.arcs))
    out = []
    for rid in sorted(words):
        genus, sut = meta.get(rid, (0, ()))
        ws = sorted(words[rid] + [tuple(w) for w in sut])
        out.append(Region(rid, genus, tuple(ws), bool(sut)))
    return out


def crossings_from_orbits(rs: RotationSystem, orbits: Sequence[Orbit],
                          orbit_region: Sequence[str]) -> list[Crossing]:
    quad: dict[str, list[str | None]] = {c: [None] * 4 for c in rs.pos}
    for o, rid in zip(orbits, orbit_region):
        for c, q in o.corners:
            quad[c][q] = rid
    out = []
    for c in sorted(rs.pos):
        h, v = rs.crossing_families(c)
        out.append(Crossing(c, (rs.families[h], rs.families[v]),
                            (rs.pos[c][h][0], rs.pos[c][v][0]),
                            tuple(quad[c]), rs.signs[c]))
    return out


def rotation_system(diag: CellDiagram) -> RotationSystem:
    return RotationSystem(diag.families, diag.curves, diag.signs())
