"""Operations producing new diagrams from old ones.

Every construction rebuilds boundary words by tracing the new rotation
system and then runs the full validator on the result, so an inconsistent
construction fails loudly instead of yielding a corrupt diagram.
"""
from __future__ import annotations

import json
from typing import Callable, Mapping, Sequence

from ..errors import (InconsistentCellStructure, RegionNotOnBoundary,
                      SubordinateConditionViolated, TranslateConstructionFailed)
from .cells import (LETTER, CellDiagram, Crossing, Orbit, Region, RotationSystem,
                    canonical_orbit, canonical_rotation, crossings_from_orbits,
                    is_suture_arc, make_diagram, parse_arc, rotation_system,
                    seg_name)
from .io import to_dict, validate_diagram

MIRROR = (3, 2, 1, 0)  # NE<->SE, NW<->SW


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------

def _suture_words(r: Region):
    return tuple(w for w in r.boundary_words if is_suture_arc(w[0]))


def _rename_arc(arc: str, fn: Callable[[str, int, int], tuple[str, int, int]]) -> str:
    p = parse_arc(arc)
    if p is None or p[0] == "suture":
        return arc
    _, fam, ci, k, fwd = p
    fam, ci, k = fn(fam, ci, k)
    name = seg_name(fam, ci, k)
    return name if fwd else "-" + name


def _finish(families, curves, crossings, regions, markings) -> CellDiagram:
    diag = make_diagram(families, curves, crossings, regions, markings)
    return validate_diagram(to_dict(diag))


def _orbit_word_region(diag: CellDiagram) -> dict[tuple[str, ...], str]:
    out = {}
    for r in diag.regions:
        for w in r.boundary_words:
            if not is_suture_arc(w[0]):
                out[canonical_rotation(w)] = r.id
    return out


def corner_regions(diag: CellDiagram) -> dict[tuple[str, int], str]:
    return {(c.id, q): c.quadrants[q] for c in diag.crossings for q in range(4)}


def _assemble(rs: RotationSystem, assign: Callable[[Orbit], str | None],
              meta: Mapping[str, tuple[int, tuple]], fresh: Callable[[Orbit, int], str],
              markings: Mapping, families=None, curves=None) -> CellDiagram:
    """Trace rs, group orbits into regions and validate.

    ``assign`` names the region of an orbit (None for a brand-new disk);
    ``meta`` gives (genus, suture words) for regions that are not new disks.
    """
    orbits = [canonical_orbit(o) for o in rs.orbits()]
    labels = []
    n_new = 0
    for o in orbits:
        rid = assign(o)
        if rid is None:
            rid = fresh(o, n_new)
            n_new += 1
        labels.append(rid)
    words: dict[str, list] = {}
    for o, rid in zip(orbits, labels):
        words.setdefault(rid, []).append(canonical_rotation(o.arcs))
    for rid in meta:
        words.setdefault(rid, [])
    regions = []
    for rid in sorted(words):
        genus, sut = meta.get(rid, (0, ()))
        ws = sorted(words[rid] + [tuple(w) for w in sut])
        if not ws:
            continue
        regions.append(Region(rid, genus, tuple(ws), bool(sut)))
    crossings = crossings_from_orbits(rs, orbits, labels)
    fams = families if families is not None else rs.families
    crv = curves if curves is not None else rs.curves
    return _finish(fams, crv, crossings, regions, markings)


def _orbit_label_from_corners(o: Orbit, table: Mapping[tuple[str, int], str]) -> str | None:
    found = {table[c] for c in o.corners if c in table}
    if len(found) > 1:
        raise InconsistentCellStructure(f"boundary cycle {o.arcs} meets several regions {sorted(found)}")
    return found.pop() if found else None


# ---------------------------------------------------------------------------
# orientation reversal, disjoint union
# ---------------------------------------------------------------------------

def reverse_orientation(diag: CellDiagram) -> CellDiagram:
    """Reverse the orientation of Sigma.

    Curves keep their direction, so the horizontal curve still points east
    and the picture is reflected in it: every boundary word is reversed and
    quadrants are exchanged NE<->SE, NW<->SW.
    """
    crossings = [Crossing(c.id, c.families, c.circles,
                          tuple(c.quadrants[MIRROR[q]] for q in range(4)), -c.sign)
                 for c in diag.crossings]
    regions = []
    for r in diag.regions:
        ws = []
        for w in r.boundary_words:
            if is_suture_arc(w[0]):
                ws.append(w)
            else:
                ws.append(canonical_rotation(tuple(a[1:] if a.startswith("-") else "-" + a
                                                   for a in reversed(w))))
        regions.append(Region(r.id, r.genus, tuple(sorted(ws)), r.touches_suture))
    mk = diag.markings
    mk["orientation_reversed"] = not mk.get("orientation_reversed", False)
    if not mk["orientation_reversed"]:
        del mk["orientation_reversed"]
    return _finish(diag.families, diag.curves, crossings, regions, mk)


def union_label(side: int, name: str) -> str:
    return f"{'LR'[side]}.{name}"


def union_suture(side: int, name: str) -> str:
    return f"s{'LR'[side]}_{name[1:]}"


def disjoint_union(a: CellDiagram, b: CellDiagram) -> CellDiagram:
    """Relabelled disjoint union: ids of a get prefix 'L.', those of b 'R.'."""
    if a.families != b.families:
        raise ValueError("cannot unite diagrams with different curve families")
    curves = []
    for fa, fb in zip(a.curves, b.curves):
        curves.append([[union_label(0, c) for c in circ] for circ in fa]
                      + [[union_label(1, c) for c in circ] for circ in fb])
    crossings, regions = [], []
    for side, src in ((0, a), (1, b)):
        shift = 0 if side == 0 else a.d
        for c in src.crossings:
            crossings.append(Crossing(union_label(side, c.id), c.families,
                                      (c.circles[0] + shift, c.circles[1] + shift),
                                      tuple(union_label(side, q) for q in c.quadrants), c.sign))
        for r in src.regions:
            ws = []
            for w in r.boundary_words:
                if is_suture_arc(w[0]):
                    ws.append((union_suture(side, w[0]),))
                else:
                    ws.append(canonical_rotation(tuple(
                        _rename_arc(x, lambda f, ci, k: (f, ci + shift, k)) for x in w)))
            regions.append(Region(union_label(side, r.id), r.genus, tuple(sorted(ws)),
                                  r.touches_suture))
    mk = {"union": {"left": a.markings, "right": b.markings, "left_d": a.d}}
    return _finish(a.families, curves, crossings, regions, mk)


def boundary_sum(a: CellDiagram, b: CellDiagram, ra: str, rb: str, tag: str = "T") -> CellDiagram:
    """Join b to a by a band between suture regions ra and rb.

    Ids of a are kept; ids of b get the prefix ``tag + "."`` and its curves
    are numbered after those of a.  One suture circle of each region is
    merged into one, so the merged region has genus g(ra) + g(rb).
    """
    if a.families != b.families:
        raise ValueError("cannot join diagrams with different curve families")
    if not tag.isalnum():
        raise ValueError("tag must be alphanumeric")
    for diag, r in ((a, ra), (b, rb)):
        if r not in diag.region_map or not diag.region_map[r].touches_suture:
            raise RegionNotOnBoundary(f"{r} is not a suture region")
    lab = lambda x: f"{tag}.{x}"
    shift = a.d
    curves = [list(map(list, fa)) + [[lab(c) for c in circ] for circ in fb]
              for fa, fb in zip(a.curves, b.curves)]
    crossings = list(a.crossings)
    for c in b.crossings:
        crossings.append(Crossing(lab(c.id), c.families, (c.circles[0] + shift, c.circles[1] + shift),
                                  tuple(ra if q == rb else lab(q) for q in c.quadrants), c.sign))
    rename = lambda w: canonical_rotation(tuple(_rename_arc(x, lambda f, ci, k: (f, ci + shift, k))
                                               for x in w))
    regions = []
    merged = None
    for r in a.regions:
        if r.id == ra:
            merged = r
        else:
            regions.append(r)
    other = b.region_map[rb]
    ws = list(merged.boundary_words)
    dropped = False
    for w in other.boundary_words:
        if is_suture_arc(w[0]):
            if not dropped:
                dropped = True
                continue
            ws.append((f"s{tag}_{w[0][1:]}",))
        else:
            ws.append(rename(w))
    regions.append(Region(ra, merged.genus + other.genus, tuple(sorted(ws)), True))
    for r in b.regions:
        if r.id == rb:
            continue
        words = tuple(sorted((f"s{tag}_{w[0][1:]}",) if is_suture_arc(w[0]) else rename(w)
                             for w in r.boundary_words))
        regions.append(Region(lab(r.id), r.genus, words, r.touches_suture))
    return _finish(a.families, curves, crossings, regions, a.markings)


# ---------------------------------------------------------------------------
# one-handle annulus
# ---------------------------------------------------------------------------

def _fresh_id(used, base):
    if base not in used:
        return base
    k = 1
    while f"{base}_{k}" in used:
        k += 1
    return f"{base}_{k}"


def _annulus_orbits(d: int, theta: str, low: str):
    """Sign choice and the four boundary cycles of the standard annulus piece.

    Returns (signs, bigons, ends) where both bigons have their source
    corner at theta.
    """
    for st in (1, -1):
        signs = {theta: st, low: -st}
        pad = [None] * d
        rs = RotationSystem(("alpha", "beta"), [pad + [[theta, low]], pad + [[theta, low]]], signs)
        orbits = [canonical_orbit(o) for o in rs.orbits()]
        if len(orbits) != 4:
            continue
        for i in range(4):
            for j in range(i + 1, 4):
                bi, bj = orbits[i], orbits[j]
                if {a.lstrip("-") for a in bi.arcs} & {a.lstrip("-") for a in bj.arcs}:
                    continue
                if all(_source_corner(o) == theta for o in (bi, bj)):
                    ends = [orbits[k] for k in range(4) if k not in (i, j)]
                    return signs, (bi, bj), ends
    raise AssertionError("standard annulus piece could not be realised")


def _source_corner(o: Orbit, first_letter: str = "a") -> str | None:
    """Crossing where the cycle arrives along the second family and leaves along the first."""
    n = len(o.arcs)
    for i in range(n):
        leave = o.arcs[i].lstrip("-")[0]
        arrive = o.arcs[i - 1].lstrip("-")[0]
        if leave == first_letter and arrive != first_letter:
            return o.corners[i][0]
    return None


def attach_onehandle_annulus(diag: CellDiagram, r1: str, r2: str) -> CellDiagram:
    """Remove a disk from r1 and from r2 and glue in the standard annulus piece."""
    if diag.is_triple:
        raise ValueError("one-handles are attached to (alpha, beta) diagrams")
    for r in (r1, r2):
        if r not in diag.region_map:
            raise RegionNotOnBoundary(f"unknown region {r}")
        if not diag.region_map[r].touches_suture:
            raise RegionNotOnBoundary(f"region {r} does not touch the suture")
    d = diag.d
    used = set(diag.crossing_map) | set(diag.region_map)
    theta = _fresh_id(used, f"th{d}")
    low = _fresh_id(used | {theta}, f"lo{d}")
    signs, bigons, ends = _annulus_orbits(d, theta, low)
    b_ids = [_fresh_id(used | {theta, low}, f"B{d}.0")]
    b_ids.append(_fresh_id(used | {theta, low, b_ids[0]}, f"B{d}.1"))
    quad: dict[str, list] = {theta: [None] * 4, low: [None] * 4}
    for o, rid in zip(list(bigons) + ends, b_ids + [r1, r2]):
        for c, q in o.corners:
            quad[c][q] = rid
    crossings = list(diag.crossings)
    for c in (theta, low):
        crossings.append(Crossing(c, ("alpha", "beta"), (d, d), tuple(quad[c]), signs[c]))
    extra = {r1: [ends[0].arcs]}
    extra.setdefault(r2, []).append(ends[1].arcs)
    regions = []
    for r in diag.regions:
        ws = list(r.boundary_words) + [canonical_rotation(w) for w in extra.get(r.id, [])]
        regions.append(Region(r.id, r.genus, tuple(sorted(ws)), r.touches_suture))
    for o, rid in zip(bigons, b_ids):
        regions.append(Region(rid, 0, (canonical_rotation(o.arcs),), False))
    curves = [list(diag.alphas) + [[theta, low]], list(diag.betas) + [[theta, low]]]
    mk = diag.markings
    mk.setdefault("onehandles", []).append(
        {"alpha": d, "beta": d, "theta": theta, "low": low, "regions": [r1, r2],
         "bigons": b_ids})
    return _finish(diag.families, curves, crossings, regions, mk)


def annulus_marking(diag: CellDiagram, which: int = -1) -> dict:
    hs = diag.markings.get("onehandles", [])
    if not hs:
        raise KeyError("diagram has no marked one-handle annulus")
    return hs[which]


def detach_annulus(diag: CellDiagram, ai: int, bj: int, theta: str, low: str,
                   bigons: Sequence[str]) -> CellDiagram:
    """Inverse of attach_onehandle_annulus (caller has checked the piece)."""
    drop = {theta, low}
    dead_regions = set(bigons)

    def shift(fam, ci, k):
        if fam == "alpha" and ci > ai:
            return fam, ci - 1, k
        if fam == "beta" and ci > bj:
            return fam, ci - 1, k
        return fam, ci, k

    dead_letters = {f"a{ai}.", f"b{bj}."}
    regions = []
    for r in diag.regions:
        if r.id in dead_regions:
            continue
        ws = []
        for w in r.boundary_words:
            if not is_suture_arc(w[0]) and all(x.lstrip("-").startswith(tuple(dead_letters)) for x in w):
                continue
            ws.append(canonical_rotation(tuple(_rename_arc(x, shift) for x in w)))
        regions.append(Region(r.id, r.genus, tuple(sorted(ws)), r.touches_suture))
    crossings = []
    for c in diag.crossings:
        if c.id in drop:
            continue
        ca, cb = c.circles
        crossings.append(Crossing(c.id, c.families, (ca - (ca > ai), cb - (cb > bj)),
                                  c.quadrants, c.sign))
    alphas = [c for i, c in enumerate(diag.alphas) if i != ai]
    betas = [c for i, c in enumerate(diag.betas) if i != bj]
    mk = diag.markings
    hs = [h for h in mk.get("onehandles", []) if h.get("theta") != theta]
    for h in hs:
        h["alpha"] -= h["alpha"] > ai
        h["beta"] -= h["beta"] > bj
    if hs:
        mk["onehandles"] = hs
    else:
        mk.pop("onehandles", None)
    return _finish(diag.families, [alphas, betas], crossings, regions, mk)


# ---------------------------------------------------------------------------
# erasing a family
# ---------------------------------------------------------------------------

def region_merge_map(diag: CellDiagram, family: str) -> dict[str, str]:
    """Region id -> id of the region containing it once ``family`` is erased."""
    parent = {r.id: r.id for r in diag.regions}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, (fam, ci, k, a, b) in diag.segments.items():
        if fam != family:
            continue
        l, r = diag.segment_sides[s]
        ra, rb = find(l), find(r)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return {r: find(r) for r in parent}


def erase_family(diag: CellDiagram, family: str) -> CellDiagram:
    """Sub-diagram obtained by forgetting one family of a triple.

    The two surviving families are renamed alpha, beta (in order); crossing
    ids are preserved and regions cut apart by the erased curves are merged
    (a merged region keeps the smallest id of its pieces).
    """
    if family not in diag.families:
        raise ValueError(f"no family {family}")
    keep = [f for f in diag.families if f != family]
    ren = dict(zip(keep, ("alpha", "beta")))
    merged = region_merge_map(diag, family)
    find = merged.__getitem__
    groups: dict[str, list[str]] = {}
    for r in diag.regions:
        groups.setdefault(find(r.id), []).append(r.id)
    curves = [[[c for c in circ] for circ in diag.family(f)] for f in keep]
    cset = {c.id for c in diag.crossings if family not in c.families}
    curves = [[[c for c in circ if c in cset] for circ in fam] for fam in curves]
    signs = {c.id: c.sign for c in diag.crossings if c.id in cset}
    rs = RotationSystem(("alpha", "beta"), curves, signs)
    table = {(c.id, q): find(c.quadrants[q]) for c in diag.crossings if c.id in cset for q in range(4)}
    old_seg_region = {}
    for f, nf in ren.items():
        for ci, circ in enumerate(diag.family(f)):
            newcirc = [c for c in circ if c in cset]
            if not newcirc:
                l, r = diag.segment_sides[seg_name(f, ci, 0)]
                old_seg_region[seg_name(nf, ci, 0)] = (find(l), find(r))

    def assign(o: Orbit):
        rid = _orbit_label_from_corners(o, table)
        if rid is None and o.arcs:
            a = o.arcs[0]
            l, r = old_seg_region[a.lstrip("-")]
            rid = r if a.startswith("-") else l
        return rid

    # genus of merged regions from Euler characteristics
    orbits = [canonical_orbit(o) for o in rs.orbits()]
    count: dict[str, int] = {}
    for o in orbits:
        rid = assign(o)
        count[rid] = count.get(rid, 0) + 1
    inner_seg: dict[str, int] = {}
    for s, (fam, ci, k, a, b) in diag.segments.items():
        if fam == family and a is not None:
            g = find(diag.segment_sides[s][0])
            inner_seg[g] = inner_seg.get(g, 0) + 1
    meta = {}
    for g, members in groups.items():
        chi = sum(diag.region_map[m].euler_characteristic for m in members) - inner_seg.get(g, 0)
        sut = tuple(w for m in members for w in _suture_words(diag.region_map[m]))
        b = count.get(g, 0) + len(sut)
        twice = 2 - chi - b
        if twice < 0 or twice % 2:
            raise InconsistentCellStructure(f"merged region {g} is not a surface (chi={chi}, b={b})")
        meta[g] = (twice // 2, sut)

    def fresh(o, n):
        raise InconsistentCellStructure("erasing a family produced an unlabelled boundary cycle")

    mk = diag.markings
    mk = {k: v for k, v in mk.items() if k in ("orientation_reversed",)}
    mk["erased"] = family
    return _assemble(rs, assign, meta, fresh, mk)


# ---------------------------------------------------------------------------
# triple construction
# ---------------------------------------------------------------------------

def _side_quadrants(sign: int, right: bool) -> tuple[int, int]:
    """Quadrants on the right/left of the vertical curve at a crossing."""
    if sign > 0:
        return (0, 3) if right else (1, 2)
    return (1, 2) if right else (0, 3)


def _insert_surgery_curves(diag: CellDiagram, surgery: Mapping[int, Sequence[Mapping]]):
    """Add user-specified delta curves; returns (curves, signs, table, meta, regions info).

    Each step dict has keys ``segment`` (a segment of the input diagram),
    ``cross`` ('left-to-right' or 'right-to-left', relative to the segment's
    direction) and optional ``at`` in (0, 1) ordering several crossings on
    the same segment.
    """
    d = diag.d
    new_on_seg: dict[str, list[tuple[float, str]]] = {}
    delta_curves: list = [None] * d
    signs = diag.signs()
    new_side = {}  # new crossing -> (left region, right region) of the old segment
    arcs_in: dict[str, int] = {}
    used = set(diag.crossing_map)
    for i in sorted(surgery):
        steps = list(surgery[i])
        if not 0 <= i < d:
            raise SubordinateConditionViolated(f"surgery index {i} out of range")
        if not steps:
            raise SubordinateConditionViolated(f"surgery curve {i} has no crossings")
        circ = []
        beta_hits = 0
        regions_seq = []
        for n, st in enumerate(steps):
            seg = st.get("segment")
            if seg not in diag.segments:
                raise SubordinateConditionViolated(f"surgery curve {i}: unknown segment {seg}")
            fam, ci, k, a, b = diag.segments[seg]
            if fam == "beta":
                if ci != i:
                    raise SubordinateConditionViolated(
                        f"surgery curve delta_{i} meets beta_{ci}; it may only meet beta_{i}")
                beta_hits += 1
            direction = st.get("cross", "left-to-right")
            if direction not in ("left-to-right", "right-to-left"):
                raise SubordinateConditionViolated(f"bad crossing direction {direction}")
            cid = st.get("id") or f"D{i}.{n}"
            if cid in used:
                raise SubordinateConditionViolated(f"crossing id {cid} already used")
            used.add(cid)
            at = float(st.get("at", 0.5))
            new_on_seg.setdefault(seg, []).append((at, cid))
            signs[cid] = -1 if direction == "left-to-right" else 1
            l, r = diag.segment_sides[seg]
            new_side[cid] = (l, r)
            src, dst = (l, r) if direction == "left-to-right" else (r, l)
            regions_seq.append((src, dst))
            circ.append(cid)
        if beta_hits != 1:
            raise SubordinateConditionViolated(
                f"surgery curve delta_{i} meets beta_{i} in {beta_hits} points, expected exactly 1")
        for n in range(len(steps)):
            here = regions_seq[n][1]
            nxt = regions_seq[(n + 1) % len(steps)][0]
            if here != nxt:
                raise SubordinateConditionViolated(
                    f"surgery curve delta_{i}: step {n} ends in {here} but step {n + 1} starts in {nxt}")
            arcs_in[here] = arcs_in.get(here, 0) + 1
        delta_curves[i] = circ
    curves = []
    for fam, circs in zip(diag.families, diag.curves):
        out = []
        for ci, circ in enumerate(circs):
            if not circ:
                seg = seg_name(fam, ci, 0)
                out.append([c for _, c in sorted(new_on_seg.get(seg, []))])
                continue
            new = []
            for k, c in enumerate(circ):
                new.append(c)
                seg = seg_name(fam, ci, k)
                new.extend(c2 for _, c2 in sorted(new_on_seg.get(seg, [])))
            out.append(new)
        curves.append(out)
    curves.append(delta_curves)
    table = corner_regions(diag)
    for cid, (l, r) in new_side.items():
        table[(cid, 0)] = table[(cid, 1)] = l
        table[(cid, 2)] = table[(cid, 3)] = r
    return curves, signs, table, arcs_in


def build_translate_triple(diag: CellDiagram, surgery_deltas: Mapping[int, Sequence[Mapping]] | None = None
                           ) -> CellDiagram:
    """Triple (alpha, beta, delta): delta_i is a translate of beta_i unless surgered.

    The translate of beta_i runs along its right-hand side, crossing every
    alpha arc that beta_i crosses, and crosses beta_i twice inside the
    segment that closes its circuit.  Thin regions between beta_i and
    delta_i are new disks; every old region keeps its genus.
    """
    if diag.is_triple:
        raise ValueError("input must be an (alpha, beta) diagram")
    surgery = {int(k): v for k, v in (surgery_deltas or {}).items()}
    d = diag.d
    curves, signs, table, arcs_in = _insert_surgery_curves(diag, surgery)
    # stage 1: surgery curves
    meta = {r.id: (r.genus, _suture_words(r)) for r in diag.regions}
    word_region = _orbit_word_region(diag)
    rs = RotationSystem(("alpha", "beta", "delta"), curves, signs)
    orbits = [canonical_orbit(o) for o in rs.orbits()]
    labels = []
    for o in orbits:
        rid = _orbit_label_from_corners(o, table)
        if rid is None:
            rid = word_region.get(canonical_rotation(o.arcs))
        if rid is None:
            raise TranslateConstructionFailed(f"could not place boundary cycle {o.arcs}")
        labels.append(rid)
    by_region: dict[str, list[int]] = {}
    for n, rid in enumerate(labels):
        by_region.setdefault(rid, []).append(n)
    stage_meta = {}
    for rid, members in by_region.items():
        r = diag.region_map[rid]
        k = arcs_in.get(rid, 0)
        curve_words = len(r.boundary_words) - len(_suture_words(r))
        if k == 0:
            stage_meta[rid] = meta[rid]
            continue
        if r.is_disk:
            if len(members) != 1 + k:
                raise TranslateConstructionFailed(f"arcs in disk region {rid} do not split it consistently")
            for j, n in enumerate(members):
                nid = rid if j == 0 else f"{rid}.{j}"
                labels[n] = nid
                stage_meta[nid] = (0, ())
        elif len(members) == curve_words - k:
            stage_meta[rid] = meta[rid]
        else:
            raise TranslateConstructionFailed(
                f"region {rid} is not a disk and the surgery arcs inside it would split it")
    for rid in meta:
        if rid not in by_region:
            stage_meta[rid] = meta[rid]
    table = {}
    for o, rid in zip(orbits, labels):
        for c in o.corners:
            table[c] = rid
    cornerless = {o.arcs[0]: rid for o, rid in zip(orbits, labels) if not o.corners}

    # stage 2: translates
    translate_idx = [j for j in range(d) if j not in surgery]
    used = set(signs) | set(stage_meta)
    alphas = [list(c) for c in curves[0]]
    betas = [list(c) for c in curves[1]]
    deltas = list(curves[2])
    anchors = dict(table)
    thetas = {}
    for j in translate_idx:
        circ = betas[j]
        if any(c in rs.pos and 2 in rs.pos[c] for c in circ):
            raise SubordinateConditionViolated(f"beta_{j} meets a surgery curve but is to be translated")
        prime = {}
        for c in circ:
            cp = _fresh_id(used, f"{c}'")
            used.add(cp)
            prime[c] = cp
            signs[cp] = signs[c]
        ta = _fresh_id(used, f"T{j}")
        used.add(ta)
        tb = _fresh_id(used, f"U{j}")
        used.add(tb)
        signs[ta], signs[tb] = -1, 1
        thetas[j] = (ta, tb)
        for c in circ:
            ai = rs.pos[c][0][0]
            pos_ = alphas[ai].index(c)
            if signs[c] > 0:
                alphas[ai].insert(pos_ + 1, prime[c])
            else:
                alphas[ai].insert(pos_, prime[c])
            for q in _side_quadrants(signs[c], right=True):
                anchors.pop((c, q), None)
                anchors[(prime[c], q)] = table[(c, q)]
        if not circ:
            seg = seg_name("beta", j, 0)
            anchors[(tb, 1)] = cornerless.pop(seg)
            anchors[(tb, 3)] = cornerless.pop("-" + seg)
        betas[j] = circ + [tb, ta]
        deltas[j] = [ta] + [prime[c] for c in circ] + [tb]
    rs2 = RotationSystem(("alpha", "beta", "delta"), [alphas, betas, deltas], signs)

    def assign(o: Orbit):
        rid = _orbit_label_from_corners(o, anchors)
        if rid is None and not o.corners:
            rid = cornerless.get(o.arcs[0])
        return rid

    def fresh(o: Orbit, n: int) -> str:
        return _fresh_id(used, f"t{n}")

    mk = diag.markings
    mk["triple"] = {
        "translate_normal_form": "two-bigon",
        "surgery_indices": sorted(surgery),
        "translate_indices": translate_idx,
        "translate_points": {str(j): list(thetas[j]) for j in translate_idx},
    }
    return _assemble(rs2, assign, stage_meta, fresh, mk)


def swap_beta_delta(triple: CellDiagram) -> CellDiagram:
    """The triple (alpha, delta, beta): exchanges the roles of the last two families.

    At a beta-delta crossing the horizontal curve changes, so the quadrant
    labels rotate by a quarter turn (direction set by the sign).
    """
    if not triple.is_triple:
        raise ValueError("need a triple diagram")
    swap = {"b": "d", "d": "b"}

    def arc(a: str) -> str:
        if is_suture_arc(a):
            return a
        neg = a.startswith("-")
        body = a.lstrip("-")
        return ("-" if neg else "") + swap.get(body[0], body[0]) + body[1:]

    crossings = []
    for c in triple.crossings:
        if c.families == ("beta", "delta"):
            q = c.quadrants
            quads = (q[1], q[2], q[3], q[0]) if c.sign > 0 else (q[3], q[0], q[1], q[2])
            crossings.append(Crossing(c.id, c.families, (c.circles[1], c.circles[0]), quads, -c.sign))
        else:
            fam = {"beta": "delta", "delta": "beta"}.get(c.families[1], c.families[1])
            crossings.append(Crossing(c.id, (c.families[0], fam), c.circles, c.quadrants, c.sign))
    regions = [Region(r.id, r.genus, tuple(sorted(canonical_rotation(tuple(arc(a) for a in w))
                                                  for w in r.boundary_words)), r.touches_suture)
               for r in triple.regions]
    mk = triple.markings
    if "triple" in mk:
        mk["triple"] = dict(mk["triple"], swapped=not mk["triple"].get("swapped", False))
    curves = [triple.alphas, triple.deltas, triple.betas]
    return _finish(triple.families, curves, crossings, regions, mk)


def translate_correspondence(triple: CellDiagram) -> dict[str, str]:
    """alpha-beta crossing -> its alpha-delta companion on translate indices."""
    out = {}
    tr = set(triple.markings.get("triple", {}).get("translate_indices", []))
    for c in triple.crossings:
        if c.families == ("alpha", "beta") and c.circles[1] in tr:
            circ = triple.alphas[c.circles[0]]
            i = circ.index(c.id)
            cand = circ[(i + 1) % len(circ)] if c.sign > 0 else circ[i - 1]
            out[c.id] = cand
    return out


# ---------------------------------------------------------------------------
# niceness
# ---------------------------------------------------------------------------

def is_nice(diag: CellDiagram) -> tuple[bool, str | None]:
    """True iff every interior region is a disk with 2 or 4 corners."""
    for r in diag.regions:
        if r.touches_suture:
            continue
        if not (r.genus == 0 and len(r.boundary_words) == 1 and r.corner_count in (2, 4)):
            return False, r.id
    return True, None
