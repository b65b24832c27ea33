"""Parsing, validation and serialization of the diagram file format."""
from __future__ import annotations

import json
from collections import Counter
from typing import Any, Mapping

from ..errors import InconsistentCellStructure, MalformedInput, UnbalancedDiagram
from ..linalg import rational_rank
from .cells import (FAMILIES, CellDiagram, Crossing, LETTER, QUADRANTS, Region,
                    RotationSystem, canonical_rotation, corner_transition_sign_ok,
                    is_suture_arc, make_diagram, parse_arc, seg_name)

FIELD_FOR = {"alpha": "alphas", "beta": "betas", "delta": "deltas"}


def _load(raw) -> dict:
    if isinstance(raw, CellDiagram):
        return to_dict(raw)
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"not valid JSON: {exc}") from None
    if not isinstance(raw, Mapping):
        raise MalformedInput("diagram must be a mapping")
    return dict(raw)


def _str_list(x, what):
    if not isinstance(x, list) or not all(isinstance(s, str) for s in x):
        raise MalformedInput(f"{what} must be a list of strings")
    return x


def _parse_structure(raw: dict):
    for key in ("d", "alphas", "betas", "crossings", "regions"):
        if key not in raw:
            raise MalformedInput(f"missing field '{key}'")
    d = raw["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise MalformedInput("'d' must be a nonnegative integer")
    families = ["alpha", "beta"] + (["delta"] if "deltas" in raw else [])
    curves = []
    for fam in families:
        circs = raw[FIELD_FOR[fam]]
        if not isinstance(circs, list):
            raise MalformedInput(f"'{FIELD_FOR[fam]}' must be a list of circuits")
        curves.append([_str_list(c, f"circuit in {FIELD_FOR[fam]}") for c in circs])
    sizes = {fam: len(c) for fam, c in zip(families, curves)}
    if len(set(sizes.values())) != 1:
        raise UnbalancedDiagram(f"curve families have different sizes {sizes}")
    if sizes["alpha"] != d:
        raise MalformedInput(f"'d' = {d} but there are {sizes['alpha']} alpha circuits")
    cr = raw["crossings"]
    if not isinstance(cr, Mapping):
        raise MalformedInput("'crossings' must be a mapping id -> [NE, NW, SW, SE]")
    quads = {}
    for cid, q in cr.items():
        _str_list(q, f"quadrants of {cid}")
        if len(q) != 4:
            raise MalformedInput(f"crossing {cid} needs exactly 4 quadrant regions")
        quads[str(cid)] = tuple(q)
    rg = raw["regions"]
    if not isinstance(rg, Mapping):
        raise MalformedInput("'regions' must be a mapping")
    regions = {}
    for rid, body in rg.items():
        if not isinstance(body, Mapping):
            raise MalformedInput(f"region {rid} must be a mapping")
        g = body.get("genus", 0)
        if not isinstance(g, int) or isinstance(g, bool):
            raise MalformedInput(f"region {rid}: genus must be an integer")
        words = body.get("boundary_words")
        if not isinstance(words, list):
            raise MalformedInput(f"region {rid}: boundary_words must be a list")
        words = [tuple(_str_list(w, f"word of region {rid}")) for w in words]
        ts = body.get("touches_suture", False)
        if not isinstance(ts, bool):
            raise MalformedInput(f"region {rid}: touches_suture must be boolean")
        regions[str(rid)] = (g, words, ts)
    markings = raw.get("markings", {}) or {}
    if not isinstance(markings, Mapping):
        raise MalformedInput("'markings' must be a mapping")
    chi = raw.get("euler_characteristic")
    return families, curves, quads, regions, dict(markings), chi


def validate_diagram(raw: Any) -> CellDiagram:
    """Parse and validate a diagram (pair or triple); see module docs for rules."""
    families, curves, quads, regions, markings, chi = _parse_structure(_load(raw))

    # curve membership
    where: dict[str, list[tuple[int, int]]] = {}
    for fi, fam in enumerate(curves):
        for ci, circ in enumerate(fam):
            for c in circ:
                where.setdefault(c, []).append((fi, ci))
    for c, locs in where.items():
        if c not in quads:
            raise InconsistentCellStructure(f"crossing {c} appears in a circuit but is not declared")
        fams = [f for f, _ in locs]
        if len(locs) != 2 or fams[0] == fams[1]:
            raise InconsistentCellStructure(
                f"crossing {c} must appear exactly once on exactly two curve families")
    for c in quads:
        if c not in where:
            raise InconsistentCellStructure(f"crossing {c} does not appear on any curve")
    for c, q in quads.items():
        for r in q:
            if r not in regions:
                raise InconsistentCellStructure(f"crossing {c} names unknown region {r}")

    # regions and words
    seg_ends = {}
    for fi, fam in enumerate(curves):
        for ci, circ in enumerate(fam):
            n = len(circ)
            if n == 0:
                seg_ends[seg_name(families[fi], ci, 0)] = (None, None)
            for k in range(n):
                seg_ends[seg_name(families[fi], ci, k)] = (circ[k], circ[(k + 1) % n])
    arc_count = Counter()
    sutures = Counter()
    for rid, (g, words, ts) in regions.items():
        if g < 0:
            raise InconsistentCellStructure(f"region {rid} has negative genus")
        if not words:
            raise UnbalancedDiagram(f"region {rid} is a closed surface component")
        has_sut = False
        for w in words:
            if not w:
                raise MalformedInput(f"region {rid} has an empty boundary word")
            for a in w:
                p = parse_arc(a)
                if p is None:
                    raise MalformedInput(f"region {rid}: unrecognised arc '{a}'")
                if p[0] == "suture":
                    has_sut = True
                    sutures[a] += 1
                    if len(w) != 1:
                        raise InconsistentCellStructure(
                            f"suture arc {a} must form a boundary word on its own")
                else:
                    base = a.lstrip("-")
                    if base not in seg_ends:
                        raise InconsistentCellStructure(f"region {rid}: unknown segment {base}")
                    arc_count[a] += 1
        if has_sut != ts:
            raise InconsistentCellStructure(f"region {rid}: touches_suture flag disagrees with its words")
    for s in seg_ends:
        if arc_count[s] != 1 or arc_count["-" + s] != 1:
            raise InconsistentCellStructure(
                f"segment {s} must appear exactly twice with opposite orientations")
    for a, k in sutures.items():
        if k != 1:
            raise InconsistentCellStructure(f"suture {a} appears {k} times")

    # crossing signs from corner transitions
    signs = {}
    transitions: dict[str, list[tuple[str, str, str]]] = {c: [] for c in quads}
    for rid, (g, words, ts) in regions.items():
        for w in words:
            if len(w) < 2:
                continue
            for i in range(len(w)):
                a1, a2 = w[i], w[(i + 1) % len(w)]
                s1 = a1.lstrip("-")
                c = seg_ends[s1][1] if not a1.startswith("-") else seg_ends[s1][0]
                if c is None:
                    raise InconsistentCellStructure(f"region {rid}: curve without crossings inside a longer word")
                transitions[c].append((a1, a2, rid))
    base_signs = dict.fromkeys(quads, 1)
    for c, trs in transitions.items():
        if len(trs) != 4:
            raise InconsistentCellStructure(f"crossing {c} has {len(trs)} corners in boundary words, expected 4")
        good = []
        for sgn in (1, -1):
            trial = dict(base_signs)
            trial[c] = sgn
            rs = RotationSystem(families, curves, trial)
            corners = []
            for a1, a2, rid in trs:
                cc = corner_transition_sign_ok(rs, a1, a2)
                if cc is None:
                    break
                corners.append((cc[1], rid))
            else:
                if sorted(q for q, _ in corners) == [0, 1, 2, 3]:
                    good.append((sgn, corners))
        if len(good) != 1:
            raise InconsistentCellStructure(f"boundary words at crossing {c} do not describe a transverse crossing")
        sgn, corners = good[0]
        signs[c] = sgn
        for q, rid in corners:
            if quads[c][q] != rid:
                raise InconsistentCellStructure(
                    f"crossing {c}: quadrant {QUADRANTS[q]} is {quads[c][q]} but the boundary words give {rid}")

    rs = RotationSystem(families, curves, signs)
    traced = Counter(canonical_rotation(o.arcs) for o in rs.orbits())
    declared = Counter(canonical_rotation(w) for _, words, _ in regions.values()
                       for w in words if not is_suture_arc(w[0]))
    if traced != declared:
        raise InconsistentCellStructure("boundary words are not the boundary cycles of the curve system")

    crossings = []
    for c in sorted(quads):
        fs = sorted(where[c])
        crossings.append(Crossing(c, (families[fs[0][0]], families[fs[1][0]]),
                                  (fs[0][1], fs[1][1]), quads[c], signs[c]))
    regs = [Region(rid, g, tuple(sorted(canonical_rotation(w) for w in words)), ts)
            for rid, (g, words, ts) in regions.items()]
    diag = make_diagram(families, curves, crossings, regs, markings)
    check_topology(diag, chi)
    return diag


def components(diag: CellDiagram) -> list[list[str]]:
    """Connected components of the surface as lists of region ids."""
    parent = {r.id: r.id for r in diag.regions}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, (l, r) in diag.segment_sides.items():
        parent[find(l)] = find(r)
    for c in diag.crossings:
        for q in c.quadrants:
            parent[find(q)] = find(c.quadrants[0])
    groups: dict[str, list[str]] = {}
    for r in sorted(parent):
        groups.setdefault(find(r), []).append(r)
    return sorted(groups.values())


def region_boundary_matrix(diag: CellDiagram) -> tuple[list[str], list[list[int]]]:
    """Rows: boundaries of interior regions in segment coordinates."""
    segs = sorted(diag.segments)
    idx = {s: i for i, s in enumerate(segs)}
    rows = []
    for r in diag.regions:
        if r.touches_suture:
            continue
        v = [0] * len(segs)
        for w in r.boundary_words:
            for a in w:
                if a.startswith("-"):
                    v[idx[a[1:]]] -= 1
                else:
                    v[idx[a]] += 1
        rows.append(v)
    return segs, rows


def curve_vector(diag: CellDiagram, family: str, circle: int, segs: list[str]) -> list[int]:
    n = max(1, len(diag.family(family)[circle]))
    names = {seg_name(family, circle, k) for k in range(n)}
    return [1 if s in names else 0 for s in segs]


def family_independent(diag: CellDiagram, family: str) -> bool:
    segs, B = region_boundary_matrix(diag)
    A = [curve_vector(diag, family, i, segs) for i in range(len(diag.family(family)))]
    return rational_rank(A + B) - rational_rank(B) == len(A)


def check_topology(diag: CellDiagram, declared_chi=None) -> None:
    segs = diag.segments
    for comp in components(diag):
        cs = set(comp)
        chi = sum(diag.region_map[r].euler_characteristic for r in comp)
        e = sum(1 for s, (fam, ci, k, a, b) in segs.items()
                if a is not None and diag.segment_sides[s][0] in cs)
        v = sum(1 for c in diag.crossings if c.quadrants[0] in cs)
        chi = chi - e + v
        b = sum(1 for r in comp for w in diag.region_map[r].boundary_words if is_suture_arc(w[0]))
        if b == 0:
            raise UnbalancedDiagram(f"surface component containing {comp[0]} has no suture (closed component)")
        twice_g = 2 - chi - b
        if twice_g < 0 or twice_g % 2:
            raise InconsistentCellStructure(
                f"component containing {comp[0]} has chi={chi} with {b} boundary circles: not a surface")
    if declared_chi is not None and declared_chi != diag.euler_characteristic:
        raise InconsistentCellStructure(
            f"declared Euler characteristic {declared_chi} but cells give {diag.euler_characteristic}")
    for fam in diag.families:
        if not family_independent(diag, fam):
            raise UnbalancedDiagram(f"the {fam} curves are linearly dependent in H_1(Sigma; Q)")


def to_dict(diag: CellDiagram) -> dict:
    out: dict[str, Any] = {"d": diag.d}
    for fam, circs in zip(diag.families, diag.curves):
        out[FIELD_FOR[fam]] = [list(c) for c in circs]
    out["crossings"] = {c.id: list(c.quadrants) for c in diag.crossings}
    out["regions"] = {r.id: {"genus": r.genus,
                             "boundary_words": [list(w) for w in r.boundary_words],
                             "touches_suture": r.touches_suture}
                      for r in diag.regions}
    mk = diag.markings
    if mk:
        out["markings"] = mk
    return out


def dumps(diag: CellDiagram) -> str:
    return json.dumps(to_dict(diag), indent=1, sort_keys=False)


def loads(text: str) -> CellDiagram:
    return validate_diagram(text)


def load(path) -> CellDiagram:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from None
    return validate_diagram(text)


def save(diag: CellDiagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(diag) + "\n")
