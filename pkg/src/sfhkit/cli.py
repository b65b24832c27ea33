"""Command-line front end.

Every verb prints one JSON report (keys sorted, so output is byte-stable);
``--summary`` prints a short human-readable version instead.  Errors are
reported as ``{"error": category, "message": ...}`` with a per-category
exit status.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import cobordism, contact, domains
from .complex import compute_sfh, relative_grading, select_theta
from .diagram import CellDiagram, enumerate_generators, erase_family, load
from .errors import MalformedInput, OddOrNonpositivePointCount, SFHError
from .linalg import SparseMatrixF2


def rank_factor(points_per_component: Sequence[int]) -> int:
    """d = sum over components of (|L_i cap P| / 2 - 1)."""
    total = 0
    for p in points_per_component:
        if isinstance(p, bool) or not isinstance(p, int) or p <= 0 or p % 2:
            raise OddOrNonpositivePointCount(f"point counts must be positive and even, got {p!r}")
        total += p // 2 - 1
    return total


# ---------------------------------------------------------------------------
# report helpers
# ---------------------------------------------------------------------------

def _gens(gs) -> list[str]:
    return [str(g) for g in gs]


def _dense(m: SparseMatrixF2) -> list[list[int]]:
    return m.to_dense()


def _map_report(m: cobordism.InducedMap) -> dict:
    return {
        "provenance": [str(p) for p in m.provenance],
        "source_rank": m.source.total,
        "target_rank": m.target.total,
        "matrix": _dense(m.matrix),
        "chain_matrix": _dense(m.chain),
        "spinc_routing": sorted([list(p) for p in m.routing]),
        "identity": m.is_identity(),
        "chain_map_verified": True,
    }


def _sfh_report(diag: CellDiagram) -> dict:
    sfh = compute_sfh(diag)
    cx = sfh.complex
    return {
        "generators": len(cx.generators),
        "generator_list": _gens(cx.generators),
        "differential": {str(g): _gens(cx.d(g)) for g in cx.generators},
        "class_ranks": [r for _, r in sfh.class_ranks],
        "total": sfh.total,
        "gradings": {str(g): v for g, v in zip(cx.generators, cx.gradings)},
        "grading_divisors": list(cx.divisors),
        "homology_basis": [_gens(b) for b in sfh.basis_generators()],
    }


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def cmd_validate(args) -> dict:
    diag = load(args.diagram)
    return {"valid": True, **diag.summary()}


def cmd_generators(args) -> dict:
    diag = load(args.diagram)
    gs = enumerate_generators(diag)
    return {"count": len(gs), "generators": _gens(gs)}


def cmd_spinc(args) -> dict:
    diag = load(args.diagram)
    part = domains.spinc_partition(diag)
    return {"count": part.count, "classes": [_gens(c) for c in part.classes()]}


def cmd_admissible(args) -> dict:
    diag = load(args.diagram)
    res = domains.check_admissibility(diag)
    out = {"admissible": res.admissible, "periodic_rank": res.periodic_rank}
    if res.certificate is not None:
        out["certificate"] = dict(zip(diag.interior_regions, res.certificate))
    return out


def cmd_sfh(args) -> dict:
    return _sfh_report(load(args.diagram))


def cmd_eh(args) -> dict:
    diag = load(args.diagram)
    mk = contact.marking_from(diag, args.marking)
    cls = contact.eh_class(mk)
    return {"marking": str(cls.generator), "coordinates": cls.vector(), "zero": cls.is_zero,
            "EH": "0" if cls.is_zero else "nonzero"}


def cmd_map(args) -> dict:
    diag = load(args.diagram)
    kind = args.kind
    if kind == "one-handle":
        if not args.regions or len(args.regions) != 2:
            raise MalformedInput("one-handle needs --regions R1 R2")
        m = cobordism.one_handle_map(diag, *args.regions)
    elif kind == "three-handle":
        m = cobordism.three_handle_map(diag)
    elif kind == "triangle":
        m = cobordism.triangle_map(diag, select_theta(diag))
    elif kind == "surgery":
        m = cobordism.link_surgery_map(diag, args.indices)
    else:
        raise MalformedInput(f"unknown map kind {kind}")
    out = _map_report(m)
    if kind == "triangle" and not diag.markings.get("triple", {}).get("surgery_indices"):
        ident = cobordism.compose_special([m, cobordism.translate_identification(diag)])
        out["identified_matrix"] = _dense(ident.matrix)
        out["identity_after_identification"] = ident.is_identity()
    return out


def cmd_glue(args) -> dict:
    data = contact.GluingData(load(args.sub), load(args.big), tuple(args.complement or ()),
                              args.isolated)
    out = _map_report(contact.gluing_map(data))
    out["contact_compatibility"] = "assumed"
    out["isolated_disks"] = args.isolated
    return out


def _plan_steps(raw_steps, base: Path):
    steps = []
    for st in raw_steps:
        if not isinstance(st, dict) or "op" not in st:
            raise MalformedInput(f"plan step {st!r} needs an 'op'")
        op = st["op"]
        if op == "one_handle":
            steps.append(contact.OneHandle(*st["regions"]))
        elif op == "three_handle":
            steps.append(contact.ThreeHandle(st.get("marking")))
        elif op == "link_surgery":
            steps.append(contact.LinkSurgery(load(base / st["triple"]),
                                             tuple(st["indices"]) if "indices" in st else None))
        elif op == "translate":
            steps.append(contact.Translate(load(base / st["triple"])))
        elif op == "glue":
            steps.append(("glue", st))
        elif op == "plan":
            steps.append(_plan_steps(st["steps"], base))
        else:
            raise MalformedInput(f"unknown plan op {op}")
    return steps


def _resolve_glue(steps, start: CellDiagram, base: Path):
    """Glue steps name only the big diagram; the sub-diagram is the current one."""
    out = []
    cur = start
    for st in steps:
        if isinstance(st, tuple) and st[0] == "glue":
            raw = st[1]
            st = contact.Glue(contact.GluingData(cur, load(base / raw["big"]),
                                                 tuple(raw.get("complement", ())),
                                                 int(raw.get("isolated_disks", 0))))
        elif isinstance(st, list):
            st = tuple(_resolve_glue(st, cur, base))
        m = contact._run_step(cur, st)
        cur = m.target.complex.diagram
        out.append(st)
    return out


def cmd_plan(args) -> dict:
    path = Path(args.plan)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedInput(f"cannot read plan: {e}") from None
    base = path.parent
    start = load(base / raw["start"])
    steps = _resolve_glue(_plan_steps(raw.get("steps", []), base), start, base)
    res = contact.execute_plan(contact.CobordismPlan(start, tuple(steps)))
    out = _map_report(res.map)
    out["steps"] = [_map_report(m)["provenance"] for m in res.steps]
    out["contributing_classes"] = [list(c) for c in res.classes]
    return out


def cmd_pair(args) -> dict:
    diag = load(args.diagram)
    pr = cobordism.duality_pairing(diag)
    return {"pairing_matrix": _dense(pr.matrix()), "adjoint": pr.adjoint(),
            "generators": _gens(pr.forward.generators),
            "reverse_generators": _gens(pr.reverse.generators)}


def cmd_rankfactor(args) -> dict:
    return {"points": args.points, "d": rank_factor(args.points)}


VERBS = {
    "validate": cmd_validate, "generators": cmd_generators, "spinc": cmd_spinc,
    "admissible": cmd_admissible, "sfh": cmd_sfh, "eh": cmd_eh, "map": cmd_map,
    "glue": cmd_glue, "plan": cmd_plan, "pair": cmd_pair, "rankfactor": cmd_rankfactor,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sfhkit", description="Sutured Floer homology over F2.")
    p.add_argument("--summary", action="store_true", help="human-readable output")
    sub = p.add_subparsers(dest="verb", required=True)
    for verb in ("validate", "generators", "spinc", "admissible", "sfh", "pair"):
        sub.add_parser(verb).add_argument("diagram")
    e = sub.add_parser("eh")
    e.add_argument("diagram")
    e.add_argument("--marking", nargs="*", help="crossing ids of the marked generator")
    m = sub.add_parser("map")
    m.add_argument("kind", choices=["one-handle", "three-handle", "triangle", "surgery"])
    m.add_argument("diagram")
    m.add_argument("--regions", nargs=2)
    m.add_argument("--indices", nargs="*", type=int)
    g = sub.add_parser("glue")
    g.add_argument("sub")
    g.add_argument("big")
    g.add_argument("--complement", nargs="*")
    g.add_argument("--isolated", type=int, default=0)
    pl = sub.add_parser("plan")
    pl.add_argument("plan")
    r = sub.add_parser("rankfactor")
    r.add_argument("points", nargs="+", type=int)
    for sp in sub.choices.values():
        sp.add_argument("--summary", action="store_true", default=argparse.SUPPRESS)
    return p


def _summary(verb: str, rep: dict) -> str:
    if "error" in rep:
        return f"error [{rep['error']}]: {rep['message']}"
    if verb == "sfh":
        return (f"generators {rep['generators']}, per-class ranks {rep['class_ranks']}, "
                f"total {rep['total']}")
    if verb == "admissible":
        word = "admissible" if rep["admissible"] else "not admissible"
        return f"{word}, periodic rank {rep['periodic_rank']}"
    if verb == "eh":
        return f"EH = {rep['EH']}"
    if verb == "rankfactor":
        return f"d = {rep['d']}"
    if verb == "validate":
        return f"valid: d = {rep['d']}, {rep['crossings']} crossings, {rep['regions']} regions"
    if verb == "generators":
        return f"{rep['count']} generators: {' '.join(rep['generators'])}"
    if verb == "spinc":
        return f"{rep['count']} Spin^c classes: " + "; ".join(" ".join(c) for c in rep["classes"])
    if verb == "pair":
        return f"pairing adjoint: {rep['adjoint']}"
    lines = [f"{rep['source_rank']} -> {rep['target_rank']}, identity: {rep['identity']}"]
    lines += [" ".join(map(str, row)) for row in rep["matrix"]]
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = VERBS[args.verb](args)
        code = 0
    except SFHError as e:
        rep = {"error": e.category, "message": str(e)}
        code = e.exit_code
    if args.summary:
        print(_summary(args.verb, rep))
    else:
        print(json.dumps(rep, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
