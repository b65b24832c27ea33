"""Small hand-built diagrams used by the tests, the CLI and the docs."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .diagram import (CellDiagram, annulus_marking, attach_onehandle_annulus, boundary_sum,
                      build_translate_triple, erase_family, swap_beta_delta, validate_diagram)
from .errors import SFHError

DISK = {
    "d": 0, "alphas": [], "betas": [], "crossings": {},
    "regions": {"R0": {"genus": 0, "boundary_words": [["s0"]], "touches_suture": True}},
}

# partial open book: annulus page, radial arc P, left-handed twist.
# generators x, y, z with d y = x and d z = x; x is the marked generator.
FIGURE5 = {
    "d": 1,
    "alphas": [["x", "y", "z"]],
    "betas": [["x", "y", "z"]],
    "crossings": {"x": ["R0", "R1", "R0", "R2"],
                  "y": ["R0", "R0", "R2", "R0"],
                  "z": ["R1", "R0", "R0", "R0"]},
    "regions": {
        "R0": {"genus": 0, "touches_suture": True,
               "boundary_words": [["-a0.1", "-b0.0", "-a0.2", "-b0.1", "a0.1", "b0.2", "a0.0", "b0.1"],
                                  ["s0"]]},
        "R1": {"genus": 0, "touches_suture": False, "boundary_words": [["-b0.2", "a0.2"]]},
        "R2": {"genus": 0, "touches_suture": False, "boundary_words": [["-a0.0", "b0.0"]]},
    },
    "markings": {"eh": ["x"]},
}

# annulus with alpha and beta isotopic to the core, meeting twice
ANNULUS = {
    "d": 1, "alphas": [["th", "lo"]], "betas": [["th", "lo"]],
    "crossings": {"lo": ["Rb", "B0", "Ra", "B1"], "th": ["B0", "Rb", "B1", "Ra"]},
    "regions": {
        "B0": {"genus": 0, "touches_suture": False, "boundary_words": [["-b0.0", "a0.0"]]},
        "B1": {"genus": 0, "touches_suture": False, "boundary_words": [["-a0.1", "b0.1"]]},
        "Ra": {"genus": 0, "touches_suture": True, "boundary_words": [["-a0.0", "-b0.1"], ["s0"]]},
        "Rb": {"genus": 0, "touches_suture": True, "boundary_words": [["a0.1", "b0.0"], ["s1"]]},
    },
}

# alpha and beta disjoint parallel cores of an annulus: valid but the
# middle annulus is a nonnegative periodic domain
PARALLEL_ANNULUS = {
    "d": 1, "alphas": [[]], "betas": [[]], "crossings": {},
    "regions": {
        "R0": {"genus": 0, "touches_suture": True, "boundary_words": [["s0"], ["a0.0"]]},
        "M": {"genus": 0, "touches_suture": False, "boundary_words": [["-a0.0"], ["b0.0"]]},
        "R1": {"genus": 0, "touches_suture": True, "boundary_words": [["-b0.0"], ["s1"]]},
    },
}

# punctured torus with alpha and beta meeting once: SFH of a product piece
TORUS = {
    "d": 1, "alphas": [["p"]], "betas": [["p"]],
    "crossings": {"p": ["R0", "R0", "R0", "R0"]},
    "regions": {"R0": {"genus": 0, "touches_suture": True,
                       "boundary_words": [["-a0.0", "-b0.0", "a0.0", "b0.0"], ["s0"]]}},
}


def disk() -> CellDiagram:
    return validate_diagram(DISK)


def onehandle_annulus() -> CellDiagram:
    return attach_onehandle_annulus(disk(), "R0", "R0")


def annulus() -> CellDiagram:
    return validate_diagram(ANNULUS)


def figure5() -> CellDiagram:
    return validate_diagram(FIGURE5)


def torus() -> CellDiagram:
    return validate_diagram(TORUS)


def collar(diag: CellDiagram, region: str | None = None, tag: str = "T") -> CellDiagram:
    """diag with a torus piece banded on; the extra point is T.p."""
    if region is None:
        region = next(r.id for r in diag.regions if r.touches_suture)
    return boundary_sum(diag, torus(), region, "R0", tag)


def parallel_annulus() -> CellDiagram:
    return validate_diagram(PARALLEL_ANNULUS)


def first_suture_region(diag: CellDiagram) -> str:
    return next(r.id for r in diag.regions if r.touches_suture)


def find_surgery_steps(diag: CellDiagram, ai: int, bj: int, tag: str = "") -> list[dict]:
    """A delta curve meeting alpha_ai and beta_bj once each (first that builds)."""
    segs = sorted(diag.segment_sides)
    sa = [x for x in segs if x.startswith(f"a{ai}.")]
    sb = [x for x in segs if x.startswith(f"b{bj}.")]
    dirs = ("right-to-left", "left-to-right")
    for a, b, da, db in product(sa, sb, dirs, dirs):
        steps = [{"segment": a, "cross": da, "id": f"P{tag}{bj}"},
                 {"segment": b, "cross": db, "id": f"Q{tag}{bj}"}]
        try:
            build_translate_triple(diag, {bj: steps})
        except SFHError:
            continue
        return steps
    raise ValueError(f"no cancelling curve through alpha_{ai} and beta_{bj}")


@dataclass(frozen=True)
class Cancellation:
    """base --one-handle--> annulus --surgery--> stabilised base, and the dual triple."""
    base: CellDiagram
    region: str
    annulus: CellDiagram
    triple: CellDiagram
    dual: CellDiagram
    point: str          # alpha_new cap delta_new

    @property
    def surgered(self) -> CellDiagram:
        return erase_family(self.triple, "beta")


def cancellation(base: CellDiagram, region: str | None = None) -> Cancellation:
    region = region or first_suture_region(base)
    ann = attach_onehandle_annulus(base, region, region)
    mk = annulus_marking(ann)
    steps = find_surgery_steps(ann, mk["alpha"], mk["beta"])
    triple = build_translate_triple(ann, {mk["beta"]: steps})
    return Cancellation(base, region, ann, triple, swap_beta_delta(triple), steps[0]["id"])


@dataclass(frozen=True)
class TwoComponent:
    """Surgery on two cancelling knots at once and one at a time."""
    start: CellDiagram
    both: CellDiagram          # triple with both surgery curves
    first: CellDiagram         # triple with the first curve only
    second: CellDiagram        # triple over the result of the first


def two_component() -> TwoComponent:
    start = attach_onehandle_annulus(onehandle_annulus(), "R0", "R0")
    s0 = find_surgery_steps(start, 0, 0)
    s1 = find_surgery_steps(start, 1, 1)
    both = build_translate_triple(start, {0: s0, 1: s1})
    first = build_translate_triple(start, {0: s0})
    mid = erase_family(first, "beta")
    second = build_translate_triple(mid, {1: find_surgery_steps(mid, 1, 1)})
    return TwoComponent(start, both, first, second)


BASIC = {"disk": disk, "onehandle": onehandle_annulus, "figure5": figure5}


def _interior_bigons(diag: CellDiagram, corners: set) -> list[str]:
    out = []
    for r in diag.regions:
        if r.touches_suture or not r.is_disk or r.corner_count != 2:
            continue
        if {c.id for c in diag.crossings if r.id in c.quadrants} == corners:
            out.append(r.id)
    return out


def cancellation_composites(c: Cancellation):
    """(one-handle then two-handle, two-handle then three-handle), both maps of base."""
    from .cobordism import (compose_special, link_surgery_map, one_handle_map, pointwise_map,
                            three_handle_map)
    from .diagram import translate_correspondence
    g = one_handle_map(c.base, c.region, c.region)
    L = link_surgery_map(c.triple)
    back = {v: k for k, v in translate_correspondence(c.triple).items()}
    R = pointwise_map(c.surgered, c.base, rename=back, drop=[c.point], provenance=("destabilise",))
    forward = compose_special([g, L, R])

    mk = annulus_marking(c.annulus)
    L2 = link_surgery_map(c.dual)
    A2 = L2.target.complex.diagram
    mk2 = dict(mk, bigons=_interior_bigons(A2, {mk["theta"], mk["low"]}))
    E = three_handle_map(A2, mk2)
    J = pointwise_map(c.base, c.surgered, rename=translate_correspondence(c.triple),
                      add=[c.point], provenance=("stabilise",))
    dual = compose_special([J, L2, E])
    return forward, dual


def two_component_maps(tc: TwoComponent):
    """(F_L, F_L2 o F_L1 followed by the renaming onto the target of F_L)."""
    from .cobordism import compose_special, link_surgery_map, pointwise_map
    from .diagram import translate_correspondence
    FL = link_surgery_map(tc.both)
    F1 = link_surgery_map(tc.first)
    F2 = link_surgery_map(tc.second)
    back = {v: k for k, v in translate_correspondence(tc.second).items()}
    Rl = pointwise_map(F2.target.complex.diagram, FL.target.complex.diagram, rename=back,
                       provenance=("rename",))
    return FL, compose_special([F1, F2, Rl])
