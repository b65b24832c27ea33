"""Shared generators for property tests."""
import random

from sfhkit import fixtures as F
from sfhkit.diagram import (attach_onehandle_annulus, build_translate_triple, disjoint_union,
                            erase_family, reverse_orientation)
from sfhkit.errors import SFHError

BASES = [F.disk, F.onehandle_annulus, F.figure5, F.torus]
MAX_D = 4


def random_diagram(rng: random.Random):
    """A nice diagram built from the fixtures by a few random moves."""
    d = rng.choice(BASES)()
    for _ in range(rng.randint(0, 3)):
        op = rng.choice(["attach", "reverse", "union", "collar", "translate", "cancel"])
        try:
            if op == "attach":
                regs = [r.id for r in d.regions if r.touches_suture]
                new = attach_onehandle_annulus(d, rng.choice(regs), rng.choice(regs))
            elif op == "reverse":
                new = reverse_orientation(d)
            elif op == "union":
                new = disjoint_union(d, rng.choice([F.disk, F.figure5, F.torus])())
            elif op == "collar":
                new = F.collar(d, tag=f"T{rng.randint(0, 999)}")
            elif op == "translate":
                new = erase_family(build_translate_triple(d), "beta")
            else:
                new = F.cancellation(d).surgered
        except SFHError:
            continue
        if new.d <= MAX_D:
            d = new
    return d


def random_diagrams(n: int, seed: int = 0):
    rng = random.Random(seed)
    return [random_diagram(rng) for _ in range(n)]


def is_tensor_with_identity(m, side: str) -> bool:
    """Chain matrix of a map on A u B acting only on one side is id (x) f."""
    fixed_prefix = "L." if side == "R" else "R."

    def split(g):
        # (points of the untouched factor, everything else)
        fixed = tuple(p for p in g.points if p.startswith(fixed_prefix))
        acting = tuple(p for p in g.points if not p.startswith(fixed_prefix))
        return fixed, acting

    src = [split(g) for g in m.source.generators]
    tgt = [split(g) for g in m.target.generators]
    fixed_src = sorted({s[0] for s in src})
    if sorted({t[0] for t in tgt}) != fixed_src:
        return False
    # the acting factor must be the same matrix for every value of the fixed factor
    block = None
    for f in fixed_src:
        cols = [j for j, s in enumerate(src) if s[0] == f]
        rows = [i for i, t in enumerate(tgt) if t[0] == f]
        sub = tuple(tuple(m.chain[i, j] for j in cols) for i in rows)
        if block is None:
            block = sub
        elif sub != block:
            return False
    for i, t in enumerate(tgt):
        for j, s in enumerate(src):
            if m.chain[i, j] and t[0] != s[0]:
                return False
    return True
