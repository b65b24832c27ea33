"""Generators: perfect matchings between two curve families."""
from __future__ import annotations

from dataclasses import dataclass

from .cells import CellDiagram


@dataclass(frozen=True, order=True)
class Generator:
    """One crossing per circle of each family, listed in first-family order."""
    points: tuple[str, ...]

    def __str__(self) -> str:
        return "{" + ",".join(self.points) + "}"

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, c) -> bool:
        return c in self.points

    def replace(self, mapping) -> "Generator":
        return Generator(tuple(mapping.get(p, p) for p in self.points))

    def extend(self, *pts) -> "Generator":
        return Generator(self.points + tuple(pts))


def enumerate_generators(diag: CellDiagram, families: tuple[str, str] | None = None) -> list[Generator]:
    """All matchings, ordered lexicographically by circle index then crossing id."""
    f, g = families or (diag.families[0], diag.families[1])
    by_circle: list[list[tuple[str, int]]] = [[] for _ in range(diag.d)]
    for c in diag.crossings:
        if c.families == (f, g):
            by_circle[c.circles[0]].append((c.id, c.circles[1]))
        elif c.families == (g, f):
            by_circle[c.circles[1]].append((c.id, c.circles[0]))
    for lst in by_circle:
        lst.sort()
    out: list[Generator] = []
    chosen: list[str] = []
    used = [False] * diag.d

    def rec(i: int):
        if i == diag.d:
            out.append(Generator(tuple(chosen)))
            return
        for cid, j in by_circle[i]:
            if not used[j]:
                used[j] = True
                chosen.append(cid)
                rec(i + 1)
                chosen.pop()
                used[j] = False

    rec(0)
    return out
