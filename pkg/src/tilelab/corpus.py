"""A fixed corpus of small periodic tilings of Z^2 used by checks and tests."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .lattice import Lattice, PeriodicSet, Tile
from .search2d import build_torus_instance, lattice_schedule, search_tilings_on_torus

TILES = {
    "square": Tile.of((0, 0), (1, 0), (0, 1), (1, 1)),
    "gapped": Tile.of((0, 0), (2, 0), (0, 1), (2, 1)),
    "domino": Tile.of((0, 0), (1, 0)),
    "vdomino": Tile.of((0, 0), (0, 1)),
    "diag": Tile.of((0, 0), (1, 1)),
    "knight": Tile.of((0, 0), (2, 1)),
    "ltromino": Tile.of((0, 0), (1, 0), (0, 1)),
    "itromino": Tile.of((0, 0), (1, 0), (2, 0)),
    "skew": Tile.of((0, 0), (1, 0), (1, 1), (2, 1)),
    "ttetromino": Tile.of((0, 0), (1, 0), (2, 0), (1, 1)),
    "spread": Tile.of((0, 0), (1, 0), (4, 0), (5, 0)),
    "gap2": Tile.of((0, 0), (2, 0)),
}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    tile: Tile
    tiling: PeriodicSet
    target: PeriodicSet
    level: int = 1


def _a2(a, b) -> PeriodicSet:
    p, r = len(a), len(b)
    pts = [(4 * n, 2 * m + a[n]) for n in range(p) for m in range(r)]
    pts += [(4 * n + 1 + 2 * b[m], 2 * m) for n in range(p) for m in range(r)]
    return PeriodicSet.from_points([[4 * p, 0], [0, 2 * r]], pts)


def translation_class(A: PeriodicSet) -> tuple:
    """A key shared exactly by the translates of A."""
    A = A.minimal
    keys = []
    for r in A.residues:
        B = A.translate(tuple(-c for c in r))
        keys.append(tuple(sorted(B.residues)))
    return (A.lattice.basis, min(keys))


@lru_cache(maxsize=None)
def default_corpus(per_tile: int = 3, max_index: int = 36) -> tuple[CorpusEntry, ...]:
    """Up to ``per_tile`` tilings of Z^2 per tile, searched smallest period first."""
    E = PeriodicSet.whole(2)
    out = []
    for name, F in TILES.items():
        seen: list[PeriodicSet] = []
        classes = set()
        for L in lattice_schedule(E, max_index):
            for A in search_tilings_on_torus(build_torus_instance(F, E, L), limit=64):
                key = translation_class(A)
                if key not in classes:
                    classes.add(key)
                    seen.append(A)
                if len(seen) >= per_tile:
                    break
            if len(seen) >= per_tile:
                break
        for i, A in enumerate(seen):
            out.append(CorpusEntry(f"{name}-{i}", F, A.minimal, E))
    F2 = TILES["gapped"]
    out.append(CorpusEntry("a2-01-01", F2, _a2((0, 1), (0, 1)).minimal, E))
    out.append(CorpusEntry("a2-01-00", F2, _a2((0, 1), (0, 0)).minimal, E))
    return tuple(out)
