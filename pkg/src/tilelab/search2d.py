"""Periodic tilings of Z^2 as exact covers of a finite torus.

A Lambda-periodic tiling of E at level k is a set S of residues of
Z^2 / Lambda such that every cell c is hit exactly ``k 1_E(c)`` times by
the placements ``a + F`` with ``a in S``.  The solver is a plain
depth-first search that branches on the most constrained cell.  Branch i
takes the i-th candidate placement through that cell and rules out the
earlier ones, so no subset is produced twice.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

from .errors import IncompatibleLattices, PreconditionFailed
from .lattice import Lattice, PeriodicFunction, PeriodicSet, Tile, add, sublattices


@dataclass(frozen=True)
class TorusInstance:
    tile: Tile
    lattice: Lattice
    target: PeriodicFunction
    placements: tuple[tuple[int, ...], ...]   # cell indices, with repeats

    @property
    def cells(self) -> int:
        return self.lattice.index


def build_torus_instance(F: Tile, E: PeriodicSet, lattice: Lattice, k: int = 1) -> TorusInstance:
    if F.dim != lattice.dim or E.dim != lattice.dim:
        raise IncompatibleLattices("dimension mismatch")
    El = E if E.lattice.contains_lattice(lattice) else E.minimal
    if not El.lattice.contains_lattice(lattice):
        raise IncompatibleLattices(f"E is not {lattice}-periodic")
    target = El.indicator().refine(lattice) * k
    places = tuple(tuple(sorted(lattice.index_of(add(a, f)) for f in F.elements))
                   for a in lattice.residues())
    return TorusInstance(F, lattice, target, places)


class _Solver:
    def __init__(self, inst: TorusInstance):
        n = inst.cells
        self.n = n
        self.place = inst.placements
        # multiplicity of each cell in each placement
        self.mult = [dict() for _ in range(n)]
        for p, cells in enumerate(inst.placements):
            for c in cells:
                self.mult[p][c] = self.mult[p].get(c, 0) + 1
        self.through = [[] for _ in range(n)]
        for p in range(n):
            for c in self.mult[p]:
                self.through[c].append(p)
        self.need0 = list(inst.target.values)

    def fits(self, p, need):
        return all(need[c] >= m for c, m in self.mult[p].items())

    def choose(self, need, state):
        """Most constrained open cell and its admissible candidates."""
        best = None
        for c in range(self.n):
            r = need[c]
            if r <= 0:
                continue
            cands = [p for p in self.through[c] if state[p] == 0 and self.fits(p, need)]
            if sum(self.mult[p][c] for p in cands) < r:
                return c, []
            if best is None or len(cands) < len(best[1]):
                best = (c, cands)
                if len(cands) <= 1:
                    break
        return best

    def children(self, need, state):
        """Yield (need, state) of each branch in canonical order."""
        c, cands = self.choose(need, state)
        excluded = []
        for p in cands:
            st = list(state)
            for x in excluded:
                st[x] = -1
            st[p] = 1
            nd = list(need)
            for cc, m in self.mult[p].items():
                nd[cc] -= m
            yield nd, st
            excluded.append(p)

    def solve(self, need, state, limit=None, out=None):
        out = [] if out is None else out
        stack = [(need, state)]
        while stack:
            nd, st = stack.pop()
            if not any(r > 0 for r in nd):
                out.append(tuple(i for i in range(self.n) if st[i] == 1))
                if limit is not None and len(out) >= limit:
                    break
                continue
            kids = list(self.children(nd, st))
            stack.extend(reversed(kids))
        return out

    def frontier(self, width: int):
        """Expand the root breadth-first into roughly ``width`` subtrees, DFS order kept."""
        level = [(self.need0, [0] * self.n)]
        done = []
        while level and len(level) < width:
            nxt = []
            for nd, st in level:
                if not any(r > 0 for r in nd):
                    nxt.append((nd, st))
                else:
                    nxt.extend(self.children(nd, st))
            if len(nxt) == len(level):
                break
            level = nxt
        return level


def _solve_subtree(args):
    inst, need, state, limit = args
    return _Solver(inst).solve(need, state, limit)


def search_tilings_on_torus(inst: TorusInstance, limit: int | None = None,
                            threads: int = 1) -> list[PeriodicSet]:
    """Every (or the first ``limit``) tiling at this period, canonically sorted."""
    if any(v < 0 for v in inst.target.values):
        return []
    solver = _Solver(inst)
    if threads <= 1:
        found = solver.solve(solver.need0, [0] * solver.n, limit)
    else:
        roots = solver.frontier(4 * threads)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_solve_subtree, [(inst, nd, st, limit) for nd, st in roots])
            found = [s for part in parts for s in part]
        if limit is not None:
            found = found[:limit]
    res = [inst.lattice.residue_at(i) for i in range(inst.cells)]
    sets = [tuple(res[i] for i in s) for s in found]
    sets.sort()
    return [PeriodicSet(inst.lattice, frozenset(s)) for s in sets]


def lattice_schedule(E: PeriodicSet, max_index: int,
                     kind: Literal["sublattices", "square"] = "sublattices",
                     ell: int = 1) -> list[Lattice]:
    """Candidate periods, smallest index first.

    ``sublattices`` lists every sublattice of the period lattice of E with
    index at most ``max_index``; ``square`` lists ``ell m Z^2``.
    """
    base = E.minimal.lattice
    d = base.dim
    if kind == "square":
        out = []
        m = 1
        while (ell * m) ** d <= max_index:
            L = Lattice.scaled(ell * m, d)
            if base.contains_lattice(L):
                out.append(L)
            m += 1
        return out
    out = []
    for j in range(1, max_index // base.index + 1):
        for H in sublattices(d, j):
            out.append(Lattice.from_basis([[sum(h * b for h, b in zip(row, col))
                                            for col in zip(*base.basis)]
                                           for row in H.basis]))
    out = sorted(set(out), key=lambda L: (L.index, L.basis))
    return out


@dataclass
class Decision2D:
    verdict: str                        # "Tiles" or "NoTilingUnderSchedule"
    witness: PeriodicSet | None
    schedule: list[Lattice] = field(default_factory=list)
    searched: int = 0

    @property
    def tiles(self) -> bool:
        return self.verdict == "Tiles"


def decide_tiles_2d(F: Tile, E: PeriodicSet | None = None, k: int = 1,
                    lattice_schedule_: Sequence[Lattice] | None = None,
                    max_index: int = 36, threads: int = 1) -> Decision2D:
    if E is None:
        E = PeriodicSet.whole(F.dim)
    sched = list(lattice_schedule_) if lattice_schedule_ is not None else \
        lattice_schedule(E, max_index)
    if not sched:
        raise PreconditionFailed("empty lattice schedule")
    for i, L in enumerate(sched):
        inst = build_torus_instance(F, E, L, k)
        found = search_tilings_on_torus(inst, limit=1, threads=threads)
        if found:
            return Decision2D("Tiles", found[0], sched, i + 1)
    return Decision2D("NoTilingUnderSchedule", None, sched, len(sched))


@dataclass(frozen=True)
class PeriodBound2D:
    exponent_terms: tuple[tuple[int, int], ...]   # (diam^2, e) stands for diam^e
    heuristic_value: int
    ell: int
    sound: bool = False

    @property
    def total_exponent(self) -> int:
        return sum(e for _, e in self.exponent_terms)


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def period_bound_2d(F: Tile, ell: int = 1) -> PeriodBound2D:
    """Exponents of diam(F) along the period bound chain, constants set to 1.

    The terms are |F|(|F|-1), (|F|+2)(|F|-1)^3 / 2 and |F|(|F|-1)^2 / 2;
    the value is ceil(diam(F)^total), computed from the squared diameter.
    """
    n = len(F)
    if n < 2:
        raise PreconditionFailed("need |F| >= 2")
    d2 = F.diameter2
    exps = (n * (n - 1), (n + 2) * (n - 1) ** 3 // 2, n * (n - 1) ** 2 // 2)
    total = sum(exps)
    return PeriodBound2D(tuple((d2, e) for e in exps), ceil_sqrt(d2 ** total), ell)
