"""Universal periods of one-dimensional tilings, and an exact enumerator.

The enumerator runs a boundary automaton: after shifting ``F`` so that its
least element is 0, the state at position x is the window
``A(x-D), ..., A(x-1)`` together with ``x mod period(E)``.  The tiling
equation at x forces ``A(x)``, so every state has at most one successor
and the tilings are exactly the cycles of this functional graph.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Literal

from .dilation import dilation_modulus, primes_upto
from .errors import CapTooSmall, DimensionMismatch, PreconditionFailed, TijdemanRequiresLevelOne
from .lattice import Lattice, PeriodicSet, Tile, lcm

Variant = Literal["paper", "tijdeman"]


@dataclass(frozen=True)
class UniversalPeriod1D:
    q: int
    n: int
    variant: str

    @property
    def period(self) -> int:
        return self.q * self.n


def _check_1d(F: Tile) -> None:
    if F.dim != 1:
        raise DimensionMismatch("a one-dimensional tile is required")


def universal_period_1d(F: Tile, ell: int = 1, variant: Variant = "paper",
                        k: int = 1) -> UniversalPeriod1D:
    _check_1d(F)
    if not F.contains_origin or len(F) < 2:
        raise PreconditionFailed("need 0 in F and |F| >= 2")
    n = lcm(*(f[0] for f in F.nonzero()))
    if variant == "paper":
        q = dilation_modulus(ell, F).q
    elif variant == "tijdeman":
        if k != 1:
            raise TijdemanRequiresLevelOne("the prime-divisor variant is for level one")
        q = lcm(ell, *(p for p in primes_upto(len(F)) if len(F) % p == 0))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return UniversalPeriod1D(q, n, variant)


@dataclass
class Enumeration1D:
    tilings: list[PeriodicSet]
    complete: bool
    cycle_lengths: list[int] = field(default_factory=list)


def enumerate_1d(F: Tile, E: PeriodicSet | None = None, k: int = 1,
                 period_cap: int = 10**6) -> Enumeration1D:
    """All tilings of E by F at level k whose minimal period is at most the cap."""
    _check_1d(F)
    if period_cap < 1:
        raise ValueError("period_cap must be positive")
    if E is None:
        E = PeriodicSet.whole(1)
    shift = F.elements[0][0]
    offs = [f[0] - shift for f in F.elements]
    D = offs[-1]
    tail = offs[1:]                       # nonzero offsets, all in 1..D
    e = E.lattice.index
    target = [k * ((r,) in E) for r in range(e)]
    nstates = (1 << D) * e

    def step(state):
        # bit i of the window holds A(x - 1 - i)
        window, ph = divmod(state, e)
        covered = sum((window >> (o - 1)) & 1 for o in tail)
        bit = target[ph] - covered
        if bit not in (0, 1):
            return None, None
        window = ((window << 1) | bit) & ((1 << D) - 1)
        return window * e + (ph + 1) % e, bit

    succ, emitted = zip(*(step(s) for s in range(nstates)))
    # keep the core: states that lie on cycles
    color = [0] * nstates
    on_cycle = [False] * nstates
    for s0 in range(nstates):
        path, s = [], s0
        while s is not None and color[s] == 0:
            color[s] = 1
            path.append(s)
            s = succ[s]
        if s is not None and color[s] == 1:
            for t in path[path.index(s):]:
                on_cycle[t] = True
        for t in path:
            color[t] = 2

    tilings, lengths, complete = set(), [], True
    seen = [False] * nstates
    for s0 in range(nstates):
        if not on_cycle[s0] or seen[s0]:
            continue
        cyc, s = [], s0
        while not seen[s]:
            seen[s] = True
            cyc.append(s)
            s = succ[s]
        L = len(cyc)
        lengths.append(L)
        # bits[i] = A at the position of state cyc[i]
        bits = [emitted[t] for t in cyc]
        for i, t in enumerate(cyc):
            if t % e:
                continue
            # state t sits at x = 0, so A(j) = bits[(i + j) % L] (up to D)
            res = [j for j in range(L) if bits[(i + j) % L]]
            A = PeriodicSet.from_points([[L]], [(r - shift,) for r in res]).minimal
            if A.lattice.index > period_cap:
                complete = False
                continue
            tilings.add(A)
    if not complete:
        warnings.warn(CapTooSmall(f"some tilings have minimal period above {period_cap}"))
    return Enumeration1D(sorted(tilings, key=PeriodicSet.sort_key), complete, sorted(lengths))


def enumerate_1d_tilings(F: Tile, E: PeriodicSet | None = None, k: int = 1,
                         period_cap: int = 10**6) -> list[PeriodicSet]:
    return enumerate_1d(F, E, k, period_cap).tilings


@dataclass
class UniversalPeriodReport:
    paper: UniversalPeriod1D
    tijdeman: UniversalPeriod1D | None
    minimal_periods: list[int]
    complete: bool
    failures: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_universal_period(F: Tile, ell: int = 1, k: int = 1, period_cap: int = 10**6,
                            E: PeriodicSet | None = None) -> UniversalPeriodReport:
    """Check every enumerated tiling of E against the universal periods.

    E defaults to Z.  The prime-divisor variant is only checked for level
    one tilings of Z.
    """
    if E is None:
        E = PeriodicSet.whole(1)
    if ell % E.minimal.lattice.index:
        raise PreconditionFailed("E must be ell-periodic")
    paper = universal_period_1d(F, ell, "paper", k)
    whole = len(E.minimal.residues) == E.minimal.lattice.index
    tij = universal_period_1d(F, ell, "tijdeman", k) if k == 1 and whole else None
    res = enumerate_1d(F, E, k, period_cap)
    periods = [A.lattice.index for A in res.tilings]
    failures = [p for p in periods
                if paper.period % p or (tij is not None and tij.period % p)]
    return UniversalPeriodReport(paper, tij, periods, res.complete, failures)
