"""A level-4 tiling of Z^2 that is not weakly periodic.

With alpha = sqrt(D) and the carry

    c(m1, m2) = floor(alpha (m1 + m2)) - floor(alpha m1) - floor(alpha m2)  in {0, 1},

the set A has ``1_A = c`` where ``chi = +1`` and ``1_A = 1 - c`` where
``chi = -1``, with ``chi(m1, m2) = (-1)^(floor(m2 / 2) + m1)``.  The tile is
``F8 = {t1 (0,2) + t2 (1,0) + t3 (2,-2)}``.  Floors are exact: for m >= 0,
``floor(sqrt(D) m) = isqrt(D m^2)``, and ``alpha m`` is never an integer
for m != 0.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .lattice import PeriodicSet, Tile, Vector
from .slide import cover_grid, directions_up_to, membership_grid, period_violation


@dataclass(frozen=True)
class QuadraticIrrational:
    """alpha = sqrt(D) for a non-square D > 0."""

    D: int = 2

    def __post_init__(self):
        if self.D <= 0 or math.isqrt(self.D) ** 2 == self.D:
            raise ValueError(f"sqrt({self.D}) is not irrational")

    def floor_multiple(self, m: int) -> int:
        r = math.isqrt(self.D * m * m)
        return r if m >= 0 else -r - 1

    def floor_table(self, lo: int, hi: int) -> np.ndarray:
        """``floor(alpha m)`` for m in [lo, hi)."""
        return np.array([self.floor_multiple(m) for m in range(lo, hi)], dtype=np.int64)


SQRT2 = QuadraticIrrational(2)


def chi(m1: int, m2: int) -> int:
    return -1 if (m2 // 2 + m1) % 2 else 1


def carry(alpha: QuadraticIrrational, m1: int, m2: int) -> int:
    f = alpha.floor_multiple
    return f(m1 + m2) - f(m1) - f(m2)


def membership_A(alpha: QuadraticIrrational, m1: int, m2: int) -> int:
    c = carry(alpha, m1, m2)
    return c if chi(m1, m2) == 1 else 1 - c


GENERATORS = ((0, 2), (1, 0), (2, -2))


def tile_F8() -> Tile:
    pts = {tuple(sum(t * g[i] for t, g in zip(ts, GENERATORS)) for i in range(2))
           for ts in itertools.product((0, 1), repeat=3)}
    return Tile(tuple(pts))


def chi_grid(x0: int, y0: int, w: int, h: int) -> np.ndarray:
    X = np.arange(x0, x0 + w)[:, None]
    Y = np.arange(y0, y0 + h)[None, :]
    return np.where((Y // 2 + X) % 2 == 0, 1, -1)


@dataclass(frozen=True)
class CounterexampleTiling:
    alpha: QuadraticIrrational = SQRT2
    signed: bool = True          # False replaces chi by 1 (a mutant)

    @property
    def tile(self) -> Tile:
        return tile_F8()

    def __contains__(self, x) -> bool:
        m1, m2 = x
        if self.signed:
            return membership_A(self.alpha, m1, m2) == 1
        return carry(self.alpha, m1, m2) == 1

    def grid(self, x0: int, y0: int, w: int, h: int) -> np.ndarray:
        tab_lo = min(x0, y0, x0 + y0)
        tab_hi = max(x0 + w, y0 + h, x0 + w + y0 + h)
        tab = self.alpha.floor_table(tab_lo, tab_hi)
        X = np.arange(x0, x0 + w)[:, None]
        Y = np.arange(y0, y0 + h)[None, :]
        c = tab[X + Y - tab_lo] - tab[X - tab_lo] - tab[Y - tab_lo]
        if not self.signed:
            return c
        return np.where(chi_grid(x0, y0, w, h) == 1, c, 1 - c)


@dataclass
class Level4Report:
    radius: int
    values: set = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return self.values == {4}


def verify_level4(alpha: QuadraticIrrational = SQRT2, window_radius: int = 64,
                  signed: bool = True) -> Level4Report:
    """``1_{F8} * 1_A`` on the window [-R, R]^2."""
    F = tile_F8()
    R = window_radius
    if R < 5:
        raise ValueError("radius must exceed the tile diameter")
    conv = cover_grid(F, CounterexampleTiling(alpha, signed), -R, -R, 2 * R + 1, 2 * R + 1)
    return Level4Report(R, set(np.unique(conv).tolist()))


def verify_chi_cancellations(window_radius: int = 4,
                             chi_fn: Callable[[int, int], int] = chi) -> dict:
    """``chi * 1_{0,g} == 0`` for g in (0,2), (1,0), (2,-2), pointwise on the window."""
    R = window_radius
    out = {}
    for g in GENERATORS:
        out[g] = all(chi_fn(x, y) + chi_fn(x - g[0], y - g[1]) == 0
                     for x in range(-R, R + 1) for y in range(-R, R + 1))
    return out


def two_part_refutation(A, h1: Vector, h2: Vector, x0: int, y0: int, w: int, h: int) -> bool:
    """True when, inside the window, A cannot be split as A1 u A2 with A_i <h_i>-periodic.

    Every point of A gets a label in {1, 2}.  A point and its translate by
    h_i, both in A, share their "is i" status; a point of A whose translate
    by +-h_i is outside A cannot carry label i.  A component that is barred
    from both labels refutes the split.
    """
    pad = max(abs(c) for c in h1 + h2)
    g = membership_grid(A, x0 - pad, y0 - pad, w + 2 * pad, h + 2 * pad).astype(bool)
    idx = np.arange(g.size).reshape(g.shape)
    inner = g[pad:pad + w, pad:pad + h]
    inner_idx = idx[pad:pad + w, pad:pad + h]
    rows, cols = [], []
    barred = {1: [], 2: []}
    for lab, v in ((1, h1), (2, h2)):
        for sgn in (1, -1):
            dx, dy = sgn * v[0], sgn * v[1]
            there = g[pad + dx:pad + dx + w, pad + dy:pad + dy + h]
            there_idx = idx[pad + dx:pad + dx + w, pad + dy:pad + dy + h]
            barred[lab].append(inner_idx[inner & ~there])
            both = inner & there
            rows.append(inner_idx[both])
            cols.append(there_idx[both])
    r, c = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(len(r)), (r, c)), shape=(g.size, g.size))
    ncomp, labels = connected_components(graph, directed=False)
    bad1 = np.zeros(ncomp, dtype=bool)
    bad2 = np.zeros(ncomp, dtype=bool)
    bad1[labels[np.concatenate(barred[1])]] = True
    bad2[labels[np.concatenate(barred[2])]] = True
    return bool((bad1 & bad2).any())


@dataclass
class NonPeriodicityEvidence:
    radius: int
    cap: int
    violations: dict = field(default_factory=dict)
    unrefuted_pairs: list = field(default_factory=list)
    pairs_checked: int = 0

    @property
    def all_periods_fail(self) -> bool:
        return all(v is not None for v in self.violations.values())

    @property
    def ok(self) -> bool:
        return self.all_periods_fail and not self.unrefuted_pairs


def nonperiodicity_evidence(A=None, window_radius: int = 64, h_norm_cap: int = 4,
                            pair_radius: int | None = None) -> NonPeriodicityEvidence:
    """Window evidence that A has no period and no two-direction splitting.

    Directions range over nonzero h with ``||h|| <= h_norm_cap``.
    """
    if A is None:
        A = CounterexampleTiling()
    R = window_radius
    cap2 = h_norm_cap * h_norm_cap
    ev = NonPeriodicityEvidence(R, h_norm_cap)
    dirs = directions_up_to(cap2)
    for v in dirs:
        ev.violations[v] = period_violation(A, v, -R, -R, 2 * R + 1, 2 * R + 1)
    Rp = R if pair_radius is None else pair_radius
    for i, h1 in enumerate(dirs):
        for h2 in dirs[i + 1:]:
            if h1[0] * h2[1] - h1[1] * h2[0] == 0:
                continue
            ev.pairs_checked += 1
            if not two_part_refutation(A, h1, h2, -Rp, -Rp, 2 * Rp + 1, 2 * Rp + 1):
                ev.unrefuted_pairs.append((h1, h2))
    return ev
