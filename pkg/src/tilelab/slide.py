"""Slide tilings: a periodic scaffold with finitely many line substitutions.

Each substitution lives on a line ``y + <h'>`` with ``h'`` primitive and
changes membership by ``added - removed`` there.  ``added`` is a
``<h>``-periodic word with ``h = len(word) h'``; ``removed`` defaults to
the scaffold itself, so off every other modified line the line simply
reads ``added``.  Where two lines cross the deltas add up, and the
result must stay in {0, 1}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CommensurableDirections, PreconditionFailed, WindowTooLarge
from .lattice import (
    Lattice,
    PeriodicSet,
    Tile,
    Vector,
    add,
    lcm,
    norm2,
    primitive_part,
    scale,
    sub,
    vec,
    wedge,
)

MAX_WINDOW_CELLS = 4096 * 4096


@dataclass(frozen=True)
class Substitution:
    direction: Vector
    base: Vector
    period: Vector
    word: tuple[int, ...]
    remove: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "direction", vec(self.direction))
        object.__setattr__(self, "base", vec(self.base))
        object.__setattr__(self, "period", vec(self.period))
        object.__setattr__(self, "word", tuple(int(b) for b in self.word))
        m, prim = primitive_part(self.direction)
        if m != 1:
            raise ValueError(f"line direction {self.direction} is not primitive")
        if not self.word or any(b not in (0, 1) for b in self.word):
            raise ValueError("word must be a nonempty 0/1 sequence")
        if self.period != scale(len(self.word), self.direction):
            raise ValueError("period must equal len(word) * direction")
        if self.remove is not None:
            object.__setattr__(self, "remove", tuple(int(b) for b in self.remove))
            if len(self.remove) != len(self.word) or any(b not in (0, 1) for b in self.remove):
                raise ValueError("remove word must match the added word")

    def param(self, x) -> int | None:
        """t with x = base + t * direction, or None off the line."""
        d = sub(vec(x), self.base)
        if wedge(self.direction, d):
            return None
        return (d[0] * self.direction[0] + d[1] * self.direction[1]) // norm2(self.direction)

    def point(self, t: int) -> Vector:
        return add(self.base, scale(t, self.direction))

    def same_line(self, other: "Substitution") -> bool:
        return wedge(self.direction, other.direction) == 0 and \
            wedge(self.direction, sub(other.base, self.base)) == 0

    def delta(self, x, scaffold: PeriodicSet) -> int:
        t = self.param(x)
        if t is None:
            return 0
        n = len(self.word)
        removed = self.remove[t % n] if self.remove is not None else int(x in scaffold)
        return self.word[t % n] - removed

    def translate(self, v) -> "Substitution":
        return Substitution(self.direction, add(self.base, vec(v)), self.period,
                            self.word, self.remove)


def line_intersection(s1: Substitution, s2: Substitution) -> Vector | None:
    """The lattice point where two crossing lines meet, if any."""
    w = wedge(s1.direction, s2.direction)
    if w == 0:
        raise CommensurableDirections("parallel lines do not cross")
    num = wedge(sub(s2.base, s1.base), s2.direction)
    if num % w:
        return None
    return s1.point(num // w)


@dataclass(frozen=True)
class SlideTiling:
    scaffold: PeriodicSet
    substitutions: tuple[Substitution, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "substitutions", tuple(self.substitutions))
        self.validate()

    @property
    def dim(self) -> int:
        return 2

    def validate(self) -> None:
        subs, S = self.substitutions, self.scaffold
        for i, s in enumerate(subs):
            n = lcm(len(s.word), S.lattice.order_of(s.direction))
            for t in range(n):
                x = s.point(t)
                if (x in S) + s.delta(x, S) not in (0, 1):
                    raise PreconditionFailed(f"substitution leaves {{0,1}} at {x}")
            for s2 in subs[i + 1:]:
                if s.same_line(s2):
                    raise PreconditionFailed("two substitutions on one line")
                if wedge(s.direction, s2.direction) == 0:
                    continue
                x = line_intersection(s, s2)
                if x is not None and self.value(x) not in (0, 1):
                    raise PreconditionFailed(f"substitutions clash at {x}")

    def value(self, x) -> int:
        x = vec(x)
        return int(x in self.scaffold) + sum(s.delta(x, self.scaffold) for s in self.substitutions)

    def __contains__(self, x) -> bool:
        return self.value(x) == 1

    def grid(self, x0: int, y0: int, w: int, h: int) -> np.ndarray:
        return membership_grid(self, x0, y0, w, h)

    def is_parallel_to(self, h) -> bool:
        return all(wedge(s.direction, vec(h)) == 0 for s in self.substitutions)

    def modified_points(self, x0, y0, w, h) -> np.ndarray:
        return membership_grid(self, x0, y0, w, h) != membership_grid(self.scaffold, x0, y0, w, h)


def _check_window(w: int, h: int) -> None:
    if w <= 0 or h <= 0:
        raise ValueError("window must be nonempty")
    if w * h > MAX_WINDOW_CELLS:
        raise WindowTooLarge(f"{w}x{h} window exceeds {MAX_WINDOW_CELLS} cells")


def periodic_grid(A: PeriodicSet, x0: int, y0: int, w: int, h: int) -> np.ndarray:
    """Membership array ``g[i, j] = 1_A(x0 + i, y0 + j)``."""
    _check_window(w, h)
    (a, _), (b, c) = A.lattice.basis
    mask = np.zeros((a, c), dtype=np.int64)
    for r in A.residues:
        mask[r] = 1
    X = np.arange(x0, x0 + w, dtype=np.int64)[:, None]
    Y = np.arange(y0, y0 + h, dtype=np.int64)[None, :]
    t = Y // c
    return mask[(X - t * b) % a, Y - t * c]


def membership_grid(A, x0: int, y0: int, w: int, h: int) -> np.ndarray:
    """Membership array of a periodic set, a slide tiling, or any object with ``grid``."""
    if isinstance(A, PeriodicSet):
        return periodic_grid(A, x0, y0, w, h)
    if not isinstance(A, SlideTiling):
        return A.grid(x0, y0, w, h)
    g = periodic_grid(A.scaffold, x0, y0, w, h)
    base = g.copy()
    X = np.arange(x0, x0 + w, dtype=np.int64)[:, None]
    Y = np.arange(y0, y0 + h, dtype=np.int64)[None, :]
    for s in A.substitutions:
        (dx, dy), (bx, by) = s.direction, s.base
        on = (dx * (Y - by) - dy * (X - bx)) == 0
        if not on.any():
            continue
        t = ((X - bx) * dx + (Y - by) * dy) // (dx * dx + dy * dy)
        n = len(s.word)
        added = np.asarray(s.word)[t % n]
        removed = np.asarray(s.remove)[t % n] if s.remove is not None else base
        g = g + np.where(on, added - removed, 0)
    return g


def cover_grid(F: Tile, A, x0: int, y0: int, w: int, h: int) -> np.ndarray:
    """``1_F * 1_A`` on the window, exactly."""
    xs = [f[0] for f in F]
    ys = [f[1] for f in F]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    big = membership_grid(A, x0 - hi_x, y0 - hi_y, w + hi_x - lo_x, h + hi_y - lo_y)
    out = np.zeros((w, h), dtype=np.int64)
    for fx, fy in F:
        i, j = hi_x - fx, hi_y - fy
        out += big[i:i + w, j:j + h]
    return out


def window_tiles(F: Tile, A, E: PeriodicSet, k: int, x0: int, y0: int, w: int, h: int) -> bool:
    return bool(np.array_equal(cover_grid(F, A, x0, y0, w, h), k * periodic_grid(E, x0, y0, w, h)))


def period_violation(A, v, x0: int, y0: int, w: int, h: int) -> Vector | None:
    """Some x in the window with ``1_A(x + v) != 1_A(x)``."""
    vx, vy = vec(v)
    ax, ay = x0 + min(0, vx), y0 + min(0, vy)
    g = membership_grid(A, ax, ay, w + abs(vx), h + abs(vy))
    i0, j0 = x0 - ax, y0 - ay
    here = g[i0:i0 + w, j0:j0 + h]
    there = g[i0 + vx:i0 + vx + w, j0 + vy:j0 + vy + h]
    bad = np.argwhere(here != there)
    if not len(bad):
        return None
    i, j = bad[0]
    return (x0 + int(i), y0 + int(j))


def directions_up_to(cap2: int) -> list[Vector]:
    """Nonzero vectors with squared norm <= cap2, one per +- pair."""
    r = math.isqrt(cap2)
    out = []
    for x in range(0, r + 1):
        for y in range(-r, r + 1):
            if (x, y) != (0, 0) and x * x + y * y <= cap2 and (x > 0 or y > 0):
                out.append((x, y))
    return sorted(out, key=lambda v: (norm2(v), v))


def nonperiodicity_certificate(A, cap2: int, center=(0, 0), radius: int = 32) -> dict:
    """For each h with ||h||^2 <= cap2, a point where <h>-periodicity fails."""
    cx, cy = center
    x0, y0, side = cx - radius, cy - radius, 2 * radius + 1
    out = {}
    for v in directions_up_to(cap2):
        out[v] = period_violation(A, v, x0, y0, side, side)
    return out


def generate_slide_family(kind: str, a_word: Sequence[int], b_word: Sequence[int] = (0,),
                          windowed: bool = False) -> SlideTiling:
    """The two sliding families on Z^2.

    ``a1``: {(2n, 2m + a(n))}, tiled by {0,1}^2.
    ``a2``: {(4n, 2m + a(n))} u {(4n + 1 + 2b(m), 2m)}, tiled by {0,2}x{0,1}.

    By default the words repeat periodically and the result is a plain
    periodic scaffold.  With ``windowed`` they are zero outside
    ``0..len-1`` and the nonzero entries become line substitutions.
    """
    a = tuple(int(v) for v in a_word)
    b = tuple(int(v) for v in b_word)
    if not a or not b or any(v not in (0, 1) for v in a + b):
        raise ValueError("words must be nonempty 0/1 sequences")
    if kind not in ("a1", "a2"):
        raise ValueError(f"unknown family {kind!r}")
    step = 2 if kind == "a1" else 4
    if windowed:
        zero = generate_slide_family(kind, (0,), (0,))
        subs = [Substitution((0, 1), (step * n, 0), (0, 2), (0, 1))
                for n, v in enumerate(a) if v]
        if kind == "a2":
            subs += [Substitution((1, 0), (0, 2 * m), (4, 0), (0, 0, 0, 1), (0, 1, 0, 0))
                     for m, v in enumerate(b) if v]
        return SlideTiling(zero.scaffold, tuple(subs))
    p, r = len(a), len(b)
    if kind == "a1":
        pts = [(2 * n, a[n]) for n in range(p)]
        return SlideTiling(PeriodicSet.from_points([[2 * p, 0], [0, 2]], pts))
    pts = [(4 * n, 2 * m + a[n]) for n in range(p) for m in range(r)]
    pts += [(4 * n + 1 + 2 * b[m], 2 * m) for n in range(p) for m in range(r)]
    return SlideTiling(PeriodicSet.from_points([[4 * p, 0], [0, 2 * r]], pts))


def family_tile(kind: str) -> Tile:
    if kind == "a1":
        return Tile.of((0, 0), (1, 0), (0, 1), (1, 1))
    return Tile.of((0, 0), (2, 0), (0, 1), (2, 1))
