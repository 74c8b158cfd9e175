"""Chameleon slices and non-one-periodic tilings.

A slice of a doubly periodic tiling ``A'`` is its intersection with a line
``<h'> + y``.  It is a chameleon for the direction ``h = k h'`` when some
other ``<h>``-periodic subset of the same line has the same convolution
with F.  Replacing two chameleons on incommensurable lines keeps
``1_F * 1_A`` unchanged, and the result has no period at all as long as
the two deltas do not clash where the lines cross.

Scaffolds are whole tilings, not the per-direction parts of a weak
decomposition, so a crossing can push a point to -1 or 2.  The witness
builder tries every pair of alternatives and every lattice translate of
the second line and keeps the first combination that validates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CommensurableDirections, PreconditionFailed, ZeroVector
from .improve import _Frame, _slice_key, tile_slices
from .lattice import (
    Lattice,
    PeriodicSet,
    Tile,
    Vector,
    add,
    canonical_direction,
    is_zero,
    lcm,
    norm2,
    primitive_part,
    scale,
    sub,
    vec,
    wedge,
)
from .search2d import build_torus_instance, lattice_schedule, search_tilings_on_torus
from .slide import (
    SlideTiling,
    Substitution,
    line_intersection,
    nonperiodicity_certificate,
    window_tiles,
)


@dataclass(frozen=True)
class ChameleonReport:
    direction: Vector            # h
    h_primitive: Vector          # h'
    representative: Vector       # y, the point u = 0 of the line
    line: int                    # h' ^ y
    period: int                  # P, the comparison length along h'
    original: tuple[int, ...]    # slice word of length P
    alternative: tuple[int, ...]  # <h>-periodic word of length len(h)/len(h')
    certificate: tuple           # shared convolution key

    @property
    def substitution(self) -> Substitution:
        k = len(self.alternative)
        return Substitution(self.h_primitive, self.representative,
                            scale(k, self.h_primitive), self.alternative)


def _line_classes(A: PeriodicSet, hp: Vector) -> int:
    """Lines ``h' ^ x = z`` and ``z + g`` are lattice translates of each other."""
    g = 0
    for b in A.lattice.basis:
        g = _gcd(g, wedge(hp, b))
    return g


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def find_chameleon_slices(F: Tile, Aprime: PeriodicSet, h) -> list[ChameleonReport]:
    h = vec(h)
    if is_zero(h):
        raise ZeroVector("chameleon direction must be nonzero")
    k, hp = primitive_part(h)
    fr = _Frame(hp)
    p = Aprime.lattice.order_of(hp)
    P = lcm(p, k)
    Fy = {v: [fr.to(f)[0] for f in G] for v, G in tile_slices(F, hp).items()}
    out = []
    for z in range(_line_classes(Aprime, hp)):
        base = fr.back((0, z))
        orig = tuple(int(fr.back((u, z)) in Aprime) for u in range(P))
        key = _slice_key(Fy, orig, P)
        for alt in itertools.product((0, 1), repeat=k):
            full = alt * (P // k)
            if full == orig:
                continue
            if _slice_key(Fy, full, P) == key:
                out.append(ChameleonReport(h, hp, base, z, P, orig, tuple(alt), key))
    return out


@dataclass
class SlideWitness:
    tiling: SlideTiling
    chameleons: tuple[ChameleonReport, ChameleonReport]
    crossing: Vector | None
    window: tuple[int, int, int, int]
    certificate: dict = field(default_factory=dict)


def _translates(lat: Lattice, reach: int):
    """Lattice vectors ``i b1 + j b2`` with ``0 <= i, j < reach``."""
    b1, b2 = lat.basis
    for i in range(reach):
        for j in range(reach):
            yield add(scale(i, b1), scale(j, b2))


def build_slide_witness(Aprime: PeriodicSet, c1: ChameleonReport, c2: ChameleonReport,
                        F: Tile | None = None, E: PeriodicSet | None = None,
                        cap2: int = 32, radius: int = 32) -> SlideWitness | None:
    """Replace both slices of ``Aprime``; None when every placement clashes.

    With F given, the result is window-checked against ``E`` (default Z^2)
    and must fail every period ``h`` with ``||h||^2 <= cap2``.
    """
    if wedge(c1.h_primitive, c2.h_primitive) == 0:
        raise CommensurableDirections("chameleon directions must be incommensurable")
    s1 = c1.substitution
    s2 = c2.substitution
    if s1.word * (c1.period // len(s1.word)) == c1.original or \
            s2.word * (c2.period // len(s2.word)) == c2.original:
        raise PreconditionFailed("the alternative must differ from the slice")
    reach = lcm(len(s1.word), len(s2.word), Aprime.lattice.exponent)
    for v in _translates(Aprime.lattice, reach):
        s2v = s2.translate(v)
        x = line_intersection(s1, s2v)
        if x is not None:
            val = int(x in Aprime) + s1.delta(x, Aprime) + s2v.delta(x, Aprime)
            if val not in (0, 1):
                continue
        A = SlideTiling(Aprime, (s1, s2v))
        c = x if x is not None else s1.base
        win = (c[0] - radius, c[1] - radius, 2 * radius + 1, 2 * radius + 1)
        if F is not None:
            target = E if E is not None else PeriodicSet.whole(2)
            if not window_tiles(F, A, target, 1, *win):
                continue
        cert = nonperiodicity_certificate(A, cap2, c, radius)
        if any(w is None for w in cert.values()):
            continue
        return SlideWitness(A, (c1, c2), x, win, cert)
    return None


def candidate_directions(F: Tile, cap2: int) -> list[Vector]:
    """Sign-normalised multiples of nonzero tile differences, ``||h||^2 <= cap2``."""
    out = set()
    for f in F:
        for g in F:
            d = sub(f, g)
            if is_zero(d):
                continue
            _, dp = primitive_part(canonical_direction(d))
            n = 1
            while norm2(scale(n, dp)) <= cap2:
                out.add(scale(n, dp))
                n += 1
    return sorted(out, key=lambda v: (norm2(v), v))


@dataclass
class OnePerDecision:
    verdict: str        # AllOnePeriodicUnderBounds, NonOnePeriodicExists, NoTiling
    witness: SlideWitness | None = None
    scaffolds: int = 0
    lattices: int = 0
    chameleon_directions: dict = field(default_factory=dict)

    @property
    def exists(self) -> bool:
        return self.verdict == "NonOnePeriodicExists"


def enumerate_scaffolds(F: Tile, E: PeriodicSet, lattices: Sequence[Lattice],
                        threads: int = 1) -> list[PeriodicSet]:
    seen, out = set(), []
    for L in lattices:
        for A in search_tilings_on_torus(build_torus_instance(F, E, L, 1), threads=threads):
            m = A.minimal
            if m not in seen:
                seen.add(m)
                out.append(m)
    return out


def decide_non_one_periodic(F: Tile, E: PeriodicSet | None = None,
                            scaffold_lattices: Sequence[Lattice] | None = None,
                            direction_cap: int = 32, max_index: int = 16,
                            threads: int = 1) -> OnePerDecision:
    """Search scaffolds for two chameleons on incommensurable lines.

    ``direction_cap`` bounds ``||h||^2``.  A negative answer only covers the
    scaffolds and directions that were searched.
    """
    if E is None:
        E = PeriodicSet.whole(2)
    lats = list(scaffold_lattices) if scaffold_lattices is not None else \
        lattice_schedule(E, max_index)
    if not lats:
        raise PreconditionFailed("empty scaffold schedule")
    scaffolds = enumerate_scaffolds(F, E, lats, threads)
    if not scaffolds:
        return OnePerDecision("NoTiling", None, 0, len(lats))
    dirs = candidate_directions(F, direction_cap)
    dec = OnePerDecision("AllOnePeriodicUnderBounds", None, len(scaffolds), len(lats))
    for A in scaffolds:
        chams = {h: find_chameleon_slices(F, A, h) for h in dirs}
        chams = {h: c for h, c in chams.items() if c}
        for h in chams:
            dec.chameleon_directions[h] = dec.chameleon_directions.get(h, 0) + 1
        hs = list(chams)
        for i, h1 in enumerate(hs):
            for h2 in hs[i + 1:]:
                if wedge(h1, h2) == 0:
                    continue
                for c1 in chams[h1]:
                    for c2 in chams[h2]:
                        w = build_slide_witness(A, c1, c2, F, E, direction_cap)
                        if w is not None:
                            dec.verdict = "NonOnePeriodicExists"
                            dec.witness = w
                            return dec
    return dec
