"""Slicing along a direction, and turning one-periodic or weakly periodic
tilings into doubly periodic ones.

After a unimodular change of coordinates taking the primitive direction
``h'`` to (1, 0), a point ``x`` becomes ``(u, z)`` with ``z = h' ^ x``.
The slice ``A_z`` is the word ``u -> 1_A(u, z)`` over one period ``P``
along ``h'``.  Two slices are equivalent when every horizontal slice
``F_y`` of the tile convolves them to the same function; replacing each
slice by the least equivalent word that occurs yields the periodic set.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence, Union

from .dilation import dilation_modulus, is_ell_periodic
from .errors import (
    CommensurableDirections,
    DecompositionMismatch,
    NotLevelOne,
    PartsNotDisjoint,
    PreconditionFailed,
    ZeroVector,
)
from .lattice import (
    Lattice,
    PeriodicSet,
    Tile,
    Vector,
    apply,
    commensurable,
    convolve_level,
    is_zero,
    lcm,
    norm2,
    primitive_part,
    scale,
    sub,
    unimodular_to_axis,
    vec,
    wedge,
)
from .slide import SlideTiling

SetLike = Union[PeriodicSet, SlideTiling]


@dataclass(frozen=True)
class SliceParams:
    h: Vector
    h_primitive: Vector
    k_mult: int
    s: int
    q: int

    def s_bound_margin(self, F: Tile) -> tuple[int, int]:
        """(s^2, (||h'||^2 diam^2)^(|F|(|F|-1)/2)); the first must not exceed the second."""
        n = len(F)
        return self.s * self.s, (norm2(self.h_primitive) * F.diameter2) ** (n * (n - 1) // 2)


def slice_params(F: Tile, h, ell: int = 1) -> SliceParams:
    h = vec(h)
    if len(h) != 2:
        raise PreconditionFailed("planar direction required")
    if is_zero(h):
        raise ZeroVector("slice direction must be nonzero")
    m, hp = primitive_part(h)
    s = lcm(*(wedge(hp, sub(f, g)) for f in F for g in F))
    return SliceParams(h, hp, m, s, dilation_modulus(ell, F).q)


def tile_slices(F: Tile, hp: Vector) -> dict[int, Tile]:
    """F split along the lines parallel to ``hp``, keyed by ``hp ^ f``."""
    out: dict[int, list] = {}
    for f in F:
        out.setdefault(wedge(hp, f), []).append(f)
    return {k: Tile(tuple(v)) for k, v in sorted(out.items())}


@dataclass
class SliceLemmaReport:
    params: SliceParams
    k: int
    period: int                  # q k s
    slices: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.slices.values())


def verify_slice_lemma(F: Tile, A: PeriodicSet, h, ell: int = 1, k: int = 1) -> SliceLemmaReport:
    p = slice_params(F, h, ell)
    kk = k * p.k_mult
    if not A.is_periodic_under(scale(ell * kk, p.h_primitive)):
        raise PreconditionFailed("A is not periodic along ell k h")
    if not is_ell_periodic(convolve_level(F, A), ell):
        raise PreconditionFailed(f"1_F * 1_A is not {ell}Z^2-periodic")
    qks = p.q * kk * p.s
    rep = SliceLemmaReport(p, kk, qks)
    for key, G in tile_slices(F, p.h_primitive).items():
        rep.slices[key] = is_ell_periodic(convolve_level(G, A), qks)
    return rep


# ---------------------------------------------------------------------------
# one-periodic improvement


class _Frame:
    """Coordinates with ``h'`` along the first axis."""

    def __init__(self, hp: Vector):
        self.U, self.Uinv = unimodular_to_axis(hp)

    def to(self, x) -> Vector:
        return apply(self.U, x)

    def back(self, x) -> Vector:
        return apply(self.Uinv, x)


def _slice_key(Fy: dict, word: tuple, P: int) -> tuple:
    key = []
    for v, G in Fy.items():
        conv = [0] * P
        for u, bit in enumerate(word):
            if bit:
                for f in G:
                    conv[(u + f) % P] += 1
        key.append((v, tuple(conv)))
    return tuple(key)


def _minimal_period(seq: Sequence) -> int:
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and all(seq[i] == seq[i % p] for i in range(n)):
            return p
    return n


@dataclass
class ImproveReport:
    result: PeriodicSet
    direction: Vector
    word_period: int             # P, along h'
    slice_period: int            # period of the slice classes across lines
    qks: int
    classes: int
    within_bound: bool           # slice_period divides qks


def improve_one_periodic_report(F: Tile, A: SetLike, h, ell: int = 1, k: int = 1) -> ImproveReport:
    p = slice_params(F, h, ell)
    hp = p.h_primitive
    kk = k * p.k_mult
    scaffold = A.scaffold if isinstance(A, SlideTiling) else A
    subs = A.substitutions if isinstance(A, SlideTiling) else ()
    if subs and not A.is_parallel_to(hp):
        raise PreconditionFailed("substitutions must be parallel to the direction")
    P = ell * kk
    for s in subs:
        P = lcm(P, len(s.word))
    if not scaffold.is_periodic_under(scale(P, hp)):
        raise PreconditionFailed("A is not periodic along ell k h")
    if not is_ell_periodic(convolve_level(F, scaffold), ell):
        raise PreconditionFailed(f"1_F * 1_A is not {ell}Z^2-periodic")
    fr = _Frame(hp)
    T = scaffold.lattice.transform(fr.U)
    Zs = T.order_of((0, 1))
    Fy = {v: [fr.to(f)[0] for f in G] for v, G in tile_slices(F, hp).items()}

    def word_at(member, z):
        return tuple(int(member(fr.back((u, z)))) for u in range(P))

    words = [word_at(scaffold.__contains__, z) for z in range(Zs)]
    keys = [_slice_key(Fy, w, P) for w in words]
    occurring = {}
    for w, key in zip(words, keys):
        occurring.setdefault(key, set()).add(w)
    for s in subs:
        z0 = fr.to(s.base)[1]
        w = word_at(lambda x: A.value(x) == 1, z0)
        key = _slice_key(Fy, w, P)
        if key != keys[z0 % Zs]:
            raise PreconditionFailed(f"substitution at {s.base} changes 1_F * 1_A")
        occurring[key].add(w)
    best = {key: min(ws) for key, ws in occurring.items()}
    Zp = _minimal_period(keys)
    pts = [fr.back((u, z)) for z in range(Zp) for u, bit in enumerate(best[keys[z]]) if bit]
    lat = Lattice.from_basis([fr.back((P, 0)), fr.back((0, Zp))])
    out = PeriodicSet(lat, frozenset(pts))
    qks = p.q * kk * p.s
    return ImproveReport(out, hp, P, Zp, qks, len(best), qks % Zp == 0)


def improve_one_periodic(F: Tile, A: SetLike, h, ell: int = 1, k: int = 1) -> PeriodicSet:
    return improve_one_periodic_report(F, A, h, ell, k).result


def line_convolution(F: Tile, member, hp: Vector, z: int, P: int) -> Counter:
    """``1_F * 1_{A cap line z}`` over one period P along ``hp``, keyed by (u mod P, v)."""
    fr = _Frame(hp)
    out: Counter = Counter()
    offs = [fr.to(f) for f in F]
    for u in range(P):
        if member(fr.back((u, z))):
            for fu, fv in offs:
                out[((u + fu) % P, z + fv)] += 1
    return out


def coset_equivalent(F: Tile, A: SetLike, B: SetLike, hp: Vector, lines: Sequence[int],
                     P: int) -> bool:
    """True when every listed line of A and B convolves with F identically."""
    ma = (lambda x: A.value(x) == 1) if isinstance(A, SlideTiling) else A.__contains__
    mb = (lambda x: B.value(x) == 1) if isinstance(B, SlideTiling) else B.__contains__
    return all(line_convolution(F, ma, hp, z, P) == line_convolution(F, mb, hp, z, P)
               for z in lines)


# ---------------------------------------------------------------------------
# weakly periodic improvement


@dataclass
class WeakImprovement:
    result: PeriodicSet
    N: list[int]
    M: int
    parts: list[PeriodicSet]
    margins: dict = field(default_factory=dict)


def improve_weak_tiling(F: Tile, E: PeriodicSet, parts: Sequence[tuple[PeriodicSet, Vector]],
                        ell: int = 1) -> WeakImprovement:
    parts = [(A, vec(h)) for A, h in parts]
    if not parts:
        raise PreconditionFailed("no parts given")
    dirs = [h for _, h in parts]
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            if commensurable(dirs[i], dirs[j]):
                raise CommensurableDirections(f"{dirs[i]} and {dirs[j]} are commensurable")
    union = parts[0][0]
    for A, _ in parts[1:]:
        if not union.isdisjoint(A):
            raise PartsNotDisjoint("the parts overlap")
        union = union.union(A)
    if convolve_level(F, union) != E.indicator():
        raise NotLevelOne("the parts do not tile E at level one")

    Ns, improved = [], []
    for A, h in parts:
        conv = convolve_level(F, A).minimal
        Nj = lcm(conv.lattice.exponent, ell) // ell
        ellj = ell * Nj
        _, hp = primitive_part(h)
        t = A.period_lattice.order_of(hp)
        kj = t // math.gcd(t, ellj)
        improved.append(improve_one_periodic(F, A, hp, ellj, kj))
        Ns.append(Nj)
    out = improved[0]
    for B in improved[1:]:
        if not out.isdisjoint(B):
            raise DecompositionMismatch("improved parts overlap")
        out = out.union(B)
    out = out.minimal
    if convolve_level(F, out) != E.indicator():
        raise DecompositionMismatch("improved set does not tile E")
    M = lcm(out.lattice.exponent, ell) // ell

    n, m = len(F), len(parts)
    hprod = math.prod(norm2(h) for h in dirs)
    e2 = n * (n - 1) // 2
    margins = {
        "M": {"value": M * M, "bound": hprod ** (m + e2) * F.diameter2 ** (m * e2)},
        "N": [{"value": Nj * Nj, "bound": hprod ** (m - 1) * norm2(h)}
              for Nj, h in zip(Ns, dirs)],
    }
    margins["M"]["ok"] = margins["M"]["value"] <= margins["M"]["bound"]
    for d in margins["N"]:
        d["ok"] = d["value"] <= d["bound"]
    return WeakImprovement(out, Ns, M, improved, margins)
