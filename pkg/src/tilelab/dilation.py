"""Dilation modulus, ray densities and the exact structure decomposition.

For a periodic tiling ``1_F * 1_A = k 1_E`` every ray density

    phi_f(x) = density of A along x - (1 + nq) f,   n >= 0

is a finite average, because the progression is periodic modulo the
lattice of ``A``.  The decomposition then reads

    1_A = 1_F * 1_A - sum_f phi_f = k 1_E - sum_j phi_j.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DecompositionMismatch,
    DimensionMismatch,
    ModulusOverflow,
    PreconditionFailed,
    ZeroVector,
)
from .lattice import (
    Lattice,
    PeriodicFunction,
    PeriodicSet,
    Tile,
    Vector,
    add,
    canonical_direction,
    commensurable,
    convolve_level,
    is_tiling_of_level,
    is_zero,
    lcm,
    neg,
    norm2,
    primitive_part,
    scale,
    vec,
)


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [p for p in range(n + 1) if sieve[p]]


@dataclass(frozen=True)
class DilationModulus:
    q: int
    ell: int
    cardinality_bound: int


def dilation_modulus(ell: int, F: Tile, g_oscillation: int = 1,
                     max_bits: int | None = None) -> DilationModulus:
    """q = lcm(ell, primes <= 2 * osc * |F|)."""
    if ell <= 0 or g_oscillation <= 0:
        raise ValueError("ell and the oscillation must be positive")
    bound = 2 * g_oscillation * len(F)
    q = lcm(ell, *primes_upto(bound))
    if max_bits is not None and q.bit_length() > max_bits:
        raise ModulusOverflow(f"q={q} needs {q.bit_length()} bits > {max_bits}")
    return DilationModulus(q, ell, bound)


def dilate_tile(F: Tile, r: int) -> Tile:
    if r <= 0:
        raise ValueError("dilation factor must be positive")
    return F.dilate(r)


def is_ell_periodic(g: PeriodicFunction, ell: int) -> bool:
    d = g.dim
    return all(g.is_periodic_under(tuple(ell * (i == j) for j in range(d))) for i in range(d))


@dataclass
class DilationReport:
    q: int
    checked_equal: list[int] = field(default_factory=list)
    checked_periodic: list[int] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)
    violations: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_dilation_lemma(F: Tile, A: PeriodicSet, ell: int, r_list: Sequence[int],
                          g_oscillation: int = 1) -> DilationReport:
    base = convolve_level(F, A)
    if not is_ell_periodic(base, ell):
        raise PreconditionFailed(f"1_F * 1_A is not {ell}Z^d-periodic")
    q = dilation_modulus(ell, F, g_oscillation).q
    rep = DilationReport(q)
    for r in r_list:
        if r % q == 1 % q:
            ok = convolve_level(F.dilate(r), A) == base
            rep.checked_equal.append(r)
        elif math.gcd(r, q) == 1:
            ok = is_ell_periodic(convolve_level(F.dilate(r), A), ell)
            rep.checked_periodic.append(r)
        else:
            rep.skipped.append(r)
            continue
        if not ok:
            rep.violations.append(r)
    return rep


def phi_ray_density(A: PeriodicSet, f, q: int, x) -> Fraction:
    """Density of ``A`` along ``x + (1 + nq) f`` for n = 0, 1, 2, ..."""
    f, x = vec(f), vec(x)
    if is_zero(f):
        raise ZeroVector("ray direction must be nonzero")
    L = A.lattice
    step = scale(q, f)
    t = L.order_of(step)
    p = add(x, f)
    hits = 0
    for _ in range(t):
        hits += p in A
        p = add(p, step)
    return Fraction(hits, t)


def phi_function(A: PeriodicSet, f, q: int) -> PeriodicFunction:
    """``phi_ray_density`` as a function on ``Z^d / lattice(A)``."""
    return PeriodicFunction.from_callable(A.lattice, lambda x: phi_ray_density(A, f, q, x))


@dataclass(frozen=True)
class PhiClass:
    h: Vector
    phi: PeriodicFunction
    members: tuple[Vector, ...]


@dataclass(frozen=True)
class PhiDecomposition:
    tile: Tile
    A: PeriodicSet
    E: PeriodicSet
    k: int
    modulus: DilationModulus
    phi_f: dict
    classes: tuple[PhiClass, ...]

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def m(self) -> int:
        return len(self.classes)

    @property
    def directions(self) -> list[Vector]:
        return [c.h for c in self.classes]

    @property
    def phis(self) -> list[PeriodicFunction]:
        return [c.phi for c in self.classes]

    def h_product_margin(self) -> tuple[int, int]:
        """(prod ||h_j||^2, diam(F)^(2(|F|-1))); the first must not exceed the second."""
        lhs = math.prod(norm2(h) for h in self.directions)
        return lhs, self.tile.diameter2 ** (len(self.tile) - 1)


def commensurability_classes(points: Sequence[Vector]) -> list[list[Vector]]:
    """Group nonzero vectors by commensurability, in order of first appearance."""
    classes: list[list[Vector]] = []
    for p in points:
        for c in classes:
            if commensurable(c[0], p):
                c.append(p)
                break
        else:
            classes.append([p])
    return classes


def class_direction(members: Sequence[Vector]) -> Vector:
    """Primitive direction of the class times the lcm of the multiplicities."""
    _, base = primitive_part(members[0])
    base = canonical_direction(base)
    return scale(lcm(*(primitive_part(f)[0] for f in members)), base)


def structure_decomposition(F: Tile, A: PeriodicSet, E: PeriodicSet, k: int,
                            ell: int) -> PhiDecomposition:
    if F.dim != A.dim or A.dim != E.dim:
        raise DimensionMismatch("tile and sets of different dimension")
    if not F.contains_origin:
        raise PreconditionFailed("tile must contain the origin")
    if len(F) < 2:
        raise PreconditionFailed("need |F| > 1")
    conv = convolve_level(F, A)
    if conv != E.indicator() * k:
        raise PreconditionFailed("A is not a level-k tiling of E by F")
    if not is_ell_periodic(conv, ell):
        raise PreconditionFailed(f"E is not {ell}Z^d-periodic")
    mod = dilation_modulus(ell, F)
    q = mod.q
    nonzero = list(F.nonzero())
    # the minus sign makes the identity below hold exactly
    phi_f = {f: phi_function(A, neg(f), q) for f in nonzero}
    classes = []
    for members in commensurability_classes(nonzero):
        phi = sum((phi_f[f] for f in members[1:]), phi_f[members[0]])
        classes.append(PhiClass(class_direction(members), phi, tuple(members)))
    dec = PhiDecomposition(F, A, E, k, mod, phi_f, tuple(classes))
    _verify(dec, conv)
    return dec


def _verify(dec: PhiDecomposition, conv: PeriodicFunction) -> None:
    ind = dec.A.indicator()
    rhs = conv - sum(dec.phi_f.values(), PeriodicFunction.constant(0, dec.A.dim))
    if rhs != ind:
        raise DecompositionMismatch("1_A != 1_F*1_A - sum phi_f")
    rhs = dec.E.indicator() * dec.k - sum(dec.phis, PeriodicFunction.constant(0, dec.A.dim))
    if rhs != ind:
        raise DecompositionMismatch("1_A != k 1_E - sum phi_j")
    for c in dec.classes:
        if not c.phi.is_periodic_under(scale(dec.q, c.h)):
            raise DecompositionMismatch(f"phi for {c.h} is not <q h>-periodic")
        if not c.phi.all(lambda v: 0 <= v <= dec.k):
            raise DecompositionMismatch(f"phi for {c.h} leaves [0, k]")
    lhs, rhs2 = dec.h_product_margin()
    if lhs > rhs2:
        raise DecompositionMismatch("prod ||h_j|| exceeds diam(F)^(|F|-1)")


def verify_level_one_constraint(dec: PhiDecomposition) -> bool:
    """Pointwise ``sum phi_j <= k`` and ``sum phi_f = 0 mod 1``."""
    zero = PeriodicFunction.constant(0, dec.A.dim)
    total = sum(dec.phis, zero)
    if not total.all(lambda v: v <= dec.k):
        return False
    return sum(dec.phi_f.values(), zero).all(lambda v: Fraction(v).denominator == 1)


def require_level_one(dec: PhiDecomposition) -> None:
    if dec.k != 1:
        raise PreconditionFailed("a level-one tiling is required")
