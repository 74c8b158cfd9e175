"""Weak periodicity of level-one tilings of Z^2.

Given the phi-decomposition ``1_A = 1_E - sum_j phi_j`` with directions
``h_1..h_m``, pick a vector ``e~`` incommensurable with every ``h_j`` and set

    N = lcm |h_i ^ h_j|,   M = lcm |e~ ^ h_j|,   e = q N e~,
    Lambda = <e, q N M h_1>,   L = Q M^2 N q / ell.

On each coset of Lambda the tiling is periodic along ``ell L h_j`` for
some j.  The ray polynomials ``P_{x,j}(n) = phi_j(x + n e)`` drive the
choice of j.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .dilation import PhiDecomposition, require_level_one, structure_decomposition
from .errors import (
    DimensionMismatch,
    NoDirectionFound,
    PreconditionFailed,
    SingleClass,
    ZeroVector,
)
from .lattice import (
    Lattice,
    PeriodicSet,
    Tile,
    Vector,
    add,
    is_zero,
    lcm,
    norm2,
    scale,
    vec,
    wedge,
)


def _angle_cmp(u: Vector, v: Vector) -> int:
    """Counterclockwise angle from +x, compared exactly."""
    def half(w):
        return 0 if w[1] > 0 or (w[1] == 0 and w[0] > 0) else 1
    hu, hv = half(u), half(v)
    if hu != hv:
        return hu - hv
    c = wedge(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def spiral() -> Iterator[Vector]:
    """Z^2 minus the origin by squared norm, then by angle from +x."""
    n = 1
    while True:
        r = math.isqrt(n)
        ring = [(x, y) for x in range(-r, r + 1) for y in range(-r, r + 1)
                if x * x + y * y == n]
        yield from sorted(ring, key=functools.cmp_to_key(_angle_cmp))
        n += 1


def incommensurable_witness(directions: Sequence) -> Vector:
    dirs = [vec(h) for h in directions]
    if any(len(h) != 2 for h in dirs):
        raise DimensionMismatch("planar directions required")
    if any(is_zero(h) for h in dirs):
        raise ZeroVector("directions must be nonzero")
    for v in spiral():
        if all(wedge(v, h) for h in dirs):
            return v
    raise AssertionError("unreachable")


def default_q_m(m: int) -> int:
    """Configured stand-in for the unspecified constant Q_m."""
    return lcm(*range(1, m + 1))


@dataclass(frozen=True)
class WeakConstants:
    e_tilde: Vector
    N: int
    M: int
    e: Vector
    big_lattice: Lattice
    L: int
    Q: int
    Q_config: int
    margins: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class RayPolynomial:
    base: Vector
    j: int
    values: tuple   # one period of n -> P_{x,j}(n)

    @property
    def period(self) -> int:
        return len(self.values)

    def __call__(self, n: int):
        return self.values[n % len(self.values)]

    @property
    def sup(self):
        return max(self.values)

    def minimal_period(self, mod1: bool = False) -> int:
        vals = [v % 1 for v in self.values] if mod1 else list(self.values)
        T = len(vals)
        for p in range(1, T + 1):
            if T % p == 0 and all(vals[i] == vals[(i + p) % T] for i in range(T)):
                return p
        return T


def _margin(value: int, bound: int) -> dict:
    return {"value": value, "bound": bound, "ok": value <= bound}


def ray_polynomials(dec: PhiDecomposition, wc: WeakConstants | Vector, x) -> list[RayPolynomial]:
    e = wc.e if isinstance(wc, WeakConstants) else vec(wc)
    x = vec(x)
    out = []
    for j, c in enumerate(dec.classes):
        t = c.phi.lattice.order_of(e)
        vals, p = [], x
        for _ in range(t):
            vals.append(c.phi(p))
            p = add(p, e)
        out.append(RayPolynomial(x, j, tuple(vals)))
    return out


def _base_constants(dec: PhiDecomposition, ell: int):
    hs = dec.directions
    m = len(hs)
    if m < 2:
        raise SingleClass("a single direction class needs no weak constants")
    N = lcm(*(wedge(hs[i], hs[j]) for i in range(m) for j in range(i + 1, m)))
    et = incommensurable_witness(hs)
    M = lcm(*(wedge(et, h) for h in hs))
    q = dec.q
    e = scale(q * N, et)
    lam = Lattice.from_basis([e, scale(q * N * M, hs[0])])
    return et, N, M, e, lam


def weak_constants(dec: PhiDecomposition, ell: int, Q: int | None = None) -> WeakConstants:
    """All constants; Q defaults to the lcm of the observed ray-polynomial periods."""
    et, N, M, e, lam = _base_constants(dec, ell)
    m, q, F = dec.m, dec.q, dec.tile
    Qc = default_q_m(m)
    if Q is None:
        Q = 1
        for x in dec.A.lattice.residues():
            for P in ray_polynomials(dec, e, x):
                Q = lcm(Q, P.minimal_period())
    if q % ell:
        raise PreconditionFailed("ell must divide q")
    L = Q * M * M * N * q // ell
    d2, n = F.diameter2, len(F)
    hprod = math.prod(norm2(h) for h in dec.directions)
    margins = {
        "index": _margin(lam.index // (ell * ell), d2 ** ((n - 1) ** 2)),
        "N": _margin(N * N, hprod ** (m - 1)),
        "h": _margin(max(norm2(h) for h in dec.directions), d2 ** (n - 1)),
    }
    return WeakConstants(et, N, M, e, lam, L, Q, Qc, margins)


def pxj_base_points(dec: PhiDecomposition) -> list[Vector]:
    """Base points covering every ray polynomial.

    Each phi_j is periodic under the lattice of A, so ``P_{x,j}`` only
    depends on x modulo that lattice; its residues stand in for a full
    fundamental domain of Lambda.
    """
    return list(dec.A.lattice.residues())


@dataclass
class PxjReport:
    sum_ok: bool
    derivative_ok: bool
    sup_ok: bool

    @property
    def ok(self) -> bool:
        return self.sum_ok and self.derivative_ok and self.sup_ok


def verify_ray_polynomial_properties(polys: Sequence[RayPolynomial], m: int) -> PxjReport:
    if len({P.base for P in polys}) > 1:
        raise PreconditionFailed("ray polynomials must share a base point")
    T = lcm(*(P.period for P in polys))
    sum_ok = all(sum(Fraction(P(n)) for P in polys) % 1 == 0 for n in range(T))
    deriv_ok = True
    for P in polys:
        seq = [Fraction(P(n)) % 1 for n in range(T)]
        for _ in range(m - 1):
            seq = [(seq[i] - seq[i - 1]) % 1 for i in range(T)]
        deriv_ok &= not any(seq)
    sups = [P.sup for P in polys]
    sup_ok = all(sups[i] + sups[j] <= 1
                 for i in range(len(sups)) for j in range(i + 1, len(sups)))
    return PxjReport(sum_ok, deriv_ok, sup_ok)


@dataclass(frozen=True)
class WeakPiece:
    """``A`` intersected with one class of ``Lambda + lattice(A)``."""
    representative: Vector
    j: int
    direction: Vector
    period: Vector          # ell * L * h_j
    piece: PeriodicSet


@dataclass
class WeakDecomposition:
    decomposition: PhiDecomposition
    constants: WeakConstants | None
    big_lattice: Lattice
    L: int
    ell: int
    pieces: list[WeakPiece]

    def parts(self) -> list[tuple[PeriodicSet, Vector]]:
        """Union of the pieces per direction, as (A_j, h_j) pairs."""
        byj: dict[int, set] = {}
        for p in self.pieces:
            byj.setdefault(p.j, set()).update(p.piece.residues)
        lat = self.decomposition.A.lattice
        return [(PeriodicSet(lat, frozenset(res)), self.decomposition.directions[j])
                for j, res in sorted(byj.items())]

    def check(self) -> bool:
        """Pieces are disjoint, cover A, and pass their translation tests."""
        A = self.decomposition.A
        seen: set = set()
        for p in self.pieces:
            if seen & p.piece.residues:
                return False
            seen |= p.piece.residues
            if not p.piece.is_periodic_under(p.period):
                return False
        return seen == set(A.residues)


def weak_decompose(F: Tile, A: PeriodicSet, E: PeriodicSet, ell: int = 1,
                   dec: PhiDecomposition | None = None) -> WeakDecomposition:
    if dec is None:
        dec = structure_decomposition(F, A, E, 1, ell)
    require_level_one(dec)
    A = dec.A
    q, hs = dec.q, dec.directions
    if dec.m == 1:
        wc = None
        lam = Lattice.scaled(q, 2)
        L = q // ell
    else:
        wc = weak_constants(dec, ell)
        lam, L = wc.big_lattice, wc.L
    LA = A.lattice
    G = lam.join(LA)
    pieces = []
    for x in G.residues():
        res = frozenset(r for r in A.residues if G.reduce(r) == x)
        piece = PeriodicSet(LA, res)
        order = list(range(dec.m))
        if wc is not None:
            sups = [P.sup for P in ray_polynomials(dec, wc, x)]
            full = [j for j in order if sups[j] == 1]
            if full:
                order.remove(full[0])
                order.insert(0, full[0])
        for j in order:
            v = scale(ell * L, hs[j])
            if piece.is_periodic_under(v):
                pieces.append(WeakPiece(x, j, hs[j], v, piece))
                break
        else:
            raise NoDirectionFound(f"no direction works on the class of {x}")
    return WeakDecomposition(dec, wc, lam, L, ell, pieces)
