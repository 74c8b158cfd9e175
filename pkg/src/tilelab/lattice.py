"""Integer lattices, periodic sets and functions, and convolution on Z^d.

Vectors are plain tuples of ints.  Every lattice is kept in a lower
triangular row Hermite normal form::

    [[a, 0],
     [b, c]]      a, c > 0,  0 <= b < a

so equal lattices have identical bases and the box ``[0,a) x [0,c)`` is a
fundamental domain.  Periodic objects store one value per residue of that
box.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    CommensurableDirections,
    DimensionMismatch,
    IncompatibleLattices,
    SingularBasis,
    ZeroVector,
)

Vector = tuple[int, ...]
Number = Union[int, Fraction]


# ---------------------------------------------------------------------------
# vector helpers


def vec(v) -> Vector:
    """Coerce an int or an iterable of ints to a vector tuple."""
    if isinstance(v, int):
        return (v,)
    return tuple(int(c) for c in v)


def add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(r: int, v: Vector) -> Vector:
    return tuple(r * a for a in v)


def neg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def zero(d: int) -> Vector:
    return (0,) * d


def norm2(v: Vector) -> int:
    return sum(a * a for a in v)


def is_zero(v: Vector) -> bool:
    return not any(v)


def wedge(h1: Sequence[int], h2: Sequence[int]) -> int:
    """Determinant of the 2x2 matrix with rows ``h1`` and ``h2``."""
    if len(h1) != 2 or len(h2) != 2:
        raise DimensionMismatch("wedge product needs two planar vectors")
    return h1[0] * h2[1] - h1[1] * h2[0]


def commensurable(u: Vector, v: Vector) -> bool:
    """True when one vector is a rational multiple of the other."""
    if len(u) != len(v):
        raise DimensionMismatch("vectors of different dimension")
    for i, j in itertools.combinations(range(len(u)), 2):
        if u[i] * v[j] - u[j] * v[i]:
            return False
    return True


def cramer_decompose(v, h1, h2) -> tuple[Fraction, Fraction]:
    """Coefficients ``(c1, c2)`` with ``v = c1*h1 + c2*h2``, exactly.

    Multiplying by ``|h1 ^ h2|`` makes both coefficients integral, which
    is the inclusion ``|h1 ^ h2| Z^2 <= <h1, h2>``.
    """
    v, h1, h2 = vec(v), vec(h1), vec(h2)
    w = wedge(h1, h2)
    if w == 0:
        raise CommensurableDirections(f"{h1} and {h2} are commensurable")
    return Fraction(wedge(v, h2), w), Fraction(wedge(v, h1), -w)


def primitive_part(h) -> tuple[int, Vector]:
    """Split ``h = m * h'`` with ``m >= 1`` and ``h'`` primitive."""
    h = vec(h)
    if is_zero(h):
        raise ZeroVector("the zero vector has no primitive part")
    m = math.gcd(*h)
    return m, tuple(a // m for a in h)


def canonical_direction(h: Vector) -> Vector:
    """Sign-normalise so the first nonzero coordinate is positive."""
    for a in h:
        if a:
            return h if a > 0 else neg(h)
    return h


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * abs(v) // math.gcd(out, abs(v)) if v else out
    return out


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def unimodular_to_axis(h: Vector) -> tuple[tuple[Vector, Vector], tuple[Vector, Vector]]:
    """An SL2(Z) matrix ``U`` with ``U h = (1, 0)``, and its inverse.

    ``h`` must be primitive.  Matrices act on column vectors and are given
    as row tuples.  The second coordinate of ``U z`` is ``h ^ z``.
    """
    a, b = h
    g, x, y = extended_gcd(a, b)
    if g != 1:
        raise ValueError(f"{h} is not primitive")
    U = ((x, y), (-b, a))
    Uinv = ((a, -y), (b, x))
    return U, Uinv


def apply(M: tuple[Vector, ...], v: Vector) -> Vector:
    return tuple(sum(m * c for m, c in zip(row, v)) for row in M)


# ---------------------------------------------------------------------------
# Hermite normal form


def _echelon(rows: list[list[int]], columns: Sequence[int]):
    """Integer row reduction on the given columns.

    Returns ``(pivots, rest)`` where ``pivots[j]`` is the unique remaining
    row nonzero in column ``columns[j]`` (or None) and ``rest`` are rows that
    vanish on every listed column.
    """
    active = [list(r) for r in rows]
    pivots: list[list[int] | None] = []
    for j in columns:
        while True:
            nz = [r for r in active if r[j] != 0]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda r: abs(r[j]))
            for r in nz:
                if r is p:
                    continue
                t = r[j] // p[j]
                for c in range(len(r)):
                    r[c] -= t * p[c]
        if nz:
            p = nz[0]
            active = [r for r in active if r is not p]
            pivots.append(p)
        else:
            pivots.append(None)
    return pivots, active


def hermite_normal_form(rows: Iterable[Sequence[int]], d: int) -> tuple[Vector, ...]:
    rows = [list(vec(r)) for r in rows]
    if any(len(r) != d for r in rows):
        raise DimensionMismatch(f"basis rows must have length {d}")
    pivots, _ = _echelon(rows, list(range(d - 1, -1, -1)))
    pivots = pivots[::-1]
    if any(p is None for p in pivots):
        raise SingularBasis("basis does not span a full-rank lattice")
    H = [p if p[i] > 0 else [-c for c in p] for i, p in enumerate(pivots)]
    for i in range(d):
        for j in range(i - 1, -1, -1):
            t = H[i][j] // H[j][j]
            if t:
                H[i] = [a - t * b for a, b in zip(H[i], H[j])]
    return tuple(tuple(r) for r in H)


@dataclass(frozen=True)
class Lattice:
    """Full-rank sublattice of Z^d, stored in canonical HNF."""

    basis: tuple[Vector, ...]

    @classmethod
    def from_basis(cls, rows) -> "Lattice":
        rows = [vec(r) for r in rows]
        if not rows:
            raise SingularBasis("empty basis")
        return cls(hermite_normal_form(rows, len(rows[0])))

    @classmethod
    def from_generators(cls, gens, d: int) -> "Lattice":
        """Lattice spanned by any finite generating set of full rank."""
        return cls(hermite_normal_form([vec(g) for g in gens], d))

    @classmethod
    def scaled(cls, n: int, d: int) -> "Lattice":
        if n <= 0:
            raise SingularBasis("scale must be positive")
        return cls(tuple(tuple(n if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def standard(cls, d: int) -> "Lattice":
        return cls.scaled(1, d)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def diag(self) -> Vector:
        return tuple(self.basis[i][i] for i in range(self.dim))

    @cached_property
    def index(self) -> int:
        return math.prod(self.diag)

    def coordinates(self, x) -> tuple[Vector, Vector]:
        """Split ``x = residue + sum(coeff_i * basis_i)``."""
        x = list(vec(x))
        if len(x) != self.dim:
            raise DimensionMismatch(f"expected a {self.dim}-vector, got {tuple(x)}")
        coeffs = [0] * self.dim
        for j in range(self.dim - 1, -1, -1):
            row = self.basis[j]
            t = x[j] // row[j]
            if t:
                coeffs[j] = t
                for c in range(j + 1):
                    x[c] -= t * row[c]
        return tuple(x), tuple(coeffs)

    def reduce(self, x) -> Vector:
        return self.coordinates(x)[0]

    def residue_index(self, r: Vector) -> int:
        i = 0
        for a, n in zip(r, self.diag):
            i = i * n + a
        return i

    def residue_at(self, i: int) -> Vector:
        out = []
        for n in reversed(self.diag):
            i, a = divmod(i, n)
            out.append(a)
        return tuple(reversed(out))

    def index_of(self, x) -> int:
        return self.residue_index(self.reduce(x))

    def residues(self) -> Iterator[Vector]:
        """Fundamental-domain residues in canonical (lexicographic) order."""
        return itertools.product(*(range(n) for n in self.diag))

    def __contains__(self, x) -> bool:
        return is_zero(self.reduce(x))

    def contains_lattice(self, other: "Lattice") -> bool:
        """True when ``other`` is a sublattice of ``self``."""
        return all(b in self for b in other.basis)

    def intersect(self, other: "Lattice") -> "Lattice":
        if other.dim != self.dim:
            raise DimensionMismatch("lattices of different dimension")
        if self.contains_lattice(other):
            return other
        if other.contains_lattice(self):
            return self
        d = self.dim
        rows = [list(b) + list(b) for b in self.basis]
        rows += [list(b) + [0] * d for b in other.basis]
        _, rest = _echelon(rows, list(range(d)))
        return Lattice(hermite_normal_form([r[d:] for r in rest if any(r[d:])], d))

    def join(self, other: "Lattice") -> "Lattice":
        """The sum lattice ``self + other``."""
        if other.dim != self.dim:
            raise DimensionMismatch("lattices of different dimension")
        return Lattice(hermite_normal_form(list(self.basis) + list(other.basis), self.dim))

    def order_of(self, v) -> int:
        """Least ``n > 0`` with ``n*v`` in the lattice."""
        v = vec(v)
        x, n = v, 1
        while x not in self:
            x, n = add(x, v), n + 1
        return n

    @cached_property
    def exponent(self) -> int:
        """Least ``n`` with ``n Z^d`` contained in the lattice."""
        return lcm(*(self.order_of(tuple(int(i == j) for j in range(self.dim)))
                     for i in range(self.dim)))

    def transform(self, M) -> "Lattice":
        """Image under an integer matrix ``M`` (rows) acting on columns."""
        return Lattice.from_basis([apply(M, b) for b in self.basis])

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.basis]

    def __repr__(self) -> str:
        return f"Lattice({[list(r) for r in self.basis]})"


def canonicalize_lattice(basis) -> Lattice:
    return Lattice.from_basis(basis)


def sublattices(d: int, index: int) -> Iterator[Lattice]:
    """All sublattices of Z^d of the given index, in canonical order."""
    if d == 1:
        yield Lattice(((index,),))
        return
    if d != 2:
        raise DimensionMismatch("only d in {1, 2} is supported")
    for a in range(1, index + 1):
        if index % a:
            continue
        c = index // a
        for b in range(a):
            yield Lattice(((a, 0), (b, c)))


# ---------------------------------------------------------------------------
# tiles


@dataclass(frozen=True)
class Tile:
    """Finite nonempty subset of Z^d."""

    elements: tuple[Vector, ...]

    def __post_init__(self):
        els = [vec(e) for e in self.elements]
        if not els:
            raise ValueError("a tile must be nonempty")
        if len(set(els)) != len(els):
            raise ValueError("a tile has no repeated elements")
        dims = {len(e) for e in els}
        if len(dims) != 1:
            raise DimensionMismatch("tile elements of mixed dimension")
        object.__setattr__(self, "elements", tuple(sorted(els)))

    @classmethod
    def of(cls, *points) -> "Tile":
        return cls(tuple(vec(p) for p in points))

    @property
    def dim(self) -> int:
        return len(self.elements[0])

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return vec(x) in self.elements

    @property
    def contains_origin(self) -> bool:
        return zero(self.dim) in self.elements

    def normalized(self) -> "Tile":
        """Translate so the lexicographically least element sits at 0."""
        if self.contains_origin:
            return self
        base = self.elements[0]
        return Tile(tuple(sub(e, base) for e in self.elements))

    def translate(self, v) -> "Tile":
        v = vec(v)
        return Tile(tuple(add(e, v) for e in self.elements))

    def dilate(self, r: int) -> "Tile":
        return Tile(tuple(scale(r, e) for e in self.elements))

    @cached_property
    def diameter2(self) -> int:
        """Squared Euclidean diameter (exact)."""
        return max((norm2(sub(a, b)) for a, b in itertools.combinations(self.elements, 2)),
                   default=0)

    def nonzero(self) -> tuple[Vector, ...]:
        return tuple(e for e in self.elements if not is_zero(e))

    def as_lists(self) -> list[list[int]]:
        return [list(e) for e in self.elements]

    def __repr__(self) -> str:
        return f"Tile({[list(e) for e in self.elements]})"


# ---------------------------------------------------------------------------
# periodic sets and functions


def _check_dim(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension {a.dim} vs {b.dim}")


@dataclass(frozen=True, eq=False)
class PeriodicSet:
    """A lattice-periodic subset of Z^d: a lattice plus residues."""

    lattice: Lattice
    residues: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        L = self.lattice
        object.__setattr__(self, "residues", frozenset(L.reduce(r) for r in self.residues))

    @classmethod
    def from_points(cls, lattice, points) -> "PeriodicSet":
        if not isinstance(lattice, Lattice):
            lattice = Lattice.from_basis(lattice)
        return cls(lattice, frozenset(vec(p) for p in points))

    @classmethod
    def whole(cls, d: int) -> "PeriodicSet":
        L = Lattice.standard(d)
        return cls(L, frozenset([zero(d)]))

    @classmethod
    def empty(cls, d: int) -> "PeriodicSet":
        return cls(Lattice.standard(d), frozenset())

    @classmethod
    def from_predicate(cls, lattice: Lattice, pred: Callable[[Vector], bool]) -> "PeriodicSet":
        return cls(lattice, frozenset(r for r in lattice.residues() if pred(r)))

    @property
    def dim(self) -> int:
        return self.lattice.dim

    def __contains__(self, x) -> bool:
        return self.lattice.reduce(x) in self.residues

    def sorted_residues(self) -> list[Vector]:
        return sorted(self.residues)

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.residues), self.lattice.index)

    def refine(self, sub_lattice: Lattice) -> "PeriodicSet":
        """Same set, re-expressed over a sublattice of the current one."""
        if not self.lattice.contains_lattice(sub_lattice):
            raise IncompatibleLattices(f"{sub_lattice} is not inside {self.lattice}")
        if sub_lattice == self.lattice:
            return self
        return PeriodicSet(sub_lattice, frozenset(r for r in sub_lattice.residues() if r in self))

    def indicator(self) -> "PeriodicFunction":
        L = self.lattice
        return PeriodicFunction(L, tuple(int(r in self.residues) for r in L.residues()))

    def translate(self, v) -> "PeriodicSet":
        v = vec(v)
        return PeriodicSet(self.lattice, frozenset(add(r, v) for r in self.residues))

    def is_periodic_under(self, v) -> bool:
        v = vec(v)
        L = self.lattice
        return all(L.reduce(add(r, v)) in self.residues for r in self.residues)

    @cached_property
    def period_lattice(self) -> Lattice:
        """The full group of periods (a lattice containing ``self.lattice``)."""
        L = self.lattice
        if not self.residues or len(self.residues) == L.index:
            return Lattice.standard(self.dim)
        extra = [r for r in L.residues() if not is_zero(r) and self.is_periodic_under(r)]
        return Lattice.from_generators(list(L.basis) + extra, self.dim)

    @cached_property
    def minimal(self) -> "PeriodicSet":
        P = self.period_lattice
        if P == self.lattice:
            return self
        return PeriodicSet(P, frozenset(P.reduce(r) for r in self.residues))

    def _joint(self, other: "PeriodicSet"):
        _check_dim(self, other)
        J = self.lattice.intersect(other.lattice)
        return J, self.refine(J), other.refine(J)

    def union(self, other: "PeriodicSet") -> "PeriodicSet":
        J, a, b = self._joint(other)
        return PeriodicSet(J, a.residues | b.residues)

    def intersection(self, other: "PeriodicSet") -> "PeriodicSet":
        J, a, b = self._joint(other)
        return PeriodicSet(J, a.residues & b.residues)

    def difference(self, other: "PeriodicSet") -> "PeriodicSet":
        J, a, b = self._joint(other)
        return PeriodicSet(J, a.residues - b.residues)

    def isdisjoint(self, other: "PeriodicSet") -> bool:
        _, a, b = self._joint(other)
        return a.residues.isdisjoint(b.residues)

    def transform(self, M) -> "PeriodicSet":
        """Image under a unimodular matrix ``M``."""
        L = self.lattice.transform(M)
        return PeriodicSet(L, frozenset(apply(M, r) for r in self.residues))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PeriodicSet):
            return NotImplemented
        a, b = self.minimal, other.minimal
        return a.lattice == b.lattice and a.residues == b.residues

    def __hash__(self) -> int:
        m = self.minimal
        return hash((m.lattice, m.residues))

    def sort_key(self):
        m = self.minimal
        return (m.lattice.index, m.lattice.basis, tuple(sorted(m.residues)))

    def __repr__(self) -> str:
        return f"PeriodicSet({[list(r) for r in self.lattice.basis]}, {self.sorted_residues()})"


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """A lattice-periodic function Z^d -> Q, one value per residue.

    ``values`` is aligned with ``lattice.residues()``.
    """

    lattice: Lattice
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.lattice.index:
            raise ValueError("values must cover the fundamental domain")

    @classmethod
    def from_mapping(cls, lattice: Lattice, mapping: Mapping[Vector, Number]) -> "PeriodicFunction":
        return cls(lattice, tuple(mapping[r] for r in lattice.residues()))

    @classmethod
    def from_callable(cls, lattice: Lattice, fn: Callable[[Vector], Number]) -> "PeriodicFunction":
        return cls(lattice, tuple(fn(r) for r in lattice.residues()))

    @classmethod
    def constant(cls, c: Number, d: int) -> "PeriodicFunction":
        return cls(Lattice.standard(d), (c,))

    @property
    def dim(self) -> int:
        return self.lattice.dim

    def __call__(self, x) -> Number:
        return self.values[self.lattice.index_of(x)]

    def items(self):
        return zip(self.lattice.residues(), self.values)

    def as_dict(self) -> dict[Vector, Number]:
        return dict(self.items())

    def refine(self, sub_lattice: Lattice) -> "PeriodicFunction":
        if not self.lattice.contains_lattice(sub_lattice):
            raise IncompatibleLattices(f"{sub_lattice} is not inside {self.lattice}")
        if sub_lattice == self.lattice:
            return self
        return PeriodicFunction(sub_lattice, tuple(self(r) for r in sub_lattice.residues()))

    def _binary(self, other, op) -> "PeriodicFunction":
        if not isinstance(other, PeriodicFunction):
            return PeriodicFunction(self.lattice, tuple(op(v, other) for v in self.values))
        _check_dim(self, other)
        J = self.lattice.intersect(other.lattice)
        a, b = self.refine(J), other.refine(J)
        return PeriodicFunction(J, tuple(op(x, y) for x, y in zip(a.values, b.values)))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binary(other, lambda x, y: y - x)

    def __mul__(self, c):
        return self._binary(c, lambda x, y: x * y)

    __rmul__ = __mul__

    def __neg__(self):
        return PeriodicFunction(self.lattice, tuple(-v for v in self.values))

    def map(self, fn) -> "PeriodicFunction":
        return PeriodicFunction(self.lattice, tuple(fn(v) for v in self.values))

    def mod1(self) -> "PeriodicFunction":
        return self.map(lambda v: Fraction(v) % 1)

    def shift(self, v) -> "PeriodicFunction":
        """``x -> f(x - v)``."""
        v = vec(v)
        return PeriodicFunction.from_callable(self.lattice, lambda r: self(sub(r, v)))

    def is_periodic_under(self, v) -> bool:
        v = vec(v)
        return all(self(add(r, v)) == val for r, val in self.items())

    def is_constant(self) -> bool:
        return len(set(self.values)) <= 1

    def min(self):
        return min(self.values)

    def max(self):
        return max(self.values)

    def all(self, pred) -> bool:
        return all(pred(v) for v in self.values)

    @cached_property
    def period_lattice(self) -> Lattice:
        L = self.lattice
        if self.is_constant():
            return Lattice.standard(self.dim)
        extra = [r for r in L.residues() if not is_zero(r) and self.is_periodic_under(r)]
        return Lattice.from_generators(list(L.basis) + extra, self.dim)

    @cached_property
    def minimal(self) -> "PeriodicFunction":
        P = self.period_lattice
        if P == self.lattice:
            return self
        return PeriodicFunction.from_callable(P, self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PeriodicFunction):
            return NotImplemented
        _check_dim(self, other)
        J = self.lattice.intersect(other.lattice)
        return self.refine(J).values == other.refine(J).values

    def __hash__(self) -> int:
        m = self.minimal
        return hash((m.lattice, m.values))

    def __repr__(self) -> str:
        return f"PeriodicFunction({[list(r) for r in self.lattice.basis]}, {self.as_dict()})"


# the level functions are integer valued, the phi functions rational valued
PeriodicIntFunction = PeriodicFunction
PeriodicRationalFunction = PeriodicFunction


# ---------------------------------------------------------------------------
# convolution and levels


def convolve_level(F: Tile, A: PeriodicSet) -> PeriodicFunction:
    """``1_F * 1_A`` as a function on ``Z^d / lattice(A)``."""
    _check_dim(F, A)
    L = A.lattice
    counts = [0] * L.index
    for a in A.residues:
        for f in F.elements:
            counts[L.index_of(add(a, f))] += 1
    return PeriodicFunction(L, tuple(counts))


def convolve(F: Tile, g: PeriodicFunction) -> PeriodicFunction:
    """``1_F * g`` for a periodic function ``g``."""
    _check_dim(F, g)
    return PeriodicFunction.from_callable(
        g.lattice, lambda x: sum(g(sub(x, f)) for f in F.elements))


def level_target(E: PeriodicSet, k: int) -> PeriodicFunction:
    return E.indicator() * k


def is_tiling_of_level(F: Tile, A: PeriodicSet, E: PeriodicSet, k: int) -> bool:
    """True iff ``1_F * 1_A = k 1_E`` everywhere."""
    _check_dim(F, A)
    _check_dim(A, E)
    return convolve_level(F, A) == level_target(E, k)


def discrete_derivative(f: PeriodicFunction, h) -> PeriodicFunction:
    """``x -> f(x) - f(x - h)``."""
    return f - f.shift(h)
