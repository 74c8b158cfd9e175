import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilelab import (
    CommensurableDirections,
    DimensionMismatch,
    Lattice,
    PeriodicFunction,
    PeriodicSet,
    SingularBasis,
    Tile,
    ZeroVector,
    canonicalize_lattice,
    convolve,
    convolve_level,
    cramer_decompose,
    discrete_derivative,
    is_tiling_of_level,
    primitive_part,
    wedge,
)
from tilelab.lattice import sublattices

from . import oracles

small = st.integers(-6, 6)
vec2 = st.tuples(small, small)


def _nonsingular(uv):
    u, v = uv
    if u == (0, 0):
        u = (1, 0)
    if wedge(u, v) == 0:
        v = (v[0] - u[1], v[1] + u[0])
    return [u, v]


def bases():
    return st.tuples(vec2, vec2).map(_nonsingular)


@st.composite
def psets(draw):
    a = draw(st.integers(1, 4))
    c = draw(st.integers(1, 4))
    b = draw(st.integers(0, a - 1))
    L = Lattice.from_basis([[a, 0], [b, c]])
    res = draw(st.sets(st.tuples(st.integers(0, a - 1), st.integers(0, c - 1))))
    return PeriodicSet.from_points(L, res)


tiles2 = st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4).map(
    lambda s: Tile(tuple(s | {(0, 0)})))


# -- canonical form


def test_hnf_examples():
    L = canonicalize_lattice([[2, 0], [0, 2]])
    assert L.basis == ((2, 0), (0, 2)) and L.index == 4
    assert canonicalize_lattice([[1, 1], [0, 1]]).index == 1


def test_hnf_index_by_counting_box_residues():
    L = canonicalize_lattice([[4, 0], [2, 2]])
    assert L.index == 8
    # classes of an 8x8 box under the oracle's span test
    reps = []
    for x in itertools.product(range(8), repeat=2):
        if not any(oracles.in_span([[4, 0], [2, 2]], (x[0] - r[0], x[1] - r[1])) for r in reps):
            reps.append(x)
    assert len(reps) == 8


def test_singular_basis_rejected():
    with pytest.raises(SingularBasis):
        canonicalize_lattice([[1, 2], [2, 4]])


@given(bases())
def test_canonical_form_is_order_independent_and_idempotent(b):
    L = canonicalize_lattice(b)
    assert canonicalize_lattice(b[::-1]) == L
    assert canonicalize_lattice(L.basis) == L
    assert L.index == abs(wedge(*b))
    for v in b:
        assert v in L


@given(bases(), vec2)
def test_membership_matches_cramer_oracle(b, x):
    assert (x in canonicalize_lattice(b)) == oracles.in_span(b, x)


@given(bases(), bases())
def test_intersection_and_join(b1, b2):
    L1, L2 = canonicalize_lattice(b1), canonicalize_lattice(b2)
    I, J = L1.intersect(L2), L1.join(L2)
    assert L1.contains_lattice(I) and L2.contains_lattice(I)
    assert J.contains_lattice(L1) and J.contains_lattice(L2)
    assert I.index * J.index == L1.index * L2.index


def test_sublattice_counts_match_divisor_sums():
    # the number of index-n sublattices of Z^2 is sigma(n)
    for n in range(1, 13):
        sigma = sum(d for d in range(1, n + 1) if n % d == 0)
        assert len(set(sublattices(2, n))) == sigma


# -- vectors


def test_wedge_examples():
    assert wedge((1, 0), (0, 1)) == 1
    assert wedge((2, 4), (1, 2)) == 0
    assert wedge((3, 1), (1, 2)) == 5
    with pytest.raises(DimensionMismatch):
        wedge((1,), (2,))


@given(vec2, vec2, vec2, small)
def test_wedge_antisymmetric_bilinear(u, v, w, r):
    assert wedge(u, v) == -wedge(v, u)
    uv = (u[0] + r * v[0], u[1] + r * v[1])
    assert wedge(uv, w) == wedge(u, w) + r * wedge(v, w)


def test_cramer_examples():
    assert cramer_decompose((5, 3), (1, 0), (0, 1)) == (5, 3)
    assert cramer_decompose((2, 7), (2, 7), (1, 0)) == (1, 0)
    assert cramer_decompose((1, 0), (1, 1), (1, -1)) == (Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(CommensurableDirections):
        cramer_decompose((1, 0), (1, 1), (2, 2))


@settings(max_examples=1000)
@given(vec2, bases())
def test_cramer_reconstructs(v, b):
    c1, c2 = cramer_decompose(v, *b)
    assert tuple(c1 * p + c2 * q for p, q in zip(*b)) == v
    # |h1 ^ h2| v lies in the lattice spanned by h1 and h2
    w = abs(wedge(*b))
    assert (w * c1).denominator == 1 and (w * c2).denominator == 1


def test_primitive_part_examples():
    assert primitive_part((3, 0)) == (3, (1, 0))
    assert primitive_part((2, 3)) == (1, (2, 3))
    assert primitive_part((6, -4)) == (2, (3, -2))
    with pytest.raises(ZeroVector):
        primitive_part((0, 0))


# -- convolution


def test_convolve_level_examples():
    assert convolve_level(Tile.of((0, 0)), PeriodicSet.whole(2)).is_constant()
    F0 = Tile.of((0, 0), (1, 0), (0, 1), (1, 1))
    c = convolve_level(F0, PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)]))
    assert c.is_constant() and c((0, 0)) == 1
    c = convolve_level(Tile.of((0,), (1,)), PeriodicSet.from_points([[3]], [(0,)]))
    assert [c((r,)) for r in range(3)] == [1, 1, 0]


def test_is_tiling_of_level_examples():
    F0 = Tile.of((0, 0), (1, 0), (0, 1), (1, 1))
    Z2 = PeriodicSet.whole(2)
    assert is_tiling_of_level(F0, PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)]), Z2, 1)
    assert is_tiling_of_level(Tile.of((0, 0)), Z2, Z2, 1)
    two = PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0), (1, 0)])
    assert is_tiling_of_level(F0, two, Z2, 2)
    assert not is_tiling_of_level(F0, two, Z2, 1)


@given(tiles2, psets())
def test_convolution_matches_pointwise_oracle(F, A):
    conv = convolve_level(F, A)
    member = A.__contains__
    for x in itertools.product(range(-2, 5), repeat=2):
        assert conv(x) == oracles.conv_at(F, member, x)


@given(tiles2, psets())
def test_convolution_mass(F, A):
    # sum over a fundamental domain of the convolution lattice = |F| |A cap domain|
    conv = convolve_level(F, A)
    ratio = conv.lattice.index // A.lattice.index
    assert sum(conv.values) == len(F) * len(A.residues) * ratio


def test_discrete_derivative_examples():
    L = Lattice.scaled(2, 2)
    f = PeriodicSet.from_points(L, [(0, 0), (0, 1)]).indicator()
    d = discrete_derivative(f, (1, 0))
    assert d((0, 0)) == 1 and d((0, 1)) == 1 and d((1, 0)) == -1 and d((1, 1)) == -1
    assert discrete_derivative(PeriodicFunction.constant(3, 2), (1, 2)).is_constant()
    assert discrete_derivative(f, (2, 4)).all(lambda v: v == 0)


@given(psets(), vec2, vec2)
def test_derivatives_commute(A, h1, h2):
    f = A.indicator()
    assert discrete_derivative(discrete_derivative(f, h1), h2) == \
        discrete_derivative(discrete_derivative(f, h2), h1)


@given(psets(), tiles2, vec2)
def test_derivative_commutes_with_convolution(A, F, h):
    f = A.indicator()
    assert discrete_derivative(convolve(F, f), h) == convolve(F, discrete_derivative(f, h))


@given(psets(), psets())
def test_set_algebra_against_pointwise_membership(A, B):
    U, I, D = A.union(B), A.intersection(B), A.difference(B)
    for x in itertools.product(range(-3, 5), repeat=2):
        a, b = x in A, x in B
        assert (x in U) == (a or b)
        assert (x in I) == (a and b)
        assert (x in D) == (a and not b)


@given(psets())
def test_minimal_form_is_canonical(A):
    M = A.minimal
    assert M == A
    assert A.lattice.index % M.lattice.index == 0 or not A.residues
    for x in itertools.product(range(-2, 6), repeat=2):
        assert (x in M) == (x in A)


def test_tile_normalisation_and_diameter():
    F = Tile.of((1, 1), (2, 1), (1, 3))
    assert not F.contains_origin
    assert F.normalized().contains_origin
    assert F.diameter2 == 5
    with pytest.raises(ValueError):
        Tile(((0, 0), (0, 0)))
