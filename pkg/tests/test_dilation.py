import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilelab import PeriodicFunction, PeriodicSet, PreconditionFailed, Tile, convolve_level, wedge
from tilelab.corpus import default_corpus
from tilelab.dilation import (
    dilate_tile,
    dilation_modulus,
    phi_ray_density,
    structure_decomposition,
    verify_dilation_lemma,
    verify_level_one_constraint,
)
from tilelab.errors import ModulusOverflow
from tilelab.lattice import norm2, primitive_part
from tilelab.search2d import build_torus_instance, search_tilings_on_torus
from tilelab.lattice import Lattice

from . import oracles

Z1 = PeriodicSet.whole(1)
Z2 = PeriodicSet.whole(2)
F0 = Tile.of((0, 0), (1, 0), (0, 1), (1, 1))


def test_modulus_examples():
    assert dilation_modulus(1, Tile.of((0,), (1,))).q == 6
    assert dilation_modulus(4, Tile.of((0,), (1,))).q == 12
    assert dilation_modulus(1, F0).q == 210
    assert dilation_modulus(1, F0, g_oscillation=2).cardinality_bound == 16


def test_modulus_overflow_is_reported():
    with pytest.raises(ModulusOverflow):
        dilation_modulus(1, F0, max_bits=4)


def test_dilate_tile_examples():
    assert dilate_tile(F0, 1) == F0
    assert dilate_tile(F0, 3) == Tile.of((0, 0), (3, 0), (0, 3), (3, 3))
    assert dilate_tile(Tile.of((0, 0), (1, 2)), 5) == Tile.of((0, 0), (5, 10))


def test_dilation_examples():
    F = Tile.of((0,), (1,))
    A = PeriodicSet.from_points([[2]], [(0,)])
    conv = convolve_level(F.dilate(7), A)
    assert conv.is_constant() and conv((0,)) == 1
    assert verify_dilation_lemma(F, A, 1, [1, 7, 13]).ok
    A2 = PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)])
    rep = verify_dilation_lemma(F0, A2, 1, [211])
    assert rep.ok and rep.checked_equal == [211]


def test_dilation_lemma_categories():
    A2 = PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)])
    rep = verify_dilation_lemma(F0, A2, 1, [211, 11, 4])
    assert rep.checked_equal == [211] and rep.checked_periodic == [11] and rep.skipped == [4]


def test_dilation_precondition():
    F = Tile.of((0,), (1,))
    A = PeriodicSet.from_points([[3]], [(0,)])
    with pytest.raises(PreconditionFailed):
        verify_dilation_lemma(F, A, 1, [7])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(default_corpus()), st.integers(1, 5))
def test_dilation_on_corpus_against_pointwise_oracle(entry, i):
    F, A = entry.tile, entry.tiling
    q = dilation_modulus(1, F).q
    rF = F.dilate(1 + i * q)
    for x in itertools.product(range(4), repeat=2):
        assert oracles.conv_at(rF, A.__contains__, x) == oracles.conv_at(F, A.__contains__, x)


def test_ray_density_examples():
    A = PeriodicSet.from_points([[2]], [(0,)])
    assert phi_ray_density(Z2, (1, 1), 6, (0, 0)) == 1
    assert phi_ray_density(A, (1,), 6, (0,)) == 0
    assert phi_ray_density(A, (1,), 6, (1,)) == 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(default_corpus()), st.integers(0, 5), st.integers(0, 5))
def test_ray_density_against_oracle(entry, x0, x1):
    A = entry.tiling
    q = dilation_modulus(1, entry.tile).q
    for f in entry.tile.nonzero():
        t = A.lattice.order_of(tuple(q * c for c in f))
        want = oracles.ray_density(A.__contains__, (x0, x1), f, q, t)
        assert phi_ray_density(A, f, q, (x0, x1)) == want
        assert want.denominator <= t


def test_structure_examples():
    dec = structure_decomposition(Tile.of((0,), (1,)), PeriodicSet.from_points([[2]], [(0,)]),
                                  Z1, 1, 1)
    assert dec.m == 1
    phi = dec.classes[0].phi
    assert [phi((x,)) for x in range(4)] == [0, 1, 0, 1]
    dec = structure_decomposition(F0, PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)]), Z2, 1, 1)
    assert dec.m == 3 and dec.directions == [(0, 1), (1, 0), (1, 1)]
    dec = structure_decomposition(Tile.of((0,), (2,)), PeriodicSet.from_points([[4]], [(0,), (1,)]),
                                  Z1, 1, 1)
    assert dec.m == 1 and dec.directions[0][0] % 2 == 0


def test_level_one_constraint_examples():
    dec = structure_decomposition(Tile.of((0,), (1,)), PeriodicSet.from_points([[2]], [(0,)]),
                                  Z1, 1, 1)
    assert verify_level_one_constraint(dec)
    # Z tiles Z at level 2 by {0, 1}; every ray is full so phi_f = 1
    dec = structure_decomposition(Tile.of((0,), (1,)), Z1, Z1, 2, 1)
    assert verify_level_one_constraint(dec)


def test_structure_rejects_non_tilings():
    with pytest.raises(PreconditionFailed):
        structure_decomposition(F0, PeriodicSet.from_points([[3, 0], [0, 3]], [(0, 0)]), Z2, 1, 1)


def _check_decomposition(F, A, E, k):
    dec = structure_decomposition(F, A, E, k, 1)
    assert 1 <= dec.m <= len(F) - 1
    ind = A.indicator()
    # 1_A = k 1_E - sum phi_j, pointwise by hand on a box
    for x in itertools.product(range(-3, 5), repeat=F.dim):
        total = sum(c.phi(x) for c in dec.classes)
        assert ind(x) == k * (x in E) - total
        assert ind(x) == oracles.conv_at(F, A.__contains__, x) - sum(p(x) for p in dec.phi_f.values())
    for c in dec.classes:
        assert c.phi.is_periodic_under(tuple(dec.q * v for v in c.h))
        assert c.phi.all(lambda v: 0 <= v <= k)
        assert any(primitive_part(c.h)[1] == primitive_part(f)[1] or
                   primitive_part(c.h)[1] == tuple(-v for v in primitive_part(f)[1])
                   for f in c.members)
    for i, a in enumerate(dec.directions):
        for b in dec.directions[i + 1:]:
            assert wedge(a, b) != 0
    lhs, rhs = dec.h_product_margin()
    assert lhs <= rhs
    return dec


@pytest.mark.parametrize("entry", default_corpus(), ids=lambda e: e.name)
def test_structure_on_corpus(entry):
    dec = _check_decomposition(entry.tile, entry.tiling, entry.target, 1)
    assert verify_level_one_constraint(dec)


@settings(max_examples=25, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=3),
       st.sampled_from([Lattice.from_basis(b) for b in
                        ([[2, 0], [0, 2]], [[4, 0], [0, 1]], [[3, 0], [1, 1]], [[4, 0], [1, 2]])]))
def test_structure_on_searched_tilings(pts, L):
    F = Tile(tuple(set(pts) | {(0, 0)}))
    if len(F) < 2:
        return
    for A in search_tilings_on_torus(build_torus_instance(F, Z2, L), limit=3):
        _check_decomposition(F, A, Z2, 1)


def test_structure_at_level_two():
    A = PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0), (1, 0)])
    dec = _check_decomposition(F0, A, Z2, 2)
    assert sum(c.phi((0, 0)) for c in dec.classes) <= 2
