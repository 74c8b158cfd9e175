import itertools
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilelab import Lattice, PeriodicSet, Tile, wedge
from tilelab.corpus import _a2, default_corpus
from tilelab.dilation import structure_decomposition
from tilelab.errors import DimensionMismatch, SingleClass, ZeroVector
from tilelab.lattice import norm2
from tilelab.search2d import build_torus_instance, search_tilings_on_torus
from tilelab.weak import (
    RayPolynomial,
    incommensurable_witness,
    pxj_base_points,
    ray_polynomials,
    spiral,
    verify_ray_polynomial_properties,
    weak_constants,
    weak_decompose,
)

Z2 = PeriodicSet.whole(2)
F0 = Tile.of((0, 0), (1, 0), (0, 1), (1, 1))
F2 = Tile.of((0, 0), (2, 0), (0, 1), (2, 1))


def _scan_oracle(directions):
    # nonzero vectors by norm, then counterclockwise angle from +x; first one
    # not parallel to any direction
    import math
    pts = [(x, y) for x in range(-5, 6) for y in range(-5, 6) if (x, y) != (0, 0)]
    pts.sort(key=lambda v: (v[0] ** 2 + v[1] ** 2, math.atan2(v[1], v[0]) % (2 * math.pi)))
    return next(v for v in pts if all(wedge(v, h) for h in directions))


def test_spiral_order():
    head = list(itertools.islice(spiral(), 8))
    assert head == [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)]


@pytest.mark.parametrize("dirs", [[(1, 0)], [(1, 0), (0, 1)], [(1, 0), (0, 1), (1, 1), (1, -1)],
                                  [(2, 1), (1, 2)], [(0, 3)]])
def test_incommensurable_witness_matches_scan(dirs):
    assert incommensurable_witness(dirs) == _scan_oracle(dirs)


def test_incommensurable_witness_examples():
    assert incommensurable_witness([(1, 0)]) == (0, 1)
    assert incommensurable_witness([(1, 0), (0, 1)]) == (1, 1)
    assert incommensurable_witness([(1, 0), (0, 1), (1, 1), (1, -1)]) in [(2, 1), (1, 2)]
    with pytest.raises(ZeroVector):
        incommensurable_witness([(0, 0)])
    with pytest.raises(DimensionMismatch):
        incommensurable_witness([(1,)])


def _two_class_decomposition():
    # F0 on the tiling {(0,0),(1,2)} + <(2,0),(0,4)>... use an a1 member with two directions
    A = PeriodicSet.from_points([[4, 0], [0, 2]], [(0, 0), (2, 1)])
    return structure_decomposition(F0, A, Z2, 1, 1)


def test_weak_constants_square():
    dec = structure_decomposition(F0, PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)]), Z2, 1, 1)
    wc = weak_constants(dec, 1)
    hs = dec.directions
    N = 1
    for a, b in itertools.combinations(hs, 2):
        N = N * abs(wedge(a, b)) // gcd(N, abs(wedge(a, b)))
    assert wc.N == N
    assert all(wedge(wc.e_tilde, h) for h in hs)
    assert wc.e == tuple(dec.q * wc.N * c for c in wc.e_tilde)
    # Lambda sits inside q Z^2
    assert Lattice.scaled(dec.q, 2).contains_lattice(wc.big_lattice)
    assert wc.L % (wc.M * wc.M * wc.N * dec.q) == 0
    assert wc.margins["N"]["ok"] and wc.margins["h"]["ok"]


def test_weak_constants_single_class():
    dec = structure_decomposition(Tile.of((0, 0), (1, 0)),
                                  PeriodicSet.from_points([[2, 0], [0, 1]], [(0, 0)]), Z2, 1, 1)
    assert dec.m == 1
    with pytest.raises(SingleClass):
        weak_constants(dec, 1)


def test_ray_polynomials_rotate_under_e():
    dec = structure_decomposition(F0, PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)]), Z2, 1, 1)
    wc = weak_constants(dec, 1)
    x = (1, 0)
    P = ray_polynomials(dec, wc, x)
    Q = ray_polynomials(dec, wc, tuple(a + b for a, b in zip(x, wc.e)))
    for p, q in zip(P, Q):
        assert [p(n + 1) for n in range(p.period)] == [q(n) for n in range(q.period)]
        assert all(0 <= v <= 1 for v in p.values)


def test_pxj_mutant_is_caught():
    dec = structure_decomposition(F0, PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)]), Z2, 1, 1)
    wc = weak_constants(dec, 1)
    P = ray_polynomials(dec, wc, (0, 0))
    assert verify_ray_polynomial_properties(P, dec.m).ok
    bad = list(P)
    vals = list(bad[0].values)
    vals[0] = Fraction(vals[0]) + Fraction(1, 3)
    bad[0] = RayPolynomial(bad[0].base, 0, tuple(vals))
    assert not verify_ray_polynomial_properties(bad, dec.m).sum_ok


def _weak_checks(entry):
    wd = weak_decompose(entry.tile, entry.tiling, entry.target, 1)
    assert wd.check()
    A = entry.tiling
    covered = set()
    for A_j, h in wd.parts():
        assert not covered & A_j.residues
        covered |= A_j.residues
        assert A_j.is_periodic_under(tuple(wd.L * c for c in h))
    assert covered == set(A.residues)
    dec = wd.decomposition
    d2, n = entry.tile.diameter2, len(entry.tile)
    assert all(norm2(h) <= d2 ** (n - 1) for h in dec.directions)
    if wd.constants is not None:
        for x in pxj_base_points(dec):
            assert verify_ray_polynomial_properties(ray_polynomials(dec, wd.constants, x), dec.m).ok
    return wd


@pytest.mark.parametrize("entry", default_corpus(), ids=lambda e: e.name)
def test_weak_decompose_corpus(entry):
    _weak_checks(entry)


def test_pxj_base_points_cover_lambda_domain():
    # the reduction to residues of lattice(A) agrees with a full Lambda domain on a small case
    dec = structure_decomposition(F0, PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)]), Z2, 1, 1)
    wc = weak_constants(dec, 1)
    lam = wc.big_lattice
    short = {tuple(P.values) for x in pxj_base_points(dec) for P in ray_polynomials(dec, wc, x)}
    full = {tuple(P.values) for x in lam.residues() for P in ray_polynomials(dec, wc, x)}
    assert short == full


def test_weak_decompose_a2_splits():
    A = _a2((0,), (0,))
    wd = weak_decompose(F2, A, Z2, 1)
    assert wd.check()
    assert len(wd.decomposition.directions) >= 2
    A = _a2((0, 1), (0, 1))
    wd = weak_decompose(F2, A, Z2, 1)
    used = {p.direction for p in wd.pieces}
    assert len(used) == 2
    for h in used:
        assert h[0] == 0 or h[1] == 0


def test_weak_decompose_square_tilings():
    found = search_tilings_on_torus(build_torus_instance(F0, Z2, Lattice.scaled(2, 2)))
    assert len(found) == 4
    for A in found:
        wd = weak_decompose(F0, A, Z2, 1)
        assert wd.check() and wd.decomposition.m <= 3
        # a direction whose ray polynomial reaches 1 is tried first, then increasing j
        for piece in wd.pieces:
            sups = [P.sup for P in ray_polynomials(wd.decomposition, wd.constants,
                                                   piece.representative)]
            full = [j for j, s in enumerate(sups) if s == 1]
            assert piece.j == (full[0] if full else 0)


@settings(max_examples=15, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=3),
       st.sampled_from([Lattice.from_basis(b) for b in ([[2, 0], [0, 2]], [[4, 0], [0, 2]],
                                                        [[3, 0], [1, 3]], [[4, 0], [2, 2]])]))
def test_weak_decompose_on_searched_tilings(pts, L):
    F = Tile(tuple(set(pts) | {(0, 0)}))
    if len(F) < 2:
        return
    from tilelab.corpus import CorpusEntry
    for A in search_tilings_on_torus(build_torus_instance(F, Z2, L), limit=2):
        _weak_checks(CorpusEntry("h", F, A.minimal, Z2))
