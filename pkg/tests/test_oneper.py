import itertools

import pytest

from tilelab import Lattice, PeriodicSet, Tile, wedge
from tilelab.corpus import _a2
from tilelab.errors import CommensurableDirections, PreconditionFailed, ZeroVector
from tilelab.oneper import (
    build_slide_witness,
    candidate_directions,
    decide_non_one_periodic,
    enumerate_scaffolds,
    find_chameleon_slices,
)
from tilelab.slide import membership_grid, window_tiles

from . import oracles

Z2 = PeriodicSet.whole(2)
F0 = Tile.of((0, 0), (1, 0), (0, 1), (1, 1))
F2 = Tile.of((0, 0), (2, 0), (0, 1), (2, 1))
SQ = PeriodicSet.from_points([[2, 0], [0, 2]], [(0, 0)])
A2 = _a2((0,), (0,))


def _replaced_member(A, c):
    """Membership of A with the single line of the report swapped for its alternative."""
    hp, y, alt = c.h_primitive, c.representative, c.alternative

    def member(x):
        d = (x[0] - y[0], x[1] - y[1])
        if wedge(hp, d) == 0:
            t = (d[0] * hp[0] + d[1] * hp[1]) // (hp[0] ** 2 + hp[1] ** 2)
            return bool(alt[t % len(alt)])
        return x in A
    return member


def _check_report(F, A, c, r=10):
    member = _replaced_member(A, c)
    y = c.representative
    changed = False
    for dx, dy in itertools.product(range(-r, r + 1), repeat=2):
        x = (y[0] + dx, y[1] + dy)
        assert oracles.conv_at(F, member, x) == oracles.conv_at(F, A.__contains__, x)
        changed |= member(x) != (x in A)
    assert changed


def test_f2_column_and_row_chameleons():
    col = find_chameleon_slices(F2, A2, (0, 2))
    assert col and all(c.alternative == (0, 1) for c in col)
    row = find_chameleon_slices(F2, A2, (4, 0))
    alts = {c.alternative for c in row}
    assert alts == {(0, 0, 1, 1), (0, 1, 1, 0), (1, 0, 0, 1)}
    for c in col + row:
        _check_report(F2, A2, c)


def test_square_column_is_a_chameleon():
    # a column {(0, 2m)} of 2Z^2 may shift to {(0, 2m + 1)}: F0 covers both the same way
    col = find_chameleon_slices(F0, SQ, (0, 2))
    assert col
    for c in col:
        _check_report(F0, SQ, c)


def _oracle_equivalent(F, A, hp, y, word, r=10):
    class C:
        pass
    c = C()
    c.h_primitive, c.representative, c.alternative = hp, y, word
    member = _replaced_member(A, c)
    return all(oracles.conv_at(F, member, (y[0] + dx, y[1] + dy))
               == oracles.conv_at(F, A.__contains__, (y[0] + dx, y[1] + dy))
               for dx, dy in itertools.product(range(-r, r + 1), repeat=2))


@pytest.mark.parametrize("F,A,h", [(F2, A2, (0, 2)), (F2, A2, (4, 0)), (F0, SQ, (0, 2)),
                                   (F0, SQ, (1, 1)), (F0, SQ, (2, 0))])
def test_chameleons_exhaustive_against_oracle(F, A, h):
    from math import gcd
    k = gcd(*h)
    hp = (h[0] // k, h[1] // k)
    reports = find_chameleon_slices(F, A, h)
    got = {(c.representative, c.alternative) for c in reports}
    bases = {c.representative for c in reports}
    # the origin's line is always checked, reported or not
    bases.add((0, 0))
    for y in bases:
        for word in itertools.product((0, 1), repeat=k):
            t = [y[0] + i * hp[0] for i in range(12)], [y[1] + i * hp[1] for i in range(12)]
            original = all((tx, ty) in A if word[i % k] else (tx, ty) not in A
                           for i, (tx, ty) in enumerate(zip(*t)))
            want = not original and _oracle_equivalent(F, A, hp, y, word)
            assert ((y, word) in got) == want


def test_zero_direction():
    with pytest.raises(ZeroVector):
        find_chameleon_slices(F0, SQ, (0, 0))


def test_candidate_directions():
    dirs = candidate_directions(F0, 2)
    assert set(dirs) == {(1, 0), (0, 1), (1, 1), (1, -1)}
    assert all(d[0] ** 2 + d[1] ** 2 <= 32 for d in candidate_directions(F2, 32))


def test_decide_square_tile():
    d = decide_non_one_periodic(F0)
    assert d.verdict == "AllOnePeriodicUnderBounds" and not d.exists
    assert d.scaffolds > 0


def test_decide_collinear_tile():
    d = decide_non_one_periodic(Tile.of((0, 0), (1, 0)))
    assert d.verdict == "AllOnePeriodicUnderBounds"


def test_decide_no_tiling():
    d = decide_non_one_periodic(Tile.of((0, 0), (1, 0), (3, 0)), max_index=9)
    assert d.verdict == "NoTiling"
    with pytest.raises(PreconditionFailed):
        decide_non_one_periodic(F0, scaffold_lattices=[])


def test_decide_f2_and_witness():
    d = decide_non_one_periodic(F2)
    assert d.exists
    w = d.witness
    T = w.tiling
    assert window_tiles(F2, T, Z2, 1, *w.window)
    assert all(v is not None for v in w.certificate.values())
    assert len(w.certificate) == len([v for v in itertools.product(range(6), range(-5, 6))
                                      if 0 < v[0] ** 2 + v[1] ** 2 <= 32
                                      and (v[0] > 0 or (v[0] == 0 and v[1] > 0))])
    # away from the two modified lines the witness is the scaffold
    x0, y0, ww, hh = w.window
    g = membership_grid(T, x0, y0, ww, hh)
    s = membership_grid(T.scaffold, x0, y0, ww, hh)
    for i, j in zip(*(g != s).nonzero()):
        x = (x0 + int(i), y0 + int(j))
        assert any(sub.param(x) is not None for sub in T.substitutions)


def test_witness_guards():
    col = find_chameleon_slices(F2, A2, (0, 2))
    row = find_chameleon_slices(F2, A2, (4, 0))
    with pytest.raises(CommensurableDirections):
        build_slide_witness(A2, col[0], col[0])
    from dataclasses import replace
    same = replace(col[0], alternative=col[0].original[:len(col[0].alternative)])
    with pytest.raises(PreconditionFailed):
        build_slide_witness(A2, same, row[0])


def test_enumerate_scaffolds_distinct():
    sc = enumerate_scaffolds(F0, Z2, [Lattice.scaled(2, 2), Lattice.scaled(4, 2)])
    assert len(sc) == len(set(sc))
    assert all(window_tiles(F0, A, Z2, 1, 0, 0, 8, 8) for A in sc)
