from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from ietlab.core import FiniteIET, HalfOpenInterval, rmn_build
from ietlab.decomposition import (Induction, PeriodSpectrum, components, cross_validate, decompose,
                                  divisibility_report, lattice_oracle, locate, split_invariant)
from ietlab.errors import OracleTooLarge
from ietlab.orbits import least_period_direct


def test_r63():
    s = decompose(rmn_build(6, 3))
    assert s.entries == ((10, F(1, 6)),)
    assert s.total_measure == s.domain_length


def test_r12_4_matches_oracle():
    iet = rmn_build(12, 4)
    s = decompose(iet)
    assert s.periods == (920, 930)
    assert s.total_measure == F(1, 6)
    oracle = lattice_oracle(iet)
    assert oracle.modulus == 27720 and oracle.point_count == 4620
    assert oracle.length_set == {920, 930}
    assert oracle.spectrum() == s


def test_r15_10():
    assert decompose(rmn_build(15, 10)).periods == (2002,)


def test_orientation_does_not_change_spectrum():
    assert decompose(rmn_build(12, 4, "mirrored")) == decompose(rmn_build(12, 4))


def test_oracle_small_lattice():
    res = lattice_oracle(rmn_build(6, 3), offset=F(1, 120))
    assert res.modulus == 60 and res.cycle_lengths == ((10, 1),)


def test_oracle_cap():
    with pytest.raises(OracleTooLarge):
        lattice_oracle(rmn_build(12, 4), cap=100)


def test_identity_map():
    iet = FiniteIET.from_triples((0, 1), [(0, F(1, 3), 0), (F(1, 3), 1, 0)])
    assert decompose(iet).entries == ((1, F(1)),)


def test_rotation():
    # rotation by 2/7 on [0,1): every point has period 7
    iet = FiniteIET.from_triples((0, 1), [(0, F(5, 7), F(2, 7)), (F(5, 7), 1, F(-5, 7))])
    assert decompose(iet).entries == ((7, F(1)),)


def test_split_invariant():
    iet = FiniteIET.from_triples((0, 1), [(0, F(1, 2), F(1, 4)), (F(1, 2), F(3, 4), F(-1, 2)),
                                          (F(3, 4), 1, 0)])
    blocks = split_invariant(iet)
    assert [b.domain for b in blocks] == [HalfOpenInterval(F(0), F(3, 4)), HalfOpenInterval(F(3, 4), F(1))]


def test_components_measures_sum():
    comps = components(rmn_build(12, 4))
    assert sum(c.measure for c in comps) == F(1, 6)
    assert {c.period for c in comps} == {920, 930}


def test_tower_heights_are_return_times():
    iet = rmn_build(12, 4)
    ind = Induction(iet)
    for _ in range(6):
        ind.step()
    tower = ind.tower()
    for p in tower.pieces:
        x = p.lo + (p.hi - p.lo) / 3
        y, n = iet(x), 1
        while y not in tower.window:
            y, n = iet(y), n + 1
        assert n == p.height
        assert y == x + p.translation


def test_locate_matches_iteration():
    iet = rmn_build(42, 7)
    rng = random.Random(1)
    pts = [F(1, 42) + F(5, 42) * F(rng.randrange(10**5), 10**5) for _ in range(40)]
    periods = locate(iet, pts)
    spectrum = set(decompose(iet).periods)
    for x, p in zip(pts, periods):
        assert p in spectrum
        if p < 10**6:
            assert least_period_direct(iet, x, p).period == p


def test_locate_with_cap_returns_bounds():
    iet = rmn_build(42, 7)
    pts = [F(1, 42) + F(5, 42) * F(i, 97) for i in range(97)]
    capped = locate(iet, pts, period_cap=10**6, check_every=1)
    exact = locate(iet, pts)
    for c, e in zip(capped, exact):
        if isinstance(c, tuple):
            assert c[0] == "above" and 10**6 < c[1] <= e
        else:
            assert c == e


def test_cross_validate():
    iet = rmn_build(12, 4)
    rep = cross_validate(iet, decompose(iet), 10, 10**4, seed=5)
    assert rep.ok and len(rep.checked) == 10


def test_divisibility_report():
    rep = divisibility_report(decompose(rmn_build(6, 3)), 6, 3)
    assert rep.lcm == 60 and rep.all_divide
    rep = divisibility_report(decompose(rmn_build(12, 4)), 12, 4)
    assert rep.lcm == 27720 and not rep.rows[0].divides


def test_spectrum_serialization():
    s = decompose(rmn_build(12, 4))
    assert PeriodSpectrum.from_dict(s.to_dict()) == s
    assert s.to_csv().splitlines() == ["period,measure", "920,23/231", "930,31/462"]
