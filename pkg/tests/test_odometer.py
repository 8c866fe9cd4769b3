from __future__ import annotations

from fractions import Fraction as F

import pytest

from ietlab.errors import DomainError, RefinementOverflow, UndefinedSuccessor
from ietlab.odometer import (AdicSeq, VanDerCorputMap, Word, all_words, odometer_step, vdc_log_formula,
                             vdc_eval, word_step)
from ietlab.orbits import orbit


@pytest.mark.parametrize("w,nxt", [("00", "10"), ("10", "01"), ("110", "001")])
def test_word_step(w, nxt):
    assert str(word_step(Word(w))) == nxt


@pytest.mark.parametrize("w", ["", "1", "111"])
def test_word_step_all_ones(w):
    with pytest.raises(UndefinedSuccessor):
        word_step(Word(w))


def test_word_step_is_increment_mod():
    for w in all_words(5):
        if not w.is_all_ones():
            assert word_step(w).to_int() == w.to_int() + 1


def test_word_rejects_bad_digits():
    with pytest.raises(ValueError):
        Word("012")


def test_odometer_examples():
    assert odometer_step(AdicSeq(Word("110"))) == AdicSeq(Word("001"))
    assert odometer_step(AdicSeq.zero()) == AdicSeq(Word("1"))
    assert odometer_step(AdicSeq(Word("0"), 1)) == AdicSeq(Word("1"), 1)


def test_odometer_all_ones_undefined():
    with pytest.raises(UndefinedSuccessor):
        odometer_step(AdicSeq(Word("11"), 1))


def test_adic_canonical_and_printing():
    assert AdicSeq(Word("1000")) == AdicSeq(Word("1"))
    assert AdicSeq.parse("01+1") == AdicSeq(Word("0"), 1)
    assert str(AdicSeq(Word("110"))) == "11+0̄"
    assert AdicSeq(Word("0"), 1).in_N() and not AdicSeq.zero().in_N()


def test_odometer_counts():
    a = AdicSeq.zero()
    for n in range(1, 300):
        a = odometer_step(a)
        assert a == AdicSeq.from_int(n)


def test_vdc_examples():
    assert vdc_eval(0) == F(1, 2)
    assert vdc_eval(F(1, 2)) == F(1, 4)
    with pytest.raises(DomainError):
        vdc_eval(1)


def test_vdc_formula_agrees_at_left_endpoints_only():
    for j in range(1, 8):
        left = 1 - F(2) ** (1 - j)
        assert vdc_log_formula(left) == vdc_eval(left)
    assert vdc_log_formula(F(1, 4)) != vdc_eval(F(1, 4))


def test_vdc_orbit_of_zero_is_van_der_corput_sequence():
    rec = orbit(VanDerCorputMap(), F(0), 7)
    assert list(rec.points) == [F(0), F(1, 2), F(1, 4), F(3, 4), F(1, 8), F(5, 8), F(3, 8), F(7, 8)]


def test_vdc_pieces_over():
    fmap = VanDerCorputMap()
    assert len(fmap.pieces_over(F(0), F(7, 8))) == 3
    with pytest.raises(RefinementOverflow):
        fmap.pieces_over(F(0), F(1))
