from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from ietlab.cantor import (TnCantorSpec, address, classify, classify_many, constant_spec, content_bound,
                           dyadic_spec, floor_log2, h_eval, interval_of_word, key_translation, level,
                           random_words, renormalize, renormalized_periods, vdc_conjugacy_check,
                           verify_conjugacy, verify_key_lemma)
from ietlab.errors import CapExceeded, DomainError
from ietlab.odometer import AdicSeq, Word, all_words
from ietlab.orbits import least_period_direct
from ietlab.reversal import ReversalFamilyMap, tn_eval

T1 = TnCantorSpec(1)


def test_nk_sequence():
    assert [T1.Nk(k) for k in range(6)] == [1, 2, 6, 42, 1806, 3263442]
    for k in range(13):
        assert T1.length(k) * T1.Nk(k) == 1


def test_depth_cap():
    with pytest.raises(CapExceeded):
        TnCantorSpec(1, depth_cap=4).length(7)


@pytest.mark.parametrize("w,lo,hi", [("", F(0), F(1)), ("10", F(1, 2), F(2, 3)), ("01", F(1, 3), F(1, 2))])
def test_interval_of_word(w, lo, hi):
    iv = interval_of_word(T1, Word(w), verify=True)
    assert (iv.lo, iv.hi) == (lo, hi)


def test_interval_formula_all_short_words():
    for spec in (T1, TnCantorSpec(2), constant_spec(0, 1, F(1, 3))):
        for k in range(8):
            for w in all_words(k):
                iv = interval_of_word(spec, w)
                assert (iv.lo, iv.hi) == (h_eval(spec, AdicSeq(w, 0)), h_eval(spec, AdicSeq(w, 1)))
                assert iv.hi - iv.lo == spec.length(k)


@pytest.mark.parametrize("alpha,value", [(AdicSeq.zero(), F(0)), (AdicSeq(Word(), 1), F(1)),
                                         (AdicSeq(Word("1")), F(1, 2)), (AdicSeq(Word("01")), F(1, 3))])
def test_h_examples(alpha, value):
    assert h_eval(T1, alpha) == value


def test_h_two_to_one_at_half():
    assert h_eval(T1, AdicSeq(Word("0"), 1)) == h_eval(T1, AdicSeq(Word("1"))) == F(1, 2)


def test_level_nesting_and_gaps():
    for spec in (T1, TnCantorSpec(3)):
        for k in range(5):
            parents = level(spec, k)
            children = level(spec, k + 1)
            for parent, c0, c1 in zip(parents, children[::2], children[1::2]):
                assert parent.lo == c0.lo and c1.hi == parent.hi
                has_gap = c0.hi < c1.lo
                assert has_gap == (spec.s(k) < F(1, 2))


@pytest.mark.parametrize("x,depth,kind,word", [
    (F(1, 5), 8, "gap", "0"),
    (F(1, 2), 4, "prefix", "1000"),
    (F(1, 6), 8, "right_endpoint", "00"),
    (F(0), 5, "prefix", "00000"),
])
def test_address_examples(x, depth, kind, word):
    res = address(T1, x, depth)
    assert res.kind == kind and str(res.word) == word


def test_address_gap_interval():
    assert address(T1, F(1, 5), 8).gap == (F(1, 6), F(1, 3))
    with pytest.raises(DomainError):
        address(T1, F(1), 3)


def test_classify_examples():
    assert classify(1, F(1, 4), 8, 10**5).period == 20
    res = classify(1, F(0), 12, 10**3)
    assert res.kind == "in_cantor_prefix" and str(res.word) == "0" * 12
    res = classify(1, F(1, 6), 8, 10**5)
    assert res.kind == "boundary_periodic" and str(res.word) == "00" and res.period == 20


def test_classify_many_agrees_with_classify():
    rng = random.Random(2)
    xs = [F(rng.randrange(q), q) for q in (rng.randint(1, 300) for _ in range(40))]
    many = classify_many(1, xs, 10, 10**5, block_limit=100)
    for x, c in zip(xs, many):
        single = classify(1, x, 10, 10**5)
        assert (c.kind, c.word) == (single.kind, single.word)
        if c.above is None:
            assert c.period == single.period


@pytest.mark.parametrize("N,j,value", [(1, 0, F(1, 2)), (1, 1, F(-1, 6)), (2, 0, F(1, 3))])
def test_key_translation(N, j, value):
    assert key_translation(N, j) == value


def test_key_lemma_examples():
    assert interval_of_word(T1, Word("1")).lo - interval_of_word(T1, Word("0")).lo == key_translation(1, 0)
    assert tn_eval(1, F(1, 2)) == F(1, 2) + key_translation(1, 1)


def test_key_lemma_small():
    rep = verify_key_lemma(1, 6)
    assert rep.ok and rep.checked == sum(2**k - 1 for k in range(1, 7))


@pytest.mark.parametrize("w,image", [("", F(1, 2)), ("1", F(1, 3)), ("11", F(1, 7))])
def test_conjugacy_examples(w, image):
    alpha = AdicSeq(Word(w))
    assert tn_eval(1, h_eval(T1, alpha)) == image
    assert verify_conjugacy(1, [Word(w + "0")]).ok


def test_conjugacy_random_words():
    for N in (1, 2, 5):
        assert verify_conjugacy(N, random_words(100, seed=N)).ok


def test_conjugacy_rejects_all_ones_words():
    with pytest.raises(ValueError):
        verify_conjugacy(1, [Word("11")])


def test_vdc_conjugacy():
    assert vdc_conjugacy_check(AdicSeq.zero()).ok
    assert dyadic_spec().degenerate
    with pytest.raises(ValueError):
        vdc_conjugacy_check(AdicSeq(Word("0"), 1))


@pytest.mark.parametrize("k,value", [(0, F(1, 2)), (2, F(1, 3)), (3, F(2, 21))])
def test_content_examples(k, value):
    assert content_bound(T1, 1, k).exact == value


def test_content_ratio_identity():
    for d in (1, 2, 3):
        for k in range(8):
            ratio = content_bound(T1, d, k + 1).exact / content_bound(T1, d, k).exact
            assert ratio == 2 * T1.s(k) ** d


def test_content_log_bound_is_upper():
    for d in (F(1, 2), F(1, 8), F(3, 2)):
        for k in range(1, 9):
            b = content_bound(T1, d, k)
            # 2^k (l_k/2)^d <= 2^upper  <=>  (2^k (l_k/2)^d)^q <= 2^(upper q)
            value_pow = (F(2) ** k) ** d.denominator * (T1.length(k) / 2) ** d.numerator
            assert value_pow <= F(2) ** (b.log2_upper * d.denominator)


def test_floor_log2():
    assert [floor_log2(F(x)) for x in (1, 2, 3, 4)] == [0, 1, 1, 2]
    assert floor_log2(F(1, 3)) == -2 and floor_log2(F(1, 4)) == -2


def test_renormalize_depth_one():
    r = renormalize(1, F(1, 4), T1)
    assert (r.depth, r.block_m, r.block_n, r.shift) == (1, 6, 3, 0)


def test_renormalized_periods_match_iteration():
    t1 = ReversalFamilyMap(1)
    xs = [F(1, 4), F(1, 5), F(3, 5), F(7, 9), F(1, 30), F(17, 40)]
    periods = renormalized_periods(1, xs)
    assert periods[4] > 10**13
    for x, p in zip(xs, periods):
        if p <= 10**6:
            assert least_period_direct(t1, x, 10**6).period == p


def test_deeper_classification_is_stable():
    rng = random.Random(9)
    for _ in range(100):
        q = rng.randint(1, 500)
        x = F(rng.randrange(q), q)
        a, b = address(T1, x, 8), address(T1, x, 14)
        if a.kind != "prefix":
            assert (a.kind, a.word) == (b.kind, b.word)
