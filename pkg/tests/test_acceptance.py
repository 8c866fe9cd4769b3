"""Acceptance criteria, one test each, with a single PASS/FAIL line per criterion.

Every criterion is checked at its stated tolerance, including its time budget.
"""

from __future__ import annotations

import random
import time
from collections import defaultdict
from fractions import Fraction as F

import pytest

from ietlab.cantor import (TnCantorSpec, address, classify_many, content_bound, h_eval, random_words,
                           verify_conjugacy, verify_key_lemma)
from ietlab.core import rmn_build
from ietlab.decomposition import decompose, divisibility_report, lattice_oracle, locate, random_points
from ietlab.odometer import AdicSeq, odometer_step
from ietlab.orbits import PeriodFound, least_period_direct, orbit, verify_return_lemma, verify_return_to
from ietlab.suites import remark_identities_suite


@pytest.fixture
def verdict(capsys):
    def report(number: int, ok: bool, elapsed: float, budget: float, detail: str) -> None:
        in_time = elapsed < budget
        status = "PASS" if ok and in_time else "FAIL"
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {detail} ({elapsed:.2f}s, budget {budget:g}s)")
        assert ok, detail
        assert in_time, f"took {elapsed:.2f}s, budget {budget}s"

    return report


def test_criterion_01_r63(verdict):
    t0 = time.perf_counter()
    spectrum = decompose(rmn_build(6, 3))
    elapsed = time.perf_counter() - t0
    verdict(1, spectrum.entries == ((10, F(1, 6)),), elapsed, 1, "R_6,3 spectrum " + ", ".join(f"({p}, {m})" for p, m in spectrum.entries))


def test_criterion_02_r12_4(verdict):
    t0 = time.perf_counter()
    iet = rmn_build(12, 4)
    spectrum = decompose(iet)
    oracle = lattice_oracle(iet)
    elapsed = time.perf_counter() - t0
    checks = {
        "periods": set(spectrum.periods) == {920, 930},
        "measure sum": spectrum.total_measure == F(1, 6),
        "D": oracle.modulus == 27720,
        "points": oracle.point_count == 4620,
        "cycle lengths": oracle.length_set == set(spectrum.periods),
        "measures": oracle.spectrum() == spectrum,
    }
    failed = [k for k, v in checks.items() if not v]
    verdict(2, not failed, elapsed, 5, f"R_12,4 periods {spectrum.periods}, oracle D={oracle.modulus} "
            f"points={oracle.point_count}" + (f", failed {failed}" if failed else ""))


R42_PERIODS = {272, 2002, 105252, 125986, 9515623638834, 70542359811724, 35513020871128,
               13883349533760, 43184371863572}


def test_criterion_03_r42_7(verdict):
    t0 = time.perf_counter()
    iet = rmn_build(42, 7)
    spectrum = decompose(iet)
    smallest = sorted(spectrum.periods)[:4]
    pts = random_points(iet.domain, 400, random.Random(0))
    chosen: dict[int, list] = defaultdict(list)
    for x, p in zip(pts, locate(iet, pts)):
        if p in smallest and len(chosen[p]) < 10:
            chosen[p].append(x)
    confirmed = {p: sum(least_period_direct(iet, x, p) == PeriodFound(p) for x in chosen[p]) for p in smallest}
    elapsed = time.perf_counter() - t0
    ok = (set(spectrum.periods) == R42_PERIODS and spectrum.total_measure == F(5, 42)
          and all(confirmed[p] >= 10 for p in smallest))
    verdict(3, ok, elapsed, 120, f"R_42,7 has {len(spectrum.periods)} periods, measure "
            f"{spectrum.total_measure}, iteration-confirmed points per small period {confirmed}")


def test_criterion_04_return_lemma(verdict):
    t0 = time.perf_counter()
    reports = {N: verify_return_lemma(N, 50) for N in (1, 2, 3, 5, 10)}
    deeper = verify_return_to(1, 6, 4, 50)
    elapsed = time.perf_counter() - t0
    ok = all(r.ok and r.pieces_compared == 50 and set(r.return_times) == {2} for r in reports.values())
    ok = ok and deeper.ok and set(deeper.return_times) == {4}
    bad = {N: r.discrepancy for N, r in reports.items() if not r.ok}
    verdict(4, ok, elapsed, 10, f"return lemma N in 1,2,3,5,10 on 50 pieces; T_1 to [0,1/6) is T_6 "
            f"with time 4: {deeper.ok}" + (f"; failures {bad}" if bad else ""))


def test_criterion_05_remark_identities(verdict):
    t0 = time.perf_counter()
    reports = remark_identities_suite()
    elapsed = time.perf_counter() - t0
    lines = "; ".join(f"{r.name}: {'ok' if r.ok else r.failures[0]}" for r in reports)
    verdict(5, all(r.ok for r in reports), elapsed, 30, lines)


def test_criterion_06_key_lemma_and_conjugacy(verdict):
    t0 = time.perf_counter()
    key = {N: verify_key_lemma(N, 8) for N in (1, 2, 3)}
    words = random_words(500, seed=0)
    conj = {N: verify_conjugacy(N, words) for N in (1, 2, 3)}
    elapsed = time.perf_counter() - t0
    ok = all(r.ok and r.checked == 502 for r in key.values()) and all(
        r.ok and r.checked == 500 for r in conj.values())
    verdict(6, ok, elapsed, 10, f"key lemma words checked {[r.checked for r in key.values()]}, "
            f"conjugacy on 500 words for N=1,2,3: {[r.ok for r in conj.values()]}")


def test_criterion_07_orbit_of_zero(verdict):
    t0 = time.perf_counter()
    from ietlab.reversal import ReversalFamilyMap

    spec = TnCantorSpec(1)
    rec = orbit(ReversalFamilyMap(1), F(0), 2000)
    alpha = AdicSeq.zero()
    mismatch = None
    for n, x in enumerate(rec.points):
        assert alpha == AdicSeq.from_int(n)
        if h_eval(spec, alpha) != x:
            mismatch = n
            break
        alpha = odometer_step(alpha)
    elapsed = time.perf_counter() - t0
    ok = mismatch is None and len(rec.points) == 2001
    verdict(7, ok, elapsed, 5, f"orbit of 0 under T_1 equals h(f^n(0)) for n <= 2000"
            + (f"; first mismatch at n={mismatch}" if mismatch is not None else ""))


def test_criterion_08_cantor_content(verdict):
    t0 = time.perf_counter()
    spec = TnCantorSpec(1)
    expected, nk = [], 1
    for _ in range(13):
        expected.append(nk)
        nk = nk * (1 + nk)
    lengths_ok = all(spec.Nk(k) == expected[k] and spec.length(k) * spec.Nk(k) == 1 for k in range(13))
    bound = content_bound(spec, F(1, 8), 12)
    below = bound.certified_below(F(1, 10**6))
    elapsed = time.perf_counter() - t0
    verdict(8, lengths_ok and below, elapsed, 5, f"l_k N_k = 1 for k <= 12 with N_k = {expected[:5]}...; "
            f"log2 of content at d=1/8, k=12 is at most {bound.log2_upper}, certified below 1e-6: {below}")


def _random_rationals(count: int, max_den: int, seed: int) -> list[F]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        q = rng.randint(1, max_den)
        out.append(F(rng.randrange(q), q))
    return out


@pytest.mark.slow
def test_criterion_09_classification(verdict):
    t0 = time.perf_counter()
    xs = _random_rationals(1000, 10**4, seed=0)
    results = classify_many(1, xs, depth=16, iteration_cap=10**7)
    periodic = [r for r in results if r.kind != "in_cantor_prefix"]
    confirmed = [r for r in periodic if r.period is not None]
    certified_above = [r for r in periodic if r.above is not None]
    capped = [r for r in periodic if r.period is None and r.above is None]
    spec = TnCantorSpec(1)
    overturned = 0
    for x, r in zip(xs, results):
        if r.kind != "in_cantor_prefix":
            deeper = address(spec, x, 24)
            overturned += (deeper.kind == "prefix") or deeper.word != r.word
    elapsed = time.perf_counter() - t0
    ok = len(confirmed) == len(periodic) and overturned == 0
    verdict(9, ok, elapsed, 60,
            f"{len(periodic)} gap/right-endpoint verdicts, {len(confirmed)} confirmed by iteration, "
            f"{len(certified_above)} certified to have least period above 10^7, {len(capped)} hit the cap; "
            f"verdicts overturned at depth 24: {overturned}")


def test_criterion_10_divisibility(verdict):
    t0 = time.perf_counter()
    reports = {(m, n): divisibility_report(decompose(rmn_build(m, n)), m, n) for m, n in ((6, 3), (12, 4), (42, 7))}
    elapsed = time.perf_counter() - t0
    r63 = reports[(6, 3)]
    ok = r63.lcm == 60 and [(row.period, row.divides) for row in r63.rows] == [(10, True)]
    recorded = "; ".join(f"R_{m},{n}: lcm {r.lcm}, non-divisors "
                         f"{[row.period for row in r.rows if not row.divides]}" for (m, n), r in reports.items())
    verdict(10, ok, elapsed, 1, f"10 | 60 for R_6,3: {ok}; recorded {recorded}")
