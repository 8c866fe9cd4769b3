"""Verification suites shared by the command line and the acceptance tests."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence

from .cantor import VerificationReport, random_words, verify_conjugacy, verify_key_lemma, vdc_conjugacy_check
from .core import HalfOpenInterval, rmn_build
from .errors import IETError
from .odometer import AdicSeq, vdc_log_formula, vdc_eval
from .orbits import first_return_map, verify_return_lemma
from .reversal import ReversalFamilyMap, compose_restricted


def run_cases(fn: Callable, cases: Sequence) -> list:
    """Run ``fn`` over ``cases`` concurrently; results keep the order of ``cases``."""
    with ThreadPoolExecutor() as pool:
        return list(pool.map(fn, cases))


def return_lemma_suite(Ns: Sequence[int], pieces: int = 50) -> list[VerificationReport]:
    def one(N: int) -> VerificationReport:
        rep = verify_return_lemma(N, pieces)
        fails = () if rep.ok else (rep.discrepancy,)
        return VerificationReport(f"return-lemma N={N}", rep.pieces_compared, fails)

    return run_cases(one, Ns)


def key_lemma_suite(Ns: Sequence[int], max_len: int = 8) -> list[VerificationReport]:
    return run_cases(lambda N: verify_key_lemma(N, max_len), Ns)


def conjugacy_suite(Ns: Sequence[int], count: int = 500, seed: int = 0) -> list[VerificationReport]:
    words = random_words(count, seed)
    return run_cases(lambda N: verify_conjugacy(N, words), Ns)


def vdc_suite(count: int = 256) -> list[VerificationReport]:
    """Dyadic conjugacy on ``f^n(0...)`` for ``n < count``, plus a note on the literal formula."""
    reports = run_cases(vdc_conjugacy_check, [AdicSeq.from_int(n) for n in range(count)])
    checked = sum(r.checked for r in reports)
    failures = tuple(f for r in reports for f in r.failures)
    mismatch = [x for x in (Fraction(i, 64) for i in range(64)) if vdc_log_formula(x) != vdc_eval(x)]
    note = f"literal log2 formula differs from the piecewise map at {len(mismatch)} of 64 grid points (informational)"
    return [VerificationReport("vdc conjugacy", checked, failures), VerificationReport(note, 64)]


def remark_identities_suite(piece_cap: int = 10_000) -> list[VerificationReport]:
    """Invariance and power identities for the finite reversal blocks inside ``T_1``.

    Each identity compares the composed map with ``rmn_build(m, n)``.  When
    that fails, the failure message also says whether the mirror-image
    block or a lower power would match instead.
    """
    t1 = ReversalFamilyMap(1)
    out = []
    target = HalfOpenInterval(Fraction(1, 42), Fraction(1, 7))
    try:
        compose_restricted(ReversalFamilyMap(6), target, 1, piece_cap, require_invariant=True)
        out.append(VerificationReport("[1/42,1/7) invariant under T_6", 1))
    except IETError as exc:
        out.append(VerificationReport("[1/42,1/7) invariant under T_6", 1, (str(exc),)))
    for (m, n), power in (((42, 7), 4), ((15, 10), 8)):
        name = f"T_1^{power} on [1/{m},1/{n}) = R_{m},{n}"
        dom = HalfOpenInterval(Fraction(1, m), Fraction(1, n))
        got = compose_restricted(t1, dom, power, piece_cap)
        want = rmn_build(m, n)
        if got == want:
            out.append(VerificationReport(name, 1))
            continue
        notes = [f"{len(got.pieces)} pieces vs {len(want.pieces)}"]
        if got == rmn_build(m, n, "mirrored"):
            notes.append("equals the mirror image of R (conjugate by x -> 1/m + 1/n - x)")
        ret = first_return_map(t1, dom, step_cap=4 * power)
        times = sorted(set(ret.return_times))
        notes.append(f"first return time of T_1 to the block: {times}")
        if times == [power // 2]:
            notes.append(f"T_1^{power} is the square of the first-return map")
        out.append(VerificationReport(name, 1, ("; ".join(notes),)))
    return out

