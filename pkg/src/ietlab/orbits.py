"""Orbits, least periods and first-return maps.

Maps are duck-typed: anything with ``domain``, ``__call__`` and
``pieces_over(lo, hi, cap)`` works (``FiniteIET``, ``ReversalFamilyMap``,
``VanDerCorputMap``).
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .core import FiniteIET, HalfOpenInterval, Piece, as_rat, format_rat
from .errors import DomainError, RefinementOverflow, ReturnTimeExceeded
from .reversal import DEFAULT_PIECE_CAP, ReversalFamilyMap

DEFAULT_ITERATION_CAP = 10_000_000


@dataclass(frozen=True)
class PeriodFound:
    period: int

    def to_dict(self) -> dict:
        return {"status": "period_found", "period": str(self.period)}


@dataclass(frozen=True)
class CapReached:
    cap: int

    def to_dict(self) -> dict:
        return {"status": "cap_reached", "cap": str(self.cap)}


PeriodStatus = Union[PeriodFound, CapReached]


@dataclass(frozen=True)
class OrbitRecord:
    start: Fraction
    points: tuple[Fraction, ...]
    status: PeriodStatus

    def to_dict(self) -> dict:
        return {
            "start": format_rat(self.start),
            "points": [format_rat(p) for p in self.points],
            **self.status.to_dict(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _check_point(fmap, x) -> Fraction:
    x = as_rat(x)
    if x not in fmap.domain:
        raise DomainError(f"{x} outside {fmap.domain}")
    return x


def orbit(fmap, x, max_steps: int) -> OrbitRecord:
    """Forward orbit of ``x``, stopping at the first return or after ``max_steps``."""
    x = _check_point(fmap, x)
    points = [x]
    y = x
    for i in range(1, max_steps + 1):
        y = fmap(y)
        points.append(y)
        if y == x:
            return OrbitRecord(x, tuple(points), PeriodFound(i))
    return OrbitRecord(x, tuple(points), CapReached(max_steps))


def _period_tn(N: int, x: Fraction, cap: int) -> int | None:
    # Iterate T_N on numerators over a common denominator L that is grown
    # whenever a new piece k needs k(k+1) | L.
    L = x.denominator * N
    start = pos = x.numerator * N
    shift = {}
    for i in range(1, cap + 1):
        k = L // (L // N - pos)
        t = shift.get(k)
        if t is None:
            need = k * (k + 1)
            if L % need:
                f = need // math.gcd(L, need)
                L *= f
                start *= f
                pos *= f
                shift = {j: v * f for j, v in shift.items()}
            t = shift[k] = L // k + L // (k + 1) - L // N
        pos += t
        if pos == start:
            return i
    return None


def _period_finite(iet: FiniteIET, x: Fraction, cap: int) -> int | None:
    L = iet.common_denominator(x)
    los = [p.lo * L for p in iet.pieces]
    los = [int(v) for v in los]
    shifts = [int(p.translation * L) for p in iet.pieces]
    start = pos = int(x * L)
    search = bisect.bisect_right
    for i in range(1, cap + 1):
        pos += shifts[search(los, pos) - 1]
        if pos == start:
            return i
    return None


def _period_generic(fmap, x: Fraction, cap: int) -> int | None:
    y = x
    for i in range(1, cap + 1):
        y = fmap(y)
        if y == x:
            return i
    return None


def least_period_direct(fmap, x, cap: int = DEFAULT_ITERATION_CAP) -> PeriodStatus:
    """Least period of ``x`` by direct iteration, in constant memory.

    Only the start point is kept; the first return to it is the least period.
    """
    x = _check_point(fmap, x)
    if isinstance(fmap, ReversalFamilyMap):
        p = _period_tn(fmap.N, x, cap)
    elif isinstance(fmap, FiniteIET):
        p = _period_finite(fmap, x, cap)
    else:
        p = _period_generic(fmap, x, cap)
    return CapReached(cap) if p is None else PeriodFound(p)


@dataclass(frozen=True)
class ReturnMapResult:
    """First-return map to ``target`` for the points of ``induced.domain``."""

    induced: FiniteIET
    return_times: tuple[int, ...]
    target: HalfOpenInterval

    def time_at(self, x) -> int:
        x = as_rat(x)
        for p, r in zip(self.induced.pieces, self.return_times):
            if p.lo <= x < p.hi:
                return r
        raise DomainError(f"{x} outside {self.induced.domain}")

    def to_dict(self) -> dict:
        d = self.induced.to_dict()
        for piece, r in zip(d["pieces"], self.return_times):
            piece["return_time"] = str(r)
        d["target"] = {"lo": format_rat(self.target.lo), "hi": format_rat(self.target.hi)}
        return d


def first_return_map(
    fmap,
    target: HalfOpenInterval,
    step_cap: int = 10_000,
    source: HalfOpenInterval | None = None,
    piece_cap: int = DEFAULT_PIECE_CAP,
) -> ReturnMapResult:
    """Induced map on ``target``, computed by following whole subintervals.

    Every piece of the result is certified: all its points share the same
    itinerary, so the return time is constant on it by construction rather
    than by sampling.  ``source`` (default ``target``) restricts the starting
    points, which lets one certify a prefix of an infinite induced map.
    """
    source = target if source is None else source
    if not target.contains_interval(source) or not fmap.domain.contains_interval(target):
        raise DomainError("need source inside target inside the map domain")
    # (lo, hi) of starting points, total translation so far, steps taken
    work = [(source.lo, source.hi, Fraction(0), 0)]
    done: list[tuple[Fraction, Fraction, Fraction, int]] = []
    while work:
        lo, hi, t, n = work.pop()
        if n >= step_cap:
            raise ReturnTimeExceeded(f"points of [{lo}, {hi}) did not return within {step_cap} steps")
        for a, b, s in fmap.pieces_over(lo + t, hi + t, cap=piece_cap):
            t2 = t + s
            ia, ib = a + s, b + s
            inner_lo, inner_hi = max(ia, target.lo), min(ib, target.hi)
            if inner_lo < inner_hi:
                done.append((inner_lo - t2, inner_hi - t2, t2, n + 1))
            if ia < target.lo:
                work.append((ia - t2, min(ib, target.lo) - t2, t2, n + 1))
            if ib > target.hi:
                work.append((max(ia, target.hi) - t2, ib - t2, t2, n + 1))
        if len(work) + len(done) > piece_cap:
            raise RefinementOverflow(f"return map needs more than {piece_cap} pieces")
    done.sort()
    merged: list[list] = []
    for lo, hi, t, n in done:
        if merged and merged[-1][1] == lo and merged[-1][2] == t and merged[-1][3] == n:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi, t, n])
    induced = FiniteIET(source, tuple(Piece(lo, hi, t) for lo, hi, t, _ in merged))
    return ReturnMapResult(induced, tuple(n for *_, n in merged), target)


@dataclass(frozen=True)
class LemmaReport:
    ok: bool
    N: int
    M: int
    pieces_compared: int
    return_times: tuple[int, ...]
    discrepancy: str | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "N": str(self.N),
            "M": str(self.M),
            "pieces_compared": str(self.pieces_compared),
            "return_times": sorted({str(r) for r in self.return_times}),
            "discrepancy": self.discrepancy,
        }


def verify_return_to(N: int, M: int, expected_time: int, piece_budget: int) -> LemmaReport:
    """Compare the return map of ``T_N`` to ``X_M`` with ``T_M`` on its first pieces.

    Starting points are truncated to the first ``piece_budget`` pieces of
    ``T_M``, which avoids the accumulation of pieces at ``1/M``.
    """
    tm = ReversalFamilyMap(M)
    expected = tm.restricted_pieces(piece_budget)
    source = HalfOpenInterval(Fraction(0), expected.domain.hi)
    try:
        res = first_return_map(ReversalFamilyMap(N), tm.domain, step_cap=4 * expected_time + 4, source=source)
    except (RefinementOverflow, ReturnTimeExceeded) as exc:
        return LemmaReport(False, N, M, 0, (), f"return map not computable: {exc}")
    discrepancy = None
    got = res.induced.pieces
    for i, (g, e) in enumerate(zip(got, expected.pieces)):
        if g != e:
            discrepancy = f"piece {i}: got {g}, expected {e}"
            break
    if discrepancy is None and len(got) != len(expected.pieces):
        discrepancy = f"{len(got)} pieces, expected {len(expected.pieces)}"
    if discrepancy is None and set(res.return_times) != {expected_time}:
        discrepancy = f"return times {sorted(set(res.return_times))}, expected {expected_time}"
    return LemmaReport(discrepancy is None, N, M, min(len(got), len(expected.pieces)),
                       res.return_times, discrepancy)


def verify_return_lemma(N: int, piece_budget: int = 50) -> LemmaReport:
    """Return map of ``T_N`` to ``X_{N(N+1)}`` is ``T_{N(N+1)}`` with time 2."""
    return verify_return_to(N, N * (N + 1), 2, piece_budget)
