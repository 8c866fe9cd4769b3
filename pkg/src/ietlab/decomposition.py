"""Least-period spectra of finite rational interval exchanges.

Every orbit of a finite rational IET is periodic.  The spectrum is computed
by right-end Rauzy induction on a shrinking window ``[a, b)``: each window
piece carries a tower height, the exact first-return time of its points.  A
piece that the induced map fixes is an invariant tower; its points all have
least period equal to the height, and it covers ``height * length`` of the
domain.  Runs of moves with the same winner are batched (Zorich
acceleration), so the work grows with the bit size of the denominators rather
than with the periods themselves.

Internally all positions are integers: offsets from ``a`` scaled by a common
denominator of the endpoints, translations and any tracked points.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import FiniteIET, HalfOpenInterval, Piece, as_rat, check, format_rat, lcm_range
from .errors import DomainError, OracleTooLarge
from .orbits import PeriodFound, least_period_direct

DEFAULT_ORACLE_CAP = 10_000_000


@dataclass(frozen=True)
class TowerPiece:
    lo: Fraction
    hi: Fraction
    translation: Fraction
    height: int


@dataclass(frozen=True)
class TowerIET:
    """Induction state: the induced map on ``window`` with return times."""

    window: HalfOpenInterval | None
    pieces: tuple[TowerPiece, ...]

    def as_iet(self) -> FiniteIET:
        return FiniteIET(self.window, tuple(Piece(p.lo, p.hi, p.translation) for p in self.pieces))


@dataclass(frozen=True)
class Component:
    """An invariant tower: ``base`` is fixed by the induced map."""

    base: HalfOpenInterval
    period: int

    @property
    def measure(self) -> Fraction:
        return self.period * self.base.length


@dataclass(frozen=True)
class PeriodSpectrum:
    entries: tuple[tuple[int, Fraction], ...]
    domain_length: Fraction

    @classmethod
    def from_components(cls, components: Iterable[tuple[int, Fraction]], domain_length) -> PeriodSpectrum:
        acc: dict[int, Fraction] = {}
        for period, measure in components:
            acc[period] = acc.get(period, Fraction(0)) + measure
        return cls(tuple(sorted(acc.items())), Fraction(domain_length))

    @property
    def periods(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def total_measure(self) -> Fraction:
        return sum((m for _, m in self.entries), Fraction(0))

    def measure_of(self, period: int) -> Fraction:
        return dict(self.entries).get(period, Fraction(0))

    def merge(self, other: PeriodSpectrum) -> PeriodSpectrum:
        return PeriodSpectrum.from_components(self.entries + other.entries,
                                              self.domain_length + other.domain_length)

    def to_dict(self) -> dict:
        return {
            "entries": [{"period": str(p), "measure": format_rat(m)} for p, m in self.entries],
            "domain_length": format_rat(self.domain_length),
            "measures_derived": True,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> PeriodSpectrum:
        from .core import parse_rat

        return cls(tuple((int(e["period"]), parse_rat(e["measure"])) for e in data["entries"]),
                   parse_rat(data["domain_length"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["period", "measure"])
        for p, m in self.entries:
            w.writerow([str(p), format_rat(m)])
        return buf.getvalue()


class Induction:
    """Right-end Rauzy induction with tower heights and tracked points.

    ``points`` are followed through the induction: whenever the window is cut
    below a tracked point, the point is pushed forward along its orbit back
    into the window.  When the piece holding it is emitted its least period
    is known exactly.
    """

    def __init__(self, iet: FiniteIET, points: Sequence[Fraction] = ()):
        check(iet)
        points = [as_rat(x) for x in points]
        for x in points:
            if x not in iet.domain:
                raise DomainError(f"{x} outside {iet.domain}")
        self.origin = iet.domain.lo
        self.scale = iet.common_denominator(*points)
        sc, a = self.scale, self.origin
        n = len(iet.pieces)
        self.lo = [int((p.lo - a) * sc) for p in iet.pieces]
        self.ln = [int(p.length * sc) for p in iet.pieces]
        self.tr = [int(p.translation * sc) for p in iet.pieces]
        self.ht = [1] * n
        self.dom = list(range(n))
        self.img = sorted(range(n), key=lambda i: self.lo[i] + self.tr[i])
        self.end = int(iet.domain.length * sc)
        self.components: list[Component] = []
        self.tracked = {i: int((x - a) * sc) for i, x in enumerate(points)}
        self.located: dict[int, int] = {}
        self.steps = 0
        self.batches = 0

    @property
    def done(self) -> bool:
        return not self.dom

    def _rat(self, v: int) -> Fraction:
        return self.origin + Fraction(v, self.scale)

    def tower(self) -> TowerIET:
        if self.done:
            return TowerIET(None, ())
        pieces = tuple(TowerPiece(self._rat(self.lo[i]), self._rat(self.lo[i] + self.ln[i]),
                                  Fraction(self.tr[i], self.scale), self.ht[i]) for i in self.dom)
        return TowerIET(HalfOpenInterval(self.origin, self._rat(self.end)), pieces)

    def piece_of(self, pos: int) -> int:
        for i in reversed(self.dom):
            if self.lo[i] <= pos:
                return i
        raise AssertionError("position left of the window")

    def step(self) -> None:
        lo, ln, tr, ht, dom, img = self.lo, self.ln, self.tr, self.ht, self.dom, self.img
        self.steps += 1
        top, bot = dom[-1], img[-1]
        lt, lb = ln[top], ln[bot]
        b = self.end
        if top == bot:
            # the induced map fixes the last piece: an invariant tower
            self.components.append(Component(HalfOpenInterval(self._rat(lo[top]), self._rat(b)), ht[top]))
            for key, x in list(self.tracked.items()):
                if x >= lo[top]:
                    self.located[key] = ht[top]
                    del self.tracked[key]
            dom.pop()
            img.pop()
            self.end -= lt
            return
        if lt > lb:
            step = -tr[top]
            m = lt // step - 1
            if m >= 1:
                # m full cycles of the images to the right of the top image
                self.batches += 1
                new_end = b - m * step
                for key, x in self.tracked.items():
                    if x >= new_end:
                        self.tracked[key] = x + ((x - new_end) // step + 1) * tr[top]
                for i in img[img.index(top) + 1:]:
                    tr[i] += m * tr[top]
                    ht[i] += m * ht[top]
                ln[top] -= m * step
                self.end = new_end
                return
            new_end = b - lb
            for key, x in self.tracked.items():
                if x >= new_end:
                    self.tracked[key] = x + tr[top]
            tr[bot] += tr[top]
            ht[bot] += ht[top]
            ln[top] -= lb
            img.pop()
            img.insert(img.index(top) + 1, bot)
            self.end = new_end
        elif lb > lt:
            step = tr[bot]
            m = lb // step - 1
            if m >= 1:
                # m full cycles of the domain pieces to the right of the bottom piece
                self.batches += 1
                new_end = b - m * step
                right = dom[dom.index(bot) + 1:]
                for key, x in self.tracked.items():
                    if x >= new_end:
                        if x < b - step:
                            # still inside the bottom piece: ride it into the right block
                            x += -((x - b + step) // step) * step
                        i = next(j for j in reversed(right) if lo[j] <= x)
                        self.tracked[key] = x + tr[i]
                for i in right:
                    lo[i] -= m * step
                    tr[i] += m * step
                    ht[i] += m * ht[bot]
                ln[bot] -= m * step
                self.end = new_end
                return
            new_end = b - lt
            for key, x in self.tracked.items():
                if x >= new_end:
                    self.tracked[key] = x + tr[top]
            lo[top] = lo[bot] + lb - lt
            tr[top] += step
            ht[top] += ht[bot]
            ln[bot] -= lt
            dom.pop()
            dom.insert(dom.index(bot) + 1, top)
            self.end = new_end
        else:
            new_end = b - lt
            for key, x in self.tracked.items():
                if x >= new_end:
                    self.tracked[key] = x + tr[top]
            tr[bot] += tr[top]
            ht[bot] += ht[top]
            dom.pop()
            img.pop()
            img[img.index(top)] = bot
            self.end = new_end

    def run(self, max_steps: int | None = None) -> None:
        while self.dom and (max_steps is None or self.steps < max_steps):
            self.step()

    def lower_bounds(self) -> dict[int, int]:
        """Certified lower bound on the least period of each unresolved point."""
        return {key: self.ht[self.piece_of(x)] for key, x in self.tracked.items()}


def split_invariant(iet: FiniteIET) -> list[FiniteIET]:
    """Cut ``iet`` at every point ``c`` where ``[lo, c)`` is invariant."""
    out = []
    start = 0
    cover_hi = None
    covered = Fraction(0)
    pieces = iet.pieces
    for i, p in enumerate(pieces):
        img = p.image
        cover_hi = img.hi if cover_hi is None else max(cover_hi, img.hi)
        covered += p.length
        lo = pieces[start].lo
        if cover_hi == p.hi and img.lo >= lo and all(q.image.lo >= lo for q in pieces[start:i + 1]):
            out.append(FiniteIET(HalfOpenInterval(lo, p.hi), pieces[start:i + 1]))
            start = i + 1
            cover_hi = None
    if start != len(pieces):
        raise AssertionError("pieces did not close into invariant blocks")
    return out


def decompose(iet: FiniteIET) -> PeriodSpectrum:
    """Exact least-period spectrum with per-period Lebesgue measure."""
    return PeriodSpectrum.from_components(
        ((c.period, c.measure) for c in components(iet)), iet.domain.length)


def components(iet: FiniteIET) -> list[Component]:
    check(iet)
    out = []
    for block in split_invariant(iet):
        ind = Induction(block)
        ind.run()
        out.extend(ind.components)
    return out


def locate(iet: FiniteIET, points: Sequence, period_cap: int | None = None,
           check_every: int = 256) -> list[int | tuple[str, int]]:
    """Exact least period of each point, without iterating its orbit.

    With ``period_cap`` a point stops being followed as soon as its period
    is certified to exceed the cap; it comes back as ``("above", bound)``.
    """
    points = [as_rat(x) for x in points]
    ind = Induction(iet, points)
    above: dict[int, int] = {}
    while ind.tracked and not ind.done:
        ind.step()
        if period_cap is not None and ind.steps % check_every == 0:
            for key, bound in ind.lower_bounds().items():
                if bound > period_cap:
                    above[key] = bound
                    del ind.tracked[key]
    return [ind.located[i] if i in ind.located else ("above", above[i]) for i in range(len(points))]


@dataclass(frozen=True)
class LatticeOracleResult:
    modulus: int
    offset: Fraction
    cycle_lengths: tuple[tuple[int, int], ...]  # (length, multiplicity)

    @property
    def point_count(self) -> int:
        return sum(length * mult for length, mult in self.cycle_lengths)

    @property
    def length_set(self) -> set[int]:
        return {length for length, _ in self.cycle_lengths}

    def spectrum(self) -> PeriodSpectrum:
        """Measures assuming every lattice cell moves rigidly with its point."""
        entries = [(length, Fraction(length * mult, self.modulus)) for length, mult in self.cycle_lengths]
        total = Fraction(self.point_count, self.modulus)
        return PeriodSpectrum.from_components(entries, total)

    def to_dict(self) -> dict:
        return {
            "modulus": str(self.modulus),
            "offset": format_rat(self.offset),
            "cycle_lengths": [{"length": str(c), "multiplicity": str(m)} for c, m in self.cycle_lengths],
        }


def lattice_oracle(iet: FiniteIET, offset=None, cap: int = DEFAULT_ORACLE_CAP) -> LatticeOracleResult:
    """Brute-force cycle structure on the lattice ``offset + Z/D`` inside the domain.

    ``D`` is the least common denominator of the endpoints and translations,
    so the map permutes the lattice points; the default offset puts them in
    the middle of the lattice cells, away from every discontinuity.
    """
    check(iet)
    D = iet.common_denominator()
    dom = iet.domain
    offset = dom.lo + Fraction(1, 2 * D) if offset is None else as_rat(offset)
    first = math.ceil((dom.lo - offset) * D)
    stop = math.ceil((dom.hi - offset) * D)
    count = stop - first
    if count > cap:
        raise OracleTooLarge(f"{count} lattice points exceed cap {cap}")
    perm = [0] * count
    for p in iet.pieces:
        j0 = math.ceil((p.lo - offset) * D) - first
        j1 = math.ceil((p.hi - offset) * D) - first
        shift = int(p.translation * D)
        perm[j0:j1] = range(j0 + shift, j1 + shift)
    seen = bytearray(count)
    lengths: Counter[int] = Counter()
    for s in range(count):
        if seen[s]:
            continue
        n = 0
        j = s
        while not seen[j]:
            seen[j] = 1
            j = perm[j]
            n += 1
        lengths[n] += 1
    return LatticeOracleResult(D, offset, tuple(sorted(lengths.items())))


@dataclass(frozen=True)
class DivisibilityRow:
    period: int
    divides: bool
    remainder: int


@dataclass(frozen=True)
class DivisibilityReport:
    m: int
    n: int
    lcm: int
    rows: tuple[DivisibilityRow, ...]

    @property
    def all_divide(self) -> bool:
        return all(r.divides for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "m": str(self.m),
            "n": str(self.n),
            "lcm": str(self.lcm),
            "rows": [{"period": str(r.period), "divides": r.divides, "remainder": str(r.remainder)}
                     for r in self.rows],
        }


def divisibility_report(spectrum: PeriodSpectrum, m: int, n: int) -> DivisibilityReport:
    """Whether each least period divides ``lcm(n, ..., m)``.  Reported, never enforced."""
    big = lcm_range(n, m)
    return DivisibilityReport(m, n, big, tuple(DivisibilityRow(p, big % p == 0, big % p)
                                               for p in spectrum.periods))


@dataclass(frozen=True)
class CrossValidationReport:
    seed: int
    checked: tuple[tuple[Fraction, int], ...]
    skipped: tuple[tuple[Fraction, object], ...]
    mismatches: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def counts_by_period(self) -> Counter:
        return Counter(p for _, p in self.checked)

    def to_dict(self) -> dict:
        return {
            "seed": str(self.seed),
            "ok": self.ok,
            "checked": [{"x": format_rat(x), "period": str(p)} for x, p in self.checked],
            "skipped": [format_rat(x) for x, _ in self.skipped],
            "mismatches": list(self.mismatches),
        }


def random_points(domain: HalfOpenInterval, count: int, rng: random.Random,
                  resolution: int = 10**6) -> list[Fraction]:
    return [domain.lo + domain.length * Fraction(rng.randrange(resolution), resolution)
            for _ in range(count)]


def cross_validate(iet: FiniteIET, spectrum: PeriodSpectrum, samples: int, cap: int,
                   seed: int = 0, points: Sequence | None = None) -> CrossValidationReport:
    """Check spectrum periods against direct iteration at seeded random points.

    The component of each point is found by :func:`locate`; points whose
    component period exceeds ``cap`` are skipped, the rest are iterated.
    """
    rng = random.Random(seed)
    pts = list(points) if points is not None else random_points(iet.domain, samples, rng)
    predicted = locate(iet, pts, period_cap=cap)
    checked, skipped, mismatches = [], [], []
    periods = set(spectrum.periods)
    for x, p in zip(pts, predicted):
        if isinstance(p, tuple) or p > cap:
            skipped.append((x, p))
            continue
        if p not in periods:
            mismatches.append(f"{format_rat(x)}: component period {p} not in spectrum")
            continue
        got = least_period_direct(iet, x, cap)
        if got != PeriodFound(p):
            mismatches.append(f"{format_rat(x)}: iteration gives {got}, spectrum says {p}")
            continue
        checked.append((x, p))
    return CrossValidationReport(seed, tuple(checked), tuple(skipped), tuple(mismatches))
