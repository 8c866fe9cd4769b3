"""Exact rationals, half-open intervals and finite interval exchanges.

Every scalar in the dynamics is a :class:`fractions.Fraction`; the module
exposes it as ``Rat`` together with a strict ``p/q`` text format.
"""

from __future__ import annotations

import bisect
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, InvalidIETError, NoPreimageError, RefinementOverflow

Rat = Fraction

_RAT_RE = re.compile(r"-?[0-9]+(?:/[0-9]+)?")


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (ASCII digits, optional leading minus)."""
    if not isinstance(text, str) or not _RAT_RE.fullmatch(text):
        raise ValueError(f"malformed rational {text!r}: expected p/q or p")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"malformed rational {text!r}: zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def format_rat(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def lcm_range(lo: int, hi: int) -> int:
    """Least common multiple of ``lo, lo+1, ..., hi``."""
    out = 1
    for k in range(lo, hi + 1):
        out = out * k // math.gcd(out, k)
    return out


@dataclass(frozen=True, order=True)
class HalfOpenInterval:
    """The interval ``[lo, hi)``; empty intervals cannot be built."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rat(self.lo))
        object.__setattr__(self, "hi", as_rat(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")

    def __contains__(self, x) -> bool:
        return self.lo <= x < self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains_interval(self, other: HalfOpenInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def shift(self, t) -> HalfOpenInterval:
        return HalfOpenInterval(self.lo + t, self.hi + t)

    def __str__(self) -> str:
        return f"{format_rat(self.lo)},{format_rat(self.hi)}"

    @classmethod
    def parse(cls, text: str) -> HalfOpenInterval:
        lo, sep, hi = text.partition(",")
        if not sep:
            raise ValueError(f"malformed interval {text!r}: expected lo,hi")
        return cls(parse_rat(lo), parse_rat(hi))


Interval = HalfOpenInterval


@dataclass(frozen=True)
class Piece:
    """One continuity piece ``[lo, hi)`` moved by ``translation``."""

    lo: Fraction
    hi: Fraction
    translation: Fraction

    @property
    def interval(self) -> HalfOpenInterval:
        return HalfOpenInterval(self.lo, self.hi)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def image(self) -> HalfOpenInterval:
        return HalfOpenInterval(self.lo + self.translation, self.hi + self.translation)


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FiniteIET:
    """A piecewise translation with finitely many half-open pieces.

    Construction only sorts the pieces; the interval-exchange invariants are
    checked by :func:`validate`, so that intermediate objects such as
    ``T_N^j`` restricted to a non-invariant interval stay representable.
    """

    domain: HalfOpenInterval
    pieces: tuple[Piece, ...]
    _los: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pieces = tuple(sorted(self.pieces, key=lambda p: p.lo))
        if not pieces:
            raise InvalidIETError("an IET needs at least one piece")
        for p in pieces:
            if not p.lo < p.hi:
                raise InvalidIETError(f"empty piece [{p.lo}, {p.hi})")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_los", tuple(p.lo for p in pieces))

    @classmethod
    def from_triples(cls, domain, triples: Iterable[Sequence]) -> FiniteIET:
        if not isinstance(domain, HalfOpenInterval):
            domain = HalfOpenInterval(*domain)
        return cls(domain, tuple(Piece(as_rat(a), as_rat(b), as_rat(t)) for a, b, t in triples))

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self) -> Iterator[Piece]:
        return iter(self.pieces)

    def piece_at(self, x) -> Piece:
        i = bisect.bisect_right(self._los, x) - 1
        if i < 0 or not x < self.pieces[i].hi:
            raise DomainError(f"{x} is not covered by any piece")
        return self.pieces[i]

    def __call__(self, x) -> Fraction:
        x = as_rat(x)
        if x not in self.domain:
            raise DomainError(f"{x} outside {self.domain}")
        return x + self.piece_at(x).translation

    def inverse(self, y) -> Fraction:
        y = as_rat(y)
        for p in self.pieces:
            if p.lo + p.translation <= y < p.hi + p.translation:
                return y - p.translation
        raise NoPreimageError(f"{y} has no preimage")

    def pieces_over(self, lo, hi, cap: int | None = None) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Split ``[lo, hi)`` at the discontinuities; returns ``(lo, hi, translation)``."""
        if lo < self.domain.lo or hi > self.domain.hi:
            raise DomainError(f"[{lo}, {hi}) not inside {self.domain}")
        out = []
        i = bisect.bisect_right(self._los, lo) - 1
        while lo < hi:
            p = self.pieces[i]
            if not p.lo <= lo < p.hi:
                raise DomainError(f"{lo} is not covered by any piece")
            end = min(hi, p.hi)
            out.append((lo, end, p.translation))
            if cap is not None and len(out) > cap:
                raise RefinementOverflow(f"more than {cap} pieces")
            lo = end
            i += 1
        return out

    def normalized(self) -> FiniteIET:
        """Merge abutting pieces carrying the same translation."""
        merged: list[Piece] = []
        for p in self.pieces:
            if merged and merged[-1].hi == p.lo and merged[-1].translation == p.translation:
                merged[-1] = Piece(merged[-1].lo, p.hi, p.translation)
            else:
                merged.append(p)
        return FiniteIET(self.domain, tuple(merged))

    def restrict(self, interval: HalfOpenInterval) -> FiniteIET:
        pieces = [Piece(a, b, t) for a, b, t in self.pieces_over(interval.lo, interval.hi)]
        return FiniteIET(interval, tuple(pieces))

    def common_denominator(self, *extra) -> int:
        den = 1
        values = [self.domain.lo, self.domain.hi, *extra]
        for p in self.pieces:
            values += [p.lo, p.hi, p.translation]
        for v in values:
            d = Fraction(v).denominator
            den = den * d // math.gcd(den, d)
        return den

    def is_identity(self) -> bool:
        return all(p.translation == 0 for p in self.pieces)

    def to_dict(self) -> dict:
        return {
            "domain": {"lo": format_rat(self.domain.lo), "hi": format_rat(self.domain.hi)},
            "pieces": [
                {"lo": format_rat(p.lo), "hi": format_rat(p.hi), "translation": format_rat(p.translation)}
                for p in self.pieces
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> FiniteIET:
        dom = HalfOpenInterval(parse_rat(data["domain"]["lo"]), parse_rat(data["domain"]["hi"]))
        return cls.from_triples(dom, [(parse_rat(p["lo"]), parse_rat(p["hi"]), parse_rat(p["translation"]))
                                      for p in data["pieces"]])

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> FiniteIET:
        return cls.from_dict(json.loads(text))


def validate(iet: FiniteIET) -> ValidationReport:
    """Check tiling, injectivity, containment and measure preservation."""
    failures = []
    pieces = iet.pieces
    dom = iet.domain
    tiled = pieces[0].lo == dom.lo and pieces[-1].hi == dom.hi and all(
        a.hi == b.lo for a, b in zip(pieces, pieces[1:]))
    if not tiled:
        failures.append("domain not tiled")
    images = sorted((p.lo + p.translation, p.hi + p.translation) for p in pieces)
    if any(a[1] > b[0] for a, b in zip(images, images[1:])):
        failures.append("images not disjoint")
    if images[0][0] < dom.lo or max(b for _, b in images) > dom.hi:
        failures.append("image outside domain")
    if sum((p.length for p in pieces), Fraction(0)) != dom.length:
        failures.append("measure not preserved")
    return ValidationReport(tuple(failures))


def check(iet: FiniteIET) -> FiniteIET:
    report = validate(iet)
    if not report:
        raise InvalidIETError("; ".join(report.failures))
    return iet


def reversal_iet(breaks: Sequence[Fraction]) -> FiniteIET:
    """Reverse the order of the pieces ``[breaks[i], breaks[i+1])``."""
    a, b = breaks[0], breaks[-1]
    pieces = [Piece(lo, hi, a + b - lo - hi) for lo, hi in zip(breaks, breaks[1:])]
    return FiniteIET(HalfOpenInterval(a, b), tuple(pieces))


def rmn_build(m: int, n: int, orientation: str = "standard") -> FiniteIET:
    """The reversal IET ``R_{m,n}`` on ``[1/m, 1/n)``.

    ``orientation="standard"`` cuts at the points ``1/k`` (pieces
    ``[1/(k+1), 1/k)``).  ``"mirrored"`` is the same map conjugated by the
    reflection ``x -> 1/m + 1/n - x``; it cuts at ``1/m + 1/n - 1/k``, which is
    how restrictions of ``T_N`` and its powers present themselves with
    right-open pieces.
    """
    if not (isinstance(m, int) and isinstance(n, int)) or not m > n > 0:
        raise ValueError(f"R_(m,n) needs integers m > n > 0, got m={m}, n={n}")
    if orientation == "standard":
        breaks = [Fraction(1, k) for k in range(m, n - 1, -1)]
    elif orientation == "mirrored":
        c = Fraction(1, m) + Fraction(1, n)
        breaks = [c - Fraction(1, k) for k in range(n, m + 1)]
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    return check(reversal_iet(breaks))


def reflect(iet: FiniteIET) -> FiniteIET:
    """Conjugate by ``x -> lo + hi - x`` and re-close pieces on the right.

    The reflected map is only defined up to the finitely many piece
    endpoints; pieces are made right-open again so the result is a FiniteIET.
    """
    c = iet.domain.lo + iet.domain.hi
    pieces = [Piece(c - p.hi, c - p.lo, -p.translation) for p in iet.pieces]
    return FiniteIET(iet.domain, tuple(pieces))


def identity_iet(domain: HalfOpenInterval) -> FiniteIET:
    return FiniteIET(domain, (Piece(domain.lo, domain.hi, Fraction(0)),))
