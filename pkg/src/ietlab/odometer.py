"""Binary words, eventually constant 2-adic integers and the odometer.

Digits are stored least significant first: ``Word("110")`` has ``w_0 = 1``,
``w_1 = 1``, ``w_2 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import HalfOpenInterval, as_rat
from .errors import DomainError, RefinementOverflow, UndefinedSuccessor


@dataclass(frozen=True, order=True)
class Word:
    digits: tuple[int, ...] = ()

    def __init__(self, digits=()):
        if isinstance(digits, str):
            digits = tuple(int(c) for c in digits) if all(c in "01" for c in digits) else None
            if digits is None:
                raise ValueError("words are strings over {0, 1}")
        digits = tuple(digits)
        if any(d not in (0, 1) for d in digits):
            raise ValueError(f"digits must be 0 or 1, got {digits}")
        object.__setattr__(self, "digits", digits)

    @classmethod
    def ones(cls, k: int) -> Word:
        return cls((1,) * k)

    @classmethod
    def zeros(cls, k: int) -> Word:
        return cls((0,) * k)

    @classmethod
    def from_int(cls, n: int, length: int) -> Word:
        """Binary expansion of ``n`` (least significant digit first), padded."""
        if not 0 <= n < 2**length:
            raise ValueError(f"{n} does not fit in {length} digits")
        return cls(tuple((n >> i) & 1 for i in range(length)))

    def to_int(self) -> int:
        return sum(d << i for i, d in enumerate(self.digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __add__(self, other: Word) -> Word:
        return Word(self.digits + tuple(other))

    def is_all_ones(self) -> bool:
        return all(self.digits)

    def first_zero(self) -> int:
        return self.digits.index(0)

    def __str__(self) -> str:
        return "".join(map(str, self.digits))


def all_words(length: int) -> Iterator[Word]:
    for n in range(2**length):
        yield Word.from_int(n, length)


def word_step(w: Word) -> Word:
    """Addition by one with carry, keeping the length; undefined on ``1^k``."""
    if w.is_all_ones():
        raise UndefinedSuccessor(f"f is undefined at the all-ones word {w!s}")
    j = w.first_zero()
    return Word((0,) * j + (1,) + w.digits[j + 1:])


@dataclass(frozen=True)
class AdicSeq:
    """The sequence ``prefix`` followed by all zeros (``tail=0``) or all ones.

    The prefix is kept in canonical form (no trailing digits equal to the
    tail), so equality is equality of sequences.
    """

    prefix: Word
    tail: int = 0

    def __post_init__(self):
        if self.tail not in (0, 1):
            raise ValueError("tail must be 0 or 1")
        digits = list(Word(self.prefix).digits)
        while digits and digits[-1] == self.tail:
            digits.pop()
        object.__setattr__(self, "prefix", Word(digits))

    @classmethod
    def zero(cls) -> AdicSeq:
        return cls(Word(), 0)

    @classmethod
    def from_int(cls, n: int) -> AdicSeq:
        if n < 0:
            raise ValueError("use nonnegative integers")
        return cls(Word.from_int(n, n.bit_length()), 0)

    @classmethod
    def parse(cls, text: str) -> AdicSeq:
        """``"110+0"`` / ``"01+1"``; a bare word means a zero tail."""
        word, sep, tail = text.partition("+")
        tail = tail.rstrip("̄")
        return cls(Word(word), int(tail) if sep else 0)

    def digit(self, k: int) -> int:
        return self.prefix.digits[k] if k < len(self.prefix) else self.tail

    def truncate(self, k: int) -> Word:
        return Word(tuple(self.digit(i) for i in range(k)))

    def in_N(self) -> bool:
        """Ends in infinitely many ones."""
        return self.tail == 1

    def is_all_ones(self) -> bool:
        return self.tail == 1 and len(self.prefix) == 0

    def __str__(self) -> str:
        return f"{self.prefix}+{self.tail}̄"


def odometer_step(alpha: AdicSeq) -> AdicSeq:
    """Addition by one on a 2-adic integer; the all-ones sequence has no successor here."""
    if alpha.is_all_ones():
        raise UndefinedSuccessor("f(1111...) wraps to 0000... only in the group completion")
    j = 0
    while alpha.digit(j) == 1:
        j += 1
    digits = (0,) * j + (1,) + tuple(alpha.digit(i) for i in range(j + 1, max(len(alpha.prefix), j + 1)))
    return AdicSeq(Word(digits), alpha.tail)


def vdc_piece(x: Fraction) -> int:
    """The ``j >= 1`` with ``x`` in ``[1 - 2^(1-j), 1 - 2^(-j))``."""
    y = 1 - x
    e = y.numerator.bit_length() - y.denominator.bit_length()
    if Fraction(2) ** e > y:
        e -= 1
    elif Fraction(2) ** (e + 1) <= y:
        e += 1
    # now 2^e <= y < 2^(e+1); the piece needs 2^-j < y <= 2^(1-j)
    return 1 - e if y == Fraction(2) ** e else -e


def vdc_eval(x) -> Fraction:
    """Van der Corput map, evaluated piece by piece."""
    x = as_rat(x)
    if not 0 <= x < 1:
        raise DomainError(f"{x} outside [0, 1)")
    j = vdc_piece(x)
    return x - 1 + Fraction(2) ** (1 - j) + Fraction(2) ** (-j)


def vdc_log_formula(x) -> Fraction:
    """``x - 1 + 2^k + 2^(k-1)`` with ``k = floor(log2(1 - x))`` taken literally.

    Agrees with :func:`vdc_eval` only at left endpoints of the dyadic pieces.
    """
    x = as_rat(x)
    y = 1 - x
    k = y.numerator.bit_length() - y.denominator.bit_length()
    if Fraction(2) ** k > y:
        k -= 1
    elif Fraction(2) ** (k + 1) <= y:
        k += 1
    return x - 1 + Fraction(2) ** k + Fraction(2) ** (k - 1)


@dataclass(frozen=True)
class VanDerCorputMap:
    """The binary odometer as an infinite IET of ``[0, 1)``."""

    @property
    def domain(self) -> HalfOpenInterval:
        return HalfOpenInterval(Fraction(0), Fraction(1))

    def __call__(self, x) -> Fraction:
        return vdc_eval(x)

    def pieces_over(self, lo, hi, cap=None):
        if lo < 0 or hi > 1 or not lo < hi:
            raise DomainError(f"[{lo}, {hi}) not inside [0, 1)")
        if hi == 1:
            raise RefinementOverflow("pieces accumulate at 1")
        out = []
        j = vdc_piece(lo)
        while lo < hi:
            end = min(hi, 1 - Fraction(1, 2**j))
            out.append((lo, end, Fraction(2) ** (1 - j) + Fraction(2) ** (-j) - 1))
            if cap is not None and len(out) > cap:
                raise RefinementOverflow(f"more than {cap} pieces")
            lo = end
            j += 1
        return out
