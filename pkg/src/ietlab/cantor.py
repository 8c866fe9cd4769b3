"""Cantor sets ``C(s, [a0, b0])``, the address map ``h`` and ``T_N`` addresses.

Level ``k`` consists of the ``2^k`` closed intervals ``I_w`` (``|w| = k``),
all of length ``l_k = (b0 - a0) * s_0 * ... * s_(k-1)``.  ``I_w0`` keeps the
left end of ``I_w`` and ``I_w1`` the right end, each scaled by ``s_|w|``.
For ``T_N`` one takes ``[a0, b0] = [0, 1/N]`` and ``s_k = 1/(1 + N_k)`` with
``N_0 = N``, ``N_(k+1) = N_k (1 + N_k)``, so that ``l_k = 1/N_k``.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .core import HalfOpenInterval, as_rat, format_rat, rmn_build
from .decomposition import locate
from .errors import CapExceeded, DomainError
from .odometer import AdicSeq, Word, all_words, odometer_step, word_step
from .orbits import CapReached, PeriodFound, least_period_direct
from .reversal import ReversalFamilyMap, tn_eval

DEFAULT_DEPTH = 16
HARD_DEPTH_CAP = 24
HALF = Fraction(1, 2)


class CantorSpec:
    """Initial interval and ratio sequence of a Cantor-set construction.

    ``degenerate`` marks sequences for which the strict condition
    ``limsup s_k < 1/2`` cannot be certified (for instance ``s = 1/2``
    throughout); the interval tree is still well defined, but gaps and the
    finiteness of the two-to-one locus are not guaranteed.
    """

    def __init__(self, a0, b0, s: Callable[[int], Fraction], degenerate: bool = False,
                 depth_cap: int = HARD_DEPTH_CAP):
        self.a0 = as_rat(a0)
        self.b0 = as_rat(b0)
        if not self.a0 < self.b0:
            raise ValueError("need a0 < b0")
        self._s = s
        self.degenerate = degenerate
        self.depth_cap = depth_cap
        self._lengths = [self.b0 - self.a0]
        self._lock = threading.Lock()

    def s(self, k: int) -> Fraction:
        if k > self.depth_cap:
            raise CapExceeded(f"depth {k} beyond cap {self.depth_cap}")
        v = as_rat(self._s(k))
        if not 0 < v <= HALF:
            raise ValueError(f"s_{k} = {v} is not in (0, 1/2]")
        return v

    def length(self, k: int) -> Fraction:
        with self._lock:
            while len(self._lengths) <= k:
                j = len(self._lengths) - 1
                self._lengths.append(self._lengths[j] * self.s(j))
            return self._lengths[k]

    @property
    def domain(self) -> HalfOpenInterval:
        return HalfOpenInterval(self.a0, self.b0)


def constant_spec(a0, b0, ratio) -> CantorSpec:
    ratio = as_rat(ratio)
    return CantorSpec(a0, b0, lambda k: ratio, degenerate=ratio == HALF)


def dyadic_spec() -> CantorSpec:
    """``s = 1/2`` on ``[0, 1]``: ``h`` reads the digits as a reversed binary fraction."""
    return constant_spec(0, 1, HALF)


@lru_cache(maxsize=None)
def _nk(N: int, k: int) -> int:
    if k == 0:
        return N
    prev = _nk(N, k - 1)
    return prev * (1 + prev)


class TnCantorSpec(CantorSpec):
    """The Cantor set whose points off ``N`` (the non-ones-tailed sequences) are aperiodic for ``T_N``."""

    def __init__(self, N: int, depth_cap: int = HARD_DEPTH_CAP):
        if not isinstance(N, int) or N < 1:
            raise ValueError("N must be a positive integer")
        self.N = N
        super().__init__(0, Fraction(1, N), lambda k: Fraction(1, 1 + self.Nk(k)), degenerate=False,
                         depth_cap=depth_cap)

    def Nk(self, k: int) -> int:
        if k > self.depth_cap + 1:
            raise CapExceeded(f"N_{k} beyond depth cap {self.depth_cap}")
        if k > 64:
            # deep recursion in the memo; iterate instead
            v = self.N
            for _ in range(k):
                v = v * (1 + v)
            return v
        return _nk(self.N, k)


@dataclass(frozen=True)
class WordInterval:
    word: Word
    lo: Fraction
    hi: Fraction

    @property
    def star(self) -> HalfOpenInterval:
        return HalfOpenInterval(self.lo, self.hi)

    def to_dict(self) -> dict:
        return {"word": str(self.word), "lo": format_rat(self.lo), "hi": format_rat(self.hi)}


def interval_of_word(spec: CantorSpec, w: Word, verify: bool = False) -> WordInterval:
    a, b = spec.a0, spec.b0
    for k, d in enumerate(w):
        child = spec.length(k + 1)
        if d == 0:
            b = a + child
        else:
            a = b - child
    out = WordInterval(Word(w), a, b)
    if verify:
        lo, hi = h_eval(spec, AdicSeq(w, 0)), h_eval(spec, AdicSeq(w, 1))
        if (lo, hi) != (a, b):
            raise AssertionError(f"I_{w} = [{a}, {b}] but h gives [{lo}, {hi}]")
    return out


def level(spec: CantorSpec, k: int) -> list[WordInterval]:
    """All ``2^k`` intervals of level ``k``, left to right."""
    out = [WordInterval(Word(), spec.a0, spec.b0)]
    for j in range(k):
        child = spec.length(j + 1)
        out = [iv for w in out for iv in (WordInterval(w.word + Word((0,)), w.lo, w.lo + child),
                                          WordInterval(w.word + Word((1,)), w.hi - child, w.hi))]
    return out


def h_eval(spec: CantorSpec, alpha: AdicSeq) -> Fraction:
    """``a0 + sum_k alpha_k (l_k - l_(k+1))``; a ones tail after ``m`` digits adds ``l_m``."""
    total = spec.a0
    m = len(alpha.prefix)
    for k, d in enumerate(alpha.prefix):
        if d:
            total += spec.length(k) - spec.length(k + 1)
    if alpha.tail == 1:
        total += spec.length(m)
    return total


@dataclass(frozen=True)
class AddressResult:
    kind: str  # "prefix" | "gap" | "right_endpoint"
    word: Word
    gap: tuple[Fraction, Fraction] | None = None

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "word": str(self.word)}
        if self.gap is not None:
            d["gap"] = {"lo": format_rat(self.gap[0]), "hi": format_rat(self.gap[1])}
        return d


def address(spec: CantorSpec, x, depth: int) -> AddressResult:
    """Descend the star intervals ``I_w`` (right endpoint removed) containing ``x``."""
    x = as_rat(x)
    if not spec.a0 <= x < spec.b0:
        raise DomainError(f"{x} outside [{spec.a0}, {spec.b0})")
    a, b = spec.a0, spec.b0
    digits: list[int] = []
    for k in range(depth):
        child = spec.length(k + 1)
        left_end, right_start = a + child, b - child
        if x < left_end:
            digits.append(0)
            b = left_end
        elif x >= right_start:
            digits.append(1)
            a = right_start
        elif x == left_end and spec.s(k) < HALF:
            return AddressResult("right_endpoint", Word(digits + [0]))
        else:
            return AddressResult("gap", Word(digits), (left_end, right_start))
    return AddressResult("prefix", Word(digits))


@dataclass(frozen=True)
class Classification:
    kind: str  # "periodic" | "boundary_periodic" | "in_cantor_prefix"
    word: Word
    period: int | None = None
    cap_reached: bool = False
    # certified lower bound on the period (the period itself when known from
    # the block IET), set when iteration was skipped as futile
    above: int | None = None

    @property
    def determined(self) -> bool:
        return self.kind != "in_cantor_prefix"

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "word": str(self.word)}
        if self.period is not None:
            d["period"] = str(self.period)
        if self.cap_reached:
            d["cap_reached"] = True
        if self.above is not None:
            d["period_above"] = str(self.above)
        return d


def classify(N: int, x, depth: int = DEFAULT_DEPTH, iteration_cap: int = 10_000_000,
             spec: TnCantorSpec | None = None) -> Classification:
    """Periodic / boundary-periodic / undetermined verdict for ``x`` under ``T_N``.

    Points in a gap of the Cantor set, or on the left edge of a gap, are
    periodic; their least period is searched by iteration up to the cap.  A
    full-depth prefix is not a proof of aperiodicity, so it is reported as
    undetermined.
    """
    spec = spec or TnCantorSpec(N)
    addr = address(spec, x, depth)
    if addr.kind == "prefix":
        return Classification("in_cantor_prefix", addr.word)
    kind = "periodic" if addr.kind == "gap" else "boundary_periodic"
    res = least_period_direct(ReversalFamilyMap(N), x, iteration_cap)
    if isinstance(res, CapReached):
        return Classification(kind, addr.word, None, True)
    return Classification(kind, addr.word, res.period)


def classify_many(N: int, xs: Sequence, depth: int = DEFAULT_DEPTH, iteration_cap: int = 10_000_000,
                  block_limit: int = 100_000) -> list[Classification]:
    """Batch :func:`classify` that skips iterations known to be futile.

    Gap points whose block IET has at most ``block_limit`` pieces get their
    period (or a certified lower bound) from the block first; iteration then
    only runs where it can succeed.  Points certified above the cap are
    reported with ``cap_reached`` and the bound, without iterating.
    """
    spec = TnCantorSpec(N)
    fmap = ReversalFamilyMap(N)
    addrs = [address(spec, x, depth) for x in xs]
    todo = [i for i, a in enumerate(addrs) if a.kind != "prefix"]
    small = []
    for i in todo:
        k = len(addrs[i].word) - (addrs[i].kind == "right_endpoint")
        if spec.Nk(k + 1) - spec.Nk(k) - 1 <= block_limit:
            small.append(i)
    predicted = dict(zip(small, renormalized_periods(N, [xs[i] for i in small], iteration_cap, depth)))
    out = []
    for i, (x, a) in enumerate(zip(xs, addrs)):
        if a.kind == "prefix":
            out.append(Classification("in_cantor_prefix", a.word))
            continue
        kind = "periodic" if a.kind == "gap" else "boundary_periodic"
        guess = predicted.get(i)
        if isinstance(guess, tuple):
            out.append(Classification(kind, a.word, None, True, guess[1]))
            continue
        if guess is not None and guess > iteration_cap:
            # exact block period, out of reach of iteration
            out.append(Classification(kind, a.word, None, True, guess))
            continue
        res = least_period_direct(fmap, x, iteration_cap)
        if guess is not None and res != PeriodFound(guess):
            raise AssertionError(f"{x}: block predicts period {guess}, iteration gives {res}")
        if isinstance(res, CapReached):
            out.append(Classification(kind, a.word, None, True))
        else:
            out.append(Classification(kind, a.word, res.period))
    return out


@dataclass(frozen=True)
class Renormalization:
    """``x = T_N^shift(base_point)`` with ``base_point`` in the invariant block of ``X_(N_k)``."""

    depth: int
    base_point: Fraction
    shift: int
    block_m: int
    block_n: int

    @property
    def return_time(self) -> int:
        return 2**self.depth


def renormalize(N: int, x, spec: TnCantorSpec | None = None, depth: int = DEFAULT_DEPTH) -> Renormalization:
    """Move a gap point of level ``k`` back into ``X_(N_k)``.

    There the first return map of ``T_N`` is ``T_(N_k)`` (return time
    ``2^k``), and the gap corresponds to the block
    ``[1/N_(k+1), 1/N_k - 1/N_(k+1))`` on which ``T_(N_k)`` is the mirrored
    ``R_(N_(k+1), N_k + 1)``.
    """
    spec = spec or TnCantorSpec(N)
    addr = address(spec, x, depth)
    if addr.kind == "prefix":
        raise ValueError(f"{x} has no gap within depth {depth}")
    w = addr.word if addr.kind == "gap" else Word(addr.word.digits[:-1])
    k = len(w)
    left = interval_of_word(spec, w).lo
    return Renormalization(k, as_rat(x) - left, w.to_int(), spec.Nk(k + 1), spec.Nk(k) + 1)


def renormalized_periods(N: int, xs: Sequence, period_cap: int | None = None,
                         depth: int = DEFAULT_DEPTH) -> list:
    """Least periods of gap points under ``T_N`` through the finite block IETs.

    Returns, per point, an exact period or ``("above", bound)`` when the
    period is certified to exceed ``period_cap``.
    """
    spec = TnCantorSpec(N)
    renorms = [renormalize(N, x, spec, depth) for x in xs]
    out: list = [None] * len(xs)
    groups: dict[tuple[int, int, int], list[int]] = {}
    for i, r in enumerate(renorms):
        groups.setdefault((r.depth, r.block_m, r.block_n), []).append(i)
    for (k, m, n), idx in sorted(groups.items()):
        block = rmn_build(m, n, "mirrored")
        cap = None if period_cap is None else period_cap // 2**k
        found = locate(block, [renorms[i].base_point for i in idx], period_cap=cap)
        for i, p in zip(idx, found):
            out[i] = ("above", p[1] * 2**k) if isinstance(p, tuple) else p * 2**k
    return out


def key_translation(N: int, j: int) -> Fraction:
    spec_nk = TnCantorSpec(N).Nk(j)
    return -Fraction(1, N) + Fraction(1, spec_nk) + Fraction(1, 1 + spec_nk)


@dataclass(frozen=True)
class VerificationReport:
    name: str
    checked: int
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def to_dict(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "checked": str(self.checked), "failures": list(self.failures)}


def verify_key_lemma(N: int, max_len: int) -> VerificationReport:
    """``T_N`` translates ``I_w*`` onto ``I_f(w)*`` for every non-all-ones word."""
    spec = TnCantorSpec(N)
    failures = []
    checked = 0
    for length in range(1, max_len + 1):
        for w in all_words(length):
            if w.is_all_ones():
                continue
            checked += 1
            tau = key_translation(N, w.first_zero())
            src = interval_of_word(spec, w)
            dst = interval_of_word(spec, word_step(w))
            if (dst.lo, dst.hi) != (src.lo + tau, src.hi + tau):
                failures.append(f"{w}: I_f(w) is not I_w + {format_rat(tau)}")
                continue
            width = src.hi - src.lo
            for x in (src.lo, src.lo + width / 3, src.hi - width / 10**6):
                if tn_eval(N, x) != x + tau:
                    failures.append(f"{w}: T_{N}({format_rat(x)}) is not a translation by {format_rat(tau)}")
                    break
    return VerificationReport(f"key-lemma N={N} len<={max_len}", checked, tuple(failures))


def verify_conjugacy(N: int, words: Iterable[Word]) -> VerificationReport:
    """``T_N(h(w0...)) = h(f(w0...))`` exactly."""
    spec = TnCantorSpec(N)
    failures = []
    checked = 0
    for w in words:
        if 0 not in w.digits:
            raise ValueError(f"word {w} has no zero digit")
        alpha = AdicSeq(w, 0)
        checked += 1
        lhs = tn_eval(N, h_eval(spec, alpha))
        rhs = h_eval(spec, odometer_step(alpha))
        if lhs != rhs:
            failures.append(f"{w}: T(h) = {format_rat(lhs)} but h(f) = {format_rat(rhs)}")
    return VerificationReport(f"conjugacy N={N}", checked, tuple(failures))


def random_words(count: int, seed: int = 0, max_len: int = 12) -> list[Word]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        w = Word(tuple(rng.randrange(2) for _ in range(rng.randint(1, max_len))))
        if 0 in w.digits:
            out.append(w)
    return out


def vdc_conjugacy_check(alpha: AdicSeq) -> VerificationReport:
    from .odometer import vdc_eval

    if alpha.in_N():
        raise ValueError(f"{alpha} ends in ones; the conjugacy excludes such sequences")
    spec = dyadic_spec()
    lhs = vdc_eval(h_eval(spec, alpha))
    rhs = h_eval(spec, odometer_step(alpha))
    failures = () if lhs == rhs else (f"{alpha}: S(h) = {format_rat(lhs)} but h(f) = {format_rat(rhs)}",)
    return VerificationReport(f"vdc {alpha}", 1, failures)


@dataclass(frozen=True)
class ContentBound:
    """Cover sum ``2^k (l_k / 2)^d`` of level ``k``.

    ``exact`` is set for integer ``d``; ``log2_upper`` is always a certified
    upper bound on the base-2 logarithm of the sum.
    """

    d: Fraction
    k: int
    exact: Fraction | None
    log2_upper: Fraction

    def certified_below(self, threshold) -> bool:
        """True only if ``2^log2_upper < threshold`` holds exactly."""
        t = as_rat(threshold)
        if t <= 0:
            return False
        u, v = self.log2_upper.numerator, self.log2_upper.denominator
        # 2^(u/v) < t  <=>  2^u < t^v
        return Fraction(2) ** u < t**v

    def to_dict(self) -> dict:
        d = {"d": format_rat(self.d), "k": str(self.k), "log2_upper": format_rat(self.log2_upper)}
        if self.exact is not None:
            d["exact"] = format_rat(self.exact)
        return d


def floor_log2(r: Fraction) -> int:
    if r <= 0:
        raise ValueError("log of a nonpositive number")
    e = r.numerator.bit_length() - r.denominator.bit_length()
    if Fraction(2) ** e > r:
        e -= 1
    return e


def content_bound(spec: CantorSpec, d, k: int) -> ContentBound:
    d = as_rat(d)
    if d <= 0:
        raise ValueError("d must be positive")
    half = spec.length(k) / 2
    # log2(half) < floor_log2(half) + 1, and d > 0 keeps the direction
    upper = k + d * (floor_log2(half) + 1)
    exact = None
    if d.denominator == 1:
        exact = Fraction(2) ** k * half ** int(d)
    return ContentBound(d, k, exact, upper)
