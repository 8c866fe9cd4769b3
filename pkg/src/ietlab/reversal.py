"""The infinite reversal maps ``T_N`` on ``X_N = [0, 1/N)``.

``T_N`` cuts ``X_N`` at the points ``1/N - 1/k`` (``k >= N``) and reverses the
order of the pieces.  The pieces accumulate at ``1/N``, so the map is always
evaluated through the closed-form piece lookup and never enumerated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import FiniteIET, HalfOpenInterval, Piece, as_rat
from .errors import DomainError, NoPreimageError, NotInvariantError, RefinementOverflow

DEFAULT_PIECE_CAP = 10_000


def _check_n(N) -> int:
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    return N


def piece_index(N: int, x) -> int:
    """The ``k`` with ``x`` in ``[1/N - 1/k, 1/N - 1/(k+1))``."""
    _check_n(N)
    x = as_rat(x)
    if not 0 <= x < Fraction(1, N):
        raise DomainError(f"{x} outside [0, 1/{N})")
    gap = Fraction(1, N) - x
    return gap.denominator // gap.numerator


def translation(N: int, k: int) -> Fraction:
    return Fraction(1, k) + Fraction(1, k + 1) - Fraction(1, N)


def tn_eval(N: int, x) -> Fraction:
    x = as_rat(x)
    return x + translation(N, piece_index(N, x))


def tn_inverse(N: int, y) -> Fraction:
    # piece k is carried onto [1/(k+1), 1/k)
    _check_n(N)
    y = as_rat(y)
    if not 0 < y < Fraction(1, N):
        raise NoPreimageError(f"{y} is not in the image (0, 1/{N})")
    k = -((-y.denominator) // y.numerator) - 1
    return y - translation(N, k)


@dataclass(frozen=True)
class ReversalFamilyMap:
    """``T_N`` as a callable map object."""

    N: int

    def __post_init__(self):
        _check_n(self.N)

    @property
    def domain(self) -> HalfOpenInterval:
        return HalfOpenInterval(Fraction(0), Fraction(1, self.N))

    def __call__(self, x) -> Fraction:
        return tn_eval(self.N, x)

    def inverse(self, y) -> Fraction:
        return tn_inverse(self.N, y)

    def piece(self, k: int) -> Piece:
        if k < self.N:
            raise ValueError(f"T_{self.N} has no piece {k}")
        inv_n = Fraction(1, self.N)
        return Piece(inv_n - Fraction(1, k), inv_n - Fraction(1, k + 1), translation(self.N, k))

    def pieces_over(self, lo, hi, cap: int | None = None) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Split ``[lo, hi)`` at the discontinuities of ``T_N``.

        Raises :class:`RefinementOverflow` when ``hi`` is the accumulation
        point ``1/N`` or when more than ``cap`` pieces would be produced.
        """
        inv_n = Fraction(1, self.N)
        if lo < 0 or hi > inv_n or not lo < hi:
            raise DomainError(f"[{lo}, {hi}) not inside [0, 1/{self.N})")
        if hi == inv_n:
            raise RefinementOverflow(f"[{lo}, {hi}) meets infinitely many pieces of T_{self.N}")
        k_first = piece_index(self.N, lo)
        gap = inv_n - hi
        # largest k with 1/N - 1/k < hi
        k_last = -((-gap.denominator) // gap.numerator) - 1
        if cap is not None and k_last - k_first + 1 > cap:
            raise RefinementOverflow(f"[{lo}, {hi}) meets {k_last - k_first + 1} pieces (cap {cap})")
        out = []
        for k in range(k_first, k_last + 1):
            p = self.piece(k)
            out.append((max(lo, p.lo), min(hi, p.hi), p.translation))
        return out

    def restricted_pieces(self, count: int, start: int | None = None) -> FiniteIET:
        """The first ``count`` pieces (from ``k = start``, default ``N``) as a FiniteIET."""
        start = self.N if start is None else start
        pieces = tuple(self.piece(k) for k in range(start, start + count))
        return FiniteIET(HalfOpenInterval(pieces[0].lo, pieces[-1].hi), pieces)

    def __str__(self) -> str:
        return f"T_{self.N}"


def compose_restricted(
    fmap,
    target: HalfOpenInterval,
    steps: int,
    piece_cap: int = DEFAULT_PIECE_CAP,
    require_invariant: bool = False,
) -> FiniteIET:
    """``fmap**steps`` on ``target`` as a finite IET, by partition refinement.

    The returned pieces are merged wherever neighbours carry the same total
    translation, so two results compare equal exactly when they define the
    same map with the same minimal partition.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    if not fmap.domain.contains_interval(target):
        raise DomainError(f"{target} not inside {fmap.domain}")
    current = [(target.lo, target.hi, Fraction(0))]
    for _ in range(steps):
        refined = []
        for lo, hi, t in current:
            for a, b, s in fmap.pieces_over(lo + t, hi + t, cap=piece_cap):
                refined.append((a - t, b - t, t + s))
            if len(refined) > piece_cap:
                raise RefinementOverflow(f"refinement exceeded {piece_cap} pieces")
        current = refined
    result = FiniteIET(target, tuple(Piece(a, b, t) for a, b, t in current)).normalized()
    if require_invariant:
        for p in result.pieces:
            if not target.contains_interval(p.image):
                raise NotInvariantError(f"{p.interval} is carried to {p.image}, outside {target}")
    return result
