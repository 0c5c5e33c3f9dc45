"""Scalar conventions: exact non-negative rationals plus one infinity.

Finite quantities are ``fractions.Fraction``; ``math.inf`` is the single
infinite value, used for distances in disconnected networks. Fractions and
``inf`` mix transparently in sums and comparisons, which gives exactly the
absorption and domination behaviour the cost model needs. The optional
inexact mode (floats plus a comparison tolerance) lives in the cost engine
and is labeled non-authoritative wherever it surfaces.

Square roots never appear as values: every threshold of the form
``k * sqrt(alpha) * y`` is decided by comparing squares, and every floor of
the form ``floor(m / sqrt(alpha))`` by an integer search, so exact mode
stays exact.
"""

from fractions import Fraction
from math import inf, isinf, isqrt

INF = inf


def is_inf(x) -> bool:
    return isinstance(x, float) and isinf(x)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or integer shorthand into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {text!r}") from exc
    raise ValueError(f"not a rational: {text!r}")


def format_rational(x) -> str:
    """Inverse of parse_rational; infinities serialize as '[-]inf'."""
    if is_inf(x):
        return "inf" if x > 0 else "-inf"
    f = Fraction(x)
    return str(f)


def sqrt_exact(x: Fraction):
    """Exact square root of a non-negative rational, or None."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def floor_div_sqrt(m: int, alpha: Fraction) -> int:
    """floor(m / sqrt(alpha)) for m >= 0, alpha > 0, without square roots.

    Largest t >= 0 with t*t*alpha <= m*m.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    p, q = alpha.numerator, alpha.denominator
    # t^2 <= m^2 q / p, and t^2 is an integer, so flooring the bound is exact.
    return isqrt((m * m * q) // p)


def floor_half_sqrt(alpha: Fraction) -> int:
    """floor(sqrt(alpha) / 2) for alpha >= 0, without square roots."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    p, q = alpha.numerator, alpha.denominator
    # largest x with 4 x^2 <= alpha, i.e. x^2 <= p / (4q)
    return isqrt(p // (4 * q))


def cmp_k_sqrt_alpha(x, k: int, alpha: Fraction, y):
    """Sign of ``x - k*sqrt(alpha)*y`` for x, y >= 0 (x may be inf).

    Returns -1, 0 or 1. Both sides are non-negative, so comparing squares
    is equivalent and keeps the arithmetic rational.
    """
    if is_inf(x):
        return 1
    lhs = Fraction(x) ** 2
    rhs = k * k * alpha * Fraction(y) ** 2
    if lhs < rhs:
        return -1
    if lhs > rhs:
        return 1
    return 0


def cmp_sqrt_alpha_times(w, alpha: Fraction, c: int, y):
    """Sign of ``sqrt(alpha)*w - c*y`` for w, y >= 0."""
    lhs = alpha * Fraction(w) ** 2
    rhs = c * c * Fraction(y) ** 2
    if lhs < rhs:
        return -1
    if lhs > rhs:
        return 1
    return 0
