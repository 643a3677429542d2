"""Exact F-factorials, F-nomial coefficients and equal-block partition counts.

Every value is a Python ``int`` or a reduced :class:`fractions.Fraction`, so
nothing is ever truncated and integrality is just ``denominator == 1``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, prod

from .exceptions import InternalInconsistency, InvalidParameter
from .sequences import FSequence


def _check_nk(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise InvalidParameter(f"indices must be nonnegative, got n={n}, k={k}")
    if k > n:
        raise InvalidParameter(f"k={k} exceeds n={n}")


def f_factorial(F: FSequence, n: int) -> int:
    """``n_F! = F_n F_{n-1} ... F_1`` with ``0_F! = 1``."""
    if n < 0:
        raise InvalidParameter(f"n must be nonnegative, got {n}")
    F.require(n)
    return prod(F.term(i) for i in range(1, n + 1))


def f_falling(F: FSequence, n: int, k: int) -> int:
    """``n_F^(k) = F_n F_{n-1} ... F_{n-k+1}``; ``k > n`` is an error, not 0."""
    _check_nk(n, k)
    F.require(n)
    return prod(F.term(i) for i in range(n - k + 1, n + 1))


def fnomial(F: FSequence, n: int, k: int) -> Fraction:
    """The F-nomial coefficient ``n_F! / (k_F! (n-k)_F!)`` as a reduced fraction."""
    _check_nk(n, k)
    # falling over factorial keeps the intermediates small
    return Fraction(f_falling(F, n, n - k), f_factorial(F, n - k))


def fnomial_triangle(F: FSequence, rows: int) -> list[list[Fraction]]:
    """Rows ``n = 0..rows`` of the F-nomial triangle."""
    if rows < 0:
        raise InvalidParameter("rows must be nonnegative")
    F.require(rows)
    facts = [1]
    for i in range(1, rows + 1):
        facts.append(facts[-1] * F.term(i))
    return [
        [Fraction(facts[n], facts[k] * facts[n - k]) for k in range(n + 1)]
        for n in range(rows + 1)
    ]


def equal_block_count(eta: int, kappa: int, lam: int) -> int:
    """Partitions of an ``eta``-set into ``kappa`` blocks all of size ``lam``.

    Zero unless ``eta == kappa * lam``; otherwise ``eta! / (kappa! (lam!)^kappa)``.
    """
    if eta < 0 or kappa < 0 or lam < 1:
        raise InvalidParameter(f"bad arguments eta={eta}, kappa={kappa}, lambda={lam}")
    if eta != kappa * lam:
        return 0
    return factorial(eta) // (factorial(kappa) * factorial(lam) ** kappa)


def equal_block_recurrence_step(eta: int, kappa: int, lam: int) -> int:
    """One step of the rising-factorial recurrence: count for ``(eta+lam, kappa+1)``.

    Built from ``equal_block_count(eta, kappa, lam)``; kept separate from the
    closed form so the two can be cross-checked.
    """
    if eta < 0 or kappa < 0 or lam < 1:
        raise InvalidParameter(f"bad arguments eta={eta}, kappa={kappa}, lambda={lam}")
    if eta + lam != (kappa + 1) * lam:
        return 0
    rising = prod(range(eta + 1, eta + lam + 1))
    value = Fraction(rising, factorial(lam) * (kappa + 1)) * equal_block_count(eta, kappa, lam)
    if value.denominator != 1:
        raise InternalInconsistency(f"recurrence step not integral: {value}")
    return value.numerator


def phi_lambda(lam: int, kappa: int) -> Fraction:
    """``(kappa*lam)^(lam) / (lam! * kappa)``, a falling factorial ratio."""
    if lam < 1 or kappa < 1:
        raise InvalidParameter(f"lambda and kappa must be >= 1, got {lam}, {kappa}")
    top = kappa * lam
    falling = prod(range(top - lam + 1, top + 1))
    return Fraction(falling, factorial(lam) * kappa)


def phi_lambda_factorial(lam: int, kappa: int) -> int:
    """``Phi_lam(1) * ... * Phi_lam(kappa)``; equals ``equal_block_count(kappa*lam, kappa, lam)``."""
    if lam < 1 or kappa < 0:
        raise InvalidParameter(f"bad arguments lambda={lam}, kappa={kappa}")
    result = 1
    for k in range(1, kappa + 1):
        factor = phi_lambda(lam, k)
        if factor.denominator != 1:
            raise InternalInconsistency(f"Phi_{lam}({k}) = {factor} is not an integer")
        result *= factor.numerator
    return result


def format_fraction(value: Fraction | int) -> str:
    """Decimal integer, or ``p/q`` when the value is not integral."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
