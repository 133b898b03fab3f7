"""Closed-form publication values and author-credit allocation.

The expected value of an n-author publication, measured in units of the
single-author value ``v1``, is ``2n / (n + 1)``. Equal credits divide that
value by ``n``; ordered credits split it with harmonic-tail shares. The
classic counting methods (full, fractional, arithmetic, geometric and
harmonic) are provided as baselines normalised to a single-author unit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import (
    AuthorCountRangeError,
    DomainError,
    InvalidAuthorCount,
    UnknownMethodError,
)

MAX_AUTHORS = 10**6


class CountingMethod(str, enum.Enum):
    PAPER_EQUAL = "paper_equal"
    PAPER_ORDERED = "paper_ordered"
    FULL = "full"
    FRACTIONAL = "fractional"
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"
    HARMONIC = "harmonic"

    @classmethod
    def parse(cls, value: "str | CountingMethod") -> "CountingMethod":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            known = ", ".join(m.value for m in cls)
            raise UnknownMethodError(
                f"unknown counting method {value!r}; expected one of: {known}"
            ) from None

    @property
    def ordered(self) -> bool:
        return self in _ORDERED


_ORDERED = frozenset(
    {
        CountingMethod.PAPER_ORDERED,
        CountingMethod.ARITHMETIC,
        CountingMethod.GEOMETRIC,
        CountingMethod.HARMONIC,
    }
)


@dataclass(frozen=True)
class ValuationModel:
    """Holds the single-author base value every other value is measured in."""

    base_value: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.base_value) and self.base_value > 0):
            raise DomainError(f"base_value must be a positive finite number, got {self.base_value!r}")


DEFAULT_MODEL = ValuationModel()


@dataclass(frozen=True)
class CreditVector:
    """Per-author credits of one publication under one counting method.

    ``credits[i]`` belongs to the author in position ``i + 1``.
    """

    method: CountingMethod
    n: int
    credits: tuple[float, ...]
    total: float

    def __post_init__(self):
        if len(self.credits) != self.n:
            raise DomainError(f"expected {self.n} credits, got {len(self.credits)}")
        if any(c < 0 for c in self.credits):
            raise DomainError("credits must be nonnegative")
        if not math.isclose(math.fsum(self.credits), self.total, rel_tol=1e-9):
            raise DomainError("credits do not sum to total")

    @property
    def shares(self) -> tuple[float, ...]:
        return tuple(c / self.total for c in self.credits)

    @property
    def percentages(self) -> tuple[float, ...]:
        return tuple(100.0 * s for s in self.shares)

    def scale_to(self, model: ValuationModel = DEFAULT_MODEL) -> "CreditVector":
        """Redistribute ``expected_value(n, model)`` using this vector's shares."""
        value = expected_value(self.n, model)
        return CreditVector(self.method, self.n, tuple(s * value for s in self.shares), value)


def _check_n(n, minimum: int = 1) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidAuthorCount(f"author count must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise InvalidAuthorCount(f"author count must be >= {minimum}, got {n}")
    if n > MAX_AUTHORS:
        raise AuthorCountRangeError(f"author count {n} exceeds the supported maximum {MAX_AUTHORS}")
    return n


def expected_value(n: int, model: ValuationModel = DEFAULT_MODEL) -> float:
    """Expected value ``2n/(n+1) * v1`` of an n-author publication."""
    n = _check_n(n)
    return 2.0 * n / (n + 1) * model.base_value


def expected_values(n_max: int, model: ValuationModel = DEFAULT_MODEL) -> np.ndarray:
    """Vector of expected values for ``n = 1..n_max``."""
    n_max = _check_n(n_max)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    return 2.0 * n / (n + 1.0) * model.base_value


def equal_credits(n: int, model: ValuationModel = DEFAULT_MODEL) -> float:
    """Credit of each of n equally important authors, ``2/(n+1) * v1``."""
    n = _check_n(n)
    return 2.0 / (n + 1) * model.base_value


def recursion_step(v_prev: float, n: int) -> float:
    """Advance the expected value from n-1 to n authors."""
    n = _check_n(n, minimum=2)
    if not v_prev > 0:
        raise DomainError(f"v_prev must be positive, got {v_prev!r}")
    return n * n / ((n - 1) * (n + 1)) * v_prev


def ordered_shares(n: int) -> np.ndarray:
    """Shares ``s_i = (1/n) * sum_{j=i..n} 1/j``; they sum to one."""
    n = _check_n(n)
    tail = np.cumsum(1.0 / np.arange(n, 0, -1, dtype=np.float64))[::-1]
    return tail / n


def ordered_credits(n: int, model: ValuationModel = DEFAULT_MODEL) -> CreditVector:
    value = expected_value(n, model)
    credits = tuple(float(s) * value for s in ordered_shares(n))
    return CreditVector(CountingMethod.PAPER_ORDERED, n, credits, math.fsum(credits))


def paper_equal_credits(n: int, model: ValuationModel = DEFAULT_MODEL) -> CreditVector:
    c = equal_credits(n, model)
    return CreditVector(CountingMethod.PAPER_EQUAL, n, (c,) * n, c * n)


def _baseline_weights(method: CountingMethod, n: int) -> np.ndarray:
    i = np.arange(1, n + 1, dtype=np.float64)
    if method is CountingMethod.FULL:
        return np.ones(n)
    if method is CountingMethod.FRACTIONAL:
        return np.full(n, 1.0 / n)
    if method is CountingMethod.HARMONIC:
        w = 1.0 / i
    elif method is CountingMethod.ARITHMETIC:
        w = n - i + 1.0
    else:
        # 2**(n-i) / (2**n - 1) overflows past n ~ 1000; use the ratio form.
        w = np.exp2(-(i - 1.0))
    return w / w.sum()


def baseline_credits(method: "str | CountingMethod", n: int) -> CreditVector:
    """Credits under one of the literature baselines.

    Full counting gives every author 1 (total n); the others sum to 1.
    """
    method = CountingMethod.parse(method)
    if method in (CountingMethod.PAPER_EQUAL, CountingMethod.PAPER_ORDERED):
        raise UnknownMethodError(
            f"{method.value} is not a baseline; use "
            + ("paper_equal_credits()" if method is CountingMethod.PAPER_EQUAL else "ordered_credits()")
        )
    n = _check_n(n)
    credits = tuple(float(x) for x in _baseline_weights(method, n))
    return CreditVector(method, n, credits, math.fsum(credits))


def credits_for(method: "str | CountingMethod", n: int, model: ValuationModel = DEFAULT_MODEL) -> CreditVector:
    """Dispatch to the right allocation for any counting method."""
    method = CountingMethod.parse(method)
    if method is CountingMethod.PAPER_EQUAL:
        return paper_equal_credits(n, model)
    if method is CountingMethod.PAPER_ORDERED:
        return ordered_credits(n, model)
    return baseline_credits(method, n)


def check_bounds(values: Sequence[float], rtol: float = 1e-12) -> tuple[bool, int | None]:
    """Check ``v[n-1] <= v[n] <= n/(n-1) * v[n-1]`` for a sequence indexed from n=1.

    Returns ``(True, None)`` or ``(False, n)`` with the smallest violating n.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise DomainError("check_bounds needs a nonempty 1-D sequence")
    if v.size == 1:
        return True, None
    n = np.arange(2, v.size + 1, dtype=np.float64)
    prev, cur = v[:-1], v[1:]
    slack = rtol * np.abs(prev)
    bad = (cur < prev - slack) | (cur > n / (n - 1.0) * prev + slack)
    if not bad.any():
        return True, None
    return False, int(np.argmax(bad)) + 2


def hsu_citation_model(n: int) -> float:
    """Empirical citation curve ``(n/5)**(1/3)`` used as a comparison baseline."""
    n = _check_n(n)
    return (n / 5.0) ** (1.0 / 3.0)
