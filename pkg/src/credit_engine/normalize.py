"""Field-normalized citation indicators.

NCS divides a paper's citations by the mean of its (field, year) reference
set. Hazen percentiles rank the set in decreasing citation order and give
rank i the value ``(i - 0.5) / n * 100``, so the most cited paper gets the
*lowest* percentile. Tied papers share the mean percentile of their block.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import rankdata

from .exceptions import DomainError, UndefinedIndicatorError


@dataclass(frozen=True)
class ReferenceSetStats:
    """Citation distribution of all papers sharing one field and year."""

    field: str
    year: int
    paper_count: int
    mean_citations: float
    sorted_citations: tuple[int, ...]
    _percentile_by_count: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.paper_count < 1 or len(self.sorted_citations) != self.paper_count:
            raise DomainError("paper_count must be >= 1 and match the citation list")
        cites = self.sorted_citations
        if any(a < b for a, b in zip(cites, cites[1:])):
            raise DomainError("sorted_citations must be nonincreasing")
        if cites[-1] < 0:
            raise DomainError("citation counts must be nonnegative")
        if not math.isclose(self.mean_citations, math.fsum(cites) / len(cites), rel_tol=1e-12, abs_tol=1e-12):
            raise DomainError("mean_citations disagrees with sorted_citations")

        pct = _hazen(np.asarray(cites, dtype=np.float64))
        object.__setattr__(self, "_percentile_by_count", dict(zip(cites, pct.tolist())))

    @classmethod
    def from_citations(cls, field: str, year: int, citations: Iterable[int]) -> "ReferenceSetStats":
        cites = tuple(sorted((int(c) for c in citations), reverse=True))
        if not cites:
            raise DomainError(f"empty reference set for ({field!r}, {year})")
        return cls(field, int(year), len(cites), math.fsum(cites) / len(cites), cites)

    def percentile_of(self, citations: int) -> float:
        """Hazen percentile of a paper in this set with the given citation count."""
        try:
            return self._percentile_by_count[citations]
        except KeyError:
            raise DomainError(
                f"no paper with {citations} citations in reference set ({self.field!r}, {self.year})"
            ) from None


@dataclass(frozen=True)
class IndicatorValue:
    record_id: str
    ncs: float | None
    percentile: float

    def __post_init__(self):
        if self.ncs is not None and self.ncs < 0:
            raise DomainError("ncs must be nonnegative")
        if not 0.0 <= self.percentile <= 100.0:
            raise DomainError("percentile must lie in [0, 100]")


def _hazen(desc_citations: np.ndarray) -> np.ndarray:
    # Percentile is linear in rank, so the mean over a tied block equals the
    # percentile of the block's average rank.
    ranks = rankdata(-desc_citations, method="average")
    return (ranks - 0.5) / len(desc_citations) * 100.0


def ncs(citations: int, ref: ReferenceSetStats) -> float:
    if citations < 0:
        raise DomainError("citations must be nonnegative")
    if ref.mean_citations == 0:
        raise UndefinedIndicatorError(
            f"NCS undefined: reference set ({ref.field!r}, {ref.year}) has no citations"
        )
    return citations / ref.mean_citations


def hazen_percentiles(ref: ReferenceSetStats) -> dict[int, float]:
    """Map rank position (1 = most cited) to its Hazen percentile."""
    pct = _hazen(np.asarray(ref.sorted_citations, dtype=np.float64))
    return {i + 1: p for i, p in enumerate(pct.tolist())}


def aggregate_ncs(values: Sequence[float]) -> float:
    if len(values) == 0:
        raise DomainError("cannot aggregate an empty NCS list")
    return math.fsum(values) / len(values)


def aggregate_percentiles(values: Sequence[float]) -> float:
    if len(values) == 0:
        raise DomainError("cannot aggregate an empty percentile list")
    return float(statistics.median(values))


def record_indicator(record, refsets: Mapping[tuple[str, int], ReferenceSetStats]) -> IndicatorValue:
    """Indicators of one record, averaged over all of its fields.

    Fields whose reference set is uncited contribute no NCS; if none has a
    defined NCS the record's ``ncs`` is ``None``.
    """
    per_ncs, per_pct = [], []
    for f in record.fields:
        ref = refsets[(f, record.year)]
        per_pct.append(ref.percentile_of(record.citations))
        if ref.mean_citations > 0:
            per_ncs.append(ncs(record.citations, ref))
    return IndicatorValue(
        record.id,
        math.fsum(per_ncs) / len(per_ncs) if per_ncs else None,
        math.fsum(per_pct) / len(per_pct),
    )


def compute_indicators(records, refsets) -> dict[str, IndicatorValue]:
    return {r.id: record_indicator(r, refsets) for r in records}
