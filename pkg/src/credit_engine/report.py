"""Theoretical-vs-empirical comparison tables."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .credit import DEFAULT_MODEL, ValuationModel, expected_value, hsu_citation_model
from .exceptions import BaselineMissingError, DataError, DomainError
from .store import AuthorCountBin, load_stats

TSV_HEADER = ("n", "theoretical", "ncs_rel", "pct_rel", "papers", "hsu")
INDICATORS = ("ncs", "percentile")


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    theoretical: float
    empirical_ncs_relative: float | None
    empirical_percentile_relative: float | None
    paper_count: int
    hsu_model: float


def _bin_aggregate(b: AuthorCountBin, indicator: str) -> float | None:
    if indicator == "ncs":
        return b.ncs_mean
    # Stored percentiles are low for highly cited papers; flip so larger = more cited.
    return 100.0 - b.percentile_median


def relative_empirical(
    bins: Sequence[AuthorCountBin], indicator: str, model: ValuationModel = DEFAULT_MODEL
) -> dict[int, float]:
    """Bin aggregates relative to the single-author bin, in units of ``v1``.

    Bins whose aggregate is undefined are left out of the mapping.
    """
    if indicator not in INDICATORS:
        raise DomainError(f"indicator must be one of {INDICATORS}, got {indicator!r}")
    by_n = {b.n: b for b in bins}
    base_bin = by_n.get(1)
    base = _bin_aggregate(base_bin, indicator) if base_bin is not None else None
    if not base:
        raise BaselineMissingError(
            f"single-author bin is {'missing' if base_bin is None else 'zero or undefined'} for {indicator}"
        )
    out = {}
    for n in sorted(by_n):
        agg = _bin_aggregate(by_n[n], indicator)
        if agg is not None:
            out[n] = agg / base * model.base_value
    return out


def comparison_rows(bins: Sequence[AuthorCountBin], n_range: Iterable[int]) -> list[ComparisonRow]:
    ncs_rel = relative_empirical(bins, "ncs")
    pct_rel = relative_empirical(bins, "percentile")
    counts = {b.n: b.paper_count for b in bins}
    return [
        ComparisonRow(
            n=n,
            theoretical=expected_value(n),
            empirical_ncs_relative=ncs_rel.get(n),
            empirical_percentile_relative=pct_rel.get(n),
            paper_count=counts.get(n, 0),
            hsu_model=hsu_citation_model(n),
        )
        for n in n_range
    ]


def _cell(x, fmt):
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return format(x, fmt)


def format_table(rows: Sequence[ComparisonRow], float_format: str = ".17g") -> str:
    lines = ["\t".join(TSV_HEADER)]
    for r in rows:
        lines.append(
            "\t".join(
                _cell(x, float_format)
                for x in (
                    r.n,
                    r.theoretical,
                    r.empirical_ncs_relative,
                    r.empirical_percentile_relative,
                    r.paper_count,
                    r.hsu_model,
                )
            )
        )
    return "\n".join(lines) + "\n"


def compare(stats_path, n_range: Iterable[int], output_path) -> list[ComparisonRow]:
    """Write the comparison table for ``n_range`` as TSV and return its rows."""
    bins, _ = load_stats(stats_path)
    rows = comparison_rows(bins, n_range)
    out = Path(output_path)
    try:
        out.write_text(format_table(rows), encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {out}: {exc.strerror or exc}") from exc
    return rows


def read_table(path) -> list[ComparisonRow]:
    """Parse a TSV written by :func:`compare`."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or tuple(lines[0].split("\t")) != TSV_HEADER:
        raise DataError(f"{path}: not a comparison table")
    rows = []
    for line in lines[1:]:
        n, theo, ncs, pct, papers, hsu = line.split("\t")
        rows.append(
            ComparisonRow(
                int(n),
                float(theo),
                float(ncs) if ncs else None,
                float(pct) if pct else None,
                int(papers),
                float(hsu),
            )
        )
    return rows
