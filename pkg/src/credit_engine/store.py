"""Publication ingest, corpus filtering, author-count bins and stats files.

Input files carry six columns: ``id, year, field, n_authors, citations,
doc_type``. ``field`` may list several codes separated by ``;``; such a
record joins every listed field's reference set.

Stats files are UTF-8 text::

    credit-engine-stats v1
    [refset]
    field<TAB>year<TAB>paper_count<TAB>mean_citations<TAB>sorted_citations
    ...
    [bin]
    n<TAB>paper_count<TAB>ncs_mean<TAB>percentile_median<TAB>top<TAB>record_ids
    ...

Floats use 17 significant digits; an absent ``ncs_mean`` is an empty cell.
``sorted_citations`` and ``record_ids`` are comma-separated.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .exceptions import DataError, DomainError, StatsVersionError
from .normalize import (
    IndicatorValue,
    ReferenceSetStats,
    aggregate_ncs,
    aggregate_percentiles,
    compute_indicators,
)

log = logging.getLogger(__name__)

COLUMNS = ("id", "year", "field", "n_authors", "citations", "doc_type")
STATS_VERSION = "credit-engine-stats v1"
YEAR_RANGE = (1900, 2100)
DEFAULT_YEAR_MIN = 2000
DEFAULT_YEAR_MAX = 2014
DEFAULT_DOC_TYPE = "article"
DEFAULT_TOP_BIN = 30


@dataclass(frozen=True)
class PublicationRecord:
    id: str
    year: int
    field: str
    author_count: int
    citations: int
    doc_type: str

    def __post_init__(self):
        if self.author_count < 1:
            raise DomainError("author_count must be ≥ 1")
        if self.citations < 0:
            raise DomainError("citations must be ≥ 0")
        if not YEAR_RANGE[0] <= self.year <= YEAR_RANGE[1]:
            raise DomainError(f"year must lie in [{YEAR_RANGE[0]}, {YEAR_RANGE[1]}]")
        if not self.fields:
            raise DomainError("field must name at least one field code")

    @property
    def fields(self) -> tuple[str, ...]:
        seen = []
        for f in self.field.split(";"):
            f = f.strip()
            if f and f not in seen:
                seen.append(f)
        return tuple(seen)


@dataclass(frozen=True)
class Rejection:
    line: int
    reason: str


@dataclass
class IngestResult:
    records: list[PublicationRecord]
    rejections: list[Rejection] = dc_field(default_factory=list)


def _as_int(value, name):
    if value is None or (isinstance(value, str) and not value.strip()):
        raise DomainError(f"{name} missing")
    if isinstance(value, bool):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if value.is_integer():
            return int(value)
        raise DomainError(f"{name} must be an integer, got {value!r}")
    try:
        return int(str(value).strip())
    except ValueError:
        raise DomainError(f"{name} must be an integer, got {value!r}") from None


def _as_str(value, name):
    if value is None or not str(value).strip():
        raise DomainError(f"{name} missing")
    return str(value).strip()


def parse_row(row: Mapping) -> PublicationRecord:
    """Validate one raw row; raises DomainError with a readable reason."""
    return PublicationRecord(
        id=_as_str(row.get("id"), "id"),
        year=_as_int(row.get("year"), "year"),
        field=_as_str(row.get("field"), "field"),
        author_count=_as_int(row.get("n_authors"), "n_authors"),
        citations=_as_int(row.get("citations"), "citations"),
        doc_type=_as_str(row.get("doc_type"), "doc_type"),
    )


def _csv_rows(fh):
    reader = csv.DictReader(fh)
    missing = [c for c in COLUMNS if c not in (reader.fieldnames or ())]
    if missing:
        raise DataError(f"CSV header lacks columns: {', '.join(missing)}")
    for row in reader:
        if None in row:
            yield reader.line_num, None, "too many columns"
        else:
            yield reader.line_num, row, None


def _jsonl_rows(fh):
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield lineno, None, f"invalid JSON: {exc.msg}"
            continue
        if not isinstance(obj, dict):
            yield lineno, None, "line is not a JSON object"
            continue
        yield lineno, obj, None


def ingest(path, format: str = "csv") -> IngestResult:
    """Read records from a CSV or JSONL file.

    Malformed rows are reported in ``rejections`` with their line numbers;
    unreadable files or unknown formats raise :class:`DataError`.
    """
    fmt = str(format).lower()
    if fmt not in ("csv", "jsonl"):
        raise DataError(f"unknown input format {format!r}; expected csv or jsonl")
    path = Path(path)
    result = IngestResult([])
    seen: set[str] = set()
    try:
        with path.open(encoding="utf-8", newline="" if fmt == "csv" else None) as fh:
            rows = _csv_rows(fh) if fmt == "csv" else _jsonl_rows(fh)
            for lineno, row, problem in rows:
                if problem is None:
                    try:
                        rec = parse_row(row)
                    except DomainError as exc:
                        problem = str(exc)
                    else:
                        if rec.id in seen:
                            problem = f"duplicate id {rec.id!r}"
                        else:
                            seen.add(rec.id)
                            result.records.append(rec)
                            continue
                result.rejections.append(Rejection(lineno, problem))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise DataError(f"{path} is not valid UTF-8: {exc}") from exc
    if result.rejections:
        log.warning("%s: rejected %d row(s)", path, len(result.rejections))
    return result


def filter_corpus(
    records: Iterable[PublicationRecord],
    year_min: int = DEFAULT_YEAR_MIN,
    year_max: int = DEFAULT_YEAR_MAX,
    doc_type: str = DEFAULT_DOC_TYPE,
) -> list[PublicationRecord]:
    if year_min > year_max:
        raise DomainError(f"year_min {year_min} exceeds year_max {year_max}")
    want = doc_type.casefold()
    return [r for r in records if year_min <= r.year <= year_max and r.doc_type.casefold() == want]


def build_reference_sets(records: Iterable[PublicationRecord]) -> dict[tuple[str, int], ReferenceSetStats]:
    groups: dict[tuple[str, int], list[int]] = defaultdict(list)
    for r in records:
        for f in r.fields:
            groups[(f, r.year)].append(r.citations)
    return {key: ReferenceSetStats.from_citations(key[0], key[1], cites) for key, cites in sorted(groups.items())}


@dataclass(frozen=True)
class AuthorCountBin:
    """Papers with ``n`` authors, or with ``n`` or more when ``top`` is set."""

    n: int
    record_ids: tuple[str, ...]
    ncs_mean: float | None
    percentile_median: float
    paper_count: int
    top: bool = False

    def __post_init__(self):
        if self.paper_count != len(self.record_ids):
            raise DomainError("paper_count must equal the number of record ids")


def group_by_author_count(
    records: Sequence[PublicationRecord],
    indicators: Mapping[str, IndicatorValue],
    n_max_bin: int = DEFAULT_TOP_BIN,
) -> list[AuthorCountBin]:
    if n_max_bin < 2:
        raise DomainError(f"n_max_bin must be >= 2, got {n_max_bin}")
    members: dict[int, list[str]] = defaultdict(list)
    for r in records:
        if r.id not in indicators:
            raise DomainError(f"record {r.id!r} has no indicator value")
        members[min(r.author_count, n_max_bin)].append(r.id)

    bins = []
    for n in sorted(members):
        # Sorted ids keep bins independent of input order.
        ids = tuple(sorted(members[n]))
        ind = [indicators[i] for i in ids]
        ncs_vals = [v.ncs for v in ind if v.ncs is not None]
        bins.append(
            AuthorCountBin(
                n=n,
                record_ids=ids,
                ncs_mean=aggregate_ncs(ncs_vals) if ncs_vals else None,
                percentile_median=aggregate_percentiles([v.percentile for v in ind]),
                paper_count=len(ids),
                top=n == n_max_bin,
            )
        )
    return bins


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _check_cell(text: str, what: str) -> str:
    if any(ch in text for ch in "\t\n\r,"):
        raise DataError(f"{what} {text!r} contains a tab, newline or comma")
    return text


def persist_stats(bins: Sequence[AuthorCountBin], reference_sets: Mapping, path) -> None:
    path = Path(path)
    lines = [STATS_VERSION, "[refset]"]
    for ref in reference_sets.values():
        lines.append(
            "\t".join(
                (
                    _check_cell(ref.field, "field code"),
                    str(ref.year),
                    str(ref.paper_count),
                    _fmt(ref.mean_citations),
                    ",".join(map(str, ref.sorted_citations)),
                )
            )
        )
    lines.append("[bin]")
    for b in bins:
        lines.append(
            "\t".join(
                (
                    str(b.n),
                    str(b.paper_count),
                    "" if b.ncs_mean is None else _fmt(b.ncs_mean),
                    _fmt(b.percentile_median),
                    "1" if b.top else "0",
                    ",".join(_check_cell(i, "record id") for i in b.record_ids),
                )
            )
        )
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write stats file {path}: {exc.strerror or exc}") from exc


def load_stats(path) -> tuple[list[AuthorCountBin], dict[tuple[str, int], ReferenceSetStats]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read stats file {path}: {exc.strerror or exc}") from exc
    lines = text.splitlines()
    if not lines or lines[0].strip() != STATS_VERSION:
        found = lines[0].strip() if lines else "<empty file>"
        raise StatsVersionError(f"{path}: expected version line {STATS_VERSION!r}, found {found!r}")

    bins: list[AuthorCountBin] = []
    refsets: dict[tuple[str, int], ReferenceSetStats] = {}
    section = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        if line in ("[refset]", "[bin]"):
            section = line
            continue
        cells = line.split("\t")
        try:
            if section == "[refset]":
                fld, year, count, mean, cites = cells
                cites = tuple(int(c) for c in cites.split(",")) if cites else ()
                ref = ReferenceSetStats(fld, int(year), int(count), float(mean), cites)
                refsets[(ref.field, ref.year)] = ref
            elif section == "[bin]":
                n, count, ncs_mean, pct, top, ids = cells
                bins.append(
                    AuthorCountBin(
                        n=int(n),
                        record_ids=tuple(ids.split(",")) if ids else (),
                        ncs_mean=float(ncs_mean) if ncs_mean else None,
                        percentile_median=float(pct),
                        paper_count=int(count),
                        top=top == "1",
                    )
                )
            else:
                raise DataError("data line before any section tag")
        except (ValueError, DomainError) as exc:
            raise DataError(f"{path}:{lineno}: malformed stats line ({exc})") from exc
    return bins, refsets


@dataclass
class CorpusStats:
    records: list[PublicationRecord]
    reference_sets: dict[tuple[str, int], ReferenceSetStats]
    indicators: dict[str, IndicatorValue]
    bins: list[AuthorCountBin]


def build_stats(
    records: Iterable[PublicationRecord],
    year_min: int = DEFAULT_YEAR_MIN,
    year_max: int = DEFAULT_YEAR_MAX,
    doc_type: str = DEFAULT_DOC_TYPE,
    top_bin: int = DEFAULT_TOP_BIN,
) -> CorpusStats:
    """Filter, normalise and bin a corpus in one go."""
    kept = filter_corpus(records, year_min, year_max, doc_type)
    refsets = build_reference_sets(kept)
    indicators = compute_indicators(kept, refsets)
    bins = group_by_author_count(kept, indicators, top_bin)
    return CorpusStats(kept, refsets, indicators, bins)
