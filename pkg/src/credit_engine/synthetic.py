"""Seeded synthetic corpora for exercising the ingest-to-compare pipeline.

``theory``
    citations ~ Poisson(rate(field, year) * 2n/(n+1)), so bin-level NCS
    relative to single authors tracks the closed-form expected value.
``flat``
    every paper in a (field, year) has the same citation count, so every
    NCS is exactly 1.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .store import COLUMNS, PublicationRecord


def make_corpus(
    n_records: int = 100_000,
    n_fields: int = 5,
    n_years: int = 15,
    seed: int = 0,
    profile: str = "theory",
    max_authors: int = 12,
    first_year: int = 2000,
    multi_field_rate: float = 0.05,
    review_rate: float = 0.03,
) -> list[PublicationRecord]:
    if profile not in ("theory", "flat"):
        raise ValueError(f"profile must be 'theory' or 'flat', got {profile!r}")
    rng = np.random.default_rng(seed)
    fields = [f"F{i:02d}" for i in range(n_fields)]
    rate = rng.uniform(5.0, 40.0, size=(n_fields, n_years))
    flat_count = rng.integers(1, 50, size=(n_fields, n_years))

    f_idx = rng.integers(0, n_fields, size=n_records)
    y_idx = rng.integers(0, n_years, size=n_records)
    n_auth = rng.integers(1, max_authors + 1, size=n_records)
    if profile == "theory":
        lam = rate[f_idx, y_idx] * 2.0 * n_auth / (n_auth + 1.0)
        cites = rng.poisson(lam)
        second = rng.integers(1, n_fields, size=n_records)
        multi = rng.random(n_records) < multi_field_rate
    else:
        cites = flat_count[f_idx, y_idx]
        second = np.zeros(n_records, dtype=np.int64)
        multi = np.zeros(n_records, dtype=bool)
    review = rng.random(n_records) < review_rate

    records = []
    for k in range(n_records):
        fi = int(f_idx[k])
        code = fields[fi]
        if multi[k]:
            code = f"{code};{fields[(fi + int(second[k])) % n_fields]}"
        records.append(
            PublicationRecord(
                id=f"P{k:07d}",
                year=first_year + int(y_idx[k]),
                field=code,
                author_count=int(n_auth[k]),
                citations=int(cites[k]),
                doc_type="review" if review[k] else "article",
            )
        )
    return records


def _row(r: PublicationRecord) -> dict:
    return {
        "id": r.id,
        "year": r.year,
        "field": r.field,
        "n_authors": r.author_count,
        "citations": r.citations,
        "doc_type": r.doc_type,
    }


def write_csv(records: Iterable[PublicationRecord], path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        w.writeheader()
        for r in records:
            w.writerow(_row(r))


def write_jsonl(records: Iterable[PublicationRecord], path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(_row(r)) + "\n")
