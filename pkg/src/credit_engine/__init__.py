"""Expected value and author credit of multi-author publications."""

from .credit import (
    CountingMethod,
    CreditVector,
    ValuationModel,
    baseline_credits,
    check_bounds,
    credits_for,
    equal_credits,
    expected_value,
    hsu_citation_model,
    ordered_credits,
    recursion_step,
)
from .effort import (
    EffortProfile,
    SimulationResult,
    acceptance_probability,
    chain_estimate,
    estimate_vn,
    sample_feasible_profile,
)
from .normalize import (
    IndicatorValue,
    ReferenceSetStats,
    aggregate_ncs,
    aggregate_percentiles,
    hazen_percentiles,
    ncs,
)
from .store import (
    AuthorCountBin,
    PublicationRecord,
    build_reference_sets,
    filter_corpus,
    group_by_author_count,
    ingest,
    load_stats,
    persist_stats,
)
from .report import ComparisonRow, compare, relative_empirical

__version__ = "0.1.0"
