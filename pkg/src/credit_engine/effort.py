"""Monte Carlo estimate of the n-author expected value.

Author efforts are iid uniform on ``[0, c]`` with ``c = v_prev / (n - 1)``,
conditioned on the aggregate effort reaching ``v_prev``. The conditional
mean of the aggregate is the n-author expected value, which the closed
form in :mod:`credit_engine.credit` predicts as ``n^2/((n-1)(n+1)) v_prev``.

Two samplers draw from the conditioned region:

``rejection``
    draw the cube and keep feasible rows; acceptance rate 1/n!, so only
    allowed for n <= 8.
``simplex_complement``
    map uniform simplex spacings u to ``e = c (1 - u)``; never rejects.

Random numbers come in fixed-size chunks, each from its own PCG64 stream
keyed by ``(seed, n, sampler, chunk)``. Chunks are reduced in index order,
so results do not depend on the number of worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .credit import DEFAULT_MODEL, ValuationModel, expected_value, recursion_step
from .exceptions import (
    AcceptanceUnderflowError,
    DomainError,
    InsufficientSamplesError,
    InvalidAuthorCount,
    SamplerLimitError,
    UnknownMethodError,
)

REJECTION = "rejection"
SIMPLEX = "simplex_complement"
_SAMPLER_ALIASES = {"rejection": REJECTION, "simplex": SIMPLEX, "simplex_complement": SIMPLEX}
_SAMPLER_CODE = {REJECTION: 0, SIMPLEX: 1}

MIN_SAMPLES = 1000
REJECTION_MAX_N = 8
CHUNK_SIZE = 1 << 16
MAX_SEED = 2**64 - 1


def parse_sampler(name: str) -> str:
    try:
        return _SAMPLER_ALIASES[str(name).strip().lower()]
    except KeyError:
        raise UnknownMethodError(f"unknown sampler {name!r}; expected 'rejection' or 'simplex'") from None


def _check_sim_args(n, v_prev):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidAuthorCount(f"simulation needs an integer n >= 2, got {n!r}")
    if not (math.isfinite(v_prev) and v_prev > 0):
        raise DomainError(f"v_prev must be positive and finite, got {v_prev!r}")
    return int(n), float(v_prev)


@dataclass(frozen=True)
class EffortProfile:
    """One vector of author efforts with its feasibility flag."""

    n: int
    efforts: tuple[float, ...]
    upper_bound: float
    threshold: float
    feasible: bool

    def __post_init__(self):
        if len(self.efforts) != self.n:
            raise DomainError("efforts length differs from n")
        if any(e < 0 or e > self.upper_bound for e in self.efforts):
            raise DomainError("effort outside [0, upper_bound]")
        if self.feasible != (math.fsum(self.efforts) >= self.threshold):
            raise DomainError("feasible flag inconsistent with threshold")

    @classmethod
    def from_efforts(cls, efforts: Sequence[float], v_prev: float) -> "EffortProfile":
        n, v_prev = _check_sim_args(len(efforts), v_prev)
        efforts = tuple(float(e) for e in efforts)
        return cls(n, efforts, v_prev / (n - 1), v_prev, math.fsum(efforts) >= v_prev)

    @property
    def aggregate(self) -> float:
        return math.fsum(self.efforts)


@dataclass(frozen=True)
class SimulationResult:
    n: int
    v_prev: float
    samples_accepted: int
    samples_drawn: int
    estimate: float
    standard_error: float
    acceptance_rate: float
    seed: int
    sampler: str
    mean_efforts: tuple[float, ...]

    @property
    def theoretical(self) -> float:
        return recursion_step(self.v_prev, self.n)

    @property
    def z_score(self) -> float:
        if self.standard_error == 0:
            return math.inf if self.estimate != self.theoretical else 0.0
        return (self.estimate - self.theoretical) / self.standard_error


def acceptance_probability(n: int) -> float:
    """Probability 1/n! that n iid uniform efforts meet the aggregate threshold."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidAuthorCount(f"n must be an integer >= 2, got {n!r}")
    if n > 170:
        raise AcceptanceUnderflowError(f"1/{n}! underflows double precision (n > 170)")
    return 1.0 / math.factorial(int(n))


def _simplex_efforts(x: np.ndarray, c: float) -> np.ndarray:
    s = np.sort(x, axis=-1)
    return c * (1.0 - np.diff(s, axis=-1, prepend=0.0))


def sample_feasible_profile(n: int, v_prev: float, rng: np.random.Generator, sampler: str = SIMPLEX) -> EffortProfile:
    """Draw one profile uniformly from the feasible region."""
    n, v_prev = _check_sim_args(n, v_prev)
    sampler = parse_sampler(sampler)
    if sampler == REJECTION and n > REJECTION_MAX_N:
        raise SamplerLimitError(_rejection_limit_message(n))
    c = v_prev / (n - 1)
    while True:
        if sampler == SIMPLEX:
            e = _simplex_efforts(rng.random(n), c)
        else:
            e = c * rng.random(n)
        profile = EffortProfile.from_efforts(e, v_prev)
        # The simplex map can only miss the threshold by rounding on its boundary.
        if profile.feasible:
            return profile


def sample_profiles(n: int, v_prev: float, size: int, rng: np.random.Generator, sampler: str = SIMPLEX) -> np.ndarray:
    """Draw ``size`` feasible profiles as a (size, n) array."""
    n, v_prev = _check_sim_args(n, v_prev)
    sampler = parse_sampler(sampler)
    c = v_prev / (n - 1)
    if sampler == SIMPLEX:
        return _simplex_efforts(rng.random((size, n)), c)
    if n > REJECTION_MAX_N:
        raise SamplerLimitError(_rejection_limit_message(n))
    out, have = [], 0
    batch = max(1024, int(size * math.factorial(n) * 1.2))
    while have < size:
        x = rng.random((batch, n))
        x = x[x.sum(axis=1) >= n - 1]
        out.append(x)
        have += len(x)
    return c * np.concatenate(out)[:size]


def _rejection_limit_message(n):
    return (
        f"rejection sampler is limited to n <= {REJECTION_MAX_N}: its acceptance rate is "
        f"1/n! = 1/{math.factorial(n)} at n={n}; use the simplex sampler"
    )


@dataclass(frozen=True)
class _ChunkStats:
    accepted: int
    drawn: int
    mean: float
    m2: float
    author_sums: np.ndarray


def _chunk_rng(seed: int, n: int, sampler: str, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(n, _SAMPLER_CODE[sampler], index))
    return np.random.Generator(np.random.PCG64(ss))


def _run_chunk(n, c, sampler, seed, index, size) -> _ChunkStats:
    x = _chunk_rng(seed, n, sampler, index).random((size, n))
    if sampler == SIMPLEX:
        totals, author_sums = _kernels.simplex_block(x)
    else:
        totals, author_sums = _kernels.rejection_block(x, float(n - 1))
    k = len(totals)
    if k == 0:
        return _ChunkStats(0, size, 0.0, 0.0, author_sums * c)
    totals = totals * c
    mean = float(totals.mean())
    m2 = float(((totals - mean) ** 2).sum())
    return _ChunkStats(k, size, mean, m2, author_sums * c)


def _default_workers():
    return max(1, min(8, os.cpu_count() or 1))


def estimate_vn(
    n: int,
    v_prev: float,
    samples: int = 10**6,
    seed: int = 0,
    sampler: str = SIMPLEX,
    workers: int | None = None,
) -> SimulationResult:
    """Estimate the n-author value from the (n-1)-author value ``v_prev``.

    ``samples`` counts draws: for the simplex sampler every draw is
    accepted, for rejection only about ``samples / n!`` are.
    """
    n, v_prev = _check_sim_args(n, v_prev)
    sampler = parse_sampler(sampler)
    if sampler == REJECTION and n > REJECTION_MAX_N:
        raise SamplerLimitError(_rejection_limit_message(n))
    if isinstance(samples, bool) or not isinstance(samples, (int, np.integer)) or samples < MIN_SAMPLES:
        raise InsufficientSamplesError(f"samples must be an integer >= {MIN_SAMPLES}, got {samples!r}")
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= MAX_SEED:
        raise DomainError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    samples, seed = int(samples), int(seed)
    c = v_prev / (n - 1)

    sizes = [CHUNK_SIZE] * (samples // CHUNK_SIZE)
    if samples % CHUNK_SIZE:
        sizes.append(samples % CHUNK_SIZE)
    workers = _default_workers() if workers is None else max(1, int(workers))

    def job(i):
        return _run_chunk(n, c, sampler, seed, i, sizes[i])

    if workers == 1 or len(sizes) == 1:
        chunks = [job(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(job, range(len(sizes))))

    # Fixed-order pairwise merge of (count, mean, M2).
    count, mean, m2 = 0, 0.0, 0.0
    author_sums = np.zeros(n)
    drawn = 0
    for ch in chunks:
        drawn += ch.drawn
        author_sums += ch.author_sums
        if ch.accepted == 0:
            continue
        total = count + ch.accepted
        delta = ch.mean - mean
        mean += delta * ch.accepted / total
        m2 += ch.m2 + delta * delta * count * ch.accepted / total
        count = total

    if count == 0:
        raise InsufficientSamplesError(
            f"no feasible profile among {drawn} draws at n={n}; increase samples"
        )
    se = math.sqrt(m2 / (count - 1)) / math.sqrt(count) if count > 1 else 0.0
    return SimulationResult(
        n=n,
        v_prev=v_prev,
        samples_accepted=count,
        samples_drawn=drawn,
        estimate=mean,
        standard_error=se,
        acceptance_rate=count / drawn,
        seed=seed,
        sampler=sampler,
        mean_efforts=tuple((author_sums / count).tolist()),
    )


def chain_estimate(
    n_max: int,
    samples_per_step: int = 10**6,
    seed: int = 0,
    mode: str = "verify",
    sampler: str = SIMPLEX,
    model: ValuationModel = DEFAULT_MODEL,
    workers: int | None = None,
) -> list[SimulationResult]:
    """Run :func:`estimate_vn` for n = 2..n_max.

    ``mode="verify"`` feeds each step the closed-form previous value;
    ``mode="full"`` feeds it the previous step's estimate.
    """
    if isinstance(n_max, bool) or not isinstance(n_max, (int, np.integer)) or n_max < 2:
        raise InvalidAuthorCount(f"n_max must be an integer >= 2, got {n_max!r}")
    if mode not in ("verify", "full"):
        raise DomainError(f"mode must be 'verify' or 'full', got {mode!r}")
    results: list[SimulationResult] = []
    v_prev = model.base_value
    for n in range(2, int(n_max) + 1):
        if mode == "verify":
            v_prev = expected_value(n - 1, model)
        res = estimate_vn(n, v_prev, samples_per_step, seed, sampler, workers)
        results.append(res)
        v_prev = res.estimate
    return results


def propagated_standard_error(results: Sequence[SimulationResult]) -> float:
    """Standard error of the last estimate of a full chain.

    Each step is linear in its input, so relative errors add in quadrature.
    """
    if not results:
        raise DomainError("empty chain")
    rel = math.fsum((r.standard_error / r.estimate) ** 2 for r in results)
    return results[-1].estimate * math.sqrt(rel)
