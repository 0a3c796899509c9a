"""Seedable simulation of families under a stopping rule.

Reproducibility contract: every family's births are a pure function of
(seed, family index), so summaries are bit-identical for equal inputs no
matter how the work is chunked or parallelized.  The generator is
counter-based SplitMix64:

    key(i)  = mix64(seed + (i+1) * GAMMA)          (per-family substream key)
    u(i, j) = (mix64(key(i) + (j+1) * GAMMA) >> 11) * 2^-53

where GAMMA = 0x9E3779B97F4A7C15 and mix64 is the standard SplitMix64
finalizer (xors/multiplies by 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).
All arithmetic is modulo 2^64.  Birth j of family i is a boy iff
u(i, j) < p.

The scalar path (``FamilyStream`` + ``simulate_family``) and the batched
numpy path (``sample_outcomes`` + ``run_simulation``) evaluate the same
function and agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Protocol

import numpy as np

from .core import BirthProbability, Rule, _require_stoppable, as_probability, as_rule
from .errors import BirthCapError, DomainError

#: Per-family birth limit; hitting it means p is numerically degenerate.
DEFAULT_BIRTH_CAP = 10_000_000

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_U01 = 2.0**-53


def _mix64(x: int) -> int:
    x &= _MASK64
    x ^= x >> 30
    x = (x * _MIX1) & _MASK64
    x ^= x >> 27
    x = (x * _MIX2) & _MASK64
    return x ^ (x >> 31)


def _mix64_array(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return x


def _check_seed(seed: int) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise DomainError(f"seed must be an integer, got {seed!r}")
    return seed & _MASK64


class RandomSource(Protocol):
    def random(self) -> float: ...


class FamilyStream:
    """Uniform variates for one family, derived from (seed, family index)."""

    __slots__ = ("_state", "_draws")

    def __init__(self, seed: int, index: int) -> None:
        if index < 0:
            raise DomainError(f"family index must be >= 0, got {index}")
        self._state = _mix64(_check_seed(seed) + (index + 1) * _GAMMA)
        self._draws = 0

    def random(self) -> float:
        self._draws += 1
        return (_mix64(self._state + self._draws * _GAMMA) >> 11) * _U01


@dataclass(frozen=True)
class FamilyOutcome:
    """One simulated family at its stopping time."""

    boys: int
    girls: int
    total: int
    martingale_terminal: float
    girl_share: float

    def __post_init__(self) -> None:
        if self.boys + self.girls != self.total or self.total < 1:
            raise DomainError("boys + girls must equal total >= 1")


@dataclass(frozen=True)
class SimulationSummary:
    """Aggregate estimators with unbiased-sample-variance standard errors."""

    samples: int
    seed: int
    mean_boys: float
    mean_girls: float
    mean_total: float
    mean_girl_share: float
    mean_martingale: float
    se_boys: float
    se_girls: float
    se_total: float
    se_girl_share: float
    se_martingale: float
    ratio_estimate: float

    def to_dict(self) -> dict[str, float | int]:
        """Flat record with stable field order, for serialization."""
        return {
            "samples": self.samples,
            "seed": self.seed,
            "mean_boys": self.mean_boys,
            "mean_girls": self.mean_girls,
            "mean_total": self.mean_total,
            "mean_girl_share": self.mean_girl_share,
            "mean_martingale": self.mean_martingale,
            "se_boys": self.se_boys,
            "se_girls": self.se_girls,
            "se_total": self.se_total,
            "se_girl_share": self.se_girl_share,
            "se_martingale": self.se_martingale,
            "ratio_estimate": self.ratio_estimate,
        }


def simulate_family(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    random_source: RandomSource,
    birth_cap: int = DEFAULT_BIRTH_CAP,
) -> FamilyOutcome:
    """Draw births (boy iff u < p) until the rule is first satisfied."""
    rule = _require_stoppable(as_rule(rule))
    prob = as_probability(p)
    n, k = rule.boys_required, rule.girls_required

    boys = 0
    girls = 0
    while boys < n or girls < k:
        if boys + girls >= birth_cap:
            raise BirthCapError(
                f"family exceeded {birth_cap} births; p={prob.p!r} is numerically degenerate"
            )
        if random_source.random() < prob.p:
            boys += 1
        else:
            girls += 1
    total = boys + girls
    return FamilyOutcome(
        boys=boys,
        girls=girls,
        total=total,
        martingale_terminal=boys / prob.p - girls / prob.q,
        girl_share=girls / total,
    )


def sample_outcomes(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    samples: int,
    seed: int,
    birth_cap: int = DEFAULT_BIRTH_CAP,
    block_size: int = 1 << 16,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-family (boys, girls, total) arrays for family indices 0..samples-1.

    Batched evaluation of the same per-family streams as FamilyStream;
    block_size only controls working memory, never the results.
    """
    rule = _require_stoppable(as_rule(rule))
    prob = as_probability(p)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
        raise DomainError(f"samples must be an integer >= 1, got {samples!r}")
    seed = _check_seed(seed)

    n, k = rule.boys_required, rule.girls_required
    boys = np.empty(samples, dtype=np.int64)
    girls = np.empty(samples, dtype=np.int64)

    for start in range(0, samples, block_size):
        count = min(block_size, samples - start)
        index = np.arange(start, start + count, dtype=np.uint64)
        key = _mix64_array(np.uint64(seed) + (index + np.uint64(1)) * np.uint64(_GAMMA))
        blk_boys = np.zeros(count, dtype=np.int64)
        blk_girls = np.zeros(count, dtype=np.int64)
        active = np.arange(count)
        draws = 0
        while active.size:
            if draws >= birth_cap:
                raise BirthCapError(
                    f"family exceeded {birth_cap} births; p={prob.p!r} is numerically degenerate"
                )
            draws += 1
            offset = np.uint64((draws * _GAMMA) & _MASK64)
            u = (_mix64_array(key[active] + offset) >> np.uint64(11)).astype(np.float64) * _U01
            is_boy = u < prob.p
            blk_boys[active[is_boy]] += 1
            blk_girls[active[~is_boy]] += 1
            done = (blk_boys[active] >= n) & (blk_girls[active] >= k)
            active = active[~done]
        boys[start : start + count] = blk_boys
        girls[start : start + count] = blk_girls

    return boys, girls, boys + girls


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1)) / sqrt(values.size)


def run_simulation(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    samples: int,
    seed: int,
    birth_cap: int = DEFAULT_BIRTH_CAP,
) -> SimulationSummary:
    """Simulate independent families and aggregate all estimators.

    Deterministic: equal (rule, p, samples, seed) give bit-identical
    summaries on one build, independent of chunking.
    """
    prob = as_probability(p)
    boys, girls, totals = sample_outcomes(rule, p, samples, seed, birth_cap)

    boys_f = boys.astype(np.float64)
    girls_f = girls.astype(np.float64)
    totals_f = totals.astype(np.float64)
    shares = girls_f / totals_f
    martingales = boys_f / prob.p - girls_f / prob.q

    mean_boys, se_boys = _mean_se(boys_f)
    mean_girls, se_girls = _mean_se(girls_f)
    mean_total, se_total = _mean_se(totals_f)
    mean_share, se_share = _mean_se(shares)
    mean_mart, se_mart = _mean_se(martingales)

    ratio = mean_boys / mean_girls if mean_girls != 0.0 else float("inf")
    return SimulationSummary(
        samples=samples,
        seed=_check_seed(seed),
        mean_boys=mean_boys,
        mean_girls=mean_girls,
        mean_total=mean_total,
        mean_girl_share=mean_share,
        mean_martingale=mean_mart,
        se_boys=se_boys,
        se_girls=se_girls,
        se_total=se_total,
        se_girl_share=se_share,
        se_martingale=se_mart,
        ratio_estimate=ratio,
    )
