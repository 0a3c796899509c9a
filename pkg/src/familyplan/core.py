"""Stopping rules, birth probabilities, and the exact stopping-time pmf.

A rule "(n, k)" means: keep having children until at least ``n`` boys and
``k`` girls have been born.  Writing T for the first time the rule is
satisfied and l = T - 1, the pmf of T splits into two addends:

* the last child is a boy (possible only when n >= 1):
      C(l, n-1) * p^n * (1-p)^(T-n)
* the last child is a girl (possible only when k >= 1):
      C(l, k-1) * p^(T-k) * (1-p)^k

both supported on T >= n + k.  When n = 0 or k = 0 the corresponding
addend is dropped.

This module also hosts the brute-force oracle: a depth-first walk over raw
birth sequences that shares no algebra with the series machinery and acts
as the independent ground truth for every truncated expectation in the
package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import fsum
from typing import Iterator

from .errors import DomainError

# Enumeration is exponential in the worst case; the cap keeps 2^max_children
# walks tractable unless a caller deliberately raises it.
BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class Rule:
    """A stopping rule: have children until boys_required boys and
    girls_required girls are born."""

    boys_required: int
    girls_required: int

    def __post_init__(self) -> None:
        for name in ("boys_required", "girls_required"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise DomainError(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise DomainError(f"{name} must be >= 0, got {value}")

    @property
    def total_required(self) -> int:
        return self.boys_required + self.girls_required

    def mirrored(self) -> "Rule":
        """Swap the roles of boys and girls."""
        return Rule(self.girls_required, self.boys_required)

    def is_satisfied(self, boys: int, girls: int) -> bool:
        return boys >= self.boys_required and girls >= self.girls_required


@dataclass(frozen=True)
class BirthProbability:
    """Probability of a boy at each birth, strictly inside (0, 1)."""

    p: float

    def __post_init__(self) -> None:
        p = self.p
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise DomainError(f"p must be a real number, got {p!r}")
        if not math.isfinite(p) or not 0.0 < p < 1.0:
            raise DomainError(f"p must lie strictly in (0, 1), got {p!r}")
        object.__setattr__(self, "p", float(p))

    @property
    def q(self) -> float:
        """Probability of a girl."""
        return 1.0 - self.p

    @property
    def odds(self) -> float:
        """Birth odds p/(1-p)."""
        return self.p / (1.0 - self.p)


@dataclass(frozen=True)
class StoppingOutcome:
    """One completed family: size T, its composition, and the closing birth."""

    total_children: int
    boys: int
    girls: int
    last_is_boy: bool

    def __post_init__(self) -> None:
        if self.total_children < 1 or self.boys < 0 or self.girls < 0:
            raise DomainError("outcome counts out of range")
        if self.boys + self.girls != self.total_children:
            raise DomainError("boys + girls must equal total_children")

    def consistent_with(self, rule: Rule) -> bool:
        """Check the first-satisfaction structure this outcome must have."""
        if self.last_is_boy:
            return self.boys == rule.boys_required and self.girls >= rule.girls_required
        return self.girls == rule.girls_required and self.boys >= rule.boys_required


def as_rule(rule: Rule | tuple[int, int]) -> Rule:
    """Coerce a (n, k) pair into a Rule."""
    if isinstance(rule, Rule):
        return rule
    n, k = rule
    return Rule(n, k)


def as_probability(p: BirthProbability | float) -> BirthProbability:
    """Coerce a bare float into a BirthProbability."""
    if isinstance(p, BirthProbability):
        return p
    return BirthProbability(p)


def _require_stoppable(rule: Rule) -> Rule:
    if rule.total_required < 1:
        raise DomainError(
            "the (0,0) rule stops before the first birth; expectations over it are undefined"
        )
    return rule


def pmf_support_min(rule: Rule | tuple[int, int]) -> int:
    """Smallest family size the rule can produce."""
    rule = _require_stoppable(as_rule(rule))
    return max(rule.total_required, 1)


def stopping_pmf_components(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    total_children: int,
) -> tuple[float, float]:
    """The (boy-last, girl-last) addends of P(T = total_children).

    This decomposition is what the series and share computations weight
    term by term; ``stopping_pmf`` is its sum.
    """
    rule = _require_stoppable(as_rule(rule))
    prob = as_probability(p)
    if not isinstance(total_children, int) or isinstance(total_children, bool):
        raise DomainError(f"total_children must be an integer, got {total_children!r}")
    if total_children < 1:
        raise DomainError(f"total_children must be >= 1, got {total_children}")

    n, k = rule.boys_required, rule.girls_required
    if total_children < rule.total_required:
        return (0.0, 0.0)

    last = total_children - 1
    pp, q = prob.p, prob.q
    boy_last = 0.0
    girl_last = 0.0
    if n >= 1:
        boy_last = math.comb(last, n - 1) * pp**n * q ** (total_children - n)
    if k >= 1:
        girl_last = math.comb(last, k - 1) * pp ** (total_children - k) * q**k
    return (boy_last, girl_last)


def stopping_pmf(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    total_children: int,
) -> float:
    """P(T = total_children) for the rule's stopping time T."""
    boy_last, girl_last = stopping_pmf_components(rule, p, total_children)
    return boy_last + girl_last


@dataclass(frozen=True)
class TruncatedMoments:
    """Expectations restricted to families that finish within the horizon.

    Every field is E[stat * 1{T <= horizon}] except mass_covered, which is
    P(T <= horizon).  girl_share weights girls/T, martingale weights
    boys/p - girls/(1-p).
    """

    mass_covered: float
    boys: float
    girls: float
    total: float
    girl_share: float
    martingale: float


@lru_cache(maxsize=16)
def _stopped_sequences(n: int, k: int, limit: int) -> tuple[tuple[int, int, bool], ...]:
    """All birth sequences of length <= limit, pruned at first satisfaction.

    Returns one (boys, girls, last_is_boy) triple per stopped sequence.  The
    walk is a plain depth-first enumeration of boy/girl strings; it never
    touches binomial coefficients, which keeps it independent of the series
    formulas it is used to check.
    """
    leaves: list[tuple[int, int, bool]] = []

    def walk(boys: int, girls: int) -> None:
        if boys + girls == limit:
            return
        if boys + 1 >= n and girls >= k:
            leaves.append((boys + 1, girls, True))
        else:
            walk(boys + 1, girls)
        if boys >= n and girls + 1 >= k:
            leaves.append((boys, girls + 1, False))
        else:
            walk(boys, girls + 1)

    walk(0, 0)
    return tuple(leaves)


def _check_enumeration_args(rule: Rule, max_children: int, cap: int) -> None:
    if not isinstance(max_children, int) or isinstance(max_children, bool):
        raise DomainError(f"max_children must be an integer, got {max_children!r}")
    if max_children < 1:
        raise DomainError(f"max_children must be >= 1, got {max_children}")
    if max_children > cap:
        raise DomainError(
            f"max_children={max_children} exceeds the enumeration cap of {cap}; "
            "raise cap= explicitly if the walk is known to stay tractable"
        )


def enumerate_stopped_outcomes(
    rule: Rule | tuple[int, int],
    max_children: int,
    cap: int = BRUTE_FORCE_CAP,
) -> Iterator[StoppingOutcome]:
    """Yield every completed family with T <= max_children, one per sequence."""
    rule = _require_stoppable(as_rule(rule))
    _check_enumeration_args(rule, max_children, cap)
    for boys, girls, last_is_boy in _stopped_sequences(
        rule.boys_required, rule.girls_required, max_children
    ):
        yield StoppingOutcome(boys + girls, boys, girls, last_is_boy)


def enumerate_brute_force(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    max_children: int,
    cap: int = BRUTE_FORCE_CAP,
) -> TruncatedMoments:
    """Probability-weighted statistics over all families with T <= max_children.

    Each stopped sequence contributes p^boys * (1-p)^girls, so truncated
    expectations here come straight from the sample space with no series
    algebra involved.
    """
    rule = _require_stoppable(as_rule(rule))
    prob = as_probability(p)
    _check_enumeration_args(rule, max_children, cap)

    pp, q = prob.p, prob.q
    mass: list[float] = []
    boys_acc: list[float] = []
    girls_acc: list[float] = []
    total_acc: list[float] = []
    share_acc: list[float] = []
    mart_acc: list[float] = []
    for boys, girls, _last in _stopped_sequences(
        rule.boys_required, rule.girls_required, max_children
    ):
        weight = pp**boys * q**girls
        total = boys + girls
        mass.append(weight)
        boys_acc.append(weight * boys)
        girls_acc.append(weight * girls)
        total_acc.append(weight * total)
        share_acc.append(weight * (girls / total))
        mart_acc.append(weight * (boys / pp - girls / q))

    return TruncatedMoments(
        mass_covered=fsum(mass),
        boys=fsum(boys_acc),
        girls=fsum(girls_acc),
        total=fsum(total_acc),
        girl_share=fsum(share_acc),
        martingale=fsum(mart_acc),
    )
