"""Truncated-series evaluation of the rule expectations, with tail bounds.

Every expectation here is a sum over family sizes T of a weight times one
of the two pmf addends from :mod:`familyplan.core`.  Writing l = T - 1, the
successive-term ratios of those addends are

    boy-last:   (l+1) * (1-p) / (l+2-n)      -> 1-p
    girl-last:  (l+1) * p / (l+2-k)          -> p

and every weighted variant used below has a successor-ratio bound that
decreases monotonically toward the same limit.  Once the current bound r
drops below 1 the remaining tail is at most term * r / (1 - r), which is
the rigorous truncation bound reported in every SeriesResult.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, fsum
from typing import Callable

from .core import (
    BirthProbability,
    Rule,
    TruncatedMoments,
    _require_stoppable,
    as_probability,
    as_rule,
    pmf_support_min,
    stopping_pmf_components,
)
from .errors import DomainError, ExtremeProbabilityError, TermCapError

# Term counts scale like 1/min(p, 1-p); refuse probabilities that would
# burn the cap instead of converging.
SERIES_P_MIN = 1e-6
TERM_CAP = 100_000

CLOSED_FORM_QUANTITIES = ("F_H", "F_S", "G_H", "G_S", "B_H", "B_S")


@dataclass(frozen=True)
class SeriesResult:
    """A truncated series value with a rigorous bound on the dropped tail."""

    value: float
    tail_bound: float
    terms_used: int

    def __post_init__(self) -> None:
        if self.terms_used < 1:
            raise DomainError("terms_used must be >= 1")
        if self.tail_bound < 0.0:
            raise DomainError("tail_bound must be >= 0")


def _check_series_probability(prob: BirthProbability) -> BirthProbability:
    if not SERIES_P_MIN <= prob.p <= 1.0 - SERIES_P_MIN:
        raise ExtremeProbabilityError(
            f"p={prob.p!r} is outside [{SERIES_P_MIN}, {1.0 - SERIES_P_MIN}]; "
            "series evaluation would need an impractical number of terms"
        )
    return prob


def _check_tolerance(tol: float) -> float:
    if not (isinstance(tol, (int, float)) and math.isfinite(tol) and tol > 0.0):
        raise DomainError(f"tol must be a positive real, got {tol!r}")
    return float(tol)


def _sum_branch(
    term: Callable[[int], float],
    tail_bound: Callable[[int, float], float | None],
    start: int,
    tol: float,
    cap: int | None = None,
) -> tuple[float, float, int]:
    """Sum term(l) for l >= start until tail_bound certifies the remainder.

    tail_bound(l, t) returns an upper bound on sum(term(j) for j > l) or
    None when no bound is available yet (ratio still >= 1, or a weight has
    not entered its monotone regime).  Terms are accumulated with fsum so
    the reported value is correctly rounded for the partial sum.
    """
    if cap is None:
        cap = TERM_CAP
    terms: list[float] = []
    l = start
    while True:
        t = term(l)
        terms.append(t)
        bound = tail_bound(l, t)
        if bound is not None and bound <= tol:
            return (fsum(terms), bound, len(terms))
        if len(terms) >= cap:
            raise TermCapError(
                f"series did not reach tolerance {tol} within {cap} terms"
            )
        l += 1


def _branch_tolerance(tol: float, branches: int) -> float:
    return tol / branches


def _boy_addend(n: int, pp: float, q: float) -> Callable[[int], float]:
    def addend(l: int) -> float:
        return comb(l, n - 1) * pp**n * q ** (l + 1 - n)

    return addend


def _girl_addend(k: int, pp: float, q: float) -> Callable[[int], float]:
    def addend(l: int) -> float:
        return comb(l, k - 1) * pp ** (l + 1 - k) * q**k

    return addend


def _geometric_tail(r: float, t: float) -> float | None:
    if r >= 1.0:
        return None
    return abs(t) * r / (1.0 - r)


def expected_boys(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    tol: float,
) -> SeriesResult:
    """Expected number of boys at the stopping time.

    Boy-last families contribute weight n, girl-last families weight T - k.
    """
    rule = _require_stoppable(as_rule(rule))
    prob = _check_series_probability(as_probability(p))
    tol = _check_tolerance(tol)

    n, k = rule.boys_required, rule.girls_required
    pp, q = prob.p, prob.q
    start = rule.total_required - 1
    branch_tol = _branch_tolerance(tol, (n >= 1) + (k >= 1))

    parts: list[tuple[float, float, int]] = []
    if n >= 1:
        boy_addend = _boy_addend(n, pp, q)

        def boy_term(l: int) -> float:
            return n * boy_addend(l)

        def boy_tail(l: int, t: float) -> float | None:
            # constant weight: successor ratio (l+1)(1-p)/(l+2-n), decreasing
            return _geometric_tail((l + 1) * q / (l + 2 - n), t)

        parts.append(_sum_branch(boy_term, boy_tail, start, branch_tol))
    if k >= 1:
        girl_addend = _girl_addend(k, pp, q)

        def girl_term(l: int) -> float:
            return (l + 1 - k) * girl_addend(l)

        def girl_tail(l: int, t: float) -> float | None:
            # weight T-k: successor ratio (l+1)p/(l+1-k), decreasing once positive
            if l + 1 - k < 1:
                return None
            return _geometric_tail((l + 1) * pp / (l + 1 - k), t)

        parts.append(_sum_branch(girl_term, girl_tail, start, branch_tol))

    return SeriesResult(
        value=fsum(v for v, _, _ in parts),
        tail_bound=fsum(b for _, b, _ in parts),
        terms_used=sum(c for _, _, c in parts),
    )


def expected_girls(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    tol: float,
) -> SeriesResult:
    """Expected number of girls, via the swap symmetry G(n,k,p) = B(k,n,1-p)."""
    rule = _require_stoppable(as_rule(rule))
    prob = as_probability(p)
    return expected_boys(rule.mirrored(), BirthProbability(prob.q), tol)


def _expected_girls_direct(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    tol: float,
) -> SeriesResult:
    """Direct transcription of the girls series, bypassing the mirror.

    Test-only: exists so the mirror identity can be checked against an
    independent summation instead of holding by construction.
    """
    rule = _require_stoppable(as_rule(rule))
    prob = _check_series_probability(as_probability(p))
    tol = _check_tolerance(tol)

    n, k = rule.boys_required, rule.girls_required
    pp, q = prob.p, prob.q
    start = rule.total_required - 1
    branch_tol = _branch_tolerance(tol, (n >= 1) + (k >= 1))

    parts: list[tuple[float, float, int]] = []
    if n >= 1:
        boy_addend = _boy_addend(n, pp, q)

        def boy_term(l: int) -> float:
            return (l + 1 - n) * boy_addend(l)

        def boy_tail(l: int, t: float) -> float | None:
            if l + 1 - n < 1:
                return None
            return _geometric_tail((l + 1) * q / (l + 1 - n), t)

        parts.append(_sum_branch(boy_term, boy_tail, start, branch_tol))
    if k >= 1:
        girl_addend = _girl_addend(k, pp, q)

        def girl_term(l: int) -> float:
            return k * girl_addend(l)

        def girl_tail(l: int, t: float) -> float | None:
            return _geometric_tail((l + 1) * pp / (l + 2 - k), t)

        parts.append(_sum_branch(girl_term, girl_tail, start, branch_tol))

    return SeriesResult(
        value=fsum(v for v, _, _ in parts),
        tail_bound=fsum(b for _, b, _ in parts),
        terms_used=sum(c for _, _, c in parts),
    )


def expected_family_size(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    tol: float,
) -> SeriesResult:
    """Expected number of children E(T) at the stopping time."""
    rule = _require_stoppable(as_rule(rule))
    prob = _check_series_probability(as_probability(p))
    tol = _check_tolerance(tol)

    n, k = rule.boys_required, rule.girls_required
    pp, q = prob.p, prob.q
    start = rule.total_required - 1
    branch_tol = _branch_tolerance(tol, (n >= 1) + (k >= 1))

    parts: list[tuple[float, float, int]] = []
    if n >= 1:
        boy_addend = _boy_addend(n, pp, q)

        def boy_term(l: int) -> float:
            return (l + 1) * boy_addend(l)

        def boy_tail(l: int, t: float) -> float | None:
            # weight T: successor ratio (l+2)(1-p)/(l+2-n), decreasing
            return _geometric_tail((l + 2) * q / (l + 2 - n), t)

        parts.append(_sum_branch(boy_term, boy_tail, start, branch_tol))
    if k >= 1:
        girl_addend = _girl_addend(k, pp, q)

        def girl_term(l: int) -> float:
            return (l + 1) * girl_addend(l)

        def girl_tail(l: int, t: float) -> float | None:
            return _geometric_tail((l + 2) * pp / (l + 2 - k), t)

        parts.append(_sum_branch(girl_term, girl_tail, start, branch_tol))

    return SeriesResult(
        value=fsum(v for v, _, _ in parts),
        tail_bound=fsum(b for _, b, _ in parts),
        terms_used=sum(c for _, _, c in parts),
    )


def gender_ratio(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    tol: float,
) -> float:
    """Ratio of expected boys to expected girls.

    Equals the birth odds p/(1-p) for every rule, up to truncation error.
    """
    boys = expected_boys(rule, p, tol)
    girls = expected_girls(rule, p, tol)
    return boys.value / girls.value


def closed_form(quantity: str, p: BirthProbability | float) -> float:
    """Closed-form family demographics for the (1,1) rule (H) and (2,0) rule (S).

    Quantities: family size F, expected girls G, expected boys B, each for
    the one-boy-one-girl rule (suffix _H) and the two-boys rule (suffix _S).
    """
    prob = as_probability(p)
    pp, q = prob.p, prob.q
    if quantity == "F_H":
        return (pp * pp - pp + 1.0) / (pp - pp * pp)
    if quantity == "F_S":
        return 2.0 / pp
    if quantity == "G_H":
        return (pp * pp - pp + 1.0) / pp
    if quantity == "G_S":
        return 2.0 * q / pp
    if quantity == "B_H":
        return (pp * pp - pp + 1.0) / q
    if quantity == "B_S":
        return 2.0
    raise DomainError(
        f"unknown quantity {quantity!r}; expected one of {CLOSED_FORM_QUANTITIES}"
    )


def truncated_moments(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    max_children: int,
) -> TruncatedMoments:
    """Partial sums of every series, restricted to families with T <= max_children.

    Directly comparable with core.enumerate_brute_force over the same horizon.
    """
    rule = _require_stoppable(as_rule(rule))
    prob = as_probability(p)
    if not isinstance(max_children, int) or isinstance(max_children, bool):
        raise DomainError(f"max_children must be an integer, got {max_children!r}")
    if max_children < 1:
        raise DomainError(f"max_children must be >= 1, got {max_children}")

    n, k = rule.boys_required, rule.girls_required
    pp, q = prob.p, prob.q
    mass: list[float] = []
    boys_acc: list[float] = []
    girls_acc: list[float] = []
    total_acc: list[float] = []
    share_acc: list[float] = []
    mart_acc: list[float] = []
    for t in range(pmf_support_min(rule), max_children + 1):
        boy_last, girl_last = stopping_pmf_components(rule, prob, t)
        mass.append(boy_last + girl_last)
        boys_acc.append(n * boy_last + (t - k) * girl_last)
        girls_acc.append((t - n) * boy_last + k * girl_last)
        total_acc.append(t * (boy_last + girl_last))
        share_acc.append(((t - n) / t) * boy_last + (k / t) * girl_last)
        mart_acc.append(
            (n / pp - (t - n) / q) * boy_last + ((t - k) / pp - k / q) * girl_last
        )

    return TruncatedMoments(
        mass_covered=fsum(mass),
        boys=fsum(boys_acc),
        girls=fsum(girls_acc),
        total=fsum(total_acc),
        girl_share=fsum(share_acc),
        martingale=fsum(mart_acc),
    )
