"""Girl-share analysis: societal share, per-family average share, and the gap.

Two different notions of "share of girls" for a rule:

* societal share g = E[girls] / E[T], the population-level fraction;
* average share g_bar = E[girls / T], averaging each family's own fraction.

For the two-boys rule the average share has the logarithmic closed form
1 - 2r(1 + r ln p) with r = p/(1-p), and it sits strictly below the
societal share 1-p; the general-rule series here reduces to exactly that
case at (2,0).  The gap g - g_bar is what an individual family perceives
as asymmetry even though the population-level ratio is fair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, fsum

from .core import (
    BirthProbability,
    Rule,
    _require_stoppable,
    as_probability,
    as_rule,
)
from .series import (
    SeriesResult,
    _branch_tolerance,
    _check_series_probability,
    _check_tolerance,
    _geometric_tail,
    _sum_branch,
    expected_family_size,
    expected_girls,
)


@dataclass(frozen=True)
class ShareReport:
    """Societal and per-family-average girl shares, and their difference."""

    societal_share: float
    average_share: float
    gap: float


def societal_share(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    tol: float,
) -> float:
    """E[girls] / E[T]; equals 1-p for the (2,0) rule."""
    girls = expected_girls(rule, p, tol)
    size = expected_family_size(rule, p, tol)
    return girls.value / size.value


def average_share(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    tol: float,
) -> SeriesResult:
    """E[girls / T]: the pmf addends weighted by each branch's girl fraction.

    Boy-last families of size T hold T - n girls, girl-last families hold
    exactly k, so the weights are (T-n)/T and k/T.  Since both weights lie
    in [0, 1], tails are bounded by the unweighted addend tails.
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

        def boy_term(l: int) -> float:
            return ((l + 1 - n) / (l + 1)) * comb(l, n - 1) * pp**n * q ** (l + 1 - n)

        def boy_tail(l: int, t: float) -> float | None:
            # weight (T-n)/T increases toward 1, so the unweighted addend
            # tail (ratio (l+1)(1-p)/(l+2-n), decreasing) dominates.
            if l + 1 - n < 1:
                return None
            unweighted = t * (l + 1) / (l + 1 - n)
            return _geometric_tail((l + 1) * q / (l + 2 - n), unweighted)

        parts.append(_sum_branch(boy_term, boy_tail, start, branch_tol))
    if k >= 1:

        def girl_term(l: int) -> float:
            return (k / (l + 1)) * comb(l, k - 1) * pp ** (l + 1 - k) * q**k

        def girl_tail(l: int, t: float) -> float | None:
            # weight k/T decreases, so the weighted term itself dominates
            # the tail at the unweighted addend ratio.
            return _geometric_tail((l + 1) * pp / (l + 2 - k), t)

        parts.append(_sum_branch(girl_term, girl_tail, start, branch_tol))

    return SeriesResult(
        value=fsum(v for v, _, _ in parts),
        tail_bound=fsum(b for _, b, _ in parts),
        terms_used=sum(c for _, _, c in parts),
    )


def shammai_average_share_closed_form(p: BirthProbability | float) -> float:
    """Average girl share of the (2,0) rule: 1 - 2r(1 + r ln p), r = p/(1-p)."""
    prob = as_probability(p)
    odds = prob.p / prob.q
    return 1.0 - 2.0 * odds * (1.0 + odds * math.log(prob.p))


def share_report(
    rule: Rule | tuple[int, int],
    p: BirthProbability | float,
    tol: float,
) -> ShareReport:
    """Bundle societal share, average share, and their gap."""
    societal = societal_share(rule, p, tol)
    average = average_share(rule, p, tol)
    return ShareReport(
        societal_share=societal,
        average_share=average.value,
        gap=societal - average.value,
    )
