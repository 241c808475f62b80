"""Assign binned populations to the six relief categories.

A household's bin may straddle a category boundary; the bound rule decides
where the whole bin lands. The upper-bound rule (scenario S1) sends every
straddling bin to the lower category, the most conservative reading. The
middle-bound rule (S2) compares the boundary to the bin midpoint: at or
past halfway, the bin stays with the lower category, otherwise it moves up.

Boundaries come in two kinds. At the refundability floor and the phaseout
start, an income exactly equal to the boundary still belongs to the lower
category (no refund accrues at the floor; the full benefit survives at the
start), so a boundary sitting on a bin's lower edge still makes that bin
ambiguous. At the remaining boundaries the boundary income itself already
qualifies, and a bin whose lower edge equals the boundary lies wholly above.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ThresholdOutOfRange, UnavailableCategory
from .params import ParentalGroup
from .population import BIN_WIDTH, IncomeBin, PopulationTable
from .taxmath import ThresholdSet


class ReliefCategory(Enum):
    INELIGIBLE_LOW = "a"
    SOME_ACTC = "b"
    FULL_ACTC = "c"
    FULL_CTC = "d"
    SOME_CTC = "e"
    INELIGIBLE_HIGH = "f"

    @property
    def code(self) -> str:
        return self.value

    @property
    def label(self) -> str:
        return {
            "a": "ineligible (low income)",
            "b": "some refundable credit",
            "c": "full refundable credit",
            "d": "full credit",
            "e": "partial credit (phaseout)",
            "f": "ineligible (high income)",
        }[self.value]


CATEGORY_ORDER = tuple(ReliefCategory)


class BoundRule(Enum):
    UPPER = "upper"
    MIDDLE = "middle"


class Scenario(Enum):
    """S1: one child per household, upper-bound bins. S2: group-year average children, middle-bound bins."""

    S1 = "s1"
    S2 = "s2"

    @property
    def rule(self) -> BoundRule:
        return BoundRule.UPPER if self is Scenario.S1 else BoundRule.MIDDLE

    @property
    def fixed_one_child(self) -> bool:
        return self is Scenario.S1


class GeneralizabilityFlag(Enum):
    ACCURATE = "accurate"
    UNDERESTIMATE = "underestimate"
    UNAVAILABLE = "unavailable"


@dataclass(frozen=True)
class EligibilityEstimate:
    year: int
    group: ParentalGroup
    scenario: Scenario
    counts: Mapping[ReliefCategory, int]
    flags: Mapping[ReliefCategory, GeneralizabilityFlag]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def proportion(self, category: ReliefCategory) -> Fraction:
        return Fraction(self.counts[category], self.total)

    def proportions(self) -> dict[ReliefCategory, Fraction]:
        return {c: self.proportion(c) for c in CATEGORY_ORDER}


def cut_income(boundary: Fraction, strictly_above: bool, rule: BoundRule) -> int:
    """Bin edge at which the category above `boundary` starts, post-rule.

    Boundaries are incomes; the returned cut is always a multiple of the
    bin width. Bins at or above the cut belong to the higher category.
    """
    if boundary < 0:
        raise ThresholdOutOfRange(f"negative classification boundary {boundary}")
    floor_edge = int(boundary // BIN_WIDTH) * BIN_WIDTH
    on_edge = boundary == floor_edge
    if rule is BoundRule.MIDDLE:
        midpoint = floor_edge + Fraction(BIN_WIDTH, 2)
        return floor_edge + BIN_WIDTH if boundary >= midpoint else floor_edge
    if on_edge and not strictly_above:
        return floor_edge
    return floor_edge + BIN_WIDTH


def category_cuts(thresholds: ThresholdSet, rule: BoundRule) -> list[int]:
    """The five nondecreasing bin-edge cuts separating categories a-f."""
    cuts: list[int] = []
    for boundary, strictly_above in thresholds.boundaries():
        cut = cut_income(boundary, strictly_above, rule)
        if cuts and cut < cuts[-1]:
            cut = cuts[-1]
        cuts.append(cut)
    return cuts


def assign_bins(
    bins: Sequence[IncomeBin], thresholds: ThresholdSet, rule: BoundRule
) -> dict[ReliefCategory, int]:
    """Total count per category; conserves the population exactly."""
    cuts = category_cuts(thresholds, rule)
    counts = {c: 0 for c in CATEGORY_ORDER}
    for b in bins:
        idx = bisect_right(cuts, b.lower)
        counts[CATEGORY_ORDER[idx]] += b.count
    return counts


def flag_categories(
    group: ParentalGroup, year: int, scenario: Scenario
) -> dict[ReliefCategory, GeneralizabilityFlag]:
    """How far each category estimate generalizes beyond the $99,999 data ceiling.

    Encodes where phaseout boundaries exceed the ceiling: those categories
    are reported from truncated data (underestimates) or not estimable at
    all (unavailable), per group and era.
    """
    acc = GeneralizabilityFlag.ACCURATE
    under = GeneralizabilityFlag.UNDERESTIMATE
    unavail = GeneralizabilityFlag.UNAVAILABLE
    flags = {c: acc for c in CATEGORY_ORDER}
    married = group is ParentalGroup.MARRIED
    post_reform = year >= 2018
    if married:
        if post_reform:
            flags[ReliefCategory.FULL_CTC] = unavail
        else:
            flags[ReliefCategory.FULL_CTC] = under
        flags[ReliefCategory.SOME_CTC] = unavail
        flags[ReliefCategory.INELIGIBLE_HIGH] = unavail
    elif post_reform:
        flags[ReliefCategory.FULL_CTC] = under
        flags[ReliefCategory.SOME_CTC] = unavail
        flags[ReliefCategory.INELIGIBLE_HIGH] = unavail
    elif scenario is Scenario.S1:
        flags[ReliefCategory.INELIGIBLE_HIGH] = under
    else:
        flags[ReliefCategory.SOME_CTC] = under
        flags[ReliefCategory.INELIGIBLE_HIGH] = unavail
    return flags


def classify(
    pop: PopulationTable,
    year: int,
    group: ParentalGroup,
    thresholds: ThresholdSet,
    rule: BoundRule,
    scenario: Scenario,
) -> EligibilityEstimate:
    """Classify one (year, group) population under the given thresholds."""
    counts = assign_bins(pop.bins(year, group), thresholds, rule)
    return EligibilityEstimate(
        year=year,
        group=group,
        scenario=scenario,
        counts=counts,
        flags=flag_categories(group, year, scenario),
    )


def combine_categories(
    estimate: EligibilityEstimate, categories: Iterable[ReliefCategory]
) -> Fraction:
    """Sum of proportions over `categories`; rejects unavailable ones."""
    total = Fraction(0)
    for c in categories:
        if estimate.flags[c] is GeneralizabilityFlag.UNAVAILABLE:
            raise UnavailableCategory(
                f"category {c.code} is not estimable for {estimate.group.value} {estimate.year}"
            )
        total += estimate.proportion(c)
    return total
