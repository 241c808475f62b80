"""What-if analyses: parameter walks, parity, pricing-out, credit sweeps.

All operations here classify a fixed income distribution under modified
program parameters; population year and parameter year are independent so
that rule changes can be isolated from demographic drift. Results carry
exact fractions; rendering to percentages happens at the output layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .classifier import (
    CATEGORY_ORDER,
    BoundRule,
    EligibilityEstimate,
    ReliefCategory,
    Scenario,
    category_cuts,
    classify,
    cut_income,
)
from .errors import Unreachable, ValidationError
from .money import as_money
from .params import ParentalGroup, ProgramParameters, apply_overrides, overrides_to
from .population import INCOME_CEILING, IncomeBin, PopulationTable
from .taxmath import (
    HouseholdProfile,
    LiabilityMode,
    refund_credit_threshold,
    thresholds,
)

GROUPS = tuple(ParentalGroup)


def profile_for(
    pop: PopulationTable,
    group: ParentalGroup,
    scenario: Scenario,
    children_year: int,
) -> HouseholdProfile:
    """Household profile under the scenario's children convention."""
    if scenario.fixed_one_child:
        return HouseholdProfile.one_child(group)
    return HouseholdProfile(group, pop.average_children(children_year, group))


def eligibility(
    pop: PopulationTable,
    pop_year: int,
    group: ParentalGroup,
    params: ProgramParameters,
    scenario: Scenario,
    children_year: int | None = None,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> EligibilityEstimate:
    """Classify the (pop_year, group) distribution under `params`."""
    cy = params.year if children_year is None else children_year
    profile = profile_for(pop, group, scenario, cy)
    ts = thresholds(profile, params, mode)
    return classify(pop, pop_year, group, ts, scenario.rule, scenario)


def _mass_between(bins: Sequence[IncomeBin], lo: int, hi: int) -> int:
    return sum(b.count for b in bins if lo <= b.lower < hi)


def full_relief_cuts(
    profile: HouseholdProfile,
    params: ProgramParameters,
    rule: BoundRule,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> tuple[int, int]:
    """Bin-edge cuts delimiting full-benefit eligibility via any pathway.

    The lower cut comes from the income at which credit plus refund reaches
    the full per-household maximum; the upper cut is the phaseout start
    (incomes above it can no longer realize the full amount).
    """
    target = params.ctc_per_child * profile.children
    t_combined = refund_credit_threshold(target, profile, params, mode)
    phaseout = params.for_status(profile.group.filing_status).phaseout_start
    if t_combined > phaseout:
        raise Unreachable("full benefit is eroded by the phaseout before it accrues")
    lo = cut_income(t_combined, strictly_above=False, rule=rule)
    hi = cut_income(phaseout, strictly_above=True, rule=rule)
    return lo, hi


def full_relief_proportion(
    pop: PopulationTable,
    pop_year: int,
    group: ParentalGroup,
    params: ProgramParameters,
    scenario: Scenario,
    children_year: int | None = None,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> Fraction:
    """Share of the group able to realize the full benefit as credit and/or refund."""
    cy = params.year if children_year is None else children_year
    profile = profile_for(pop, group, scenario, cy)
    bins = pop.bins(pop_year, group)
    total = sum(b.count for b in bins)
    try:
        lo, hi = full_relief_cuts(profile, params, scenario.rule, mode)
    except Unreachable:
        return Fraction(0)
    return Fraction(_mass_between(bins, lo, hi), total)


# ---------------------------------------------------------------------------
# Piecemeal parameter walks


@dataclass(frozen=True)
class PiecemealStep:
    """One cumulative stop on a parameter walk.

    `overrides` accumulate over prior steps; `children_year` switches the
    children averages used for threshold math (middle-bound scenarios only).
    """

    label: str
    overrides: Mapping[str, object] = field(default_factory=dict)
    children_year: int | None = None


@dataclass(frozen=True)
class StepRow:
    step: int
    label: str
    group: ParentalGroup
    proportion: Fraction


def piecemeal(
    pop: PopulationTable,
    pop_year: int,
    base: ProgramParameters,
    steps: Sequence[PiecemealStep],
    target: ReliefCategory,
    scenario: Scenario,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> list[StepRow]:
    """Classify `pop_year` under each step's cumulative parameter set.

    The first step must carry no overrides (it is the baseline). Overrides
    are applied leniently: intermediate stops may pass through
    configurations (e.g. refundable maximum above the credit maximum) that
    strict validation would reject.
    """
    if steps and steps[0].overrides:
        raise ValidationError("the first piecemeal step must have empty overrides")
    rows: list[StepRow] = []
    cumulative: dict[str, object] = {}
    for index, step in enumerate(steps, start=1):
        cumulative.update(step.overrides)
        params = apply_overrides(base, cumulative, strict=False)
        for group in GROUPS:
            est = eligibility(
                pop, pop_year, group, params, scenario,
                children_year=step.children_year, mode=mode,
            )
            rows.append(StepRow(index, step.label, group, est.proportion(target)))
    return rows


def builtin_piecemeal_steps(
    table: str,
    params_by_year: Mapping[int, ProgramParameters],
    pop_year: int = 2018,
    base_year: int = 2017,
) -> tuple[ProgramParameters, list[PiecemealStep], ReliefCategory]:
    """The stock walks from old-law baseline to new-law rules.

    Table "1a" walks the full-credit category; "1b" walks the full
    refundable category with the credit raised last. The opening step
    applies the new-law rules outright so the walk's endpoint can be
    checked against it.
    """
    new = params_by_year[pop_year]
    base = params_by_year[base_year]
    deduction_package = overrides_to(base, new, ["standard_deduction", "exemption_per_person"])
    phaseout = overrides_to(base, new, ["phaseout_start"])
    brackets = overrides_to(base, new, ["brackets"])
    opening = PiecemealStep(
        label=f"{pop_year} rules outright",
        overrides={},
        children_year=pop_year,
    )
    if table == "1a":
        target = ReliefCategory.FULL_CTC
        walk = [
            PiecemealStep(f"{base_year} rules baseline"),
            PiecemealStep("raise credit maximum", {"ctc_per_child": new.ctc_per_child}),
            PiecemealStep("new standard deduction, exemptions repealed", deduction_package),
            PiecemealStep("new refundability floor", {"refund_threshold": new.refund_threshold}),
            PiecemealStep("new phaseout start", phaseout),
            PiecemealStep("raise refundable maximum", {"actc_per_child": new.actc_per_child}),
            PiecemealStep(
                "new rate brackets and children averages",
                brackets,
                children_year=pop_year,
            ),
        ]
    elif table == "1b":
        target = ReliefCategory.FULL_ACTC
        walk = [
            PiecemealStep(f"{base_year} rules baseline"),
            PiecemealStep("raise refundable maximum", {"actc_per_child": new.actc_per_child}),
            PiecemealStep("new standard deduction, exemptions repealed", deduction_package),
            PiecemealStep("new refundability floor", {"refund_threshold": new.refund_threshold}),
            PiecemealStep("new phaseout start", phaseout),
            PiecemealStep("raise credit maximum", {"ctc_per_child": new.ctc_per_child}),
            PiecemealStep(
                "new rate brackets and children averages",
                brackets,
                children_year=pop_year,
            ),
        ]
    else:
        raise ValidationError(f"unknown piecemeal table {table!r}")
    return base, [opening] + walk, target


def run_piecemeal_table(
    table: str,
    pop: PopulationTable,
    params_by_year: Mapping[int, ProgramParameters],
    scenario: Scenario,
    pop_year: int = 2018,
    base_year: int = 2017,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> list[StepRow]:
    """Stock walk as step rows 1..8; row 1 is new law, rows 2..8 the walk."""
    base, steps, target = builtin_piecemeal_steps(table, params_by_year, pop_year, base_year)
    opening, walk = steps[0], steps[1:]
    rows: list[StepRow] = []
    new = params_by_year[pop_year]
    for group in GROUPS:
        est = eligibility(pop, pop_year, group, new, scenario,
                          children_year=opening.children_year, mode=mode)
        rows.append(StepRow(1, opening.label, group, est.proportion(target)))
    for row in piecemeal(pop, pop_year, base, walk, target, scenario, mode):
        rows.append(StepRow(row.step + 1, row.label, row.group, row.proportion))
    rows.sort(key=lambda r: (r.step, r.group.value))
    return rows


# ---------------------------------------------------------------------------
# Parity, pricing-out, sweeps


@dataclass(frozen=True)
class PricedOutResult:
    full_relief_old: int
    priced_out: int

    @property
    def proportion_priced_out(self) -> Fraction:
        if self.full_relief_old == 0:
            raise ZeroDivisionError("no households qualified for full relief at baseline")
        return Fraction(self.priced_out, self.full_relief_old)


def priced_out(
    pop: PopulationTable,
    year: int,
    group: ParentalGroup,
    params_parity: ProgramParameters,
    new_ctc,
    scenario: Scenario,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> PricedOutResult:
    """Households losing full relief when the credit maximum rises alone.

    Baseline: full relief via either pathway under parity parameters
    (categories c and d). A household is priced out when its income falls
    below the full-relief threshold recomputed with the larger credit
    maximum and the refundable maximum left unchanged.
    """
    new_ctc = as_money(new_ctc)
    if params_parity.actc_per_child != params_parity.ctc_per_child:
        raise ValidationError("priced-out baseline requires parity parameters")
    if new_ctc <= params_parity.ctc_per_child:
        raise ValidationError("new credit maximum must exceed the baseline")
    est = eligibility(pop, year, group, params_parity, scenario, mode=mode)
    profile = profile_for(pop, group, scenario, params_parity.year)
    ts = thresholds(profile, params_parity, mode)
    cuts = _category_cut_bounds(ts, scenario.rule)
    raised = apply_overrides(params_parity, {"ctc_per_child": new_ctc}, strict=False)
    new_threshold = refund_credit_threshold(
        raised.ctc_per_child * profile.children, profile, raised, mode
    )
    new_cut = cut_income(new_threshold, strictly_above=False, rule=scenario.rule)
    bins = pop.bins(year, group)
    c_lo, d_hi = cuts[ReliefCategory.FULL_ACTC][0], cuts[ReliefCategory.FULL_CTC][1]
    old_full = est.counts[ReliefCategory.FULL_ACTC] + est.counts[ReliefCategory.FULL_CTC]
    lost = _mass_between(bins, c_lo, min(new_cut, d_hi))
    return PricedOutResult(full_relief_old=old_full, priced_out=lost)


def _category_cut_bounds(ts, rule) -> dict[ReliefCategory, tuple[int, int]]:
    cuts = category_cuts(ts, rule)
    edges = [0] + [min(c, INCOME_CEILING) for c in cuts] + [INCOME_CEILING]
    return {cat: (edges[i], max(edges[i], edges[i + 1])) for i, cat in enumerate(CATEGORY_ORDER)}


def credit_size_sweep(
    pop: PopulationTable,
    year: int,
    credit_values: Sequence,
    scenario: Scenario,
    params: ProgramParameters,
    parity: bool = True,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> list[tuple[Fraction, ParentalGroup, Fraction]]:
    """Full-relief share per (credit maximum, group).

    With `parity` the refundable maximum tracks the credit maximum;
    otherwise it stays at its baseline value.
    """
    credits = [as_money(c) for c in credit_values]
    if not credits or any(c <= 0 for c in credits):
        raise ValidationError("credit values must be positive and nonempty")
    rows = []
    for credit in credits:
        overrides: dict[str, object] = {"ctc_per_child": credit}
        if parity:
            overrides["actc_per_child"] = credit
        swapped = apply_overrides(params, overrides, strict=False)
        for group in GROUPS:
            share = full_relief_proportion(pop, year, group, swapped, scenario,
                                           children_year=params.year, mode=mode)
            rows.append((credit, group, share))
    return rows


@dataclass(frozen=True)
class ParityResult:
    """Full-relief eligibility before and after refundable-credit parity."""

    before: Mapping[ParentalGroup, Fraction]
    after: Mapping[ParentalGroup, Fraction]

    def gap_before(self) -> Fraction:
        return self.before[ParentalGroup.SINGLE_FATHER] - self.before[ParentalGroup.SINGLE_MOTHER]

    def gap_after(self) -> Fraction:
        return self.after[ParentalGroup.SINGLE_FATHER] - self.after[ParentalGroup.SINGLE_MOTHER]


def restore_parity(
    pop: PopulationTable,
    year: int,
    params: ProgramParameters,
    scenario: Scenario,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> ParityResult:
    """Raise the refundable maximum to the credit maximum and re-measure.

    "Before" measures who realizes the full envisioned benefit through the
    pathways able to deliver it: when the refundable maximum falls short of
    the credit maximum that is the credit pathway alone (category d); at
    parity either pathway qualifies, making the operation a no-op. "After"
    is full relief via either pathway under parity.
    """
    if params.actc_per_child == params.ctc_per_child:
        before = {
            g: full_relief_proportion(pop, year, g, params, scenario,
                                      children_year=params.year, mode=mode)
            for g in GROUPS
        }
    else:
        before = {
            g: eligibility(pop, year, g, params, scenario, mode=mode).proportion(
                ReliefCategory.FULL_CTC)
            for g in GROUPS
        }
    at_parity = apply_overrides(params, {"actc_per_child": params.ctc_per_child})
    after = {
        g: full_relief_proportion(pop, year, g, at_parity, scenario,
                                  children_year=params.year, mode=mode)
        for g in GROUPS
    }
    return ParityResult(before=before, after=after)


@dataclass(frozen=True)
class EliminationResult:
    """Access gained by removing the refundability floor."""

    deltas: Mapping[ParentalGroup, Fraction]
    gaining_households: int


def eliminate_refundability(
    pop: PopulationTable,
    year: int,
    params: ProgramParameters,
    scenario: Scenario,
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> EliminationResult:
    """Everyone below the refundability floor gains access when it is removed."""
    deltas = {}
    gaining = 0
    for group in GROUPS:
        est = eligibility(pop, year, group, params, scenario, mode=mode)
        deltas[group] = est.proportion(ReliefCategory.INELIGIBLE_LOW)
        gaining += est.counts[ReliefCategory.INELIGIBLE_LOW]
    return EliminationResult(deltas=deltas, gaining_households=gaining)


@dataclass(frozen=True)
class DependentGapResult:
    """Single-father vs single-mother full-credit gap under two children conventions."""

    fixed_one: Mapping[ParentalGroup, Fraction]
    group_average: Mapping[ParentalGroup, Fraction]

    def gap_fixed(self) -> Fraction:
        return self.fixed_one[ParentalGroup.SINGLE_FATHER] - self.fixed_one[ParentalGroup.SINGLE_MOTHER]

    def gap_average(self) -> Fraction:
        return self.group_average[ParentalGroup.SINGLE_FATHER] - self.group_average[ParentalGroup.SINGLE_MOTHER]

    def widening(self) -> Fraction:
        return self.gap_average() - self.gap_fixed()


def dependent_gap(
    pop: PopulationTable,
    params_by_year: Mapping[int, ProgramParameters],
    years: Iterable[int] = range(2003, 2018),
    mode: LiabilityMode = LiabilityMode.EXACT,
) -> DependentGapResult:
    """Average full-credit eligibility with one child vs group-average children.

    Both conventions keep the conservative upper-bound bin rule so the only
    moving part is the number of dependents.
    """
    years = list(years)
    singles = (ParentalGroup.SINGLE_FATHER, ParentalGroup.SINGLE_MOTHER)
    fixed: dict[ParentalGroup, Fraction] = {}
    averaged: dict[ParentalGroup, Fraction] = {}
    for group in singles:
        fixed_vals = []
        avg_vals = []
        for year in years:
            params = params_by_year[year]
            one = HouseholdProfile.one_child(group)
            ts = thresholds(one, params, mode)
            est = classify(pop, year, group, ts, BoundRule.UPPER, Scenario.S1)
            fixed_vals.append(est.proportion(ReliefCategory.FULL_CTC))
            many = HouseholdProfile(group, pop.average_children(year, group))
            ts2 = thresholds(many, params, mode)
            est2 = classify(pop, year, group, ts2, BoundRule.UPPER, Scenario.S1)
            avg_vals.append(est2.proportion(ReliefCategory.FULL_CTC))
        fixed[group] = sum(fixed_vals, Fraction(0)) / len(years)
        averaged[group] = sum(avg_vals, Fraction(0)) / len(years)
    return DependentGapResult(fixed_one=fixed, group_average=averaged)
