"""Generosity vs accessibility: parity, pricing-out, floor removal, sweeps.

Four related what-ifs on the 2017/2018 data: who gets priced out of full
relief when only the credit maximum doubles; how refundable parity narrows
the father-mother gap; who gains when the refundability floor is removed;
and how full-relief eligibility erodes as the per-child maximum grows.
"""

from pathlib import Path

from ctcsim import ParentalGroup, Scenario, load_params, load_population
from ctcsim.counterfactual import (
    credit_size_sweep,
    eliminate_refundability,
    priced_out,
    restore_parity,
)

DATA = Path(__file__).resolve().parent.parent / "data"

params_by_year = load_params(DATA / "params.json")
pop = load_population(DATA / "population.csv", DATA / "children.csv")

print("== priced out when the credit maximum doubles (2017 rules) ==")
for group in ParentalGroup:
    result = priced_out(pop, 2017, group, params_by_year[2017], 2000, Scenario.S1)
    print(f"  {group.value:<14} {result.priced_out:>10,} of {result.full_relief_old:>10,}"
          f"  ({float(result.proportion_priced_out):6.2%})")

print("\n== refundable parity in 2018 ==")
for scenario in Scenario:
    result = restore_parity(pop, 2018, params_by_year[2018], scenario)
    print(f"  scenario {scenario.value}:"
          f" father-mother gap {float(result.gap_before()):6.2%}"
          f" -> {float(result.gap_after()):6.2%}")

print("\n== removing the refundability floor (2018) ==")
for scenario in Scenario:
    result = eliminate_refundability(pop, 2018, params_by_year[2018], scenario)
    deltas = "  ".join(f"{g.value} +{float(result.deltas[g]):5.2%}" for g in ParentalGroup)
    print(f"  scenario {scenario.value}: {deltas}"
          f"  ({result.gaining_households:,} households gain access)")

print("\n== full relief by credit size, 2018, scenario s1 ==")
rows = credit_size_sweep(pop, 2018, [500, 1000, 1400, 2000, 3000, 3600],
                         Scenario.S1, params_by_year[2018])
print(f"  {'credit':>7} " + " ".join(f"{g.value:>14}" for g in ParentalGroup))
by_credit = {}
for credit, group, share in rows:
    by_credit.setdefault(int(credit), {})[group] = share
for credit, shares in sorted(by_credit.items()):
    cells = " ".join(f"{float(shares[g]):14.4f}" for g in ParentalGroup)
    print(f"  {credit:>7} {cells}")
