"""Classify the shipped population into the six relief categories.

Compares the conservative one-child/upper-bound scenario (S1) with the
moderate average-children/middle-bound scenario (S2) for a few years, and
shows the generalizability flag attached to each category estimate.
"""

from pathlib import Path

from ctcsim import ParentalGroup, ReliefCategory, Scenario, load_params, load_population
from ctcsim.counterfactual import eligibility

DATA = Path(__file__).resolve().parent.parent / "data"

params_by_year = load_params(DATA / "params.json")
pop = load_population(DATA / "population.csv", DATA / "children.csv")

for year in (2003, 2017, 2018):
    print(f"== {year} ==")
    header = "  ".join(f"{c.value:>7}" for c in ReliefCategory)
    print(f"  {'group':<14} {'scen':<5} {header}")
    for group in ParentalGroup:
        for scenario in Scenario:
            est = eligibility(pop, year, group, params_by_year[year], scenario)
            shares = "  ".join(f"{float(est.proportion(c)):7.4f}" for c in ReliefCategory)
            print(f"  {group.value:<14} {scenario.value:<5} {shares}")
    print()

est = eligibility(pop, 2018, ParentalGroup.SINGLE_MOTHER, params_by_year[2018], Scenario.S1)
print("2018 single mothers, S1 — how far each estimate generalizes:")
for cat in ReliefCategory:
    print(f"  {cat.value} {cat.label:<28} {est.flags[cat].value}")
