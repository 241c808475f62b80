"""Isolate what each 2018 rule change did to full-credit eligibility.

The walk starts from the old rules applied to the new population, then
cumulatively switches one parameter at a time (credit maximum, deduction
package, refundability floor, phaseout start, refundable maximum, rate
brackets) until the full new-law configuration is reached. The endpoint
must exactly reproduce step 1, which applies the new rules outright.
"""

from pathlib import Path

from ctcsim import Scenario, load_params, load_population
from ctcsim.counterfactual import run_piecemeal_table

DATA = Path(__file__).resolve().parent.parent / "data"

params_by_year = load_params(DATA / "params.json")
pop = load_population(DATA / "population.csv", DATA / "children.csv")

for table, title in (("1a", "full credit (category d)"),
                     ("1b", "full refundable credit (category c)")):
    print(f"== walk {table}: {title} ==")
    for scenario in Scenario:
        rows = run_piecemeal_table(table, pop, params_by_year, scenario)
        print(f"  scenario {scenario.value}")
        by_step = {}
        for r in rows:
            by_step.setdefault((r.step, r.label), {})[r.group.value] = float(r.proportion)
        for (step, label), shares in sorted(by_step.items()):
            cells = "  ".join(f"{shares[g]:7.4f}" for g in
                              ("married", "single_father", "single_mother"))
            print(f"    step {step}  {cells}  {label}")
    print()
