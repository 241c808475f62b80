from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctcsim import (
    ParentalGroup,
    ReliefCategory,
    Scenario,
    build_panel,
    did,
    eligibility,
    fixed_effects,
    ols,
)
from ctcsim.errors import RankDeficient, ValidationError


def naive_sandwich(X, y, scale_hc1=True):
    """Dense normal-equations oracle for the robust covariance."""
    X = np.asarray(X, float)
    y = np.asarray(y, float)
    n, k = X.shape
    xtx_inv = np.linalg.inv(X.T @ X)
    beta = xtx_inv @ X.T @ y
    e = y - X @ beta
    meat = X.T @ np.diag(e**2) @ X
    cov = xtx_inv @ meat @ xtx_inv
    if scale_hc1 and n > k:
        cov *= n / (n - k)
    return beta, cov


def fixture_panel(pop, params_by_year, categories, scenario=Scenario.S1, years=range(2003, 2018)):
    rows = []
    for year in years:
        for group in ParentalGroup:
            est = eligibility(pop, year, group, params_by_year[year], scenario)
            share = sum((est.proportion(c) for c in categories), Fraction(0))
            rows.append((year, group, share))
    return build_panel(rows)


class TestOls:
    def test_exact_line(self):
        res = ols({"const": [1, 1], "x": [1, 2]}, [2, 4])
        assert res.estimate("x") == pytest.approx(2.0, abs=1e-12)
        assert np.allclose(res.residuals, 0.0, atol=1e-12)

    def test_three_point_closed_form(self):
        # Hand-derived: beta = (5/6, 3/2) for y = [1, 2, 4] on x = [0, 1, 2].
        columns = {"const": [1, 1, 1], "x": [0, 1, 2]}
        y = [1, 2, 4]
        res = ols(columns, y)
        assert res.estimate("const") == pytest.approx(5 / 6, abs=1e-12)
        assert res.estimate("x") == pytest.approx(3 / 2, abs=1e-12)
        _, cov = naive_sandwich(np.column_stack([columns["const"], columns["x"]]), y)
        assert np.allclose(res.cov, cov, rtol=1e-10, atol=1e-14)

    def test_hc0_option(self):
        columns = {"const": [1, 1, 1, 1], "x": [0.0, 1.0, 2.0, 5.0]}
        y = [0.5, 1.9, 4.2, 9.9]
        res = ols(columns, y, cov_type="HC0")
        _, cov = naive_sandwich(np.column_stack(list(columns.values())), y, scale_hc1=False)
        assert np.allclose(res.cov, cov, rtol=1e-10, atol=1e-14)

    def test_unknown_cov_type(self):
        with pytest.raises(ValidationError):
            ols({"const": [1, 1]}, [1, 2], cov_type="HC3")

    def test_rank_deficiency_names_columns(self):
        columns = {"const": [1, 1, 1], "a": [1, 2, 3], "a_copy": [1, 2, 3]}
        with pytest.raises(RankDeficient, match="a"):
            ols(columns, [1, 2, 3])

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(40, 4))
        y = rng.normal(size=40)
        res = ols({f"x{i}": X[:, i] for i in range(4)}, y)
        assert np.max(np.abs(X.T @ res.residuals)) < 1e-9

    @given(seed=st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_sandwich_matches_naive_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n, k = 30, 3
        X = np.column_stack([np.ones(n), rng.normal(size=(n, k - 1))])
        y = X @ rng.normal(size=k) + rng.normal(size=n) * (1 + np.abs(X[:, 1]))
        res = ols({"const": X[:, 0], "x1": X[:, 1], "x2": X[:, 2]}, y)
        beta, cov = naive_sandwich(X, y)
        assert np.allclose(res.estimates, beta, rtol=1e-10, atol=1e-12)
        assert np.allclose(res.cov, cov, rtol=1e-10, atol=1e-14)

    def test_covariance_symmetric_psd(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(25, 3))
        y = rng.normal(size=25)
        res = ols({f"x{i}": X[:, i] for i in range(3)}, y)
        assert np.allclose(res.cov, res.cov.T)
        assert np.min(np.linalg.eigvalsh(res.cov)) > -1e-12


class TestFixedEffects:
    def test_saturated_design_reproduces_cells(self, pop, params_by_year):
        panel = fixture_panel(pop, params_by_year, [ReliefCategory.FULL_CTC])
        res = fixed_effects(panel, baseline_year=2017)
        assert res.r_squared == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(res.residuals)) < 1e-10
        outcomes = np.array([o.outcome for o in panel])
        assert np.allclose(res.fitted, outcomes, atol=1e-10)

    def test_group_coefficient_is_baseline_year_difference(self, pop, params_by_year):
        panel = fixture_panel(pop, params_by_year, [ReliefCategory.FULL_CTC])
        res = fixed_effects(panel, baseline_year=2017)
        cells = {(o.year, o.group): o.outcome for o in panel}
        for group in (ParentalGroup.SINGLE_FATHER, ParentalGroup.SINGLE_MOTHER):
            expected = cells[(2017, group)] - cells[(2017, ParentalGroup.MARRIED)]
            assert res.estimate(group.value) == pytest.approx(expected, abs=1e-10)

    def test_single_mother_full_credit_shortfall(self, pop, params_by_year):
        # Benchmark-calibrated data: the 2017 mother-vs-married difference.
        panel = fixture_panel(pop, params_by_year, [ReliefCategory.FULL_CTC])
        res = fixed_effects(panel, baseline_year=2017)
        assert res.estimate("single_mother") == pytest.approx(-0.2728, abs=5e-4)

    def test_combined_full_relief_sign_pattern(self, pop, params_by_year):
        panel = fixture_panel(
            pop, params_by_year, [ReliefCategory.FULL_ACTC, ReliefCategory.FULL_CTC]
        )
        res = fixed_effects(panel, baseline_year=2017)
        assert res.estimate("single_father") < 0
        assert res.estimate("single_mother") < 0

    def test_identical_groups_zero_coefficients(self):
        rows = []
        for year in (2015, 2016, 2017):
            for group in ParentalGroup:
                rows.append((year, group, 0.3 + 0.01 * (year - 2015)))
        res = fixed_effects(build_panel(rows), baseline_year=2017)
        assert res.estimate("single_father") == pytest.approx(0.0, abs=1e-12)
        assert res.estimate("single_mother") == pytest.approx(0.0, abs=1e-12)

    def test_incomplete_panel_rejected(self):
        rows = [(2016, ParentalGroup.MARRIED, 0.5), (2017, ParentalGroup.MARRIED, 0.6),
                (2017, ParentalGroup.SINGLE_FATHER, 0.4)]
        with pytest.raises(ValidationError):
            fixed_effects(build_panel(rows), baseline_year=2017)

    def test_duplicate_cell_rejected(self):
        with pytest.raises(ValidationError):
            build_panel([(2017, ParentalGroup.MARRIED, 0.5),
                         (2017, ParentalGroup.MARRIED, 0.6)])


class TestDid:
    @staticmethod
    def synthetic_panel(effect=0.0, shift=0.0):
        rows = []
        for year in range(2003, 2019):
            post = year >= 2018
            base = 0.40 + 0.005 * (year - 2003)
            rows.append((year, ParentalGroup.SINGLE_FATHER, base + (shift if post else 0.0)))
            rows.append((
                year,
                ParentalGroup.SINGLE_MOTHER,
                base - 0.07 + (shift if post else 0.0) + (effect if post else 0.0),
            ))
        return build_panel(rows)

    def test_injected_effect_recovered_exactly(self):
        res = did(self.synthetic_panel(effect=0.05))
        assert res.estimate("treated_post") == pytest.approx(0.05, abs=1e-12)

    def test_parallel_shift_gives_zero(self):
        res = did(self.synthetic_panel(shift=0.04))
        assert res.estimate("treated_post") == pytest.approx(0.0, abs=1e-12)

    def test_equals_four_cell_formula(self, pop, params_by_year):
        panel = fixture_panel(pop, params_by_year, [ReliefCategory.FULL_CTC],
                              years=range(2003, 2019))
        res = did(panel, post_year=2018)
        cells = {(o.year, o.group): o.outcome for o in panel}
        sm = [cells[(y, ParentalGroup.SINGLE_MOTHER)] for y in range(2003, 2018)]
        sf = [cells[(y, ParentalGroup.SINGLE_FATHER)] for y in range(2003, 2018)]
        expected = (cells[(2018, ParentalGroup.SINGLE_MOTHER)] - np.mean(sm)) - (
            cells[(2018, ParentalGroup.SINGLE_FATHER)] - np.mean(sf)
        )
        assert res.estimate("treated_post") == pytest.approx(expected, abs=1e-12)

    def test_new_rules_favored_fathers_on_fixture(self, pop, params_by_year):
        panel = fixture_panel(pop, params_by_year, [ReliefCategory.FULL_CTC],
                              years=range(2003, 2019))
        res = did(panel, post_year=2018)
        assert res.estimate("treated_post") < 0

    def test_missing_period_rejected(self):
        rows = [(2017, ParentalGroup.SINGLE_FATHER, 0.5),
                (2017, ParentalGroup.SINGLE_MOTHER, 0.4)]
        with pytest.raises(ValidationError):
            did(build_panel(rows), post_year=2018)
