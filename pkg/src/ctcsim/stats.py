"""Least squares with heteroskedasticity-robust covariance, dummy designs.

The solver is QR-based (no normal-equations inversion); rank problems are
detected from the pivoted R factor and reported with the offending column
names. Robust covariance follows the sandwich form with the HC1
small-sample scaling by default (HC0 available).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import linalg

from .errors import RankDeficient, ValidationError
from .params import ParentalGroup

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class PanelObservation:
    year: int
    group: ParentalGroup
    outcome: float


@dataclass(frozen=True)
class RegressionResult:
    names: tuple[str, ...]
    estimates: np.ndarray
    cov: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    r_squared: float
    nobs: int
    cov_type: str

    def estimate(self, name: str) -> float:
        return float(self.estimates[self.names.index(name)])

    def se(self, name: str) -> float:
        idx = self.names.index(name)
        return float(np.sqrt(max(self.cov[idx, idx], 0.0)))

    def robust_se(self) -> dict[str, float]:
        return {n: self.se(n) for n in self.names}

    def params(self) -> dict[str, float]:
        return {n: float(b) for n, b in zip(self.names, self.estimates)}


def ols(
    columns: Mapping[str, Sequence[float]],
    y: Sequence[float],
    cov_type: str = "HC1",
) -> RegressionResult:
    """Least squares of `y` on the named columns, robust covariance.

    Columns enter the design in mapping order. Raises RankDeficient naming
    the collinear columns when the design is not full rank.
    """
    if cov_type not in ("HC0", "HC1"):
        raise ValidationError(f"unsupported covariance type {cov_type!r}")
    names = tuple(columns)
    X = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    yv = np.asarray(y, dtype=float)
    n, k = X.shape
    if yv.shape != (n,):
        raise ValidationError("outcome length does not match design rows")
    if n < k:
        raise RankDeficient(f"{n} observations cannot identify {k} coefficients")

    Q, R, piv = linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    scale_ref = diag[0] if diag.size else 0.0
    dependent = [i for i, d in enumerate(diag) if d <= RANK_RTOL * scale_ref]
    if scale_ref == 0.0 or dependent:
        bad = sorted(names[piv[i]] for i in (dependent or range(k)))
        raise RankDeficient(f"collinear design columns: {', '.join(bad)}")

    beta_piv = linalg.solve_triangular(R, Q.T @ yv)
    beta = np.empty(k)
    beta[piv] = beta_piv
    fitted = X @ beta
    resid = yv - fitted

    r_inv = linalg.solve_triangular(R, np.eye(k))
    bread_piv = r_inv @ r_inv.T  # (X'X)^-1 in pivoted order
    perm = np.empty(k, dtype=int)
    perm[piv] = np.arange(k)
    bread = bread_piv[np.ix_(perm, perm)]

    meat = (X * (resid**2)[:, None]).T @ X
    cov = bread @ meat @ bread
    if cov_type == "HC1" and n > k:
        cov = cov * (n / (n - k))
    cov = (cov + cov.T) / 2.0

    ss_res = float(resid @ resid)
    centered = yv - yv.mean()
    ss_tot = float(centered @ centered)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    return RegressionResult(
        names=names,
        estimates=beta,
        cov=cov,
        residuals=resid,
        fitted=fitted,
        r_squared=r_squared,
        nobs=n,
        cov_type=cov_type,
    )


def build_panel(
    rows: Iterable[tuple[int, ParentalGroup, float | Fraction]]
) -> list[PanelObservation]:
    """Panel observations from (year, group, outcome) rows, one per cell."""
    panel = []
    seen = set()
    for year, group, outcome in rows:
        key = (year, group)
        if key in seen:
            raise ValidationError(f"duplicate panel cell {year}, {group.value}")
        seen.add(key)
        panel.append(PanelObservation(year, group, float(outcome)))
    return panel


def fixed_effects(
    panel: Sequence[PanelObservation],
    baseline_year: int = 2017,
    baseline_group: ParentalGroup = ParentalGroup.MARRIED,
    cov_type: str = "HC1",
) -> RegressionResult:
    """Saturated group/year dummy regression with all interactions.

    The baseline year and group are omitted to keep the design full rank,
    so each group dummy reads as that group's difference from the baseline
    group in the baseline year.
    """
    years = sorted({o.year for o in panel})
    groups = [g for g in ParentalGroup if any(o.group is g for o in panel)]
    if baseline_year not in years:
        raise ValidationError(f"baseline year {baseline_year} absent from panel")
    if baseline_group not in groups:
        raise ValidationError(f"baseline group {baseline_group.value} absent from panel")
    for year in years:
        for group in groups:
            if not any(o.year == year and o.group is group for o in panel):
                raise ValidationError(f"panel is missing cell {year}, {group.value}")

    other_groups = [g for g in groups if g is not baseline_group]
    other_years = [y for y in years if y != baseline_year]
    columns: dict[str, list[float]] = {"const": []}
    for g in other_groups:
        columns[g.value] = []
    for y in other_years:
        columns[f"year_{y}"] = []
    for g in other_groups:
        for y in other_years:
            columns[f"{g.value}:year_{y}"] = []

    y_vec = []
    for obs in panel:
        columns["const"].append(1.0)
        for g in other_groups:
            columns[g.value].append(1.0 if obs.group is g else 0.0)
        for yr in other_years:
            columns[f"year_{yr}"].append(1.0 if obs.year == yr else 0.0)
        for g in other_groups:
            for yr in other_years:
                columns[f"{g.value}:year_{yr}"].append(
                    1.0 if (obs.group is g and obs.year == yr) else 0.0
                )
        y_vec.append(obs.outcome)
    return ols(columns, y_vec, cov_type=cov_type)


def did(
    panel: Sequence[PanelObservation],
    treated: ParentalGroup = ParentalGroup.SINGLE_MOTHER,
    control: ParentalGroup = ParentalGroup.SINGLE_FATHER,
    post_year: int = 2018,
    cov_type: str = "HC1",
) -> RegressionResult:
    """Two-group difference-in-differences; `treated_post` is the estimate."""
    rows = [o for o in panel if o.group in (treated, control)]
    if not any(o.year >= post_year for o in rows):
        raise ValidationError("panel has no post-period observations")
    if not any(o.year < post_year for o in rows):
        raise ValidationError("panel has no pre-period observations")
    for g in (treated, control):
        if not any(o.group is g for o in rows):
            raise ValidationError(f"panel is missing group {g.value}")
    columns: dict[str, list[float]] = {"const": [], "treated": [], "post": [], "treated_post": []}
    y_vec = []
    for obs in rows:
        t = 1.0 if obs.group is treated else 0.0
        p = 1.0 if obs.year >= post_year else 0.0
        columns["const"].append(1.0)
        columns["treated"].append(t)
        columns["post"].append(p)
        columns["treated_post"].append(t * p)
        y_vec.append(obs.outcome)
    return ols(columns, y_vec, cov_type=cov_type)
