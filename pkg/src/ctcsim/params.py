"""Program parameters: loading, validation, overrides.

A parameter file is a JSON array with one record per (year, filing status).
Money fields are integer dollars; rates are decimal literals parsed exactly.
Loaded parameter sets are frozen dataclasses and safe to share across
threads; counterfactuals derive new sets through :func:`apply_overrides`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from .errors import MissingYear, ParseError, ValidationError
from .money import as_money, as_rate


class FilingStatus(Enum):
    MARRIED_JOINT = "married_joint"
    HEAD_OF_HOUSEHOLD = "head_of_household"


class ParentalGroup(Enum):
    MARRIED = "married"
    SINGLE_FATHER = "single_father"
    SINGLE_MOTHER = "single_mother"

    @property
    def filing_status(self) -> FilingStatus:
        if self is ParentalGroup.MARRIED:
            return FilingStatus.MARRIED_JOINT
        return FilingStatus.HEAD_OF_HOUSEHOLD

    @property
    def adults(self) -> int:
        return 2 if self is ParentalGroup.MARRIED else 1


@dataclass(frozen=True)
class Bracket:
    """One marginal-rate band: applies up to `upper` taxable dollars (None = no cap)."""

    upper: Fraction | None
    rate: Fraction


@dataclass(frozen=True)
class BracketSchedule:
    brackets: tuple[Bracket, ...]

    def validate(self) -> None:
        if not self.brackets:
            raise ValidationError("bracket schedule is empty")
        prev_upper = Fraction(0)
        prev_rate = None
        for i, b in enumerate(self.brackets):
            last = i == len(self.brackets) - 1
            if (b.upper is None) != last:
                raise ValidationError("only the last bracket may omit its upper bound")
            if b.upper is not None and b.upper <= prev_upper:
                raise ValidationError("bracket upper bounds must be strictly increasing")
            if not (0 <= b.rate <= 1):
                raise ValidationError(f"bracket rate {b.rate} outside [0, 1]")
            if prev_rate is not None and b.rate < prev_rate:
                raise ValidationError("bracket rates must be nondecreasing")
            if b.upper is not None:
                prev_upper = b.upper
            prev_rate = b.rate

    def tax(self, taxable: Fraction) -> Fraction:
        """Tax due on `taxable` income (0 if not positive)."""
        if taxable <= 0:
            return Fraction(0)
        total = Fraction(0)
        lower = Fraction(0)
        for b in self.brackets:
            upper = taxable if b.upper is None else min(b.upper, taxable)
            if upper > lower:
                total += (upper - lower) * b.rate
            if b.upper is None or taxable <= b.upper:
                break
            lower = b.upper
        return total

    def taxable_for(self, target: Fraction) -> Fraction:
        """Minimal taxable income whose tax is at least `target`.

        Raises ValidationError if the schedule tops out below `target`
        (possible only when the last rate is zero).
        """
        if target <= 0:
            return Fraction(0)
        lower = Fraction(0)
        tax_at_lower = Fraction(0)
        for b in self.brackets:
            tax_at_upper = tax_at_lower if b.upper is None else tax_at_lower + (b.upper - lower) * b.rate
            if b.upper is None or tax_at_upper >= target:
                if b.rate == 0:
                    raise ValidationError(f"tax target {target} unreachable under schedule")
                return lower + (target - tax_at_lower) / b.rate
            lower, tax_at_lower = b.upper, tax_at_upper
        raise ValidationError(f"tax target {target} unreachable under schedule")


@dataclass(frozen=True)
class FilingParams:
    standard_deduction: Fraction
    exemption_per_person: Fraction
    brackets: BracketSchedule
    phaseout_start: Fraction


@dataclass(frozen=True)
class ProgramParameters:
    """All program rules for one year, both filing statuses."""

    year: int
    filing: Mapping[FilingStatus, FilingParams]
    ctc_per_child: Fraction
    actc_per_child: Fraction
    refund_threshold: Fraction
    refund_rate: Fraction
    phaseout_rate: Fraction

    def for_status(self, status: FilingStatus) -> FilingParams:
        return self.filing[status]

    def validate(self, strict: bool = True) -> None:
        """Check invariants; `strict=False` permits actc > ctc for counterfactuals."""
        if set(self.filing) != set(FilingStatus):
            raise ValidationError(f"year {self.year}: both filing statuses required")
        if self.ctc_per_child <= 0:
            raise ValidationError(f"year {self.year}: ctc_per_child must be positive")
        if self.actc_per_child <= 0:
            raise ValidationError(f"year {self.year}: actc_per_child must be positive")
        if strict and self.actc_per_child > self.ctc_per_child:
            raise ValidationError(
                f"year {self.year}: actc_per_child exceeds ctc_per_child"
            )
        if not (0 < self.refund_rate <= 1):
            raise ValidationError(f"year {self.year}: refund_rate outside (0, 1]")
        if not (0 < self.phaseout_rate < 1):
            raise ValidationError(f"year {self.year}: phaseout_rate outside (0, 1)")
        if self.refund_threshold < 0:
            raise ValidationError(f"year {self.year}: refund_threshold negative")
        for status, fp in self.filing.items():
            label = f"year {self.year} {status.value}"
            if fp.standard_deduction < 0:
                raise ValidationError(f"{label}: standard_deduction negative")
            if fp.exemption_per_person < 0:
                raise ValidationError(f"{label}: exemption_per_person negative")
            if fp.phaseout_start <= 0:
                raise ValidationError(f"{label}: phaseout_start must be positive")
            try:
                fp.brackets.validate()
            except ValidationError as exc:
                raise ValidationError(f"{label}: {exc}") from exc


_SCALAR_MONEY = ("ctc_per_child", "actc_per_child", "refund_threshold")
_SCALAR_RATES = ("refund_rate", "phaseout_rate")
_STATUS_MONEY = ("standard_deduction", "exemption_per_person", "phaseout_start")

OverrideValue = Union[int, Fraction, str, Mapping, Sequence, BracketSchedule]


def _parse_brackets(raw) -> BracketSchedule:
    if isinstance(raw, BracketSchedule):
        return raw
    brackets = []
    for entry in raw:
        if isinstance(entry, Bracket):
            brackets.append(entry)
            continue
        upper = entry.get("upper")
        brackets.append(
            Bracket(
                upper=None if upper is None else as_money(upper),
                rate=as_rate(entry["rate"]),
            )
        )
    return BracketSchedule(tuple(brackets))


def _record_to_filing(rec: Mapping) -> FilingParams:
    return FilingParams(
        standard_deduction=as_money(rec["standard_deduction"]),
        exemption_per_person=as_money(rec["exemption_per_person"]),
        brackets=_parse_brackets(rec["brackets"]),
        phaseout_start=as_money(rec["phaseout_start"]),
    )


def load_params(path: str | Path) -> dict[int, ProgramParameters]:
    """Load and validate a parameter file; returns {year: ProgramParameters}."""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            raw = json.load(fh, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise ParseError(f"{path}: expected a top-level array of year records")

    by_year: dict[int, dict[FilingStatus, Mapping]] = {}
    for rec in raw:
        try:
            year = int(rec["year"])
            status = FilingStatus(rec["filing_status"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: bad record header: {exc}") from exc
        slot = by_year.setdefault(year, {})
        if status in slot:
            raise ParseError(f"{path}: duplicate record for year {year} {status.value}")
        slot[status] = rec

    out: dict[int, ProgramParameters] = {}
    for year in sorted(by_year):
        recs = by_year[year]
        if set(recs) != set(FilingStatus):
            raise ValidationError(f"year {year}: both filing statuses required")
        shared = {}
        for field in _SCALAR_MONEY + _SCALAR_RATES:
            values = set()
            for rec in recs.values():
                try:
                    v = as_money(rec[field]) if field in _SCALAR_MONEY else as_rate(rec[field])
                except (KeyError, TypeError) as exc:
                    raise ParseError(f"year {year}: missing or bad field {field!r}") from exc
                values.add(v)
            if len(values) != 1:
                raise ValidationError(f"year {year}: field {field!r} differs across filing statuses")
            shared[field] = values.pop()
        try:
            filing = {status: _record_to_filing(rec) for status, rec in recs.items()}
        except KeyError as exc:
            raise ParseError(f"year {year}: missing field {exc}") from exc
        params = ProgramParameters(
            year=year,
            filing=filing,
            ctc_per_child=shared["ctc_per_child"],
            actc_per_child=shared["actc_per_child"],
            refund_threshold=shared["refund_threshold"],
            refund_rate=shared["refund_rate"],
            phaseout_rate=shared["phaseout_rate"],
        )
        params.validate()
        out[year] = params
    return out


def params_for_year(params_by_year: Mapping[int, ProgramParameters], year: int) -> ProgramParameters:
    try:
        return params_by_year[year]
    except KeyError:
        raise MissingYear(f"year {year} not present in parameter data") from None


def _rate_token(rate: Fraction) -> float:
    # Rates in shipped data are short decimals; float repr round-trips them.
    return float(rate)


def _money_token(amount: Fraction) -> int:
    if amount.denominator != 1:
        raise ValidationError(f"cannot serialize non-integer dollar amount {amount}")
    return amount.numerator


def serialize_params(params_by_year: Mapping[int, ProgramParameters]) -> str:
    """Render parameters back to the JSON file schema (stable ordering)."""
    records = []
    for year in sorted(params_by_year):
        p = params_by_year[year]
        for status in FilingStatus:
            fp = p.for_status(status)
            brackets = []
            for b in fp.brackets.brackets:
                entry: dict = {}
                if b.upper is not None:
                    entry["upper"] = _money_token(b.upper)
                entry["rate"] = _rate_token(b.rate)
                brackets.append(entry)
            records.append(
                {
                    "year": year,
                    "filing_status": status.value,
                    "standard_deduction": _money_token(fp.standard_deduction),
                    "exemption_per_person": _money_token(fp.exemption_per_person),
                    "brackets": brackets,
                    "ctc_per_child": _money_token(p.ctc_per_child),
                    "actc_per_child": _money_token(p.actc_per_child),
                    "refund_threshold": _money_token(p.refund_threshold),
                    "refund_rate": _rate_token(p.refund_rate),
                    "phaseout_start": _money_token(fp.phaseout_start),
                    "phaseout_rate": _rate_token(p.phaseout_rate),
                }
            )
    return json.dumps(records, indent=2) + "\n"


def apply_overrides(
    base: ProgramParameters,
    overrides: Mapping[str, OverrideValue],
    strict: bool = True,
) -> ProgramParameters:
    """Return a copy of `base` with named fields replaced.

    Per-filing-status fields (standard_deduction, exemption_per_person,
    phaseout_start, brackets) accept either one value applied to both
    statuses or a mapping keyed by FilingStatus. The result is re-validated;
    `strict=False` allows actc_per_child > ctc_per_child, which some
    counterfactual walks pass through.
    """
    fields = dict(
        ctc_per_child=base.ctc_per_child,
        actc_per_child=base.actc_per_child,
        refund_threshold=base.refund_threshold,
        refund_rate=base.refund_rate,
        phaseout_rate=base.phaseout_rate,
    )
    filing = {s: base.for_status(s) for s in FilingStatus}

    def per_status(value, coerce):
        if isinstance(value, Mapping) and any(isinstance(k, FilingStatus) for k in value):
            return {s: coerce(value[s]) for s in FilingStatus}
        return {s: coerce(value) for s in FilingStatus}

    for name, value in overrides.items():
        if name in _SCALAR_MONEY:
            fields[name] = as_money(value)
        elif name in _SCALAR_RATES:
            fields[name] = as_rate(value)
        elif name in _STATUS_MONEY:
            for s, v in per_status(value, as_money).items():
                filing[s] = replace(filing[s], **{name: v})
        elif name == "brackets":
            for s, v in per_status(value, _parse_brackets).items():
                filing[s] = replace(filing[s], brackets=v)
        else:
            raise ValidationError(f"unknown override field {name!r}")

    params = ProgramParameters(year=base.year, filing=filing, **fields)
    params.validate(strict=strict)
    return params


def overrides_to(base_year_params: ProgramParameters, target: ProgramParameters, names: Iterable[str]) -> dict:
    """Build an override mapping that copies the named fields from `target`."""
    out: dict = {}
    for name in names:
        if name in _SCALAR_MONEY + _SCALAR_RATES:
            out[name] = getattr(target, name)
        elif name in _STATUS_MONEY:
            out[name] = {s: getattr(target.for_status(s), name) for s in FilingStatus}
        elif name == "brackets":
            out[name] = {s: target.for_status(s).brackets for s in FilingStatus}
        else:
            raise ValidationError(f"unknown override field {name!r}")
    return out
