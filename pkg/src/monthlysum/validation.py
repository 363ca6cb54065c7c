"""Grid validation of the closed forms against quadrature ground truth.

Sweeps a 1200-point parameter grid (volatility x cap x floor x rate x
dividend yield, one-year monthly contracts) and checks, at every point,

* each closed-form moment against adaptive quadrature (1e-9 relative by
  default);
* the closed-form first-order correction against its quadrature route
  (1e-8 relative by default).

The variant under test is ``"corrected"`` by default; selecting
``"printed"`` points the same checks at the uncorrected transcriptions,
which is how their defects are demonstrated: each printed formula that
genuinely differs fails against quadrature, and a discrepancy record
(printed value, corrected value, quadrature value) is collected per
offending grid point. ``write_discrepancy_log`` serializes those records
as JSON lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .contracts import ContractSpec, MarketParams
from .moments import (
    CORRECTED,
    PRINTED,
    capped_floored_moment_closed,
    capped_moment_closed,
    moment_quadrature,
)
from .pricer import edgeworth_params, ms_correction_closed, ms_correction_quadrature

__all__ = [
    "CORRECTION_REL_TOL",
    "MOMENT_REL_TOL",
    "CheckFailure",
    "Discrepancy",
    "GridPoint",
    "ValidationReport",
    "default_grid",
    "run_validation",
    "validate_point",
    "write_discrepancy_log",
]

MOMENT_REL_TOL = 1e-9
CORRECTION_REL_TOL = 1e-8

#: Relative errors are measured against max(|reference|, this floor) so
#: near-zero references do not blow up the ratio.
REL_DENOM_FLOOR = 1e-12

#: Formula ids, in report order.
FORMULA_IDS = (
    "I1_cap",
    "I2_cap",
    "I3_cap",
    "I1_capfloor",
    "I2_capfloor",
    "I3_capfloor",
    "ms1_closed",
)

_SIGMAS = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40)
_CAPS = (0.005, 0.01, 0.025, 0.05, 0.10)
_FLOORS = (None, -0.10, -0.05, -0.025, 0.0)
_RATES = (0.0, 0.03, 0.06)
_DIV_YIELDS = (0.0, 0.02)


@dataclass(frozen=True)
class GridPoint:
    """One parameter tuple of the validation sweep."""

    sigma: float
    cap: float
    floor: float | None
    rate: float
    div_yield: float
    term: float = 1.0
    periods: int = 12

    def market(self) -> MarketParams:
        return MarketParams(
            rate=self.rate,
            dividend_yield=self.div_yield,
            sigma=self.sigma,
            term=self.term,
            periods=self.periods,
        )

    def contract(self) -> ContractSpec:
        return ContractSpec(cap=self.cap, floor=self.floor)

    def as_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "cap": self.cap,
            "floor": self.floor,
            "rate": self.rate,
            "div_yield": self.div_yield,
            "term": self.term,
            "periods": self.periods,
        }


def default_grid() -> tuple[GridPoint, ...]:
    """The full 8 x 5 x 5 x 3 x 2 = 1200 point grid."""
    return tuple(
        GridPoint(sigma=s, cap=c, floor=f, rate=r, div_yield=q)
        for s in _SIGMAS
        for c in _CAPS
        for f in _FLOORS
        for r in _RATES
        for q in _DIV_YIELDS
    )


@dataclass(frozen=True)
class CheckFailure:
    """A closed-form value that missed its quadrature reference."""

    point: GridPoint
    check: str
    got: float
    want: float
    rel_err: float


@dataclass(frozen=True)
class Discrepancy:
    """A printed formula value that disagrees with its corrected form."""

    formula: str
    point: GridPoint
    printed: float
    corrected: float
    quadrature: float

    @property
    def rel_gap(self) -> float:
        return _rel(self.printed, self.corrected)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a grid sweep."""

    points: int
    variant: str
    moment_tol: float
    correction_tol: float
    failures: tuple[CheckFailure, ...]
    max_rel_err: dict
    discrepancies: tuple[Discrepancy, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _rel(got: float, want: float) -> float:
    return abs(got - want) / max(abs(want), REL_DENOM_FLOOR)


def validate_point(
    point: GridPoint,
    variant: str = CORRECTED,
    moment_tol: float = MOMENT_REL_TOL,
    correction_tol: float = CORRECTION_REL_TOL,
    collect_discrepancies: bool = False,
) -> tuple[list[CheckFailure], list[Discrepancy], dict]:
    """Run every check at one grid point.

    Returns (failures, discrepancies, max relative error per formula id).
    The checked value is the ``variant`` closed form against quadrature;
    discrepancy records always compare printed against corrected.
    """
    market = point.market()
    contract = point.contract()
    floored = contract.floor is not None
    closed_fn = capped_floored_moment_closed if floored else capped_moment_closed
    suffix = "capfloor" if floored else "cap"

    failures: list[CheckFailure] = []
    discrepancies: list[Discrepancy] = []
    errs: dict = {}

    for n in (1, 2, 3):
        formula = f"I{n}_{suffix}"
        reference = moment_quadrature(n, market, contract)
        corrected = closed_fn(n, market, contract)
        tested = corrected if variant == CORRECTED else closed_fn(n, market, contract, variant)
        err = _rel(tested, reference)
        errs[formula] = err
        if err > moment_tol:
            failures.append(
                CheckFailure(point=point, check=formula, got=tested, want=reference, rel_err=err)
            )
        if collect_discrepancies:
            printed = tested if variant == PRINTED else closed_fn(n, market, contract, PRINTED)
            if _rel(printed, corrected) > moment_tol:
                discrepancies.append(
                    Discrepancy(
                        formula=formula,
                        point=point,
                        printed=printed,
                        corrected=corrected,
                        quadrature=reference,
                    )
                )

    ep = edgeworth_params(contract, market)
    reference = ms_correction_quadrature(ep, market)
    corrected = ms_correction_closed(ep, market)
    tested = corrected if variant == CORRECTED else ms_correction_closed(ep, market, variant)
    err = _rel(tested, reference)
    errs["ms1_closed"] = err
    if err > correction_tol:
        failures.append(
            CheckFailure(point=point, check="ms1_closed", got=tested, want=reference, rel_err=err)
        )
    if collect_discrepancies:
        printed = tested if variant == PRINTED else ms_correction_closed(ep, market, PRINTED)
        if _rel(printed, corrected) > correction_tol:
            discrepancies.append(
                Discrepancy(
                    formula="ms1_closed",
                    point=point,
                    printed=printed,
                    corrected=corrected,
                    quadrature=reference,
                )
            )
    return failures, discrepancies, errs


def run_validation(
    grid: Sequence[GridPoint] | None = None,
    variant: str = CORRECTED,
    tol: float | None = None,
    collect_discrepancies: bool | None = None,
) -> ValidationReport:
    """Sweep the grid and aggregate the results.

    ``tol`` overrides both per-check tolerances at once (the CLI's
    ``--tol``). ``collect_discrepancies`` defaults to True exactly when the
    printed variant is under test.
    """
    if variant not in (CORRECTED, PRINTED):
        raise ValueError(f"variant must be {CORRECTED!r} or {PRINTED!r}, got {variant!r}")
    if grid is None:
        grid = default_grid()
    if collect_discrepancies is None:
        collect_discrepancies = variant == PRINTED
    moment_tol = MOMENT_REL_TOL if tol is None else tol
    correction_tol = CORRECTION_REL_TOL if tol is None else tol

    all_failures: list[CheckFailure] = []
    all_discrepancies: list[Discrepancy] = []
    max_err: dict = {}
    for point in grid:
        failures, discrepancies, errs = validate_point(
            point, variant, moment_tol, correction_tol, collect_discrepancies
        )
        all_failures.extend(failures)
        all_discrepancies.extend(discrepancies)
        for formula, err in errs.items():
            max_err[formula] = max(max_err.get(formula, 0.0), err)
    return ValidationReport(
        points=len(grid),
        variant=variant,
        moment_tol=moment_tol,
        correction_tol=correction_tol,
        failures=tuple(all_failures),
        max_rel_err=max_err,
        discrepancies=tuple(all_discrepancies),
    )


def write_discrepancy_log(discrepancies: Iterable[Discrepancy], path: str) -> int:
    """Write discrepancy records as JSON lines; returns the record count."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for d in discrepancies:
            record = {"formula": d.formula}
            record.update(d.point.as_dict())
            record.update(printed=d.printed, corrected=d.corrected, quadrature=d.quadrature)
            fh.write(json.dumps(record) + "\n")
            count += 1
    return count
