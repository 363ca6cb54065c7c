"""Grid validation: the corrected forms pass, the defective ones are caught."""

from __future__ import annotations

import json

import pytest

from monthlysum.moments import CORRECTED, PRINTED
from monthlysum.validation import (
    CORRECTION_REL_TOL,
    FORMULA_IDS,
    MOMENT_REL_TOL,
    GridPoint,
    default_grid,
    run_validation,
    validate_point,
    write_discrepancy_log,
)

CAP_POINT = GridPoint(sigma=0.20, cap=0.025, floor=None, rate=0.03, div_yield=0.02)
FLOOR_POINT = GridPoint(sigma=0.20, cap=0.025, floor=-0.05, rate=0.03, div_yield=0.02)

# a small but representative slice of the full grid: both contract kinds,
# low and high volatility, zero and nonzero carry
SUBGRID = (
    GridPoint(sigma=0.05, cap=0.005, floor=None, rate=0.0, div_yield=0.0),
    GridPoint(sigma=0.05, cap=0.005, floor=-0.10, rate=0.0, div_yield=0.0),
    CAP_POINT,
    FLOOR_POINT,
    GridPoint(sigma=0.40, cap=0.10, floor=0.0, rate=0.06, div_yield=0.02),
    GridPoint(sigma=0.40, cap=0.10, floor=None, rate=0.06, div_yield=0.02),
)


class TestGrid:
    def test_dimensions(self):
        grid = default_grid()
        assert len(grid) == 1200
        assert len(set(grid)) == 1200

    def test_point_helpers_round_trip(self):
        market = FLOOR_POINT.market()
        contract = FLOOR_POINT.contract()
        assert market.sigma == 0.20
        assert market.periods == 12
        assert contract.floor == -0.05
        d = FLOOR_POINT.as_dict()
        assert d["cap"] == 0.025 and d["floor"] == -0.05 and d["term"] == 1.0


class TestCorrectedVariant:
    def test_subgrid_passes_at_default_tolerances(self):
        report = run_validation(SUBGRID)
        assert report.passed
        assert report.points == len(SUBGRID)
        assert report.variant == CORRECTED
        assert report.moment_tol == MOMENT_REL_TOL
        assert report.correction_tol == CORRECTION_REL_TOL
        assert not report.discrepancies
        for formula, err in report.max_rel_err.items():
            assert formula in FORMULA_IDS
            assert err < 1e-10, formula

    def test_single_point_has_no_failures(self):
        failures, discrepancies, errs = validate_point(CAP_POINT)
        assert not failures
        assert not discrepancies
        assert set(errs) == {"I1_cap", "I2_cap", "I3_cap", "ms1_closed"}

    def test_floored_point_reports_floored_formulas(self):
        _, _, errs = validate_point(FLOOR_POINT)
        assert set(errs) == {"I1_capfloor", "I2_capfloor", "I3_capfloor", "ms1_closed"}


class TestPrintedVariant:
    def test_defective_formulas_fail_and_sound_ones_pass(self):
        report = run_validation(SUBGRID, variant=PRINTED)
        assert not report.passed
        failing = {f.check for f in report.failures}
        # I1_cap and I3_cap are sound as printed and must never fail
        assert "I1_cap" not in failing
        assert "I3_cap" not in failing
        assert {"I2_cap", "ms1_closed"} <= failing
        assert {"I1_capfloor", "I2_capfloor", "I3_capfloor"} <= failing

    def test_discrepancies_collected_by_default(self):
        report = run_validation((CAP_POINT,), variant=PRINTED)
        formulas = {d.formula for d in report.discrepancies}
        assert formulas == {"I2_cap", "ms1_closed"}
        for d in report.discrepancies:
            assert d.printed != d.corrected
            assert d.rel_gap > MOMENT_REL_TOL

    def test_discrepancy_records_carry_all_three_values(self):
        report = run_validation((FLOOR_POINT,), variant=PRINTED)
        by_formula = {d.formula: d for d in report.discrepancies}
        assert set(by_formula) == {"I1_capfloor", "I2_capfloor", "I3_capfloor", "ms1_closed"}
        d = by_formula["I1_capfloor"]
        # the corrected value is the one quadrature confirms
        assert d.corrected == pytest.approx(d.quadrature, rel=1e-9)
        assert abs(d.printed - d.quadrature) > 1e-6

    def test_loose_tolerance_hides_small_defects(self):
        # at this point every printed defect sits below 60 percent relative,
        # so a huge tolerance turns the report green without touching code
        report = run_validation((CAP_POINT,), variant=PRINTED, tol=1e2)
        assert report.passed
        assert report.moment_tol == 1e2


class TestDiscrepancyLog:
    def test_jsonl_round_trip(self, tmp_path):
        report = run_validation((CAP_POINT, FLOOR_POINT), variant=PRINTED)
        path = tmp_path / "discrepancies.jsonl"
        count = write_discrepancy_log(report.discrepancies, str(path))
        assert count == len(report.discrepancies) == 6
        lines = path.read_text().splitlines()
        assert len(lines) == count
        records = [json.loads(line) for line in lines]
        for rec in records:
            assert {"formula", "sigma", "cap", "floor", "printed", "corrected", "quadrature"} <= set(
                rec
            )
        cap_only = [r for r in records if r["floor"] is None]
        assert {r["formula"] for r in cap_only} == {"I2_cap", "ms1_closed"}

    def test_empty_log(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        assert write_discrepancy_log((), str(path)) == 0
        assert path.read_text() == ""


class TestArguments:
    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError, match="variant"):
            run_validation(SUBGRID, variant="latest")
