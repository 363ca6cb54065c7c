"""Input validation and derived quantities of the parameter containers."""

from __future__ import annotations

import math

import pytest

from monthlysum import ContractSpec, MarketParams


def make_market(**overrides) -> MarketParams:
    params = dict(rate=0.03, dividend_yield=0.02, sigma=0.20, term=1.0, periods=12)
    params.update(overrides)
    return MarketParams(**params)


class TestMarketParams:
    def test_derived_quantities(self):
        market = make_market()
        assert market.dt == pytest.approx(1.0 / 12.0, rel=1e-15)
        assert market.mu == pytest.approx(0.03 - 0.02 - 0.5 * 0.04, rel=1e-15)

    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(ValueError, match="sigma"):
            make_market(sigma=0.0)
        with pytest.raises(ValueError, match="sigma"):
            make_market(sigma=-0.2)

    def test_rejects_nonpositive_term(self):
        with pytest.raises(ValueError, match="term"):
            make_market(term=0.0)

    def test_rejects_bad_periods(self):
        with pytest.raises(ValueError, match="periods"):
            make_market(periods=0)
        with pytest.raises(ValueError, match="periods"):
            make_market(periods=2.5)

    def test_rejects_nonfinite_fields(self):
        with pytest.raises(ValueError):
            make_market(rate=float("nan"))
        with pytest.raises(ValueError):
            make_market(sigma=float("inf"))

    def test_frozen(self):
        market = make_market()
        with pytest.raises(AttributeError):
            market.rate = 0.05


class TestContractSpec:
    def test_log_bounds(self):
        contract = ContractSpec(cap=0.025, floor=-0.05)
        assert contract.log_cap == pytest.approx(math.log1p(0.025), rel=1e-15)
        assert contract.log_floor == pytest.approx(math.log1p(-0.05), rel=1e-15)

    def test_floorless(self):
        contract = ContractSpec(cap=0.025)
        assert contract.floor is None
        assert contract.log_floor is None

    def test_zero_cap_is_legal(self):
        assert ContractSpec(cap=0.0).cap == 0.0

    def test_rejects_cap_at_or_below_minus_one(self):
        with pytest.raises(ValueError, match="cap"):
            ContractSpec(cap=-1.0)

    def test_rejects_floor_not_below_cap(self):
        with pytest.raises(ValueError, match="floor"):
            ContractSpec(cap=0.025, floor=0.025)
        with pytest.raises(ValueError, match="floor"):
            ContractSpec(cap=0.025, floor=0.05)

    def test_floor_message_names_both_bounds(self):
        with pytest.raises(ValueError, match=r"floor=0\.05.*cap=0\.025"):
            ContractSpec(cap=0.025, floor=0.05)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ContractSpec(cap=float("nan"))
        with pytest.raises(ValueError):
            ContractSpec(cap=0.025, floor=float("-inf"))
