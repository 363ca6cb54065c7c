"""Monte Carlo engine: determinism, pairing, and agreement with closed form.

The two regression means below were frozen at seed 42 and cross-checked
against a 10^7-path run with an unrelated generator (numpy PCG64): both sit
within 2 standard errors of that independent estimate.
"""

from __future__ import annotations

import numpy as np
import pytest

from monthlysum import (
    ContractSpec,
    MarketParams,
    McConfig,
    empirical_cumulants,
    price_ms,
    simulate_ms,
    simulate_msln,
)
from monthlysum.montecarlo import BLOCK
from monthlysum.rng import path_normals

MARKET = MarketParams(rate=0.03, dividend_yield=0.02, sigma=0.20, term=1.0, periods=12)
CAP_ONLY = ContractSpec(cap=0.025)


class TestRegressionPoints:
    def test_ms_at_seed_42(self):
        res = simulate_ms(CAP_ONLY, MARKET, McConfig(paths=100_000, seed=42))
        assert res.mean == pytest.approx(0.008331608822928242, rel=1e-13)
        assert res.stderr == pytest.approx(8.532348920204459e-05, rel=1e-13)
        assert res.paths_used == 100_000

    def test_msln_at_seed_42(self):
        res = simulate_msln(CAP_ONLY, MARKET, McConfig(paths=100_000, seed=42))
        assert res.mean == pytest.approx(0.008056090339917775, rel=1e-13)
        assert res.stderr == pytest.approx(8.750447941944331e-05, rel=1e-13)


class TestDeterminism:
    def test_thread_count_does_not_change_results(self):
        cfg = McConfig(paths=20_000, seed=7)
        base = simulate_ms(CAP_ONLY, MARKET, cfg, threads=1)
        for threads in (2, 8):
            again = simulate_ms(CAP_ONLY, MARKET, cfg, threads=threads)
            assert again.mean == base.mean
            assert again.stderr == base.stderr

    def test_runs_are_reproducible(self):
        cfg = McConfig(paths=10_000, seed=123)
        a = simulate_msln(CAP_ONLY, MARKET, cfg)
        b = simulate_msln(CAP_ONLY, MARKET, cfg)
        assert a == b

    def test_seed_changes_results(self):
        a = simulate_ms(CAP_ONLY, MARKET, McConfig(paths=10_000, seed=1))
        b = simulate_ms(CAP_ONLY, MARKET, McConfig(paths=10_000, seed=2))
        assert a.mean != b.mean

    def test_partial_final_block(self):
        # a path count that is not a multiple of BLOCK still fills every slot
        cfg = McConfig(paths=BLOCK + 37, seed=5)
        res = simulate_ms(CAP_ONLY, MARKET, cfg)
        assert res.paths_used == BLOCK + 37
        assert np.isfinite(res.mean) and np.isfinite(res.stderr)


class TestCommonRandomNumbers:
    def test_shared_stream_reuses_draws(self):
        # with CRN both payoffs see identical normals, so with a huge cap and
        # log payoff vs simple payoff removed, the estimates correlate; here
        # just check the stream roles by comparing to explicit draws
        cfg = McConfig(paths=64, seed=11, common_random_numbers=True)
        res_shared_ms = simulate_ms(CAP_ONLY, MARKET, cfg)
        res_shared_again = simulate_ms(CAP_ONLY, MARKET, cfg)
        assert res_shared_ms == res_shared_again

    def test_private_streams_decorrelate(self):
        shared = McConfig(paths=10_000, seed=11, common_random_numbers=True)
        private = McConfig(paths=10_000, seed=11, common_random_numbers=False)
        gap_shared = abs(
            simulate_ms(CAP_ONLY, MARKET, shared).mean
            - simulate_msln(CAP_ONLY, MARKET, shared).mean
        )
        gap_private = abs(
            simulate_ms(CAP_ONLY, MARKET, private).mean
            - simulate_msln(CAP_ONLY, MARKET, private).mean
        )
        # the CRN gap estimate carries far less noise than the private one;
        # at these settings the true gap is ~3e-4 while private-stream noise
        # is ~1e-4 per leg, so this ordering is stable though not certain
        assert gap_shared < gap_private + 5e-4


class TestAntithetic:
    def test_pairs_mirror_the_base_draws(self):
        cfg = McConfig(paths=8, seed=3, antithetic=True)
        from monthlysum.montecarlo import _block_normals
        from monthlysum.rng import STREAM_SHARED

        z = _block_normals(cfg, MARKET, STREAM_SHARED, 0, 8)
        base = path_normals(3, 0, 4, MARKET.periods, STREAM_SHARED)
        np.testing.assert_array_equal(z[0::2], base)
        np.testing.assert_array_equal(z[1::2], -base)

    def test_variance_reduction_on_default_contract(self):
        plain = simulate_ms(CAP_ONLY, MARKET, McConfig(paths=40_000, seed=21))
        paired = simulate_ms(
            CAP_ONLY, MARKET, McConfig(paths=40_000, seed=21, antithetic=True)
        )
        assert paired.stderr < plain.stderr

    def test_antithetic_estimate_is_consistent(self):
        paired = simulate_ms(
            CAP_ONLY, MARKET, McConfig(paths=200_000, seed=17, antithetic=True)
        )
        truth = 0.008491354678513101
        assert abs(paired.mean - truth) < 4.0 * paired.stderr

    def test_config_validation(self):
        with pytest.raises(ValueError, match="even"):
            McConfig(paths=101, antithetic=True)
        with pytest.raises(ValueError, match="at least 4"):
            McConfig(paths=2, antithetic=True)


class TestAgainstIndependentTruth:
    def test_ms_mean_within_sampling_error(self):
        res = simulate_ms(CAP_ONLY, MARKET, McConfig(paths=100_000, seed=42))
        truth = 0.008491354678513101
        assert abs(res.mean - truth) < 4.0 * res.stderr

    def test_msln_mean_within_sampling_error(self):
        res = simulate_msln(CAP_ONLY, MARKET, McConfig(paths=100_000, seed=42))
        truth = 0.008214896778542332
        assert abs(res.mean - truth) < 4.0 * res.stderr

    def test_msln_approaches_closed_form(self):
        closed = price_ms(CAP_ONLY, MARKET).total
        res = simulate_msln(CAP_ONLY, MARKET, McConfig(paths=400_000, seed=42))
        # the expansion truncates at first order, so allow analytic bias of
        # a few epsilon1^2 on top of the sampling error
        assert abs(res.mean - closed) < 4.0 * res.stderr + 3e-4


class TestEmpiricalCumulants:
    def test_matches_analytic_cumulants(self):
        from monthlysum import closed_form_moments, cumulants_from_moments

        analytic = cumulants_from_moments(closed_form_moments(MARKET, CAP_ONLY))
        est = empirical_cumulants(CAP_ONLY, MARKET, McConfig(paths=300_000, seed=42))
        assert est.iota1 == pytest.approx(analytic.iota1, rel=1e-2)
        assert est.iota2 == pytest.approx(analytic.iota2, rel=2e-2)
        assert est.iota3 == pytest.approx(analytic.iota3, rel=2e-1)

    def test_path_floor_enforced(self):
        with pytest.raises(ValueError, match="10\\^4"):
            empirical_cumulants(CAP_ONLY, MARKET, McConfig(paths=5_000, seed=1))

    def test_antithetic_rejected(self):
        cfg = McConfig(paths=20_000, seed=1, antithetic=True)
        with pytest.raises(ValueError, match="antithetic"):
            empirical_cumulants(CAP_ONLY, MARKET, cfg)


class TestConfigGuards:
    def test_path_minimum(self):
        with pytest.raises(ValueError, match="paths"):
            McConfig(paths=1)

    def test_seed_range(self):
        with pytest.raises(ValueError, match="seed"):
            McConfig(paths=100, seed=-1)
        with pytest.raises(ValueError, match="seed"):
            McConfig(paths=100, seed=2**64)

    def test_thread_minimum(self):
        with pytest.raises(ValueError, match="threads"):
            simulate_ms(CAP_ONLY, MARKET, McConfig(paths=100), threads=0)
