"""Monte Carlo valuation of the monthly-sum contract and its log variant.

Two payoffs are simulated on the same monthly Gaussian draws:

* ``simulate_ms``: the contract itself, max(sum of capped simple monthly
  returns, 0);
* ``simulate_msln``: the lognormal proxy the closed form actually prices,
  max(exp(sum of capped log monthly returns) - 1, 0).

Draws come from the counter-based generator in :mod:`monthlysum.rng`, so a
path's normals are a pure function of (seed, path index, stream id). Paths
are processed in fixed blocks of :data:`BLOCK`; threads only decide which
blocks run concurrently, each writing a disjoint slice of a preallocated
payoff array, and all reductions happen after assembly. Results are
therefore byte-identical for any thread count.

With ``common_random_numbers`` both payoffs read the shared stream, making
their difference a low-variance estimate of the capping-convention gap.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .contracts import ContractSpec, MarketParams
from .edgeworth import CumulantSet
from .rng import STREAM_MS, STREAM_MSLN, STREAM_SHARED, path_normals

__all__ = [
    "BLOCK",
    "McConfig",
    "McResult",
    "empirical_cumulants",
    "simulate_ms",
    "simulate_msln",
]

#: Paths per work unit. Fixed so the path-to-block assignment, and hence
#: every draw, is independent of the thread count. Even, so antithetic
#: pairs never straddle a block boundary.
BLOCK = 4096


@dataclass(frozen=True)
class McConfig:
    """Simulation controls.

    ``antithetic`` prices each pair (z, -z) together and averages within
    the pair before the variance is estimated; it requires at least two
    pairs. ``common_random_numbers`` points every payoff at the shared
    stream so that cross-payoff differences are computed on identical
    draws.
    """

    paths: int
    seed: int = 42
    antithetic: bool = False
    common_random_numbers: bool = True

    def __post_init__(self) -> None:
        if self.paths < 2:
            raise ValueError(f"paths must be at least 2, got {self.paths!r}")
        if self.antithetic:
            if self.paths % 2:
                raise ValueError(
                    f"antithetic pairing requires an even path count, got {self.paths!r}"
                )
            if self.paths < 4:
                raise ValueError(
                    f"antithetic pairing requires at least 4 paths, got {self.paths!r}"
                )
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be in [0, 2^64), got {self.seed!r}")


@dataclass(frozen=True)
class McResult:
    """Discounted price estimate with its standard error."""

    mean: float
    stderr: float
    paths_used: int


def _stream_for(private: int, cfg: McConfig) -> int:
    return STREAM_SHARED if cfg.common_random_numbers else private


def _block_normals(
    cfg: McConfig, market: MarketParams, stream: int, start: int, stop: int
) -> np.ndarray:
    """Monthly normals for paths [start, stop), honoring antithetic pairing."""
    count = market.periods
    if not cfg.antithetic:
        return path_normals(cfg.seed, start, stop - start, count, stream)
    # pair k occupies paths 2k and 2k+1; the odd path mirrors the even one
    base = path_normals(cfg.seed, start // 2, (stop - start) // 2, count, stream)
    z = np.empty((stop - start, count))
    z[0::2] = base
    z[1::2] = -base
    return z


def _fill_payoffs(
    contract: ContractSpec,
    market: MarketParams,
    cfg: McConfig,
    stream: int,
    log_payoff: bool,
    out: np.ndarray,
    start: int,
    stop: int,
) -> None:
    z = _block_normals(cfg, market, stream, start, stop)
    x = market.mu * market.dt + market.sigma * math.sqrt(market.dt) * z
    if log_payoff:
        np.minimum(x, contract.log_cap, out=x)
        if contract.floor is not None:
            np.maximum(x, contract.log_floor, out=x)
        out[start:stop] = np.maximum(np.expm1(x.sum(axis=1)), 0.0)
    else:
        r = np.expm1(x)
        np.minimum(r, contract.cap, out=r)
        if contract.floor is not None:
            np.maximum(r, contract.floor, out=r)
        out[start:stop] = np.maximum(r.sum(axis=1), 0.0)


def _run(
    contract: ContractSpec,
    market: MarketParams,
    cfg: McConfig,
    stream: int,
    log_payoff: bool,
    threads: int,
) -> McResult:
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads!r}")
    payoffs = np.empty(cfg.paths, dtype=np.float64)
    spans = [(s, min(s + BLOCK, cfg.paths)) for s in range(0, cfg.paths, BLOCK)]
    if threads == 1 or len(spans) == 1:
        for start, stop in spans:
            _fill_payoffs(contract, market, cfg, stream, log_payoff, payoffs, start, stop)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(
                    _fill_payoffs, contract, market, cfg, stream, log_payoff, payoffs, start, stop
                )
                for start, stop in spans
            ]
            for f in futures:
                f.result()

    samples = 0.5 * (payoffs[0::2] + payoffs[1::2]) if cfg.antithetic else payoffs
    discount = math.exp(-market.rate * market.term)
    mean = float(samples.mean())
    stderr = float(samples.std(ddof=1) / math.sqrt(samples.size))
    return McResult(mean=discount * mean, stderr=discount * stderr, paths_used=cfg.paths)


def simulate_ms(
    contract: ContractSpec, market: MarketParams, cfg: McConfig, threads: int = 1
) -> McResult:
    """Price the contract: discounted max(sum of capped simple returns, 0)."""
    return _run(contract, market, cfg, _stream_for(STREAM_MS, cfg), False, threads)


def simulate_msln(
    contract: ContractSpec, market: MarketParams, cfg: McConfig, threads: int = 1
) -> McResult:
    """Price the lognormal proxy: discounted max(exp(capped log sum) - 1, 0)."""
    return _run(contract, market, cfg, _stream_for(STREAM_MSLN, cfg), True, threads)


def empirical_cumulants(
    contract: ContractSpec, market: MarketParams, cfg: McConfig
) -> CumulantSet:
    """Unbiased cumulant estimates (k-statistics) of the capped log sum.

    Simulates the aggregate capped log return over the full term and
    returns k1, k2, k3 packed as a :class:`CumulantSet` scaled back to one
    period, i.e. each k divided by the number of periods, so the values are
    directly comparable to the analytic per-month cumulants.

    Requires at least 10^4 paths; below that the third k-statistic is too
    noisy to be meaningful for capped laws. Antithetic pairing is rejected
    because k-statistics are unbiased only for independent samples.
    """
    if cfg.paths < 10_000:
        raise ValueError(f"cumulant estimation requires at least 10^4 paths, got {cfg.paths!r}")
    if cfg.antithetic:
        raise ValueError("cumulant estimation requires independent paths; disable antithetic")
    sums = np.empty(cfg.paths, dtype=np.float64)
    stream = _stream_for(STREAM_MSLN, cfg)
    for start in range(0, cfg.paths, BLOCK):
        stop = min(start + BLOCK, cfg.paths)
        z = _block_normals(cfg, market, stream, start, stop)
        x = market.mu * market.dt + market.sigma * math.sqrt(market.dt) * z
        np.minimum(x, contract.log_cap, out=x)
        if contract.floor is not None:
            np.maximum(x, contract.log_floor, out=x)
        sums[start:stop] = x.sum(axis=1)
    n = market.periods
    return CumulantSet(
        iota1=float(stats.kstat(sums, 1)) / n,
        iota2=float(stats.kstat(sums, 2)) / n,
        iota3=float(stats.kstat(sums, 3)) / n,
    )
