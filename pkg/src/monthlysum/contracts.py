"""Market parameters and contract terms for Monthly Sum options.

A Monthly Sum option pays max(sum of N capped (optionally floored) monthly
returns, 0) at expiry. ``MarketParams`` carries the constant-volatility
risk-neutral dynamics, ``ContractSpec`` the per-month cap and floor applied
to each return before summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class MarketParams:
    """Constant-volatility market under the risk-neutral measure.

    Parameters
    ----------
    rate : float
        Annualized risk-free rate, continuous compounding.
    dividend_yield : float
        Annualized continuous dividend yield.
    sigma : float
        Annualized volatility, strictly positive.
    term : float
        Time to expiry in years, strictly positive.
    periods : int
        Number of return periods (months) in the term, at least 1.
    """

    rate: float
    dividend_yield: float
    sigma: float
    term: float
    periods: int

    def __post_init__(self) -> None:
        _require_finite("rate", self.rate)
        _require_finite("dividend_yield", self.dividend_yield)
        _require_finite("sigma", self.sigma)
        _require_finite("term", self.term)
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.term <= 0.0:
            raise ValueError(f"term must be positive, got {self.term}")
        if not isinstance(self.periods, int) or self.periods < 1:
            raise ValueError(f"periods must be an integer >= 1, got {self.periods!r}")

    @property
    def dt(self) -> float:
        """Length of one return period in years (term / periods)."""
        return self.term / self.periods

    @property
    def mu(self) -> float:
        """Risk-neutral drift of the monthly log return: rate - dividend_yield - sigma^2/2."""
        return self.rate - self.dividend_yield - 0.5 * self.sigma * self.sigma


@dataclass(frozen=True)
class ContractSpec:
    """Per-month cap and optional floor on the simple return.

    Both bounds act on the simple return S(t_m)/S(t_{m-1}) - 1; the derived
    ``log_cap`` and ``log_floor`` are the equivalent bounds on the log
    return, ln(1 + bound). A floor, when present, must sit strictly below
    the cap, and both must exceed -1 (a return of -100% is not boundable).
    """

    cap: float
    floor: float | None = None

    def __post_init__(self) -> None:
        _require_finite("cap", self.cap)
        if self.cap <= -1.0:
            raise ValueError(f"cap must exceed -1, got {self.cap}")
        if self.floor is not None:
            _require_finite("floor", self.floor)
            if self.floor <= -1.0:
                raise ValueError(f"floor must exceed -1, got {self.floor}")
            if self.floor >= self.cap:
                raise ValueError(
                    f"floor must be strictly below cap, got floor={self.floor}, cap={self.cap}"
                )

    @property
    def log_cap(self) -> float:
        """Cap on the monthly log return, ln(1 + cap)."""
        return math.log1p(self.cap)

    @property
    def log_floor(self) -> float | None:
        """Floor on the monthly log return, ln(1 + floor), or None."""
        if self.floor is None:
            return None
        return math.log1p(self.floor)
