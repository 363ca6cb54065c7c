"""Raw moments of the capped (and optionally floored) monthly log return.

Under constant volatility one month's log return is Gaussian with mean
m = mu*dt and standard deviation s = sigma*sqrt(dt). Capping (and flooring)
the return produces a mixed law: the Gaussian body restricted to
(log_floor, log_cap) plus point masses at the bounds. This module computes
its first three raw moments

    I_n = floor_mass * log_floor^n
          + integral of x^n over the Gaussian body
          + cap_mass * log_cap^n

two ways: by closed form, and by adaptive quadrature on the standardized
variable. The quadrature is the module's ground truth.

Each closed form exists in two variants. ``"corrected"`` (the default) is
the re-derived expression that agrees with quadrature to 1e-9 relative
across the validation grid. ``"printed"`` is the uncorrected transcription
the corrected forms replace; it is retained verbatim so the validation
suite can demonstrate numerically where it is defective (see
:mod:`monthlysum.validation` and the ``--printed-formulas`` CLI flag).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import erfc

from .contracts import ContractSpec, MarketParams
from .errors import DegenerateVolatilityError, QuadratureConvergenceError

__all__ = [
    "CORRECTED",
    "PRINTED",
    "MomentSet",
    "TruncationGeometry",
    "capped_floored_moment_closed",
    "capped_moment_closed",
    "closed_form_moments",
    "moment_quadrature",
    "quadrature_moments",
    "standard_normal_cdf",
    "standard_normal_pdf",
    "truncation_geometry",
]

CORRECTED = "corrected"
PRINTED = "printed"

#: Reject closed-form evaluation below this monthly volatility scale.
MIN_MONTHLY_VOL = 1e-12

#: Clip quadrature at +/- 12 standard deviations; the omitted tail mass is
#: below 1e-32, far under the 1e-12 relative tolerance.
TAIL_CLIP = 12.0

QUAD_REL_TOL = 1e-12
QUAD_SUBDIVISION_LIMIT = 200

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def standard_normal_cdf(z):
    """Standard normal CDF, accurate to about 1e-15 absolute everywhere.

    Evaluated as 0.5*erfc(-z/sqrt(2)) so the far tails do not suffer the
    cancellation a 0.5*(1 + erf(...)) form would. Accepts scalars or arrays;
    +inf and -inf map to 1.0 and 0.0.
    """
    out = 0.5 * erfc(np.negative(z) / _SQRT2)
    if np.ndim(z) == 0:
        return float(out)
    return out


def standard_normal_pdf(z):
    """Standard normal density."""
    z = np.asarray(z, dtype=float)
    out = _INV_SQRT_2PI * np.exp(-0.5 * z * z)
    if out.ndim == 0:
        return float(out)
    return out


def _monthly_scale(market: MarketParams) -> tuple[float, float]:
    """Mean and standard deviation (m, s) of the uncapped monthly log return."""
    s = market.sigma * math.sqrt(market.dt)
    if s < MIN_MONTHLY_VOL:
        raise DegenerateVolatilityError(
            f"sigma*sqrt(dt) = {s:.3e} is below {MIN_MONTHLY_VOL:.0e}; "
            "closed forms are ill-conditioned, use the Monte Carlo engine"
        )
    return market.mu * market.dt, s


@dataclass(frozen=True)
class TruncationGeometry:
    """Standardized bound abscissas and the point masses they carry.

    ``c_tilde`` and ``f_tilde`` are (log bound - m)/s; ``cap_mass`` is the
    probability of the uncapped return exceeding the cap (all of it collapses
    onto the cap), ``floor_mass`` likewise below the floor. ``mu_tilde`` is
    the standardized drift m/s = mu*sqrt(dt)/sigma.
    """

    c_tilde: float
    mu_tilde: float
    cap_mass: float
    f_tilde: float | None = None
    floor_mass: float | None = None


def truncation_geometry(market: MarketParams, contract: ContractSpec) -> TruncationGeometry:
    """Standardize the contract bounds against the monthly Gaussian."""
    m, s = _monthly_scale(market)
    c_tilde = (contract.log_cap - m) / s
    cap_mass = standard_normal_cdf(-c_tilde)
    if contract.floor is None:
        return TruncationGeometry(c_tilde=c_tilde, mu_tilde=m / s, cap_mass=cap_mass)
    f_tilde = (contract.log_floor - m) / s
    return TruncationGeometry(
        c_tilde=c_tilde,
        mu_tilde=m / s,
        cap_mass=cap_mass,
        f_tilde=f_tilde,
        floor_mass=standard_normal_cdf(f_tilde),
    )


@dataclass(frozen=True)
class MomentSet:
    """First three raw moments of the capped monthly log return.

    ``provenance`` records which route produced the values, ``"closed_form"``
    or ``"quadrature"``. The implied variance i2 - i1^2 must be positive.
    """

    i1: float
    i2: float
    i3: float
    provenance: str

    def __post_init__(self) -> None:
        if self.i2 - self.i1 * self.i1 <= 0.0:
            raise ValueError(
                f"moment set implies nonpositive variance: i1={self.i1!r}, i2={self.i2!r}"
            )


def _quad(fn, lo: float, hi: float, rel_tol: float = QUAD_REL_TOL) -> float:
    """Adaptive Gauss-Kronrod integration with a convergence check."""
    result = integrate.quad(
        fn, lo, hi, epsabs=1e-16, epsrel=rel_tol, limit=QUAD_SUBDIVISION_LIMIT, full_output=1
    )
    if len(result) > 3:
        # quad appends a message (and possibly an explanation) on trouble
        raise QuadratureConvergenceError(
            f"quadrature on [{lo:g}, {hi:g}] did not converge: {result[3]}"
        )
    return result[0]


def _quad_split(fn, lo: float, hi: float, interior: tuple[float, ...]) -> float:
    """Integrate piecewise, cutting at interior sign changes of the integrand.

    Sign-definite pieces keep the adaptive scheme from chasing cancellation
    it cannot resolve at the requested tolerance.
    """
    cuts = [lo] + [p for p in sorted(interior) if lo < p < hi] + [hi]
    return sum(_quad(fn, a, b) for a, b in zip(cuts[:-1], cuts[1:]))


def moment_quadrature(n: int, market: MarketParams, contract: ContractSpec) -> float:
    """n-th raw moment of the capped monthly log return by adaptive quadrature.

    Integrates (m + s*z)^n against the standard normal density between the
    standardized bounds (clipped at +/-12), then adds the bound atoms. This
    is the ground truth the closed forms are validated against.

    Args:
        n: moment order, 1, 2 or 3.
        market: market parameters.
        contract: cap and optional floor.

    Returns:
        I_n in units of log-return^n.

    Raises:
        QuadratureConvergenceError: tolerance not met within the budget.
        DegenerateVolatilityError: sigma*sqrt(dt) below the supported scale.
    """
    if n not in (1, 2, 3):
        raise ValueError(f"moment order must be 1, 2 or 3, got {n!r}")
    geo = truncation_geometry(market, contract)
    m, s = _monthly_scale(market)

    z_hi = min(geo.c_tilde, TAIL_CLIP)
    z_lo = -TAIL_CLIP
    total = contract.log_cap**n * geo.cap_mass
    if contract.floor is not None:
        z_lo = max(geo.f_tilde, z_lo)
        total += contract.log_floor**n * geo.floor_mass

    if z_hi > z_lo:
        def integrand(z: float) -> float:
            x = m + s * z
            return x**n * _INV_SQRT_2PI * math.exp(-0.5 * z * z)

        # odd powers of x = m + s*z flip sign at z = -m/s
        interior = (-geo.mu_tilde,) if n % 2 else ()
        total += _quad_split(integrand, z_lo, z_hi, interior)
    return total


def capped_moment_closed(
    n: int, market: MarketParams, contract: ContractSpec, variant: str = CORRECTED
) -> float:
    """Closed-form I_n for a cap-only contract.

    The corrected forms follow from the partial Gaussian moments
    int_{-inf}^{u} z^k phi(z) dz for k = 0..3; the printed variant of I_2
    carries exp(-c~^2) where the derivation requires exp(-c~^2/2).
    """
    if contract.floor is not None:
        raise ValueError("capped_moment_closed handles cap-only contracts; use capped_floored_moment_closed")
    _check_variant(variant)
    if n not in (1, 2, 3):
        raise ValueError(f"moment order must be 1, 2 or 3, got {n!r}")
    m, s = _monthly_scale(market)
    geo = truncation_geometry(market, contract)
    ct = geo.c_tilde
    cap_mass = geo.cap_mass
    cdf_c = standard_normal_cdf(ct)
    pdf_c = standard_normal_pdf(ct)
    c = contract.log_cap

    if variant == PRINTED:
        return _capped_moment_printed(n, market, ct, c)
    if n == 1:
        return m * cdf_c - s * pdf_c + c * cap_mass
    if n == 2:
        return (m * m + s * s) * cdf_c - (s * s * ct + 2.0 * m * s) * pdf_c + c * c * cap_mass
    return (
        (m * m * m + 3.0 * m * s * s) * cdf_c
        - (3.0 * m * m * s + 3.0 * m * s * s * ct + s * s * s * (ct * ct + 2.0)) * pdf_c
        + c * c * c * cap_mass
    )


def _capped_moment_printed(n: int, market: MarketParams, ct: float, c: float) -> float:
    """Verbatim uncorrected transcription of the cap-only moment formulas.

    I_1 and I_3 are sound (they agree with the corrected forms to rounding);
    I_2 carries the exp(-c~^2) defect.
    """
    sigma, dt, mu = market.sigma, market.dt, market.mu
    cdf_c = standard_normal_cdf(ct)
    ec = math.exp(-0.5 * ct * ct)
    if n == 1:
        return (
            -sigma * math.sqrt(dt / (2.0 * math.pi)) * ec
            + mu * dt * cdf_c
            + c * (1.0 - cdf_c)
        )
    if n == 2:
        return (
            sigma * sigma * dt * cdf_c
            # defective term: the exponent is printed without its 1/2
            - ct * _INV_SQRT_2PI * sigma * sigma * dt * math.exp(-ct * ct)
            - 2.0 * mu * sigma * dt * math.sqrt(dt / (2.0 * math.pi)) * ec
            + (mu * dt) ** 2 * cdf_c
            + c * c * (1.0 - cdf_c)
        )
    return (
        -(2.0 + ct * ct) * ec * math.sqrt((sigma * sigma * dt) ** 3 / (2.0 * math.pi))
        + 3.0 * mu * (sigma * dt) ** 2 * (cdf_c - ct * ec / math.sqrt(2.0 * math.pi))
        - 3.0 * (mu * dt) ** 2 * sigma * math.sqrt(dt / (2.0 * math.pi)) * ec
        + (mu * dt) ** 3 * cdf_c
        + c * c * c * (1.0 - cdf_c)
    )


def capped_floored_moment_closed(
    n: int, market: MarketParams, contract: ContractSpec, variant: str = CORRECTED
) -> float:
    """Closed-form I_n for a contract carrying both a cap and a floor.

    The printed variant reproduces two defects verbatim: the floor abscissa
    written with a spurious sqrt(2*pi) in its denominator, and, in I_2, the
    cross term's exponents written without their 1/2.
    """
    if contract.floor is None:
        raise ValueError("capped_floored_moment_closed requires a floored contract")
    _check_variant(variant)
    if n not in (1, 2, 3):
        raise ValueError(f"moment order must be 1, 2 or 3, got {n!r}")
    m, s = _monthly_scale(market)
    geo = truncation_geometry(market, contract)
    ct = geo.c_tilde
    c = contract.log_cap
    f = contract.log_floor

    if variant == PRINTED:
        return _floored_moment_printed(n, market, m, s, ct, f, c)

    ft = geo.f_tilde
    cdf_c, cdf_f = standard_normal_cdf(ct), standard_normal_cdf(ft)
    pdf_c, pdf_f = standard_normal_pdf(ct), standard_normal_pdf(ft)
    cap_mass = geo.cap_mass
    floor_mass = geo.floor_mass
    body = cdf_c - cdf_f

    if n == 1:
        return m * body + s * (pdf_f - pdf_c) + f * floor_mass + c * cap_mass
    if n == 2:
        return (
            (m * m + s * s) * body
            - s * s * (ct * pdf_c - ft * pdf_f)
            + 2.0 * m * s * (pdf_f - pdf_c)
            + f * f * floor_mass
            + c * c * cap_mass
        )
    return (
        (m * m * m + 3.0 * m * s * s) * body
        + 3.0 * m * m * s * (pdf_f - pdf_c)
        - 3.0 * m * s * s * (ct * pdf_c - ft * pdf_f)
        + s * s * s * ((ft * ft + 2.0) * pdf_f - (ct * ct + 2.0) * pdf_c)
        + f * f * f * floor_mass
        + c * c * c * cap_mass
    )


def _floored_moment_printed(
    n: int, market: MarketParams, m: float, s: float, ct: float, f: float, c: float
) -> float:
    """Verbatim uncorrected transcription of the floored moment formulas."""
    sigma, dt, mu = market.sigma, market.dt, market.mu
    # defective floor abscissa: sqrt(2*pi) does not belong in the denominator
    ft = (f - m) / math.sqrt(2.0 * math.pi * sigma * sigma * dt)
    cdf_c, cdf_f = standard_normal_cdf(ct), standard_normal_cdf(ft)
    ec, ef = math.exp(-0.5 * ct * ct), math.exp(-0.5 * ft * ft)
    body = cdf_c - cdf_f
    if n == 1:
        return (
            sigma * (ef - ec) * math.sqrt(dt / (2.0 * math.pi))
            + mu * dt * body
            + f * cdf_f
            + c * (1.0 - cdf_c)
        )
    if n == 2:
        return (
            sigma * sigma * dt * body
            - sigma * sigma * dt / math.sqrt(2.0 * math.pi) * (ct * ec - ft * ef)
            # defective cross term: exponents printed without their 1/2
            + 2.0 * mu * sigma * dt
            * (math.exp(-ft * ft) - math.exp(-ct * ct))
            * math.sqrt(dt / (2.0 * math.pi))
            + (mu * dt) ** 2 * body
            + c * c * (1.0 - cdf_c)
            + f * f * cdf_f
        )
    return (
        -((2.0 + ct * ct) * ec - (2.0 + ft * ft) * ef)
        * math.sqrt((sigma * sigma * dt) ** 3 / (2.0 * math.pi))
        + 3.0 * mu * (sigma * dt) ** 2
        * (body - (ct * ec - ft * ef) / math.sqrt(2.0 * math.pi))
        - 3.0 * (mu * dt) ** 2 * sigma * (ec - ef) * math.sqrt(dt / (2.0 * math.pi))
        + (mu * dt) ** 3 * body
        + c * c * c * (1.0 - cdf_c)
        + f * f * f * cdf_f
    )


def closed_form_moments(
    market: MarketParams, contract: ContractSpec, variant: str = CORRECTED
) -> MomentSet:
    """All three closed-form moments, dispatching on the presence of a floor."""
    fn = capped_moment_closed if contract.floor is None else capped_floored_moment_closed
    return MomentSet(
        i1=fn(1, market, contract, variant),
        i2=fn(2, market, contract, variant),
        i3=fn(3, market, contract, variant),
        provenance="closed_form",
    )


def quadrature_moments(market: MarketParams, contract: ContractSpec) -> MomentSet:
    """All three ground-truth moments by adaptive quadrature."""
    return MomentSet(
        i1=moment_quadrature(1, market, contract),
        i2=moment_quadrature(2, market, contract),
        i3=moment_quadrature(3, market, contract),
        provenance="quadrature",
    )


def _check_variant(variant: str) -> None:
    if variant not in (CORRECTED, PRINTED):
        raise ValueError(f"variant must be {CORRECTED!r} or {PRINTED!r}, got {variant!r}")
