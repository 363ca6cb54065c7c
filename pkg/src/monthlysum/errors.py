"""Exception types shared across the pricing engine.

Input-shaped problems derive from ``ValueError`` (the CLI maps them to exit
code 2); failures of the numerics themselves derive from ``ArithmeticError``
(exit code 3).
"""


class DegenerateVolatilityError(ValueError):
    """Monthly volatility scale sigma*sqrt(dt) too small for the closed forms.

    The closed-form moments divide by sigma*sqrt(dt); below 1e-12 the
    standardized abscissas are meaningless. The Monte Carlo engine covers
    the (near-)deterministic limit instead.
    """


class QuadratureConvergenceError(ArithmeticError):
    """Adaptive quadrature did not meet its tolerance within the subdivision budget."""


class NonpositiveVarianceError(ArithmeticError):
    """Monthly variance iota2 = I2 - I1^2 came out nonpositive.

    A capped (and optionally floored) monthly return with cap > floor always
    has strictly positive variance, so this signals corrupted moments.
    """
