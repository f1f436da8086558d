"""Linear-sieve limit functions F, f and the combined level margins.

F and f are the optimal upper/lower sieve functions on the ranges where
they have elementary closed forms; the only quadrature needed is the ramp
integral of log(t-1)/t entering F on [3, 5].  Both an adaptive Simpson and
a composite Gauss-Legendre evaluation are exposed so regression values can
be pinned by two independent rules.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterRangeError
from .quadrature import QuadratureConfig, adaptive_simpson, gauss_legendre

#: Euler's constant to 30 significant digits.
EULER_GAMMA = 0.577215664901532860606512090082
E_GAMMA = math.exp(EULER_GAMMA)


def _ramp_integral(upper: float, method: str, config: QuadratureConfig) -> float:
    """integral of log(t-1)/t for t from 2 to upper; zero when upper <= 2.

    The integrand vanishes at t=2 but is smooth there, so no endpoint care
    is needed.
    """
    if upper <= 2.0:
        return 0.0
    if method == "simpson":
        return adaptive_simpson(lambda t: math.log(t - 1.0) / t, 2.0, upper, config)
    if method == "gauss":
        return gauss_legendre(lambda t: np.log(t - 1.0) / t, 2.0, upper,
                              order=48, panels=8)
    raise ValueError(f"unknown quadrature method {method!r}")


def upper_F(s: float, config: QuadratureConfig | None = None,
            method: str = "simpson") -> float:
    """Upper sieve function F(s) for 1 <= s <= 5."""
    if not 1.0 <= s <= 5.0:
        raise ParameterRangeError(f"F(s) needs 1 <= s <= 5, got s = {s}")
    base = 2.0 * E_GAMMA / s
    if s <= 3.0:
        return base
    config = config or QuadratureConfig()
    return base * (1.0 + _ramp_integral(s - 1.0, method, config))


def lower_f(s: float) -> float:
    """Lower sieve function f(s) = 2 e^gamma log(s-1)/s for 2 <= s <= 4."""
    if not 2.0 <= s <= 4.0:
        raise ParameterRangeError(f"f(s) needs 2 <= s <= 4, got s = {s}")
    return 2.0 * E_GAMMA * math.log(s - 1.0) / s


def binary_margin(s0: float, config: QuadratureConfig | None = None,
                  method: str = "simpson") -> float:
    """Margin 2 f(s0) - F(s0) of the two-variable sieve at level ratio s0.

    Positive exactly when the lower bound survives one upper-bound
    subtraction; for s0 <= 3 this equals (4 e^gamma / s0)(log(s0-1) - 1/2).
    """
    return 2.0 * lower_f(s0) - upper_F(s0, config, method)


def quaternary_margin(s0: float, config: QuadratureConfig | None = None,
                      method: str = "simpson") -> float:
    """Margin 4 f(s0) - 3 F(s0) of the four-variable sieve for s0 in [3, 4]."""
    if not 3.0 <= s0 <= 4.0:
        raise ParameterRangeError(f"quaternary margin needs 3 <= s0 <= 4, got {s0}")
    return 4.0 * lower_f(s0) - 3.0 * upper_F(s0, config, method)
