"""Shared numerical integration kernels.

Two deliberately different methods are provided for smooth integrands
(adaptive Simpson and composite Gauss-Legendre) so that results can be
cross-checked against each other, plus an oscillatory rule for integrals
of the form integral g(u) e(x u) du that budgets panels per period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import OscillationBudgetError


@lru_cache(maxsize=32)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureConfig:
    """Error control for the adaptive rules."""

    tol: float = 1e-12
    max_subdivisions: int = 2**20

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


def _simpson(f: Callable[[float], float], a: float, fa: float, b: float, fb: float,
             m: float, fm: float) -> float:
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     config: QuadratureConfig | None = None) -> float:
    """Adaptive Simpson integral of a smooth scalar function on [a, b].

    Classic interval-halving with the 1/15 Richardson error estimate; the
    subdivision count is capped by config.max_subdivisions.
    """
    config = config or QuadratureConfig()
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(f, a, fa, b, fb, m, fm)
    # Stack of (a, fa, b, fb, m, fm, estimate, tol) intervals still to refine.
    stack = [(a, fa, b, fb, m, fm, whole, config.tol)]
    total = 0.0
    used = 0
    while stack:
        a0, fa0, b0, fb0, m0, fm0, est, tol = stack.pop()
        used += 1
        if used > config.max_subdivisions:
            raise RuntimeError(
                f"adaptive Simpson exceeded {config.max_subdivisions} subdivisions")
        lm = 0.5 * (a0 + m0)
        rm = 0.5 * (m0 + b0)
        flm, frm = f(lm), f(rm)
        left = _simpson(f, a0, fa0, m0, fm0, lm, flm)
        right = _simpson(f, m0, fm0, b0, fb0, rm, frm)
        err = left + right - est
        if abs(err) <= 15.0 * tol or (b0 - a0) < 1e-14 * (b - a):
            total += left + right + err / 15.0
        else:
            half = 0.5 * tol
            stack.append((a0, fa0, m0, fm0, lm, flm, left, half))
            stack.append((m0, fm0, b0, fb0, rm, frm, right, half))
    return total


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                   order: int = 32, panels: int = 1) -> float:
    """Composite Gauss-Legendre integral; f must accept numpy arrays."""
    if a == b:
        return 0.0
    nodes, weights = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    # points[i, j] = j-th node mapped into panel i
    points = mids[:, None] + half[:, None] * nodes[None, :]
    values = f(points.ravel()).reshape(points.shape)
    return float(np.sum(half[:, None] * weights[None, :] * values))


def oscillatory_e_integral(g: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                           x: float, panels_per_period: int = 8, order: int = 8,
                           min_panels: int = 16, panel_budget: int = 10**8) -> complex:
    """Integral of g(u) * e(x u) over [a, b] with e(t) = exp(2 pi i t).

    Panel count grows with the number of oscillation periods |x|(b-a) so each
    panel sees a bounded phase change; the budget guard refuses jobs whose
    panel count would exceed panel_budget rather than degrade silently.
    """
    if a == b:
        return 0.0 + 0.0j
    periods = abs(x) * (b - a)
    needed = max(min_panels, math.ceil(panels_per_period * periods))
    if needed > panel_budget:
        raise OscillationBudgetError(
            f"{needed} panels needed for {periods:.3g} periods "
            f"exceeds the budget of {panel_budget}")
    nodes, weights = _leggauss(order)
    edges = np.linspace(a, b, needed + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    points = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
    values = g(points) * np.exp(2j * np.pi * x * points)
    values = values.reshape(needed, order)
    return complex(np.sum(half[:, None] * weights[None, :] * values))
