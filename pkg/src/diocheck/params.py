"""Derived run parameters and exact-rational exponent audits.

Every inequality audited here is linear in c once delta = 1787/1502 - c and
xi = 2c/3 - 1/3 are substituted, so Fraction arithmetic decides PASS/FAIL
with zero rounding; checking the two interval endpoints certifies the whole
interval.  Lines that hold with exact equality (absorbed into an epsilon
power elsewhere) get the distinct verdict BOUNDARY-PASS.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParameterRangeError

#: Open upper endpoint of the admissible c-interval.
C_SUP = Fraction(1787, 1502)

PASS = "PASS"
BOUNDARY_PASS = "BOUNDARY-PASS"
FAIL = "FAIL"


@dataclass(frozen=True)
class AuditRow:
    """One checked inequality: lhs < rhs with exact margin = rhs - lhs."""

    name: str
    lhs: Fraction
    rhs: Fraction
    verdict: str
    margin: Fraction


@dataclass(frozen=True)
class AuditReport:
    rows: tuple[AuditRow, ...]

    @property
    def all_pass(self) -> bool:
        return all(row.verdict != FAIL for row in self.rows)

    @property
    def failures(self) -> tuple[AuditRow, ...]:
        return tuple(row for row in self.rows if row.verdict == FAIL)


def _row(name: str, lhs: Fraction, rhs: Fraction) -> AuditRow:
    margin = rhs - lhs
    if margin > 0:
        verdict = PASS
    elif margin == 0:
        verdict = BOUNDARY_PASS
    else:
        verdict = FAIL
    return AuditRow(name, lhs, rhs, verdict, margin)


@dataclass(frozen=True)
class Params:
    """All quantities derived from (c, N, E, mu).

    Rational fields are exact; the remaining fields are double precision
    and never feed back into the rational audits.
    """

    c: Fraction
    delta: Fraction
    xi: Fraction
    eta1: Fraction
    eta2: Fraction
    mu: Fraction
    E: float
    N: float
    X: float = field(init=False)
    D: float = field(init=False)
    tau: float = field(init=False)
    z1: float = field(init=False)
    z2: float = field(init=False)
    K: float = field(init=False)
    Delta: float = field(init=False)

    def __post_init__(self) -> None:
        X = self.N ** (1.0 / float(self.c))
        logX = math.log(X)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "D", X ** float(self.delta))
        object.__setattr__(self, "tau", X ** float(self.xi - self.c))
        object.__setattr__(self, "z1", X ** float(self.eta1))
        object.__setattr__(self, "z2", X ** float(self.eta2))
        object.__setattr__(self, "K", logX ** (self.E + 3.0))
        object.__setattr__(self, "Delta", math.log(self.N) ** (-self.E))
        assert self.tau < 1.0 < self.K
        if self.z1 <= 2.0 or self.z2 <= 2.0:
            warnings.warn(
                f"sieve limits z1={self.z1:.4g}, z2={self.z2:.4g} do not exceed 2; "
                "rough-number constraints are vacuous at this scale",
                stacklevel=3)


def _check_c(c: Fraction, *, closed: bool = False) -> Fraction:
    c = Fraction(c)
    if closed:
        ok = 1 <= c <= C_SUP
    else:
        ok = 1 < c < C_SUP
    if not ok:
        bounds = "[1, 1787/1502]" if closed else "(1, 1787/1502)"
        raise ParameterRangeError(f"c = {c} outside the admissible range {bounds}")
    return c


def derive_params(c: Fraction, N: float, E: float = 2.0,
                  mu: Fraction = Fraction(1, 2)) -> Params:
    """Derive every run parameter from (c, N, E, mu); c strictly inside the interval."""
    c = _check_c(c)
    mu = Fraction(mu)
    if not 0 < mu < 1:
        raise ParameterRangeError(f"mu = {mu} outside (0, 1)")
    if N < 100:
        raise ParameterRangeError(f"N = {N} below the minimum of 100")
    delta = C_SUP - c
    xi = Fraction(2, 3) * c - Fraction(1, 3)
    eta1 = Fraction(20, 53) * delta
    eta2 = Fraction(20000, 62451) * delta
    assert delta > 0 and Fraction(1, 3) < xi < Fraction(2, 3) * c
    assert eta1 > eta2 > 0
    return Params(c=c, delta=delta, xi=xi, eta1=eta1, eta2=eta2, mu=mu,
                  E=float(E), N=float(N))


def almost_prime_order(c: Fraction, theorem: int) -> int:
    """Maximum prime-factor count allowed for the shifts p+2.

    Returns floor(1/eta1) for theorem 1 and floor(1/eta2) for theorem 2,
    after asserting the closed-form identities for 1/eta as exact rationals.
    """
    c = _check_c(c)
    delta = C_SUP - c
    if theorem == 1:
        eta = Fraction(20, 53) * delta
        closed_form = Fraction(79606, 1) / (35740 - 30040 * c)
    elif theorem == 2:
        eta = Fraction(20000, 62451) * delta
        closed_form = Fraction(93801402, 1) / (35740000 - 30040000 * c)
    else:
        raise ParameterRangeError(f"theorem must be 1 or 2, got {theorem}")
    inverse = 1 / eta
    assert inverse == closed_form, (inverse, closed_form)
    return math.floor(inverse)


def audit_lemma27(c: Fraction) -> AuditReport:
    """Check 2xi + 16delta < 5 and 7xi + 14delta < 5 exactly."""
    c = _check_c(c, closed=True)
    delta = C_SUP - c
    xi = Fraction(2, 3) * c - Fraction(1, 3)
    five = Fraction(5)
    return AuditReport((
        _row("2xi+16delta<5", 2 * xi + 16 * delta, five),
        _row("7xi+14delta<5", 7 * xi + 14 * delta, five),
    ))


def audit_lemma210(c: Fraction) -> AuditReport:
    """Compare the five minor-arc exponent terms against 4/3 - c/3.

    Every term is linear in c; the second one meets the bound with exact
    equality at c = 1787/1502 (the interval endpoint is where it is tight)
    and is reported BOUNDARY-PASS there.
    """
    c = _check_c(c, closed=True)
    delta = C_SUP - c
    xi = Fraction(2, 3) * c - Fraction(1, 3)
    rhs = Fraction(4, 3) - c / 3
    exponents = (
        ("11c/82+29/41+25delta/82",
         Fraction(11, 82) * c + Fraction(29, 41) + Fraction(25, 82) * delta),
        ("(374c+2725)/3384+118delta/423",
         (374 * c + 2725) / Fraction(3384) + Fraction(118, 423) * delta),
        ("5/6", Fraction(5, 6)),
        ("3571/3384+118delta/423-659xi/1692",
         Fraction(3571, 3384) + Fraction(118, 423) * delta - Fraction(659, 1692) * xi),
        ("1-xi/2", 1 - xi / 2),
    )
    return AuditReport(tuple(_row(name, lhs, rhs) for name, lhs in exponents))


def audit_lemma211(c: Fraction) -> AuditReport:
    """Check the two quaternary-moment exponent comparisons against 4 - c.

    Line (b) is an algebraic identity, so it reports BOUNDARY-PASS at every
    c; the epsilon powers carry it in the source estimate.
    """
    c = _check_c(c, closed=True)
    delta = C_SUP - c
    rhs = Fraction(4) - c
    lhs_a = Fraction(13, 62) * c + Fraction(17, 31) + Fraction(13, 62) * delta + 2
    lhs_b = 1 - c / 2 + Fraction(3, 2) * (Fraction(4, 3) - c / 3) + 1
    return AuditReport((
        _row("13c/62+17/31+13delta/62+2<=4-c", lhs_a, rhs),
        _row("1-c/2+(3/2)(4/3-c/3)+1<=4-c", lhs_b, rhs),
    ))


_ALL_AUDITS = (audit_lemma27, audit_lemma210, audit_lemma211)


def sweep_audits(grid_points: int = 64) -> dict[Fraction, AuditReport]:
    """Run every audit at both endpoints plus an interior grid.

    Returns c -> combined report.  Grid values are exact rationals
    1 + k*(1787/1502 - 1)/(grid_points+1), so the whole sweep is rounding-free.
    """
    if grid_points < 0:
        raise ParameterRangeError("grid_points must be nonnegative")
    step = (C_SUP - 1) / (grid_points + 1)
    cs = [Fraction(1) + k * step for k in range(grid_points + 2)]
    out: dict[Fraction, AuditReport] = {}
    for c in cs:
        rows: list[AuditRow] = []
        for audit in _ALL_AUDITS:
            rows.extend(audit(c).rows)
        out[c] = AuditReport(tuple(rows))
    return out
