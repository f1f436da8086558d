"""Rosser weights of level D on odd squarefree d | P(z), and their checks.

The upper/lower weight of d = p1 p2 ... pr (with z > p1 > ... > pr > 2) is
mu(d) when every truncation condition of the respective parity holds,

    upper:  p1...p_{m-1} * p_m^3 < D  at every odd position m,
    lower:  p1...p_{m-1} * p_m^3 < D  at every even position m,

and 0 otherwise; only d < D is kept.  The one contract these tables must
satisfy is the divisor-sum sandwich around the Moebius function, so
build_weights brute-force validates it on an initial range and rejects
degenerate (D, z) combinations (for example z above D, where truncated
single primes break the lower bound) instead of returning bad tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import DegenerateSieveError, ParameterRangeError, ResourceBudgetError
from .primes import _simple_sieve

DEFAULT_VALIDATE_LIMIT = 10**4
DEFAULT_ENTRY_BUDGET = 10**6


@dataclass(frozen=True)
class RosserWeights:
    """Sparse weight tables d -> (lambda_plus, lambda_minus), plus factor lists."""

    D: int
    z: int
    entries: Mapping[int, tuple[int, int]]
    factors: Mapping[int, tuple[int, ...]]

    @property
    def odd_primes_below_z(self) -> tuple[int, ...]:
        return tuple(int(p) for p in _simple_sieve(max(self.z - 1, 1)) if p > 2)


@dataclass(frozen=True)
class SieveSums:
    """Exact weighted sums attached to a weight table."""

    P_frak: Fraction
    M_plus: Fraction
    M_minus: Fraction
    s0: float


def build_weights(D: int, z: int, *, validate: bool = True,
                  validate_limit: int = DEFAULT_VALIDATE_LIMIT,
                  entry_budget: int = DEFAULT_ENTRY_BUDGET) -> RosserWeights:
    """Enumerate the weight support for level D and sieve limit z."""
    if D <= 4:
        raise ParameterRangeError(f"level D must exceed 4, got {D}")
    if z < 3:
        raise ParameterRangeError(f"sieve limit z must be at least 3, got {z}")
    odd_primes = [int(p) for p in _simple_sieve(max(z - 1, 1)) if p > 2]

    for p in odd_primes:
        if p >= D:
            raise DegenerateSieveError(
                f"(D={D}, z={z}) is degenerate: the single prime d={p} is cut "
                "by the level, which breaks the lower sandwich at n=p")

    entries: dict[int, tuple[int, int]] = {1: (1, 1)}
    factors: dict[int, tuple[int, ...]] = {1: ()}

    def extend(chain: list[int], d: int, plus_ok: bool, minus_ok: bool,
               start: int) -> None:
        # start indexes the largest prime allowed next (descending chains)
        for idx in range(start, len(odd_primes)):
            p = odd_primes[idx]
            child = d * p
            position = len(chain) + 1
            cond = d * p**3 < D
            c_plus = plus_ok and (cond if position % 2 == 1 else True)
            c_minus = minus_ok and (cond if position % 2 == 0 else True)
            if not (c_plus or c_minus) or child >= D:
                continue
            mu = -1 if position % 2 == 1 else 1
            entries[child] = (mu if c_plus else 0, mu if c_minus else 0)
            factors[child] = tuple(chain + [p])
            if len(entries) > entry_budget:
                raise ResourceBudgetError(
                    f"weight enumeration for (D={D}, z={z}) exceeded "
                    f"{entry_budget} entries")
            if child * 3 < D:
                extend(chain + [p], child, c_plus, c_minus, idx + 1)

    # descending order: iterate primes from largest to smallest
    odd_primes.sort(reverse=True)
    extend([], 1, True, True, 0)

    weights = RosserWeights(D=int(D), z=int(z),
                            entries=MappingProxyType(entries),
                            factors=MappingProxyType(factors))
    if validate:
        lower, mid, upper = sandwich_arrays(weights, validate_limit)
        bad = np.nonzero((lower > mid) | (mid > upper))[0]
        if bad.size:
            n = int(bad[0])
            raise DegenerateSieveError(
                f"(D={D}, z={z}) fails the sandwich at n={n}: "
                f"{int(lower[n])} <= {int(mid[n])} <= {int(upper[n])} is false")
    return weights


def sandwich_check(n: int, w: RosserWeights) -> tuple[int, int, int]:
    """(lower, mid, upper) divisor sums of the weights at n.

    lower/upper sum lambda-minus/plus over stored d dividing n; mid is 1
    exactly when n shares no odd prime below z.
    """
    if n < 1:
        raise ParameterRangeError(f"n must be positive, got {n}")
    lower = upper = 0
    for d, (lp, lm) in w.entries.items():
        if n % d == 0:
            upper += lp
            lower += lm
    mid = 1
    for p in w.odd_primes_below_z:
        if n % p == 0:
            mid = 0
            break
    return lower, mid, upper


def sandwich_arrays(w: RosserWeights, nmax: int
                    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized sandwich sums for every n in 1..nmax (index = n)."""
    lower = np.zeros(nmax + 1, dtype=np.int64)
    upper = np.zeros(nmax + 1, dtype=np.int64)
    for d, (lp, lm) in w.entries.items():
        if d <= nmax:
            upper[d::d] += lp
            lower[d::d] += lm
    mid = np.ones(nmax + 1, dtype=np.int64)
    mid[0] = 0
    for p in w.odd_primes_below_z:
        if p <= nmax:
            mid[p::p] = 0
    return lower, mid, upper


def compute_sums(w: RosserWeights) -> SieveSums:
    """Exact P_frak and the weighted sums M_plus, M_minus, with their ordering."""
    P_frak = Fraction(1)
    for p in w.odd_primes_below_z:
        P_frak *= 1 - Fraction(1, p - 1)
    M_plus = Fraction(0)
    M_minus = Fraction(0)
    for d, (lp, lm) in w.entries.items():
        phi = 1
        for p in w.factors[d]:
            phi *= p - 1
        M_plus += Fraction(lp, phi)
        M_minus += Fraction(lm, phi)
    assert M_minus <= P_frak <= M_plus, (
        f"sum ordering violated for (D={w.D}, z={w.z}): "
        f"{M_minus} <= {P_frak} <= {M_plus}")
    return SieveSums(P_frak=P_frak, M_plus=M_plus, M_minus=M_minus,
                     s0=math.log(w.D) / math.log(w.z))


@dataclass(frozen=True)
class SwitchVerdict:
    binary_holds: bool
    quaternary_holds: bool


def switch_check(n1: int, n2: int, n3: int, n4: int,
                 w: RosserWeights) -> SwitchVerdict:
    """Check the two switch inequalities on a tuple of shifts.

    With L_i the roughness indicator and (l_i, u_i) the sandwich sums:
      binary:      L1 L2 >= l1 u2 + u1 l2 - u1 u2
      quaternary:  L1 L2 L3 L4 >= sum of the four one-minus products
                   minus 3 u1 u2 u3 u4.
    """
    tuples = [sandwich_check(n, w) for n in (n1, n2, n3, n4)]
    lo = [t[0] for t in tuples]
    mid = [t[1] for t in tuples]
    up = [t[2] for t in tuples]
    binary = mid[0] * mid[1] >= lo[0] * up[1] + up[0] * lo[1] - up[0] * up[1]
    rhs = -3 * up[0] * up[1] * up[2] * up[3]
    for i in range(4):
        term = 1
        for j in range(4):
            term *= lo[j] if j == i else up[j]
        rhs += term
    quaternary = mid[0] * mid[1] * mid[2] * mid[3] >= rhs
    return SwitchVerdict(binary_holds=binary, quaternary_holds=quaternary)
