"""Desk-scale searches for the binary and quaternary prime inequalities.

search_binary counts ordered prime pairs from (mu X, X] with
|p1^c + p2^c - target| < Delta, optionally restricted by a shift condition
on p+2; search_quaternary does the same for quadruples via meet-in-the-
middle over sorted pair sums.  Predictions are the geometric main terms:
the area/volume of the sharp window in t-space, which heuristically tracks
the log-weighted counts (divide densities by log t for unit counts).
Predictions deliberately ignore the shift constraint, so constrained runs
read the sieve's density cost directly off the ratio.

Counting conventions: tuples are ordered, the window is strictly open
(ties at exactly Delta excluded; a measure-zero event for float targets).
"""

from __future__ import annotations

import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import expi

from .errors import ParameterRangeError, ResourceBudgetError
from .primes import PrimeTable, big_omega, is_z_rough, z_rough_mask

PAIR_ENTRY_CAP = 2**31


@dataclass(frozen=True)
class Constraint:
    """Shift condition on p+2: none, z-rough, or a factor-count cap."""

    kind: str = "none"
    value: float = 0.0

    @classmethod
    def none(cls) -> "Constraint":
        return cls("none")

    @classmethod
    def z_rough(cls, z: float) -> "Constraint":
        return cls("z_rough", float(z))

    @classmethod
    def omega_le(cls, r: int) -> "Constraint":
        return cls("omega_le", int(r))

    @classmethod
    def parse(cls, text: str) -> "Constraint":
        """Parse 'none', 'zrough:Z' or 'omega:R' (CLI grammar)."""
        if text == "none":
            return cls.none()
        kind, sep, arg = text.partition(":")
        if sep:
            if kind in ("zrough", "z_rough"):
                return cls.z_rough(float(arg))
            if kind in ("omega", "omega_le"):
                return cls.omega_le(int(arg))
        raise ParameterRangeError(
            f"cannot parse constraint {text!r}; use none, zrough:Z or omega:R")


@dataclass(frozen=True)
class SearchConfig:
    c: float
    Delta: float
    X: float
    mu: float = 0.5
    constraint: Constraint = field(default_factory=Constraint.none)
    weighting: str = "log"

    def __post_init__(self) -> None:
        if self.Delta <= 0:
            raise ParameterRangeError(f"Delta must be positive, got {self.Delta}")
        if not 0.0 <= self.mu < 1.0:
            raise ParameterRangeError(f"mu must be in [0, 1), got {self.mu}")
        if self.weighting not in ("unit", "log"):
            raise ParameterRangeError(
                f"weighting must be 'unit' or 'log', got {self.weighting!r}")


@dataclass(frozen=True)
class SolutionReport:
    count: int
    weighted: float
    exemplars: tuple[tuple[tuple[int, ...], float], ...]
    prediction: float
    ratio: float
    elapsed: float


def _admissible_primes(cfg: SearchConfig, table: PrimeTable) -> np.ndarray:
    """Primes in (mu X, X] whose shift p+2 passes the constraint."""
    if cfg.X > table.limit:
        raise ParameterRangeError(
            f"X = {cfg.X} exceeds the table limit {table.limit}")
    from .primes import primes_in

    p = primes_in(table, cfg.mu * cfg.X, cfg.X)
    if cfg.constraint.kind == "z_rough":
        p = p[z_rough_mask(table, p + 2, cfg.constraint.value)]
    elif cfg.constraint.kind == "omega_le":
        p = p[table.omega[p + 2] <= cfg.constraint.value]
    return p


def _passes_constraint(n_shift: int, cfg: SearchConfig, table: PrimeTable) -> bool:
    if cfg.constraint.kind == "z_rough":
        return is_z_rough(table, n_shift, cfg.constraint.value)
    if cfg.constraint.kind == "omega_le":
        return big_omega(table, n_shift) <= cfg.constraint.value
    return True


class _BinaryEngine:
    """Precomputed arrays for repeated binary searches at fixed config."""

    def __init__(self, cfg: SearchConfig, table: PrimeTable):
        self.cfg = cfg
        self.table = table
        self.p = _admissible_primes(cfg, table)
        if len(self.p) == 0:
            warnings.warn(
                f"no admissible primes in ({cfg.mu * cfg.X:.6g}, {cfg.X:.6g}]",
                stacklevel=3)
        self.pc = self.p.astype(float) ** cfg.c
        self.logp = np.log(self.p.astype(float)) if len(self.p) else self.p.astype(float)
        self.prefix_log = np.concatenate([[0.0], np.cumsum(self.logp)])

    def window_indices(self, R: float) -> tuple[np.ndarray, np.ndarray]:
        lo = R - self.pc - self.cfg.Delta
        hi = R - self.pc + self.cfg.Delta
        left = np.searchsorted(self.pc, lo, side="right")
        right = np.searchsorted(self.pc, hi, side="left")
        return left, right

    def count_weight(self, R: float) -> tuple[int, float]:
        if len(self.p) == 0:
            return 0, 0.0
        left, right = self.window_indices(R)
        hits = np.maximum(right - left, 0)
        count = int(hits.sum())
        if self.cfg.weighting == "log":
            inner = np.where(right > left,
                             self.prefix_log[right] - self.prefix_log[left], 0.0)
            weighted = float(np.sum(self.logp * inner))
        else:
            weighted = float(count)
        return count, weighted

    def exemplars(self, R: float, max_count: int = 10
                  ) -> tuple[tuple[tuple[int, ...], float], ...]:
        if len(self.p) == 0:
            return ()
        left, right = self.window_indices(R)
        out = []
        for i in np.nonzero(right > left)[0]:
            for j in range(left[i], right[i]):
                p1, p2 = int(self.p[i]), int(self.p[j])
                dist = abs(self.pc[i] + self.pc[j] - R)
                # re-verify on insertion: window and both shift constraints
                assert dist < self.cfg.Delta
                assert _passes_constraint(p1 + 2, self.cfg, self.table)
                assert _passes_constraint(p2 + 2, self.cfg, self.table)
                out.append(((p1, p2), dist))
                if len(out) >= max_count:
                    return tuple(out)
        return tuple(out)


def search_binary(R: float, cfg: SearchConfig, table: PrimeTable) -> SolutionReport:
    """Count ordered prime pairs with |p1^c + p2^c - R| < Delta."""
    if R <= 0:
        raise ParameterRangeError(f"target R must be positive, got {R}")
    start = time.perf_counter()
    engine = _BinaryEngine(cfg, table)
    count, weighted = engine.count_weight(R)
    exemplars = engine.exemplars(R)
    prediction = predict_binary_main(R, cfg)
    ratio = weighted / prediction if prediction > 0 else math.nan
    return SolutionReport(count=count, weighted=weighted, exemplars=exemplars,
                          prediction=prediction, ratio=ratio,
                          elapsed=time.perf_counter() - start)


def search_quaternary(N: float, cfg: SearchConfig, table: PrimeTable,
                      chunk: int = 1 << 20) -> SolutionReport:
    """Count ordered prime quadruples with |sum p_i^c - N| < Delta.

    Meet-in-the-middle: the sorted multiset of pair sums is scanned against
    itself, so ordered quadruples = ordered (pair, pair) hits.
    """
    if N <= 0:
        raise ParameterRangeError(f"target N must be positive, got {N}")
    start = time.perf_counter()
    engine = _BinaryEngine(cfg, table)
    n = len(engine.p)
    if n * n > PAIR_ENTRY_CAP:
        raise ResourceBudgetError(
            f"{n}^2 pair sums exceed the cap of {PAIR_ENTRY_CAP}; lower X "
            "or tighten the constraint")
    if n == 0:
        return SolutionReport(0, 0.0, (), predict_quaternary_main(N, cfg),
                              math.nan, time.perf_counter() - start)
    pair_sums = (engine.pc[:, None] + engine.pc[None, :]).ravel()
    if cfg.weighting == "log":
        pair_w = (engine.logp[:, None] * engine.logp[None, :]).ravel()
    else:
        pair_w = np.ones(n * n)
    order = np.argsort(pair_sums, kind="stable")
    sums = pair_sums[order]
    w_sorted = pair_w[order]
    prefix_w = np.concatenate([[0.0], np.cumsum(w_sorted)])

    count = 0
    weighted = 0.0
    exemplars: list[tuple[tuple[int, ...], float]] = []
    for lo_idx in range(0, n * n, chunk):
        s_block = sums[lo_idx:lo_idx + chunk]
        left = np.searchsorted(sums, N - s_block - cfg.Delta, side="right")
        right = np.searchsorted(sums, N - s_block + cfg.Delta, side="left")
        hits = np.maximum(right - left, 0)
        count += int(hits.sum())
        inner_w = np.where(right > left, prefix_w[right] - prefix_w[left], 0.0)
        weighted += float(np.sum(w_sorted[lo_idx:lo_idx + chunk] * inner_w))
        if len(exemplars) < 10:
            for k in np.nonzero(hits > 0)[0]:
                k_glob = lo_idx + int(k)
                i1, j1 = divmod(int(order[k_glob]), n)
                for m in range(left[k], right[k]):
                    i2, j2 = divmod(int(order[m]), n)
                    tup = (int(engine.p[i1]), int(engine.p[j1]),
                           int(engine.p[i2]), int(engine.p[j2]))
                    dist = abs(sum(engine.pc[i] for i in (i1, j1, i2, j2)) - N)
                    assert dist < cfg.Delta
                    assert all(_passes_constraint(q + 2, cfg, table) for q in tup)
                    exemplars.append((tup, dist))
                    if len(exemplars) >= 10:
                        break
                if len(exemplars) >= 10:
                    break
    if cfg.weighting == "unit":
        weighted = float(count)
    prediction = predict_quaternary_main(N, cfg)
    ratio = weighted / prediction if prediction > 0 else math.nan
    return SolutionReport(count=count, weighted=weighted,
                          exemplars=tuple(exemplars), prediction=prediction,
                          ratio=ratio, elapsed=time.perf_counter() - start)


# ---------------------------------------------------------------------------
# geometric main-term predictions

def _li_diff(hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    """integral of dt/log t from lo to hi, elementwise (hi, lo > 1)."""
    return expi(np.log(hi)) - expi(np.log(lo))


def predict_binary_main(R: float, cfg: SearchConfig, panels: int = 1 << 14) -> float:
    """Window area in (mu X, X]^2: measure of |t1^c + t2^c - R| < Delta.

    Under log weighting the area itself is the prediction; under unit
    weighting both coordinate densities pick up a 1/log t factor.
    Returns 0.0 when the window misses the square entirely.
    """
    X, mu, c, Delta = cfg.X, cfg.mu, cfg.c, cfg.Delta
    if Delta >= X ** c and cfg.weighting == "log":
        # fast path keeps the huge-window sanity case exact
        if R + Delta >= 2 * X ** c and R - Delta <= 2 * (mu * X) ** c:
            return (X - mu * X) ** 2
    lo_t = mu * X
    if cfg.weighting == "unit" and lo_t <= 1.0:
        raise ParameterRangeError("unit weighting needs mu*X > 1")
    # Simpson nodes over t1
    t1 = np.linspace(lo_t, X, 2 * panels + 1)
    rem_hi = R + Delta - t1 ** c
    rem_lo = R - Delta - t1 ** c
    t2_hi = np.where(rem_hi > 0, np.maximum(rem_hi, 0.0) ** (1.0 / c), 0.0)
    t2_lo = np.where(rem_lo > 0, np.maximum(rem_lo, 0.0) ** (1.0 / c), 0.0)
    a = np.clip(t2_lo, lo_t, X)
    b = np.clip(t2_hi, lo_t, X)
    if cfg.weighting == "log":
        integrand = np.maximum(b - a, 0.0)
    else:
        good = b > a
        inner = np.zeros_like(a)
        inner[good] = _li_diff(b[good], a[good])
        integrand = inner / np.log(t1)
    h = (X - lo_t) / (2 * panels)
    coeff = np.ones(2 * panels + 1)
    coeff[1:-1:2] = 4.0
    coeff[2:-1:2] = 2.0
    return float(h / 3.0 * np.sum(coeff * integrand))


def predict_quaternary_main(N: float, cfg: SearchConfig,
                            grid_cells: int = 1 << 14) -> float:
    """Window volume in (mu X, X]^4 by iterated density convolution.

    The density of u = t^c is g(u) = u^(1/c-1)/c on ((mu X)^c, X^c]; the
    4-fold convolution is built on a uniform u-grid and integrated over
    (N - Delta, N + Delta).  If Delta is finer than a grid cell the grid
    is refined once (with a warning) before giving up.
    """
    X, mu, c, Delta = cfg.X, cfg.mu, cfg.c, cfg.Delta
    lo = (mu * X) ** c
    hi = X ** c
    if cfg.weighting == "unit" and mu * X <= 1.0:
        raise ParameterRangeError("unit weighting needs mu*X > 1")

    def volume(cells: int) -> float:
        h = (hi - lo) / cells
        u = lo + (np.arange(cells) + 0.5) * h
        if cfg.weighting == "log":
            g = u ** (1.0 / c - 1.0) / c
        else:
            g = u ** (1.0 / c - 1.0) / np.log(u)
        g2 = fftconvolve(g, g) * h
        g4 = np.maximum(fftconvolve(g2, g2), 0.0) * h
        s_grid = 4.0 * lo + (np.arange(len(g4)) + 2.0) * h
        band = np.linspace(N - Delta, N + Delta, 2049)
        vals = np.interp(band, s_grid, g4, left=0.0, right=0.0)
        return float(np.trapezoid(vals, band))

    h0 = (hi - lo) / grid_cells
    if Delta >= h0:
        return volume(grid_cells)
    warnings.warn(
        f"window half-width {Delta:.3g} is below the cell width {h0:.3g}; "
        "refining the convolution grid once", stacklevel=2)
    refined = min(1 << 22, 2 ** math.ceil(math.log2((hi - lo) / Delta)))
    if Delta < (hi - lo) / refined:
        raise ParameterRangeError(
            f"Delta = {Delta:.3g} is too small to resolve on at most "
            f"{1 << 22} grid cells")
    return volume(refined)


# ---------------------------------------------------------------------------
# exceptional-set scan

@dataclass(frozen=True)
class ScanRow:
    R: float
    count: int
    weighted: float
    prediction: float
    ratio: float


@dataclass(frozen=True)
class ScanReport:
    N: float
    samples: int
    seed: int
    fraction_zero: float
    histogram: dict[int, int]
    ratio_min: float
    ratio_median: float
    ratio_max: float
    rows: tuple[ScanRow, ...]
    elapsed: float


def scan_exceptional(N: float, samples: int, cfg: SearchConfig,
                     table: PrimeTable, seed: int,
                     threads: int = 1) -> ScanReport:
    """Sample targets R uniformly from (N, 2N] and tally window counts.

    All randomness is drawn up front from the seeded generator, so the
    report is identical for any thread count.
    """
    if samples < 1:
        raise ParameterRangeError(f"samples must be positive, got {samples}")
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    # map [0,1) to (1,2] so the endpoint convention matches (N, 2N]
    targets = N * (2.0 - rng.random(samples))
    engine = _BinaryEngine(cfg, table)

    def row_for(R: float) -> ScanRow:
        count, weighted = engine.count_weight(R)
        prediction = predict_binary_main(R, cfg)
        ratio = weighted / prediction if prediction > 0 else math.nan
        return ScanRow(R=R, count=count, weighted=weighted,
                       prediction=prediction, ratio=ratio)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row_for, targets))
    else:
        rows = [row_for(float(R)) for R in targets]

    counts = np.array([r.count for r in rows])
    ratios = np.array([r.ratio for r in rows])
    finite = ratios[np.isfinite(ratios)]
    hist: dict[int, int] = {}
    for value in counts:
        hist[int(value)] = hist.get(int(value), 0) + 1
    return ScanReport(
        N=N, samples=samples, seed=seed,
        fraction_zero=float(np.mean(counts == 0)),
        histogram=dict(sorted(hist.items())),
        ratio_min=float(np.min(finite)) if finite.size else math.nan,
        ratio_median=float(np.median(finite)) if finite.size else math.nan,
        ratio_max=float(np.max(finite)) if finite.size else math.nan,
        rows=tuple(rows), elapsed=time.perf_counter() - start)
