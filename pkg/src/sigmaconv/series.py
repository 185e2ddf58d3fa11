"""Growth classification of formal power series with function coefficients.

A series f(z, t) = sum_n f_n(z) t^n is represented by a log-magnitude oracle
for its coefficients.  All magnitudes live in log space: ``-inf`` encodes an
exactly vanishing coefficient and is a first-class value, never NaN.

At a point z the n-th growth exponent is (1/n) * log|f_n(z)|.  Truncated at
order N, the classifier looks only at the tail window [ceil(N/2), N]: early
coefficients are transients that say nothing about the radius of convergence
in t.  With budgets B < M the verdict is

* converge      when the tail-window sup is <= B,
* diverge       when some tail-window exponent is >= M,
* undetermined  otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable

import numpy as np

from .geometry import COMPACT, Grid, RegionMask, omega_exhaustion

DEFAULT_N = 256
DEFAULT_M = math.log(32.0)
MIN_N = 8


def default_b(grid: Grid) -> float:
    """Default converge budget: log(4 * grid half-width), comfortably above
    log|z| for every cell yet below the default diverge budget."""
    return math.log(4.0 * grid.half_width())


class Verdict(IntEnum):
    DIVERGE = 0
    UNDETERMINED = 1
    CONVERGE = 2


VERDICT_NAMES = {Verdict.DIVERGE: "diverge",
                 Verdict.UNDETERMINED: "undetermined",
                 Verdict.CONVERGE: "converge"}


@dataclass
class CoefficientSeries:
    """Coefficient log-magnitude oracle.

    ``coeff_log_mag(n, z)`` accepts a complex scalar or ndarray and returns
    the matching float or float ndarray of log|f_n(z)| values (-inf allowed,
    NaN forbidden).  ``max_supported_n`` is None for unbounded oracles.
    ``structure`` optionally carries the constructive description used for
    serialization (see construct.py).
    """

    coeff_log_mag: Callable[[int, np.ndarray | complex], np.ndarray | float]
    description: str = ""
    max_supported_n: int | None = None
    structure: object | None = None

    def log_mag(self, n: int, z: np.ndarray | complex) -> np.ndarray:
        if n < 0:
            raise ValueError("coefficient index must be >= 0")
        if self.max_supported_n is not None and n > self.max_supported_n:
            raise ValueError(
                f"coefficient index {n} exceeds max_supported_n "
                f"{self.max_supported_n}")
        try:
            out = self.coeff_log_mag(n, z)
        except Exception as exc:
            raise RuntimeError(f"coefficient oracle failed at n={n}") from exc
        arr = np.asarray(out, dtype=float)
        if np.isnan(arr).any():
            bad = np.argwhere(np.isnan(arr))
            raise RuntimeError(
                f"coefficient oracle produced NaN at n={n}, "
                f"first offending entry index {tuple(bad[0])}")
        return arr


@dataclass
class GrowthProfile:
    """Exponents of one point up to order N.

    ``exponents[n-1]`` holds (1/n)*log|f_n(z)| for n = 1..N (the n = 0 term
    is excluded).  ``sup_estimate`` is the max over the tail window, -inf
    when every tail coefficient vanishes.
    """

    point: complex
    exponents: np.ndarray
    sup_estimate: float
    tail_window: tuple[int, int]


@dataclass
class ConvergenceMap:
    """Per-cell verdicts and tail-window sup exponents over a grid."""

    grid: Grid
    verdicts: np.ndarray  # int8 of Verdict values
    exponents: np.ndarray  # float, tail sup per cell (-inf allowed)
    N: int
    B: float
    M: float

    def counts(self) -> dict[str, int]:
        return {name: int((self.verdicts == v).sum())
                for v, name in VERDICT_NAMES.items()}


def _check_budgets(series: CoefficientSeries, N: int, B: float, M: float) -> None:
    if N < MIN_N:
        raise ValueError(f"N must be >= {MIN_N}")
    if series.max_supported_n is not None and N > series.max_supported_n:
        raise ValueError(
            f"N={N} exceeds the series' supported range "
            f"(max_supported_n={series.max_supported_n})")
    if not B < M:
        raise ValueError("budgets must satisfy B < M")


def tail_window(N: int) -> tuple[int, int]:
    return (N + 1) // 2, N


def growth_exponent(series: CoefficientSeries, z: complex, N: int) -> GrowthProfile:
    """Exponent profile of a single point, orders 1..N."""
    if N < MIN_N:
        raise ValueError(f"N must be >= {MIN_N}")
    if series.max_supported_n is not None and N > series.max_supported_n:
        raise ValueError(
            f"N={N} exceeds the series' supported range "
            f"(max_supported_n={series.max_supported_n})")
    exps = np.empty(N)
    for n in range(1, N + 1):
        exps[n - 1] = float(series.log_mag(n, z)) / n
    lo, hi = tail_window(N)
    sup = float(np.max(exps[lo - 1:hi]))
    return GrowthProfile(z, exps, sup, (lo, hi))


def _tail_sup(series: CoefficientSeries, zs: np.ndarray, N: int) -> np.ndarray:
    lo, _ = tail_window(N)
    sup = np.full(zs.shape, -np.inf)
    for n in range(lo, N + 1):
        lm = series.log_mag(n, zs)
        np.maximum(sup, lm / n, out=sup)
    return sup


def classify_point(series: CoefficientSeries, z: complex, N: int,
                   B: float, M: float) -> Verdict:
    """Three-way verdict at one point.  Requires B < M, so the converge and
    diverge conditions are mutually exclusive."""
    _check_budgets(series, N, B, M)
    profile = growth_exponent(series, z, N)
    return _verdict_from_sup(profile.sup_estimate, B, M)


def _verdict_from_sup(sup: float, B: float, M: float) -> Verdict:
    if sup <= B:
        return Verdict.CONVERGE
    if sup >= M:
        return Verdict.DIVERGE
    return Verdict.UNDETERMINED


def classify_points(series: CoefficientSeries, zs: np.ndarray, N: int,
                    B: float, M: float) -> np.ndarray:
    """Vectorized verdicts for an array of points (same thresholds as
    classify_point, identical arithmetic)."""
    _check_budgets(series, N, B, M)
    zs = np.asarray(zs, dtype=complex)
    sup = _tail_sup(series, zs, N)
    verdicts = np.full(zs.shape, Verdict.UNDETERMINED, dtype=np.int8)
    verdicts[sup <= B] = Verdict.CONVERGE
    verdicts[sup >= M] = Verdict.DIVERGE
    return verdicts


def conv_map(series: CoefficientSeries, grid: Grid, N: int, B: float,
             M: float) -> ConvergenceMap:
    """Classify every cell center of the grid.

    Cell verdicts equal classify_point at that center: the scan is a single
    deterministic pass over coefficient orders, vectorized over cells.
    """
    _check_budgets(series, N, B, M)
    sup = _tail_sup(series, grid.centers(), N)
    verdicts = np.full(sup.shape, Verdict.UNDETERMINED, dtype=np.int8)
    verdicts[sup <= B] = Verdict.CONVERGE
    verdicts[sup >= M] = Verdict.DIVERGE
    return ConvergenceMap(grid, verdicts, sup, N, B, M)


def level_set(series: CoefficientSeries, j: int, N: int,
              omega: RegionMask) -> RegionMask:
    """Cells of the j-th exhaustion piece where |f_n(z)| <= j^n for every
    1 <= n <= N.  These sets ascend in j."""
    if j < 1:
        raise ValueError("level index j must be >= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    if series.max_supported_n is not None and N > series.max_supported_n:
        raise ValueError(
            f"N={N} exceeds the series' supported range "
            f"(max_supported_n={series.max_supported_n})")
    base = omega_exhaustion(omega, j)
    grid = omega.grid
    log_j = math.log(j)
    ok = np.ones((grid.height, grid.width), dtype=bool)
    zs = grid.centers()
    for n in range(1, N + 1):
        ok &= series.log_mag(n, zs) / n <= log_j
    return RegionMask(grid, base.bits & ok, COMPACT)
