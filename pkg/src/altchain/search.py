"""Peak location and parameter optimisation for the transfer probability.

The slowest spectral frequency sets the natural time scale: the first
high peak of an even chain sits near pi / lambda_min, where lambda_min
is the smallest positive eigenvalue (the hyperbolic pair).  Searches
therefore scan a window proportional to that scale on a grid dense
enough to resolve the fastest beat, then polish the winner by
golden-section.  All searches are deterministic: grids are fixed by
the parameters alone, tie-breaks take the earliest time (or smallest
ratio), and concurrent evaluation reduces in input order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._util import ordered_map
from .chain import ChainSpec
from .dynamics import TransferCurve, transfer_probability
from .errors import HorizonError, ValidationError
from .spectral import EigenSystem, eigensystem_for

_WINDOW_FACTOR = 1.3
_GRID_STEP_CAP = 0.01
_FAST_SAMPLES_PER_HALF_PERIOD = 50
_TIME_TOL = 1e-8
_DELTA_GRID = 0.002
_DELTA_TOL = 1e-4
_FIXED_TIME_GRID = 0.001
_FIXED_TIME_TOL = 1e-6
_DEGENERACY_FLOOR = 1e-12
_MAX_GRID_POINTS = 20_000_000

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TransferTriad:
    """A located transfer peak: ratio, time, probability, time-scale."""

    delta_h: float
    t_h: float
    p_h: float
    lambda_min_estimate: float


@dataclass(frozen=True)
class SweepRow:
    """One chain length in a fixed-ratio sweep; note marks failures."""

    n_sites: int
    delta: float
    t_h1: float
    p_h1: float
    estimate: float
    note: str = ""


def _golden_max(
    f: Callable[[float], float], lo: float, hi: float, xtol: float
) -> tuple[float, float]:
    """Golden-section maximisation on [lo, hi] to width xtol."""
    a, b = float(lo), float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _peak_window(eig: EigenSystem, d1: float) -> tuple[float, float, float]:
    """(lambda_min, window length, grid step) from the spectral extremes."""
    lam_min = eig.smallest_positive()
    if lam_min is None or lam_min < _DEGENERACY_FLOOR * d1:
        raise HorizonError(
            f"smallest positive eigenvalue {lam_min} is below the degeneracy "
            f"floor {_DEGENERACY_FLOOR * d1:.3e}; the peak window is unbounded"
        )
    lam_max = float(eig.eigenvalues[0])
    window = _WINDOW_FACTOR * math.pi / lam_min
    step = min(_GRID_STEP_CAP, math.pi / (_FAST_SAMPLES_PER_HALF_PERIOD * lam_max))
    return lam_min, window, step


def first_peak(spec: ChainSpec) -> TransferTriad:
    """Locate the first high transfer peak of one chain.

    Scans (0, 1.3*pi/lambda_min] on a grid no coarser than 0.01 and
    than a fiftieth of the fastest half-period, takes the global
    sampled maximum (earliest on exact ties), and polishes it by
    golden-section to 1e-8 in t.
    """
    eig = eigensystem_for(spec)
    lam_min, window, step = _peak_window(eig, spec.d1)
    count = int(math.ceil(window / step))
    if count > _MAX_GRID_POINTS:
        raise HorizonError(
            f"peak window needs {count} samples (cap {_MAX_GRID_POINTS}); "
            "the spectrum is too close to degenerate to scan"
        )
    actual = window / count
    best_p = -1.0
    best_t = actual
    chunk = 65536
    for start in range(1, count + 1, chunk):
        idx = np.arange(start, min(start + chunk, count + 1))
        times = idx * actual
        probs = np.asarray(transfer_probability(eig, times))
        k = int(np.argmax(probs))
        if probs[k] > best_p:
            best_p = float(probs[k])
            best_t = float(times[k])
    lo = max(best_t - actual, actual * 1e-3)
    hi = min(best_t + actual, window)
    t_h, p_h = _golden_max(lambda t: float(transfer_probability(eig, t)), lo, hi, _TIME_TOL)
    return TransferTriad(
        delta_h=spec.delta,
        t_h=t_h,
        p_h=p_h,
        lambda_min_estimate=math.pi / lam_min,
    )


def _validate_delta_range(delta_lo: float, delta_hi: float) -> None:
    if not (delta_lo > 0.0 and delta_hi > 0.0):
        raise ValidationError("delta range must be positive")
    if not delta_lo < delta_hi:
        raise ValidationError(
            f"delta range is empty: [{delta_lo}, {delta_hi}]"
        )


def optimize_delta(n_sites: int, delta_lo: float, delta_hi: float) -> TransferTriad:
    """Best first-peak probability over a ratio range, even chains.

    Evaluates first_peak on a 0.002-spaced ratio grid, then refines
    the best ratio by golden-section to 1e-4.  The range must reach
    above the closed-form threshold (N+2)/N; below it the first-peak
    mechanism this search targets does not operate.
    """
    probe = ChainSpec(n_sites, 1.0)
    if probe.n_sites % 2 != 0:
        raise ValidationError(f"optimize_delta needs an even chain, got N={n_sites}")
    _validate_delta_range(delta_lo, delta_hi)
    if delta_hi <= probe.even_regime_threshold():
        raise ValidationError(
            f"ratio range [{delta_lo}, {delta_hi}] lies entirely at or below the "
            f"closed-form threshold {probe.even_regime_threshold():.6g}; "
            "no high-transfer regime inside"
        )

    count = int(math.floor((delta_hi - delta_lo) / _DELTA_GRID + 1e-9))
    grid = delta_lo + _DELTA_GRID * np.arange(count + 1)
    if grid[-1] < delta_hi - 1e-12:
        grid = np.append(grid, delta_hi)

    def peak_probability(delta: float) -> float:
        return first_peak(ChainSpec(n_sites, float(delta))).p_h

    values = ordered_map(peak_probability, list(grid))
    best = int(np.argmax(values))
    lo = max(delta_lo, float(grid[best]) - _DELTA_GRID)
    hi = min(delta_hi, float(grid[best]) + _DELTA_GRID)
    delta_h, _ = _golden_max(peak_probability, lo, hi, _DELTA_TOL)
    return first_peak(ChainSpec(n_sites, delta_h))


def fixed_time_optimize(
    n_sites: int, t_fixed: float, delta_lo: float, delta_hi: float
) -> TransferTriad:
    """Best ratio for arrival at one prescribed time.

    Grid (step 0.001) over the ratio range plus golden-section
    refinement of P(delta, t_fixed); the reported triad keeps the
    prescribed time.
    """
    if not t_fixed > 0.0:
        raise ValidationError(f"t_fixed must be positive, got {t_fixed}")
    _validate_delta_range(delta_lo, delta_hi)
    ChainSpec(n_sites, delta_lo)  # validates n_sites

    count = int(math.floor((delta_hi - delta_lo) / _FIXED_TIME_GRID + 1e-9))
    grid = delta_lo + _FIXED_TIME_GRID * np.arange(count + 1)
    if grid[-1] < delta_hi - 1e-12:
        grid = np.append(grid, delta_hi)

    def arrival_probability(delta: float) -> float:
        eig = eigensystem_for(ChainSpec(n_sites, float(delta)))
        return float(transfer_probability(eig, t_fixed))

    values = ordered_map(arrival_probability, list(grid))
    best = int(np.argmax(values))
    lo = max(delta_lo, float(grid[best]) - _FIXED_TIME_GRID)
    hi = min(delta_hi, float(grid[best]) + _FIXED_TIME_GRID)
    delta_h, p_h = _golden_max(arrival_probability, lo, hi, _FIXED_TIME_TOL)
    eig = eigensystem_for(ChainSpec(n_sites, delta_h))
    lam_min = eig.smallest_positive()
    estimate = math.pi / lam_min if lam_min is not None else math.inf
    return TransferTriad(
        delta_h=delta_h, t_h=t_fixed, p_h=p_h, lambda_min_estimate=estimate
    )


def table1_sweep(delta: float, n_list: list[int]) -> list[SweepRow]:
    """First-peak triads across chain lengths at one fixed ratio.

    Rows come back sorted by length.  A length whose peak window is
    numerically out of reach is flagged in its note and filled with
    NaN; the sweep continues.
    """
    if not n_list:
        raise ValidationError("n_list must not be empty")
    lengths = sorted(set(int(n) for n in n_list))

    def one_row(n: int) -> SweepRow:
        try:
            triad = first_peak(ChainSpec(n, delta))
        except HorizonError as exc:
            return SweepRow(
                n_sites=n, delta=delta, t_h1=math.nan, p_h1=math.nan,
                estimate=math.nan, note=str(exc),
            )
        return SweepRow(
            n_sites=n, delta=delta, t_h1=triad.t_h, p_h1=triad.p_h,
            estimate=triad.lambda_min_estimate,
        )

    return ordered_map(one_row, lengths)


def dwell_window(curve: TransferCurve, threshold: float) -> tuple[float, float] | None:
    """Contiguous time interval around the sampled peak with P >= threshold.

    Returns the (earliest, latest) sample times of the run of
    consecutive samples containing the global maximum, or None when
    even the peak stays below the threshold.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValidationError(f"threshold must lie in (0, 1], got {threshold}")
    probs = curve.probabilities
    peak = int(np.argmax(probs))
    if probs[peak] < threshold:
        return None
    left = peak
    while left > 0 and probs[left - 1] >= threshold:
        left -= 1
    right = peak
    while right < probs.size - 1 and probs[right + 1] >= threshold:
        right += 1
    return float(curve.times[left]), float(curve.times[right])
