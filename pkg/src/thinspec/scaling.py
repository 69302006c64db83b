"""Coherence-time sweeps, power-law fits and reference timescales."""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coherence import (
    TimeGrid,
    coherence_approx,
    coherence_exact,
    extract_t_coh,
    thermal_state,
)
from .errors import (
    ParameterError,
    SweepError,
    ThresholdNotReached,
    ValidityError,
)
from .params import ModelParams

SWEEP_AXES = {"N": "n", "T": "t", "B": "b", "gamma": "gamma", "J": "j"}

# Fixed sample count per trace keeps sweep output independent of retries
# and thread count.
SWEEP_STEPS = 1024

# First-guess constant for t_coh ~ K N B / (T gamma); the first grid point
# replaces it with the measured value.
HEURISTIC_CONSTANT = 2.0

ENV_THREADS = "THINSPEC_THREADS"


@dataclass(frozen=True)
class SweepResult:
    """One-axis coherence-time sweep with its fitted power law."""

    axis: str
    grid: np.ndarray
    t_coh: np.ndarray
    exponent: float
    stderr: float
    r_squared: float
    prefactor: float


@dataclass(frozen=True)
class TimeBudget:
    """Reference timescales around one measured coherence time."""

    t_spon: float
    t_coh_measured: float
    t_manipulation: float
    ops_budget: float


def _ols_loglog(xs: np.ndarray, ys: np.ndarray):
    lx, ly = np.log(xs), np.log(ys)
    dx = lx - lx.mean()
    dy = ly - ly.mean()
    ss_tot = float((dy * dy).sum())
    # scatter at the rounding floor is constant data, not signal
    eps = np.finfo(float).eps
    floor = (16.0 * eps * max(1.0, float(np.abs(ly).max()))) ** 2 * ly.size
    if ss_tot <= floor:
        return 0.0, float(ly.mean()), 0.0, 1.0
    sxx = float((dx * dx).sum())
    slope = float((dx * dy).sum()) / sxx
    intercept = float(ly.mean() - slope * lx.mean())
    resid = ly - (slope * lx + intercept)
    ss_res = float((resid * resid).sum())
    stderr = np.sqrt(ss_res / (xs.size - 2) / sxx)
    return slope, intercept, float(stderr), 1.0 - ss_res / ss_tot


def fit_scaling_exponent(xs, ys):
    """OLS fit of log ys against log xs.

    Returns ``(exponent, stderr, r_squared)``; deterministic.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ParameterError("xs and ys must be 1-d arrays of equal length")
    if xs.size < 4:
        raise ParameterError(f"need at least 4 points, got {xs.size}")
    if (xs <= 0).any() or (ys <= 0).any():
        raise ParameterError("power-law fit requires strictly positive data")
    slope, _, stderr, r_squared = _ols_loglog(xs, ys)
    return slope, stderr, r_squared


def _max_workers(n_tasks: int) -> int:
    raw = os.environ.get(ENV_THREADS, "").strip()
    if raw in ("", "0"):
        cap = os.cpu_count() or 1
    else:
        try:
            cap = int(raw)
        except ValueError as exc:
            raise ParameterError(f"{ENV_THREADS} must be an integer, got {raw!r}") from exc
        if cap < 1:
            raise ParameterError(f"{ENV_THREADS} must be >= 1 or 0, got {cap}")
    return max(1, min(cap, n_tasks))


def _trace(params: ModelParams, method: str, grid: TimeGrid):
    if method == "exact":
        return coherence_exact(params, grid)
    thin, _ = thermal_state(params)
    return coherence_approx(params, thin, grid)


def _eval_point(params: ModelParams, method: str, threshold: float, t_pred: float):
    """t_coh at one grid point; window starts at 4x the predicted value and
    doubles up to 3 times on a miss."""
    t_end = 4.0 * t_pred
    last = None
    for _ in range(4):
        trace = _trace(params, method, TimeGrid(0.0, t_end, SWEEP_STEPS))
        try:
            return extract_t_coh(trace, threshold)
        except ThresholdNotReached as exc:
            last = exc
            t_end *= 2.0
    raise last


def sweep(
    base: ModelParams,
    axis: str,
    grid,
    method: str = "exact",
    threshold: float = 0.5,
) -> SweepResult:
    """Coherence time across one parameter axis, with a log-log fit.

    The first grid point calibrates the proportionality constant used to
    size every other point's time window, so the remaining points are
    independent and are evaluated concurrently (capped by the
    THINSPEC_THREADS environment variable).  Output is deterministic and
    independent of the thread count.
    """
    if axis not in SWEEP_AXES:
        raise ParameterError(
            f"axis must be one of {sorted(SWEEP_AXES)}, got {axis!r}"
        )
    if method not in ("exact", "approx"):
        raise ParameterError(f"method must be 'exact' or 'approx', got {method!r}")
    grid = np.asarray(grid)
    if grid.ndim != 1 or grid.size < 4:
        raise ParameterError("grid must hold at least 4 values")
    if (np.diff(grid) <= 0).any():
        raise ParameterError("grid must be strictly increasing")
    if (grid <= 0).any():
        raise ParameterError("grid values must be positive")
    field = SWEEP_AXES[axis]
    if axis == "N":
        bad = [v for v in grid.tolist() if int(v) != v or int(v) % 4 != 0]
        if bad:
            raise ParameterError(
                f"N grid values must be multiples of 4, offending point: {bad[0]}"
            )
        grid = grid.astype(int)

    points = [base.with_value(field, int(v) if axis == "N" else float(v)) for v in grid]
    for p in points:
        if p.gamma <= 0:
            raise ParameterError("sweep requires gamma > 0 at every grid point")

    def predicted(p: ModelParams, constant: float) -> float:
        return constant * p.n * p.b / (p.t * p.gamma)

    def run(p: ModelParams, constant: float, value) -> float:
        try:
            return _eval_point(p, method, threshold, predicted(p, constant))
        except ThresholdNotReached as exc:
            raise SweepError(
                f"sweep point {axis}={value}: |C| never crossed {threshold} "
                f"(min |C| = {exc.min_abs:.6g} up to t = {exc.t_end:.6g})",
                axis=axis, value=value,
            ) from exc
        except ValidityError as exc:
            raise SweepError(
                f"sweep point {axis}={value}: {exc}", axis=axis, value=value
            ) from exc

    first = run(points[0], HEURISTIC_CONSTANT, grid[0])
    constant = first * points[0].t * points[0].gamma / (points[0].n * points[0].b)
    rest = points[1:]
    if rest:
        with ThreadPoolExecutor(max_workers=_max_workers(len(rest))) as pool:
            others = list(
                pool.map(lambda pv: run(pv[0], constant, pv[1]), zip(rest, grid[1:]))
            )
    else:
        others = []
    t_coh = np.array([first] + others)

    slope, intercept, stderr, r_squared = _ols_loglog(grid.astype(float), t_coh)
    return SweepResult(
        axis=axis,
        grid=grid,
        t_coh=t_coh,
        exponent=slope,
        stderr=stderr,
        r_squared=r_squared,
        prefactor=float(np.exp(intercept)),
    )


def reference_times(params: ModelParams, t_coh_measured: float) -> TimeBudget:
    """Reference timescales: symmetry-breaking limit, rotation time, budget.

    t_spon = 2 pi N / T is the universal coherence limit of the device
    itself; t_manipulation = pi / gamma is the singlet-to-triplet rotation
    time; ops_budget counts rotations that fit inside the measured t_coh.
    """
    if params.gamma <= 0:
        raise ParameterError("reference times require gamma > 0")
    if t_coh_measured <= 0:
        raise ParameterError(f"t_coh must be positive, got {t_coh_measured}")
    t_manipulation = np.pi / params.gamma
    return TimeBudget(
        t_spon=2.0 * np.pi * params.n / params.t,
        t_coh_measured=float(t_coh_measured),
        t_manipulation=float(t_manipulation),
        ops_budget=float(t_coh_measured / t_manipulation),
    )
