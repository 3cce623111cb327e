"""
Sudden-death detection and time x temperature x dissipation sweeps.
"""

from __future__ import annotations

import math
import platform
import time as _time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from . import __version__
from .dynamics import evolve_many, evolve_mp
from .measures import correlation_report, log_negativity, ptranspose_eigenvalue
from .model import (BathParams, CorrelationReport, SqueezedThermalSpec, SystemParams,
                    squeezed_thermal_covariance)

__all__ = [
    "DeathScan",
    "scan_entanglement",
    "sudden_death_time",
    "no_entanglement_generation_check",
    "TimeGrid",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "trajectory",
    "run_sweep",
]

MIN_SCAN_SAMPLES = 1000
DEATH_TIME_RESOLUTION = 1e-8
SEPARABLE_TOL = 1e-10


@dataclass(frozen=True)
class DeathScan:
    """Result of an entanglement scan over ``[0, t_max]``.

    ``death_time`` is the first time the state becomes separable, or ``None``.
    ``revivals`` lists later sampled intervals ``(start, end)`` during which the
    log-negativity exceeded ``SEPARABLE_TOL`` again.
    """

    death_time: Optional[float]
    revivals: list = field(default_factory=list)
    n_samples: int = 0


def _scan_samples(sys: SystemParams, t_max: float) -> int:
    # the covariance oscillates at up to 2*omega_max; sample well below pi/omega_max
    dt_max = math.pi / (8.0 * max(sys.omegas))
    return max(MIN_SCAN_SAMPLES, int(math.ceil(t_max / dt_max))) + 1


def _separability_gap(sigma0, sys, bath, times):
    # nu_tilde - 1: negative while entangled
    states = evolve_many(sigma0, sys, bath, times)
    return np.array([ptranspose_eigenvalue(s) - 1.0 for s in states])


def scan_entanglement(sigma0, sys: SystemParams, bath: BathParams,
                      t_max: Optional[float] = None) -> DeathScan:
    """Locate the first separability crossing and any later re-entanglement.

    Raises ``ValueError`` if ``sigma0`` is not entangled.
    """
    if log_negativity(sigma0) <= 0:
        raise ValueError("initial state is separable; no sudden death to find")
    if t_max is None:
        t_max = 50.0 / bath.lam
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    times = np.linspace(0.0, t_max, _scan_samples(sys, t_max))
    gap = _separability_gap(sigma0, sys, bath, times)
    dead = np.flatnonzero(gap >= 0)
    if dead.size == 0:
        return DeathScan(None, [], times.size)
    i = dead[0]
    lo, hi = times[i - 1], times[i]
    while hi - lo > DEATH_TIME_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if _separability_gap(sigma0, sys, bath, [mid])[0] < 0:
            lo = mid
        else:
            hi = mid

    # near nu_tilde = 1 the gap carries roundoff; count a revival only
    # once E_N clears the clamp tolerance
    entangled = gap < -SEPARABLE_TOL * math.log(2.0)
    revivals = []
    k = i
    while k < times.size:
        if entangled[k]:
            start = k
            while k < times.size and entangled[k]:
                k += 1
            revivals.append((float(times[start]), float(times[min(k, times.size - 1)])))
        k += 1
    return DeathScan(float(hi), revivals, times.size)


def sudden_death_time(sigma0, sys: SystemParams, bath: BathParams,
                      t_max: Optional[float] = None) -> Optional[float]:
    """First time at which an entangled state becomes separable.

    Parameters
    ----------
    sigma0 : CovarianceMatrix or array_like
        Entangled initial state.
    sys, bath : SystemParams, BathParams
    t_max : float, optional
        End of the scan window, ``50 / lambda`` by default.

    Returns
    -------
    float or None
        The crossing time, resolved by bisection to 1e-8, or ``None`` if the
        state stays entangled on every sample in ``[0, t_max]``.
    """
    return scan_entanglement(sigma0, sys, bath, t_max).death_time


def no_entanglement_generation_check(sigma0, sys: SystemParams, bath: BathParams,
                                     times, tol: float = SEPARABLE_TOL) -> bool:
    """True iff a separable ``sigma0`` stays separable at every time in ``times``.

    Log-negativities up to ``tol`` count as zero. Raises ``ValueError`` for an
    entangled ``sigma0``.
    """
    if log_negativity(sigma0) > tol:
        raise ValueError("initial state is entangled")
    states = evolve_many(sigma0, sys, bath, times)
    return all(log_negativity(s) <= tol for s in states)


@dataclass(frozen=True)
class TimeGrid:
    """Sampling times on ``[t_min, t_max]``.

    For ``spacing="log"`` with ``t_min = 0`` the grid is ``0`` followed by
    ``n_points - 1`` geometrically spaced times from ``log_floor`` to ``t_max``.
    """

    t_min: float
    t_max: float
    n_points: int
    spacing: str = "linear"
    log_floor: float = 1e-3

    def __post_init__(self):
        if self.t_min < 0 or self.t_max < self.t_min:
            raise ValueError("need 0 <= t_min <= t_max")
        if self.n_points < 1:
            raise ValueError("n_points must be positive")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    def times(self) -> np.ndarray:
        if self.n_points == 1:
            return np.array([float(self.t_min)])
        if self.spacing == "linear":
            return np.linspace(self.t_min, self.t_max, self.n_points)
        if self.t_min > 0:
            return np.geomspace(self.t_min, self.t_max, self.n_points)
        return np.concatenate([[0.0], np.geomspace(self.log_floor, self.t_max, self.n_points - 1)])


@dataclass(frozen=True)
class SweepSpec:
    """A full time x temperature x dissipation grid from one initial state.

    ``dps`` switches the evaluation to ``mpmath`` with that many digits, which
    is needed to resolve discord once it falls below about 1e-12.
    """

    sys: SystemParams
    temperatures: Sequence[float]
    lambdas: Sequence[float]
    initial: SqueezedThermalSpec
    grid: TimeGrid
    dps: Optional[int] = None

    def __post_init__(self):
        if len(self.temperatures) == 0 or len(self.lambdas) == 0:
            raise ValueError("temperature and lambda grids must be non-empty")
        object.__setattr__(self, "temperatures", tuple(float(t) for t in self.temperatures))
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))


@dataclass(frozen=True)
class SweepRow:
    t: float
    temperature: float
    lam: float
    report: CorrelationReport


@dataclass
class SweepResult:
    """Rows ordered by lambda, then temperature, then time."""

    spec: SweepSpec
    rows: list
    metadata: dict

    def select(self, temperature=None, lam=None) -> list:
        return [row for row in self.rows
                if (temperature is None or row.temperature == temperature)
                and (lam is None or row.lam == lam)]

    def column(self, name: str, temperature=None, lam=None) -> np.ndarray:
        return np.array([getattr(row.report, name) for row in self.select(temperature, lam)])


def trajectory(sigma0, sys: SystemParams, bath: BathParams, times,
               dps: Optional[int] = None) -> list:
    """Correlation reports along one trajectory.

    With ``dps`` set, states and measures are computed in ``mpmath`` at that
    many significant digits.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if dps is None:
        states = evolve_many(sigma0, sys, bath, times)
        return [correlation_report(s, t) for s, t in zip(states, times)]
    with mpmath.workdps(dps):
        return [correlation_report(evolve_mp(sigma0, sys, bath, t), t) for t in times]


def _run_cell(args):
    sigma0, sys, temperature, lam, times, dps = args
    return trajectory(sigma0, sys, BathParams(lam, temperature), times, dps)


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Evaluate every measure at every grid point.

    Each (lambda, T) trajectory is independent; with ``threads > 1`` they run
    in a process pool. Row order never depends on execution order.
    """
    sigma0 = squeezed_thermal_covariance(spec.initial)
    times = spec.grid.times()
    cells = [(lam, temp) for lam in spec.lambdas for temp in spec.temperatures]
    jobs = [(sigma0, spec.sys, temp, lam, times, spec.dps) for lam, temp in cells]
    started = _time.time()
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(job) for job in jobs]
    rows = [SweepRow(float(t), temp, lam, rep)
            for (lam, temp), reports in zip(cells, results)
            for t, rep in zip(times, reports)]
    metadata = {
        "version": __version__,
        "python": platform.python_version(),
        "started": started,
        "elapsed": _time.time() - started,
        "n_rows": len(rows),
    }
    return SweepResult(spec, rows, metadata)
