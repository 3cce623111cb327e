"""
Exact covariance dynamics under the thermal Gaussian semigroup.

The covariance matrix obeys ``dsigma/dt = Y sigma + sigma Y^T + 2 D`` with a
block-diagonal drift ``Y`` and diagonal thermal diffusion ``D``, so

    sigma(t) = M(t) [sigma(0) - sigma_inf] M(t)^T + sigma_inf,   M(t) = exp(Y t).

``M(t)`` is evaluated in closed form; no generic matrix exponential is used.
"""

from __future__ import annotations

import warnings

import mpmath
import numpy as np

from .model import BathParams, CovarianceMatrix, SystemParams

__all__ = [
    "DriftMatrix",
    "DiffusionMatrix",
    "build_drift",
    "build_diffusion",
    "propagator",
    "propagators",
    "steady_state",
    "evolve",
    "evolve_many",
    "evolve_mp",
    "lyapunov_residual",
]


class DriftMatrix(np.ndarray):
    """4x4 drift matrix; a plain ndarray subclass tagged for readability."""


class DiffusionMatrix(np.ndarray):
    """4x4 diagonal diffusion matrix."""


def _frozen(arr, cls):
    out = np.asarray(arr, dtype=float).view(cls)
    out.setflags(write=False)
    return out


def build_drift(sys: SystemParams, bath: BathParams) -> DriftMatrix:
    m, lam = sys.mass, bath.lam
    y = np.zeros((4, 4))
    for i, w in enumerate(sys.omegas):
        k = 2 * i
        y[k:k + 2, k:k + 2] = [[-lam, 1.0 / m], [-m * w * w, -lam]]
    return _frozen(y, DriftMatrix)


def build_diffusion(sys: SystemParams, bath: BathParams) -> DiffusionMatrix:
    """Diffusion coefficients that make the Gibbs state stationary.

    ``D_xx = lam coth(w/2T) / (2 m w)`` and ``D_pp = lam m w coth(w/2T) / 2``
    for each mode; every cross coefficient vanishes.
    """
    m, lam = sys.mass, bath.lam
    diag = []
    for w in sys.omegas:
        k = bath.coth_factor(w)
        diag += [0.5 * lam * k / (m * w), 0.5 * lam * m * w * k]
    return _frozen(np.diag(diag), DiffusionMatrix)


def propagators(sys: SystemParams, bath: BathParams, times) -> np.ndarray:
    """Closed-form ``exp(Y t)`` for every ``t`` in ``times``.

    Returns
    -------
    ndarray, shape (len(times), 4, 4)
    """
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValueError("times must be finite and non-negative")
    m = sys.mass
    decay = np.exp(-bath.lam * t)
    out = np.zeros((t.size, 4, 4))
    for i, w in enumerate(sys.omegas):
        k = 2 * i
        c, s = np.cos(w * t), np.sin(w * t)
        out[:, k, k] = decay * c
        out[:, k, k + 1] = decay * s / (m * w)
        out[:, k + 1, k] = -decay * m * w * s
        out[:, k + 1, k + 1] = decay * c
    return out


def propagator(sys: SystemParams, bath: BathParams, t: float) -> np.ndarray:
    """Closed-form ``M(t) = exp(Y t)``; raises ``ValueError`` for ``t < 0``."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return propagators(sys, bath, [t])[0]


def lyapunov_residual(y, sigma, d) -> float:
    """Max-norm of ``Y sigma + sigma Y^T + 2 D``."""
    y, s, d = (np.asarray(v, dtype=float) for v in (y, sigma, d))
    return float(np.max(np.abs(y @ s + s @ y.T + 2.0 * d)))


# upper-triangle index pairs of a symmetric 4x4 matrix
_SYM_INDEX = [(i, j) for i in range(4) for j in range(i, 4)]


def _solve_symmetric_lyapunov(y, d):
    # 10-unknown system: one unknown per independent entry of sigma
    n = len(_SYM_INDEX)
    lhs = np.zeros((n, n))
    for col, (i, j) in enumerate(_SYM_INDEX):
        e = np.zeros((4, 4))
        e[i, j] = e[j, i] = 1.0
        image = y @ e + e @ y.T
        lhs[:, col] = [image[p, q] for p, q in _SYM_INDEX]
    rhs = np.array([-2.0 * d[p, q] for p, q in _SYM_INDEX])
    x = np.linalg.solve(lhs, rhs)
    sigma = np.zeros((4, 4))
    for value, (i, j) in zip(x, _SYM_INDEX):
        sigma[i, j] = sigma[j, i] = value
    return sigma


def steady_state(sys: SystemParams, bath: BathParams) -> CovarianceMatrix:
    """Asymptotic covariance solving ``Y s + s Y^T = -2 D``.

    For the thermal diffusion coefficients this is the product Gibbs state
    ``diag(coth/(2 m w1), m w1 coth/2, coth/(2 m w2), m w2 coth/2)``.
    """
    y = np.asarray(build_drift(sys, bath))
    d = np.asarray(build_diffusion(sys, bath))
    if np.max(np.linalg.eigvals(y).real) >= 0:
        raise ValueError("drift matrix is not Hurwitz; no steady state")
    return CovarianceMatrix(_solve_symmetric_lyapunov(y, d))


def evolve_many(sigma0, sys: SystemParams, bath: BathParams, times) -> np.ndarray:
    """Covariance matrices at each time, as an array of shape (n, 4, 4).

    This is the vectorised workhorse behind :func:`evolve` and the sweeps.
    """
    s0 = np.asarray(sigma0, dtype=float)
    s_inf = steady_state(sys, bath).entries
    m = propagators(sys, bath, times)
    out = np.einsum("nij,jk,nlk->nil", m, s0 - s_inf, m) + s_inf
    return 0.5 * (out + np.swapaxes(out, 1, 2))


def evolve(sigma0, sys: SystemParams, bath: BathParams, t: float,
           check: bool = False) -> CovarianceMatrix:
    """State at time ``t`` evolved from ``sigma0``.

    Parameters
    ----------
    sigma0 : CovarianceMatrix or array_like
        Initial covariance matrix.
    sys, bath : SystemParams, BathParams
    t : float
        Non-negative time.
    check : bool, optional
        Emit a ``RuntimeWarning`` if the result fails the physicality test.
        Nothing is raised, so roundoff near the uncertainty bound cannot abort
        a sweep.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return sigma0 if isinstance(sigma0, CovarianceMatrix) else CovarianceMatrix(sigma0)
    sigma = CovarianceMatrix(evolve_many(sigma0, sys, bath, [t])[0])
    if check and not sigma.is_physical():
        warnings.warn(f"state at t={t} violates the uncertainty bound", RuntimeWarning)
    return sigma


def evolve_mp(sigma0, sys: SystemParams, bath: BathParams, t) -> mpmath.matrix:
    """:func:`evolve` carried out in ``mpmath`` at the ambient precision.

    The float inputs are taken as exact binary values. Use this together with
    the measures, under one ``mpmath.workdps`` block, when correlations have
    decayed below double precision.
    """
    t = mpmath.mpf(t)
    if t < 0:
        raise ValueError(f"t must be non-negative, got {float(t)}")
    m, lam = mpmath.mpf(sys.mass), mpmath.mpf(bath.lam)
    s0 = mpmath.matrix(np.asarray(sigma0, dtype=float).tolist())
    s_inf = mpmath.zeros(4, 4)
    prop = mpmath.zeros(4, 4)
    decay = mpmath.exp(-lam * t)
    for i, w in enumerate(sys.omegas):
        w = mpmath.mpf(w)
        if bath.temperature == 0:
            k = mpmath.mpf(1)
        else:
            k = mpmath.coth(w / (2 * mpmath.mpf(bath.temperature)))
        j = 2 * i
        s_inf[j, j] = k / (2 * m * w)
        s_inf[j + 1, j + 1] = m * w * k / 2
        c, s = mpmath.cos(w * t), mpmath.sin(w * t)
        prop[j, j] = prop[j + 1, j + 1] = decay * c
        prop[j, j + 1] = decay * s / (m * w)
        prop[j + 1, j] = -decay * m * w * s
    return prop * (s0 - s_inf) * prop.T + s_inf
