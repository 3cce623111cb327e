"""
Independent numerical routes used only to verify the production code.

Nothing in the production path imports this module. Each oracle solves the
same problem by a generic method: a Pade matrix exponential instead of the
closed-form propagator, a Kronecker-vectorised Lyapunov solve instead of the
reduced symmetric one, classical RK4 on the covariance ODE instead of the
exact solution, eigenvalues of ``i Omega 2 sigma`` instead of the invariant
formula, and a direct search over Gaussian measurements instead of the
closed-form discord ``epsilon``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize, minimize_scalar

__all__ = [
    "expm_generic",
    "rk4_step",
    "rk4_integrate",
    "symplectic_form",
    "symplectic_spectrum_bruteforce",
    "lyapunov_solve_vectorized",
    "epsilon_bruteforce",
]

# [8/8] Pade coefficients of exp: c_k = (2q-k)! q! / ((2q)! k! (q-k)!)
_PADE_Q = 8
_PADE = [math.factorial(2 * _PADE_Q - k) * math.factorial(_PADE_Q)
         / (math.factorial(2 * _PADE_Q) * math.factorial(k) * math.factorial(_PADE_Q - k))
         for k in range(_PADE_Q + 1)]


def expm_generic(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a [8/8] Pade core."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    norm = np.max(np.sum(np.abs(a), axis=0)) if a.size else 0.0
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    x = a / 2.0 ** squarings
    power = np.eye(n)
    num = _PADE[0] * np.eye(n)
    den = _PADE[0] * np.eye(n)
    for k in range(1, _PADE_Q + 1):
        power = power @ x
        num = num + _PADE[k] * power
        den = den + (-1) ** k * _PADE[k] * power
    out = np.linalg.solve(den, num)
    for _ in range(squarings):
        out = out @ out
    return out


def _rhs(sigma, y, d):
    return y @ sigma + sigma @ y.T + 2.0 * d


def rk4_step(sigma, y, d, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of ``dsigma/dt = Y sigma + sigma Y^T + 2D``."""
    sigma, y, d = (np.asarray(v, dtype=float) for v in (sigma, y, d))
    k1 = _rhs(sigma, y, d)
    k2 = _rhs(sigma + 0.5 * h * k1, y, d)
    k3 = _rhs(sigma + 0.5 * h * k2, y, d)
    k4 = _rhs(sigma + h * k3, y, d)
    return sigma + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rk4_step_matrix(y, d, h):
    # augmented state w = (vec sigma, 1) obeys w' = G w; for a linear
    # autonomous system one RK4 step is exactly the degree-4 Taylor polynomial
    n = y.shape[0]
    g = np.zeros((n * n + 1, n * n + 1))
    g[:-1, :-1] = np.kron(y, np.eye(n)) + np.kron(np.eye(n), y)
    g[:-1, -1] = 2.0 * d.ravel()
    hg = h * g
    step = np.eye(n * n + 1)
    term = np.eye(n * n + 1)
    for k in range(1, 5):
        term = term @ hg / k
        step = step + term
    return step


def rk4_integrate(sigma0, y, d, t: float, step: float = 1e-4) -> np.ndarray:
    """RK4 solution at time ``t`` with ``ceil(t/step)`` equal steps.

    The ``n`` steps are composed by repeated squaring of the one-step map,
    which gives the RK4 iterate ``n`` without an ``n``-long Python loop. See
    :func:`rk4_step` for the plain stepping form.
    """
    if step <= 0 or t < 0:
        raise ValueError("need step > 0 and t >= 0")
    sigma0, y, d = (np.asarray(v, dtype=float) for v in (sigma0, y, d))
    if t == 0:
        return sigma0.copy()
    n_steps = int(math.ceil(t / step - 1e-9))
    h = t / n_steps
    w = np.append(sigma0.ravel(), 1.0)
    w = np.linalg.matrix_power(_rk4_step_matrix(y, d, h), n_steps) @ w
    out = w[:-1].reshape(sigma0.shape)
    return 0.5 * (out + out.T)


def symplectic_form(n_modes: int = 2) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_spectrum_bruteforce(sigma) -> tuple[float, float]:
    """Sorted moduli of the eigenvalues of ``i Omega (2 sigma)``, one per pair."""
    s = 2.0 * np.asarray(sigma, dtype=float)
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form() @ s)))
    return float(moduli[0]), float(moduli[2])


def lyapunov_solve_vectorized(y, d) -> np.ndarray:
    """Solve ``Y s + s Y^T = -2 D`` as one 16x16 linear system."""
    y, d = np.asarray(y, dtype=float), np.asarray(d, dtype=float)
    n = y.shape[0]
    lhs = np.kron(y, np.eye(n)) + np.kron(np.eye(n), y)
    sol = np.linalg.solve(lhs, -2.0 * d.ravel()).reshape(n, n)
    return 0.5 * (sol + sol.T)


def _conditional_det(v, log_s, theta):
    a, b, c = v[:2, :2], v[2:, 2:], v[:2, 2:]
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    seed = rot @ np.diag([np.exp(log_s), np.exp(-log_s)]) @ rot.T
    return np.linalg.det(a - c @ np.linalg.solve(b + seed, c.T))


def _homodyne_det(v, theta):
    # s -> infinity limit of the seed: (B + S)^-1 -> w w^T / (w^T B w)
    a, b, c = v[:2, :2], v[2:, 2:], v[:2, 2:]
    w = np.array([-np.sin(theta), np.cos(theta)])
    cw = c @ w
    return np.linalg.det(a - np.outer(cw, cw) / (w @ b @ w))


def epsilon_bruteforce(sigma, log_span: float = 12.0) -> float:
    """Minimal conditional determinant of mode 1 over pure Gaussian measurements on mode 2.

    Searches the measurement seed ``R(theta) diag(s, 1/s) R(theta)^T`` (in
    vacuum-equals-identity units) on a grid in ``(log s, theta)`` with
    ``|log s| <= log_span``, adds the exact homodyne limit for every angle,
    and polishes the best candidates with Nelder-Mead and a bounded scalar
    search respectively.
    """
    v = 2.0 * np.asarray(sigma, dtype=float)
    best, x0 = np.inf, (0.0, 0.0)
    for log_s in np.linspace(-log_span, log_span, 97):
        for theta in np.linspace(0.0, np.pi, 73):
            val = _conditional_det(v, log_s, theta)
            if val < best:
                best, x0 = val, (log_s, theta)
    res = minimize(lambda x: _conditional_det(v, x[0], x[1]), x0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000})
    angles = np.linspace(0.0, np.pi, 721)
    hom = [_homodyne_det(v, th) for th in angles]
    k = int(np.argmin(hom))
    step = angles[1]
    polished = minimize_scalar(lambda th: _homodyne_det(v, th), method="bounded",
                               bounds=(angles[k] - step, angles[k] + step),
                               options={"xatol": 1e-13})
    return float(min(best, res.fun, hom[k], polished.fun))
