"""
Domain types for two bosonic modes in a common thermal bath.

Covariance matrices use the canonical ordering ``R = (x, p_x, y, p_y)`` with
``sigma_ij = <R_i R_j + R_j R_i>/2`` and ``hbar = k = 1``, so the vacuum is
``I/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

__all__ = [
    "InvalidStateError",
    "SystemParams",
    "BathParams",
    "CovarianceMatrix",
    "SqueezedThermalSpec",
    "CorrelationReport",
    "squeezed_thermal_covariance",
    "separability_threshold",
]

SYMMETRY_RTOL = 1e-12
PHYSICAL_TOL = 1e-9


class InvalidStateError(ValueError):
    """Raised when a covariance matrix violates the uncertainty principle."""


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SystemParams:
    """Two uncoupled oscillators of common mass and frequencies ``omega1``, ``omega2``."""

    omega1: float
    omega2: float
    mass: float = 1.0

    def __post_init__(self):
        for name in ("omega1", "omega2", "mass"):
            value = _finite(name, getattr(self, name))
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, value)

    @property
    def omegas(self) -> tuple[float, float]:
        return (self.omega1, self.omega2)


@dataclass(frozen=True)
class BathParams:
    """Dissipation constant and bath temperature (``temperature = 0`` allowed)."""

    lam: float
    temperature: float = 0.0

    def __post_init__(self):
        lam = _finite("lam", self.lam)
        temperature = _finite("temperature", self.temperature)
        if lam <= 0:
            raise ValueError(f"lam must be positive, got {lam}")
        if temperature < 0:
            raise ValueError(f"temperature must be non-negative, got {temperature}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "temperature", temperature)

    def coth_factor(self, omega: float) -> float:
        """``coth(omega / 2T)``, equal to 1 at zero temperature."""
        if self.temperature == 0.0:
            return 1.0
        x = omega / (2.0 * self.temperature)
        # coth(x) = 1 + 2/(e^{2x} - 1); expm1 keeps the high-T limit accurate
        if x > 40.0:
            return 1.0
        return 1.0 + 2.0 / math.expm1(2.0 * x)


@dataclass(frozen=True)
class CovarianceMatrix:
    """Immutable two-mode covariance matrix.

    Parameters
    ----------
    entries : array_like, shape (4, 4)
        Real symmetric matrix in the ``(x, p_x, y, p_y)`` ordering.
    """

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"covariance matrix must be 4x4, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix has non-finite entries")
        scale = max(np.max(np.abs(m)), 1.0)
        if np.max(np.abs(m - m.T)) > SYMMETRY_RTOL * scale:
            raise ValueError("covariance matrix is not symmetric")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def __repr__(self):
        return f"CovarianceMatrix({self.entries.tolist()!r})"

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def A(self) -> np.ndarray:
        return self.entries[:2, :2]

    @property
    def B(self) -> np.ndarray:
        return self.entries[2:, 2:]

    @property
    def C(self) -> np.ndarray:
        return self.entries[:2, 2:]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.entries))

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        """Whether both rescaled symplectic eigenvalues are at least ``1 - tol``."""
        from .measures import symplectic_eigenvalues

        try:
            nu_minus, _ = symplectic_eigenvalues(self)
        except InvalidStateError:
            return False
        return nu_minus >= 1.0 - tol


@dataclass(frozen=True)
class SqueezedThermalSpec:
    """Two-mode squeezing ``r`` applied to thermal occupations ``n1``, ``n2``."""

    r: float
    n1: float = 0.0
    n2: float = 0.0

    def __post_init__(self):
        for name in ("r", "n1", "n2"):
            value = _finite(name, getattr(self, name))
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")
            object.__setattr__(self, name, value)

    def coefficients(self) -> tuple[float, float, float]:
        """The ``(a, b, c)`` entries of the squeezed thermal covariance matrix."""
        r, n1, n2 = self.r, self.n1, self.n2
        ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
        a = n1 * ch2 + n2 * sh2 + 0.5 * math.cosh(2 * r)
        b = n1 * sh2 + n2 * ch2 + 0.5 * math.cosh(2 * r)
        c = 0.5 * (n1 + n2 + 1.0) * math.sinh(2 * r)
        return a, b, c


@dataclass(frozen=True)
class CorrelationReport:
    """All correlation measures of a single state.

    ``log_negativity`` is in bits; ``discord``, ``classical_corr`` and
    ``mutual_info`` are in nats.
    """

    time: float
    log_negativity: float
    discord: float
    classical_corr: float
    mutual_info: float
    nu_minus_hat: float
    nu_plus_hat: float
    nu_tilde_minus_hat: float
    physical: bool
    epsilon_branch: int = 1
    error: Optional[str] = None


def squeezed_thermal_covariance(spec: SqueezedThermalSpec) -> CovarianceMatrix:
    """Covariance matrix of a two-mode squeezed thermal state.

    The entries are ``a``, ``b``, ``+-c`` themselves (no extra factor 1/2), so
    that ``r = n1 = n2 = 0`` gives the vacuum ``I/2``.
    """
    a, b, c = spec.coefficients()
    return CovarianceMatrix(np.array([
        [a, 0.0, c, 0.0],
        [0.0, a, 0.0, -c],
        [c, 0.0, b, 0.0],
        [0.0, -c, 0.0, b],
    ]))


def separability_threshold(n1: float, n2: float) -> float:
    """Squeezing ``r_s`` above which a squeezed thermal state is entangled.

    >>> separability_threshold(0.0, 0.0)
    0.0
    """
    n1, n2 = _finite("n1", n1), _finite("n2", n2)
    if n1 < 0 or n2 < 0:
        raise ValueError("thermal occupations must be non-negative")
    cosh_sq = (n1 + 1.0) * (n2 + 1.0) / (n1 + n2 + 1.0)
    # rounding can push the ratio a hair below 1 when one occupation is zero
    return math.acosh(math.sqrt(max(cosh_sq, 1.0)))
