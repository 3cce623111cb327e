"""
Gaussian correlation measures of a two-mode covariance matrix.

All entropic quantities use the *rescaled* symplectic eigenvalues, i.e. the
symplectic spectrum of ``2 sigma``, which equals 1 for the vacuum. Logarithmic
negativity is reported in bits, discord, classical correlations and mutual
information in nats. Discord is for Gaussian measurements on mode 2.

Every function accepts a :class:`~gausscorr.model.CovarianceMatrix`, a 4x4
array, or an ``mpmath.matrix``. With an ``mpmath.matrix`` the arithmetic runs
at the ambient ``mpmath.mp`` precision, which is what resolves the very weak
correlations of long-time states (discord of order 1e-30 is common there).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import SimpleNamespace
from typing import Optional

import mpmath
import numpy as np

from .model import PHYSICAL_TOL, CorrelationReport, InvalidStateError

__all__ = [
    "SymplecticInvariants",
    "symplectic_invariants",
    "symplectic_eigenvalues",
    "ptranspose_eigenvalue",
    "g_function",
    "log_negativity",
    "entropy_f",
    "discord_epsilon",
    "gaussian_discord",
    "classical_correlations",
    "mutual_information",
    "correlation_report",
]

DISCRIMINANT_TOL = 1e-12
BRANCH_TIE_RTOL = 1e-12
CLAMP_TOL = 1e-10

_FLOAT = SimpleNamespace(sqrt=math.sqrt, log=math.log, log2=math.log2, zero=0.0)
_MP = SimpleNamespace(sqrt=mpmath.sqrt, log=mpmath.log,
                      log2=lambda x: mpmath.log(x, 2), zero=mpmath.mpf(0))


def _backend(x):
    return _MP if isinstance(x, mpmath.mpf) else _FLOAT


def _entries(sigma):
    if isinstance(sigma, mpmath.matrix):
        return [[sigma[i, j] for j in range(4)] for i in range(4)]
    s = np.asarray(sigma, dtype=float)
    if s.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got {s.shape}")
    return s.tolist()


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _adj2(m):
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def _mul2(x, y):
    return tuple(tuple(x[i][0] * y[0][j] + x[i][1] * y[1][j] for j in range(2))
                 for i in range(2))


@dataclass(frozen=True)
class SymplecticInvariants:
    """Local symplectic invariants of a two-mode covariance matrix.

    ``alpha``, ``beta``, ``gamma``, ``delta`` are ``4 det A``, ``4 det B``,
    ``4 det C`` and ``16 det sigma``. ``delta_minus_ab`` holds
    ``delta - alpha*beta`` evaluated without cancellation; it vanishes for
    product states. ``coupling_trace`` is ``tr(adj B C^T adj A C)``.
    ``top`` optionally carries the larger squared (unrescaled) symplectic
    eigenvalue of ``sigma`` and of its partial transpose, found by a symmetric
    eigensolver, which stays accurate when the two eigenvalues nearly coincide.
    ``source`` keeps the float entries so that ill-conditioned closed forms
    can be re-evaluated at higher precision.
    """

    det_a: float
    det_b: float
    det_c: float
    det_sigma: float
    delta_minus_ab: float
    coupling_trace: float
    top: Optional[tuple] = None
    source: Optional[tuple] = field(default=None, repr=False, compare=False)


    @property
    def alpha(self):
        return 4 * self.det_a

    @property
    def beta(self):
        return 4 * self.det_b

    @property
    def gamma(self):
        return 4 * self.det_c

    @property
    def delta(self):
        return 16 * self.det_sigma

    @property
    def seralian(self):
        return self.det_a + self.det_b + 2 * self.det_c

    @property
    def seralian_pt(self):
        return self.det_a + self.det_b - 2 * self.det_c

    def discriminant(self, transposed: bool = False):
        """``S^2 - 4 det sigma`` for the seralian ``S`` (partially transposed if asked).

        Expanded so that no two O(1) terms cancel when both symplectic
        eigenvalues approach each other.
        """
        sign = -1 if transposed else 1
        diff = self.det_a - self.det_b
        return (diff * diff + 4 * sign * self.det_c * (self.det_a + self.det_b)
                + 4 * self.coupling_trace)

    def top_squared(self, transposed: bool = False):
        """Larger squared symplectic eigenvalue ``S/2 + sqrt(S^2/4 - det sigma)``."""
        if self.top is not None:
            return self.top[1 if transposed else 0]
        seralian = self.seralian_pt if transposed else self.seralian
        ops = _backend(seralian)
        disc = self.discriminant(transposed)
        if disc < 0:
            if disc < -DISCRIMINANT_TOL * max(1, seralian * seralian):
                raise InvalidStateError(f"negative symplectic discriminant {float(disc)}")
            disc = ops.zero
        return (seralian + ops.sqrt(disc)) / 2


_OMEGA = np.array([[0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0],
                   [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0]])
_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


def _top_eigen_squared(s, transposed):
    # with sigma = L L^T, L^T Omega^T sigma Omega L is symmetric and has the
    # squared symplectic eigenvalues as its spectrum, each twice
    try:
        low = np.linalg.cholesky(s)
    except np.linalg.LinAlgError:
        return None
    if transposed:
        # F L factors the partial transpose F sigma F
        s, low = _FLIP @ s @ _FLIP, _FLIP @ low
    k = low.T @ _OMEGA.T @ s @ _OMEGA @ low
    return float(np.linalg.eigvalsh(0.5 * (k + k.T))[-1])


def _top_float(inv, s, transposed):
    # the closed form loses half the digits when the discriminant is a small
    # difference of large terms; switch to the eigensolver only then
    diff = inv.det_a - inv.det_b
    terms = (diff * diff + 4 * abs(inv.det_c) * (abs(inv.det_a) + abs(inv.det_b))
             + 4 * abs(inv.coupling_trace))
    disc = inv.discriminant(transposed)
    scale = abs(inv.det_a) + abs(inv.det_b)
    if terms <= 4 * scale * math.sqrt(max(disc, 0.0)):
        return inv.top_squared(transposed)
    top = _top_eigen_squared(s, transposed)
    return inv.top_squared(transposed) if top is None else top


def symplectic_invariants(sigma) -> SymplecticInvariants:
    s = _entries(sigma)
    a = ((s[0][0], s[0][1]), (s[1][0], s[1][1]))
    b = ((s[2][2], s[2][3]), (s[3][2], s[3][3]))
    c = ((s[0][2], s[0][3]), (s[1][2], s[1][3]))
    ct = ((c[0][0], c[1][0]), (c[0][1], c[1][1]))
    det_a, det_b, det_c = _det2(a), _det2(b), _det2(c)
    adj_a_c = _mul2(_adj2(a), c)
    # det sigma - det A det B = (det C)^2 - tr(adj B C^T adj A C)
    prod = _mul2(_mul2(_adj2(b), ct), adj_a_c)
    trace = prod[0][0] + prod[1][1]
    coupling = det_c * det_c - trace
    if det_a > 0:
        # Schur complement keeps det sigma accurate for strongly correlated states
        shift = _mul2(ct, adj_a_c)
        schur = tuple(tuple(b[i][j] - shift[i][j] / det_a for j in range(2)) for i in range(2))
        det_sigma = det_a * _det2(schur)
    else:
        det_sigma = det_a * det_b + coupling
    inv = SymplecticInvariants(det_a, det_b, det_c, det_sigma, 16 * coupling, trace)
    if isinstance(det_sigma, mpmath.mpf):
        return inv
    m = np.array(s, dtype=float)
    return replace(inv, top=(_top_float(inv, m, False), _top_float(inv, m, True)),
                   source=tuple(map(tuple, s)))


def _symplectic_pair(inv, transposed=False):
    # rescaled pair: the larger from S/2 + sqrt(S^2/4 - det sigma), the smaller
    # from the product of the pair, 16 det sigma
    det_sigma = inv.det_sigma
    ops = _backend(det_sigma)
    if det_sigma <= 0:
        raise InvalidStateError(f"det sigma must be positive, got {float(det_sigma)}")
    plus_sq = 4 * inv.top_squared(transposed)
    if plus_sq <= 0:
        raise InvalidStateError("non-positive symplectic invariant")
    minus_sq = 16 * det_sigma / plus_sq
    return ops.sqrt(minus_sq), ops.sqrt(plus_sq)


def symplectic_eigenvalues(sigma) -> tuple[float, float]:
    """Rescaled symplectic eigenvalues ``(nu_minus, nu_plus)`` of ``2 sigma``.

    A state is physical iff ``nu_minus >= 1``.

    >>> symplectic_eigenvalues(np.eye(4) / 2)
    (1.0, 1.0)
    """
    lo, hi = _symplectic_pair(symplectic_invariants(sigma))
    return float(lo), float(hi)


def ptranspose_eigenvalue(sigma) -> float:
    """Smallest rescaled symplectic eigenvalue of the partial transpose.

    The state is separable iff the returned value is at least 1.
    """
    return float(_symplectic_pair(symplectic_invariants(sigma), transposed=True)[0])


def _g(inv):
    # rationalised form of S/2 - sqrt(S^2/4 - det sigma)
    return inv.det_sigma / inv.top_squared(transposed=True)


def g_function(sigma) -> float:
    """``g = S/2 - sqrt(S^2/4 - det sigma)`` with ``S`` the partial-transpose seralian.

    Evaluated as ``det sigma / (S/2 + sqrt(...))``, which is algebraically the
    same and does not cancel when ``g`` is small.
    """
    return float(_g(symplectic_invariants(sigma)))


def _log_negativity(inv):
    g = _g(inv)
    value = -_backend(g).log2(4 * g) / 2
    return float(value) if value > 0 else 0.0


def log_negativity(sigma) -> float:
    """Logarithmic negativity in bits, ``max(0, -log2(4 g) / 2)``."""
    return _log_negativity(symplectic_invariants(sigma))


def entropy_f(x):
    """Entropy (nats) of a one-mode thermal state with rescaled eigenvalue ``x``.

    ``f(x) = (x+1)/2 ln((x+1)/2) - (x-1)/2 ln((x-1)/2)``, with ``f(1) = 0``.
    Values in ``[1 - 1e-9, 1]`` are clamped to 1; anything lower raises
    ``InvalidStateError``. Returns an ``mpf`` for ``mpf`` input.
    """
    ops = _backend(x)
    if not x >= 1 - PHYSICAL_TOL:
        raise InvalidStateError(f"entropy_f needs x >= 1, got {float(x)}")
    if x <= 1:
        return ops.zero
    hi, lo = (x + 1) / 2, (x - 1) / 2
    return hi * ops.log(hi) - lo * ops.log(lo)


# a square-root argument below this fraction of its largest term has lost
# too many digits to cancellation in double precision
CANCEL_RTOL = 1e-6
_MP_RETRY_DPS = 40


def _epsilon_first(alpha, beta, gamma, dab):
    # returns (epsilon, well_conditioned)
    ops = _backend(beta)
    bm1 = beta - 1
    if bm1 <= 0:
        # a pure mode 2 cannot be correlated with mode 1
        return alpha, True
    # delta - alpha = dab + alpha (beta - 1)
    shift = bm1 * (dab + alpha * bm1)
    g2 = gamma * gamma
    inner = g2 + shift
    ok = inner >= CANCEL_RTOL * g2
    if inner < 0:
        inner = ops.zero
    return (2 * g2 + shift + 2 * abs(gamma) * ops.sqrt(inner)) / (bm1 * bm1), ok


def _epsilon_second(alpha, beta, gamma, delta, dab):
    ops = _backend(beta)
    g2 = gamma * gamma
    cross = 2 * g2 * (delta + alpha * beta)
    disc = g2 * g2 + dab * dab - cross
    ok = disc >= CANCEL_RTOL * max(g2 * g2, dab * dab, cross)
    if disc < 0:
        disc = ops.zero
    return (alpha * beta - g2 + delta - ops.sqrt(disc)) / (2 * beta), ok


def discord_epsilon(inv: SymplecticInvariants, with_branch: bool = False):
    """Minimal conditional determinant ``epsilon`` for Gaussian measurements on mode 2.

    Parameters
    ----------
    inv : SymplecticInvariants
    with_branch : bool, optional
        Also return which closed form was used: 1 when
        ``(delta - alpha beta)^2 <= (beta + 1) gamma^2 (alpha + delta)``,
        2 otherwise, and 0 when both sides agree to a relative 1e-12 and the
        smaller of the two forms was taken.
    """
    alpha, beta, gamma, delta = inv.alpha, inv.beta, inv.gamma, inv.delta
    dab = inv.delta_minus_ab
    lhs = dab * dab
    rhs = (beta + 1) * gamma * gamma * (alpha + delta)
    if abs(lhs - rhs) <= BRANCH_TIE_RTOL * max(lhs, rhs) and rhs > 0:
        (e1, ok1), (e2, ok2) = (_epsilon_first(alpha, beta, gamma, dab),
                                _epsilon_second(alpha, beta, gamma, delta, dab))
        eps, ok, branch = min(e1, e2), ok1 and ok2, 0
    elif lhs <= rhs:
        (eps, ok), branch = _epsilon_first(alpha, beta, gamma, dab), 1
    else:
        (eps, ok), branch = _epsilon_second(alpha, beta, gamma, delta, dab), 2
    if not ok and inv.source is not None:
        # near-pure states: redo the whole evaluation from the exact float entries
        with mpmath.workdps(_MP_RETRY_DPS):
            eps_mp, branch = discord_epsilon(symplectic_invariants(mpmath.matrix(inv.source)),
                                             with_branch=True)
            eps = float(eps_mp)
    if eps < 0:
        raise InvalidStateError(f"negative epsilon {float(eps)}")
    return (eps, branch) if with_branch else eps


class _Entropies:
    """The five entropic terms shared by discord, C and I."""

    def __init__(self, inv: SymplecticInvariants):
        ops = _backend(inv.det_sigma)
        if inv.alpha <= 0 or inv.beta <= 0:
            raise InvalidStateError("reduced states must have positive determinant")
        self.nu = _symplectic_pair(inv)
        self.eps, self.branch = discord_epsilon(inv, with_branch=True)
        self.f_alpha = entropy_f(ops.sqrt(inv.alpha))
        self.f_beta = entropy_f(ops.sqrt(inv.beta))
        self.f_nu = entropy_f(self.nu[0]) + entropy_f(self.nu[1])
        self.f_eps = entropy_f(ops.sqrt(self.eps))

    def discord(self):
        return _clamp(self.f_beta - self.f_nu + self.f_eps)

    def classical(self):
        return _clamp(self.f_alpha - self.f_eps)

    def mutual(self):
        return _clamp(self.f_alpha + self.f_beta - self.f_nu)


def _clamp(value):
    if value < 0:
        if value < -CLAMP_TOL:
            raise InvalidStateError(f"correlation measure is negative: {float(value)}")
        return 0.0
    return float(value)


def gaussian_discord(sigma) -> float:
    """Gaussian quantum discord (nats), measurement on mode 2."""
    return _Entropies(symplectic_invariants(sigma)).discord()


def classical_correlations(sigma) -> float:
    """Gaussian classical correlations (nats), measurement on mode 2."""
    return _Entropies(symplectic_invariants(sigma)).classical()


def mutual_information(sigma) -> float:
    """Quantum mutual information (nats)."""
    return _Entropies(symplectic_invariants(sigma)).mutual()


def correlation_report(sigma, time: float = 0.0) -> CorrelationReport:
    """Evaluate every measure on ``sigma``.

    An unphysical state yields ``physical=False``, NaN measures and the error
    message instead of an exception.
    """
    try:
        inv = symplectic_invariants(sigma)
        ent = _Entropies(inv)
        nu_tilde = _symplectic_pair(inv, transposed=True)[0]
        return CorrelationReport(
            time=float(time),
            log_negativity=_log_negativity(inv),
            discord=ent.discord(),
            classical_corr=ent.classical(),
            mutual_info=ent.mutual(),
            nu_minus_hat=float(ent.nu[0]),
            nu_plus_hat=float(ent.nu[1]),
            nu_tilde_minus_hat=float(nu_tilde),
            physical=bool(ent.nu[0] >= 1 - PHYSICAL_TOL),
            epsilon_branch=ent.branch,
        )
    except InvalidStateError as exc:
        nan = float("nan")
        return CorrelationReport(float(time), nan, nan, nan, nan, nan, nan, nan,
                                 False, -1, str(exc))
