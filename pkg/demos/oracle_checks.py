"""
Cross-checking the closed-form dynamics
=======================================

The production code propagates covariance matrices with a closed-form
exponential. Here the same state is pushed through RK4 and a generic Pade
exponential, and the symplectic spectrum and discord minimisation are
compared with brute-force routes.
"""

import numpy as np

from gausscorr import (BathParams, SqueezedThermalSpec, SystemParams, build_diffusion,
                       build_drift, evolve, squeezed_thermal_covariance, symplectic_eigenvalues)
from gausscorr.measures import discord_epsilon, symplectic_invariants
from gausscorr.oracles import (epsilon_bruteforce, expm_generic, lyapunov_solve_vectorized,
                               rk4_integrate, symplectic_spectrum_bruteforce)

sys, bath = SystemParams(1.3, 2.7, mass=0.8), BathParams(0.15, 1.5)
sigma0 = squeezed_thermal_covariance(SqueezedThermalSpec(1.0, 1.0, 0.5))
y, d = np.asarray(build_drift(sys, bath)), np.asarray(build_diffusion(sys, bath))
t = 7.0

exact = evolve(sigma0, sys, bath, t).entries
rk4 = rk4_integrate(sigma0, y, d, t, step=1e-4)
m, s_inf = expm_generic(y * t), lyapunov_solve_vectorized(y, d)
pade = m @ (sigma0.entries - s_inf) @ m.T + s_inf
print("max |closed form - RK4| :", np.abs(exact - rk4).max())
print("max |closed form - Pade|:", np.abs(exact - pade).max())

print("symplectic spectrum (invariants):", symplectic_eigenvalues(exact))
print("symplectic spectrum (eigvals)   :", symplectic_spectrum_bruteforce(exact))

print("epsilon (closed form):", discord_epsilon(symplectic_invariants(exact)))
print("epsilon (search)     :", epsilon_bruteforce(exact))
