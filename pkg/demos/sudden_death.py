"""
Entanglement sudden death at every temperature
==============================================

A strongly squeezed thermal state loses all of its entanglement at a finite
time, even when the bath sits at zero temperature.
"""

import numpy as np

from gausscorr import (BathParams, SqueezedThermalSpec, SystemParams, evolve_many,
                       log_negativity, squeezed_thermal_covariance, sudden_death_time)

# two oscillators with frequencies 1 and 2, squeezing r = 3 on occupations (3, 1)
sys = SystemParams(omega1=1.0, omega2=2.0)
sigma0 = squeezed_thermal_covariance(SqueezedThermalSpec(r=3.0, n1=3.0, n2=1.0))
print(f"E_N at t = 0: {log_negativity(sigma0):.4f} bits")

# death time for a few bath temperatures and dissipation strengths
for lam in (0.1, 0.2, 0.4):
    times = [sudden_death_time(sigma0, sys, BathParams(lam, T)) for T in (0, 0.5, 1, 2, 5)]
    print(f"lambda={lam}: " + "  ".join(f"{t:8.4f}" for t in times))

# a coarse look at the log-negativity running into zero at T = 1
t = np.linspace(0, 5, 11)
en = [log_negativity(s) for s in evolve_many(sigma0, sys, BathParams(0.1, 1.0), t)]
for ti, e in zip(t, en):
    print(f"t={ti:4.1f}  E_N={e:.5f}")
