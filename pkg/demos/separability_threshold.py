"""
Where squeezing starts to entangle
==================================

A squeezed thermal state is entangled only above a threshold squeezing that
depends on the thermal occupations. Below it the bath never creates
entanglement either.
"""

import numpy as np

from gausscorr import (BathParams, SqueezedThermalSpec, SystemParams, log_negativity,
                       no_entanglement_generation_check, separability_threshold,
                       squeezed_thermal_covariance)

for n1, n2 in [(0, 0), (1, 0), (3, 1), (2, 2), (5, 5)]:
    print(f"n1={n1} n2={n2}: r_s = {separability_threshold(n1, n2):.6f}")

# log-negativity of sigma(0) switches on at r_s
rs = separability_threshold(3, 1)
for r in rs + np.array([-0.1, -1e-6, 1e-6, 0.1]):
    e = log_negativity(squeezed_thermal_covariance(SqueezedThermalSpec(r, 3, 1)))
    print(f"r = {r:.7f}: E_N = {e:.3e}")

sigma = squeezed_thermal_covariance(SqueezedThermalSpec(0.9 * rs, 3, 1))
ok = no_entanglement_generation_check(sigma, SystemParams(1, 2), BathParams(0.1, 0.0),
                                      np.linspace(0, 200, 2000))
print("separable start stays separable:", ok)
