# %%
"""From four physical numbers to a full coefficient set.

Everything downstream (energies, steppers, gauge checks) runs on scalars
derived from gravity, the upper-layer depth, and the two densities.  This
script walks the derivation for the two bundled presets and shows how the
sharp-stratification asymptotics close in as the density contrast shrinks.
"""

import numpy as np

from bonls.coeffs import (
    PRESETS,
    PhysicalParams,
    asymptotic_coefficients,
    coefficient_rows,
    derive_coefficients,
    resonance_residual,
)

# %%
# the presets: two oceanic stratifications, both with gamma = 1 - rho1/rho
# of a few parts per thousand
for name, params in sorted(PRESETS.items()):
    co = derive_coefficients(params, epsilon=0.1, delta=0.25)
    print(f"{name}: gamma = {co.gamma:.4g}, c0 = {co.c0:.6g} m/s, "
          f"k0 = {co.k0:.6g} 1/m, resonance residual = "
          f"{resonance_residual(params):.3e}")

# %%
# the full table for one preset; every value carries its defining tag
co = derive_coefficients(PRESETS["andaman"], epsilon=0.1, delta=0.25)
for row_name, value, tag in coefficient_rows(co):
    print(f"{row_name:>9}  {value: .10e}   {tag}")

# %%
# the carrier wavenumber k0 = 1/(4 h1 gamma) sits where the surface group
# velocity meets the internal long-wave speed; verify by brute force on a
# fine wavenumber grid
from bonls.coeffs import omega1_prime

params = PRESETS["andaman"]
k = np.linspace(0.5 * co.k0, 1.5 * co.k0, 2001)
gap = np.abs(np.array([omega1_prime(params, kk) for kk in k]) - co.c0)
print(f"closest group-velocity match on the scan grid: k = {k[np.argmin(gap)]:.6g}")
print(f"analytic k0:                                    k = {co.k0:.6g}")

# %%
# sharp-stratification ladder: the kt coefficients approach closed-form
# small-gamma limits like gamma^2 (kt, kt2, kt4 agree to roundoff already)
print(f"{'gamma':>8}  {'kt1 deviation':>14}  {'kt3 deviation':>14}")
for gamma in (0.05, 0.02, 0.01, 0.005):
    p = PhysicalParams(g=9.81, h1=500.0, rho=1000.0, rho1=1000.0 * (1.0 - gamma))
    exact = derive_coefficients(p, epsilon=0.1, delta=0.25)
    asy = asymptotic_coefficients(p)
    dev1 = abs(exact.kt1 - asy.kt1) / abs(asy.kt1)
    dev3 = abs(exact.kt3 - asy.kt3) / abs(asy.kt3)
    print(f"{gamma:8.3f}  {dev1:14.3e}  {dev3:14.3e}")
