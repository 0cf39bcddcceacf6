# %%
"""The unimodular gauge factor, from closed form to random data.

Multiplying the positive-wavenumber part of r by Psi = exp(-(2id/3a) int r)
trades the worst nonlinear derivative term for a zeroth-order one.  Whether
an implementation got this right is checkable at runtime: Psi must stay on
the unit circle, it must satisfy a first-order ODE in x, and a combination
of the gauged quantities must reproduce d/dx r exactly.
"""

import numpy as np

from bonls.coeffs import PhysicalParams, derive_coefficients
from bonls.gauge import antiderivative, gauge, gauge_ode_residual, reconstruct_dr
from bonls.spectral import Grid, RealField, band_limited_noise, deriv

co = derive_coefficients(PhysicalParams(g=1.0, h1=1.0, rho=2.0, rho1=1.0),
                         epsilon=0.35, delta=0.25)
grid = Grid(256, 40.0)
lam = 2.0 * co.d / (3.0 * co.a)
print(f"gauge strength 2d/(3a) = {lam:.6g}")

# %%
# on a single cosine the phase integral is elementary:
#   Psi = exp(-i lam sin(kx)/k)
k = 2.0 * np.pi * 4 / grid.length
r = RealField(grid, np.cos(k * grid.x))
gs = gauge(r, co)
closed = np.exp(-1j * lam * np.sin(k * grid.x) / k)
print("closed-form phase defect:", float(np.max(np.abs(gs.psi_plus.values - closed))))

# %%
# the three runtime checks on random narrow-band data
rng = np.random.default_rng(9)
print(f"{'n':>5}  {'| |Psi|-1 |':>12}  {'ode residual':>12}  {'rec defect':>12}")
for n in (128, 256, 512):
    g = Grid(n, 40.0)
    r = band_limited_noise(g, rng, amplitude=0.1, keep=1.0 / 6.0)
    gs = gauge(r, co)
    mod = float(np.max(np.abs(np.abs(gs.psi_plus.values) - 1.0)))
    ode = gauge_ode_residual(gs, co)
    rec = float(np.max(np.abs(reconstruct_dr(gs).values - deriv(r).values)))
    print(f"{n:5d}  {mod:12.3e}  {ode:12.3e}  {rec:12.3e}")

# %%
# reconstruct_dr really is a derivative: integrating it back recovers the
# oscillatory part of r
g = Grid(256, 40.0)
r = band_limited_noise(g, rng, amplitude=0.1, keep=1.0 / 6.0)
back = antiderivative(reconstruct_dr(gauge(r, co))).values
print("round trip through the antiderivative:",
      float(np.max(np.abs(back - (r.values - r.values.mean())))))
