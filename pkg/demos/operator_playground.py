# %%
"""Spectral operators on the periodic grid, one identity at a time."""

import numpy as np

from bonls.coeffs import PhysicalParams, derive_coefficients
from bonls.spectral import (
    Grid,
    RealField,
    absd,
    band_limited_noise,
    dealias_mask,
    deriv,
    hilbert,
    inner,
    project,
    propagator,
)

grid = Grid(256, 2.0 * np.pi)
rng = np.random.default_rng(42)

# %%
# the Hilbert transform rotates cos into sin, mode by mode
f = RealField(grid, np.cos(3.0 * grid.x))
print("max |H cos(3x) - sin(3x)| =",
      float(np.max(np.abs(hilbert(f).values - np.sin(3.0 * grid.x)))))

# %%
# H^2 = -I on mean-zero data, and |D| factors as d/dx after H
noise = band_limited_noise(grid, rng)
print("max |H(H f) + f|        =",
      float(np.max(np.abs(hilbert(hilbert(noise)).values + noise.values))))
print("max ||D|f - d/dx H f|   =",
      float(np.max(np.abs(absd(noise).values - deriv(hilbert(noise)).values))))

# %%
# the wavenumber projections resolve the identity and encode H
plus, minus = project(noise, +1), project(noise, -1)
print("max |P+ f + P- f - f|   =",
      float(np.max(np.abs(plus.values + minus.values - noise.values))))
print("max |-i(P+ - P-)f - Hf| =",
      float(np.max(np.abs(-1j * (plus.values - minus.values)
                          - hilbert(noise).values))))

# %%
# exact linear flows: unitary, and a group under composition
co = derive_coefficients(PhysicalParams(g=1.0, h1=1.0, rho=2.0, rho1=1.0),
                         epsilon=0.35, delta=0.25)
t1, t2 = 0.8, 0.5
once = propagator("V", co, t1 + t2, noise)
twice = propagator("V", co, t2, propagator("V", co, t1, noise))
print("norm drift under V(t):   ",
      abs(propagator("V", co, 1.7, noise).norm() - noise.norm()))
print("group-law defect:        ",
      float(np.max(np.abs(once.values - twice.values))))

# %%
# aliasing in one picture: mode 77 passes the two-thirds mask (77 <= 256/3),
# but its square lives at mode 154, beyond Nyquist, and folds back to
# 256 - 154 = 102 disguised as resolved content.  The fold of any in-band
# product lands at |j| >= n/3, so masking the product removes it exactly.
m = 77
tall = RealField(grid, np.cos(m * grid.x))
prod_spec = np.fft.fft(tall.values * tall.values) / grid.n
masked = prod_spec * dealias_mask(grid)
folded = grid.n - 2 * m
print(f"squared mode {m}: alias folds onto mode {folded}")
print(f"  raw product    |spec[{folded}]| = {abs(prod_spec[folded]):.3e}")
print(f"  masked product |spec[{folded}]| = {abs(masked[folded]):.3e}")

# %%
# Parseval bookkeeping for the inner product used by every energy integral
g_ = band_limited_noise(grid, rng)
lhs = inner(noise, g_)
rhs = grid.dx / grid.n * np.sum(np.conj(noise.spectrum) * g_.spectrum)
print("Parseval defect:         ", abs(complex(lhs) - complex(rhs)))
