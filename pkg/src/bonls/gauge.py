"""Unimodular gauge transformation and gauged derivatives of the wave field.

The gauge factor Psi = exp(-(2id/3a) * antiderivative(r)) turns the
projected third-derivative terms of the long-wave equation into first-order
ones; here it serves as a runtime diagnostic layer.  On a periodic window
the antiderivative only exists for mean-zero r, which the evolution
preserves, so a nonzero mean is rejected rather than silently projected
out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import ModelCoefficients
from .spectral import ComplexField, Grid, RealField, deriv, project

__all__ = [
    "NonZeroMean",
    "GaugedState",
    "antiderivative",
    "gauge",
    "reconstruct_dr",
    "gauge_ode_residual",
]

_MEAN_TOL = 1e-10


class NonZeroMean(ValueError):
    """Field has a mean too large for a periodic antiderivative."""


@dataclass(frozen=True)
class GaugedState:
    """Gauge factors and gauged one-sided derivatives of a real field.

    psi_minus is the exact complex conjugate of psi_plus, and w_minus
    agrees with conj(w_plus) to roundoff; both redundant halves are kept
    because downstream formulas use them symmetrically.
    """

    psi_plus: ComplexField
    psi_minus: ComplexField
    w_plus: ComplexField
    w_minus: ComplexField
    source: RealField

    @property
    def grid(self) -> Grid:
        return self.source.grid


def antiderivative(f: RealField) -> RealField:
    """Mean-zero periodic antiderivative, by spectral division by ik.

    The k = 0 mode of the result is zero; the Nyquist mode is dropped as
    in every odd multiplier.  Raises NonZeroMean if f has a mean larger
    than the enforcement tolerance.
    """
    grid = f.grid
    spec = f.spectrum
    mean = abs(spec[0]) / grid.n
    if mean > _MEAN_TOL:
        raise NonZeroMean(f"field mean {mean:.3e} exceeds {_MEAN_TOL:.0e}; "
                          "a periodic antiderivative needs mean zero")
    k = grid.k
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(k != 0.0, 1.0 / (1j * k), 0.0)
    inv[grid.nyquist] = 0.0
    out = spec * inv
    out[0] = 0.0
    return RealField(grid, np.fft.ifft(out).real)


def gauge(r: RealField, coeffs: ModelCoefficients) -> GaugedState:
    """Gauge factors exp(-+(2id/3a) * antiderivative(r)) and w-+ for r.

    The exponent is purely imaginary, so the factors are unimodular by
    construction; w+- = Psi+- d/dx P+- r.
    """
    grid = r.grid
    phase = -(2.0 * coeffs.d / (3.0 * coeffs.a)) * antiderivative(r).values
    psi_p = np.exp(1j * phase)
    psi_m = np.conj(psi_p)
    dp_plus = deriv(project(r, 1)).values
    dp_minus = deriv(project(r, -1)).values
    return GaugedState(
        psi_plus=ComplexField(grid, psi_p),
        psi_minus=ComplexField(grid, psi_m),
        w_plus=ComplexField(grid, psi_p * dp_plus),
        w_minus=ComplexField(grid, psi_m * dp_minus),
        source=r,
    )


def reconstruct_dr(gs: GaugedState) -> RealField:
    """Recover d/dx of the source field from the gauged pair.

    Psi- w+ + Psi+ w- collapses to (P+ + P-) applied to the derivative
    because the gauge factors are unimodular; the roundoff imaginary part
    is discarded.
    """
    v = gs.psi_minus.values * gs.w_plus.values + gs.psi_plus.values * gs.w_minus.values
    return RealField(gs.grid, v.real)


def gauge_ode_residual(gs: GaugedState, coeffs: ModelCoefficients) -> float:
    """Max-norm defect of the defining relation 3a dPsi/dx + 2id Psi r = 0."""
    dpsi = deriv(gs.psi_plus).values
    res = 3.0 * coeffs.a * dpsi + 2.0j * coeffs.d * gs.psi_plus.values * gs.source.values
    return float(np.max(np.abs(res)))
