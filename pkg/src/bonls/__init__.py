"""Two-layer deep-water wave model: coefficients, identities, solver."""

__version__ = "0.1.0"
