"""Configuration-driven command line: tables, curves, checks, simulations.

Subcommands
    coeffs              coefficient report for one parameter set
    dispersion          tabulated dispersion branches and quartic residuals
    verify              every cross-module identity check
    verify-hamiltonian  the coordinate-equivalence subset
    verify-gauge        the gauge-transformation subset
    simulate            time integration with snapshot/diagnostic artifacts
    sweep               fan a simulation out over one config key

Configs are flat ``key = value`` text files with dotted keys (see
_DEFAULTS for the full key set); unknown keys are errors, so a typo fails
fast instead of silently running defaults.  Exit codes: 0 ok, 1
verification failure, 2 config error, 3 blow-up.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import __version__
from . import coeffs as _coeffs
from . import hamiltonian as _hamiltonian
from .coeffs import (
    DomainError,
    PhysicalParams,
    PRESETS,
    SymbolTable,
    asymptotic_coefficients,
    coefficient_rows,
    derive_coefficients,
    dispersion_internal,
    dispersion_surface,
    quartic_residual,
    resonance_residual,
)
from .gauge import gauge, gauge_ode_residual, reconstruct_dr
from .hamiltonian import FourField, eval_H2, eval_H3, h3_terms, inverse_transform, normal_transform
from .solver import (
    BlowUp,
    StepperConfig,
    SystemState,
    bo_soliton,
    gaussian_envelope,
    run,
)
from .spectral import (
    ComplexField,
    Grid,
    RealField,
    absd,
    band_limited_noise,
    deriv,
    gaussian_bump,
    hilbert,
    project,
)

log = logging.getLogger("bonls")

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


class ConfigError(ValueError):
    """A config key is unknown, malformed, or violates a precondition."""


def _fmt(x) -> str:
    """Round-trip-safe text for one number (17 significant digits)."""
    if isinstance(x, bool):
        return "on" if x else "off"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

_DEFAULTS: dict[str, str] = {
    "physical.g": "9.81",
    "physical.h1": "500.0",
    "physical.rho": "1000.0",
    "physical.rho1": "997.0",
    "model.epsilon": "0.1",
    "model.delta": "0.25",
    "grid.n": "512",
    "grid.length": "40.0",
    "stepper.scheme": "strang-split",
    "stepper.dt": "1e-3",
    "stepper.dealias": "on",
    "stepper.strict_dealias": "off",
    "stepper.cfl_guard": "10.0",
    "run.t_end": "10.0",
    "run.diagnostics_every": "100",
    "run.snapshot_every": "0",
    "run.system": "reduced",
    "run.time_scale": "tau",
    "run.gauge_diagnostics": "on",
    "ic.r.kind": "gaussian",
    "ic.r.amplitude": "0.1",
    "ic.r.width": "2.0",
    "ic.r.center": "0.0",
    "ic.r.nu": "1.0",
    "ic.r.keep": "0.16666666666666666",
    "ic.r.mean_zero": "on",
    "ic.q.kind": "gaussian",
    "ic.q.amplitude": "0.05",
    "ic.q.width": "3.0",
    "ic.q.center": "0.0",
    "ic.q.carrier_mode": "3",
    "dispersion.k_min": "1e-3",
    "dispersion.k_max": "10.0",
    "dispersion.count": "100",
    "verify.n": "256",
    "verify.length": "40.0",
    "verify.fields": "5",
    "sweep.key": "",
    "sweep.values": "",
    "sweep.workers": "4",
    "output.dir": "out",
    "seed": "0",
}

_R_KINDS = ("gaussian", "soliton", "noise", "zero")
_Q_KINDS = ("gaussian", "zero")


def _to_bool(key: str, text: str) -> bool:
    low = text.strip().lower()
    if low in ("on", "true", "yes", "1"):
        return True
    if low in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected on/off, got {text!r}")


def _to_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def _to_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def load_settings(path: str | None) -> dict[str, str]:
    """Defaults overlaid with one config file; unknown keys are errors."""
    settings = dict(_DEFAULTS)
    if path is None:
        return settings
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in settings:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        settings[key] = value
    return settings


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Fully validated settings for one invocation.

    Built through from_settings, which checks every module precondition
    up front so a bad configuration never starts computing.
    """

    params: PhysicalParams
    epsilon: float
    delta: float
    grid: Grid
    stepper: StepperConfig
    t_end: float
    diagnostics_every: int
    snapshot_every: int | None
    system: str
    time_scale: str
    gauge_diagnostics: bool
    ic_r_kind: str
    ic_r_amplitude: float
    ic_r_width: float
    ic_r_center: float
    ic_r_nu: float
    ic_r_keep: float
    ic_r_mean_zero: bool
    ic_q_kind: str
    ic_q_amplitude: float
    ic_q_width: float
    ic_q_center: float
    ic_q_carrier: int
    k_min: float
    k_max: float
    k_count: int
    verify_n: int
    verify_length: float
    verify_fields: int
    sweep_key: str
    sweep_values: tuple[str, ...]
    sweep_workers: int
    out_dir: str
    seed: int
    settings: dict[str, str]

    @classmethod
    def from_settings(cls, settings: dict[str, str]) -> "RunConfig":
        get = settings.__getitem__
        try:
            params = PhysicalParams(
                g=_to_float("physical.g", get("physical.g")),
                h1=_to_float("physical.h1", get("physical.h1")),
                rho=_to_float("physical.rho", get("physical.rho")),
                rho1=_to_float("physical.rho1", get("physical.rho1")),
            )
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        epsilon = _to_float("model.epsilon", get("model.epsilon"))
        if not 0.0 < epsilon < 1.0:
            raise ConfigError("model.epsilon must lie strictly between 0 and 1")
        delta = _to_float("model.delta", get("model.delta"))
        if not 0.0 < delta < 0.5:
            raise ConfigError("model.delta must lie strictly between 0 and 1/2")
        try:
            grid = Grid(_to_int("grid.n", get("grid.n")),
                        _to_float("grid.length", get("grid.length")))
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from None
        try:
            stepper = StepperConfig(
                dt=_to_float("stepper.dt", get("stepper.dt")),
                scheme=get("stepper.scheme").strip(),
                dealias=_to_bool("stepper.dealias", get("stepper.dealias")),
                cfl_guard=_to_float("stepper.cfl_guard", get("stepper.cfl_guard")),
                strict_dealias=_to_bool("stepper.strict_dealias",
                                        get("stepper.strict_dealias")),
            )
        except ValueError as exc:
            raise ConfigError(f"stepper: {exc}") from None
        t_end = _to_float("run.t_end", get("run.t_end"))
        if not t_end > 0.0:
            raise ConfigError("run.t_end must be positive")
        cadence = _to_int("run.diagnostics_every", get("run.diagnostics_every"))
        if cadence < 1:
            raise ConfigError("run.diagnostics_every must be a positive step count")
        snap = _to_int("run.snapshot_every", get("run.snapshot_every"))
        if snap < 0:
            raise ConfigError("run.snapshot_every must be zero (ends only) or positive")
        system = get("run.system").strip()
        if system not in ("reduced", "full"):
            raise ConfigError(f"run.system must be reduced or full, got {system!r}")
        time_scale = get("run.time_scale").strip()
        if time_scale not in ("tau", "tau1"):
            raise ConfigError(f"run.time_scale must be tau or tau1, got {time_scale!r}")
        if time_scale == "tau1" and system != "full":
            raise ConfigError("run.time_scale tau1 applies to the full system only")
        ic_r_kind = get("ic.r.kind").strip()
        if ic_r_kind not in _R_KINDS:
            raise ConfigError(f"ic.r.kind must be one of {_R_KINDS}, got {ic_r_kind!r}")
        ic_q_kind = get("ic.q.kind").strip()
        if ic_q_kind not in _Q_KINDS:
            raise ConfigError(f"ic.q.kind must be one of {_Q_KINDS}, got {ic_q_kind!r}")
        ic_r_width = _to_float("ic.r.width", get("ic.r.width"))
        ic_q_width = _to_float("ic.q.width", get("ic.q.width"))
        if ic_r_kind == "gaussian" and not ic_r_width > 0.0:
            raise ConfigError("ic.r.width must be positive")
        if ic_q_kind == "gaussian" and not ic_q_width > 0.0:
            raise ConfigError("ic.q.width must be positive")
        ic_r_nu = _to_float("ic.r.nu", get("ic.r.nu"))
        if ic_r_kind == "soliton" and not ic_r_nu > 0.0:
            raise ConfigError("ic.r.nu must be positive")
        ic_r_keep = _to_float("ic.r.keep", get("ic.r.keep"))
        if not 0.0 < ic_r_keep <= 1.0:
            raise ConfigError("ic.r.keep must lie in (0, 1]")
        k_min = _to_float("dispersion.k_min", get("dispersion.k_min"))
        k_max = _to_float("dispersion.k_max", get("dispersion.k_max"))
        k_count = _to_int("dispersion.count", get("dispersion.count"))
        if not 0.0 < k_min < k_max:
            raise ConfigError("dispersion range must satisfy 0 < k_min < k_max")
        if k_count < 2:
            raise ConfigError("dispersion.count must be at least 2")
        try:
            verify_grid = Grid(_to_int("verify.n", get("verify.n")),
                               _to_float("verify.length", get("verify.length")))
        except ValueError as exc:
            raise ConfigError(f"verify grid: {exc}") from None
        verify_fields = _to_int("verify.fields", get("verify.fields"))
        if verify_fields < 1:
            raise ConfigError("verify.fields must be at least 1")
        sweep_values = tuple(v.strip() for v in get("sweep.values").split(",") if v.strip())
        sweep_workers = _to_int("sweep.workers", get("sweep.workers"))
        if sweep_workers < 1:
            raise ConfigError("sweep.workers must be at least 1")
        return cls(
            params=params, epsilon=epsilon, delta=delta, grid=grid, stepper=stepper,
            t_end=t_end, diagnostics_every=cadence, snapshot_every=snap or None,
            system=system, time_scale=time_scale,
            gauge_diagnostics=_to_bool("run.gauge_diagnostics", get("run.gauge_diagnostics")),
            ic_r_kind=ic_r_kind,
            ic_r_amplitude=_to_float("ic.r.amplitude", get("ic.r.amplitude")),
            ic_r_width=ic_r_width,
            ic_r_center=_to_float("ic.r.center", get("ic.r.center")),
            ic_r_nu=ic_r_nu, ic_r_keep=ic_r_keep,
            ic_r_mean_zero=_to_bool("ic.r.mean_zero", get("ic.r.mean_zero")),
            ic_q_kind=ic_q_kind,
            ic_q_amplitude=_to_float("ic.q.amplitude", get("ic.q.amplitude")),
            ic_q_width=ic_q_width,
            ic_q_center=_to_float("ic.q.center", get("ic.q.center")),
            ic_q_carrier=_to_int("ic.q.carrier_mode", get("ic.q.carrier_mode")),
            k_min=k_min, k_max=k_max, k_count=k_count,
            verify_n=verify_grid.n, verify_length=verify_grid.length,
            verify_fields=verify_fields,
            sweep_key=get("sweep.key").strip(), sweep_values=sweep_values,
            sweep_workers=sweep_workers,
            out_dir=get("output.dir").strip(), seed=_to_int("seed", get("seed")),
            settings=dict(settings),
        )

    @property
    def verify_grid(self) -> Grid:
        return Grid(self.verify_n, self.verify_length)

    def coefficients(self):
        return derive_coefficients(self.params, self.epsilon, self.delta)


def build_initial_state(cfg: RunConfig) -> SystemState:
    """Initial (r, q) from the ic.* settings; the seed feeds noise kinds only."""
    grid = cfg.grid
    rng = np.random.default_rng(cfg.seed)
    kind = cfg.ic_r_kind
    if kind == "zero":
        r_vals = np.zeros(grid.n)
    elif kind == "noise":
        r_vals = band_limited_noise(grid, rng, amplitude=cfg.ic_r_amplitude,
                                    keep=cfg.ic_r_keep,
                                    mean_zero=cfg.ic_r_mean_zero).values
    else:
        if kind == "gaussian":
            r_vals = gaussian_bump(grid, cfg.ic_r_width, cfg.ic_r_center).values
        else:
            r_vals = bo_soliton(grid, cfg.ic_r_nu, cfg.ic_r_center).values
        if cfg.ic_r_mean_zero:
            r_vals = r_vals - r_vals.mean()
        peak = float(np.max(np.abs(r_vals)))
        if peak > 0.0:
            r_vals = r_vals * (cfg.ic_r_amplitude / peak)
    if cfg.ic_q_kind == "zero":
        q = ComplexField(grid, np.zeros(grid.n, dtype=complex))
    else:
        q = gaussian_envelope(grid, cfg.ic_q_amplitude, cfg.ic_q_width,
                              cfg.ic_q_center, cfg.ic_q_carrier)
    return SystemState(RealField(grid, r_vals), q)


# --------------------------------------------------------------------------
# coeffs / dispersion reports
# --------------------------------------------------------------------------

def cmd_coeffs(cfg: RunConfig, args) -> int:
    co = cfg.coefficients()
    rows = coefficient_rows(co)
    asy = {}
    if cfg.params.gamma < 0.1:
        a = asymptotic_coefficients(cfg.params)
        asy = {name: getattr(a, name) for name in ("kt", "kt1", "kt2", "kt3", "kt4")}
    header = ["coefficient", "value", "formula"]
    if asy:
        header += ["small-gamma", "rel-deviation"]
    table = []
    for name, value, tag in rows:
        line = [name, _fmt(value), tag]
        if asy:
            if name in asy:
                dev = abs(value - asy[name]) / max(abs(asy[name]), 1e-300)
                line += [_fmt(asy[name]), _fmt(dev)]
            else:
                line += ["", ""]
        table.append(line)
    _print_table(header, table)
    print()
    print(f"resonance residual |w1'(k0) - c0| / c0 = {_fmt(resonance_residual(cfg.params))}")
    print(f"resonant wavenumber k0 = {_fmt(co.k0)} = 1 / (4 h1 gamma)")
    return EXIT_OK


def _print_table(header: list[str], rows: list[list[str]]) -> None:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    print(fmt.format(*header))
    print(fmt.format(*["-" * w for w in widths]))
    for row in rows:
        print(fmt.format(*row))


def cmd_dispersion(cfg: RunConfig, args) -> int:
    k = np.geomspace(cfg.k_min, cfg.k_max, cfg.k_count)
    w2_int = dispersion_internal(cfg.params, k)
    w2_sur = dispersion_surface(cfg.params, k)
    res_int = quartic_residual(cfg.params, k, w2_int)
    res_sur = quartic_residual(cfg.params, k, w2_sur)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "dispersion.tsv"
    with path.open("w") as fh:
        fh.write("k\tomega2_internal\tomega2_surface\tresidual_internal\tresidual_surface\n")
        for i in range(k.size):
            fh.write("\t".join(_fmt(v) for v in
                               (k[i], w2_int[i], w2_sur[i], res_int[i], res_sur[i])) + "\n")
    worst = max(float(np.max(res_int)), float(np.max(res_sur)))
    print(f"wrote {path} ({k.size} wavenumbers)")
    print(f"max quartic residual = {_fmt(worst)}")
    return EXIT_OK if worst <= 1e-10 else EXIT_VERIFY


# --------------------------------------------------------------------------
# verification suites
# --------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return np.isfinite(self.residual) and self.residual <= self.tol


# theta is consumed while the table is built, so perturbing it afterwards
# would change nothing; k is the abscissa, not a symbol
_SYMBOL_NAMES = tuple(f.name for f in dataclasses.fields(SymbolTable)
                      if f.name not in ("k", "theta"))


@contextmanager
def _perturbed(name: str | None):
    """Scale one symbol-table entry by 1.001 for the duration (smoke test)."""
    if name is None:
        yield
        return
    if name not in _SYMBOL_NAMES:
        raise ConfigError(
            f"--perturb {name!r} is not a symbol; choose from {', '.join(_SYMBOL_NAMES)}")
    base = _coeffs.symbol_table

    def patched(params, k):
        st = base(params, k)
        return dataclasses.replace(st, **{name: getattr(st, name) * 1.001})

    _coeffs.symbol_table = patched
    _hamiltonian.symbol_table = patched
    try:
        yield
    finally:
        _coeffs.symbol_table = base
        _hamiltonian.symbol_table = base


def _random_four(grid: Grid, rng: np.random.Generator, scale: float) -> FourField:
    def one() -> RealField:
        return band_limited_noise(grid, rng, amplitude=scale)
    return FourField.original(one(), one(), one(), one())


def _checks_symbols(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params
    k = np.geomspace(cfg.k_min, cfg.k_max, cfg.k_count)
    st = _coeffs.symbol_table(params, k)
    w2_int = dispersion_internal(params, k)
    w2_sur = dispersion_surface(params, k)
    quartic = max(float(np.max(quartic_residual(params, k, w2_int))),
                  float(np.max(quartic_residual(params, k, w2_sur))))
    # closed-form eigenvalues of [[qa, qb], [qb, qc]] against the two branches
    half_tr = 0.5 * (st.qa + st.qc)
    disc = np.sqrt(np.maximum(half_tr * half_tr - (st.qa * st.qc - st.qb * st.qb), 0.0))
    lo, hi = half_tr - disc, half_tr + disc
    scale = np.maximum(np.abs(hi), 1e-300)
    eigen = max(float(np.max(np.abs(lo - st.omega2) / scale)),
                float(np.max(np.abs(hi - st.omega1_sq) / scale)))
    unit_p = float(np.max(np.abs(st.a_plus ** 2 + st.b_plus ** 2 - 1.0)))
    unit_m = float(np.max(np.abs(st.a_minus ** 2 + st.b_minus ** 2 - 1.0)))
    sympl = float(np.max(np.abs(st.a_minus * st.b_plus - st.a_plus * st.b_minus - 1.0)))
    ortho = float(np.max(np.abs(st.a_plus * st.a_minus + st.b_plus * st.b_minus)))
    kappa8 = abs(cfg.coefficients().kappa8)
    return [
        CheckResult("dispersion-quartic", quartic, 1e-10),
        CheckResult("eigen-decoupling", eigen, 1e-10),
        CheckResult("mixing-unit-plus", unit_p, 1e-12),
        CheckResult("mixing-unit-minus", unit_m, 1e-12),
        CheckResult("mixing-symplectic", sympl, 1e-12),
        CheckResult("mixing-orthogonal", ortho, 1e-12),
        CheckResult("resonance", resonance_residual(params), 1e-12),
        CheckResult("kappa8-zero", kappa8, 1e-12),
    ]


def _checks_hamiltonian(cfg: RunConfig) -> list[CheckResult]:
    params = cfg.params
    grid = cfg.verify_grid
    rng = np.random.default_rng(cfg.seed)
    worst_h2 = worst_h3 = worst_split = worst_round = 0.0
    for _ in range(cfg.verify_fields):
        f = _random_four(grid, rng, scale=0.05 * params.h1)
        fn = normal_transform(f, params)
        h2_o, h2_n = eval_H2(f, params), eval_H2(fn, params)
        h3_o, h3_n = eval_H3(f, params), eval_H3(fn, params)
        worst_h2 = max(worst_h2, abs(h2_o - h2_n) / max(abs(h2_o), 1e-300))
        worst_h3 = max(worst_h3, abs(h3_o - h3_n) / max(abs(h3_o), 1e-300))
        parts = h3_terms(f, params)
        split = parts["I"] - parts["II"] + parts["III"]
        worst_split = max(worst_split, abs(split - h3_o) / max(abs(h3_o), 1e-300))
        back = inverse_transform(fn, params)
        for name in ("eta", "xi", "eta1", "xi1"):
            orig = getattr(f, name).values
            got = getattr(back, name).values
            ref = max(float(np.max(np.abs(orig))), 1e-300)
            worst_round = max(worst_round, float(np.max(np.abs(got - orig))) / ref)
    return [
        CheckResult("h2-equivalence", worst_h2, 1e-10),
        CheckResult("h3-equivalence", worst_h3, 1e-10),
        CheckResult("cubic-decomposition", worst_split, 1e-10),
        CheckResult("transform-roundtrip", worst_round, 1e-12),
    ]


def _checks_gauge(cfg: RunConfig) -> list[CheckResult]:
    co = cfg.coefficients()
    grid = cfg.verify_grid
    rng = np.random.default_rng(cfg.seed + 1)
    worst_mod = worst_ode = worst_rec = 0.0
    for _ in range(cfg.verify_fields):
        # narrow band keeps the oscillatory gauge phase resolved on the grid
        r = band_limited_noise(grid, rng, amplitude=0.1, keep=1.0 / 6.0)
        gs = gauge(r, co)
        sup = float(np.max(np.abs(r.values)))
        worst_mod = max(worst_mod, float(np.max(np.abs(np.abs(gs.psi_plus.values) - 1.0))))
        # divide out the stiff phase-equation coefficient so the residual
        # measures cancellation quality, not the magnitude of 3a
        worst_ode = max(worst_ode, gauge_ode_residual(gs, co) / (3.0 * abs(co.a) * sup))
        dr = deriv(r).values
        rec = reconstruct_dr(gs).values
        ref = max(float(np.max(np.abs(dr))), 1e-300)
        worst_rec = max(worst_rec, float(np.max(np.abs(rec - dr))) / ref)
    return [
        CheckResult("gauge-unimodular", worst_mod, 1e-12),
        CheckResult("gauge-ode", worst_ode, 1e-8),
        CheckResult("gauge-reconstruction", worst_rec, 1e-10),
    ]


def _checks_projection(cfg: RunConfig) -> list[CheckResult]:
    grid = cfg.verify_grid
    rng = np.random.default_rng(cfg.seed + 2)
    worst_h2id = worst_partition = worst_hsplit = worst_absd = 0.0
    for _ in range(cfg.verify_fields):
        f = band_limited_noise(grid, rng, amplitude=1.0)
        hh = hilbert(hilbert(f)).values
        worst_h2id = max(worst_h2id, float(np.max(np.abs(hh + f.values))))
        both = project(f, 1).values + project(f, -1).values
        worst_partition = max(worst_partition, float(np.max(np.abs(both - f.values))))
        split = -1j * (project(f, 1).values - project(f, -1).values)
        worst_hsplit = max(worst_hsplit, float(np.max(np.abs(split - hilbert(f).values))))
        lhs = absd(f).values
        rhs = deriv(hilbert(f)).values
        worst_absd = max(worst_absd, float(np.max(np.abs(lhs - rhs))))
    return [
        CheckResult("hilbert-squared", worst_h2id, 1e-12),
        CheckResult("projection-partition", worst_partition, 1e-12),
        CheckResult("hilbert-projection-split", worst_hsplit, 1e-12),
        CheckResult("absd-factorization", worst_absd, 1e-12),
    ]


_SUITES = {
    "verify": (_checks_symbols, _checks_hamiltonian, _checks_gauge, _checks_projection),
    "verify-hamiltonian": (_checks_hamiltonian,),
    "verify-gauge": (_checks_gauge,),
}


def cmd_verify(cfg: RunConfig, args) -> int:
    selection = None
    if getattr(args, "checks", None) is not None:
        selection = tuple(c.strip() for c in args.checks.split(",") if c.strip())
        if not selection:
            raise ConfigError("--checks selected an empty suite")
    results: list[CheckResult] = []
    with _perturbed(getattr(args, "perturb", None)):
        for suite in _SUITES[args.command]:
            results.extend(suite(cfg))
    if selection is not None:
        known = {r.name for r in results}
        missing = [c for c in selection if c not in known]
        if missing:
            raise ConfigError(f"unknown checks: {', '.join(missing)}")
        results = [r for r in results if r.name in selection]
    if not results:
        raise ConfigError("no checks selected")
    table = [[r.name, _fmt(r.residual), _fmt(r.tol), "pass" if r.ok else "FAIL"]
             for r in results]
    _print_table(["check", "residual", "tolerance", "status"], table)
    failing = [r.name for r in results if not r.ok]
    if failing:
        print()
        print("failing checks: " + ", ".join(failing))
        return EXIT_VERIFY
    return EXIT_OK


# --------------------------------------------------------------------------
# simulate / sweep
# --------------------------------------------------------------------------

def _write_snapshot(path: Path, state: SystemState) -> None:
    with path.open("w") as fh:
        fh.write(f"# t = {_fmt(state.t)}\n")
        fh.write("x\tr\tre_q\tim_q\n")
        x = state.grid.x
        r = state.r.values
        q = state.q.values
        for i in range(state.grid.n):
            fh.write("\t".join(_fmt(v) for v in (x[i], r[i], q[i].real, q[i].imag)) + "\n")


def _write_metadata(path: Path, cfg: RunConfig, co, status: str,
                    extra: dict[str, str]) -> None:
    with path.open("w") as fh:
        fh.write(f"bonls_version = {__version__}\n")
        fh.write(f"status = {status}\n")
        for key, value in extra.items():
            fh.write(f"{key} = {value}\n")
        for key in sorted(cfg.settings):
            fh.write(f"{key} = {cfg.settings[key]}\n")
        for name, value, _tag in coefficient_rows(co):
            fh.write(f"coefficient.{name} = {_fmt(value)}\n")


def cmd_simulate(cfg: RunConfig, args) -> int:
    co = cfg.coefficients()
    initial = build_initial_state(cfg)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    log.info("simulate: %s system, %s, n=%d, dt=%s, t_end=%s",
             cfg.system, cfg.stepper.scheme, cfg.grid.n,
             _fmt(cfg.stepper.dt), _fmt(cfg.t_end))
    try:
        traj = run(initial, cfg.stepper, co, cfg.t_end,
                   diagnostics_every=cfg.diagnostics_every,
                   snapshot_every=cfg.snapshot_every,
                   system=cfg.system, time_scale=cfg.time_scale,
                   gauge_diagnostics=cfg.gauge_diagnostics)
    except BlowUp as exc:
        log.error("blow-up: %s", exc)
        if exc.state is not None:
            _write_snapshot(out / "snapshot_last_good.tsv", exc.state)
        _write_metadata(out / "metadata.txt", cfg, co, "blow-up", {
            "failing_time": _fmt(exc.time),
            "failing_sup_norm": _fmt(exc.sup),
        })
        print(f"blow-up at t = {_fmt(exc.time)}; "
              f"last good snapshot written to {out / 'snapshot_last_good.tsv'}")
        return EXIT_BLOWUP
    diag_path = out / "diagnostics.tsv"
    with diag_path.open("w") as fh:
        fh.write("t\tE1\tE2\tE3\tmean_r\tmax_r\tgauge_residual\n")
        for row in traj.diagnostics:
            fh.write("\t".join(_fmt(v) for v in
                               (row.t, row.e1, row.e2, row.e3,
                                row.mean_r, row.max_r, row.gauge_residual)) + "\n")
    for index, snap in enumerate(traj.snapshots):
        _write_snapshot(out / f"snapshot_{index:04d}.tsv", snap)
    _write_metadata(out / "metadata.txt", cfg, co, "ok", {
        "snapshots": str(len(traj.snapshots)),
        "diagnostics_rows": str(len(traj.diagnostics)),
        "reality_residue": _fmt(traj.reality_residue),
    })
    first, last = traj.diagnostics[0], traj.diagnostics[-1]
    drift = abs(last.e1 - first.e1) / max(abs(first.e1), 1e-300)
    log.info("done: %d diagnostics rows, E1 relative drift %.3e",
             len(traj.diagnostics), drift)
    print(f"wrote {diag_path} and {len(traj.snapshots)} snapshots to {out}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    if not cfg.sweep_key or not cfg.sweep_values:
        raise ConfigError("sweep requires sweep.key and a comma-separated sweep.values")
    if cfg.sweep_key not in _DEFAULTS:
        raise ConfigError(f"sweep.key {cfg.sweep_key!r} is not a config key")
    if cfg.sweep_key in ("output.dir", "sweep.key", "sweep.values", "sweep.workers"):
        raise ConfigError(f"sweep.key {cfg.sweep_key!r} cannot be swept")
    base = Path(cfg.out_dir)
    jobs: list[tuple[str, RunConfig]] = []
    for value in cfg.sweep_values:
        settings = dict(cfg.settings)
        settings[cfg.sweep_key] = value
        tag = f"{cfg.sweep_key}={value}".replace("/", "_")
        settings["output.dir"] = str(base / tag)
        jobs.append((tag, RunConfig.from_settings(settings)))

    def one(job: tuple[str, RunConfig]) -> int:
        tag, sub = job
        code = cmd_simulate(sub, args)
        log.info("sweep %s -> exit %d", tag, code)
        return code

    workers = min(cfg.sweep_workers, len(jobs))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        codes = list(pool.map(one, jobs))
    print(f"sweep over {cfg.sweep_key}: {len(jobs)} runs, "
          f"{sum(1 for c in codes if c == EXIT_OK)} ok")
    return EXIT_BLOWUP if any(c == EXIT_BLOWUP for c in codes) else EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

_HANDLERS = {
    "coeffs": cmd_coeffs,
    "dispersion": cmd_dispersion,
    "verify": cmd_verify,
    "verify-hamiltonian": cmd_verify,
    "verify-gauge": cmd_verify,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="flat key = value config file")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output directory (overrides output.dir)")
    common.add_argument("--preset", choices=sorted(PRESETS),
                        default=argparse.SUPPRESS,
                        help="named physical parameter set")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="random seed (overrides seed)")
    parser = argparse.ArgumentParser(
        prog="bonls", parents=[common],
        description="two-layer wave model: coefficients, identities, simulation")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "coeffs": "print the derived coefficient table",
        "dispersion": "tabulate dispersion branches and quartic residuals",
        "verify": "run every identity check",
        "verify-hamiltonian": "run the coordinate-equivalence checks",
        "verify-gauge": "run the gauge-transformation checks",
        "simulate": "integrate the system and write artifacts",
        "sweep": "run simulate once per value of one config key",
    }
    for name, text in descriptions.items():
        sp = sub.add_parser(name, parents=[common], help=text)
        if name.startswith("verify"):
            sp.add_argument("--checks", default=None,
                            help="comma-separated check names to keep")
            sp.add_argument("--perturb", default=None, metavar="SYMBOL",
                            help="scale one symbol by 1.001 (the suite must fail)")
    return parser


def main(argv: list[str] | None = None) -> int:
    if not logging.getLogger().handlers:
        logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                            format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(getattr(args, "config", None))
        if hasattr(args, "preset"):
            preset = PRESETS[args.preset]
            settings["physical.g"] = _fmt(preset.g)
            settings["physical.h1"] = _fmt(preset.h1)
            settings["physical.rho"] = _fmt(preset.rho)
            settings["physical.rho1"] = _fmt(preset.rho1)
        if hasattr(args, "seed"):
            settings["seed"] = str(args.seed)
        if hasattr(args, "out"):
            settings["output.dir"] = args.out
        cfg = RunConfig.from_settings(settings)
        return _HANDLERS[args.command](cfg, args)
    except (ConfigError, DomainError) as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except BlowUp as exc:
        log.error("%s", exc)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())
