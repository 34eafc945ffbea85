# src/cli/scenarios.py
"""
Scenario implementations for the catsim command line.

Each scenario takes a resolved ScenarioConfig plus the loaded settings, writes
its tables under cfg.output_dir and returns a ScenarioResult naming the tables
(with the data product and figure panel of each) and a dict of headline
numbers that the runner stores in the run metadata.

Scenarios:
- amplitude_sweep   |alpha| versus omega_b t and versus omega_sw
- concurrence       cavity-mechanics concurrence over time (closed form and purity oracle)
- mech_cat          Wigner function of the projected squeezed mechanical cat
- variance_sweep    quadrature variances of the + branch cat versus omega_sw
- lossy_cat         cat generation under cavity loss, compared with the lossless run
- optical_cat       Kerr-phased cavity state at tau = 2 pi / omega_s
- selfcheck         oracle suites (see src/cli/selfcheck.py)
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from src.core import fock
from src.core.errors import LeakageError
from src.core.fock import ModeSpec, PureState
from src.main.constants import (
    BEC_G,
    BEC_OMEGA_B,
    CAT_RATIOS,
    LINDBLAD_TOL,
    LOSSY_KAPPA,
    MECH_CAVITY_DIM,
    MECH_DIM,
    MECH_GRID,
    OPTICAL_ALPHA0,
    OPTICAL_CAVITY_DIM,
    OPTICAL_G,
    OPTICAL_GRID,
    OPTICAL_MECH_DIM,
    SOLID_G,
    SOLID_OMEGA_B,
    TABLE_FIGURES,
)
from src.main.logger import logger
from src.physics import analytic, dynamics, measures, model
from src.physics.model import SystemParams
from src.utils.helpers import linspace
from src.utils.tables import write_matrix, write_table

# -------------------------------------------------
# Defaults
# -------------------------------------------------
COMMON_DEFAULTS = {
    "omega_b": BEC_OMEGA_B,
    "omega_sw": 0.0,
    "g": BEC_G,
    "kappa_a": 0.0,
    "omega_c_eff": 0.0,
}

SCENARIO_DEFAULTS = {
    "amplitude_sweep": {
        "t_max": 2.0 * math.pi, "t_points": 400,
        "sweep_min": -1.999, "sweep_max": 1.999, "sweep_points": 800,
    },
    "concurrence": {
        "omega_sw_ratio": 1.0, "t_max": 22.0, "t_points": 200, "mech_dim": None,
    },
    "mech_cat": {
        "omega_b_t": math.pi, "cavity_dim": 2, "mech_dim": None, "branch": "+", **MECH_GRID,
    },
    "variance_sweep": {
        "omega_b_t": math.pi, "sweep_min": -1.95, "sweep_max": 1.95, "sweep_points": 79,
    },
    "lossy_cat": {
        "kappa_a": LOSSY_KAPPA, "omega_b_t": math.pi, "t_points": 11,
        "cavity_dim": MECH_CAVITY_DIM, "mech_dim": MECH_DIM, "branch": "+", **MECH_GRID,
    },
    "optical_cat": {
        "g": OPTICAL_G, "alpha0": OPTICAL_ALPHA0, "cat_kind": "two", "omega_b_t": None,
        "cavity_dim": OPTICAL_CAVITY_DIM, "mech_dim": OPTICAL_MECH_DIM,
        "sweep_min": -1.95, "sweep_max": 1.95, "sweep_points": 79, **OPTICAL_GRID,
    },
    "selfcheck": {"tolerance": 1e-6},
}


@dataclass
class ScenarioResult:
    tables: dict[str, dict] = field(default_factory=dict)
    results: dict = field(default_factory=dict)


def catalog(descriptions: dict[str, str]) -> dict[str, dict]:
    """Metadata entry per emitted table: what it holds and the figure it regenerates."""
    return {name: {"description": text, "figure": TABLE_FIGURES.get(name)} for name, text in descriptions.items()}


def _out(cfg, name: str) -> Path:
    return Path(cfg.output_dir) / name


def _threads(settings: dict) -> int:
    return max(1, int(settings.get("threads", 1)))


def _grid_axes(cfg):
    return (
        linspace(cfg.opt("x_min"), cfg.opt("x_max"), cfg.opt("x_points")),
        linspace(cfg.opt("y_min"), cfg.opt("y_max"), cfg.opt("y_points")),
    )


def _wigner_summary(w: measures.WignerGrid, threshold: float = 0.1) -> dict:
    peaks = measures.local_maxima(w, threshold)
    return {
        "integral": w.integral(),
        "min": w.min(),
        "max": w.max(),
        "negativity_volume": measures.negativity_volume(w),
        "maxima_above_threshold": len(peaks),
        "maxima": [list(p) for p in peaks[:6]],
    }


def _crossings(ratios: np.ndarray, values: np.ndarray, level: float = 0.25) -> list[float]:
    """omega_sw/omega_b values where `values` crosses `level` (linear interpolation)."""
    found = []
    shifted = values - level
    for i in range(len(ratios) - 1):
        a, b = shifted[i], shifted[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)) or a * b > 0 or a == b:
            continue
        found.append(float(ratios[i] - a * (ratios[i + 1] - ratios[i]) / (b - a)))
    return found


def initial_cat_state(cavity_dim: int, mech_dim: int) -> PureState:
    """(|0> + |1>)/sqrt2 for the cavity, mechanics in its ground state."""
    cav, mech = ModeSpec(cavity_dim), ModeSpec(mech_dim)
    cavity = PureState(analytic.cavity_branch_vector("+", cavity_dim), (cav,))
    return fock.tensor(cavity, fock.vacuum(mech))


def resolve_mech_dim(cfg, t_values) -> int:
    """Configured mechanical dimension, or one fitted to the entangled state at the largest |alpha| on `t_values`."""
    if cfg.opt("mech_dim") is not None:
        return cfg.opt("mech_dim")
    times = np.asarray(t_values, dtype=float).reshape(-1)
    alphas = np.abs(model.coherent_amplitude(times, model.effective_params(cfg.params)))
    mech_dim = analytic.fitted_mech_dim(float(times[int(np.argmax(alphas))]), cfg.params)
    logger.info("Mechanical dimension %d fitted for %s", mech_dim, cfg.scenario)
    return mech_dim


# -------------------------------------------------
# Scenarios
# -------------------------------------------------
def amplitude_sweep(cfg, settings) -> ScenarioResult:
    p = cfg.params
    e = model.effective_params(p)
    taus = linspace(0.0, cfg.opt("t_max"), cfg.opt("t_points"))
    solid = SystemParams(omega_b=SOLID_OMEGA_B, g=SOLID_G)
    abs_alpha = np.abs(model.coherent_amplitude(taus / p.omega_b, e))
    abs_solid = np.abs(model.coherent_amplitude(taus / solid.omega_b, model.effective_params(solid)))
    peak, t_peak = model.peak_amplitude(p, taus / p.omega_b)
    peak_solid, _ = model.peak_amplitude(solid, taus / solid.omega_b)
    write_table(_out(cfg, "amplitude_time.csv"), ["omega_b_t", "abs_alpha", "abs_alpha_solid_state"],
                np.column_stack([taus, abs_alpha, abs_solid]))

    ratios = linspace(cfg.opt("sweep_min"), cfg.opt("sweep_max"), cfg.opt("sweep_points"))
    t_half = math.pi / p.omega_b
    at_half = np.array([
        abs(model.coherent_amplitude(t_half, model.effective_params(SystemParams.from_ratio(p.omega_b, r, p.g))))
        for r in ratios
    ])
    enlargement = np.array([model.amplitude_enlargement(p.omega_b, p.g, r) for r in ratios]) if p.g > 0 \
        else np.full(ratios.shape, np.nan)
    write_table(_out(cfg, "amplitude_scattering.csv"), ["omega_sw_ratio", "abs_alpha_half_period", "enlargement"],
                np.column_stack([ratios, at_half, enlargement]))

    results = {
        "max_abs_alpha": peak,
        "omega_b_t_at_max": t_peak * p.omega_b,
        "max_abs_alpha_on_grid": float(abs_alpha.max()),
        "max_abs_alpha_solid_state": peak_solid,
        "enlargement_at_sweep_min": float(enlargement[0]),
        "enlargement_5x_ratio": _first_fivefold(p, ratios, enlargement),
    }
    return ScenarioResult(
        tables=catalog({
            "amplitude_time.csv": "coherent amplitude |alpha| versus omega_b t (BEC and solid-state)",
            "amplitude_scattering.csv": "|alpha(pi/omega_b)| versus omega_sw/omega_b",
        }),
        results=results,
    )


def _first_fivefold(p: SystemParams, ratios: np.ndarray, enlargement: np.ndarray):
    """Largest non-positive omega_sw/omega_b at which the amplitude is enlarged five times."""
    hits = [i for i, r in enumerate(ratios) if r <= 0 and np.isfinite(enlargement[i]) and enlargement[i] >= 5.0]
    if not hits:
        return None
    i = max(hits, key=lambda k: ratios[k])
    if i + 1 >= len(ratios) or enlargement[i + 1] >= 5.0:
        return float(ratios[i])
    return float(brentq(lambda r: model.amplitude_enlargement(p.omega_b, p.g, r) - 5.0,
                        ratios[i], ratios[i + 1], xtol=1e-12))


def concurrence(cfg, settings) -> ScenarioResult:
    p = cfg.params
    e = model.effective_params(p)
    taus = linspace(0.0, cfg.opt("t_max"), cfg.opt("t_points"))
    times = taus / p.omega_b
    mech_dim = resolve_mech_dim(cfg, times)
    logger.info("Concurrence over %d times at mechanical dimension %d", len(times), mech_dim)

    closed = np.asarray(analytic.concurrence_analytic(times, p))
    numeric = np.array([measures.concurrence_numeric(analytic.entangled_state(t, p, mech_dim)) for t in times])
    abs_alpha = np.abs(model.coherent_amplitude(times, e))
    write_table(_out(cfg, "concurrence.csv"),
                ["omega_b_t", "concurrence_analytic", "concurrence_numeric", "abs_alpha"],
                np.column_stack([taus, closed, numeric, abs_alpha]))

    zeros = [analytic.concurrence_analytic(2 * n * math.pi / e.omega_s, p) for n in (1, 2, 3)]
    return ScenarioResult(
        tables=catalog({"concurrence.csv": "concurrence versus omega_b t"}),
        results={
            "mech_dim": mech_dim,
            "max_oracle_difference": float(np.max(np.abs(closed - numeric))),
            "mid_period_concurrence": analytic.concurrence_analytic(math.pi / e.omega_s, p),
            "concurrence_at_full_periods": zeros,
            "omega_s_over_omega_b": e.omega_s / p.omega_b,
        },
    )


def _mechanical_cat(cfg, p: SystemParams, t: float, mech_dim: int):
    cav_dim = cfg.opt("cavity_dim")
    if cav_dim == 2:
        state = analytic.entangled_state(t, p, mech_dim)
    else:
        state = model.apply_factorized(t, p, initial_cat_state(cav_dim, mech_dim))
    return analytic.project_cavity(state, cfg.opt("branch"))


def mech_cat(cfg, settings) -> ScenarioResult:
    p = cfg.params
    t = cfg.opt("omega_b_t") / p.omega_b
    mech_dim = resolve_mech_dim(cfg, [t])
    cat = _mechanical_cat(cfg, p, t, mech_dim)
    x, y = _grid_axes(cfg)
    w = measures.wigner(cat.state, x, y, threads=_threads(settings))
    write_matrix(_out(cfg, "wigner_mechanical.csv"), x, y, w.values)

    solid = SystemParams(omega_b=SOLID_OMEGA_B, g=SOLID_G)
    solid_cat = analytic.project_cavity(
        analytic.entangled_state(cfg.opt("omega_b_t") / solid.omega_b, solid, MECH_DIM), "+"
    )
    w_solid = measures.wigner(solid_cat.state, x, y, threads=_threads(settings))
    write_matrix(_out(cfg, "wigner_solid_state.csv"), x, y, w_solid.values)

    variances = analytic.variances_numeric(cat.state)
    alpha = model.coherent_amplitude(t, model.effective_params(p))
    return ScenarioResult(
        tables=catalog({
            "wigner_mechanical.csv": "Wigner function of the projected mechanical cat",
            "wigner_solid_state.csv": "Wigner function at solid-state parameters",
        }),
        results={
            "mech_dim": mech_dim,
            "alpha": [alpha.real, alpha.imag],
            "branch": cat.branch,
            "probability": cat.probability,
            "norm_const": cat.norm_const,
            "var_x": variances.var_x,
            "var_y": variances.var_y,
            "wigner": _wigner_summary(w),
            "wigner_solid_state": _wigner_summary(w_solid),
        },
    )


def _variance_point(t: float, omega_b: float, g: float, ratio: float) -> tuple:
    p = SystemParams.from_ratio(omega_b, ratio, g)
    printed = analytic.variances_closed_form(t, p)
    amended = analytic.variances_closed_form(t, p, amended=True)
    try:
        numeric = analytic.variances_numeric(analytic.projected_cat(t, p, "+").state)
        nx, ny = numeric.var_x, numeric.var_y
    except LeakageError as exc:
        logger.warning("Numeric variances skipped at omega_sw/omega_b=%.4f: %s", ratio, exc)
        nx = ny = float("nan")
    return ratio, nx, ny, printed.var_x, printed.var_y, amended.var_y


def variance_sweep(cfg, settings) -> ScenarioResult:
    p = cfg.params
    t = cfg.opt("omega_b_t") / p.omega_b
    ratios = linspace(cfg.opt("sweep_min"), cfg.opt("sweep_max"), cfg.opt("sweep_points"))

    def task(r):
        return _variance_point(t, p.omega_b, p.g, float(r))

    with ThreadPoolExecutor(max_workers=_threads(settings)) as pool:
        rows = np.array(list(pool.map(task, ratios)))

    columns = ["omega_sw_ratio", "var_x_numeric", "var_y_numeric",
               "var_x_closed_form", "var_y_closed_form", "var_y_closed_form_amended"]
    write_table(_out(cfg, "variances.csv"), columns, rows)

    numeric_ok = np.isfinite(rows[:, 1])
    best_x = np.where(numeric_ok, rows[:, 1], rows[:, 3])
    best_y = np.where(numeric_ok, rows[:, 2], rows[:, 5])

    def worst(a, b):
        return float(np.max(np.abs(a[numeric_ok] - b[numeric_ok]))) if numeric_ok.any() else None

    return ScenarioResult(
        tables=catalog({"variances.csv": "quadrature variances versus omega_sw/omega_b"}),
        results={
            "var_x_crossings": _crossings(ratios, best_x),
            "var_y_crossings": _crossings(ratios, best_y),
            "max_diff_x_closed_form": worst(rows[:, 3], rows[:, 1]),
            "max_diff_y_closed_form": worst(rows[:, 4], rows[:, 2]),
            "max_diff_y_amended": worst(rows[:, 5], rows[:, 2]),
            "numeric_skipped": [float(r) for r in ratios[~numeric_ok]],
        },
    )


def lossy_cat(cfg, settings) -> ScenarioResult:
    p = cfg.params
    t_final = cfg.opt("omega_b_t") / p.omega_b
    times = tuple(linspace(0.0, t_final, cfg.opt("t_points")))
    mech_dim = resolve_mech_dim(cfg, linspace(0.0, t_final, 4 * cfg.opt("t_points")))
    initial = initial_cat_state(cfg.opt("cavity_dim"), mech_dim)
    branch = cfg.opt("branch")

    lossy = dynamics.evolve_lindblad(dynamics.EvolutionRequest(
        initial=initial, params=p, t_final=t_final, sample_times=times, method="lindblad",
        tolerance=settings.get("lindblad_tolerance", LINDBLAD_TOL),
    ))
    lossless = dynamics.evolve_unitary(dynamics.EvolutionRequest(
        initial=initial, params=p.with_(kappa_a=0.0), t_final=t_final, sample_times=times, method="factorized",
    ))

    x, y = _grid_axes(cfg)
    rho_b = dynamics.conditional_mechanical_state(lossy.final, branch)
    clean = analytic.project_cavity(lossless.final, branch)
    w_lossy = measures.wigner(rho_b, x, y, threads=_threads(settings))
    w_clean = measures.wigner(clean.state, x, y, threads=_threads(settings))
    write_matrix(_out(cfg, "wigner_lossy.csv"), x, y, w_lossy.values)
    write_matrix(_out(cfg, "wigner_lossless.csv"), x, y, w_clean.values)

    diag = lossy.diagnostics
    write_table(
        _out(cfg, "lossy_populations.csv"),
        ["omega_b_t", "cavity_photons_lossy", "cavity_photons_lossless", "trace", "hermiticity_defect", "min_eigenvalue"],
        np.column_stack([
            np.array(lossy.times) * p.omega_b,
            dynamics.fock_population(lossy, 0),
            dynamics.fock_population(lossless, 0),
            [d.trace for d in diag],
            [d.hermiticity_defect for d in diag],
            [d.min_eigenvalue for d in diag],
        ]),
    )

    neg_lossy = measures.negativity_volume(w_lossy)
    neg_clean = measures.negativity_volume(w_clean)
    return ScenarioResult(
        tables=catalog({
            "wigner_lossy.csv": "conditional mechanical Wigner function with cavity loss",
            "wigner_lossless.csv": "conditional mechanical Wigner function without cavity loss",
            "lossy_populations.csv": "cavity photon number and invariant diagnostics versus omega_b t",
        }),
        results={
            "mech_dim": mech_dim,
            "negativity_lossy": neg_lossy,
            "negativity_lossless": neg_clean,
            "negativity_ratio": neg_lossy / neg_clean if neg_clean > 0 else None,
            "branch_probability_lossy": dynamics.branch_probability(lossy.final, branch),
            "branch_probability_lossless": clean.probability,
            "max_trace_drift": lossy.max_trace_drift(),
            "max_hermiticity_defect": lossy.max_hermiticity_defect(),
            "min_eigenvalue": min(d.min_eigenvalue for d in diag),
        },
    )


def optical_cat(cfg, settings) -> ScenarioResult:
    p = cfg.params
    e = model.effective_params(p)
    t = e.period if cfg.opt("omega_b_t") is None else cfg.opt("omega_b_t") / p.omega_b
    cav, mech = ModeSpec(cfg.opt("cavity_dim")), ModeSpec(cfg.opt("mech_dim"))
    alpha0 = cfg.opt("alpha0")
    kind = cfg.opt("cat_kind")

    initial = fock.tensor(fock.coherent(alpha0, cav), fock.vacuum(mech))
    evolved = model.rotate_out_cavity(model.apply_factorized(t, p, initial), t, p)
    rho_c = fock.partial_trace(evolved, keep=0)
    closed = analytic.optical_state_at_tau(p, alpha0, cav.dimension)
    ideal = analytic.ideal_cat(kind, alpha0, cav.dimension)

    x, y = _grid_axes(cfg)
    w = measures.wigner(rho_c, x, y, threads=_threads(settings))
    write_matrix(_out(cfg, "wigner_optical.csv"), x, y, w.values)

    ratios = linspace(cfg.opt("sweep_min"), cfg.opt("sweep_max"), cfg.opt("sweep_points"))
    rows = []
    for r in ratios:
        pr = SystemParams.from_ratio(p.omega_b, r, p.g)
        er = model.effective_params(pr)
        rows.append([r, er.r_s, er.omega_s / p.omega_b, er.g_s / p.omega_b, model.kerr_ratio(pr)])
    write_table(_out(cfg, "effective_params.csv"),
                ["omega_sw_ratio", "r_s", "omega_s_over_omega_b", "g_s_over_omega_b", "kerr_ratio"], rows)

    return ScenarioResult(
        tables=catalog({
            "wigner_optical.csv": "Wigner function of the cavity state",
            "effective_params.csv": "effective frequency and coupling versus omega_sw/omega_b",
        }),
        results={
            "omega_sw_ratio": p.omega_sw_ratio,
            "kerr_ratio": model.kerr_ratio(p),
            "omega_b_t": t * p.omega_b,
            "cat_kind": kind,
            "fidelity_closed_form": measures.fidelity(closed, rho_c),
            "fidelity_ideal_cat": measures.fidelity(ideal, rho_c),
            "entanglement_entropy": measures.entanglement_entropy(evolved),
            "wigner": _wigner_summary(w),
        },
    )


def default_cat_ratio(kind: str) -> float:
    return CAT_RATIOS[kind]


SCENARIO_FUNCTIONS = {
    "amplitude_sweep": amplitude_sweep,
    "concurrence": concurrence,
    "mech_cat": mech_cat,
    "variance_sweep": variance_sweep,
    "lossy_cat": lossy_cat,
    "optical_cat": optical_cat,
}
