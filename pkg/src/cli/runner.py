# src/cli/runner.py
"""
Scenario configuration and execution for the catsim command line.

- parse_config(path, params, scenario, out, settings) -> ScenarioConfig
    JSON file (or an earlier run_metadata.json), then --param KEY=VALUE
    overrides, validated against src/data/schemas/scenario_schema.json and
    checked against the numerical guards before anything is computed.
- run(cfg, settings) -> exit status
    runs the scenario, writes its tables and run_metadata.json.

Exit status: 0 success, 1 other library error, 2 guard or configuration
violation, 3 self-check tolerance failure.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import jsonschema
import numpy as np

from src.cli.scenarios import COMMON_DEFAULTS, SCENARIO_DEFAULTS, SCENARIO_FUNCTIONS, default_cat_ratio
from src.cli.selfcheck import run_selfcheck
from src.core.errors import (
    CatsimError,
    ConfigError,
    DegenerateBranchError,
    DimensionMismatchError,
    DomainError,
    LeakageError,
    ToleranceError,
)
from src.main.constants import (
    EIGEN_TOL,
    EXIT_FAILURE,
    EXIT_GUARD,
    EXIT_OK,
    EXIT_TOLERANCE,
    HERMITIAN_TOL,
    LEAK_MARGIN,
    LEAK_TOL,
    LINDBLAD_TOL,
    MIN_CAT_AMPLITUDE,
    NORM_TOL,
    SCENARIO_SCHEMA_FILE,
    SCENARIOS,
    TRACE_TOL,
    VERSION,
)
from src.main.logger import logger
from src.physics import analytic, model
from src.physics.model import SystemParams
from src.utils.helpers import ensure_dir, linspace, now_iso, parse_scalar, safe_load_json, safe_write_json
from src.utils import validators

PARAM_KEYS = ("omega_b", "omega_sw", "g", "kappa_a", "omega_c_eff")
METADATA_FILE = "run_metadata.json"
DEFAULT_OUTPUT_DIR = "results"

GUARD_ERRORS = (ConfigError, DomainError, LeakageError, DimensionMismatchError, DegenerateBranchError)


@dataclass
class ScenarioConfig:
    scenario: str
    params: SystemParams
    options: dict[str, Any] = field(default_factory=dict)
    output_dir: str = DEFAULT_OUTPUT_DIR

    def opt(self, key: str):
        return self.options[key]

    def to_dict(self) -> dict:
        """Flat form accepted back by parse_config; None options are kept only where they override a default."""
        doc = {"scenario": self.scenario, "output_dir": str(self.output_dir)}
        doc.update({k: getattr(self.params, k) for k in PARAM_KEYS})
        defaults = SCENARIO_DEFAULTS.get(self.scenario, {})
        doc.update({k: v for k, v in self.options.items() if v is not None or defaults.get(k) is not None})
        return doc


# -------------------------------------------------
# Parsing
# -------------------------------------------------
def _load_scenario_schema() -> dict:
    return safe_load_json(SCENARIO_SCHEMA_FILE, {}) or {}


def _read_config_file(path: str | Path) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"Config file not found: {p}")
    try:
        with open(p, "r", encoding="utf-8") as f:
            text = f.read()
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Config file {p} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"Config file {p} must hold a JSON object")
    # run metadata written by an earlier run
    if isinstance(doc.get("config"), dict) and "run" in doc:
        doc = doc["config"]
    return doc


def _parse_overrides(items: Iterable[str] | None) -> dict:
    overrides = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--param expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = parse_scalar(value)
    return overrides


def _validate_schema(doc: dict) -> None:
    schema = _load_scenario_schema()
    if not schema:
        return
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = ".".join(str(part) for part in exc.path) or "config"
        raise ConfigError(f"Invalid scenario configuration at {where}: {exc.message}") from exc


def _resolve_omega_sw(scenario: str, user: dict, merged: dict) -> float:
    omega_b = merged["omega_b"]
    has_sw, has_ratio = "omega_sw" in user, "omega_sw_ratio" in user
    if has_sw and has_ratio:
        if not math.isclose(user["omega_sw"], user["omega_sw_ratio"] * omega_b, rel_tol=1e-12, abs_tol=1e-9):
            raise ConfigError(
                f"omega_sw = {user['omega_sw']} conflicts with omega_sw_ratio = {user['omega_sw_ratio']}"
                f" at omega_b = {omega_b}"
            )
        return float(user["omega_sw"])
    if has_sw:
        return float(user["omega_sw"])
    ratio = user.get("omega_sw_ratio", merged.get("omega_sw_ratio"))
    if ratio is None and scenario == "optical_cat":
        ratio = default_cat_ratio(merged["cat_kind"])
    if ratio is None:
        return float(merged["omega_sw"])
    return validators.require_ratio(ratio) * omega_b


def _check_guards(scenario: str, p: SystemParams, options: dict) -> None:
    """Fail fast on every guard a scenario would otherwise hit mid-run."""
    for key in ("cavity_dim", "mech_dim"):
        if options.get(key) is not None:
            validators.require_dimension(options[key], key)
    for prefix in ("x", "y", "sweep"):
        if f"{prefix}_min" in options:
            validators.require_grid(options, prefix)
    if "sweep_min" in options:
        validators.require_ratio(options["sweep_min"], "sweep_min")
        validators.require_ratio(options["sweep_max"], "sweep_max")
    if options.get("branch") is not None and not validators.is_valid_branch(options["branch"]):
        raise ConfigError(f"branch must be '+' or '-', got {options['branch']!r}")

    e = model.effective_params(p)
    if scenario in ("mech_cat", "lossy_cat") and options["mech_dim"] is not None:
        t_final = options["omega_b_t"] / p.omega_b
        times = np.array([t_final]) if scenario == "mech_cat" else linspace(0.0, t_final, 4 * options["t_points"])
        alphas = np.abs(model.coherent_amplitude(times, e))
        t_star = float(times[int(np.argmax(alphas))])
        validators.require_displacement_fits(float(alphas.max()), options["mech_dim"], "max |alpha(t)|")
        # the squeeze widens the state beyond its displacement
        analytic.entangled_state(t_star, p, options["mech_dim"])
    elif scenario == "optical_cat":
        if options["mech_dim"] is None:
            raise ConfigError("optical_cat needs an explicit mech_dim")
        alpha0 = options["alpha0"]
        if abs(alpha0) < MIN_CAT_AMPLITUDE:
            raise DomainError(f"|alpha0| = {abs(alpha0):.3g} below {MIN_CAT_AMPLITUDE}: cat components coincide")
        validators.require_displacement_fits(abs(alpha0), options["cavity_dim"], "alpha0")


def parse_config(path: str | Path | None = None, params: Iterable[str] | None = None,
                 scenario: str | None = None, out: str | Path | None = None,
                 settings: dict | None = None) -> ScenarioConfig:
    """Resolve a ScenarioConfig; flags override file values, unknown keys are hard errors."""
    settings = settings or {}
    user = _read_config_file(path) if path else {}
    user.update(_parse_overrides(params))
    if scenario is not None:
        if user.get("scenario") not in (None, scenario):
            logger.info("Scenario %s from the command line replaces %s", scenario, user["scenario"])
        user["scenario"] = scenario
    if out is not None:
        user["output_dir"] = str(out)
    _validate_schema(user)

    name = user.get("scenario")
    if name not in SCENARIOS:
        raise ConfigError(f"No scenario given; expected one of {', '.join(SCENARIOS)}")

    merged = {**COMMON_DEFAULTS, **SCENARIO_DEFAULTS[name], **user}
    omega_sw = _resolve_omega_sw(name, user, merged)
    p = SystemParams(
        omega_b=float(merged["omega_b"]),
        omega_sw=omega_sw,
        g=float(merged["g"]),
        kappa_a=float(merged["kappa_a"]),
        omega_c_eff=float(merged["omega_c_eff"]),
    )

    skip = set(PARAM_KEYS) | {"scenario", "output_dir", "omega_sw_ratio"}
    options = {k: v for k, v in merged.items() if k not in skip}
    _check_guards(name, p, options)

    output_dir = user.get("output_dir") or settings.get("output_dir") or DEFAULT_OUTPUT_DIR
    cfg = ScenarioConfig(scenario=name, params=p, options=options, output_dir=str(output_dir))
    logger.debug("Resolved configuration: %s", cfg.to_dict())
    return cfg


# -------------------------------------------------
# Running
# -------------------------------------------------
def _jsonable(value):
    """numpy scalars/arrays to plain JSON types; non-finite floats become null."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [_jsonable(value.real), _jsonable(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _tolerances(settings: dict) -> dict:
    return {
        "leak_margin": LEAK_MARGIN,
        "leak_tol": LEAK_TOL,
        "norm_tol": NORM_TOL,
        "hermitian_tol": HERMITIAN_TOL,
        "trace_tol": TRACE_TOL,
        "eigen_tol": EIGEN_TOL,
        "lindblad_tolerance": settings.get("lindblad_tolerance", LINDBLAD_TOL),
    }


def write_metadata(cfg: ScenarioConfig, run_info: dict) -> Path:
    path = Path(cfg.output_dir) / METADATA_FILE
    if not safe_write_json(path, _jsonable({"config": cfg.to_dict(), "run": run_info})):
        raise CatsimError(f"Could not write run metadata to {path}")
    logger.info("Wrote %s", path)
    return path


def run(cfg: ScenarioConfig, settings: dict | None = None) -> int:
    """Run one scenario and map library errors to exit status."""
    settings = settings or {}
    func = run_selfcheck if cfg.scenario == "selfcheck" else SCENARIO_FUNCTIONS[cfg.scenario]
    started = now_iso()
    t0 = time.perf_counter()
    logger.info("Running scenario %s into %s", cfg.scenario, cfg.output_dir)

    status = EXIT_OK
    try:
        ensure_dir(cfg.output_dir)
        result = func(cfg, settings)
    except ToleranceError as exc:
        logger.error("Self-check failed: %s", exc)
        result, status = exc.result, EXIT_TOLERANCE
    except GUARD_ERRORS as exc:
        logger.error("Guard violation in %s: %s", cfg.scenario, exc)
        return EXIT_GUARD
    except CatsimError as exc:
        logger.exception("Scenario %s failed: %s", cfg.scenario, exc)
        return EXIT_FAILURE

    dimensions = {k: cfg.options[k] for k in ("cavity_dim", "mech_dim") if k in cfg.options}
    if result and result.results.get("mech_dim") is not None:
        dimensions["mech_dim"] = result.results["mech_dim"]
    run_info = {
        "scenario": cfg.scenario,
        "version": VERSION,
        "started": started,
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "status": status,
        "tables": result.tables if result else {},
        "results": result.results if result else {},
        "tolerances": _tolerances(settings),
        "dimensions": dimensions,
        "threads": settings.get("threads", 1),
    }
    try:
        write_metadata(cfg, run_info)
    except CatsimError as exc:
        logger.error("%s", exc)
        return EXIT_FAILURE
    logger.info("Scenario %s finished in %.2f s", cfg.scenario, run_info["wall_time_s"])
    return status
