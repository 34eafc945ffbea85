# src/physics/analytic.py
"""
Closed-form states and diagnostics of the BEC optomechanical model.

Mechanical cats (cavity prepared in (|0> + |1>)/sqrt2):
- entangled_state(t, p, mech_dim)          joint (2, d) state in the interaction picture
- concurrence_analytic(t, p)               sqrt(1 - exp(-|alpha|^2))
- project_cavity(state, branch)            squeezed cat left behind by a |0> +/- |1> click
- branch_probabilities(t, p)               closed-form p+ and p-
- projected_cat(t, p, branch, mech_dim)    entangled_state + project_cavity with auto truncation
- variances_closed_form(t, p, amended)     printed quadrature-variance formulas for the + branch
- variance_terms(t, p), variance_discrepancy(t, p)
- variances_numeric(state)                 <X^2> - <X>^2, <Y^2> - <Y>^2 from the Fock amplitudes

Optical cats (cavity prepared in a coherent state):
- kerr_superposition(alpha0, kerr_ratio, n_dim)
- optical_state_at_tau(p, alpha0, n_max)
- ideal_cat(kind, alpha0, n_dim)
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from src.core import fock
from src.core.errors import DegenerateBranchError, DimensionMismatchError, DomainError, LeakageError
from src.core.fock import ModeSpec, PureState
from src.main.constants import BRANCH_MIN_PROBABILITY, MIN_CAT_AMPLITUDE
from src.main.logger import logger
from src.physics import model
from src.physics.model import SystemParams

BRANCHES = ("+", "-")
CAT_KINDS = ("two", "three", "four")

# auto-sized truncations stop growing here
MAX_AUTO_DIM = 1200


# -------------------------------------------------
# Result types
# -------------------------------------------------
@dataclass(frozen=True)
class ProjectedCat:
    branch: str
    state: PureState
    probability: float
    norm_const: float


@dataclass(frozen=True)
class VarianceReport:
    """Quadrature variances of X = (b + b^dag)/2 and Y = i(b^dag - b)/2."""

    var_x: float
    var_y: float
    source: str

    def __post_init__(self):
        if self.source not in ("closed_form", "numeric"):
            raise DomainError(f"Unknown variance source {self.source!r}")
        if self.source == "numeric":
            if self.var_x <= 0 or self.var_y <= 0:
                raise DomainError(f"Non-positive variance ({self.var_x:.6g}, {self.var_y:.6g})")
            if self.var_x * self.var_y < 1.0 / 16.0 - 1e-9:
                raise DomainError(
                    f"Uncertainty bound violated: {self.var_x * self.var_y:.6g} < 1/16"
                )
        elif not self.satisfies_uncertainty():
            logger.warning(
                "Closed-form variances (%.6g, %.6g) fall below the uncertainty bound",
                self.var_x, self.var_y,
            )

    def satisfies_uncertainty(self, slack: float = 1e-9) -> bool:
        return self.var_x > 0 and self.var_y > 0 and self.var_x * self.var_y >= 1.0 / 16.0 - slack

    @property
    def squeezed_quadrature(self) -> str | None:
        """'x' or 'y' when that variance is below the vacuum value 1/4."""
        if self.var_x < 0.25:
            return "x"
        if self.var_y < 0.25:
            return "y"
        return None


@dataclass(frozen=True)
class VarianceTerms:
    """Individual terms of the closed-form variances, in printed order."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    y_first_amended: float


@dataclass(frozen=True)
class VarianceDiscrepancy:
    numeric: VarianceReport
    printed: VarianceReport
    amended: VarianceReport
    term_deltas: dict

    @property
    def printed_error(self) -> tuple[float, float]:
        return (self.printed.var_x - self.numeric.var_x, self.printed.var_y - self.numeric.var_y)

    @property
    def amended_error(self) -> tuple[float, float]:
        return (self.amended.var_x - self.numeric.var_x, self.amended.var_y - self.numeric.var_y)


def _check_branch(branch: str) -> str:
    if branch not in BRANCHES:
        raise DomainError(f"Branch must be '+' or '-', got {branch!r}")
    return branch


# -------------------------------------------------
# Mechanical cats
# -------------------------------------------------
def entangled_state(t: float, p: SystemParams, mech_dim: int) -> PureState:
    """(1/sqrt2) S(r_s) S(-r_s e^{-2i ws t}) {|0>|0> + e^{i eps}|1> D(alpha)|0>}."""
    mech = ModeSpec(mech_dim)
    e = model.effective_params(p)
    alpha = model.coherent_amplitude(t, e)
    eps = model.kerr_phase(t, e)
    squeeze = model.composite_squeeze(t, e, mech)

    branch0 = squeeze[:, 0]
    branch1 = cmath.exp(1j * eps) * (squeeze @ fock.coherent(alpha, mech).amplitudes)
    amplitudes = np.concatenate([branch0, branch1]) / math.sqrt(2.0)
    state = PureState(amplitudes, (ModeSpec(2), mech))
    fock.check_leakage(state.amplitudes, state.dims, f"entangled state at t={t:.6g}", factor=1)
    return state


def concurrence_analytic(t, p: SystemParams):
    alpha = model.coherent_amplitude(t, model.effective_params(p))
    c = np.sqrt(1.0 - np.exp(-np.abs(alpha) ** 2))
    return float(c) if np.ndim(c) == 0 else c


def branch_probabilities(t: float, p: SystemParams) -> dict[str, float]:
    """p(+/-) = {2 +/- 2 exp(-|alpha|^2/2) cos eps} / 4."""
    e = model.effective_params(p)
    alpha = model.coherent_amplitude(t, e)
    interference = 2.0 * math.exp(-0.5 * abs(alpha) ** 2) * math.cos(model.kerr_phase(t, e))
    return {"+": (2.0 + interference) / 4.0, "-": (2.0 - interference) / 4.0}


def cavity_branch_vector(branch: str, dimension: int = 2) -> np.ndarray:
    """|phi+/-> = (|0> +/- |1>)/sqrt2 in a cavity of the given dimension."""
    sign = 1.0 if _check_branch(branch) == "+" else -1.0
    vec = np.zeros(dimension, dtype=complex)
    vec[0], vec[1] = 1.0 / math.sqrt(2.0), sign / math.sqrt(2.0)
    return vec


def project_cavity(state: PureState, branch: str) -> ProjectedCat:
    """Project the cavity onto |phi+/->; the mechanics is left in the conditional cat."""
    if len(state.dims) != 2:
        raise DimensionMismatchError("project_cavity expects a (cavity, mechanics) state")
    cav, mech = state.dims
    phi = cavity_branch_vector(branch, cav.dimension)
    amps = state.amplitudes.reshape(cav.dimension, mech.dimension)
    conditional = phi.conj() @ amps
    probability = float(np.vdot(conditional, conditional).real) / state.norm ** 2
    if probability < BRANCH_MIN_PROBABILITY:
        raise DegenerateBranchError(branch, probability)
    mech_state = PureState(conditional, (mech,)).normalized()
    return ProjectedCat(
        branch=branch,
        state=mech_state,
        probability=probability,
        norm_const=1.0 / math.sqrt(probability),
    )


def _fitted_entangled_state(t: float, p: SystemParams) -> PureState:
    dim = model.suggest_mech_dim(t, p)
    if dim > MAX_AUTO_DIM:
        raise LeakageError("suggested mechanical dimension", dim, MAX_AUTO_DIM,
                           "state too large for dense evolution")
    while True:
        try:
            return entangled_state(t, p, dim)
        except LeakageError:
            if dim >= MAX_AUTO_DIM:
                raise
            logger.debug("Mechanical dimension %d leaks at t=%.6g; doubling", dim, t)
            dim = min(2 * dim, MAX_AUTO_DIM)


def fitted_mech_dim(t: float, p: SystemParams) -> int:
    """suggest_mech_dim, doubled (up to MAX_AUTO_DIM) until the entangled state at t passes the leakage guard."""
    return _fitted_entangled_state(t, p).dims[1].dimension


def projected_cat(t: float, p: SystemParams, branch: str = "+", mech_dim: int | None = None) -> ProjectedCat:
    """Cat state at time t; without `mech_dim` the truncation is fitted as in fitted_mech_dim."""
    if mech_dim is not None:
        return project_cavity(entangled_state(t, p, mech_dim), branch)
    return project_cavity(_fitted_entangled_state(t, p), branch)


# -------------------------------------------------
# Quadrature variances
# -------------------------------------------------
def _helper_functions(t: float, r: float, omega_s: float):
    ph = cmath.exp(2j * omega_s * t)
    g = math.cosh(r) + ph * math.sinh(r)
    g1 = math.cosh(r) - ph * math.sinh(r)
    h = math.cosh(r) ** 2 + ph * math.sinh(2 * r) + ph * ph * math.sinh(r) ** 2
    h1 = math.cosh(r) ** 2 - ph * math.sinh(2 * r) + ph * ph * math.sinh(r) ** 2
    s = math.sinh(2 * r) * math.cos(2 * omega_s * t) + math.cosh(2 * r)
    s1 = -math.sinh(2 * r) * math.cos(2 * omega_s * t) + math.cosh(2 * r)
    return g, g1, h, h1, s, s1


def variance_terms(t: float, p: SystemParams) -> VarianceTerms:
    """Evaluate each bracket of the + branch variance formulas separately."""
    e = model.effective_params(p)
    r = e.r_s
    alpha = model.coherent_amplitude(t, e)
    eps = model.kerr_phase(t, e)
    g, g1, h, h1, s, s1 = _helper_functions(t, r, e.omega_s)

    a2 = alpha * alpha
    mod2 = abs(alpha) ** 2
    e1 = math.exp(-0.5 * mod2)
    e2 = math.exp(-mod2)
    ph = cmath.exp(1j * eps)
    norm2 = 4.0 / (2.0 + 2.0 * e1 * math.cos(eps))
    quarter, eighth, sixteenth = norm2 / 8.0, norm2 ** 2 / 32.0, norm2 ** 2 / 16.0
    sq_x, sq_y = math.exp(-2 * r), math.exp(2 * r)

    x_terms = (
        quarter * sq_x * (s + (h * a2).real + s * mod2),
        -eighth * sq_x * ((g * g * a2).real + abs(g) ** 2 * mod2),
        quarter * sq_x * e1 * ((s * ph).real + (h * a2 * ph).real),
        -eighth * sq_x * e2 * ((g * g * a2 * ph * ph).real + abs(g) ** 2 * mod2),
        -sixteenth * sq_x * e1 * ((abs(g) ** 2 * mod2 * ph).real + (g * g * a2 * ph).real),
    )
    y_terms = (
        quarter * sq_y * (s - (h1 * a2).real + s1 * mod2),
        eighth * sq_y * ((g1 * g1 * a2).real - abs(g1) ** 2 * mod2),
        quarter * sq_y * e1 * ((s1 * ph).real - (h1 * a2 * ph).real),
        eighth * sq_y * e2 * ((g1 * g1 * a2 * ph * ph).real - abs(g1) ** 2 * mod2),
        sixteenth * sq_y * e1 * ((g1 * g1 * a2 * ph).real - (abs(g1) ** 2 * mod2 * ph).real),
    )
    # first Y bracket with the vacuum term s1 in place of s
    y_first_amended = quarter * sq_y * (s1 - (h1 * a2).real + s1 * mod2)
    return VarianceTerms(x=x_terms, y=y_terms, y_first_amended=y_first_amended)


def variances_closed_form(t: float, p: SystemParams, amended: bool = False) -> VarianceReport:
    """Closed-form variances of the + branch cat.

    With `amended=False` the formulas are evaluated as printed; the position
    variance is exact, while the momentum variance carries s(t) in its first
    bracket. `amended=True` uses s1(t) there, which matches the numerics.
    """
    terms = variance_terms(t, p)
    var_y = sum(terms.y)
    if amended:
        var_y += terms.y_first_amended - terms.y[0]
    return VarianceReport(var_x=sum(terms.x), var_y=var_y, source="closed_form")


def variances_numeric(state) -> VarianceReport:
    """Variances by direct matrix expectation on a single-mode PureState or DensityOp."""
    if len(state.dims) != 1:
        raise DimensionMismatchError("variances_numeric expects a single-mode state")
    mode = state.dims[0]
    b = fock.annihilation(mode).matrix
    bd = b.conj().T
    x = 0.5 * (b + bd)
    y = 0.5j * (bd - b)

    if isinstance(state, PureState):
        psi = state.amplitudes / state.norm

        def mean(op):
            return np.vdot(psi, op @ psi).real
    else:
        rho = state.matrix / state.trace

        def mean(op):
            return np.trace(op @ rho).real

    var_x = mean(x @ x) - mean(x) ** 2
    var_y = mean(y @ y) - mean(y) ** 2
    return VarianceReport(var_x=float(var_x), var_y=float(var_y), source="numeric")


def variance_discrepancy(t: float, p: SystemParams, mech_dim: int | None = None,
                         tol: float = 1e-6) -> VarianceDiscrepancy:
    """Compare printed and amended closed forms with the numeric + branch cat.

    Differences above `tol` are logged as warnings, never corrected silently.
    """
    cat = projected_cat(t, p, "+", mech_dim)
    numeric = variances_numeric(cat.state)
    printed = variances_closed_form(t, p)
    amended = variances_closed_form(t, p, amended=True)
    terms = variance_terms(t, p)
    deltas = {"y_first_bracket": terms.y[0] - terms.y_first_amended}

    for label, err in zip(("var_x", "var_y"), (printed.var_x - numeric.var_x, printed.var_y - numeric.var_y)):
        if abs(err) > tol:
            logger.warning(
                "Printed %s differs from numeric by %.3e at omega_sw/omega_b=%.4f, omega_b*t=%.4f",
                label, err, p.omega_sw_ratio, p.omega_b * t,
            )
    return VarianceDiscrepancy(numeric=numeric, printed=printed, amended=amended, term_deltas=deltas)


# -------------------------------------------------
# Optical cats
# -------------------------------------------------
def kerr_superposition(alpha0: complex, kerr_ratio: float, n_dim: int) -> PureState:
    """sum_n <n|alpha0> exp(i n^2 2 pi kerr_ratio)|n>."""
    mode = ModeSpec(n_dim)
    base = fock.coherent(alpha0, mode).amplitudes
    n = np.arange(n_dim)
    phases = np.exp(1j * 2.0 * math.pi * kerr_ratio * n * n)
    return PureState(base * phases, (mode,))


def optical_state_at_tau(p: SystemParams, alpha0: complex, n_max: int) -> PureState:
    """Cavity state at tau = 2 pi / omega_s when the cavity starts in |alpha0>."""
    return kerr_superposition(alpha0, model.kerr_ratio(p), n_max)


def _cat_components(kind: str, alpha0: complex):
    if kind == "two":
        return [((1 + 1j) / 2, alpha0), ((1 - 1j) / 2, -alpha0)]
    if kind == "three":
        c1 = -1j * math.sin(math.pi / 3) / (1 + math.cos(math.pi / 3))
        c23 = (1 + cmath.exp(1j * math.pi / 3)) / (2 * (1 + math.cos(math.pi / 3)))
        return [
            (c1, -alpha0),
            (c23, alpha0 * cmath.exp(1j * math.pi / 3)),
            (c23, alpha0 * cmath.exp(-1j * math.pi / 3)),
        ]
    if kind == "four":
        quarter_turn = cmath.exp(1j * math.pi / 4) / 2
        return [
            (quarter_turn, alpha0),
            (-quarter_turn, -alpha0),
            (0.5, 1j * alpha0),
            (0.5, -1j * alpha0),
        ]
    raise DomainError(f"Unknown cat kind {kind!r}; expected one of {CAT_KINDS}")


def ideal_cat(kind: str, alpha0: complex, n_dim: int) -> PureState:
    """Two-, three- or four-component coherent-state superposition, renormalised."""
    if abs(alpha0) < MIN_CAT_AMPLITUDE:
        raise DomainError(
            f"|alpha0| = {abs(alpha0):.3g} below {MIN_CAT_AMPLITUDE}: cat components coincide"
        )
    mode = ModeSpec(n_dim)
    total = np.zeros(n_dim, dtype=complex)
    for coeff, amp in _cat_components(kind, alpha0):
        total += coeff * fock.coherent(amp, mode).amplitudes
    return PureState(total, (mode,)).normalized()
