# src/physics/dynamics.py
"""
Time evolution of the cavity-mechanics system.

- evolve_unitary(req): exact closed-system evolution, either through the
  factorized propagator or by brute-force exponentiation of H1.
- evolve_lindblad(req): master equation with cavity loss,
      d rho/dt = -i[H1, rho] + kappa_a (2 c rho c^dag - c^dag c rho - rho c^dag c),
  integrated with an adaptive Runge-Kutta scheme (scipy DOP853) in the
  dimensionless time omega_b t. With this convention <c^dag c> decays as
  exp(-2 kappa_a t).
- conditional_mechanical_state(rho, branch): mechanics after a |0> +/- |1> click.

Density-operator samples must satisfy DensityOp.check_invariants when they
are recorded; a violation raises DomainError.

Mechanical damping and thermal phonons are not modelled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from src.core import fock
from src.core.errors import DegenerateBranchError, DimensionMismatchError, DomainError, IntegrationError
from src.core.fock import DensityOp, Operator, PureState
from src.main.constants import (
    BRANCH_MIN_PROBABILITY,
    LINDBLAD_ATOL_SCALE,
    LINDBLAD_METHOD,
    LINDBLAD_TOL,
    POSITIVITY_WARN,
)
from src.main.logger import logger
from src.physics import model
from src.physics.analytic import cavity_branch_vector
from src.physics.model import SystemParams

METHODS = ("factorized", "direct_expm", "lindblad")


# -------------------------------------------------
# Requests and trajectories
# -------------------------------------------------
@dataclass(frozen=True)
class EvolutionRequest:
    initial: PureState | DensityOp
    params: SystemParams
    t_final: float
    sample_times: tuple[float, ...]
    method: str = "factorized"
    tolerance: float = LINDBLAD_TOL

    def __post_init__(self):
        times = tuple(float(t) for t in self.sample_times)
        object.__setattr__(self, "sample_times", times)
        if self.method not in METHODS:
            raise DomainError(f"Unknown evolution method {self.method!r}; expected one of {METHODS}")
        if len(self.initial.dims) != 2:
            raise DimensionMismatchError("Evolution acts on (cavity, mechanics) states")
        if not times:
            raise DomainError("At least one sample time is required")
        if any(b < a for a, b in zip(times, times[1:])):
            raise DomainError("Sample times must be ascending")
        if times[0] < 0.0 or times[-1] > self.t_final:
            raise DomainError(f"Sample times must lie in [0, {self.t_final:.6g}]")
        if self.tolerance <= 0.0:
            raise DomainError("Integrator tolerance must be positive")

    @property
    def dims(self):
        return self.initial.dims


@dataclass(frozen=True)
class SampleDiagnostics:
    time: float
    trace: float
    hermiticity_defect: float
    min_eigenvalue: float


@dataclass
class Trajectory:
    """Sampled states with per-sample invariant diagnostics.

    Closed-system runs keep PureStates; `samples` wraps them as projectors on demand.
    """

    method: str
    times: list[float] = field(default_factory=list)
    states: list = field(default_factory=list)
    diagnostics: list[SampleDiagnostics] = field(default_factory=list)

    @property
    def samples(self) -> list[tuple[float, DensityOp]]:
        return [(t, s.to_density() if isinstance(s, PureState) else s) for t, s in zip(self.times, self.states)]

    @property
    def final(self):
        return self.states[-1]

    def record(self, t: float, state, enforce: bool = True) -> None:
        """Append a sample; density operators must pass their invariant guards unless `enforce` is off."""
        self.times.append(t)
        self.states.append(state)
        self.diagnostics.append(_diagnose(t, state))
        if enforce and isinstance(state, DensityOp):
            try:
                state.check_invariants()
            except DomainError as exc:
                raise DomainError(f"Sample at t={t:.6g} of the {self.method} trajectory: {exc}") from exc

    def max_trace_drift(self) -> float:
        return max((abs(d.trace - 1.0) for d in self.diagnostics), default=0.0)

    def max_hermiticity_defect(self) -> float:
        return max((d.hermiticity_defect for d in self.diagnostics), default=0.0)


def _diagnose(t: float, state) -> SampleDiagnostics:
    if isinstance(state, PureState):
        # rank one: only the norm can drift
        return SampleDiagnostics(time=t, trace=state.norm ** 2, hermiticity_defect=0.0, min_eigenvalue=0.0)
    lam = state.min_eigenvalue()
    if lam < POSITIVITY_WARN:
        logger.warning("Density operator at t=%.6g has eigenvalue %.3e", t, lam)
    return SampleDiagnostics(
        time=t, trace=state.trace, hermiticity_defect=state.hermiticity_defect(), min_eigenvalue=lam
    )


# -------------------------------------------------
# Closed-system evolution
# -------------------------------------------------
def _propagator(t: float, p: SystemParams, dims, method: str) -> Operator:
    if method == "factorized":
        return model.factorized_propagator(t, p, dims)
    return model.direct_propagator(t, p, dims)


def evolve_unitary(req: EvolutionRequest) -> Trajectory:
    if req.method not in ("factorized", "direct_expm"):
        raise DomainError(f"evolve_unitary cannot run method {req.method!r}")
    traj = Trajectory(method=req.method)
    p = req.params

    for t in req.sample_times:
        if isinstance(req.initial, PureState):
            if req.method == "factorized":
                state = model.apply_factorized(t, p, req.initial)
            else:
                state = model.apply_direct(t, p, req.initial)
        else:
            u = _propagator(t, p, req.dims, req.method).matrix
            state = DensityOp(u @ req.initial.matrix @ u.conj().T, req.dims)
        traj.record(t, state)

    logger.debug("Unitary evolution (%s): %d samples, max norm drift %.3e",
                 req.method, len(traj.times), traj.max_trace_drift())
    return traj


# -------------------------------------------------
# Master equation
# -------------------------------------------------
def _lindblad_rhs_factory(h: np.ndarray, c: np.ndarray, kappa: float, scale: float):
    """Right-hand side in omega_b t units; `scale` = 1/omega_b."""
    rank = h.shape[0]
    cd = c.conj().T
    cdc = cd @ c
    hs = h * scale
    ks = kappa * scale

    def rhs(_tau, y):
        rho = y.reshape(rank, rank)
        out = -1j * (hs @ rho - rho @ hs)
        if ks:
            out += ks * (2.0 * c @ rho @ cd - cdc @ rho - rho @ cdc)
        return out.reshape(-1)

    return rhs


def evolve_lindblad(req: EvolutionRequest) -> Trajectory:
    """Integrate the lossy master equation; diagnostics survive in IntegrationError.trajectory."""
    if req.method != "lindblad":
        raise DomainError(f"evolve_lindblad cannot run method {req.method!r}")
    p = req.params
    dims = req.dims
    rho0 = req.initial.to_density() if isinstance(req.initial, PureState) else req.initial

    h = model.build_hamiltonian(p, dims).matrix
    c = fock.lift(fock.annihilation(dims[0]), 0, dims).matrix
    rhs = _lindblad_rhs_factory(h, c, p.kappa_a, 1.0 / p.omega_b)

    taus = np.array(req.sample_times) * p.omega_b
    tau_final = req.t_final * p.omega_b
    logger.debug("Lindblad run: dimension %d, kappa_a=%.4g, omega_b*t_final=%.6g",
                 h.shape[0], p.kappa_a, tau_final)

    sol = solve_ivp(
        rhs,
        t_span=(0.0, tau_final),
        y0=np.asarray(rho0.matrix, dtype=complex).reshape(-1),
        method=LINDBLAD_METHOD,
        t_eval=taus,
        rtol=req.tolerance,
        atol=req.tolerance * LINDBLAD_ATOL_SCALE,
    )

    failed = sol.status == -1 or not sol.success
    traj = Trajectory(method="lindblad")
    rank = h.shape[0]
    for tau, column in zip(sol.t, sol.y.T):
        traj.record(float(tau) / p.omega_b, DensityOp(column.reshape(rank, rank), dims), enforce=not failed)

    if failed:
        raise IntegrationError(f"Master-equation integration failed: {sol.message}", trajectory=traj)

    logger.debug("Lindblad run finished after %d RHS evaluations; trace drift %.3e",
                 sol.nfev, traj.max_trace_drift())
    return traj


def evolve(req: EvolutionRequest) -> Trajectory:
    if req.method == "lindblad":
        return evolve_lindblad(req)
    return evolve_unitary(req)


# -------------------------------------------------
# Conditioning and observables
# -------------------------------------------------
def branch_probability(rho: DensityOp, branch: str) -> float:
    return _sandwich(rho, branch)[1]


def _sandwich(rho, branch: str):
    if isinstance(rho, PureState):
        rho = rho.to_density()
    if len(rho.dims) != 2:
        raise DimensionMismatchError("Expected a (cavity, mechanics) density operator")
    cav, mech = rho.dims
    phi = cavity_branch_vector(branch, cav.dimension)
    blocks = rho.matrix.reshape(cav.dimension, mech.dimension, cav.dimension, mech.dimension)
    reduced = np.einsum("i,iajb,j->ab", phi.conj(), blocks, phi)
    return reduced, float(np.real(np.trace(reduced))) / rho.trace


def conditional_mechanical_state(rho: DensityOp, branch: str) -> DensityOp:
    """rho_b proportional to <phi+/-| rho |phi+/->, renormalised."""
    reduced, probability = _sandwich(rho, branch)
    if probability < BRANCH_MIN_PROBABILITY:
        raise DegenerateBranchError(branch, probability)
    mech = rho.dims[1]
    return DensityOp(reduced / np.trace(reduced), (mech,))


def expect(traj: Trajectory, op: Operator) -> np.ndarray:
    return np.array([fock.expect(op, s).real for s in traj.states])


def fock_population(traj: Trajectory, factor: int = 0) -> np.ndarray:
    """<n> of one factor along the trajectory, from the diagonal populations."""
    dims = traj.states[0].dims
    shape = [d.dimension for d in dims]
    axes = tuple(i for i in range(len(dims)) if i != factor)
    levels = np.arange(dims[factor].dimension)
    out = []
    for s in traj.states:
        if isinstance(s, PureState):
            pops = np.abs(s.amplitudes) ** 2 / s.norm ** 2
        else:
            pops = np.real(np.diag(s.matrix)) / s.trace
        marginal = pops.reshape(shape).sum(axis=axes) if axes else pops
        out.append(float(marginal @ levels))
    return np.array(out)
