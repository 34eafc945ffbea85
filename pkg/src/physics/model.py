# src/physics/model.py
"""
Two-mode cavity-optomechanical model of a BEC in a cavity.

H1 = wc' c^dag c + wb b^dag b + (wsw/4)(b^2 + b^dag^2) + (g/sqrt2) c^dag c (b + b^dag)   (hbar = 1)

A squeeze of the mechanics diagonalises the quadratic part, giving the
effective frequency omega_s and coupling g_s; the propagator then factorises
into squeezes, a photon-number-conditioned displacement, a Kerr phase and a
free rotation. The exact brute-force oracle exponentiates H1 directly, one
photon-number block at a time (H1 conserves c^dag c).

All frequencies are angular (rad/s); times are seconds.

Public functions:
- effective_params(p), coherent_amplitude(t, e), kerr_phase(t, e)
- kerr_ratio(p), tune_scattering(...), peak_amplitude(...), amplitude_enlargement(...)
- suggest_mech_dim(t, p, photons), composite_squeeze(t, e, mech)
- build_hamiltonian(p, dims), hamiltonian_blocks(p, dims)
- factorized_propagator(t, p, dims), apply_factorized(t, p, state)
- direct_propagator(t, p, dims), apply_direct(t, p, state)
- rotate_out_cavity(state, t, p)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
from scipy.optimize import brentq, minimize_scalar

from src.core import fock
from src.core.errors import DomainError, LeakageError
from src.core.fock import ModeSpec, Operator, PureState
from src.main.constants import BLOCK_DROP_TOL, MECH_DIM
from src.main.logger import logger


# -------------------------------------------------
# Parameters
# -------------------------------------------------
@dataclass(frozen=True)
class SystemParams:
    omega_b: float
    omega_sw: float = 0.0
    g: float = 0.0
    kappa_a: float = 0.0
    omega_c_eff: float = 0.0

    def __post_init__(self):
        for name in ("omega_b", "omega_sw", "g", "kappa_a", "omega_c_eff"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.omega_b <= 0:
            raise DomainError(f"omega_b must be positive, got {self.omega_b}")
        if abs(self.omega_sw) >= 2.0 * self.omega_b:
            raise DomainError(
                f"|omega_sw| = {abs(self.omega_sw):.6g} must stay below 2*omega_b = {2.0 * self.omega_b:.6g}"
            )
        if self.g < 0:
            raise DomainError(f"g must be non-negative, got {self.g}")
        if self.kappa_a < 0:
            raise DomainError(f"kappa_a must be non-negative, got {self.kappa_a}")

    @classmethod
    def from_ratio(cls, omega_b: float, ratio: float, g: float, kappa_a: float = 0.0,
                   omega_c_eff: float = 0.0) -> "SystemParams":
        """Build from omega_sw / omega_b."""
        return cls(omega_b=omega_b, omega_sw=ratio * omega_b, g=g, kappa_a=kappa_a,
                   omega_c_eff=omega_c_eff)

    @property
    def omega_sw_ratio(self) -> float:
        return self.omega_sw / self.omega_b

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class EffectiveParams:
    r_s: float
    omega_s: float
    g_s: float
    eta: float
    delta: float

    def __post_init__(self):
        if not self.omega_s > 0:
            raise DomainError(f"omega_s must be positive, got {self.omega_s}")
        if not math.isclose(self.eta, -self.g_s / self.omega_s, rel_tol=1e-12, abs_tol=1e-300):
            raise DomainError("eta must equal -g_s/omega_s")
        if not math.isclose(self.delta, self.g_s ** 2 / self.omega_s, rel_tol=1e-12, abs_tol=1e-300):
            raise DomainError("delta must equal g_s^2/omega_s")

    @property
    def period(self) -> float:
        """2 pi / omega_s: the mechanics returns to its initial state."""
        return 2.0 * math.pi / self.omega_s


def effective_params(p: SystemParams) -> EffectiveParams:
    wb, wsw = p.omega_b, p.omega_sw
    if abs(wsw) >= 2.0 * wb:
        raise DomainError(f"omega_sw/omega_b = {wsw / wb:.6g} outside (-2, 2)")
    r_s = 0.25 * math.log((2.0 * wb + wsw) / (2.0 * wb - wsw))
    omega_s = (wb - 0.5 * wsw) * math.exp(2.0 * r_s)
    g_s = p.g * math.exp(-r_s) / math.sqrt(2.0)
    eta = -g_s / omega_s
    delta = g_s ** 2 / omega_s
    return EffectiveParams(r_s=r_s, omega_s=omega_s, g_s=g_s, eta=eta, delta=delta)


def coherent_amplitude(t, e: EffectiveParams):
    """alpha(t) = f(t) cosh r_s - f(t)* exp(-2i omega_s t) sinh r_s, f(t) = eta (1 - exp(-i omega_s t))."""
    t = np.asarray(t, dtype=float)
    f = e.eta * (1.0 - np.exp(-1j * e.omega_s * t))
    alpha = f * math.cosh(e.r_s) - np.conj(f) * np.exp(-2j * e.omega_s * t) * math.sinh(e.r_s)
    return complex(alpha) if alpha.ndim == 0 else alpha


def kerr_phase(t, e: EffectiveParams):
    """epsilon(t) = delta t - eta^2 sin(omega_s t), kept unreduced."""
    t = np.asarray(t, dtype=float)
    eps = e.delta * t - e.eta ** 2 * np.sin(e.omega_s * t)
    return float(eps) if eps.ndim == 0 else eps


def zero_point_phase(t: float, p: SystemParams, e: EffectiveParams) -> complex:
    """Global phase exp(-i (omega_s - omega_b) t / 2) left over by the Bogoliubov rotation."""
    return complex(np.exp(-0.5j * (e.omega_s - p.omega_b) * t))


# -------------------------------------------------
# Derived scans
# -------------------------------------------------
def kerr_ratio(p: SystemParams) -> float:
    """(g_s / omega_s)^2: 1/4, 1/6, 1/8 give two-, three-, four-component cats at tau."""
    e = effective_params(p)
    return (e.g_s / e.omega_s) ** 2


def tune_scattering(target_ratio: float, omega_b: float, g: float,
                    bracket: tuple[float, float] = (-1.95, 1.0)) -> float:
    """Return omega_sw (rad/s) with (g_s/omega_s)^2 == target_ratio, searching omega_sw/omega_b in `bracket`."""
    lo, hi = bracket

    def residual(ratio):
        return kerr_ratio(SystemParams.from_ratio(omega_b, ratio, g)) - target_ratio

    f_lo, f_hi = residual(lo), residual(hi)
    if f_lo * f_hi > 0:
        raise DomainError(
            f"Kerr ratio {target_ratio:.6g} not bracketed by omega_sw/omega_b in [{lo}, {hi}]"
        )
    root = brentq(residual, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=200)
    logger.debug("Kerr ratio %.6g reached at omega_sw/omega_b = %.12f", target_ratio, root)
    return root * omega_b


def peak_amplitude(p: SystemParams, t_grid) -> tuple[float, float]:
    """(max |alpha(t)|, t at the maximum) over [t_grid[0], t_grid[-1]].

    The best grid point is refined by a bounded Brent search between its
    neighbours, so the result does not depend on whether a peak time falls
    on the grid.
    """
    e = effective_params(p)
    t_grid = np.asarray(t_grid, dtype=float)
    values = np.abs(coherent_amplitude(t_grid, e))
    i = int(np.argmax(values))
    lo, hi = float(t_grid[max(i - 1, 0)]), float(t_grid[min(i + 1, t_grid.size - 1)])
    if hi <= lo:
        return float(values[i]), float(t_grid[i])
    width = hi - lo
    res = minimize_scalar(lambda u: -abs(coherent_amplitude(lo + u * width, e)),
                          bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
    if -res.fun <= values[i]:
        return float(values[i]), float(t_grid[i])
    return float(-res.fun), lo + float(res.x) * width


def suggest_mech_dim(t: float, p: SystemParams, photons: int = 1, floor: int = MECH_DIM) -> int:
    """Mechanical truncation that comfortably holds S S D(n alpha(t))|0> for n = `photons`."""
    e = effective_params(p)
    reach = photons * abs(coherent_amplitude(t, e)) * math.exp(abs(e.r_s))
    squeeze_levels = int(math.ceil(40.0 * math.exp(2.0 * abs(e.r_s))))
    return max(floor, fock.displacement_dimension(reach) + squeeze_levels)


def amplitude_enlargement(omega_b: float, g: float, omega_sw_ratio: float) -> float:
    """|alpha(pi/omega_b)| at the given omega_sw relative to omega_sw = 0."""
    t = math.pi / omega_b
    base = abs(coherent_amplitude(t, effective_params(SystemParams(omega_b=omega_b, g=g))))
    if base == 0.0:
        raise DomainError("Amplitude enlargement undefined for g = 0")
    tuned = abs(coherent_amplitude(t, effective_params(SystemParams.from_ratio(omega_b, omega_sw_ratio, g))))
    return tuned / base


# -------------------------------------------------
# Hamiltonian
# -------------------------------------------------
def _mech_pieces(mech: ModeSpec):
    b = fock.annihilation(mech).matrix
    bd = b.conj().T
    return b, bd, bd @ b


def hamiltonian_blocks(p: SystemParams, dims) -> list[np.ndarray]:
    """Mechanical block of H1 for each cavity photon number n = 0 .. dc-1."""
    cav, mech = fock._as_dims(dims)
    b, bd, nb = _mech_pieces(mech)
    h_mech = p.omega_b * nb + 0.25 * p.omega_sw * (b @ b + bd @ bd)
    x = b + bd
    coupling = p.g / math.sqrt(2.0)
    eye = np.eye(mech.dimension)
    return [p.omega_c_eff * n * eye + h_mech + coupling * n * x for n in range(cav.dimension)]


def build_hamiltonian(p: SystemParams, dims) -> Operator:
    dims = fock._as_dims(dims)
    cav, mech = dims
    b, bd, nb = _mech_pieces(mech)
    nc = fock.number(cav).matrix
    eye_c, eye_b = np.eye(cav.dimension), np.eye(mech.dimension)
    h = (
        p.omega_c_eff * np.kron(nc, eye_b)
        + p.omega_b * np.kron(eye_c, nb)
        + 0.25 * p.omega_sw * np.kron(eye_c, b @ b + bd @ bd)
        + (p.g / math.sqrt(2.0)) * np.kron(nc, b + bd)
    )
    return Operator(h, dims)


# -------------------------------------------------
# Propagators
# -------------------------------------------------
def composite_squeeze(t: float, e: EffectiveParams, mech: ModeSpec) -> np.ndarray:
    """S(r_s) S(-r_s exp(-2i omega_s t))."""
    s1 = fock.squeeze(e.r_s, mech).matrix
    s2 = fock.squeeze(-e.r_s * np.exp(-2j * e.omega_s * t), mech).matrix
    return s1 @ s2


def _block_factors(t: float, p: SystemParams, mech: ModeSpec):
    e = effective_params(p)
    alpha = coherent_amplitude(t, e)
    eps = kerr_phase(t, e)
    squeeze = composite_squeeze(t, e, mech)
    rotation = np.exp(-1j * e.omega_s * t * np.arange(mech.dimension))
    return e, alpha, eps, squeeze, rotation


def _guard_displacement(n_top: int, alpha: complex, mech: ModeSpec):
    need = fock.displacement_dimension(n_top * abs(alpha))
    if need > mech.dimension:
        raise LeakageError("n_c*|alpha(t)|", n_top * abs(alpha), mech.dimension,
                           f"needs mechanical dimension >= {need}")


def _factorized_block(n: int, t: float, p: SystemParams, e, alpha, eps, squeeze, rotation, mech):
    phase = np.exp(-1j * p.omega_c_eff * n * t) * np.exp(1j * n * n * eps)
    disp = fock.displacement(n * alpha, mech).matrix
    return phase * (squeeze @ (disp * rotation[np.newaxis, :]))


def factorized_propagator(t: float, p: SystemParams, dims) -> Operator:
    """U(t) = S(r_s) S(-r_s e^{-2i ws t}) e^{-i wc' n t} e^{i n^2 eps} D_b(n alpha) e^{-i ws b^dag b t}.

    Built blockwise per cavity Fock index n; includes the zero-point phase so it equals exp(-i H1 t).
    """
    dims = fock._as_dims(dims)
    cav, mech = dims
    e, alpha, eps, squeeze, rotation = _block_factors(t, p, mech)
    n_top = cav.dimension - 1
    _guard_displacement(n_top, alpha, mech)

    zp = zero_point_phase(t, p, e)
    blocks = [zp * _factorized_block(n, t, p, e, alpha, eps, squeeze, rotation, mech)
              for n in range(cav.dimension)]
    fock.check_leakage(blocks[-1][:, 0], (mech,), f"U(t)|{n_top},0>")
    return Operator(scipy.linalg.block_diag(*blocks), dims)


def _occupied_blocks(state: PureState):
    cav, mech = state.dims
    amps = state.amplitudes.reshape(cav.dimension, mech.dimension)
    weights = np.sum(np.abs(amps) ** 2, axis=1)
    occupied = [n for n in range(cav.dimension) if weights[n] > BLOCK_DROP_TOL]
    dropped = float(weights.sum() - weights[occupied].sum()) if occupied else float(weights.sum())
    if dropped > 0.0:
        logger.debug("Dropping %.3e population from unoccupied photon blocks", dropped)
    return amps, occupied


def apply_factorized(t: float, p: SystemParams, state: PureState) -> PureState:
    """Apply the factorized propagator to a (cavity, mechanics) state block by block."""
    cav, mech = state.dims
    amps, occupied = _occupied_blocks(state)
    e, alpha, eps, squeeze, rotation = _block_factors(t, p, mech)
    if occupied:
        _guard_displacement(max(occupied), alpha, mech)

    zp = zero_point_phase(t, p, e)
    out = np.zeros_like(amps)
    for n in occupied:
        block = _factorized_block(n, t, p, e, alpha, eps, squeeze, rotation, mech)
        out[n] = zp * (block @ amps[n])
    result = PureState(out.reshape(-1), state.dims)
    fock.check_leakage(result.amplitudes, state.dims, "U(t)|psi>", factor=1)
    return result


def _direct_blocks(t: float, p: SystemParams, dims, photons=None) -> dict[int, np.ndarray]:
    blocks = hamiltonian_blocks(p, dims)
    wanted = range(len(blocks)) if photons is None else photons
    return {n: scipy.linalg.expm(-1j * t * blocks[n]) for n in wanted}


def direct_propagator(t: float, p: SystemParams, dims, blockwise: bool = True) -> Operator:
    """exp(-i H1 t) by brute-force exponentiation (blockwise over photon number unless told otherwise)."""
    dims = fock._as_dims(dims)
    if not blockwise:
        return fock.expm(Operator(-1j * t * build_hamiltonian(p, dims).matrix, dims))
    blocks = _direct_blocks(t, p, dims)
    return Operator(scipy.linalg.block_diag(*[blocks[n] for n in sorted(blocks)]), dims)


def apply_direct(t: float, p: SystemParams, state: PureState) -> PureState:
    amps, occupied = _occupied_blocks(state)
    blocks = _direct_blocks(t, p, state.dims, occupied)
    out = np.zeros_like(amps)
    for n in occupied:
        out[n] = blocks[n] @ amps[n]
    result = PureState(out.reshape(-1), state.dims)
    fock.check_leakage(result.amplitudes, state.dims, "exp(-iHt)|psi>", factor=1)
    return result


def rotate_out_cavity(state: PureState, t: float, p: SystemParams) -> PureState:
    """Undo the free cavity evolution exp(-i wc' c^dag c t) (interaction picture)."""
    if p.omega_c_eff == 0.0:
        return state
    cav, mech = state.dims
    phases = np.exp(1j * p.omega_c_eff * t * np.arange(cav.dimension))
    amps = state.amplitudes.reshape(cav.dimension, mech.dimension) * phases[:, np.newaxis]
    return PureState(amps.reshape(-1), state.dims)
