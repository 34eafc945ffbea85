# src/physics/measures.py
"""
State diagnostics: Wigner functions, fidelities, entanglement and moments.

Phase-space convention: xi = x + i y with x <-> X = (b + b^dag)/2 and
y <-> Y = i(b^dag - b)/2, so the vacuum is W(xi) = (2/pi) exp(-2|xi|^2) and a
coherent state |alpha> peaks at xi = alpha. WignerGrid.values[i, j] is
W(x_axis[i] + i y_axis[j]).

Two Wigner evaluators are provided:
- "laguerre" (default): iterative recurrence over the Fock matrix elements of
  |m><n|, exact for the truncated rho and vectorised over the grid.
- "displaced_parity": (2/pi) Tr[D^dag(xi) rho D(xi) (-1)^n] point by point,
  with rho zero-padded into a working space large enough for the grid.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.ndimage import maximum_filter

from src.core import fock
from src.core.errors import DimensionMismatchError, DomainError, LeakageError
from src.core.fock import DensityOp, ModeSpec, PureState
from src.main.logger import logger

WIGNER_METHODS = ("laguerre", "displaced_parity")

# Fock populations below this do not count towards a state's support
SUPPORT_TOL = 1e-14


# -------------------------------------------------
# Wigner grids
# -------------------------------------------------
@dataclass(frozen=True, eq=False)
class WignerGrid:
    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_axis, dtype=float)
        y = np.asarray(self.y_axis, dtype=float)
        values = np.asarray(self.values)
        if np.iscomplexobj(values):
            residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
            if residue > 1e-10:
                raise DomainError(f"Wigner values carry imaginary residue {residue:.3e}")
            values = values.real
        values = np.array(values, dtype=float)
        if values.shape != (x.size, y.size):
            raise DimensionMismatchError(
                f"Wigner values shape {values.shape} does not match axes ({x.size}, {y.size})"
            )
        for arr in (x, y, values):
            arr.setflags(write=False)
        object.__setattr__(self, "x_axis", x)
        object.__setattr__(self, "y_axis", y)
        object.__setattr__(self, "values", values)

    @property
    def dx(self) -> float:
        return float(self.x_axis[1] - self.x_axis[0]) if self.x_axis.size > 1 else 1.0

    @property
    def dy(self) -> float:
        return float(self.y_axis[1] - self.y_axis[0]) if self.y_axis.size > 1 else 1.0

    def integral(self) -> float:
        """Riemann sum of W dx dy."""
        return float(self.values.sum() * self.dx * self.dy)

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def value_at(self, xi: complex) -> float:
        """Value at the grid point nearest to xi."""
        i = int(np.argmin(np.abs(self.x_axis - xi.real)))
        j = int(np.argmin(np.abs(self.y_axis - xi.imag)))
        return float(self.values[i, j])


def _as_single_mode_density(state) -> DensityOp:
    if isinstance(state, PureState):
        state = state.to_density()
    if len(state.dims) != 1:
        raise DimensionMismatchError("Wigner functions are defined for single-mode states")
    return state


def effective_support(rho: DensityOp) -> int:
    """Highest Fock index carrying population above SUPPORT_TOL (0 for the vacuum)."""
    pops = np.real(np.diag(rho.matrix))
    occupied = np.nonzero(pops > SUPPORT_TOL)[0]
    return int(occupied[-1]) if occupied.size else 0


def working_dimension(rho: DensityOp, radius: float) -> int:
    """Truncation that holds every D(xi) rho D^dag(xi) with |xi| <= radius."""
    reach = math.sqrt(effective_support(rho)) + radius
    return max(rho.dims[0].dimension, int(math.ceil(reach * reach + 8.0 * reach + 16.0)))


def _grid_radius(x_axis, y_axis) -> float:
    return float(math.hypot(np.max(np.abs(x_axis)), np.max(np.abs(y_axis))))


def _wigner_laguerre(rho: np.ndarray, x_axis: np.ndarray, y_axis: np.ndarray) -> np.ndarray:
    cutoff = rho.shape[0]
    grid = x_axis[:, np.newaxis] + 1j * y_axis[np.newaxis, :]
    wmat = np.zeros((2, cutoff) + grid.shape, dtype=complex)

    wmat[0, 0] = np.exp(-2.0 * np.abs(grid) ** 2) / np.pi
    w = np.real(rho[0, 0]) * np.real(wmat[0, 0])
    for n in range(1, cutoff):
        wmat[0, n] = (2.0 * grid * wmat[0, n - 1]) / np.sqrt(n)
        w += 2.0 * np.real(rho[0, n] * wmat[0, n])

    for m in range(1, cutoff):
        wmat[1, m] = (2.0 * np.conj(grid) * wmat[0, m] - np.sqrt(m) * wmat[0, m - 1]) / np.sqrt(m)
        w += np.real(rho[m, m] * wmat[1, m])
        for n in range(m + 1, cutoff):
            wmat[1, n] = (2.0 * grid * wmat[1, n - 1] - np.sqrt(m) * wmat[0, n - 1]) / np.sqrt(n)
            w += 2.0 * np.real(rho[m, n] * wmat[1, n])
        wmat[0] = wmat[1]

    return 2.0 * w


def _wigner_displaced_parity(rho: np.ndarray, x_axis: np.ndarray, y_axis: np.ndarray) -> np.ndarray:
    mode = ModeSpec(rho.shape[0])
    parity = np.real(np.diag(fock.parity(mode).matrix))
    out = np.empty((x_axis.size, y_axis.size))
    for i, x in enumerate(x_axis):
        for j, y in enumerate(y_axis):
            d = fock.displacement(complex(x, y), mode).matrix
            shifted = d.conj().T @ rho @ d
            out[i, j] = (2.0 / np.pi) * float(np.real(np.diag(shifted) @ parity))
    return out


def wigner(state, x_axis, y_axis, method: str = "laguerre", pad: bool = True,
           threads: int = 1) -> WignerGrid:
    """Wigner function W(xi) = (2/pi) Tr[D^dag(xi) rho D(xi) (-1)^n] on a rectangular grid.

    With `pad=False` the grid extent guard |xi|^2 + 6|xi| + 10 <= d is enforced on
    the state's own truncation. Rows of the grid are split across `threads`
    workers; every point is computed independently of the others.
    """
    if method not in WIGNER_METHODS:
        raise DomainError(f"Unknown Wigner method {method!r}; expected one of {WIGNER_METHODS}")
    rho = _as_single_mode_density(state)
    x_axis = np.asarray(x_axis, dtype=float)
    y_axis = np.asarray(y_axis, dtype=float)
    radius = _grid_radius(x_axis, y_axis)

    dimension = rho.dims[0].dimension
    if not pad:
        need = fock.displacement_dimension(radius)
        if need > dimension:
            raise LeakageError("|xi|_max", radius, dimension, f"Wigner grid needs dimension >= {need}")
        matrix = rho.matrix
    elif method == "displaced_parity":
        work = working_dimension(rho, radius)
        matrix = fock.embed(rho, work).matrix
        logger.debug("Displaced-parity Wigner on working dimension %d (state %d)", work, dimension)
    else:
        matrix = rho.matrix

    kernel = _wigner_laguerre if method == "laguerre" else _wigner_displaced_parity
    if threads <= 1 or x_axis.size < 2:
        values = kernel(matrix, x_axis, y_axis)
    else:
        chunks = np.array_split(np.arange(x_axis.size), min(threads, x_axis.size))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda rows: kernel(matrix, x_axis[rows], y_axis), chunks))
        values = np.vstack(parts)
    return WignerGrid(x_axis=x_axis, y_axis=y_axis, values=values)


def negativity_volume(w: WignerGrid) -> float:
    """sum |min(W, 0)| dx dy."""
    return float(np.sum(np.abs(np.minimum(w.values, 0.0))) * w.dx * w.dy)


def wigner_moments(w: WignerGrid) -> dict[str, float]:
    """Means and variances of Re xi and Im xi under the (normalised) grid."""
    total = w.values.sum()
    if total == 0.0:
        raise DomainError("Wigner grid integrates to zero")
    x = w.x_axis[:, np.newaxis]
    y = w.y_axis[np.newaxis, :]
    mean_x = float((w.values * x).sum() / total)
    mean_y = float((w.values * y).sum() / total)
    var_x = float((w.values * (x - mean_x) ** 2).sum() / total)
    var_y = float((w.values * (y - mean_y) ** 2).sum() / total)
    return {"mean_x": mean_x, "mean_y": mean_y, "var_x": var_x, "var_y": var_y}


def local_maxima(w: WignerGrid, threshold: float = 0.0) -> list[tuple[float, float, float]]:
    """Interior grid points strictly above `threshold` that dominate their 3x3 neighbourhood."""
    values = w.values
    peak = maximum_filter(values, size=3, mode="constant", cval=-np.inf) == values
    peak[0, :] = peak[-1, :] = False
    peak[:, 0] = peak[:, -1] = False
    peak &= values > threshold
    found = [(float(w.x_axis[i]), float(w.y_axis[j]), float(values[i, j])) for i, j in zip(*np.nonzero(peak))]
    return sorted(found, key=lambda item: -item[2])


def position_distribution(state, x_axis) -> np.ndarray:
    """|<x|psi>|^2 for X = (b + b^dag)/2, from Hermite functions of the Fock amplitudes."""
    rho = _as_single_mode_density(state)
    x_axis = np.asarray(x_axis, dtype=float)
    d = rho.dims[0].dimension
    q = math.sqrt(2.0) * x_axis

    phi = np.empty((d, q.size))
    phi[0] = np.pi ** -0.25 * np.exp(-0.5 * q * q)
    if d > 1:
        phi[1] = math.sqrt(2.0) * q * phi[0]
    for n in range(1, d - 1):
        phi[n + 1] = math.sqrt(2.0 / (n + 1)) * q * phi[n] - math.sqrt(n / (n + 1)) * phi[n - 1]

    density = np.einsum("mi,mn,ni->i", phi, rho.matrix, phi)
    return math.sqrt(2.0) * np.real(density)


# -------------------------------------------------
# Overlaps and fidelities
# -------------------------------------------------
def overlap(a: PureState, b: PureState) -> complex:
    fock._require_same_dims(a.dims, b.dims)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def state_distance(a: PureState, b: PureState) -> float:
    """min over phi of ||a - exp(i phi) b||."""
    fock._require_same_dims(a.dims, b.dims)
    value = a.norm ** 2 + b.norm ** 2 - 2.0 * abs(overlap(a, b))
    return math.sqrt(max(value, 0.0))


def fidelity(a, b) -> float:
    """|<a|b>|^2 for pure pairs, <a|rho|a> for mixed-pure pairs, Uhlmann fidelity otherwise."""
    fock._require_same_dims(a.dims, b.dims)
    if isinstance(a, PureState) and isinstance(b, PureState):
        value = abs(overlap(a, b)) ** 2 / (a.norm ** 2 * b.norm ** 2)
    elif isinstance(a, PureState) or isinstance(b, PureState):
        pure, mixed = (a, b) if isinstance(a, PureState) else (b, a)
        psi = pure.amplitudes / pure.norm
        value = float(np.real(np.vdot(psi, mixed.matrix @ psi))) / mixed.trace
    else:
        rho = a.matrix / a.trace
        sigma = b.matrix / b.trace
        root = scipy.linalg.sqrtm(rho)
        inner = scipy.linalg.sqrtm(root @ sigma @ root)
        value = float(np.real(np.trace(inner))) ** 2
    return float(min(max(value, 0.0), 1.0))


def purity(state) -> float:
    if isinstance(state, PureState):
        return 1.0
    rho = state.matrix / state.trace
    return float(np.real(np.trace(rho @ rho)))


# -------------------------------------------------
# Entanglement
# -------------------------------------------------
def _two_factor(state: PureState):
    if len(state.dims) != 2:
        raise DimensionMismatchError("Expected a (cavity, mechanics) state")
    cav, mech = state.dims
    return state.amplitudes.reshape(cav.dimension, mech.dimension) / state.norm


def concurrence_numeric(state: PureState) -> float:
    """sqrt(2 (1 - Tr rho_c^2)) from the reduced cavity state."""
    reduced = fock.partial_trace(PureState(_two_factor(state).reshape(-1), state.dims), keep=0)
    value = 2.0 * (1.0 - purity(reduced))
    return math.sqrt(max(value, 0.0))


def entanglement_entropy(state, keep: int = 0) -> float:
    """Von Neumann entropy (natural log) of the reduction onto factor `keep`."""
    if isinstance(state, PureState):
        schmidt = scipy.linalg.svd(_two_factor(state), compute_uv=False)
        probs = schmidt ** 2
    else:
        reduced = fock.partial_trace(state, keep=keep)
        probs = np.linalg.eigvalsh(0.5 * (reduced.matrix + reduced.matrix.conj().T)) / reduced.trace
    probs = probs[probs > 1e-15]
    return float(-np.sum(probs * np.log(probs)))
