# src/core/fock.py
"""
Dense linear algebra over truncated bosonic Fock spaces.

Index n of a mode is the Fock state |n>, ascending. Joint spaces are Kronecker
products with the factor order fixed as (cavity, mechanics).

Public API:
- ModeSpec, Operator, PureState, DensityOp
- annihilation(mode), creation(mode), number(mode), identity(mode), parity(mode)
- displacement(xi, mode), squeeze(z, mode), expm(op)
- basis(mode, n), coherent(alpha, mode)
- tensor(a, b), partial_trace(rho, keep), expect(op, state)
- tail_population(...), check_leakage(...), embed(...)

Displacement and squeeze operators are exponentials of their exact truncated
generators; closed-form coherent amplitudes are only used by the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
import scipy.linalg

from src.core.errors import DimensionMismatchError, DomainError, LeakageError
from src.main.constants import (
    EIGEN_TOL,
    HERMITIAN_TOL,
    LEAK_MARGIN,
    LEAK_TOL,
    SQUEEZE_MAX,
    TRACE_TOL,
)
from src.main.logger import logger


# -------------------------------------------------
# Domain types
# -------------------------------------------------
@dataclass(frozen=True)
class ModeSpec:
    """One truncated bosonic mode holding |0> ... |dimension-1>."""

    dimension: int

    def __post_init__(self):
        if not isinstance(self.dimension, (int, np.integer)) or self.dimension < 2:
            raise DomainError(f"Fock dimension must be an integer >= 2, got {self.dimension!r}")


def _as_dims(dims) -> tuple[ModeSpec, ...]:
    if isinstance(dims, ModeSpec):
        return (dims,)
    return tuple(d if isinstance(d, ModeSpec) else ModeSpec(int(d)) for d in dims)


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def dims_size(dims: Sequence[ModeSpec]) -> int:
    return int(np.prod([d.dimension for d in dims]))


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    dims: tuple[ModeSpec, ...]

    def __post_init__(self):
        dims = _as_dims(self.dims)
        matrix = _frozen(self.matrix)
        size = dims_size(dims)
        if matrix.shape != (size, size):
            raise DimensionMismatchError(
                f"Operator matrix shape {matrix.shape} does not match factor dimensions "
                f"{[d.dimension for d in dims]}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", matrix)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.dims)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _require_same_dims(self.dims, other.dims)
            return Operator(self.matrix @ other.matrix, self.dims)
        if isinstance(other, PureState):
            _require_same_dims(self.dims, other.dims)
            return PureState(self.matrix @ other.amplitudes, self.dims)
        return NotImplemented

    def unitarity_defect(self, margin: int = LEAK_MARGIN, factors=None) -> float:
        """max |U^dag U - I| over columns whose Fock indices stay below d - margin.

        `factors` limits the margin to the listed factor indices (default: all).
        """
        keep = _low_index_mask(self.dims, margin, factors)
        gram = self.matrix.conj().T @ self.matrix
        block = gram[np.ix_(keep, keep)] - np.eye(int(keep.sum()))
        return float(np.max(np.abs(block))) if block.size else 0.0


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[ModeSpec, ...]

    def __post_init__(self):
        dims = _as_dims(self.dims)
        amplitudes = _frozen(self.amplitudes).reshape(-1)
        if amplitudes.shape[0] != dims_size(dims):
            raise DimensionMismatchError(
                f"State length {amplitudes.shape[0]} does not match factor dimensions "
                f"{[d.dimension for d in dims]}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "PureState":
        n = self.norm
        if n == 0.0:
            raise DomainError("Cannot normalize the zero vector")
        return PureState(self.amplitudes / n, self.dims)

    def to_density(self) -> "DensityOp":
        return DensityOp(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass(frozen=True, eq=False)
class DensityOp:
    matrix: np.ndarray
    dims: tuple[ModeSpec, ...]

    def __post_init__(self):
        dims = _as_dims(self.dims)
        matrix = _frozen(self.matrix)
        size = dims_size(dims)
        if matrix.shape != (size, size):
            raise DimensionMismatchError(
                f"Density matrix shape {matrix.shape} does not match factor dimensions "
                f"{[d.dimension for d in dims]}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", matrix)

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def normalized(self) -> "DensityOp":
        tr = np.trace(self.matrix)
        if abs(tr) == 0.0:
            raise DomainError("Cannot normalize a density operator with zero trace")
        return DensityOp(self.matrix / tr, self.dims)

    def check_invariants(self, trace_tol: float = TRACE_TOL) -> None:
        """Raise DomainError unless Hermitian, unit trace and positive within tolerance."""
        defect = self.hermiticity_defect()
        if defect > HERMITIAN_TOL:
            raise DomainError(f"Density operator not Hermitian (defect {defect:.3e})")
        if abs(self.trace - 1.0) > trace_tol:
            raise DomainError(f"Density operator trace {self.trace:.12f} differs from 1")
        lam = self.min_eigenvalue()
        if lam < -EIGEN_TOL:
            raise DomainError(f"Density operator has negative eigenvalue {lam:.3e}")


def _require_same_dims(a, b):
    if tuple(x.dimension for x in a) != tuple(x.dimension for x in b):
        raise DimensionMismatchError(
            f"Factor structures differ: {[x.dimension for x in a]} vs {[x.dimension for x in b]}"
        )


def _low_index_mask(dims, margin: int, factors=None) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(d.dimension) for d in dims], indexing="ij")
    mask = np.ones(grids[0].shape, dtype=bool)
    for k, (d, grid) in enumerate(zip(dims, grids)):
        if factors is not None and k not in factors:
            continue
        mask &= grid < max(d.dimension - margin, 1)
    return mask.reshape(-1)


# -------------------------------------------------
# Leakage bookkeeping
# -------------------------------------------------
def tail_population(amplitudes, dims, factor: int | None = None, margin: int = LEAK_MARGIN) -> float:
    """Population in the top levels of one factor (or the worst factor), relative to the norm.

    The tail is the top `margin` levels, or the upper half of a mode smaller than 2 * margin.
    """
    dims = _as_dims(dims)
    vec = np.asarray(amplitudes).reshape([d.dimension for d in dims])
    probs = np.abs(vec) ** 2
    total = probs.sum()
    if total == 0.0:
        return 0.0
    factors = range(len(dims)) if factor is None else [factor]
    worst = 0.0
    for k in factors:
        axes = tuple(i for i in range(len(dims)) if i != k)
        marginal = probs.sum(axis=axes) if axes else probs
        top = min(margin, dims[k].dimension // 2)
        worst = max(worst, float(marginal[-top:].sum() / total))
    return worst


def check_leakage(amplitudes, dims, label: str, tol: float = LEAK_TOL, factor: int | None = None) -> float:
    """Raise LeakageError when the tail population exceeds `tol`; return it otherwise."""
    dims = _as_dims(dims)
    tail = tail_population(amplitudes, dims, factor=factor)
    logger.debug("Tail population of %s: %.3e", label, tail)
    if tail > tol:
        k = factor if factor is not None else len(dims) - 1
        raise LeakageError(label, tail, dims[k].dimension, "population in the top Fock levels")
    return tail


def displacement_dimension(amplitude: float) -> int:
    """Smallest truncation accepted for a displacement of size |amplitude| from the vacuum."""
    a = abs(amplitude)
    return int(math.ceil(a * a + 6.0 * a + 10.0))


# -------------------------------------------------
# Operator constructors
# -------------------------------------------------
def identity(mode: ModeSpec) -> Operator:
    return Operator(np.eye(mode.dimension), (mode,))


def annihilation(mode: ModeSpec) -> Operator:
    """<n-1|b|n> = sqrt(n)."""
    d = mode.dimension
    return Operator(np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1), (mode,))


def creation(mode: ModeSpec) -> Operator:
    return annihilation(mode).dag()


def number(mode: ModeSpec) -> Operator:
    return Operator(np.diag(np.arange(mode.dimension, dtype=float)), (mode,))


def parity(mode: ModeSpec) -> Operator:
    """(-1)^{b^dag b}."""
    return Operator(np.diag((-1.0) ** np.arange(mode.dimension)), (mode,))


def expm(op: Operator) -> Operator:
    """Matrix exponential (Pade scaling-and-squaring via scipy)."""
    return Operator(scipy.linalg.expm(op.matrix), op.dims)


def displacement(xi: complex, mode: ModeSpec) -> Operator:
    """D(xi) = exp(xi b^dag - xi* b)."""
    xi = complex(xi)
    need = displacement_dimension(abs(xi))
    if need > mode.dimension:
        raise LeakageError("|xi|", abs(xi), mode.dimension, f"needs dimension >= {need}")
    b = annihilation(mode).matrix
    gen = xi * b.conj().T - np.conj(xi) * b
    op = Operator(scipy.linalg.expm(gen), (mode,))
    check_leakage(op.matrix[:, 0], (mode,), f"D({xi:.4g})|0>")
    return op


def squeeze(z: complex, mode: ModeSpec) -> Operator:
    """S(z) = exp[(z* b^2 - z b^dag^2) / 2]; real z > 0 squeezes X = (b + b^dag)/2."""
    z = complex(z)
    if abs(z) > SQUEEZE_MAX:
        raise LeakageError("|z|", abs(z), mode.dimension, f"squeeze magnitude above {SQUEEZE_MAX}")
    b = annihilation(mode).matrix
    b2 = b @ b
    gen = 0.5 * (np.conj(z) * b2 - z * b2.conj().T)
    op = Operator(scipy.linalg.expm(gen), (mode,))
    check_leakage(op.matrix[:, 0], (mode,), f"S({z:.4g})|0>")
    return op


# -------------------------------------------------
# States
# -------------------------------------------------
def basis(mode: ModeSpec, n: int) -> PureState:
    if not 0 <= n < mode.dimension:
        raise DomainError(f"Fock index {n} outside [0, {mode.dimension})")
    vec = np.zeros(mode.dimension, dtype=complex)
    vec[n] = 1.0
    return PureState(vec, (mode,))


def vacuum(mode: ModeSpec) -> PureState:
    return basis(mode, 0)


def coherent(alpha: complex, mode: ModeSpec) -> PureState:
    """D(alpha)|0>."""
    return PureState(displacement(alpha, mode).matrix[:, 0], (mode,))


# -------------------------------------------------
# Composite structure
# -------------------------------------------------
def tensor(a, b):
    """Kronecker composite of two operators, states or density operators; dims concatenated."""
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(np.kron(a.matrix, b.matrix), a.dims + b.dims)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)
    if isinstance(a, DensityOp) and isinstance(b, DensityOp):
        return DensityOp(np.kron(a.matrix, b.matrix), a.dims + b.dims)
    raise TypeError(f"Cannot tensor {type(a).__name__} with {type(b).__name__}")


def tensor_all(items):
    return reduce(tensor, items)


def partial_trace(rho, keep: int) -> DensityOp:
    """Reduce to factor `keep`, tracing out every other factor.

    Pure states are reduced from their amplitudes without forming the joint projector.
    """
    dims = rho.dims
    if not 0 <= keep < len(dims):
        raise DimensionMismatchError(f"Factor index {keep} outside 0..{len(dims) - 1}")
    shape = [d.dimension for d in dims]
    if isinstance(rho, PureState):
        amps = np.moveaxis(rho.amplitudes.reshape(shape), keep, 0).reshape(shape[keep], -1)
        return DensityOp(amps @ amps.conj().T, (dims[keep],))
    n = len(shape)
    tensor_form = rho.matrix.reshape(shape + shape)
    # trace out factors from the last to the first so the remaining axis numbers stay valid
    for k in reversed(range(n)):
        if k == keep:
            continue
        current = tensor_form.ndim // 2
        tensor_form = np.trace(tensor_form, axis1=k, axis2=k + current)
    return DensityOp(tensor_form, (dims[keep],))


def lift(op: Operator, factor: int, dims) -> Operator:
    """Embed a single-mode operator as factor `factor` of the joint space `dims`."""
    dims = _as_dims(dims)
    if op.dims[0].dimension != dims[factor].dimension:
        raise DimensionMismatchError("Single-mode operator does not match the target factor")
    parts = [op.matrix if i == factor else np.eye(d.dimension) for i, d in enumerate(dims)]
    return Operator(reduce(np.kron, parts), dims)


def expect(op: Operator, state) -> complex:
    if isinstance(state, PureState):
        _require_same_dims(op.dims, state.dims)
        return complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))
    _require_same_dims(op.dims, state.dims)
    return complex(np.trace(op.matrix @ state.matrix))


def embed(state, dimension: int):
    """Zero-pad a single-mode state or density operator into a larger truncation."""
    if len(state.dims) != 1:
        raise DimensionMismatchError("Only single-mode states can be embedded")
    d = state.dims[0].dimension
    if dimension < d:
        raise DimensionMismatchError(f"Cannot embed dimension {d} into {dimension}")
    mode = ModeSpec(dimension)
    if isinstance(state, PureState):
        vec = np.zeros(dimension, dtype=complex)
        vec[:d] = state.amplitudes
        return PureState(vec, (mode,))
    mat = np.zeros((dimension, dimension), dtype=complex)
    mat[:d, :d] = state.matrix
    return DensityOp(mat, (mode,))
