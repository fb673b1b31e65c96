"""Tensor-product linear algebra on labeled finite-dimensional spaces.

All state and operator types are frozen dataclasses wrapping read-only numpy
arrays. Entropies are in nats (k_B = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import InputValidationError, InvariantViolationError, NumericalConsistencyError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NORM_TOL = 1e-10
PSD_SLACK = 1e-10
ZERO_EIGENVALUE = 1e-12


@dataclass(frozen=True)
class SpaceLayout:
    """Ordered labeled factors of a tensor-product Hilbert space."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        factors = tuple((str(label), int(dim)) for label, dim in self.factors)
        if not factors:
            raise InputValidationError("a layout needs at least one factor")
        labels = [label for label, _ in factors]
        if len(set(labels)) != len(labels):
            raise InputValidationError(f"duplicate factor labels in {labels}")
        for label, dim in factors:
            if dim < 1:
                raise InputValidationError(f"factor {label!r} has dimension {dim} < 1")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def of(cls, *factors: tuple[str, int]) -> "SpaceLayout":
        return cls(tuple(factors))

    @classmethod
    def single(cls, dim: int, label: str = "q") -> "SpaceLayout":
        return cls(((label, dim),))

    @classmethod
    def registers(cls, prefix: str, n: int, dim: int = 2) -> "SpaceLayout":
        return cls(tuple((f"{prefix}{i}", dim) for i in range(n)))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.factors)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def concat(self, other: "SpaceLayout") -> "SpaceLayout":
        return SpaceLayout(self.factors + other.factors)

    def positions(self, keep: Iterable[str]) -> list[int]:
        """Indices (in layout order) of the factors named in ``keep``."""
        if isinstance(keep, str):
            keep = [keep]
        keep = set(keep)
        if not keep:
            raise InputValidationError("keep must name at least one factor")
        unknown = keep - set(self.labels)
        if unknown:
            raise InputValidationError(
                f"unknown factor labels {sorted(unknown)}; layout has {list(self.labels)}"
            )
        return [i for i, label in enumerate(self.labels) if label in keep]

    def restrict(self, keep: Iterable[str]) -> "SpaceLayout":
        return SpaceLayout(tuple(self.factors[i] for i in self.positions(keep)))


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def _check_layout(layout: SpaceLayout, size: int, what: str):
    if layout.total_dim != size:
        raise InputValidationError(
            f"{what} has dimension {size} but layout {layout.dims} has {layout.total_dim}"
        )


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    layout: SpaceLayout

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1:
            raise InputValidationError(f"amplitudes must be a vector, got shape {amps.shape}")
        _check_layout(self.layout, amps.shape[0], "state")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InputValidationError(f"state norm {norm!r} deviates from 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def basis(cls, index: int, layout: SpaceLayout) -> "PureState":
        amps = np.zeros(layout.total_dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps, layout)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix.

    Construction checks Hermiticity and trace. Positivity requires an
    eigendecomposition, so it is checked by :func:`check_density_matrix` and
    by :func:`vn_entropy` instead.
    """

    matrix: np.ndarray
    layout: SpaceLayout

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputValidationError(f"density matrix must be square, got shape {m.shape}")
        _check_layout(self.layout, m.shape[0], "density matrix")
        herm = hermiticity_error(m)
        if herm > HERMITIAN_TOL:
            raise InputValidationError(f"density matrix not Hermitian (max deviation {herm:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InputValidationError(f"density matrix trace {tr!r} deviates from 1")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, layout: SpaceLayout) -> "DensityMatrix":
        d = layout.total_dim
        return cls(np.eye(d) / d, layout)


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    matrix: np.ndarray
    layout: SpaceLayout

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputValidationError(f"operator must be square, got shape {m.shape}")
        _check_layout(self.layout, m.shape[0], "operator")
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        herm = hermiticity_error(m)
        if herm > HERMITIAN_TOL * scale:
            raise InputValidationError(f"operator not Hermitian (max deviation {herm:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, layout: SpaceLayout) -> "HermitianOperator":
        return cls(np.eye(layout.total_dim), layout)


Tensorable = Union[PureState, DensityMatrix, HermitianOperator]


def tensor_product(a: Tensorable, b: Tensorable) -> Tensorable:
    """Kronecker product; the result layout is ``a.layout`` followed by ``b.layout``."""
    if type(a) is not type(b):
        raise InputValidationError(
            f"cannot tensor {type(a).__name__} with {type(b).__name__}"
        )
    layout = a.layout.concat(b.layout)
    if isinstance(a, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), layout)
    if isinstance(a, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix), layout)
    if isinstance(a, HermitianOperator):
        return HermitianOperator(np.kron(a.matrix, b.matrix), layout)
    raise InputValidationError(f"unsupported operand type {type(a).__name__}")


def _split(layout: SpaceLayout, keep) -> tuple[list[int], list[int]]:
    kept = layout.positions(keep)
    traced = [i for i in range(len(layout.factors)) if i not in kept]
    return kept, traced


def partial_trace(rho: DensityMatrix, keep: Iterable[str]) -> DensityMatrix:
    """Trace out every factor not named in ``keep``; kept factors stay in layout order."""
    layout = rho.layout
    kept, traced = _split(layout, keep)
    dims = layout.dims
    n = len(dims)
    dk = int(np.prod([dims[i] for i in kept], dtype=np.int64))
    dt = int(np.prod([dims[i] for i in traced], dtype=np.int64))
    t = rho.matrix.reshape(dims + dims)
    order = kept + traced
    t = t.transpose(order + [n + i for i in order]).reshape(dk, dt, dk, dt)
    reduced = np.einsum("ajbj->ab", t)
    # restore exact Hermiticity lost to summation order
    reduced = 0.5 * (reduced + reduced.conj().T)
    return DensityMatrix(reduced, layout.restrict(keep))


def reduced_state(psi: PureState, keep: Iterable[str]) -> DensityMatrix:
    """``partial_trace(dm_from_pure(psi), keep)`` without forming the full projector."""
    layout = psi.layout
    kept, traced = _split(layout, keep)
    dims = layout.dims
    dk = int(np.prod([dims[i] for i in kept], dtype=np.int64))
    m = psi.amplitudes.reshape(dims).transpose(kept + traced).reshape(dk, -1)
    reduced = m @ m.conj().T
    reduced = 0.5 * (reduced + reduced.conj().T)
    return DensityMatrix(reduced, layout.restrict(keep))


def dm_from_pure(psi: PureState) -> DensityMatrix:
    norm = np.linalg.norm(psi.amplitudes)
    if abs(norm - 1.0) > 1e-8:
        raise InputValidationError(f"state norm {norm!r} deviates from 1")
    v = psi.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), psi.layout)


def spectrum(rho: DensityMatrix) -> np.ndarray:
    """Eigenvalues with numerical noise in [-PSD_SLACK, ZERO_EIGENVALUE] set to zero.

    Raises InvariantViolationError for an eigenvalue below -PSD_SLACK.
    """
    w = np.linalg.eigvalsh(rho.matrix)
    if w.size and w[0] < -PSD_SLACK:
        raise InvariantViolationError(f"density matrix has negative eigenvalue {w[0]:.3e}")
    return np.where(w <= ZERO_EIGENVALUE, 0.0, w)


def check_density_matrix(rho: DensityMatrix) -> None:
    """Full invariant check including positivity."""
    spectrum(rho)


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > ZERO_EIGENVALUE]
    return max(float(-np.sum(p * np.log(p))), 0.0)


def vn_entropy(rho: DensityMatrix) -> float:
    """-Tr(rho ln rho) in nats."""
    return shannon_entropy(spectrum(rho))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    if rho.dim != sigma.dim:
        raise InputValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    w = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    return float(0.5 * np.sum(np.abs(w)))


def purity(rho: DensityMatrix) -> float:
    return float(np.real(np.einsum("ij,ji->", rho.matrix, rho.matrix)))


def expectation(op: HermitianOperator, rho: DensityMatrix) -> float:
    """Tr(op rho), real part; the imaginary residue must be below 1e-10 (scaled by max |op|)."""
    if op.dim != rho.dim:
        raise InputValidationError(f"dimension mismatch: operator {op.dim} vs state {rho.dim}")
    value = np.einsum("ij,ji->", op.matrix, rho.matrix)
    scale = max(1.0, float(np.max(np.abs(op.matrix))))
    if abs(value.imag) > 1e-10 * scale:
        raise NumericalConsistencyError(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) < tol
