"""Constrained subspaces, canonical states and Haar concentration sweeps."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import EmptySubspaceError, InputValidationError
from .qcore import (
    DensityMatrix,
    HermitianOperator,
    SpaceLayout,
    reduced_state,
    trace_distance,
    vn_entropy,
)
from .randsrc import SeedSpec, derive_stream, haar_state_in_subspace, isometry_error


@dataclass(frozen=True, eq=False)
class ConstraintSubspace:
    """Accessible subspace, stored as an isometry whose columns span it."""

    isometry: np.ndarray
    layout: SpaceLayout
    description: str = ""

    def __post_init__(self):
        v = np.array(self.isometry, dtype=complex)
        if v.ndim != 2:
            raise InputValidationError(f"isometry must be a matrix, got shape {v.shape}")
        if v.shape[0] != self.layout.total_dim:
            raise InputValidationError(
                f"isometry has {v.shape[0]} rows but the layout dimension is {self.layout.total_dim}"
            )
        if not 1 <= v.shape[1] <= v.shape[0]:
            raise InputValidationError(f"subspace dimension {v.shape[1]} out of range")
        err = isometry_error(v)
        if err > 1e-10:
            raise InputValidationError(f"columns not orthonormal (max deviation {err:.3e})")
        v.setflags(write=False)
        object.__setattr__(self, "isometry", v)

    @property
    def dim(self) -> int:
        return self.isometry.shape[1]


@dataclass(frozen=True)
class TypicalityStats:
    sample_count: int
    mean_distance: float
    max_distance: float
    std_distance: float
    mean_entropy: float
    env_dim: int
    sys_dim: int
    subspace_dim: int


def energy_window_subspace(h_total: HermitianOperator, e_center: float, e_width: float) -> ConstraintSubspace:
    """Eigenvectors of ``h_total`` with eigenvalue in the closed window, ascending in energy."""
    if not e_width > 0:
        raise InputValidationError(f"window width must be positive, got {e_width}")
    lo, hi = e_center - e_width / 2, e_center + e_width / 2
    w, v = np.linalg.eigh(h_total.matrix)
    mask = (w >= lo) & (w <= hi)
    if not mask.any():
        nearest = w[np.argmin(np.abs(w - e_center))]
        raise EmptySubspaceError(
            f"no eigenvalue in [{lo:.6g}, {hi:.6g}]; nearest eigenvalue is {nearest:.12g}"
        )
    return ConstraintSubspace(
        v[:, mask], h_total.layout, f"energy window [{lo:.6g}, {hi:.6g}], {int(mask.sum())} states"
    )


def full_space_subspace(layout: SpaceLayout) -> ConstraintSubspace:
    return ConstraintSubspace(np.eye(layout.total_dim), layout, "full space")


def canonical_state(subspace: ConstraintSubspace, keep: Iterable[str]) -> DensityMatrix:
    """Reduced state of the normalized projector onto the subspace."""
    layout = subspace.layout
    kept = layout.positions(keep)
    traced = [i for i in range(len(layout.factors)) if i not in kept]
    dims = layout.dims
    dk = int(np.prod([dims[i] for i in kept], dtype=np.int64))
    v = subspace.isometry.reshape(dims + (subspace.dim,))
    m = v.transpose(kept + traced + [len(dims)]).reshape(dk, -1)
    rho = m @ m.conj().T / subspace.dim
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho, layout.restrict(keep))


def _sample(subspace, keep, canonical, seed, i):
    psi = haar_state_in_subspace(subspace, derive_stream(seed, i))
    rho = reduced_state(psi, keep)
    return trace_distance(rho, canonical), vn_entropy(rho)


def typicality_sweep(
    subspace: ConstraintSubspace,
    keep: Iterable[str],
    n_samples: int,
    seed: SeedSpec,
    workers: int = 1,
) -> TypicalityStats:
    """Distance and entropy statistics of reduced Haar-random states.

    Sample ``i`` uses stream ``derive_stream(seed, i)``. Results are reduced
    in index order, so the statistics do not depend on ``workers``.
    """
    if n_samples < 1:
        raise InputValidationError(f"n_samples must be >= 1, got {n_samples}")
    keep = list(keep) if not isinstance(keep, str) else [keep]
    canonical = canonical_state(subspace, keep)
    sys_dim = canonical.dim
    args = range(n_samples)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _sample(subspace, keep, canonical, seed, i), args))
    else:
        results = [_sample(subspace, keep, canonical, seed, i) for i in args]
    dist = np.array([r[0] for r in results])
    ent = np.array([r[1] for r in results])
    return TypicalityStats(
        sample_count=n_samples,
        mean_distance=float(np.mean(dist)),
        max_distance=float(np.max(dist)),
        std_distance=float(np.std(dist)),
        mean_entropy=float(np.mean(ent)),
        env_dim=subspace.layout.total_dim // sys_dim,
        sys_dim=sys_dim,
        subspace_dim=subspace.dim,
    )
