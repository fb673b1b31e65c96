"""Reproducible random sampling on top of the Philox4x64 counter-based generator.

A :class:`SeedSpec` is a pair ``(master_seed, stream_index)``. The generator for
it is ``Philox(key=master_seed)`` with its 256-bit counter started at
``stream_index << 192``: every stream owns a disjoint block of 2**192 counter
values, so streams never overlap and no sampler holds shared state.

Child streams come from :func:`derive_stream`, which maps
``(stream_index, index)`` to a new counter offset with the SplitMix64
finalizer::

    child = splitmix64((stream_index * 0x9E3779B97F4A7C15 + index + 1) mod 2**64)

The random Hamiltonians and block-Haar unitaries drawn here are modeling
choices for generic energy-conserving couplings, not derived microscopic
interactions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import InputValidationError
from .qcore import HermitianOperator, PureState, SpaceLayout

if TYPE_CHECKING:
    from .typicality import ConstraintSubspace

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15
BLOCK_REL_TOL = 1e-8


def splitmix64(x: int) -> int:
    x = (x + GOLDEN64) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= int(value) <= MASK64:
                raise InputValidationError(f"{name} must be an unsigned 64-bit integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    def generator(self) -> np.random.Generator:
        return np.random.Generator(
            np.random.Philox(key=self.master_seed, counter=self.stream_index << 192)
        )

    def child(self, index: int) -> "SeedSpec":
        return derive_stream(self, index)


def derive_stream(master: SeedSpec, index: int) -> SeedSpec:
    if index < 0:
        raise InputValidationError(f"stream index must be non-negative, got {index}")
    mixed = (master.stream_index * GOLDEN64 + int(index) + 1) & MASK64
    return SeedSpec(master.master_seed, splitmix64(mixed))


def _complex_gaussians(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    # real and imaginary parts interleaved, so a vector of k draws is a prefix
    # of a k-by-k matrix drawn column by column
    z = rng.standard_normal(shape + (2,))
    return z[..., 0] + 1j * z[..., 1]


def haar_unit_vector(dim: int, stream: SeedSpec, layout: SpaceLayout | None = None) -> PureState:
    """Uniform (Haar) random unit vector: 2*dim Gaussians, normalized."""
    if dim < 1:
        raise InputValidationError(f"dimension must be >= 1, got {dim}")
    z = _complex_gaussians(stream.generator(), (dim,))
    z /= np.linalg.norm(z)
    return PureState(z, layout if layout is not None else SpaceLayout.single(dim))


def isometry_error(v: np.ndarray) -> float:
    """Max deviation of ``v^dagger v`` from the identity."""
    k = v.shape[1]
    if k == v.shape[0] and np.array_equal(v, np.eye(k)):
        return 0.0
    return float(np.max(np.abs(v.conj().T @ v - np.eye(k)))) if k else 0.0


def haar_state_in_subspace(subspace: "ConstraintSubspace", stream: SeedSpec) -> PureState:
    from .typicality import ConstraintSubspace

    v = np.asarray(subspace.isometry)
    # ConstraintSubspace validates orthonormality at construction
    if not isinstance(subspace, ConstraintSubspace):
        if v.ndim != 2 or v.shape[1] < 1 or isometry_error(v) > 1e-10:
            raise InputValidationError("subspace basis is not an isometry")
    inner = haar_unit_vector(v.shape[1], stream).amplitudes
    psi = v @ inner
    return PureState(psi / np.linalg.norm(psi), subspace.layout)


def haar_unitary(dim: int, stream: SeedSpec) -> np.ndarray:
    """Haar unitary from QR of a complex Ginibre matrix, with R's diagonal phases removed.

    Column 0 equals ``haar_unit_vector(dim, stream)`` up to rounding.
    """
    if dim < 1:
        raise InputValidationError(f"dimension must be >= 1, got {dim}")
    g = _complex_gaussians(stream.generator(), (dim, dim)).T
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def gue_hermitian(dim: int, scale: float, stream: SeedSpec, layout: SpaceLayout | None = None) -> HermitianOperator:
    """GUE matrix: off-diagonal real and imaginary parts N(0, scale^2), diagonal N(0, 2 scale^2).

    This is the unitarily invariant normalization (E|H_ij|^2 = E H_ii^2 = 2 scale^2);
    the semicircle radius is 2 * scale * sqrt(2 * dim).
    """
    if dim < 1:
        raise InputValidationError(f"dimension must be >= 1, got {dim}")
    if not scale > 0:
        raise InputValidationError(f"scale must be positive, got {scale}")
    z = stream.generator().standard_normal((dim, dim, 2))
    upper = np.triu(scale * (z[..., 0] + 1j * z[..., 1]), 1)
    h = upper + upper.conj().T
    h[np.diag_indices(dim)] = np.sqrt(2.0) * scale * np.diagonal(z[..., 0])
    return HermitianOperator(h, layout if layout is not None else SpaceLayout.single(dim))


def group_eigenvalues(values: np.ndarray, rel_tol: float = BLOCK_REL_TOL) -> list[np.ndarray]:
    """Split ascending-sorted ``values`` into runs of near-degenerate entries.

    A new group starts wherever the gap to the previous value exceeds
    ``rel_tol * max|values|``. Returns positions into ``values``.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    tol = rel_tol * float(np.max(np.abs(values)))
    breaks = np.nonzero(np.diff(values) > tol)[0] + 1
    return np.split(np.arange(values.size), breaks)


def _diagonal_of(conserved) -> np.ndarray | None:
    m = conserved.matrix if isinstance(conserved, HermitianOperator) else np.asarray(conserved)
    if m.ndim == 1:
        return m.real.astype(float)
    off = m - np.diag(np.diagonal(m))
    if not np.any(off):
        return np.diagonal(m).real.astype(float)
    return None


def eigen_blocks(conserved) -> list[np.ndarray]:
    """Orthonormal bases (as column matrices) of the degenerate eigenspaces, in ascending energy.

    Diagonal operators use computational basis vectors (stable order), so the
    blocks are exact index sets; otherwise ``numpy.linalg.eigh`` is used.
    """
    diag = _diagonal_of(conserved)
    if diag is not None:
        order = np.argsort(diag, kind="stable")
        eye = np.eye(diag.size)
        return [eye[:, order[g]] for g in group_eigenvalues(diag[order])]
    w, v = np.linalg.eigh(conserved.matrix)
    return [v[:, g] for g in group_eigenvalues(w)]


def block_haar_unitary(conserved: HermitianOperator, stream: SeedSpec) -> np.ndarray:
    """Random unitary that is Haar within each eigenspace of ``conserved`` and commutes with it.

    Block ``b`` (in ascending energy order) uses stream ``derive_stream(stream, b)``.
    """
    dim = conserved.dim
    u = np.zeros((dim, dim), dtype=complex)
    for b, basis in enumerate(eigen_blocks(conserved)):
        w = haar_unitary(basis.shape[1], derive_stream(stream, b))
        u += basis @ w @ basis.conj().T
    return u


def apply_block_haar(conserved, psi: PureState, stream: SeedSpec) -> PureState:
    """Sample ``U psi`` for ``U = block_haar_unitary(conserved, stream)`` without forming ``U``.

    ``conserved`` must be diagonal in the computational basis (a diagonal
    HermitianOperator or the vector of its diagonal). Within each block the
    result is ``|P_b psi|`` times a Haar unit vector, which has the law of
    ``W_b P_b psi`` for Haar ``W_b``. When ``P_b psi`` is a positive multiple of
    the block's first basis vector it coincides with the dense construction.
    """
    diag = _diagonal_of(conserved)
    if diag is None:
        raise InputValidationError("apply_block_haar needs a diagonal conserved operator")
    if diag.size != psi.dim:
        raise InputValidationError(f"dimension mismatch: {diag.size} vs {psi.dim}")
    order = np.argsort(diag, kind="stable")
    out = np.zeros(psi.dim, dtype=complex)
    for b, group in enumerate(group_eigenvalues(diag[order])):
        idx = order[group]
        weight = np.linalg.norm(psi.amplitudes[idx])
        if weight == 0.0:
            continue
        out[idx] = weight * haar_unit_vector(idx.size, derive_stream(stream, b)).amplitudes
    return PureState(out / np.linalg.norm(out), psi.layout)
