"""Thermal states, unitary propagation and quantum channels.

Units: hbar = k_B = 1. The single-particle box is an open tight-binding chain;
``hopping`` sets the kinetic energy scale and ``barrier`` is the on-site
potential that confines the particle to the left half of the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InputValidationError, InvariantViolationError, RangeError
from .qcore import DensityMatrix, HermitianOperator, PureState, SpaceLayout, is_unitary

BETA_REL_TOL = 1e-12
BETA_MAX_ITER = 200


@dataclass(frozen=True)
class BoxSpec:
    n_sites: int
    hopping: float = 1.0
    barrier: float = 0.0

    def __post_init__(self):
        if self.n_sites < 2 or self.n_sites % 2:
            raise InputValidationError(f"n_sites must be a positive even integer, got {self.n_sites}")
        if not self.hopping > 0:
            raise InputValidationError(f"hopping must be positive, got {self.hopping}")
        if not self.barrier >= 0:
            raise InputValidationError(f"barrier must be non-negative, got {self.barrier}")


def box_hamiltonian(spec: BoxSpec, blocked_half: bool) -> HermitianOperator:
    n = spec.n_sites
    h = np.zeros((n, n))
    off = np.arange(n - 1)
    h[off, off + 1] = h[off + 1, off] = -spec.hopping
    if blocked_half:
        h[np.arange(n // 2, n), np.arange(n // 2, n)] = spec.barrier
    return HermitianOperator(h, SpaceLayout.single(n, "site"))


def right_half_projector(n_sites: int) -> HermitianOperator:
    p = np.zeros((n_sites, n_sites))
    p[np.arange(n_sites // 2, n_sites), np.arange(n_sites // 2, n_sites)] = 1.0
    return HermitianOperator(p, SpaceLayout.single(n_sites, "site"))


def _check_beta(beta: float):
    if not (math.isfinite(beta) and beta >= 0):
        raise InputValidationError(f"beta must be finite and non-negative, got {beta}")


def _boltzmann(w: np.ndarray, beta: float) -> np.ndarray:
    # shifted by the ground energy so every weight is <= 1
    return np.exp(-beta * (w - w[0]))


def gibbs_state(h: HermitianOperator, beta: float) -> DensityMatrix:
    _check_beta(beta)
    w, v = np.linalg.eigh(h.matrix)
    p = _boltzmann(w, beta)
    p /= p.sum()
    rho = (v * p) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho, h.layout)


def log_partition(h: HermitianOperator, beta: float) -> float:
    _check_beta(beta)
    w = np.linalg.eigvalsh(h.matrix)
    return float(-beta * w[0] + np.log(np.sum(_boltzmann(w, beta))))


def thermal_energy(eigenvalues: np.ndarray, beta: float) -> float:
    """Mean energy of the Gibbs state for an ascending spectrum."""
    p = _boltzmann(eigenvalues, beta)
    return float(np.dot(p, eigenvalues) / p.sum())


def solve_beta(h: HermitianOperator, energy_target: float) -> float:
    """Inverse temperature whose Gibbs state has mean energy ``energy_target``.

    The mean energy decreases strictly in beta, from the spectral mean at
    beta = 0 towards the ground energy. The bracket [0, 1] is doubled until
    it straddles the target, then bisected to relative precision 1e-12.
    """
    w = np.linalg.eigvalsh(h.matrix)
    e_min, e_mean = float(w[0]), float(np.mean(w))
    width = float(w[-1] - w[0])
    slack = 1e-12 * max(width, 1.0)
    if abs(energy_target - e_mean) <= slack:
        return 0.0
    if not e_min < energy_target < e_mean:
        raise RangeError(
            f"target energy {energy_target!r} outside the attainable interval ({e_min!r}, {e_mean!r}]"
        )
    lo, hi = 0.0, 1.0
    while thermal_energy(w, hi) > energy_target:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise RangeError(f"no finite beta reaches target energy {energy_target!r}")
    for _ in range(BETA_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if thermal_energy(w, mid) > energy_target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= BETA_REL_TOL * hi:
            break
    return 0.5 * (lo + hi)


MatrixLike = Union[HermitianOperator, np.ndarray]


def _matrix(h: MatrixLike) -> np.ndarray:
    return h.matrix if isinstance(h, HermitianOperator) else np.asarray(h)


def propagator(h: MatrixLike, t: float) -> np.ndarray:
    """exp(-i h t) by eigendecomposition."""
    w, v = np.linalg.eigh(_matrix(h))
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def propagate_states(h: MatrixLike, psi: PureState, times: Sequence[float]) -> list[PureState]:
    """``exp(-i h t) psi`` for every t, sharing one eigendecomposition."""
    w, v = np.linalg.eigh(_matrix(h))
    coeffs = v.conj().T @ psi.amplitudes
    out = []
    for t in times:
        amps = v @ (np.exp(-1j * w * t) * coeffs)
        out.append(PureState(amps / np.linalg.norm(amps), psi.layout))
    return out


def evolve(state, u: np.ndarray):
    """Apply a unitary to a pure state (u psi) or a density matrix (u rho u^dagger)."""
    u = np.asarray(u)
    if u.shape != (state.dim, state.dim):
        raise InputValidationError(f"unitary shape {u.shape} does not match state dimension {state.dim}")
    if not is_unitary(u, 1e-8):
        raise InputValidationError("evolution operator is not unitary to 1e-8")
    if isinstance(state, PureState):
        return PureState(u @ state.amplitudes, state.layout)
    rho = u @ state.matrix @ u.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T), state.layout)


@dataclass(frozen=True, eq=False)
class Channel:
    """Kraus representation rho -> sum_k K rho K^dagger."""

    kraus: tuple[np.ndarray, ...]
    layout: SpaceLayout

    def __post_init__(self):
        ks = tuple(np.array(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise InputValidationError("a channel needs at least one Kraus operator")
        d = self.layout.total_dim
        for k in ks:
            if k.shape != (d, d):
                raise InputValidationError(f"Kraus operator shape {k.shape} does not match dimension {d}")
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ks)

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def completeness_error(self) -> float:
        total = sum(k.conj().T @ k for k in self.kraus)
        return float(np.max(np.abs(total - np.eye(self.dim))))


def apply_channel(channel: Channel, rho: DensityMatrix) -> DensityMatrix:
    if channel.dim != rho.dim:
        raise InputValidationError(f"dimension mismatch: channel {channel.dim} vs state {rho.dim}")
    err = channel.completeness_error()
    if err > 1e-10:
        raise InvariantViolationError(f"Kraus operators are not complete (deviation {err:.3e})")
    ks = np.stack(channel.kraus)
    out = np.einsum("kab,bc,kdc->ad", ks, rho.matrix, ks.conj(), optimize=True)
    return DensityMatrix(0.5 * (out + out.conj().T), rho.layout)


def momentum_grid(dim: int) -> np.ndarray:
    """Momenta in units of the grid spacing, symmetric about zero.

    Index j holds ``j - (dim - 1) / 2``, so the mirror p -> -p is
    j -> dim - 1 - j; for odd ``dim`` the middle point p = 0 is fixed.
    """
    if dim < 1:
        raise InputValidationError(f"momentum_dim must be >= 1, got {dim}")
    return np.arange(dim) - (dim - 1) / 2


def mirror_index(dim: int) -> np.ndarray:
    return np.arange(dim)[::-1].copy()


def bounce_channel(momentum_dim: int) -> Channel:
    """Elastic bounce off a heavy wall, seen by the particle: K_p = |-p><p|."""
    mirror = mirror_index(len(momentum_grid(momentum_dim)))
    ks = []
    for j in range(momentum_dim):
        k = np.zeros((momentum_dim, momentum_dim))
        k[mirror[j], j] = 1.0
        ks.append(k)
    return Channel(tuple(ks), SpaceLayout.single(momentum_dim, "particle"))


def bounce_layout(momentum_dim: int) -> SpaceLayout:
    return SpaceLayout.of(("particle", momentum_dim), ("wall", momentum_dim + 1))


def complete_unitary(fixed: dict[int, np.ndarray], dim: int) -> np.ndarray:
    """Unitary whose column ``c`` is ``fixed[c]``; the free columns, in ascending
    order, are Gram-Schmidt residues of computational basis vectors e_0, e_1, ...
    taken in index order.
    """
    u = np.zeros((dim, dim), dtype=complex)
    for c, col in fixed.items():
        u[:, c] = col
    free = [c for c in range(dim) if c not in fixed]
    basis = np.array([fixed[c] for c in sorted(fixed)], dtype=complex).reshape(-1, dim)
    support = [np.flatnonzero(col) for col in basis]
    if all(s.size == 1 and basis[i, s[0]] == 1 for i, s in enumerate(support)):
        # fixed columns are basis vectors: Gram-Schmidt keeps the unused ones unchanged
        used = {int(s[0]) for s in support}
        fill = [k for k in range(dim) if k not in used]
        u[fill, free] = 1.0
        return u
    q = list(basis)
    candidates = iter(range(dim))
    for c in free:
        for k in candidates:
            r = np.zeros(dim, dtype=complex)
            r[k] = 1.0
            for _ in range(2):
                for v in q:
                    r -= v * np.vdot(v, r)
            norm = np.linalg.norm(r)
            if norm > 1e-8:
                r /= norm
                q.append(r)
                u[:, c] = r
                break
        else:
            raise InvariantViolationError("fixed columns are not orthonormal")
    return u


def dilate_bounce(momentum_dim: int) -> np.ndarray:
    """Unitary on particle (x) wall taking |p>|0> to |-p>|2p>.

    Wall basis: index 0 is the wall at rest, index 1 + j records the recoil
    2 p_j of momentum grid point j (for odd grids this includes p = 0).
    """
    m = momentum_dim
    dw = m + 1
    dim = m * dw
    mirror = mirror_index(len(momentum_grid(m)))
    fixed = {}
    for j in range(m):
        col = np.zeros(dim, dtype=complex)
        col[mirror[j] * dw + (j + 1)] = 1.0
        fixed[j * dw] = col
    return complete_unitary(fixed, dim)


def dilation_output(u: np.ndarray, rho: DensityMatrix, ancilla_dim: int) -> DensityMatrix:
    """Tr_ancilla[u (rho (x) |0><0|) u^dagger], using only the columns of ``u`` fed by ancilla |0>."""
    d = rho.dim
    if u.shape != (d * ancilla_dim, d * ancilla_dim):
        raise InputValidationError(f"dilation shape {u.shape} does not match {d} x {ancilla_dim}")
    w = u[:, ::ancilla_dim].reshape(d, ancilla_dim, d)
    x = np.einsum("awi,ij->awj", w, rho.matrix)
    out = np.einsum("awj,bwj->ab", x, w.conj())
    return DensityMatrix(0.5 * (out + out.conj().T), rho.layout)
