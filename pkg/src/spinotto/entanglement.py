"""Entanglement diagnostics for the low-temperature two-level thermal state.

The polarized ground state and the uniform single-flip (W) state span an
effective two-level system whose thermal mixture carries bipartite
entanglement, certified here by a product witness and by the sign of the
partial transpose.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PARTIAL_TRANSPOSE_MAX_DIM = 1 << 12


@dataclass(frozen=True)
class Partition:
    """Bipartition of sites 0..N-1 into a left set and its complement."""

    n_spins: int
    left: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        left = tuple(sorted(self.left)) or tuple(range(self.n_spins // 2))
        object.__setattr__(self, "left", left)
        if any(s < 0 or s >= self.n_spins for s in self.left):
            raise ValueError("partition sites out of range")
        if len(set(self.left)) != len(self.left):
            raise ValueError("partition sites must be distinct")
        if not 0 < len(self.left) < self.n_spins:
            raise ValueError("partition must be a proper nonempty subset")

    @property
    def right(self) -> tuple[int, ...]:
        left = set(self.left)
        return tuple(s for s in range(self.n_spins) if s not in left)

    def swapped(self) -> "Partition":
        return Partition(self.n_spins, self.right)


def polarized_ground_state(n_spins: int) -> np.ndarray:
    """All-spins-up product state, the g -> 0 ground state of the chain."""
    psi = np.zeros(1 << n_spins)
    psi[0] = 1.0
    return psi


def w_state(n_spins: int) -> np.ndarray:
    """Uniform superposition of all single-spin flips over the polarized ground state."""
    if n_spins < 2:
        raise ValueError("w_state needs at least two spins")
    psi = np.zeros(1 << n_spins)
    for site in range(n_spins):
        psi[1 << (n_spins - 1 - site)] = 1.0
    return psi / np.sqrt(n_spins)


def _site_permutation(partition: Partition) -> np.ndarray:
    """Axis order that moves the left sites in front of the right sites."""
    return np.array(partition.left + partition.right)


def entanglement_entropy(state: np.ndarray, partition: Partition) -> float:
    """Von Neumann entropy of the reduced state across the cut (natural log).

    Computed from the Schmidt decomposition.  For the uniform single-flip
    state this is Schmidt rank 2 with equal weights across a half cut, i.e.
    ln 2 for every even N.
    """
    n = partition.n_spins
    if state.size != 1 << n:
        raise ValueError("state dimension does not match the partition")
    psi = np.reshape(state, (2,) * n)
    psi = np.transpose(psi, _site_permutation(partition))
    matrix = np.reshape(psi, (1 << len(partition.left), -1))
    sv = np.linalg.svd(matrix, compute_uv=False)
    weights = sv[sv > 1e-15] ** 2
    return float(-np.sum(weights * np.log(weights)))


def two_level_thermal_state(
    beta: float, delta: float, ground: np.ndarray, excited: np.ndarray
) -> np.ndarray:
    """rho = (|0><0| + e^{-beta Delta} |1><1|) / (1 + e^{-beta Delta}).

    Requires an orthonormal ground/excited pair.
    """
    if abs(np.vdot(ground, excited)) > 1e-10:
        raise ValueError("ground and excited states must be orthogonal")
    g = ground / np.linalg.norm(ground)
    e = excited / np.linalg.norm(excited)
    w = np.exp(-beta * delta)
    rho = (np.outer(g, g.conj()) + w * np.outer(e, e.conj())) / (1.0 + w)
    return rho


def witness_diagonal(n_spins: int, alpha: float) -> np.ndarray:
    """Diagonal of the product witness M (x) M built from per-site factors.

    Each site contributes (1 + alpha)^(-1/N) [P_aligned - alpha P_flipped]
    relative to the polarized ground orientation, so a basis state with k
    flipped spins carries eigenvalue (-alpha)^k / (1 + alpha).
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    idx = np.arange(1 << n_spins, dtype=np.uint64)
    flips = np.bitwise_count(idx).astype(float)
    return (-alpha) ** flips / (1.0 + alpha)


def ppt_witness(n_spins: int, beta: float, delta: float, alpha: float) -> tuple[float, float]:
    """(closed form, numeric trace) of the witness on the two-level thermal state.

    Closed form: (1 - alpha e^{-beta Delta}) / ((1 + alpha)(1 + e^{-beta Delta})).
    A negative value certifies non-PPT entanglement.
    """
    w = np.exp(-beta * delta)
    closed = (1.0 - alpha * w) / ((1.0 + alpha) * (1.0 + w))
    rho = two_level_thermal_state(
        beta, delta, polarized_ground_state(n_spins), w_state(n_spins)
    )
    numeric = float(np.real(np.sum(witness_diagonal(n_spins, alpha) * np.diag(rho))))
    return closed, numeric


def partial_transpose(rho: np.ndarray, partition: Partition) -> np.ndarray:
    """Transpose the right-partition indices of a density matrix."""
    n = partition.n_spins
    dim = 1 << n
    if rho.shape != (dim, dim):
        raise ValueError("density matrix does not match the partition")
    if dim > PARTIAL_TRANSPOSE_MAX_DIM:
        raise ValueError(
            f"dense partial transpose capped at dimension {PARTIAL_TRANSPOSE_MAX_DIM}"
        )
    d_left = 1 << len(partition.left)
    d_right = dim // d_left
    perm = _site_permutation(partition)
    full_perm = np.concatenate([perm, perm + n])
    tensor = np.reshape(rho, (2,) * (2 * n))
    tensor = np.transpose(tensor, full_perm)
    block = np.reshape(tensor, (d_left, d_right, d_left, d_right))
    block = np.transpose(block, (0, 3, 2, 1))  # swap the two right indices
    # undo the site reordering so the output lives in the original basis
    tensor = np.reshape(block, (2,) * (2 * n))
    tensor = np.transpose(tensor, np.argsort(full_perm))
    return np.reshape(tensor, (dim, dim))


def partial_transpose_min_eig(rho: np.ndarray, partition: Partition) -> float:
    """Minimum eigenvalue of the partial transpose; negative certifies entanglement."""
    return float(np.linalg.eigvalsh(partial_transpose(rho, partition))[0])
