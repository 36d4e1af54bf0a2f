"""Spin-chain model: power-law couplings, the chain Hamiltonian, and the drive protocol.

The working substance is a chain of N spin-1/2 particles,

    H(omega) = -omega * sum_i s_z^(i) - g * sum_{i != j} J_ij s_x^(i) s_x^(j),

with s_mu = sigma_mu / 2 (eigenvalues +-1/2) and J_ij = 1/|i-j|^p.  The double
sum runs over ordered pairs, so each unordered pair carries weight 2*g*J_ij.
Nearest-neighbour-only coupling is selected with p = math.inf.  Energies are
measured in units of omega0, times in 1/omega0 (hbar = k_B = 1).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ChainTooLargeError

DEFAULT_MAX_N = 14
MAX_N_ENV_VAR = "SPINOTTO_MAX_N"

Boundary = Literal["open", "periodic"]

# Spin-1/2 operators (half Pauli matrices); basis |0> = up (s_z = +1/2).
SPIN_X = np.array([[0.0, 0.5], [0.5, 0.0]])
SPIN_Y = np.array([[0.0, -0.5j], [0.5j, 0.0]])
SPIN_Z = np.array([[0.5, 0.0], [0.0, -0.5]])
IDENTITY_2 = np.eye(2)


def max_chain_length() -> int:
    """Hilbert-space cap on N; override with the SPINOTTO_MAX_N environment variable."""
    value = os.environ.get(MAX_N_ENV_VAR)
    if value is None:
        return DEFAULT_MAX_N
    return int(value)


@dataclass(frozen=True)
class ChainParams:
    """Static parameters of the working substance.

    Attributes
    ----------
    n_spins : number of spins, >= 1.
    p : interaction-range exponent (> 0), math.inf for nearest-neighbour only.
    g : nearest-neighbour coupling in units of omega0, >= 0.
    omega0 : reference level spacing; the global energy unit (default 1.0).
    boundary : "open" (default) or "periodic".  The periodic flag exists to
        cross-check translation-invariant analytics.
    """

    n_spins: int
    p: float
    g: float
    omega0: float = 1.0
    boundary: Boundary = "open"

    def __post_init__(self) -> None:
        if self.n_spins < 1:
            raise ValueError(f"n_spins must be >= 1, got {self.n_spins}")
        if not (self.p > 0):
            raise ValueError(f"p must be positive (or math.inf), got {self.p}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if not (self.omega0 > 0):
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def dim(self) -> int:
        return 1 << self.n_spins

    def with_g(self, g: float) -> "ChainParams":
        return ChainParams(self.n_spins, self.p, g, self.omega0, self.boundary)


@dataclass(frozen=True)
class DriveProtocol:
    """Work-stroke ramp f(t) = r + (1 - r) sin^2(pi t / 2 tau) with f' = 0 at both ends.

    direction "expand" runs omega from r*omega0 down to omega0 (stroke 1 -> 2);
    "compress" runs the time-reversed profile f(tau - t) (stroke 3 -> 4).
    """

    r: float
    tau: float
    direction: Literal["expand", "compress"] = "expand"

    def __post_init__(self) -> None:
        if not (self.r > 1):
            raise ValueError(f"compression ratio must exceed 1, got {self.r}")
        if not (self.tau > 0):
            raise ValueError(f"stroke duration must be positive, got {self.tau}")
        if self.direction not in ("expand", "compress"):
            raise ValueError(f"unknown direction {self.direction!r}")


def coupling_matrix(params: ChainParams) -> np.ndarray:
    """Symmetric N x N matrix J_ij = 1/d^p with zero diagonal.

    d is |i-j| for the open chain and the ring distance min(|i-j|, N-|i-j|)
    for the periodic chain; p = inf keeps only d == 1 pairs (J = 1).
    """
    n = params.n_spins
    i, j = np.indices((n, n))
    d = np.abs(i - j)
    if params.boundary == "periodic":
        d = np.minimum(d, n - d)
    with np.errstate(divide="ignore"):
        if math.isinf(params.p):
            J = (d == 1).astype(float)
        else:
            J = np.where(d > 0, d.astype(float) ** -params.p, 0.0)
    np.fill_diagonal(J, 0.0)
    return J


def sz_total_diagonal(n_spins: int) -> np.ndarray:
    """Diagonal of sum_i s_z^(i) in the product basis (bit 0 = spin up)."""
    idx = np.arange(1 << n_spins, dtype=np.uint64)
    return n_spins / 2.0 - np.bitwise_count(idx).astype(float)


def coupling_operator(params: ChainParams) -> np.ndarray:
    """Dense matrix of sum_{i != j} J_ij s_x^(i) s_x^(j) (real symmetric)."""
    n = params.n_spins
    dim = params.dim
    J = coupling_matrix(params)
    idx = np.arange(dim)
    X = np.zeros((dim, dim))
    for i in range(n):
        for j in range(i + 1, n):
            if J[i, j] == 0.0:
                continue
            mask = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
            # ordered-pair double count: 2 * J_ij * (1/2)(1/2) = J_ij / 2
            X[idx ^ mask, idx] += J[i, j] / 2.0
    return X


def build_hamiltonian(params: ChainParams, omega: float) -> np.ndarray:
    """Dense real-symmetric H(omega) = -omega sum_i s_z - g sum_{i!=j} J_ij s_x s_x.

    omega may take any sign during sweeps; engine strokes use omega > 0.
    Raises ChainTooLargeError when n_spins exceeds max_chain_length().
    """
    cap = max_chain_length()
    if params.n_spins > cap:
        raise ChainTooLargeError(
            f"n_spins={params.n_spins} exceeds the cap of {cap} "
            f"(set {MAX_N_ENV_VAR} to raise it)"
        )
    dim = params.dim
    H = -params.g * coupling_operator(params) if params.g != 0.0 else np.zeros((dim, dim))
    H[np.arange(dim), np.arange(dim)] += -omega * sz_total_diagonal(params.n_spins)
    return H


def site_operator(n_spins: int, ops: dict[int, np.ndarray]) -> np.ndarray:
    """Tensor product placing 2x2 operators on the given sites, identity elsewhere.

    Site 0 is the leftmost (most significant) tensor factor.
    """
    out = np.array([[1.0 + 0.0j]])
    for site in range(n_spins):
        out = np.kron(out, ops.get(site, IDENTITY_2))
    return out


def drive_value(protocol: DriveProtocol, t: float) -> float:
    """Dimensionless ramp value; omega(t) = omega0 * drive_value(protocol, t)."""
    if not (0.0 <= t <= protocol.tau):
        raise ValueError(f"t={t} outside stroke window [0, {protocol.tau}]")
    tt = t if protocol.direction == "expand" else protocol.tau - t
    s = math.sin(math.pi * tt / (2.0 * protocol.tau))
    return protocol.r + (1.0 - protocol.r) * s * s


def drive_derivative(protocol: DriveProtocol, t: float) -> float:
    """Analytic df/dt of the running ramp (no numerical differentiation)."""
    if not (0.0 <= t <= protocol.tau):
        raise ValueError(f"t={t} outside stroke window [0, {protocol.tau}]")
    tt = t if protocol.direction == "expand" else protocol.tau - t
    sign = 1.0 if protocol.direction == "expand" else -1.0
    return sign * (1.0 - protocol.r) * (math.pi / (2.0 * protocol.tau)) * math.sin(
        math.pi * tt / protocol.tau
    )
