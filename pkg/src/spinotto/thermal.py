"""Gibbs states, dimensionless free energies, and thermal expectations."""
from __future__ import annotations

import numpy as np

from .spectral import Spectrum, diagonalize

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10


def gibbs_populations(energies: np.ndarray, beta: float) -> np.ndarray:
    """Boltzmann weights over an energy ladder, normalized, ground-shifted."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    energies = np.asarray(energies, dtype=float)
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def gibbs_from_spectrum(spec: Spectrum, beta: float) -> np.ndarray:
    """Density matrix exp(-beta H)/Z assembled from an eigendecomposition."""
    pops = gibbs_populations(spec.energies, beta)
    return (spec.states * pops) @ spec.states.conj().T


def gibbs_state(H: np.ndarray, beta: float) -> np.ndarray:
    """Thermal state exp(-beta H)/Z of a Hermitian H."""
    return gibbs_from_spectrum(diagonalize(H), beta)


def ln_partition(energies: np.ndarray, beta: float, frame: str = "ground_zero") -> float:
    """Dimensionless free energy ln Z.

    frame "ground_zero" measures energies from E_0 (ln Z >= 0, saturating at the
    log ground degeneracy for large beta); frame "absolute" keeps the raw ladder,
    so ln Z(0) = ln(dim).  The two differ by exactly beta * E_0.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    energies = np.asarray(energies, dtype=float)
    e0 = energies.min()
    lnz_ground = float(np.log(np.sum(np.exp(-beta * (energies - e0)))))
    if frame == "ground_zero":
        return lnz_ground
    if frame == "absolute":
        return lnz_ground - beta * float(e0)
    raise ValueError(f"unknown frame {frame!r}")


def energy_expectation(rho: np.ndarray, H: np.ndarray) -> float:
    """Re Tr(rho H); raises if the imaginary residue is not negligible."""
    if rho.shape != H.shape:
        raise ValueError(f"dimension mismatch: rho {rho.shape} vs H {H.shape}")
    val = complex(np.einsum("ij,ji->", rho, H))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ValueError(f"Tr(rho H) has imaginary residue {val.imag:.3e}")
    return val.real


def purity(rho: np.ndarray) -> float:
    """Tr rho^2 = squared Frobenius norm for Hermitian rho."""
    return float(np.sum(np.abs(rho) ** 2))


def trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """0.5 * trace norm of rho1 - rho2."""
    ev = np.linalg.eigvalsh(rho1 - rho2)
    return 0.5 * float(np.sum(np.abs(ev)))


def assert_density_matrix(rho: np.ndarray, context: str = "") -> None:
    """Validate Hermiticity, unit trace, and positivity up to solver noise."""
    label = f" ({context})" if context else ""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > HERMITICITY_TOL:
        raise ValueError(f"density matrix not Hermitian{label}: residual {herm:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace {tr}{label} differs from 1")
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    if min_eig < PSD_TOL:
        raise ValueError(f"density matrix not PSD{label}: min eigenvalue {min_eig:.3e}")
