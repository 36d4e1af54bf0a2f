"""Diagonalization, the energy gap, the critical coupling, and thermal occupations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridError, NumericalError
from .model import ChainParams, build_hamiltonian

DEFAULT_GC_GRID = (0.05, 1.5, 0.01)  # (start, stop, spacing) in units of omega0


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order with the matching eigenvector columns."""

    energies: np.ndarray
    states: np.ndarray

    @property
    def dim(self) -> int:
        return self.energies.size


@dataclass(frozen=True)
class GapCurve:
    """Gap Delta(g) = E1 - E0 sampled on a strictly increasing coupling grid."""

    couplings: np.ndarray
    gaps: np.ndarray


def diagonalize(H: np.ndarray) -> Spectrum:
    """Full eigendecomposition of a (real or complex) Hermitian matrix."""
    try:
        energies, states = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        herm = float(np.max(np.abs(H - H.conj().T)))
        raise NumericalError(
            f"eigensolver failed on a {H.shape[0]}x{H.shape[0]} matrix "
            f"(hermiticity residual {herm:.2e}, max |entry| {np.max(np.abs(H)):.2e})"
        ) from exc
    return Spectrum(energies=energies, states=states)


def eigenvalues(params: ChainParams, omega: float) -> np.ndarray:
    """Ascending spectrum of H(omega) without eigenvectors (cheaper)."""
    return np.linalg.eigvalsh(build_hamiltonian(params, omega))


def energy_gap(params: ChainParams, omega: float) -> float:
    """Gap Delta = E1 - E0 of H(omega)."""
    ev = eigenvalues(params, omega)
    return float(ev[1] - ev[0])


def gap_curve(params: ChainParams, omega: float, g_grid: np.ndarray) -> GapCurve:
    """Delta(g) on a grid at fixed omega; the g stored in params is ignored."""
    g_grid = np.asarray(g_grid, dtype=float)
    if g_grid.ndim != 1 or g_grid.size < 3 or np.any(np.diff(g_grid) <= 0):
        raise ValueError("g_grid must be a strictly increasing 1-d grid with >= 3 points")
    gaps = np.array([energy_gap(params.with_g(g), omega) for g in g_grid])
    return GapCurve(couplings=g_grid, gaps=gaps)


def gap_second_difference(curve: GapCurve) -> np.ndarray:
    """Second central difference of Delta(g) on the interior grid points."""
    dg = np.diff(curve.couplings)
    if not np.allclose(dg, dg[0], rtol=1e-8):
        raise ValueError("critical-point extraction requires a uniform grid")
    return (curve.gaps[2:] - 2.0 * curve.gaps[1:-1] + curve.gaps[:-2]) / dg[0] ** 2


def critical_coupling(params: ChainParams, omega0: float, g_grid: np.ndarray) -> float:
    """Coupling where d^2 Delta / dg^2 at omega = omega0 peaks.

    Ties break to the smallest g.  A peak on the first or last interior point
    means the transition is not bracketed and raises GridError.
    """
    curve = gap_curve(params, omega0, np.asarray(g_grid, dtype=float))
    d2 = gap_second_difference(curve)
    k = int(np.argmax(d2))
    if k == 0 or k == d2.size - 1:
        raise GridError(
            f"grid does not bracket transition: second-difference maximum sits on the "
            f"boundary (g = {curve.couplings[1 + k]:.4f})"
        )
    return float(curve.couplings[1 + k])


_GC_CACHE: dict[tuple, float] = {}


def critical_coupling_cached(
    params: ChainParams, omega0: float | None = None, grid: tuple[float, float, float] = DEFAULT_GC_GRID
) -> float:
    """critical_coupling on the default grid, memoized per (N, p, omega0, boundary).

    The cached value feeds every g/g_c rescaling, so all phase plots for one
    chain share a single critical-point estimate.
    """
    if omega0 is None:
        omega0 = params.omega0
    key = (params.n_spins, params.p, omega0, params.boundary, grid)
    if key not in _GC_CACHE:
        start, stop, step = grid
        g_grid = np.arange(start, stop + step / 2.0, step)
        _GC_CACHE[key] = critical_coupling(params, omega0, g_grid)
    return _GC_CACHE[key]


def level_occupations(energies: np.ndarray, beta: float) -> np.ndarray:
    """Thermal weights n_i = exp(-beta E_i) / Z, overflow-safe via a ground shift."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    energies = np.asarray(energies, dtype=float)
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def occupation_bands(energies: np.ndarray, beta: float, n_spins: int) -> tuple[float, float, float, float]:
    """Banded occupation sums (n_0, n_1, sum_{2..N}, sum_{N+1..}) for an ascending spectrum."""
    n = level_occupations(energies, beta)
    return (
        float(n[0]),
        float(n[1]),
        float(np.sum(n[2 : n_spins + 1])),
        float(np.sum(n[n_spins + 1 :])),
    )
