"""Unitary time evolution of density matrices through a work stroke.

The von Neumann equation drho/dt = -i [H(t), rho] is integrated with classical
fourth-order Runge-Kutta on the dense matrix ODE.  H(t) follows the drive
protocol, optionally augmented with the variational counterdiabatic term
re-evaluated at every substage time.  The step count refines itself until the
final energy is self-convergent and trace, Hermiticity, and purity are
preserved to tight tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .counterdiabatic import cd_hamiltonian, variational_coefficients
from .errors import NumericalError
from .model import (
    ChainParams,
    DriveProtocol,
    coupling_matrix,
    coupling_operator,
    drive_derivative,
    drive_value,
    sz_total_diagonal,
)
from .thermal import purity

PURITY_TOL = 1e-8
TRACE_TOL = 1e-10
STEP_RULE = 0.05  # dt * max(r*omega0, g * max_i sum_j J_ij) <= STEP_RULE


@dataclass(frozen=True)
class EvolutionConfig:
    """Integration knobs for a single stroke.

    steps = None picks the coarsest grid allowed by the step-size rule; each
    refinement doubles the step count until the final Tr(rho H) moves by less
    than convergence_tol (relative) and the purity drift stays under 1e-8.
    """

    steps: int | None = None
    include_cd: bool = False
    cd_variant: str = "exact_chi"
    convergence_refinements: int = 3
    convergence_tol: float = 1e-7

    def __post_init__(self) -> None:
        if self.steps is not None and self.steps < 16:
            raise ValueError("steps must be >= 16")
        if self.cd_variant not in ("exact_chi", "chi_one"):
            raise ValueError(f"unknown cd_variant {self.cd_variant!r}")
        if self.convergence_refinements < 0:
            raise ValueError("convergence_refinements must be >= 0")


def minimum_steps(params: ChainParams, protocol: DriveProtocol) -> int:
    """Coarsest step count satisfying the dt * energy-rate rule."""
    J = coupling_matrix(params)
    rate = max(protocol.r * params.omega0, params.g * float(J.sum(axis=1).max()))
    return max(16, math.ceil(protocol.tau * rate / STEP_RULE))


class _StrokeGenerator:
    """Prebuilt operators for H(t) = -omega(t) Z - g X (+ H_cd(t)) along one stroke."""

    def __init__(self, params: ChainParams, protocol: DriveProtocol, cfg: EvolutionConfig):
        self.params = params
        self.protocol = protocol
        self.cfg = cfg
        dim = params.dim
        self.sz_diag = sz_total_diagonal(params.n_spins)
        self.coupling = (
            coupling_operator(params).astype(complex) if params.g != 0.0 else None
        )
        self.variant = "full" if cfg.cd_variant == "exact_chi" else "chi_one"
        self._H = np.empty((dim, dim), dtype=complex)
        self._cd_buf = (
            np.empty((dim, dim), dtype=complex) if cfg.include_cd and params.g != 0.0 else None
        )

    def hamiltonian(self, t: float) -> np.ndarray:
        """H(t); the returned buffer is reused, so consume before the next call."""
        p = self.params
        omega = p.omega0 * drive_value(self.protocol, t)
        if self.coupling is not None:
            np.multiply(self.coupling, -p.g, out=self._H)
        else:
            self._H[:] = 0.0
        idx = np.arange(p.dim)
        self._H[idx, idx] += -omega * self.sz_diag
        if self._cd_buf is not None:
            omega_dot = p.omega0 * drive_derivative(self.protocol, t)
            coeffs = variational_coefficients(p, omega, omega_dot, self.variant)
            self._H += cd_hamiltonian(coeffs, out=self._cd_buf)
        return self._H


def _rk4(rho0: np.ndarray, gen: _StrokeGenerator, steps: int) -> np.ndarray:
    tau = gen.protocol.tau
    dt = tau / steps
    rho = np.array(rho0, dtype=complex)
    for k in range(steps):
        t = k * dt
        H = gen.hamiltonian(t)
        k1 = -1j * (H @ rho - rho @ H)
        H = gen.hamiltonian(t + 0.5 * dt)
        r2 = rho + (0.5 * dt) * k1
        k2 = -1j * (H @ r2 - r2 @ H)
        r3 = rho + (0.5 * dt) * k2
        k3 = -1j * (H @ r3 - r3 @ H)
        H = gen.hamiltonian(min(t + dt, tau))
        r4 = rho + dt * k3
        k4 = -1j * (H @ r4 - r4 @ H)
        rho += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        # commutator structure keeps the trace; re-symmetrize to pin Hermiticity
        np.add(rho, rho.conj().T, out=rho)
        rho *= 0.5
    return rho


def evolve(
    rho0: np.ndarray,
    params: ChainParams,
    protocol: DriveProtocol,
    cfg: EvolutionConfig | None = None,
) -> np.ndarray:
    """Propagate rho through one work stroke; returns rho(tau).

    Raises NumericalError when the self-convergence or purity requirement is
    still violated after the configured refinements.
    """
    cfg = cfg or EvolutionConfig()
    gen = _StrokeGenerator(params, protocol, cfg)
    steps = max(cfg.steps or 0, minimum_steps(params, protocol))
    H_final = np.array(gen.hamiltonian(protocol.tau))  # CD term vanishes at ends
    p0 = purity(rho0)
    tr0 = float(np.real(np.trace(rho0)))

    previous_energy = None
    last_conv = math.inf
    for _ in range(cfg.convergence_refinements + 1):
        rho = _rk4(rho0, gen, steps)
        energy = float(np.real(np.einsum("ij,ji->", rho, H_final)))
        drift_purity = abs(purity(rho) - p0)
        drift_trace = abs(float(np.real(np.trace(rho))) - tr0)
        ok_state = drift_purity <= PURITY_TOL and drift_trace <= TRACE_TOL
        if previous_energy is not None:
            last_conv = abs(energy - previous_energy) / max(abs(energy), 1e-300)
            if ok_state and last_conv <= cfg.convergence_tol:
                return rho
        elif ok_state and cfg.convergence_refinements == 0:
            return rho
        previous_energy = energy
        steps *= 2
    raise NumericalError(
        f"stroke integration did not converge: purity drift {drift_purity:.3e}, "
        f"trace drift {drift_trace:.3e}, energy change {last_conv:.3e} at {steps // 2} steps"
    )


def evolve_fixed(
    rho0: np.ndarray,
    params: ChainParams,
    protocol: DriveProtocol,
    steps: int,
    include_cd: bool = False,
    cd_variant: str = "exact_chi",
) -> np.ndarray:
    """Single RK4 run at an explicit step count, state checks only (no refinement)."""
    cfg = EvolutionConfig(
        steps=max(16, steps),
        include_cd=include_cd,
        cd_variant=cd_variant,
        convergence_refinements=0,
    )
    return evolve(rho0, params, protocol, cfg)


def stroke_work_audit(
    rho0: np.ndarray,
    params: ChainParams,
    protocol: DriveProtocol,
    cfg: EvolutionConfig,
) -> dict[str, float]:
    """Energy bookkeeping along one stroke.

    Samples the injected power Tr(rho dH_tot/dt) at every node of the RK4
    trajectory and integrates with composite Simpson.  Returns:

    total_drive_work   -- integral of Tr(rho dH_tot/dt)
    hamiltonian_work   -- integral of Tr(rho dH/dt) (ramp term only)
    cd_field_work      -- integral of Tr(rho dH_cd/dt)
    energy_change      -- Tr(rho_f H_f) - Tr(rho_0 H_0)
    net_residual       -- total_drive_work - energy_change; vanishes to
                          integration tolerance because the boundary term
                          Tr(rho H_cd) is zero at both stroke ends
    """
    gen = _StrokeGenerator(params, protocol, cfg)
    steps = max(cfg.steps or 0, minimum_steps(params, protocol))
    steps += steps % 2  # composite Simpson wants an even interval count
    tau = protocol.tau
    dt = tau / steps
    h = tau * 1e-7

    def ramp_derivative_diag(t: float) -> np.ndarray:
        return -params.omega0 * drive_derivative(protocol, t) * gen.sz_diag

    def cd_derivative(t: float) -> np.ndarray | None:
        if not (cfg.include_cd and params.g != 0.0):
            return None
        lo, hi = max(t - h, 0.0), min(t + h, tau)
        variant = gen.variant
        c_hi = variational_coefficients(
            params, params.omega0 * drive_value(protocol, hi),
            params.omega0 * drive_derivative(protocol, hi), variant,
        )
        c_lo = variational_coefficients(
            params, params.omega0 * drive_value(protocol, lo),
            params.omega0 * drive_derivative(protocol, lo), variant,
        )
        return (cd_hamiltonian(c_hi) - cd_hamiltonian(c_lo)) / (hi - lo)

    def sample(rho: np.ndarray, t: float) -> tuple[float, float]:
        diag = np.real(np.diag(rho))
        ramp_power = float(np.sum(diag * ramp_derivative_diag(t)))
        d_cd = cd_derivative(t)
        cd_power = (
            float(np.real(np.einsum("ij,ji->", rho, d_cd))) if d_cd is not None else 0.0
        )
        return ramp_power + cd_power, ramp_power

    e_start = float(np.sum(np.real(np.diag(rho0)) * (-params.omega0 * drive_value(protocol, 0.0)) * gen.sz_diag))
    e_start += _coupling_energy(rho0, params)
    rho = np.array(rho0, dtype=complex)
    power_tot = np.empty(steps + 1)
    power_ramp = np.empty(steps + 1)
    for k in range(steps + 1):
        t = k * dt
        power_tot[k], power_ramp[k] = sample(rho, t)
        if k < steps:
            H = gen.hamiltonian(t)
            k1 = -1j * (H @ rho - rho @ H)
            H = gen.hamiltonian(t + 0.5 * dt)
            r2 = rho + (0.5 * dt) * k1
            k2 = -1j * (H @ r2 - r2 @ H)
            r3 = rho + (0.5 * dt) * k2
            k3 = -1j * (H @ r3 - r3 @ H)
            H = gen.hamiltonian(min(t + dt, tau))
            r4 = rho + dt * k3
            k4 = -1j * (H @ r4 - r4 @ H)
            rho += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            np.add(rho, rho.conj().T, out=rho)
            rho *= 0.5
    e_end = float(np.sum(np.real(np.diag(rho)) * (-params.omega0 * drive_value(protocol, tau)) * gen.sz_diag))
    e_end += _coupling_energy(rho, params)

    weights = np.ones(steps + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    weights *= dt / 3.0
    total = float(np.dot(weights, power_tot))
    ramp = float(np.dot(weights, power_ramp))
    return {
        "total_drive_work": total,
        "hamiltonian_work": ramp,
        "cd_field_work": total - ramp,
        "energy_change": e_end - e_start,
        "net_residual": total - (e_end - e_start),
    }


def _coupling_energy(rho: np.ndarray, params: ChainParams) -> float:
    if params.g == 0.0:
        return 0.0
    X = coupling_operator(params)
    return float(np.real(np.einsum("ij,ji->", rho, -params.g * X)))


def adiabatic_map(
    rho0: np.ndarray, H_init: np.ndarray, H_final: np.ndarray, diag_tol: float = 1e-8
) -> np.ndarray:
    """Quasi-static stroke: transport populations between sorted eigenbases.

    The k-th ascending eigenstate of H_init carries its population to the k-th
    ascending eigenstate of H_final.  Inputs must be diagonal in the H_init
    eigenbasis (Gibbs states are); degenerate levels of a Gibbs input hold
    equal populations, so any orthonormal basis of a degenerate subspace gives
    the same output.
    """
    ev_i, V_i = np.linalg.eigh(H_init)
    rotated = V_i.conj().T @ rho0 @ V_i
    pops = np.real(np.diag(rotated)).copy()
    off = rotated - np.diag(np.diag(rotated))
    max_off = float(np.max(np.abs(off))) if off.size else 0.0
    if max_off > diag_tol:
        raise ValueError(
            f"input state is not diagonal in the initial eigenbasis "
            f"(max off-diagonal {max_off:.3e} > {diag_tol:.0e}); the quasi-static "
            f"limit is undefined for coherent input"
        )
    ev_f, V_f = np.linalg.eigh(H_final)
    return (V_f * pops) @ V_f.conj().T
