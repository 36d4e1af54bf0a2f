"""Closed-form and semi-analytic oracles for the chain's thermodynamics.

Contents: the generalized Clausen function; the nearest-neighbour band free
energy and cycle energies (single-quasiparticle truncation, ground-zero
frame); quadratic (low-excitation) free energies with range-dependent
fluctuation prefactors; the two-level work/efficiency approximation; the
high-temperature expansion plus the exact second-order cumulant; the
mean-field free energy; and the non-extensive p=1 work scaling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import EULER_GAMMA, adaptive_simpson, bessel_i0, dawson, zeta

QUAD_TOL = 1e-10


def clausen(p: float, n: float, theta: float) -> float:
    """Generalized Clausen function C_p^N(theta) = sum_{m=1..N} cos(m theta)/m^p.

    n = math.inf takes the convergent series (p > 1), the closed form
    -ln|2 sin(theta/2)| at p = 1, or cos(theta) at p = inf (single m = 1 term).
    """
    if math.isinf(p):
        return math.cos(theta)
    if p < 1:
        raise ValueError("clausen requires p >= 1")
    if not math.isinf(n):
        m = np.arange(1, int(n) + 1, dtype=float)
        return float(np.sum(np.cos(m * theta) / m**p))
    # infinite-N branches
    two_pi = 2.0 * math.pi
    theta = theta % two_pi
    if p == 1.0:
        s = abs(2.0 * math.sin(theta / 2.0))
        if s == 0.0:
            raise ValueError("C_1 diverges at theta = 0 (mod 2 pi)")
        return -math.log(s)
    if theta == 0.0:
        return zeta(p)
    if p == 2.0:
        # Bernoulli closed form on [0, 2 pi]
        return math.pi**2 / 6.0 - math.pi * theta / 2.0 + theta**2 / 4.0
    # direct summation with an Abel-style tail bound; adequate away from theta=0
    total = 0.0
    m_max = 200_000
    for m in range(1, m_max + 1):
        total += math.cos(m * theta) / m**p
        if m > 64 and m**-p / abs(2.0 * math.sin(theta / 2.0)) < 1e-12:
            break
    return total


def band_energy(omega: float, g: float, theta: float) -> float:
    """Single-quasiparticle energy sqrt(omega^2 + g^2 - 2 omega g cos theta)."""
    return math.sqrt(omega**2 + g**2 - 2.0 * omega * g * math.cos(theta))


def tfim_free_energy(n_spins: int, beta: float, omega: float, g: float) -> float:
    """Ground-zero-frame ln Z of the nearest-neighbour chain, band-truncated:

        ln Z = (N/pi) int_0^pi exp(-beta band_energy(omega, g, theta)) dtheta.

    Meaningful at low temperature, where levels beyond the first N are empty.
    """
    f = lambda th: math.exp(-beta * band_energy(omega, g, th))
    return n_spins / math.pi * adaptive_simpson(f, 0.0, math.pi, QUAD_TOL)


def tfim_free_energy_ksum(n_spins: int, beta: float, omega: float, g: float) -> float:
    """Discrete-momentum form sum_k exp(-beta eps(2 pi k / N)); oracle for the integral."""
    return sum(
        math.exp(-beta * band_energy(omega, g, 2.0 * math.pi * k / n_spins))
        for k in range(n_spins)
    )


def tfim_cycle(
    n_spins: int, beta_H: float, beta_C: float, r: float, omega0: float, g: float
) -> tuple[float, float, float, float]:
    """(W, Q_H, Q_C, eta) from the four band-truncated cycle energies.

    The energies at the cycle points are quadrature integrals of the band
    weighted by hot/cold Boltzmann factors; heats follow the same bookkeeping
    as the exact cycle.
    """
    w_hot = r * omega0
    pref = n_spins / math.pi

    def integral(energy_of, weight_of, beta):
        f = lambda th: energy_of(th) * math.exp(-beta * weight_of(th))
        return pref * adaptive_simpson(f, 0.0, math.pi, QUAD_TOL)

    e_r = lambda th: band_energy(w_hot, g, th)
    e_1 = lambda th: band_energy(omega0, g, th)
    e_point1 = integral(e_r, e_r, beta_H)
    e_point2 = integral(e_1, e_r, beta_H)
    e_point3 = integral(e_1, e_1, beta_C)
    e_point4 = integral(e_r, e_1, beta_C)
    heat_in = e_point1 - e_point4
    heat_out = e_point2 - e_point3
    work = heat_in - heat_out
    eta = work / heat_in if heat_in > 0 else float("-inf")
    return work, heat_in, heat_out, eta


@dataclass(frozen=True)
class QuadraticModel:
    """Low-excitation (quadratic bosonic) description of the chain at (beta, omega)."""

    p: float
    n_spins: int
    beta: float
    omega: float
    g: float

    @property
    def gap_approx(self) -> float:
        """Perturbative gap: omega - g zeta(p) for finite p > 1, omega - g at
        p = inf, omega - g (ln N + gamma) at p = 1."""
        if math.isinf(self.p):
            return self.omega - self.g
        if self.p == 1.0:
            return self.omega - self.g * (math.log(self.n_spins) + EULER_GAMMA)
        return self.omega - self.g * zeta(self.p)

    @property
    def fluctuation_factor(self) -> float:
        return fluctuation_factor(self.p, self.beta * self.g)


def fluctuation_factor(p: float, x: float, exact: bool = True) -> float:
    """Thermal-fluctuation prefactor G_p(x), x = beta*g.

    Asymptotic forms: sqrt(1/(2 pi x zeta(p-2))) for p > 3,
    sqrt(1/(pi x (3 + ln x))) for p = 3, 1/(3 x zeta(2)) for p = 2, 1 for
    p = 1.  With exact=True the p = inf and p = 2 cases use the full Bessel
    and Dawson prefactors instead of their large-x limits.
    """
    if x <= 0:
        raise ValueError("fluctuation factor needs beta*g > 0")
    if p == 1.0:
        return 1.0
    if math.isinf(p):
        if exact:
            return bessel_i0(x) * math.exp(-x)
        return 1.0 / math.sqrt(2.0 * math.pi * x)
    if p == 2.0:
        if exact:
            y = math.sqrt(x * math.pi**2)
            return 2.0 * dawson(y / 2.0) / y
        return 1.0 / (3.0 * x * zeta(2.0))
    if p == 3.0:
        if x <= math.exp(-3.0):
            raise ValueError("p = 3 prefactor needs beta*g > e^-3 (log argument)")
        return math.sqrt(1.0 / (math.pi * x * (3.0 + math.log(x))))
    if p > 3.0:
        return math.sqrt(1.0 / (2.0 * math.pi * x * zeta(p - 2.0)))
    raise ValueError(f"no closed-form prefactor for p = {p}")


def quadratic_free_energy(model: QuadraticModel, exact: bool = True) -> float:
    """ln Z = N G_p(beta g) exp(-beta Delta) in the paramagnetic low-T regime."""
    g_factor = fluctuation_factor(model.p, model.beta * model.g, exact=exact)
    return model.n_spins * g_factor * math.exp(-model.beta * model.gap_approx)


def p1_lnz_ksum(n_spins: int, beta: float, omega: float, g: float) -> float:
    """Intermediate momentum-sum form of ln Z for p = 1 (oracle for the scaling law)."""
    tot = 0.0
    for k in range(n_spins):
        j_k = clausen(1.0, n_spins, 2.0 * math.pi * k / n_spins)
        tot += math.exp(beta * g * j_k)
    return math.exp(-beta * omega) * tot


def two_level_performance(
    p: float,
    n_spins: int,
    r: float,
    beta_H: float,
    beta_C: float,
    omega0: float,
    g: float,
    g_c: float,
    exact_prefactor: bool = True,
) -> tuple[float, float]:
    """Two-level work and efficiency with the g_c-rescaled gap.

        Delta(w) = w (1 - omega0 g / (w g_c)),
        W   = N (r-1) omega0 G_p(beta_H g) (e^{-b_H Delta(r w0)} - e^{-b_C Delta(w0)}),
        eta = 1 - Delta(w0) / Delta(r w0).

    Valid in the paramagnetic phase g < g_c.
    """
    if g_c <= 0:
        raise ValueError("g_c must be positive")
    delta_hot = r * omega0 - omega0 * g / g_c
    delta_cold = omega0 - omega0 * g / g_c
    g_factor = (
        1.0 if g == 0.0 else fluctuation_factor(p, beta_H * g, exact=exact_prefactor)
    )
    work = (
        n_spins
        * (r - 1.0)
        * omega0
        * g_factor
        * (math.exp(-beta_H * delta_hot) - math.exp(-beta_C * delta_cold))
    )
    eta = 1.0 - delta_cold / delta_hot
    return work, eta


def omega_prime_sums(J: np.ndarray) -> np.ndarray:
    """Effective transverse drives Omega_i' = (1/2) sum_{j != i} J_ij."""
    return 0.5 * np.sum(J, axis=1)


def high_t_expansion(
    beta: float, omega: float, J: np.ndarray, g: float
) -> tuple[float, float]:
    """High-temperature ln Z estimates, returned as (series, exact_cumulant).

    The first output is the printed second-order series
        ln Z = N ln 2 + beta^2 omega^2 / 4 + beta^2 g^2 sum_i (Omega_i')^2 / 4,
    kept verbatim; the second is the exact second-order cumulant
        ln Z = N ln 2 + beta^2 Tr(H^2) / (2 * 2^N)
             = N ln 2 + beta^2 N omega^2 / 8 + beta^2 g^2 sum_{i != j} J_ij^2 / 16.
    The two disagree in the N-dependence of the field term and in the
    combinatorial weight of the interaction term; both are surfaced so the
    discrepancy is visible rather than silently resolved.
    """
    J = np.asarray(J, dtype=float)
    n = J.shape[0]
    ln_z_inf = n * math.log(2.0)
    omega_p = omega_prime_sums(J)
    series = (
        ln_z_inf
        + beta**2 * omega**2 / 4.0
        + beta**2 * g**2 * float(np.sum(omega_p**2)) / 4.0
    )
    tr_h2_over_dim = n * omega**2 / 4.0 + g**2 * float(np.sum(J**2)) / 8.0
    cumulant = ln_z_inf + beta**2 * tr_h2_over_dim / 2.0
    return series, cumulant


def mean_field_free_energy(beta: float, omega: float, J: np.ndarray, g: float) -> float:
    """Mean-field ln Z: each spin sits in a tilted field with gap sqrt(w^2 + g^2 O_i'^2)."""
    omega_p = omega_prime_sums(np.asarray(J, dtype=float))
    gaps = np.sqrt(omega**2 + g**2 * omega_p**2)
    return float(np.sum(np.log(2.0 * np.cosh(beta * gaps / 2.0))))


def p1_work_scaling(
    n_spins: int, g: float, beta_H: float, r: float, omega0: float = 1.0
) -> float:
    """Non-extensive p=1 work estimate W ~ w0 (r-1) e^{-b_H w0} e^{b_H g gamma} N^{1 + b_H g}."""
    return (
        omega0
        * (r - 1.0)
        * math.exp(-beta_H * omega0)
        * math.exp(beta_H * g * EULER_GAMMA)
        * n_spins ** (1.0 + beta_H * g)
    )
