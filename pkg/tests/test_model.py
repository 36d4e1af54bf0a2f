import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinotto import ChainParams, DriveProtocol, build_hamiltonian, coupling_matrix
from spinotto.errors import ChainTooLargeError
from spinotto.model import (
    IDENTITY_2,
    SPIN_X,
    SPIN_Z,
    drive_derivative,
    drive_value,
    site_operator,
    sz_total_diagonal,
)


def kron_chain(ops):
    out = np.array([[1.0]])
    for op in ops:
        out = np.kron(out, op)
    return out


class TestCouplingMatrix:
    def test_n3_p1(self):
        J = coupling_matrix(ChainParams(3, 1.0, 0.5))
        assert J[0, 1] == J[1, 2] == 1.0
        assert J[0, 2] == 0.5

    def test_n4_nearest_neighbour(self):
        J = coupling_matrix(ChainParams(4, math.inf, 0.5))
        for i in range(4):
            for j in range(4):
                expected = 1.0 if abs(i - j) == 1 else 0.0
                assert J[i, j] == expected

    def test_n2_any_p(self):
        for p in (0.5, 1.0, 3.7, math.inf):
            assert coupling_matrix(ChainParams(2, p, 0.0))[0, 1] == 1.0

    def test_periodic_ring_distance(self):
        J = coupling_matrix(ChainParams(5, 2.0, 0.1, boundary="periodic"))
        assert J[0, 4] == 1.0  # ring distance 1
        assert J[0, 2] == J[0, 3] == 0.25

    def test_periodic_nearest_neighbour_wraps(self):
        J = coupling_matrix(ChainParams(6, math.inf, 0.1, boundary="periodic"))
        assert J[0, 5] == 1.0
        assert J[0, 2] == 0.0

    @given(
        n=st.integers(2, 8),
        p=st.one_of(st.just(math.inf), st.floats(0.3, 8.0, allow_nan=False)),
    )
    @settings(max_examples=40, deadline=None)
    def test_invariants(self, n, p):
        J = coupling_matrix(ChainParams(n, p, 0.2))
        assert np.allclose(J, J.T)
        assert np.all(np.diag(J) == 0)
        assert np.all((J >= 0) & (J <= 1))
        # non-increasing in separation
        for d in range(1, n - 1):
            assert J[0, d] >= J[0, d + 1]


class TestHamiltonian:
    def test_single_spin(self):
        H = build_hamiltonian(ChainParams(1, math.inf, 0.0), omega=0.7)
        assert np.allclose(H, np.diag([-0.35, 0.35]))

    def test_n2_closed_form_eigenvalues(self):
        # 4x4 oracle: -w(sz x 1 + 1 x sz) - 2g sx x sx diagonalizes in two
        # 2x2 blocks with eigenvalues +-sqrt(w^2 + g^2/4) and +-g/2
        for omega, g in ((1.0, 0.5), (1.3, 0.9), (0.8, 0.0)):
            H = build_hamiltonian(ChainParams(2, math.inf, g), omega)
            expected = sorted(
                [
                    math.hypot(omega, g / 2.0),
                    -math.hypot(omega, g / 2.0),
                    g / 2.0,
                    -g / 2.0,
                ]
            )
            assert np.allclose(np.linalg.eigvalsh(H), expected, atol=1e-12)

    def test_free_spectrum_binomial_ladder(self):
        n, omega = 5, 1.3
        ev = np.linalg.eigvalsh(build_hamiltonian(ChainParams(n, 2.0, 0.0), omega))
        expected = []
        for k in range(n + 1):
            expected.extend([-(n - 2 * k) * omega / 2.0] * math.comb(n, k))
        assert np.allclose(ev, sorted(expected), atol=1e-12)

    def test_matches_kron_construction(self):
        # independent dense build from explicit tensor products
        params = ChainParams(4, 1.5, 0.37)
        omega = 0.9
        J = coupling_matrix(params)
        H_ref = np.zeros((16, 16))
        for i in range(4):
            ops = [IDENTITY_2] * 4
            ops[i] = SPIN_Z
            H_ref -= omega * kron_chain(ops)
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                ops = [IDENTITY_2] * 4
                ops[i] = SPIN_X
                ops[j] = SPIN_X
                H_ref -= params.g * J[i, j] * kron_chain(ops)
        assert np.allclose(build_hamiltonian(params, omega), H_ref, atol=1e-13)

    def test_linear_in_omega(self):
        params = ChainParams(4, 2.0, 0.6)
        H1 = build_hamiltonian(params, 1.4)
        H2 = build_hamiltonian(params, 0.3)
        diff = np.diag(-(1.4 - 0.3) * sz_total_diagonal(4))
        assert np.allclose(H1 - H2, diff, atol=1e-13)

    def test_reflection_symmetric_spectrum(self):
        params = ChainParams(5, 1.0, 0.45)
        H = build_hamiltonian(params, 1.0)
        # permute sites i -> N-1-i by reversing each index's bit order
        n = 5
        perm = np.empty(1 << n, dtype=int)
        for s in range(1 << n):
            bits = [(s >> (n - 1 - i)) & 1 for i in range(n)]
            perm[s] = sum(b << (n - 1 - i) for i, b in zip(range(n), reversed(bits)))
        H_ref = H[np.ix_(perm, perm)]
        assert np.allclose(
            np.linalg.eigvalsh(H), np.linalg.eigvalsh(H_ref), atol=1e-10
        )

    def test_free_hamiltonians_commute(self):
        params = ChainParams(4, 2.0, 0.0)
        H1 = build_hamiltonian(params, 0.7)
        H2 = build_hamiltonian(params, 1.9)
        assert np.allclose(H1 @ H2, H2 @ H1, atol=1e-12)

    def test_hermitian(self):
        H = build_hamiltonian(ChainParams(5, 1.0, 0.8), 1.1)
        assert np.max(np.abs(H - H.T)) < 1e-12

    def test_dimension_cap(self, monkeypatch):
        monkeypatch.setenv("SPINOTTO_MAX_N", "4")
        with pytest.raises(ChainTooLargeError):
            build_hamiltonian(ChainParams(5, 1.0, 0.1), 1.0)
        monkeypatch.setenv("SPINOTTO_MAX_N", "5")
        build_hamiltonian(ChainParams(5, 1.0, 0.1), 1.0)

    def test_site_operator_embedding(self):
        op = site_operator(3, {1: SPIN_Z})
        assert np.allclose(op, kron_chain([IDENTITY_2, SPIN_Z, IDENTITY_2]))


class TestValidation:
    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            ChainParams(0, 1.0, 0.1)
        with pytest.raises(ValueError):
            ChainParams(3, -1.0, 0.1)
        with pytest.raises(ValueError):
            ChainParams(3, 1.0, -0.1)
        with pytest.raises(ValueError):
            ChainParams(3, 1.0, 0.1, boundary="twisted")

    def test_rejects_bad_protocol(self):
        with pytest.raises(ValueError):
            DriveProtocol(r=1.0, tau=1.0)
        with pytest.raises(ValueError):
            DriveProtocol(r=1.1, tau=0.0)


class TestDriveProtocol:
    def test_expand_endpoints(self):
        proto = DriveProtocol(r=1.7, tau=2.0)
        assert drive_value(proto, 0.0) == pytest.approx(1.7, abs=1e-15)
        assert drive_value(proto, 2.0) == pytest.approx(1.0, abs=1e-15)
        assert drive_value(proto, 1.0) == pytest.approx((1.7 + 1.0) / 2.0, abs=1e-14)

    def test_compress_is_time_reverse(self):
        fwd = DriveProtocol(r=1.3, tau=1.5, direction="expand")
        bwd = DriveProtocol(r=1.3, tau=1.5, direction="compress")
        for t in (0.0, 0.3, 0.9, 1.5):
            assert drive_value(bwd, t) == pytest.approx(drive_value(fwd, 1.5 - t), abs=1e-14)

    def test_derivative_vanishes_at_ends(self):
        for direction in ("expand", "compress"):
            proto = DriveProtocol(r=1.2, tau=0.8, direction=direction)
            assert drive_derivative(proto, 0.0) == pytest.approx(0.0, abs=1e-15)
            assert drive_derivative(proto, 0.8) == pytest.approx(0.0, abs=1e-15)

    def test_derivative_matches_finite_difference(self):
        proto = DriveProtocol(r=1.4, tau=1.1, direction="compress")
        h = 1e-6
        for t in (0.1, 0.4, 0.77):
            fd = (drive_value(proto, t + h) - drive_value(proto, t - h)) / (2 * h)
            assert drive_derivative(proto, t) == pytest.approx(fd, abs=1e-8)

    def test_out_of_window_rejected(self):
        proto = DriveProtocol(r=1.2, tau=1.0)
        with pytest.raises(ValueError):
            drive_value(proto, -0.01)
        with pytest.raises(ValueError):
            drive_value(proto, 1.01)

    @given(r=st.floats(1.01, 3.0), tau=st.floats(0.1, 50.0), frac=st.floats(0.0, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_value_bounded_by_endpoints(self, r, tau, frac):
        proto = DriveProtocol(r=r, tau=tau)
        f = drive_value(proto, frac * tau)
        assert 1.0 - 1e-12 <= f <= r + 1e-12
