import math

import numpy as np
import pytest

from qtomo import (
    NotSymplectic,
    OrderOverflow,
    QuadraticHamiltonian,
    SingularD,
    StateContext,
    amplitude_cnm,
    apply_bogoliubov,
    check_symplectic_properties,
    default_ladder_frame,
    make_bogoliubov,
    overlap_kernel,
    overlap_nm,
    propagate_modes,
    squeeze_transform,
    sum_rule_check,
    transition_probability,
)
from qtomo.hamiltonian_dynamics import ModeInvariants


def harmonic_series(t_end=0.7, dt=1e-3):
    H = QuadraticHamiltonian(n_modes=1, B=lambda t: np.eye(2), c=None)
    fr = default_ladder_frame(H)
    return propagate_modes(H, fr, t_end, dt)


def test_make_bogoliubov_validation():
    S = make_bogoliubov([[math.cosh(0.5)]], [[math.sinh(0.5)]])
    assert S.n_modes == 1
    with pytest.raises(NotSymplectic):
        make_bogoliubov([[1.0]], [[0.5]])  # breaks |Sp|^2 - |Sx|^2 = 1
    with pytest.raises(NotSymplectic):
        make_bogoliubov([[0.0]], [[1.0]])  # singular S_p
    with pytest.raises(NotSymplectic):
        make_bogoliubov(
            [[math.cosh(1.0), 0.0], [0.0, math.cosh(0.3)]],
            [[0.0, math.sinh(1.0)], [math.sinh(0.3), 0.0]],
        )


def test_squeeze_amplitudes_closed_form():
    th = 0.5
    S = squeeze_transform(th)
    c = math.cosh(th)
    t = math.tanh(th)
    assert amplitude_cnm(S, (0,), (0,)) == pytest.approx(1.0 / math.sqrt(c), rel=1e-13)
    assert amplitude_cnm(S, (0,), (1,)) == pytest.approx(0.0, abs=1e-15)
    for m in range(5):
        want = (
            (1.0 / math.sqrt(c))
            * (-t / 2.0) ** m
            * math.sqrt(math.factorial(2 * m))
            / math.factorial(m)
        )
        got = amplitude_cnm(S, (0,), (2 * m,), max_order=32)
        assert got == pytest.approx(want, rel=1e-12)


def test_identity_transform_is_kronecker():
    S = make_bogoliubov(np.eye(1), np.zeros((1, 1)))
    for n in range(4):
        for m in range(4):
            got = amplitude_cnm(S, (n,), (m,))
            want = 1.0 if n == m else 0.0
            assert got == pytest.approx(want, abs=1e-14)


def test_amplitude_unitarity_row_sums():
    S = squeeze_transform(0.5)
    total = sum(abs(amplitude_cnm(S, (0,), (m,), max_order=64)) ** 2 for m in range(41))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_amplitude_order_guard():
    S = squeeze_transform(0.5)
    with pytest.raises(OrderOverflow):
        amplitude_cnm(S, (20,), (20,))


def test_sum_rule_ground_row():
    for th in (0.25, 0.5, 1.0):
        S = squeeze_transform(th)
        res = sum_rule_check(S, (0,), 120)
        assert res.target == pytest.approx(math.cosh(th), rel=1e-14)
        assert res.residual <= 1e-10 * res.target
        # cumulative shell sums approach the target monotonically from below
        assert np.all(np.diff(res.shell_sums) >= 0.0)
        assert np.all(res.shell_sums <= res.target * (1.0 + 1e-9))
        assert res.shell_sums[-1] == res.partial_sum
        assert res.shells_used <= 121


def test_sum_rule_excited_row():
    S = squeeze_transform(0.5)
    res = sum_rule_check(S, (2,), 80)
    assert res.residual <= 1e-9 * max(1.0, res.target)
    assert res.tail_estimate < 1e-12


def test_sum_rule_frozen_partial_sum():
    # the theta = 0.5 ground row adds up to cosh(0.5) = 1.1276259652063807
    res = sum_rule_check(squeeze_transform(0.5), (0,), 60)
    assert res.partial_sum == pytest.approx(1.1276259652063807, rel=1e-12)


def test_equal_time_overlaps_are_kronecker():
    ctx = StateContext.from_series(harmonic_series(), -1)
    for n in range(4):
        for m in range(4):
            got = overlap_nm(ctx, ctx, (n,), (m,))
            want = 1.0 if n == m else 0.0
            assert got == pytest.approx(want, abs=1e-10)


def test_harmonic_revival_phases():
    # the full prefactor phase shows up as exp(-i (n + 1/2) t) exactly
    T = 0.7
    series = harmonic_series(t_end=T)
    ctx0 = StateContext.from_series(series, 0)
    ctxT = StateContext.from_series(series, -1)
    for n in range(4):
        got = overlap_nm(ctx0, ctxT, (n,), (n,))
        want = np.exp(-1j * (n + 0.5) * T)
        assert got == pytest.approx(want, abs=1e-10)


def test_overlap_hermitian_symmetry():
    series = harmonic_series(t_end=0.9)
    c1 = StateContext.from_series(series, 300)
    c2 = StateContext.from_series(series, -1)
    for n in range(3):
        for m in range(3):
            a = overlap_nm(c1, c2, (n,), (m,))
            b = overlap_nm(c2, c1, (m,), (n,))
            assert a == pytest.approx(np.conj(b), abs=1e-10)


def test_kernel_block_identity():
    # the assembled Hermite parameter matches its two-time pairing closed form
    B = np.diag([1.0, 2.0, 2.0, 1.0])
    H = QuadraticHamiltonian(n_modes=2, B=lambda t: B, c=None)
    fr = default_ladder_frame(H, branch="plain")
    series = propagate_modes(H, fr, 0.9, 1e-3)
    c1 = StateContext.from_series(series, 0)
    c2 = StateContext.from_series(series, -1)
    k = overlap_kernel(c1, c2)
    N = 2
    Dt = -np.conj(k.D)
    Et = np.conj(k.E)
    R11 = np.linalg.solve(Dt, Et)
    R12 = 1j * np.linalg.inv(Dt)
    R21 = 1j * np.linalg.inv(Dt.T)
    R22 = np.conj(Et) @ np.linalg.inv(Dt)
    np.testing.assert_allclose(k.R[:N, :N], R11, atol=1e-12)
    np.testing.assert_allclose(k.R[:N, N:], R12, atol=1e-12)
    np.testing.assert_allclose(k.R[N:, :N], R21, atol=1e-12)
    np.testing.assert_allclose(k.R[N:, N:], R22, atol=1e-12)
    np.testing.assert_allclose(k.R, k.R.T, atol=1e-13)


def test_bogoliubov_route_matches_amplitudes():
    # transforming the frame and taking overlaps must reproduce amplitude_cnm
    # (bra on the transformed side, since c_nm maps old m to new n) up to one
    # state-convention unit phase, which is 1 for a real squeeze
    th = 0.5
    S = squeeze_transform(th)
    inv0 = harmonic_series()[0]
    transformed = apply_bogoliubov(S, inv0)
    assert check_symplectic_properties(transformed).passed
    eta = overlap_nm(transformed, inv0, (0,), (0,)) / amplitude_cnm(S, (0,), (0,))
    assert abs(abs(eta) - 1.0) < 1e-12
    assert eta == pytest.approx(1.0, abs=1e-12)
    for n in range(4):
        for m in range(4):
            via_overlap = overlap_nm(transformed, inv0, (n,), (m,))
            via_hermite = amplitude_cnm(S, (n,), (m,))
            assert via_overlap == pytest.approx(eta * via_hermite, abs=1e-12)
            assert transition_probability(transformed, inv0, (n,), (m,)) == pytest.approx(
                abs(via_hermite) ** 2, abs=1e-12
            )


def test_singular_pairing_detected():
    inv = harmonic_series()[0]
    mirrored = ModeInvariants(
        t=0.0,
        Lambda_p=inv.Lambda_p.conj(),
        Lambda_x=inv.Lambda_x.conj(),
        delta=inv.delta,
    )
    with pytest.raises(SingularD):
        overlap_nm(inv, mirrored, (0,), (0,))
