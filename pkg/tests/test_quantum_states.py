import math

import numpy as np
import pytest

from qtomo import (
    QuadraticHamiltonian,
    SingularLambdaP,
    StateContext,
    coherent_expansion_check,
    coherent_psi,
    default_ladder_frame,
    fock_psi,
    propagate_modes,
)
from qtomo.hamiltonian_dynamics import ModeInvariants

PI_QUARTER = math.pi**-0.25  # 0.7511255444649425


def harmonic_series(t_end=1.0, dt=1e-3, hbar=1.0):
    H = QuadraticHamiltonian(
        n_modes=1, B=lambda t: np.eye(2), c=None, hbar=hbar
    )
    fr = default_ladder_frame(H)
    return propagate_modes(H, fr, t_end, dt)


def test_ground_state_frozen_values():
    ctx = StateContext.from_series(harmonic_series(), 0)
    assert coherent_psi(ctx, [0j], 0.0) == pytest.approx(PI_QUARTER, abs=1e-15)
    # displaced state at the origin: pi^(-1/4) e^(-1) for alpha = 1
    assert coherent_psi(ctx, [1.0 + 0j], 0.0) == pytest.approx(
        0.2763236455473584, abs=1e-14
    )


def test_ground_state_profile():
    ctx = StateContext.from_series(harmonic_series(), 0)
    xs = np.linspace(-3.0, 3.0, 13)
    got = coherent_psi(ctx, [0j], xs[:, None])
    want = PI_QUARTER * np.exp(-0.5 * xs**2)
    np.testing.assert_allclose(got, want, atol=1e-14)


def test_displaced_state_profile():
    # alpha real: psi_alpha(x) = psi_0(x) exp(sqrt(2) alpha x - alpha^2/2 - |alpha|^2/2)
    ctx = StateContext.from_series(harmonic_series(), 0)
    a = 0.8
    xs = np.linspace(-2.0, 2.0, 9)
    got = coherent_psi(ctx, [a + 0j], xs[:, None])
    want = PI_QUARTER * np.exp(-0.5 * xs**2 + math.sqrt(2) * a * xs - a * a)
    np.testing.assert_allclose(got, want, rtol=1e-12)


def test_fock_states_low_orders():
    ctx = StateContext.from_series(harmonic_series(), 0)
    xs = np.linspace(-4.0, 4.0, 33)[:, None]
    psi0 = coherent_psi(ctx, [0j], xs)
    psi1 = fock_psi(ctx, (1,), xs)
    psi2 = fock_psi(ctx, (2,), xs)
    np.testing.assert_allclose(psi1, math.sqrt(2) * xs[:, 0] * psi0, atol=1e-13)
    np.testing.assert_allclose(
        psi2, (2.0 * xs[:, 0] ** 2 - 1.0) / math.sqrt(2) * psi0, atol=1e-13
    )


def test_normalization_single_mode_evolved():
    series = harmonic_series(t_end=0.7)
    ctx = StateContext.from_series(series, -1)
    xs = np.linspace(-9.0, 9.0, 3001)
    for label in ([0j], [0.5 + 0.3j]):
        psi = coherent_psi(ctx, label, xs[:, None])
        norm = np.trapezoid(np.abs(psi) ** 2, xs)
        assert norm == pytest.approx(1.0, abs=1e-8)
    for n in ((0,), (3,)):
        psi = fock_psi(ctx, n, xs[:, None])
        norm = np.trapezoid(np.abs(psi) ** 2, xs)
        assert norm == pytest.approx(1.0, abs=1e-8)


def test_normalization_two_modes():
    B = np.diag([1.0, 2.0, 2.0, 1.0])
    H = QuadraticHamiltonian(n_modes=2, B=lambda t: B, c=None)
    fr = default_ladder_frame(H)
    series = propagate_modes(H, fr, 0.4, 1e-3)
    ctx = StateContext.from_series(series, -1)
    g = np.linspace(-7.0, 7.0, 401)
    X, Y = np.meshgrid(g, g, indexing="ij")
    pts = np.stack([X, Y], axis=-1)
    psi = coherent_psi(ctx, [0.3 + 0j, -0.2 + 0.1j], pts)
    dens = np.abs(psi) ** 2
    norm = np.trapezoid(np.trapezoid(dens, g, axis=1), g)
    assert norm == pytest.approx(1.0, abs=1e-7)
    psi_f = fock_psi(ctx, (1, 2), pts)
    norm_f = np.trapezoid(np.trapezoid(np.abs(psi_f) ** 2, g, axis=1), g)
    assert norm_f == pytest.approx(1.0, abs=1e-7)


def test_coherent_state_is_eigenfunction_of_the_invariant():
    # (Lambda_p p + Lambda_x x + delta) psi_alpha = alpha psi_alpha,
    # with the derivative taken by central differences
    series = harmonic_series(t_end=0.7)
    ctx = StateContext.from_series(series, -1)
    inv = ctx.invariants
    alpha = 0.5 + 0.3j
    rng = np.random.default_rng(31)
    h = 1e-5
    for x in rng.uniform(-1.5, 1.5, size=10):
        psi = coherent_psi(ctx, [alpha], x)
        dpsi = (coherent_psi(ctx, [alpha], x + h) - coherent_psi(ctx, [alpha], x - h)) / (
            2.0 * h
        )
        lhs = (
            inv.Lambda_p[0, 0] * (-1j * ctx.hbar) * dpsi
            + inv.Lambda_x[0, 0] * x * psi
            + inv.delta[0] * psi
        )
        assert lhs == pytest.approx(alpha * psi, rel=1e-6)


def test_fock_orthonormality_evolved():
    series = harmonic_series(t_end=0.3)
    ctx = StateContext.from_series(series, -1)
    xs = np.linspace(-10.0, 10.0, 4001)
    states = [fock_psi(ctx, (n,), xs[:, None]) for n in range(5)]
    for n in range(5):
        for m in range(5):
            ov = np.trapezoid(np.conj(states[n]) * states[m], xs)
            want = 1.0 if n == m else 0.0
            assert abs(ov - want) < 1e-8


def test_number_expansion_reproduces_coherent_state():
    series = harmonic_series(t_end=0.7)
    ctx = StateContext.from_series(series, -1)
    xs = np.linspace(-3.0, 3.0, 41)[:, None]
    resid = coherent_expansion_check(ctx, [0.4 + 0.2j], xs, 16)
    assert resid < 1e-12


def test_phase_consistency_between_step_sizes():
    ctx_a = StateContext.from_series(harmonic_series(t_end=0.9, dt=1e-3), -1)
    ctx_b = StateContext.from_series(harmonic_series(t_end=0.9, dt=5e-4), -1)
    xs = np.linspace(-3.0, 3.0, 21)[:, None]
    pa = coherent_psi(ctx_a, [0.5 + 0.3j], xs)
    pb = coherent_psi(ctx_b, [0.5 + 0.3j], xs)
    assert np.abs(pa - pb).max() < 1e-7


def test_singular_momentum_coefficient_rejected():
    inv = ModeInvariants(
        t=0.0, Lambda_p=[[0.0]], Lambda_x=[[1.0 / math.sqrt(2)]], delta=[0j]
    )
    ctx = StateContext(invariants=inv)
    with pytest.raises(SingularLambdaP):
        coherent_psi(ctx, [0j], 0.0)


def test_context_accessors():
    series = harmonic_series(t_end=0.5)
    ctx = StateContext.from_series(series, -1)
    assert ctx.hbar == 1.0
    assert ctx.n_modes == 1
    assert ctx.det_lp_arg == pytest.approx(0.5, abs=1e-10)
    assert ctx.phase_integral == 0.0
