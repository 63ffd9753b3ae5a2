import math

import numpy as np
import pytest

from qtomo import (
    DegenerateFrame,
    FrameRequiresNu,
    GaussianTomogram,
    NonPositiveDispersion,
    QuadraticHamiltonian,
    StateContext,
    TomogramFrame,
    coherent_psi,
    coherent_tomogram,
    default_ladder_frame,
    fock_tomogram,
    propagate_modes,
    tomogram_density,
    tomogram_quadrature,
    xi_matrix,
)
from qtomo.hamiltonian_dynamics import ModeInvariants
from qtomo.model_library import ParametricOscillator, oscillator_invariants


def harmonic_series(t_end=0.7, dt=1e-3):
    H = QuadraticHamiltonian(n_modes=1, B=lambda t: np.eye(2), c=None)
    fr = default_ladder_frame(H)
    return propagate_modes(H, fr, t_end, dt)


def test_frame_validation():
    with pytest.raises(ValueError):
        TomogramFrame(mu=[0.0], nu=[0.0])
    with pytest.raises(ValueError):
        TomogramFrame(mu=[1.0, 0.0], nu=[0.0])
    fr = TomogramFrame(mu=[1.0, 0.0], nu=[0.0, 1.0])
    assert fr.n_modes == 2


def test_center_and_dispersion_physics():
    # X0 = mu <x> + nu <p> with <x> = sqrt(2) Re alpha, <p> = sqrt(2) Im alpha
    inv = harmonic_series()[0]
    alpha = 0.5 + 0.3j
    for mu, nu in [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8), (-0.4, 1.1)]:
        g = coherent_tomogram(inv, TomogramFrame(mu=[mu], nu=[nu]), [alpha])
        want = mu * math.sqrt(2) * 0.5 + nu * math.sqrt(2) * 0.3
        assert g.X0[0] == pytest.approx(want, abs=1e-12)
        assert g.Sigma[0, 0] == pytest.approx(0.5 * (mu * mu + nu * nu), rel=1e-12)


def test_dispersion_formula_general_mass_frequency():
    # Sigma = (hbar / 2 m w)(mu^2 + m^2 w^2 nu^2) for the static oscillator
    for m, w in [(1.0, 1.0), (2.0, 3.0), (0.5, 1.7)]:
        osc = ParametricOscillator(m=m, omega=lambda t, _w=w: _w)
        inv = oscillator_invariants(osc, 0.0)
        for mu, nu in [(1.0, 0.0), (0.0, 1.0), (0.7, -0.9)]:
            g = coherent_tomogram(inv, TomogramFrame(mu=[mu], nu=[nu]))
            want = (mu * mu + m * m * w * w * nu * nu) / (2.0 * m * w)
            assert g.Sigma[0, 0] == pytest.approx(want, rel=1e-12)


def test_density_frozen_value():
    inv = harmonic_series()[0]
    g = coherent_tomogram(inv, TomogramFrame(mu=[1.0], nu=[0.0]))
    w = tomogram_density(g, [[1.0]])
    assert w[0] == pytest.approx(math.exp(-1.0) / math.sqrt(math.pi), rel=1e-14)


def test_ground_momentum_frame_profile():
    inv = harmonic_series()[0]
    X = np.linspace(-4.0, 4.0, 17)
    g = coherent_tomogram(inv, TomogramFrame(mu=[0.0], nu=[1.0]))
    w = tomogram_density(g, X[:, None])
    np.testing.assert_allclose(w, np.exp(-(X**2)) / math.sqrt(math.pi), atol=1e-14)


def test_homogeneity_scaling():
    # w(s X; s mu, s nu) = w(X; mu, nu) / |s| for every scale s
    inv = harmonic_series().final
    alpha = 0.4 - 0.2j
    X = np.linspace(-3.0, 3.0, 11)
    base = tomogram_density(
        coherent_tomogram(inv, TomogramFrame(mu=[0.6], nu=[0.8]), [alpha]), X[:, None]
    )
    for s in (0.5, 2.0, -1.3):
        g = coherent_tomogram(inv, TomogramFrame(mu=[0.6 * s], nu=[0.8 * s]), [alpha])
        scaled = tomogram_density(g, (s * X)[:, None])
        np.testing.assert_allclose(scaled, base / abs(s), rtol=1e-11)


def test_fock_tomogram_harmonic_closed_form():
    # frozen form: w_n = w_0 |H_n(X / sqrt(mu^2 + nu^2))|^2 / (2^n n!)
    inv = harmonic_series()[0]
    X = np.linspace(-5.0, 5.0, 101)
    mu, nu = 0.6, 0.8
    fr = TomogramFrame(mu=[mu], nu=[nu])
    s = mu * mu + nu * nu
    w0 = np.exp(-(X**2) / s) / np.sqrt(math.pi * s)
    y = X / math.sqrt(s)
    herm = {0: np.ones_like(y), 1: 2 * y, 2: 4 * y**2 - 2, 3: 8 * y**3 - 12 * y}
    for n in range(4):
        w = fock_tomogram(inv, fr, (n,), X[:, None])
        want = w0 * herm[n] ** 2 / (2.0**n * math.factorial(n))
        np.testing.assert_allclose(w, want, atol=1e-13)
        assert w.min() >= 0.0


def test_fock_tomogram_zero_locations():
    inv = harmonic_series()[0]
    mu, nu = 0.6, 0.8
    x_star = math.sqrt((mu * mu + nu * nu) / 2.0)
    w = fock_tomogram(inv, TomogramFrame(mu=[mu], nu=[nu]), (2,), [[x_star], [-x_star]])
    assert np.abs(w).max() < 1e-15


def test_fock_tomogram_normalization_evolved():
    inv = harmonic_series(t_end=0.9).final
    X = np.linspace(-9.0, 9.0, 2001)
    for n in range(4):
        w = fock_tomogram(inv, TomogramFrame(mu=[0.3], nu=[-1.1]), (n,), X[:, None])
        assert w.min() >= 0.0
        norm = np.trapezoid(w, X)
        assert norm == pytest.approx(1.0, abs=1e-8)


def test_quadrature_route_matches_closed_form():
    series = harmonic_series(t_end=0.7)
    ctx = StateContext.from_series(series, -1)
    inv = series.final
    alpha = 0.5 + 0.3j
    X = np.linspace(-4.0, 4.0, 21)
    for mu, nu in [(0.0, 1.0), (0.6, 0.8), (1.3, -0.4)]:
        fr = TomogramFrame(mu=[mu], nu=[nu])
        wq = tomogram_quadrature(
            lambda xs: coherent_psi(ctx, [alpha], xs), fr, X[:, None]
        )
        wc = tomogram_density(coherent_tomogram(inv, fr, [alpha]), X[:, None])
        np.testing.assert_allclose(wq, wc, atol=1e-9)


def test_quadrature_requires_momentum_component():
    ctx = StateContext.from_series(harmonic_series(), 0)
    with pytest.raises(FrameRequiresNu):
        tomogram_quadrature(
            lambda xs: coherent_psi(ctx, [0j], xs),
            TomogramFrame(mu=[1.0], nu=[0.0]),
            [[0.0]],
        )


def test_degenerate_frame_detected():
    inv = ModeInvariants(t=0.0, Lambda_p=[[1.0]], Lambda_x=[[1.0]], delta=[0j])
    with pytest.raises(DegenerateFrame):
        coherent_tomogram(inv, TomogramFrame(mu=[1.0], nu=[1.0]))


def test_nonpositive_dispersion_rejected():
    g = GaussianTomogram(X0=[0.0], Sigma=[[-0.5]])
    with pytest.raises(NonPositiveDispersion):
        tomogram_density(g, [[0.0]])


def test_xi_matrix_two_modes_shape():
    B = np.diag([1.0, 2.0, 2.0, 1.0])
    H = QuadraticHamiltonian(n_modes=2, B=lambda t: B, c=None)
    fr = default_ladder_frame(H)
    series = propagate_modes(H, fr, 0.3, 1e-3)
    inv = series.final
    frame = TomogramFrame(mu=[1.0, 0.5], nu=[0.0, 1.0])
    Xi = xi_matrix(inv, frame)
    assert Xi.shape == (2, 2)
    g = coherent_tomogram(inv, frame, [0.2 + 0j, -0.1 + 0.4j])
    assert g.Sigma.shape == (2, 2)
    lam = np.linalg.eigvalsh(g.Sigma)
    assert lam.min() > 0.0


def test_two_mode_tomogram_normalization():
    B = np.diag([1.0, 2.0, 2.0, 1.0])
    H = QuadraticHamiltonian(n_modes=2, B=lambda t: B, c=None)
    fr = default_ladder_frame(H)
    inv = propagate_modes(H, fr, 0.5, 1e-3).final
    frame = TomogramFrame(mu=[1.0, 0.3], nu=[-0.2, 1.0])
    g = coherent_tomogram(inv, frame, [0.2 + 0.1j, 0.0j])
    grid = np.linspace(-7.0, 7.0, 301)
    X, Y = np.meshgrid(grid, grid, indexing="ij")
    w = tomogram_density(g, np.stack([X, Y], axis=-1))
    norm = np.trapezoid(np.trapezoid(w, grid, axis=1), grid)
    assert norm == pytest.approx(1.0, abs=1e-6)
