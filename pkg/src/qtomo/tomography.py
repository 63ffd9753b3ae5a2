"""Symplectic tomograms of the closed-form states.

A tomographic frame assigns each mode a real pair (mu_k, nu_k) and probes
the distribution of the rotated-scaled quadrature X_k = mu_k x_k + nu_k p_k.
For the Gaussian states of this package everything reduces to the complex
frame matrix

    Xi = i (Lambda_x diag(nu) - Lambda_p diag(mu))

through which the coherent-state tomogram is the normal density with

    Sigma = hbar^2 Xi^dagger Xi,
    X_0   = hbar Xi^dagger Xi ( Xi^{-1} (alpha - delta)
                              + (Xi^*)^{-1} (alpha^* - delta^*) ).

Excited states modulate the ground-state density by a squared Hermite
polynomial of matrix parameter (Xi^T)^{-1} Xi^dagger.  The module also has a
direct numerical route: the tomogram of an arbitrary wavefunction as the
squared modulus of a fractional-Fourier-type integral, used as the
independent cross-check of all closed forms (nu must be nonzero modewise
for that integral to exist; frames with nu_k = 0 are served by the closed
forms only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .errors import DegenerateFrame, FrameRequiresNu, NonPositiveDispersion
from .hamiltonian_dynamics import ModeInvariants
from .hermite import _hermite_lattice


@dataclass(frozen=True)
class TomogramFrame:
    """Per-mode quadrature coefficients (mu, nu) for X = mu x + nu p."""

    mu: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        nu = np.atleast_1d(np.asarray(self.nu, dtype=float))
        if mu.shape != nu.shape or mu.ndim != 1:
            raise ValueError("mu and nu must be equal-length vectors")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(nu))):
            raise ValueError("frame coefficients must be finite")
        if np.any((mu == 0.0) & (nu == 0.0)):
            raise ValueError("(mu_k, nu_k) must not vanish jointly in any mode")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    @property
    def n_modes(self) -> int:
        return len(self.mu)


@dataclass(frozen=True)
class GaussianTomogram:
    """Normal tomogram: center X0 and dispersion matrix Sigma."""

    X0: np.ndarray
    Sigma: np.ndarray

    def __post_init__(self):
        X0 = np.atleast_1d(np.asarray(self.X0, dtype=float))
        Sigma = np.atleast_2d(np.asarray(self.Sigma, dtype=float))
        if Sigma.shape != (len(X0), len(X0)):
            raise ValueError("Sigma shape must match X0 length")
        scale = max(1.0, float(np.max(np.abs(Sigma))))
        if np.max(np.abs(Sigma - Sigma.T)) > 1e-10 * scale:
            raise ValueError("Sigma must be symmetric")
        object.__setattr__(self, "X0", X0)
        object.__setattr__(self, "Sigma", 0.5 * (Sigma + Sigma.T))

    @property
    def n_modes(self) -> int:
        return len(self.X0)


def _coerce_quadratures(X, n_modes):
    """Return (points with shape (..., N), single-point flag)."""
    X = np.asarray(X, dtype=float)
    if n_modes == 1 and (X.ndim == 0 or X.shape[-1] != 1):
        return X.reshape(X.shape + (1,)), X.ndim == 0
    if X.ndim == 0 or X.shape[-1] != n_modes:
        raise ValueError(f"quadrature points must have trailing dimension {n_modes}")
    return X, X.ndim == 1


def xi_matrix(inv: ModeInvariants, frame: TomogramFrame) -> np.ndarray:
    """Frame matrix Xi = i (Lambda_x diag(nu) - Lambda_p diag(mu)).

    Singularity is not checked here; consumers that need an invertible Xi
    raise DegenerateFrame themselves.
    """
    if frame.n_modes != inv.n_modes:
        raise ValueError("frame dimension does not match the invariants")
    return 1j * (inv.Lambda_x @ np.diag(frame.nu) - inv.Lambda_p @ np.diag(frame.mu))


def _checked_xi(inv, frame):
    Xi = xi_matrix(inv, frame)
    sv = np.linalg.svd(Xi, compute_uv=False)
    if np.min(sv) <= 1e-12 * max(1.0, float(np.max(sv))):
        raise DegenerateFrame(
            "frame matrix is singular for this state and (mu, nu)"
        )
    return Xi


def coherent_tomogram(inv: ModeInvariants, frame: TomogramFrame, alpha=None) -> GaussianTomogram:
    """Closed-form tomogram of a coherent state: a normal density.

    Parameters
    ----------
    inv : ModeInvariants
    frame : TomogramFrame
    alpha : array_like, optional
        Coherent eigenvalue vector; default is the ground state alpha = 0.

    Returns
    -------
    GaussianTomogram

    Raises
    ------
    DegenerateFrame
        If the frame matrix is singular.
    """
    N = inv.n_modes
    hbar = inv.hbar
    if alpha is None:
        alpha = np.zeros(N, dtype=complex)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    if alpha.shape != (N,):
        raise ValueError(f"alpha must have length {N}")
    Xi = _checked_xi(inv, frame)
    gram = Xi.conj().T @ Xi
    scale = max(1.0, float(np.max(np.abs(gram))))
    if np.max(np.abs(np.imag(gram))) > 1e-12 * scale:
        raise ValueError("frame Gram matrix has a non-real part above tolerance")
    Sigma = hbar * hbar * np.real(gram)
    shift = alpha - inv.delta
    y = np.linalg.solve(Xi, shift) + np.linalg.solve(Xi.conj(), shift.conj())
    X0c = (hbar * gram) @ y
    if np.max(np.abs(np.imag(X0c))) > 1e-10 * max(1.0, float(np.max(np.abs(X0c)))):
        raise ValueError("tomogram center has a non-real part above tolerance")
    return GaussianTomogram(X0=np.real(X0c), Sigma=Sigma)


def tomogram_density(g: GaussianTomogram, X):
    """Evaluate the normal tomogram density at quadrature point(s) X.

    Raises
    ------
    NonPositiveDispersion
        If Sigma is not positive definite.
    """
    N = g.n_modes
    lam, U = np.linalg.eigh(g.Sigma)
    if np.min(lam) <= 0.0:
        raise NonPositiveDispersion("dispersion matrix must be positive definite")
    pts, single = _coerce_quadratures(X, N)
    d = pts - g.X0
    z = d @ U
    quad = np.einsum("...i,i->...", z * z, 1.0 / lam)
    norm = math.sqrt((2.0 * math.pi) ** N * float(np.prod(lam)))
    out = np.exp(-0.5 * quad) / norm
    return float(out) if single else out


def fock_tomogram(inv: ModeInvariants, frame: TomogramFrame, n, X):
    """Closed-form tomogram of an excited state psi_n.

    The ground-state normal density is modulated by the squared Hermite
    polynomial of matrix parameter R = (Xi^T)^{-1} Xi^dagger at the affine
    argument y = (1/hbar) (Xi^dagger)^{-1} X + delta
    + (Xi^dagger)^{-1} Xi^T delta^*:

        w_n(X) = w_0(X) |H_n^R(y)|^2 / n!

    Parameters
    ----------
    inv : ModeInvariants
    frame : TomogramFrame
    n : sequence of int
        Excitation multi-index.
    X : array_like
        Quadrature point(s), shape (..., N) (scalars fine for N = 1).

    Returns
    -------
    float or ndarray

    Raises
    ------
    DegenerateFrame
        If the frame matrix is singular.
    """
    N = inv.n_modes
    hbar = inv.hbar
    n = tuple(int(k) for k in np.atleast_1d(n))
    if len(n) != N or any(k < 0 for k in n):
        raise ValueError(f"excitation index must be {N} non-negative integers")
    Xi = _checked_xi(inv, frame)
    R = np.linalg.solve(Xi.T, Xi.conj().T)
    scale = max(1.0, float(np.max(np.abs(R))))
    if np.max(np.abs(R - R.T)) > 1e-10 * scale:
        raise ValueError("Hermite parameter matrix failed its symmetry check")
    R = 0.5 * (R + R.T)
    pts, single = _coerce_quadratures(X, N)
    ground = tomogram_density(coherent_tomogram(inv, frame), pts)
    Xi_dag_inv = np.linalg.inv(Xi.conj().T)
    shift = inv.delta + Xi_dag_inv @ (Xi.T @ inv.delta.conj())
    y = (1.0 / hbar) * np.einsum("ij,...j->...i", Xi_dag_inv, pts) + shift
    H = _hermite_lattice(R, y, n)[n]
    weight = math.prod(math.factorial(k) for k in n)
    out = ground * np.abs(H) ** 2 / weight
    return float(out) if single else out


def _envelope_window(psi, N, sigma_floor=0.05):
    """Crude center and width of |psi|^2 per axis from a coarse scan."""
    probe = np.linspace(-30.0, 30.0, 241)
    grids = np.meshgrid(*([probe] * N), indexing="ij")
    pts = np.stack(grids, axis=-1).reshape(-1, N)
    w = np.abs(psi(pts)) ** 2
    mass = float(np.sum(w))
    if not np.isfinite(mass) or mass <= 0.0:
        raise ValueError("wavefunction has no visible mass on the scan window")
    center = (w @ pts) / mass
    var = (w @ (pts - center) ** 2) / mass
    sigma = np.sqrt(np.maximum(var, sigma_floor**2))
    return center, sigma


def tomogram_quadrature(
    psi,
    frame: TomogramFrame,
    X,
    *,
    hbar: float = 1.0,
    start_nodes: int = 200,
    max_nodes: int = 3200,
    rtol: float = 1e-9,
):
    """Tomogram of an arbitrary wavefunction by direct integration.

    Evaluates

        w(X) = (2 pi hbar)^{-N} |nu_1 ... nu_N|^{-1}
               | integral psi(y) exp( (i/2 hbar) sum_k (mu_k/nu_k) y_k^2
                                      - (i/hbar) sum_k y_k X_k / nu_k ) dy |^2

    with Gauss-Legendre nodes on a window of 10 standard deviations around
    the envelope of |psi|^2, doubling the node count until two refinements
    agree.  This is the slow independent cross-check for the closed forms.

    Parameters
    ----------
    psi : callable
        Maps position arrays of shape (..., N) to complex amplitudes.
    frame : TomogramFrame
        All nu_k must be nonzero.
    X : array_like
        Quadrature point(s), shape (..., N) (scalars fine for N = 1).
    hbar : float, optional

    Returns
    -------
    float or ndarray

    Raises
    ------
    FrameRequiresNu
        If any nu_k is zero; such frames only exist in closed form.
    """
    N = frame.n_modes
    if np.any(frame.nu == 0.0):
        raise FrameRequiresNu("the integral form needs nu != 0 in every mode")
    pts, single = _coerce_quadratures(X, N)
    flatX = pts.reshape(-1, N)
    center, sigma = _envelope_window(psi, N)
    mu, nu = frame.mu, frame.nu

    def integral(nodes_per_axis):
        gx, gw = roots_legendre(nodes_per_axis)
        axes = []
        weights = []
        for k in range(N):
            half = 10.0 * sigma[k]
            axes.append(center[k] + half * gx)
            weights.append(half * gw)
        grids = np.meshgrid(*axes, indexing="ij")
        y = np.stack(grids, axis=-1).reshape(-1, N)
        wgrids = np.meshgrid(*weights, indexing="ij")
        w = np.prod(np.stack(wgrids, axis=-1).reshape(-1, N), axis=-1)
        quad_phase = np.exp((0.5j / hbar) * np.sum((mu / nu) * y * y, axis=-1))
        base = w * psi(y) * quad_phase
        cross = np.exp((-1j / hbar) * ((y / nu) @ flatX.T))
        return base @ cross

    nodes = start_nodes
    prev = integral(nodes)
    while nodes < max_nodes:
        nodes *= 2
        curr = integral(nodes)
        err = float(np.max(np.abs(curr - prev)))
        prev = curr
        if err <= rtol * max(1.0, float(np.max(np.abs(curr)))):
            break
    const = (2.0 * math.pi * hbar) ** (-N) / float(np.prod(np.abs(nu)))
    w_val = const * np.abs(prev) ** 2
    w_val = w_val.reshape(pts.shape[:-1])
    return float(w_val) if single else w_val
