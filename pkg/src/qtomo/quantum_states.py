"""Closed-form coherent and excited-mode wavefunctions.

Given the complex integrals of motion (Lambda_p, Lambda_x, delta) at time t,
the normalized eigenstate of the lowering invariants with eigenvalue vector
alpha has position representation

    psi_alpha(x) = pref(t) * exp( -(i/2 hbar) x^T C x
                                  + (i/hbar) x^T Lambda_p^{-1} (alpha - delta)
                                  + 1/2 alpha^T G alpha
                                  + alpha^T (delta^* - G delta)
                                  - 1/2 |alpha|^2
                                  + 1/2 delta^T G delta - 1/2 |delta|^2
                                  + i phi(t) )

with C = Lambda_p^{-1} Lambda_x, G = Lambda_p^* Lambda_p^{-1}, phi(t) the
accumulated drive phase, and

    pref(t) = (2 pi hbar^2)^{-N/4} |det Lambda_p|^{-1/2} e^{-i theta(t)/2}

where theta(t) is the continuously unwrapped increment of arg det Lambda_p
along the trajectory (theta(0) = 0: the branch starts on the positive root).

The excited family divides out the Gaussian: with R = -G (complex symmetric)
and the shifted argument y = -(i/hbar) (Lambda_p^dagger)^{-1} x + delta
- G^* delta^*,

    psi_n(x) = psi_0(x) H_n^R(y) / sqrt(n!)

using the matrix-parameter Hermite polynomials of :mod:`qtomo.hermite`.
The coherent family is their generating function:
psi_alpha = exp(-|alpha|^2/2) sum_n alpha^n psi_n / sqrt(n!).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularLambdaP
from .hamiltonian_dynamics import ModeInvariants, ModeSeries
from .hermite import _hermite_lattice


@dataclass(frozen=True)
class CoherentLabel:
    """Eigenvalue vector alpha of the lowering invariants."""

    alpha: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alpha, dtype=complex))
        if a.ndim != 1:
            raise ValueError("alpha must be a vector")
        object.__setattr__(self, "alpha", a)

    @property
    def n_modes(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class FockLabel:
    """Excitation multi-index n of the number-like invariants."""

    n: tuple[int, ...]

    def __post_init__(self):
        n = tuple(int(k) for k in np.atleast_1d(self.n))
        if any(k < 0 for k in n):
            raise ValueError("excitation numbers must be non-negative")
        object.__setattr__(self, "n", n)

    @property
    def n_modes(self) -> int:
        return len(self.n)


@dataclass(frozen=True)
class StateContext:
    """Mode invariants plus the two accumulated phases wavefunctions need.

    ``phase_integral`` is the drive phase phi(t); ``det_lp_arg`` is the
    unwrapped increment of arg det Lambda_p relative to t = 0, which selects
    the branch of the prefactor square root.  Both vanish for a context
    built directly at the initial time.
    """

    invariants: ModeInvariants
    phase_integral: float = 0.0
    det_lp_arg: float = 0.0

    @property
    def hbar(self) -> float:
        return self.invariants.hbar

    @property
    def n_modes(self) -> int:
        return self.invariants.n_modes

    @classmethod
    def from_series(cls, series: ModeSeries, k: int) -> "StateContext":
        """Context at sample k of a propagated ModeSeries."""
        kk = int(k)
        if kk < 0:
            kk += len(series)
        return cls(
            invariants=series[kk],
            phase_integral=float(series.phase[kk]),
            det_lp_arg=float(series.det_arg[kk] - series.det_arg[0]),
        )


def _coerce_alpha(label, n_modes):
    if isinstance(label, CoherentLabel):
        a = label.alpha
    else:
        a = np.atleast_1d(np.asarray(label, dtype=complex))
    if a.shape != (n_modes,):
        raise ValueError(f"alpha must have length {n_modes}")
    return a


def _coerce_points(x, n_modes):
    """Return (points with shape (..., N), single-point flag)."""
    x = np.asarray(x, dtype=complex)
    if n_modes == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        return x.reshape(x.shape + (1,)), x.ndim == 0
    if x.ndim == 0 or x.shape[-1] != n_modes:
        raise ValueError(f"points must have trailing dimension {n_modes}")
    return x, x.ndim == 1


def _lambda_p_inverse(inv: ModeInvariants) -> np.ndarray:
    Lp = inv.Lambda_p
    sv = np.linalg.svd(Lp, compute_uv=False)
    if np.min(sv) <= 1e-12 * max(1.0, float(np.max(sv))):
        raise SingularLambdaP(
            "Lambda_p is singular; the position-representation form "
            "is undefined at this instant"
        )
    return np.linalg.inv(Lp)


def _prefactor(ctx: StateContext) -> complex:
    inv = ctx.invariants
    N = inv.n_modes
    hbar = inv.hbar
    det = np.linalg.det(inv.Lambda_p)
    mag = (2.0 * math.pi * hbar * hbar) ** (-N / 4.0) * abs(det) ** -0.5
    return mag * np.exp(-0.5j * ctx.det_lp_arg)


def coherent_psi(ctx: StateContext, label, x):
    """Evaluate the coherent wavefunction psi_alpha at position(s) x.

    Parameters
    ----------
    ctx : StateContext
    label : CoherentLabel or array_like
        The eigenvalue vector alpha (length N).
    x : array_like
        One point of shape (N,) or a batch (..., N); bare scalars are fine
        for N = 1.

    Returns
    -------
    complex or ndarray

    Raises
    ------
    SingularLambdaP
        If Lambda_p is singular at this instant.
    """
    inv = ctx.invariants
    N = inv.n_modes
    hbar = inv.hbar
    alpha = _coerce_alpha(label, N)
    pts, single = _coerce_points(x, N)
    Lp_inv = _lambda_p_inverse(inv)
    C = Lp_inv @ inv.Lambda_x
    G = inv.Lambda_p.conj() @ Lp_inv
    delta = inv.delta
    quad = np.einsum("...i,ij,...j->...", pts, C, pts)
    lin = pts @ (Lp_inv @ (alpha - delta))
    exponent_x = (-0.5j / hbar) * quad + (1j / hbar) * lin
    const = (
        0.5 * (alpha @ G @ alpha)
        + alpha @ (delta.conj() - G @ delta)
        - 0.5 * float(np.real(np.vdot(alpha, alpha)))
        + 0.5 * (delta @ G @ delta)
        - 0.5 * float(np.real(np.vdot(delta, delta)))
        + 1j * ctx.phase_integral
    )
    out = _prefactor(ctx) * np.exp(const + exponent_x)
    return complex(out) if single else out


def fock_psi(ctx: StateContext, label, x):
    """Evaluate the excited-mode wavefunction psi_n at position(s) x.

    Parameters
    ----------
    ctx : StateContext
    label : FockLabel or sequence of int
        Excitation multi-index n (length N).
    x : array_like
        One point of shape (N,) or a batch (..., N); bare scalars are fine
        for N = 1.

    Returns
    -------
    complex or ndarray

    Raises
    ------
    SingularLambdaP
        If Lambda_p is singular at this instant.
    """
    inv = ctx.invariants
    N = inv.n_modes
    hbar = inv.hbar
    if not isinstance(label, FockLabel):
        label = FockLabel(n=label)
    if label.n_modes != N:
        raise ValueError(f"excitation index must have length {N}")
    n = label.n
    pts, single = _coerce_points(x, N)
    Lp_inv = _lambda_p_inverse(inv)
    G = inv.Lambda_p.conj() @ Lp_inv
    R = -G
    R = 0.5 * (R + R.T)
    Minv = np.linalg.inv(inv.Lambda_p.conj().T)
    shift = inv.delta - G.conj() @ inv.delta.conj()
    arg = (-1j / hbar) * np.einsum("ij,...j->...i", Minv, pts) + shift
    psi0 = coherent_psi(ctx, np.zeros(N, dtype=complex), pts)
    H = _hermite_lattice(R, arg, n)[n]
    norm = math.sqrt(math.prod(math.factorial(k) for k in n))
    out = psi0 * H / norm
    return complex(out) if single else out


def coherent_expansion_check(ctx: StateContext, alpha, x, max_order: int) -> float:
    """Residual of the number-basis expansion of the coherent state.

    Sums exp(-|alpha|^2/2) alpha^n psi_n / sqrt(n!) over all |n| <= max_order
    and returns the largest absolute deviation from coherent_psi over the
    supplied points.  The truncation tail scales like
    |alpha|^{max_order+1} / sqrt((max_order+1)!).

    Returns
    -------
    float
    """
    inv = ctx.invariants
    N = inv.n_modes
    hbar = inv.hbar
    alpha = _coerce_alpha(alpha, N)
    pts, _ = _coerce_points(x, N)
    direct = coherent_psi(ctx, alpha, pts)
    Lp_inv = _lambda_p_inverse(inv)
    G = inv.Lambda_p.conj() @ Lp_inv
    R = -G
    R = 0.5 * (R + R.T)
    Minv = np.linalg.inv(inv.Lambda_p.conj().T)
    shift = inv.delta - G.conj() @ inv.delta.conj()
    arg = (-1j / hbar) * np.einsum("ij,...j->...i", Minv, pts) + shift
    psi0 = coherent_psi(ctx, np.zeros(N, dtype=complex), pts)
    lattice = _hermite_lattice(R, arg, (max_order,) * N)
    series = np.zeros(pts.shape[:-1], dtype=complex)
    for idx in np.ndindex(*((max_order + 1,) * N)):
        if sum(idx) > max_order:
            continue
        coeff = math.prod(a**k for a, k in zip(alpha, idx))
        coeff /= math.prod(math.factorial(k) for k in idx)
        series = series + coeff * lattice[idx]
    series = series * psi0 * math.exp(-0.5 * float(np.real(np.vdot(alpha, alpha))))
    return float(np.max(np.abs(direct - series)))
