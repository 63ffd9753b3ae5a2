"""Linear integrals of motion for time-dependent quadratic Hamiltonians.

A system of N modes with Hamiltonian H = 1/2 q^T B(t) q + c(t)^T q in the
phase-space ordering q = (p_1..p_N, x_1..x_N) admits a full set of linear
integrals of motion Q(t) = Lambda(t) q + Delta(t).  Requiring dQ/dt = 0 in
the Heisenberg picture gives the linear flow

    dLambda/dt = Lambda J B(t),      dDelta/dt = Lambda J c(t)

with Lambda(0) = E_{2N}, Delta(0) = 0 and the constant block matrix
J = [[0, E_N], [-E_N, 0]].  The flow preserves Lambda J Lambda^T = J, which
is the residual every propagator here tracks.

The complex half of the story packs annihilation-like combinations
A(t) = Lambda_p(t) p + Lambda_x(t) x + delta(t) whose N x N coefficient rows
obey the same equations blockwise:

    dLambda_p/dt = Lambda_p B_xp - Lambda_x B_pp
    dLambda_x/dt = Lambda_p B_xx - Lambda_x B_px
    ddelta/dt    = Lambda_p c_x  - Lambda_x c_p

seeded by a constant ladder frame (A_p, A_x) satisfying

    A_x A_p^T - A_p A_x^T = 0,
    A_x A_p^dagger - A_p A_x^dagger = -(i/hbar) E_N.

The accumulated drive phase phi(t) = integral of Im(ddelta/dt . delta^*) and
the continuous branch angle of det Lambda_p are carried along with the mode
propagation; downstream wavefunction modules need both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import NegativeSpectrum, NonCommutingBlocks, SingularBlock, StepTooLarge

_CONST_SAMPLES = np.linspace(0.0, 1.0, 5)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the 2N x 2N constant J = [[0, E_N], [-E_N, 0]].

    Acting on vectors ordered (p, x), this single constant plays both roles:
    generator factor of the evolution equations and the metric conserved by
    the flow, Lambda J Lambda^T = J.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    n = int(n_modes)
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Quadratic Hamiltonian 1/2 q^T B(t) q + c(t)^T q, q = (p, x).

    Parameters
    ----------
    n_modes : int
        Number of modes N.
    B : callable
        t -> real symmetric (2N, 2N) coefficient matrix.
    c : callable, optional
        t -> real length-2N drive vector, ordered (c_p, c_x).  None means
        no linear drive.
    hbar : float, optional
        Value of the quantum of action used downstream.  Default 1.0.
    """

    n_modes: int
    B: Callable[[float], np.ndarray]
    c: Optional[Callable[[float], np.ndarray]] = None
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.n_modes) < 1:
            raise ValueError("n_modes must be at least 1")
        object.__setattr__(self, "n_modes", int(self.n_modes))
        if float(self.hbar) <= 0.0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "hbar", float(self.hbar))

    def coefficient(self, t: float) -> np.ndarray:
        """Evaluate B(t), enforcing shape and symmetry."""
        dim = 2 * self.n_modes
        B = np.asarray(self.B(t), dtype=float)
        if B.shape != (dim, dim):
            raise ValueError(f"B(t) must have shape ({dim}, {dim}), got {B.shape}")
        scale = max(1.0, float(np.max(np.abs(B))))
        if np.max(np.abs(B - B.T)) > 1e-10 * scale:
            raise ValueError(f"B(t) must be symmetric (t = {t})")
        return B

    def drive(self, t: float) -> np.ndarray:
        """Evaluate c(t) as a length-2N vector (zeros when no drive is set)."""
        dim = 2 * self.n_modes
        if self.c is None:
            return np.zeros(dim)
        c = np.asarray(self.c(t), dtype=float)
        if c.shape != (dim,):
            raise ValueError(f"c(t) must have shape ({dim},), got {c.shape}")
        return c


@dataclass(frozen=True)
class LadderFrame:
    """Constant complex frame (A_p, A_x) seeding the mode propagation."""

    A_p: np.ndarray
    A_x: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        A_p = np.atleast_2d(np.asarray(self.A_p, dtype=complex))
        A_x = np.atleast_2d(np.asarray(self.A_x, dtype=complex))
        if A_p.shape != A_x.shape or A_p.shape[0] != A_p.shape[1]:
            raise ValueError("A_p and A_x must be square matrices of equal shape")
        object.__setattr__(self, "A_p", A_p)
        object.__setattr__(self, "A_x", A_x)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def n_modes(self) -> int:
        return self.A_p.shape[0]


@dataclass(frozen=True)
class ModeInvariants:
    """Snapshot of the complex integrals of motion at one time."""

    t: float
    Lambda_p: np.ndarray
    Lambda_x: np.ndarray
    delta: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        Lp = np.atleast_2d(np.asarray(self.Lambda_p, dtype=complex))
        Lx = np.atleast_2d(np.asarray(self.Lambda_x, dtype=complex))
        d = np.atleast_1d(np.asarray(self.delta, dtype=complex))
        if Lp.shape != Lx.shape or Lp.shape[0] != Lp.shape[1]:
            raise ValueError("Lambda_p and Lambda_x must be square of equal shape")
        if d.shape != (Lp.shape[0],):
            raise ValueError("delta length must match the matrix dimension")
        object.__setattr__(self, "Lambda_p", Lp)
        object.__setattr__(self, "Lambda_x", Lx)
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def n_modes(self) -> int:
        return self.Lambda_p.shape[0]


@dataclass(frozen=True)
class RealSymplectic:
    """Snapshot of the real integrals of motion at one time."""

    Lambda: np.ndarray
    Delta: np.ndarray
    t: float = 0.0
    residual: float = 0.0

    def __post_init__(self):
        Lam = np.atleast_2d(np.asarray(self.Lambda, dtype=float))
        Del = np.atleast_1d(np.asarray(self.Delta, dtype=float))
        if Lam.shape[0] != Lam.shape[1] or Lam.shape[0] % 2 != 0:
            raise ValueError("Lambda must be square with even dimension")
        if Del.shape != (Lam.shape[0],):
            raise ValueError("Delta length must match Lambda")
        object.__setattr__(self, "Lambda", Lam)
        object.__setattr__(self, "Delta", Del)

    @property
    def n_modes(self) -> int:
        return self.Lambda.shape[0] // 2


@dataclass(frozen=True)
class RealSeries:
    """Sampled real-flow trajectory: one entry per accepted step."""

    times: np.ndarray
    lambdas: np.ndarray
    deltas: np.ndarray
    residuals: np.ndarray
    hbar: float = 1.0

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, k: int) -> RealSymplectic:
        return RealSymplectic(
            Lambda=self.lambdas[k],
            Delta=self.deltas[k],
            t=float(self.times[k]),
            residual=float(self.residuals[k]),
        )

    @property
    def n_modes(self) -> int:
        return self.lambdas.shape[-1] // 2

    @property
    def final(self) -> RealSymplectic:
        return self[len(self) - 1]


@dataclass(frozen=True)
class ModeSeries:
    """Sampled mode-flow trajectory with phase and branch bookkeeping.

    ``phase`` holds the accumulated drive phase phi(t); ``det_arg`` holds the
    continuously unwrapped increment of arg det Lambda_p relative to t = 0.
    """

    times: np.ndarray
    lambda_p: np.ndarray
    lambda_x: np.ndarray
    delta: np.ndarray
    phase: np.ndarray
    det_arg: np.ndarray
    residuals: np.ndarray
    hbar: float = 1.0

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, k: int) -> ModeInvariants:
        return ModeInvariants(
            t=float(self.times[k]),
            Lambda_p=self.lambda_p[k],
            Lambda_x=self.lambda_x[k],
            delta=self.delta[k],
            hbar=self.hbar,
        )

    @property
    def n_modes(self) -> int:
        return self.lambda_p.shape[-1]

    @property
    def final(self) -> ModeInvariants:
        return self[len(self) - 1]


def _step_sizes(t_end: float, dt: float) -> list[float]:
    """Split [0, t_end] into fixed steps of size dt plus one remainder step."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t_end < 0.0:
        raise ValueError("t_end must be non-negative")
    n_full = int(math.floor(t_end / dt + 1e-9))
    rem = t_end - n_full * dt
    steps = [dt] * n_full
    if rem > 1e-12 * max(dt, 1.0):
        steps.append(rem)
    return steps


def propagate_real(
    H: QuadraticHamiltonian,
    t_end: float,
    dt: float,
    *,
    residual_ceiling: float = 1e-6,
) -> RealSeries:
    """Integrate the real flow by classical fixed-step RK4.

    Parameters
    ----------
    H : QuadraticHamiltonian
    t_end : float
        Final time, >= 0.  The sample grid is 0, dt, 2 dt, ..., t_end
        (a shorter final step covers any remainder).
    dt : float
        Step size, > 0.
    residual_ceiling : float, optional
        Ceiling on the conserved-metric residual max|Lambda J Lambda^T - J|;
        exceeding it raises StepTooLarge.  Default 1e-6.

    Returns
    -------
    RealSeries
        Sampled Lambda(t), Delta(t) and the metric residual per sample.
    """
    n = H.n_modes
    dim = 2 * n
    J = symplectic_form(n)

    def rhs(t, Lam):
        B = H.coefficient(t)
        c = H.drive(t)
        return Lam @ (J @ B), Lam @ (J @ c)

    steps = _step_sizes(t_end, dt)
    K = len(steps) + 1
    times = np.zeros(K)
    lambdas = np.zeros((K, dim, dim))
    deltas = np.zeros((K, dim))
    residuals = np.zeros(K)
    Lam = np.eye(dim)
    Del = np.zeros(dim)
    lambdas[0] = Lam
    t = 0.0
    for k, h in enumerate(steps, start=1):
        k1L, k1D = rhs(t, Lam)
        k2L, k2D = rhs(t + h / 2, Lam + (h / 2) * k1L)
        k3L, k3D = rhs(t + h / 2, Lam + (h / 2) * k2L)
        k4L, k4D = rhs(t + h, Lam + h * k3L)
        Lam = Lam + (h / 6) * (k1L + 2 * k2L + 2 * k3L + k4L)
        Del = Del + (h / 6) * (k1D + 2 * k2D + 2 * k3D + k4D)
        t += h
        res = float(np.max(np.abs(Lam @ J @ Lam.T - J)))
        if res > residual_ceiling:
            raise StepTooLarge(
                f"metric residual {res:.3e} exceeds ceiling "
                f"{residual_ceiling:.3e} at t = {t:.6g}; reduce dt"
            )
        times[k] = t
        lambdas[k] = Lam
        deltas[k] = Del
        residuals[k] = res
    return RealSeries(
        times=times, lambdas=lambdas, deltas=deltas, residuals=residuals, hbar=H.hbar
    )


def _wrap_angle(a: float) -> float:
    """Map an angle increment into [-pi, pi)."""
    return (a + math.pi) % (2.0 * math.pi) - math.pi


def _mode_residual(Lp, Lx, hbar):
    """Largest violation of the two defining bilinear constraints."""
    n = Lp.shape[0]
    eye = np.eye(n)
    r1 = np.max(np.abs(Lx @ Lp.T - Lp @ Lx.T))
    r2 = np.max(np.abs(Lx @ Lp.conj().T - Lp @ Lx.conj().T + (1j / hbar) * eye))
    return float(max(r1, r2))


def propagate_modes(
    H: QuadraticHamiltonian,
    frame: LadderFrame,
    t_end: float,
    dt: float,
    *,
    residual_ceiling: float = 1e-6,
) -> ModeSeries:
    """Integrate the complex mode flow by classical fixed-step RK4.

    Starting from Lambda_p(0) = A_p, Lambda_x(0) = A_x, delta(0) = 0, the
    blockwise equations in the module docstring are advanced jointly with the
    accumulated drive phase.  The residual tracked per sample is the largest
    violation of the two defining bilinear constraints of the frame.

    Returns
    -------
    ModeSeries

    Raises
    ------
    StepTooLarge
        If the constraint residual exceeds ``residual_ceiling``.
    """
    n = H.n_modes
    if frame.n_modes != n:
        raise ValueError("frame dimension does not match the Hamiltonian")
    hbar = H.hbar

    def rhs(t, Lp, Lx, delta):
        B = H.coefficient(t)
        c = H.drive(t)
        B_pp, B_px = B[:n, :n], B[:n, n:]
        B_xp, B_xx = B[n:, :n], B[n:, n:]
        c_p, c_x = c[:n], c[n:]
        dLp = Lp @ B_xp - Lx @ B_pp
        dLx = Lp @ B_xx - Lx @ B_px
        dd = Lp @ c_x - Lx @ c_p
        dphi = float(np.imag(np.dot(dd, np.conj(delta))))
        return dLp, dLx, dd, dphi

    steps = _step_sizes(t_end, dt)
    K = len(steps) + 1
    times = np.zeros(K)
    lambda_p = np.zeros((K, n, n), dtype=complex)
    lambda_x = np.zeros((K, n, n), dtype=complex)
    delta_arr = np.zeros((K, n), dtype=complex)
    phase = np.zeros(K)
    det_arg = np.zeros(K)
    residuals = np.zeros(K)

    Lp = frame.A_p.copy()
    Lx = frame.A_x.copy()
    delta = np.zeros(n, dtype=complex)
    phi = 0.0
    lambda_p[0] = Lp
    lambda_x[0] = Lx
    residuals[0] = _mode_residual(Lp, Lx, hbar)
    prev_raw = float(np.angle(np.linalg.det(Lp)))
    theta = 0.0
    t = 0.0
    for k, h in enumerate(steps, start=1):
        k1 = rhs(t, Lp, Lx, delta)
        k2 = rhs(t + h / 2, Lp + (h / 2) * k1[0], Lx + (h / 2) * k1[1], delta + (h / 2) * k1[2])
        k3 = rhs(t + h / 2, Lp + (h / 2) * k2[0], Lx + (h / 2) * k2[1], delta + (h / 2) * k2[2])
        k4 = rhs(t + h, Lp + h * k3[0], Lx + h * k3[1], delta + h * k3[2])
        Lp = Lp + (h / 6) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        Lx = Lx + (h / 6) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        delta = delta + (h / 6) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        phi = phi + (h / 6) * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
        t += h
        res = _mode_residual(Lp, Lx, hbar)
        if res > residual_ceiling:
            raise StepTooLarge(
                f"constraint residual {res:.3e} exceeds ceiling "
                f"{residual_ceiling:.3e} at t = {t:.6g}; reduce dt"
            )
        raw = float(np.angle(np.linalg.det(Lp)))
        theta += _wrap_angle(raw - prev_raw)
        prev_raw = raw
        times[k] = t
        lambda_p[k] = Lp
        lambda_x[k] = Lx
        delta_arr[k] = delta
        phase[k] = phi
        det_arg[k] = theta
        residuals[k] = res
    return ModeSeries(
        times=times,
        lambda_p=lambda_p,
        lambda_x=lambda_x,
        delta=delta_arr,
        phase=phase,
        det_arg=det_arg,
        residuals=residuals,
        hbar=hbar,
    )


def closed_form_propagator(B_pp, B_xx, t: float) -> np.ndarray:
    """Exact flow e^{tJB} for constant block-diagonal B = diag(B_pp, B_xx).

    Requires symmetric, commuting blocks whose product has strictly positive
    spectrum (the oscillatory case).  With P = B_pp B_xx,

        e^{tJB} = [[cos(sqrt(P) t),          B_xx P^{-1/2} sin(sqrt(P) t)],
                   [-B_pp P^{-1/2} sin(sqrt(P) t),  cos(sqrt(P) t)]].

    One symmetric eigendecomposition of P evaluates all three matrix
    functions.  The result equals the Lambda produced by propagate_real for
    the same Hamiltonian at time t.

    Parameters
    ----------
    B_pp, B_xx : array_like
        Symmetric (N, N) blocks; scalars are accepted for N = 1.
    t : float

    Returns
    -------
    ndarray
        Real (2N, 2N) propagator.

    Raises
    ------
    NonCommutingBlocks
        If the blocks do not commute (no shared eigenbasis).
    NegativeSpectrum
        If B_pp B_xx has a zero or negative eigenvalue; hyperbolic and
        drifting systems must use the general integrator instead.
    """
    A = np.atleast_2d(np.asarray(B_pp, dtype=float))
    Bx = np.atleast_2d(np.asarray(B_xx, dtype=float))
    if A.shape != Bx.shape or A.shape[0] != A.shape[1]:
        raise ValueError("blocks must be square matrices of equal shape")
    scale = max(1.0, float(np.max(np.abs(A))), float(np.max(np.abs(Bx))))
    if np.max(np.abs(A - A.T)) > 1e-12 * scale or np.max(np.abs(Bx - Bx.T)) > 1e-12 * scale:
        raise ValueError("blocks must be symmetric")
    comm = np.max(np.abs(A @ Bx - Bx @ A))
    if comm > 1e-10 * scale * scale:
        raise NonCommutingBlocks(
            f"blocks do not commute (residual {float(comm):.3e}); "
            "no closed trigonometric form"
        )
    P = A @ Bx
    P = 0.5 * (P + P.T)
    lam, U = np.linalg.eigh(P)
    if np.min(lam) <= 1e-14 * max(1.0, float(np.max(np.abs(lam)))):
        raise NegativeSpectrum(
            "block product has a non-positive eigenvalue; "
            "the trigonometric closed form does not apply"
        )
    w = np.sqrt(lam)
    C = U @ np.diag(np.cos(w * t)) @ U.T
    S1 = U @ np.diag(np.sin(w * t) / w) @ U.T
    n = A.shape[0]
    out = np.zeros((2 * n, 2 * n))
    out[:n, :n] = C
    out[:n, n:] = Bx @ S1
    out[n:, :n] = -A @ S1
    out[n:, n:] = C
    return out


def default_ladder_frame(H: QuadraticHamiltonian, *, branch: str = "auto") -> LadderFrame:
    """Build a constant frame (A_p, A_x) adapted to the Hamiltonian.

    Two constructions are available.  The matched branch applies when B is
    constant and block-diagonal with commuting positive-definite blocks:

        A_p = (i / sqrt(2 hbar)) (B_pp B_xx^{-1})^{1/4},
        A_x = (1 / sqrt(2 hbar)) (B_xx B_pp^{-1})^{1/4},

    computed through the shared eigenbasis (principal fourth roots).  For a
    single mode with B = diag(1/m, m omega^2) this is the standard
    oscillator frame.  The plain branch is dimension-blind:

        A_p = (i / sqrt(2 hbar)) E_N,   A_x = (1 / sqrt(2 hbar)) E_N.

    Both satisfy the two defining bilinear constraints exactly.

    Parameters
    ----------
    H : QuadraticHamiltonian
    branch : {"auto", "matched", "plain"}, optional
        "auto" picks matched when eligible, else plain.

    Raises
    ------
    NonCommutingBlocks
        branch="matched" with non-commuting diagonal blocks.
    SingularBlock
        branch="matched" with a block that is not positive definite.
    ValueError
        branch="matched" with a time-dependent or non-block-diagonal B.
    """
    if branch not in ("auto", "matched", "plain"):
        raise ValueError("branch must be 'auto', 'matched', or 'plain'")
    n = H.n_modes
    hbar = H.hbar
    eye = np.eye(n)
    if branch == "plain":
        return LadderFrame(
            A_p=(1j / math.sqrt(2.0 * hbar)) * eye,
            A_x=(1.0 / math.sqrt(2.0 * hbar)) * eye,
            hbar=hbar,
        )
    B0 = H.coefficient(0.0)
    scale = max(1.0, float(np.max(np.abs(B0))))
    cross_ok = (
        np.max(np.abs(B0[:n, n:])) <= 1e-12 * scale
        and np.max(np.abs(B0[n:, :n])) <= 1e-12 * scale
    )
    const_ok = all(
        np.max(np.abs(H.coefficient(float(ts)) - B0)) <= 1e-12 * scale
        for ts in _CONST_SAMPLES[1:]
    )
    B_pp, B_xx = B0[:n, :n], B0[n:, n:]
    comm = float(np.max(np.abs(B_pp @ B_xx - B_xx @ B_pp)))
    comm_ok = comm <= 1e-10 * scale * scale
    ev_pp = np.linalg.eigvalsh(B_pp)
    ev_xx = np.linalg.eigvalsh(B_xx)
    pd_ok = np.min(ev_pp) > 1e-12 * scale and np.min(ev_xx) > 1e-12 * scale
    if branch == "auto":
        if not (cross_ok and const_ok and comm_ok and pd_ok):
            return default_ladder_frame(H, branch="plain")
    else:
        if not (cross_ok and const_ok):
            raise ValueError(
                "matched branch needs a constant block-diagonal coefficient matrix"
            )
        if not comm_ok:
            raise NonCommutingBlocks(
                f"diagonal blocks do not commute (residual {comm:.3e})"
            )
        if not pd_ok:
            raise SingularBlock("matched branch needs positive-definite blocks")
    Q = B_pp @ np.linalg.inv(B_xx)
    Q = 0.5 * (Q + Q.T)
    lam, U = np.linalg.eigh(Q)
    if np.min(lam) <= 0.0:
        raise SingularBlock("block ratio has a non-positive eigenvalue")
    root = U @ np.diag(lam**0.25) @ U.T
    root_inv = U @ np.diag(lam**-0.25) @ U.T
    return LadderFrame(
        A_p=(1j / math.sqrt(2.0 * hbar)) * root,
        A_x=(1.0 / math.sqrt(2.0 * hbar)) * root_inv,
        hbar=hbar,
    )


@dataclass(frozen=True)
class SymplecticReport:
    """Residual report for the defining and derived frame properties.

    ``margin_p`` and ``margin_x`` are smallest-over-largest singular value
    ratios (nonsingularity margins).  The residuals are max-norm violations:
    ``pairing_residual`` of the symmetric pairing M_x M_p^T = M_p M_x^T,
    ``commutator_residual`` of the canonical pairing M_x M_p^dagger -
    M_p M_x^dagger = -(i/hbar) E, ``hermitian_product_residual`` of
    M^T M^* being Hermitian (worst of the p and x matrices), and
    ``cross_pairing_residual`` of M_x^dagger M_p - M_x^T M_p^* = (i/hbar) E.
    """

    margin_p: float
    margin_x: float
    pairing_residual: float
    commutator_residual: float
    hermitian_product_residual: float
    cross_pairing_residual: float
    tol: float
    passed: bool


def check_symplectic_properties(obj, *, tol: float = 1e-10) -> SymplecticReport:
    """Check the frame properties of a LadderFrame or ModeInvariants.

    Parameters
    ----------
    obj : LadderFrame or ModeInvariants
        Anything carrying a matrix pair (A_p, A_x) or (Lambda_p, Lambda_x)
        plus an ``hbar`` attribute.
    tol : float, optional
        Pass threshold applied to every residual and margin.  Default 1e-10.

    Returns
    -------
    SymplecticReport
        ``passed`` is True iff both margins exceed ``tol`` and every
        residual is at most ``tol``.
    """
    if hasattr(obj, "A_p"):
        Mp, Mx = obj.A_p, obj.A_x
    elif hasattr(obj, "Lambda_p"):
        Mp, Mx = obj.Lambda_p, obj.Lambda_x
    else:
        raise TypeError("expected a LadderFrame or ModeInvariants")
    hbar = float(getattr(obj, "hbar", 1.0))
    Mp = np.atleast_2d(np.asarray(Mp, dtype=complex))
    Mx = np.atleast_2d(np.asarray(Mx, dtype=complex))
    n = Mp.shape[0]
    eye = np.eye(n)

    def margin(M):
        sv = np.linalg.svd(M, compute_uv=False)
        top = float(np.max(sv))
        return float(np.min(sv)) / top if top > 0.0 else 0.0

    pairing = float(np.max(np.abs(Mx @ Mp.T - Mp @ Mx.T)))
    commutator = float(
        np.max(np.abs(Mx @ Mp.conj().T - Mp @ Mx.conj().T + (1j / hbar) * eye))
    )
    herm_p = float(np.max(np.abs(Mp.T @ Mp.conj() - Mp.conj().T @ Mp)))
    herm_x = float(np.max(np.abs(Mx.T @ Mx.conj() - Mx.conj().T @ Mx)))
    cross = float(
        np.max(np.abs(Mx.conj().T @ Mp - Mx.T @ Mp.conj() - (1j / hbar) * eye))
    )
    m_p = margin(Mp)
    m_x = margin(Mx)
    residuals = (pairing, commutator, max(herm_p, herm_x), cross)
    passed = m_p > tol and m_x > tol and all(r <= tol for r in residuals)
    return SymplecticReport(
        margin_p=m_p,
        margin_x=m_x,
        pairing_residual=pairing,
        commutator_residual=commutator,
        hermitian_product_residual=max(herm_p, herm_x),
        cross_pairing_residual=cross,
        tol=float(tol),
        passed=passed,
    )
