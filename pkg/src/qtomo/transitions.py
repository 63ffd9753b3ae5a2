"""Transition amplitudes between mode bases and two-time state overlaps.

A linear mode transform A' = S_p A + S_x A^dagger is admissible when

    S_p S_x^T - S_x S_p^T = 0,
    S_p S_p^dagger - S_x S_x^dagger = E_N,

which also forces S_p to be nonsingular.  The number states of the old and
new mode sets are then connected by amplitudes

    c_{nm} = H_{(n,m)}^F(0) / ( sqrt(det S_p) sqrt(n! m!) ),

    F = [[ -S_x^* S_p^{-1},  -(S_p^T)^{-1} ],
         [ -S_p^{-1},         S_p^{-1} S_x  ]]

(a symmetric 2N x 2N matrix), with the multivariable Hermite polynomials of
:mod:`qtomo.hermite` evaluated at the origin.  Row normalization gives the
sum rule sum_m |H_{(n,m)}^F(0)|^2 / m! = n! |det S_p|.

The same Gaussian-integral technique yields the position-space overlap
<psi_n(t_1) | psi_m(t_2)> of number states attached to two different sets of
invariants (the bra factor conjugated).  The quadratic kernel of that
integral and its affine argument are exposed as OverlapKernel; overlap_nm
evaluates the bracket itself, again as one Hermite value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotSymplectic, OrderOverflow, SingularD, SingularLambdaP
from .hamiltonian_dynamics import ModeInvariants
from .hermite import _hermite_lattice


@dataclass(frozen=True)
class BogoliubovS:
    """Validated mode-transform pair (S_p, S_x); build via make_bogoliubov."""

    S_p: np.ndarray
    S_x: np.ndarray

    def __post_init__(self):
        S_p = np.atleast_2d(np.asarray(self.S_p, dtype=complex))
        S_x = np.atleast_2d(np.asarray(self.S_x, dtype=complex))
        if S_p.shape != S_x.shape or S_p.shape[0] != S_p.shape[1]:
            raise ValueError("S_p and S_x must be square matrices of equal shape")
        object.__setattr__(self, "S_p", S_p)
        object.__setattr__(self, "S_x", S_x)

    @property
    def n_modes(self) -> int:
        return self.S_p.shape[0]


def make_bogoliubov(S_p, S_x, *, tol: float = 1e-12) -> BogoliubovS:
    """Validate the pairing conditions and wrap the transform.

    Raises
    ------
    NotSymplectic
        If either defining condition is violated beyond ``tol`` (the failing
        residual is quoted), or S_p is singular.
    """
    S = BogoliubovS(S_p=S_p, S_x=S_x)
    Sp, Sx = S.S_p, S.S_x
    eye = np.eye(S.n_modes)
    r1 = float(np.max(np.abs(Sp @ Sx.T - Sx @ Sp.T)))
    r2 = float(np.max(np.abs(Sp @ Sp.conj().T - Sx @ Sx.conj().T - eye)))
    if r1 > tol:
        raise NotSymplectic(f"symmetric pairing violated: residual {r1:.3e}")
    if r2 > tol:
        raise NotSymplectic(f"normalization pairing violated: residual {r2:.3e}")
    sv = np.linalg.svd(Sp, compute_uv=False)
    if np.min(sv) <= 1e-12 * max(1.0, float(np.max(sv))):
        raise NotSymplectic("S_p is singular")
    return S


def squeeze_transform(theta: float) -> BogoliubovS:
    """Single-mode squeeze: S_p = cosh(theta), S_x = sinh(theta)."""
    th = float(theta)
    return make_bogoliubov([[math.cosh(th)]], [[math.sinh(th)]])


def _amplitude_parameter(S: BogoliubovS) -> np.ndarray:
    """The symmetric 2N x 2N Hermite parameter F of the transform."""
    Sp, Sx = S.S_p, S.S_x
    n = S.n_modes
    Sp_inv = np.linalg.inv(Sp)
    F = np.zeros((2 * n, 2 * n), dtype=complex)
    F[:n, :n] = -Sx.conj() @ Sp_inv
    F[:n, n:] = -np.linalg.inv(Sp.T)
    F[n:, :n] = -Sp_inv
    F[n:, n:] = Sp_inv @ Sx
    scale = max(1.0, float(np.max(np.abs(F))))
    if np.max(np.abs(F - F.T)) > 1e-10 * scale:
        raise NotSymplectic("amplitude parameter matrix failed its symmetry check")
    return 0.5 * (F + F.T)


def _as_index(n, n_modes, name):
    n = tuple(int(k) for k in np.atleast_1d(n))
    if len(n) != n_modes or any(k < 0 for k in n):
        raise ValueError(f"{name} must be {n_modes} non-negative integers")
    return n


def amplitude_cnm(S: BogoliubovS, n, m, *, max_order: int = 32) -> complex:
    """Amplitude c_{nm} connecting old state m to new state n.

    Uses the principal branch of sqrt(det S_p); probabilities and sum rules
    do not depend on that choice.

    Raises
    ------
    OrderOverflow
        If |n| + |m| exceeds ``max_order``.
    """
    N = S.n_modes
    n = _as_index(n, N, "n")
    m = _as_index(m, N, "m")
    if sum(n) + sum(m) > max_order:
        raise OrderOverflow(
            f"total order {sum(n) + sum(m)} exceeds the configured maximum {max_order}"
        )
    F = _amplitude_parameter(S)
    idx = n + m
    H = _hermite_lattice(F, np.zeros(2 * N, dtype=complex), idx)[idx]
    det_root = np.sqrt(np.linalg.det(S.S_p).astype(complex))
    norm = math.sqrt(
        math.prod(math.factorial(k) for k in n)
        * math.prod(math.factorial(k) for k in m)
    )
    return complex(H / (det_root * norm))


@dataclass(frozen=True)
class SumRuleResult:
    """Row-normalization check of the amplitude table.

    ``shell_sums`` holds the cumulative partial sum after each total-order
    shell of m; ``tail_estimate`` is the last computed shell's contribution.
    """

    target: float
    partial_sum: float
    residual: float
    tail_estimate: float
    shell_sums: np.ndarray
    shells_used: int


def sum_rule_check(S: BogoliubovS, n, max_m: int) -> SumRuleResult:
    """Accumulate (1/n!) sum_m |H_{(n,m)}^F(0)|^2 / m! toward |det S_p|.

    The sum runs over the box 0 <= m_k <= max_m shell by shell in the total
    order |m|, stopping early once ten consecutive shells each contribute
    less than 1e-14 of the running total.

    Returns
    -------
    SumRuleResult
    """
    N = S.n_modes
    n = _as_index(n, N, "n")
    max_m = int(max_m)
    if max_m < 0:
        raise ValueError("max_m must be non-negative")
    F = _amplitude_parameter(S)
    bounds = n + (max_m,) * N
    lattice = _hermite_lattice(F, np.zeros(2 * N, dtype=complex), bounds)
    Hn = lattice[n]  # indexed by the m multi-index
    n_fact = math.prod(math.factorial(k) for k in n)
    target = float(abs(np.linalg.det(S.S_p)))
    shell_terms = np.zeros(N * max_m + 1)
    for m in np.ndindex(*((max_m + 1,) * N)):
        m_fact = math.prod(math.factorial(k) for k in m)
        shell_terms[sum(m)] += float(abs(Hn[m]) ** 2) / (m_fact * n_fact)
    shell_sums = []
    total = 0.0
    quiet = 0
    used = 0
    for s, term in enumerate(shell_terms):
        total += term
        shell_sums.append(total)
        used = s + 1
        if term < 1e-14 * max(total, 1e-300):
            quiet += 1
            if quiet >= 10:
                break
        else:
            quiet = 0
    tail = float(shell_terms[used - 1])
    return SumRuleResult(
        target=target,
        partial_sum=total,
        residual=abs(total - target),
        tail_estimate=tail,
        shell_sums=np.asarray(shell_sums),
        shells_used=used,
    )


def apply_bogoliubov(S: BogoliubovS, inv: ModeInvariants) -> ModeInvariants:
    """Invariants of the transformed mode set at the same instant.

    Lambda_p' = S_p Lambda_p + S_x Lambda_p^*, likewise for Lambda_x, and
    delta' = S_p delta + S_x delta^*.
    """
    if S.n_modes != inv.n_modes:
        raise ValueError("transform dimension does not match the invariants")
    return ModeInvariants(
        t=inv.t,
        Lambda_p=S.S_p @ inv.Lambda_p + S.S_x @ inv.Lambda_p.conj(),
        Lambda_x=S.S_p @ inv.Lambda_x + S.S_x @ inv.Lambda_x.conj(),
        delta=S.S_p @ inv.delta + S.S_x @ inv.delta.conj(),
        hbar=inv.hbar,
    )


@dataclass(frozen=True)
class OverlapKernel:
    """Ingredients of the two-time overlap Gaussian integral.

    ``D`` and ``E`` are the raw two-time pairings
    D = Lambda_p^*(t2) Lambda_x^T(t1) - Lambda_x^*(t2) Lambda_p^T(t1) and
    E likewise with the conjugate transpose on the t1 factors.  ``R`` is the
    symmetric 2N x 2N Hermite parameter of the conjugated bracket and
    (u, v) the two halves of its affine argument.
    """

    D: np.ndarray
    E: np.ndarray
    R: np.ndarray
    u: np.ndarray
    v: np.ndarray


def _context_parts(state):
    """Accept ModeInvariants or any context carrying one plus its phases."""
    inv = getattr(state, "invariants", state)
    if not isinstance(inv, ModeInvariants):
        raise TypeError("expected ModeInvariants or a state context wrapping one")
    phi = float(getattr(state, "phase_integral", 0.0))
    theta = float(getattr(state, "det_lp_arg", 0.0))
    return inv, phi, theta


def _checked_inverse(M, what):
    sv = np.linalg.svd(M, compute_uv=False)
    if np.min(sv) <= 1e-12 * max(1.0, float(np.max(sv))):
        raise SingularLambdaP(f"{what} is singular; overlap form undefined")
    return np.linalg.inv(M)


def _overlap_assembly(state1, state2):
    """Kernel R, argument x~, and scalar prefactor g0 of the bracket.

    <psi_n(1)|psi_m(2)> = g0 H_{(n,m)}^R(x~) / sqrt(n! m!).
    """
    inv1, phi1, th1 = _context_parts(state1)
    inv2, phi2, th2 = _context_parts(state2)
    if inv1.n_modes != inv2.n_modes:
        raise ValueError("the two invariant sets have different mode counts")
    if abs(inv1.hbar - inv2.hbar) > 1e-12:
        raise ValueError("the two invariant sets disagree on hbar")
    N = inv1.n_modes
    hbar = inv1.hbar
    Lp1, Lx1, d1 = inv1.Lambda_p, inv1.Lambda_x, inv1.delta
    Lp2, Lx2, d2 = inv2.Lambda_p, inv2.Lambda_x, inv2.delta
    Lp1_inv = _checked_inverse(Lp1, "Lambda_p(t1)")
    Lp2_inv = _checked_inverse(Lp2, "Lambda_p(t2)")
    Dt = Lx2 @ Lp1.conj().T - Lp2 @ Lx1.conj().T
    sv = np.linalg.svd(Dt, compute_uv=False)
    if np.min(sv) <= 1e-12 * max(1.0, float(np.max(sv))):
        raise SingularD("two-time pairing matrix is singular")
    C1 = Lp1_inv @ Lx1
    C2 = Lp2_inv @ Lx2
    Gamma = (1j / hbar) * (C2 - C1.conj())
    Gamma = 0.5 * (Gamma + Gamma.T)
    lam = np.linalg.eigvals(Gamma)
    if np.any(np.real(lam) <= 0.0):
        raise SingularD("overlap Gaussian kernel is not decaying")
    det_gamma_root_inv = complex(np.prod(lam**-0.5))
    Gamma_inv = np.linalg.inv(Gamma)
    T1 = (1j / hbar) * np.linalg.inv(Lp1.conj())
    T2 = (1j / hbar) * Lp2_inv
    G1 = Lp1.conj() @ Lp1_inv
    G2 = Lp2.conj() @ Lp2_inv
    b0 = T1 @ d1.conj() - T2 @ d2
    P = np.zeros((2 * N, 2 * N), dtype=complex)
    P[:N, :N] = G1.conj() + T1.T @ Gamma_inv @ T1
    P[:N, N:] = -T1.T @ Gamma_inv @ T2
    P[N:, :N] = -T2.T @ Gamma_inv @ T1
    P[N:, N:] = G2 + T2.T @ Gamma_inv @ T2
    R = -0.5 * (P + P.T)
    q = np.concatenate(
        [
            (d1 - G1.conj() @ d1.conj()) - T1.T @ (Gamma_inv @ b0),
            (d2.conj() - G2 @ d2) + T2.T @ (Gamma_inv @ b0),
        ]
    )
    c1s = (
        0.5 * (d1.conj() @ (G1.conj() @ d1.conj()))
        - 0.5 * float(np.real(np.vdot(d1, d1)))
        - 1j * phi1
    )
    c2 = (
        0.5 * (d2 @ (G2 @ d2))
        - 0.5 * float(np.real(np.vdot(d2, d2)))
        + 1j * phi2
    )
    mag = (2.0 * math.pi * hbar * hbar) ** (-N / 4.0)
    pref1c = mag * abs(np.linalg.det(Lp1)) ** -0.5 * np.exp(0.5j * th1)
    pref2 = mag * abs(np.linalg.det(Lp2)) ** -0.5 * np.exp(-0.5j * th2)
    g0 = (
        pref1c
        * pref2
        * (2.0 * math.pi) ** (N / 2.0)
        * det_gamma_root_inv
        * np.exp(0.5 * (b0 @ (Gamma_inv @ b0)) + c1s + c2)
    )
    if not np.any(q):
        xtilde = np.zeros(2 * N, dtype=complex)
    else:
        try:
            xtilde = np.linalg.solve(R, q)
        except np.linalg.LinAlgError as exc:
            raise SingularD("overlap argument system is singular") from exc
    return R, xtilde, complex(g0), Dt


def overlap_kernel(state1, state2) -> OverlapKernel:
    """Expose the overlap integral's kernel pieces for two invariant sets.

    Accepts ModeInvariants or state contexts (phases only affect the scalar
    prefactor, not the kernel).
    """
    inv1, _, _ = _context_parts(state1)
    inv2, _, _ = _context_parts(state2)
    N = inv1.n_modes
    R, xtilde, _, _ = _overlap_assembly(state1, state2)
    Lp1, Lx1 = inv1.Lambda_p, inv1.Lambda_x
    Lp2, Lx2 = inv2.Lambda_p, inv2.Lambda_x
    D = Lp2.conj() @ Lx1.T - Lx2.conj() @ Lp1.T
    E = Lp2.conj() @ Lx1.conj().T - Lx2.conj() @ Lp1.conj().T
    return OverlapKernel(D=D, E=E, R=R, u=xtilde[:N], v=xtilde[N:])


def overlap_nm(state1, state2, n, m) -> complex:
    """Overlap <psi_n(state1) | psi_m(state2)>, bra conjugated.

    Parameters
    ----------
    state1, state2 : ModeInvariants or state context
        Bare invariants take zero drive phase and branch angle; pass a
        StateContext when the absolute phases matter (driven systems, or
        comparison against position-space integration of the wavefunctions).
    n, m : sequence of int
        Excitation multi-indices attached to state1 and state2.

    Returns
    -------
    complex
    """
    inv1, _, _ = _context_parts(state1)
    N = inv1.n_modes
    n = _as_index(n, N, "n")
    m = _as_index(m, N, "m")
    R, xtilde, g0, _ = _overlap_assembly(state1, state2)
    idx = n + m
    H = _hermite_lattice(R, xtilde, idx)[idx]
    norm = math.sqrt(
        math.prod(math.factorial(k) for k in n)
        * math.prod(math.factorial(k) for k in m)
    )
    return complex(g0 * H / norm)


def transition_probability(state1, state2, n, m) -> float:
    """|<psi_n(state1) | psi_m(state2)>|^2."""
    return float(abs(overlap_nm(state1, state2, n, m)) ** 2)
