"""Single-mode reference systems with (near-)closed-form invariants.

Two families are covered.  The parametric oscillator
H = p^2/(2m) + m omega(t)^2 x^2 / 2 - f(t) x reduces the mode flow to the
classical complex trajectory eps(t) solving eps'' + omega(t)^2 eps = 0 with
eps(0) = 1, eps'(0) = i omega(0):

    Lambda_p(t) = (i / sqrt(2 m omega_0 hbar)) eps(t),
    Lambda_x(t) = -(i m / sqrt(2 m omega_0 hbar)) eps'(t),

with omega_0 = omega(0) frozen in all prefactors.  The Wronskian
Im(eps' eps^*) = omega(0) is conserved and doubles as an accuracy monitor.
A constant omega is detected by sampling and then eps = e^{i omega t} is
used in closed form.  Arbitrary constant frames (a_p, a_x) are assembled
from the same trajectory through

    Lambda_p = a_p Re(eps) - (a_x / (m omega_0)) Im(eps),
    Lambda_x = -a_p m Re(eps') + (a_x / omega_0) Im(eps'),

which solves the mode equations with Lambda_p(0) = a_p, Lambda_x(0) = a_x.

The charged particle in a uniform time-dependent force field
H = p^2/(2m) - F(t) x has fully closed coefficients

    Lambda_x(t) = A_x,   Lambda_p(t) = A_p - (A_x / m) t,
    delta(t) = integral_0^t (A_p - (A_x / m) tau) F(tau) dtau,

with the drive integral done by adaptive Simpson to 1e-10.

Both systems expose the specialized tomogram pieces (frame scalar Xi,
dispersion Sigma, center map alpha -> X0) for cross-checking against the
generic machinery of :mod:`qtomo.tomography`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DegenerateFrame
from .hamiltonian_dynamics import ModeInvariants
from .quantum_states import StateContext


class TomogramParts(NamedTuple):
    """Specialized single-mode tomogram pieces: Xi scalar, Sigma scalar,
    and the center map alpha -> X0."""

    xi: complex
    sigma: float
    x0: Callable[[complex], float]


@dataclass(frozen=True)
class ParametricOscillator:
    """Oscillator with time-dependent frequency and linear drive.

    Parameters
    ----------
    m : float
        Mass, > 0.
    omega : callable
        t -> frequency, must stay positive.
    f : callable, optional
        t -> linear drive strength (the c_x component); None means no drive.
    hbar : float, optional
    """

    m: float
    omega: Callable[[float], float]
    f: Optional[Callable[[float], float]] = None
    hbar: float = 1.0

    def __post_init__(self):
        if float(self.m) <= 0.0 or float(self.hbar) <= 0.0:
            raise ValueError("mass and hbar must be positive")
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "hbar", float(self.hbar))


@dataclass(frozen=True)
class ChargedParticle:
    """Free particle in a spatially uniform force field F(t).

    A_p and A_x are the constant frame scalars; the defaults
    i / sqrt(2 hbar), 1 / sqrt(2 hbar) satisfy the scalar pairing
    constraint.  They are deliberately not validated here so that breakage
    injected on purpose is reported by the property checker rather than at
    construction.
    """

    m: float
    F: Optional[Callable[[float], float]] = None
    hbar: float = 1.0
    A_p: Optional[complex] = None
    A_x: Optional[complex] = None

    def __post_init__(self):
        if float(self.m) <= 0.0 or float(self.hbar) <= 0.0:
            raise ValueError("mass and hbar must be positive")
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "hbar", float(self.hbar))
        a_p = self.A_p if self.A_p is not None else 1j / math.sqrt(2.0 * self.hbar)
        a_x = self.A_x if self.A_x is not None else 1.0 / math.sqrt(2.0 * self.hbar)
        object.__setattr__(self, "A_p", complex(a_p))
        object.__setattr__(self, "A_x", complex(a_x))


def _constant_omega(sys: ParametricOscillator, t_end: float):
    """Detect a constant frequency by sampling; returns (flag, omega(0))."""
    w0 = float(sys.omega(0.0))
    if w0 <= 0.0:
        raise ValueError("omega must be positive")
    span = max(abs(t_end), 1.0)
    for s in np.linspace(0.0, span, 17):
        if abs(float(sys.omega(float(s))) - w0) > 1e-14 * max(1.0, abs(w0)):
            return False, w0
    return True, w0


def _default_oscillator_frame(sys: ParametricOscillator, w0: float):
    a_p = 1j / math.sqrt(2.0 * sys.m * w0 * sys.hbar)
    a_x = math.sqrt(sys.m * w0 / (2.0 * sys.hbar))
    return complex(a_p), complex(a_x)


def _wrap_angle(a: float) -> float:
    return (a + math.pi) % (2.0 * math.pi) - math.pi


def _oscillator_trace(sys: ParametricOscillator, t: float, dt: float, frame):
    """March eps, delta, phi to time t; track the branch angle of Lambda_p.

    Returns (Lambda_p, Lambda_x, delta, phi, theta) at the final time, all
    scalars except theta and phi which are real.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    const, w0 = _constant_omega(sys, t)
    a_p, a_x = frame if frame is not None else _default_oscillator_frame(sys, w0)
    a_p = complex(a_p)
    a_x = complex(a_x)
    m = sys.m

    def lam_pair(e, ed):
        lp = a_p * e.real - (a_x / (m * w0)) * e.imag
        lx = -a_p * m * ed.real + (a_x / w0) * ed.imag
        return lp, lx

    def eps_rhs(tt, e, ed):
        w = float(sys.omega(float(tt)))
        return ed, -(w * w) * e

    def drive(tt):
        return float(sys.f(float(tt))) if sys.f is not None else 0.0

    n_full = int(math.floor(t / dt + 1e-9))
    rem = t - n_full * dt
    steps = [dt] * n_full
    if rem > 1e-12 * max(dt, 1.0):
        steps.append(rem)

    e, ed = 1.0 + 0j, 1j * w0
    delta = 0j
    phi = 0.0
    lp, _ = lam_pair(e, ed)
    prev_raw = float(np.angle(lp))
    theta = 0.0
    tt = 0.0
    for h in steps:
        if const:
            # exact trajectory; only delta and phi need stepping
            def rhs(s, dlt):
                ph = np.exp(1j * w0 * s)
                lp_s = a_p * ph.real - (a_x / (m * w0)) * ph.imag
                dd = lp_s * drive(s)
                return dd, float(np.imag(dd * np.conj(dlt)))

            k1 = rhs(tt, delta)
            k2 = rhs(tt + h / 2, delta + (h / 2) * k1[0])
            k3 = rhs(tt + h / 2, delta + (h / 2) * k2[0])
            k4 = rhs(tt + h, delta + h * k3[0])
            delta = delta + (h / 6) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            phi = phi + (h / 6) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            tt += h
            ph = np.exp(1j * w0 * tt)
            e, ed = ph, 1j * w0 * ph
        else:
            def rhs(s, ee, eed, dlt):
                de, ded = eps_rhs(s, ee, eed)
                lp_s = a_p * ee.real - (a_x / (m * w0)) * ee.imag
                dd = lp_s * drive(s)
                return de, ded, dd, float(np.imag(dd * np.conj(dlt)))

            k1 = rhs(tt, e, ed, delta)
            k2 = rhs(
                tt + h / 2,
                e + (h / 2) * k1[0],
                ed + (h / 2) * k1[1],
                delta + (h / 2) * k1[2],
            )
            k3 = rhs(
                tt + h / 2,
                e + (h / 2) * k2[0],
                ed + (h / 2) * k2[1],
                delta + (h / 2) * k2[2],
            )
            k4 = rhs(tt + h, e + h * k3[0], ed + h * k3[1], delta + h * k3[2])
            e = e + (h / 6) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            ed = ed + (h / 6) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            delta = delta + (h / 6) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
            phi = phi + (h / 6) * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
            tt += h
        lp, _ = lam_pair(e, ed)
        raw = float(np.angle(lp))
        theta += _wrap_angle(raw - prev_raw)
        prev_raw = raw
    lp, lx = lam_pair(e, ed)
    return lp, lx, delta, phi, theta


def oscillator_epsilon(sys: ParametricOscillator, t: float, *, dt: float = 1e-3):
    """Classical trajectory (eps, eps') at time t (exact for constant omega)."""
    const, w0 = _constant_omega(sys, t)
    if const:
        ph = np.exp(1j * w0 * t)
        return complex(ph), complex(1j * w0 * ph)
    a_p, a_x = _default_oscillator_frame(sys, w0)
    lp, lx, _, _, _ = _oscillator_trace(sys, t, dt, (a_p, a_x))
    # invert the default-frame map: Lambda_p = a_p eps, Lambda_x = -a_p m eps'
    return complex(lp / a_p), complex(-lx / (a_p * sys.m))


def oscillator_invariants(
    sys: ParametricOscillator, t: float, *, dt: float = 1e-3, frame=None
) -> ModeInvariants:
    """Mode invariants of the oscillator at time t.

    Parameters
    ----------
    sys : ParametricOscillator
    t : float
    dt : float, optional
        Step of the trajectory integrator (ignored branch-wise when omega is
        constant and there is no drive phase to accumulate).
    frame : pair of complex, optional
        Constant frame scalars (a_p, a_x); default is the standard
        oscillator frame at omega(0).
    """
    lp, lx, delta, _, _ = _oscillator_trace(sys, t, dt, frame)
    return ModeInvariants(
        t=t, Lambda_p=[[lp]], Lambda_x=[[lx]], delta=[delta], hbar=sys.hbar
    )


def oscillator_state_context(
    sys: ParametricOscillator, t: float, *, dt: float = 1e-3, frame=None
) -> StateContext:
    """StateContext (invariants plus both phases) at time t."""
    lp, lx, delta, phi, theta = _oscillator_trace(sys, t, dt, frame)
    inv = ModeInvariants(
        t=t, Lambda_p=[[lp]], Lambda_x=[[lx]], delta=[delta], hbar=sys.hbar
    )
    return StateContext(invariants=inv, phase_integral=phi, det_lp_arg=theta)


def oscillator_tomogram_parts(
    sys: ParametricOscillator, t: float, frame, *, dt: float = 1e-3
) -> TomogramParts:
    """Specialized tomogram pieces of the oscillator in its default frame.

    With mu, nu the frame coefficients and omega_0 = omega(0):

        Xi = (m eps'(t) nu + eps(t) mu) / sqrt(2 m omega_0 hbar),
        Sigma = hbar^2 |Xi|^2,
        X0(alpha) = 2 hbar Re( Xi^* (alpha - delta(t)) ).

    Raises
    ------
    DegenerateFrame
        When m eps' nu + eps mu = 0 at this instant.
    """
    mu = float(np.atleast_1d(np.asarray(frame.mu, dtype=float))[0])
    nu = float(np.atleast_1d(np.asarray(frame.nu, dtype=float))[0])
    const, w0 = _constant_omega(sys, t)
    _, _, delta, _, _ = _oscillator_trace(sys, t, dt, None)
    e, ed = oscillator_epsilon(sys, t, dt=dt)
    xi = (sys.m * ed * nu + e * mu) / math.sqrt(2.0 * sys.m * w0 * sys.hbar)
    if abs(xi) <= 1e-12:
        raise DegenerateFrame("frame scalar vanishes for this state and (mu, nu)")
    sigma = sys.hbar**2 * abs(xi) ** 2
    hbar = sys.hbar

    def x0(alpha):
        return float(2.0 * hbar * np.real(np.conj(xi) * (complex(alpha) - delta)))

    return TomogramParts(xi=complex(xi), sigma=float(sigma), x0=x0)


def _adaptive_simpson(f, a, b, tol):
    """Adaptive Simpson quadrature for a scalar (possibly complex) integrand."""
    if a == b:
        return 0j

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        fl = f(lmid)
        fr = f(rmid)
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        if depth <= 0:
            return left + right
        err = abs(left + right - whole)
        if err <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, flo, fl, fmid, left, eps / 2.0, depth - 1) + recurse(
            mid, hi, fmid, fr, fhi, right, eps / 2.0, depth - 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 48)


def particle_delta(sys: ChargedParticle, t: float, *, tol: float = 1e-10) -> complex:
    """Drive displacement integral of the charged particle at time t."""
    if sys.F is None:
        return 0j
    a_p, a_x, m = sys.A_p, sys.A_x, sys.m

    def integrand(tau):
        return (a_p - (a_x / m) * tau) * float(sys.F(float(tau)))

    return complex(_adaptive_simpson(integrand, 0.0, float(t), tol))


def particle_invariants(sys: ChargedParticle, t: float) -> ModeInvariants:
    """Closed-form invariants of the charged particle at time t."""
    lp = sys.A_p - (sys.A_x / sys.m) * t
    return ModeInvariants(
        t=t,
        Lambda_p=[[lp]],
        Lambda_x=[[sys.A_x]],
        delta=[particle_delta(sys, t)],
        hbar=sys.hbar,
    )


def particle_state_context(sys: ChargedParticle, t: float) -> StateContext:
    """StateContext of the charged particle at time t.

    The drive phase integral nests the displacement integral inside one more
    adaptive Simpson pass; the branch angle comes from a dense unwrap of the
    linear-in-time Lambda_p.
    """
    inv = particle_invariants(sys, t)
    phi = 0.0
    if sys.F is not None and t != 0.0:
        a_p, a_x, m = sys.A_p, sys.A_x, sys.m

        def phase_rate(tau):
            dd = (a_p - (a_x / m) * tau) * float(sys.F(float(tau)))
            return float(np.imag(dd * np.conj(particle_delta(sys, tau, tol=1e-11))))

        phi = float(np.real(_adaptive_simpson(phase_rate, 0.0, float(t), 1e-10)))
    taus = np.linspace(0.0, float(t), 1025)
    lp_line = sys.A_p - (sys.A_x / sys.m) * taus
    angles = np.unwrap(np.angle(lp_line))
    theta = float(angles[-1] - angles[0])
    return StateContext(invariants=inv, phase_integral=phi, det_lp_arg=theta)


def particle_tomogram_parts(sys: ChargedParticle, t: float, frame) -> TomogramParts:
    """Specialized tomogram pieces of the charged particle.

    Xi = i (A_x nu - Lambda_p(t) mu), Sigma = hbar^2 |Xi|^2, and
    X0(alpha) = 2 hbar Re( Xi^* (alpha - delta(t)) ).
    """
    mu = float(np.atleast_1d(np.asarray(frame.mu, dtype=float))[0])
    nu = float(np.atleast_1d(np.asarray(frame.nu, dtype=float))[0])
    lp = sys.A_p - (sys.A_x / sys.m) * t
    xi = 1j * (sys.A_x * nu - lp * mu)
    if abs(xi) <= 1e-12:
        raise DegenerateFrame("frame scalar vanishes for this state and (mu, nu)")
    delta = particle_delta(sys, t)
    hbar = sys.hbar

    def x0(alpha):
        return float(2.0 * hbar * np.real(np.conj(xi) * (complex(alpha) - delta)))

    return TomogramParts(xi=complex(xi), sigma=float(hbar**2 * abs(xi) ** 2), x0=x0)
