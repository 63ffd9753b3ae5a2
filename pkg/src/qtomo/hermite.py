"""Multivariable Hermite polynomials of a symmetric matrix parameter.

The family H_m^R(x) used throughout this package is defined by the Gaussian
generating function

    exp(-1/2 a^T R a + a^T R x) = sum_m H_m^R(x) a^m / m!

with complex symmetric d x d parameter matrix R, multi-index m, and the usual
conventions a^m = prod_k a_k^{m_k}, m! = prod_k m_k!.  Differentiating the
generating function with respect to a_k yields the raising recurrence

    H_{m+e_k}^R(x) = (R x)_k H_m^R(x) - sum_j R_{kj} m_j H_{m-e_j}^R(x)

which is what the evaluator below iterates.  The classical physicists'
polynomials are the d = 1, R = 2 member: H_n^{r}(y) = (r/2)^{n/2}
H_n(y sqrt(r/2)).

Values of the two-index polynomials at the origin reduce to associated
Legendre functions; that bridge and a plain Legendre recurrence live here as
well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OrderOverflow

DEFAULT_MAX_ORDER = 32


@dataclass(frozen=True)
class HermiteSpec:
    """One member of the polynomial family.

    Parameters
    ----------
    R : array_like
        Complex symmetric parameter matrix, shape (d, d).  A scalar is
        accepted for d = 1.  Symmetry is required to 1e-12 relative.
    m : sequence of int
        Multi-index of the polynomial, length d, entries >= 0.
    max_order : int, optional
        Cap on the total order |m| = sum(m).  Exceeding it raises
        OrderOverflow.  Default 32.

    Raises
    ------
    OrderOverflow
        If sum(m) > max_order.
    ValueError
        On shape mismatch, negative index entries, or an asymmetric R.
    """

    R: np.ndarray
    m: tuple[int, ...]
    max_order: int = DEFAULT_MAX_ORDER

    def __post_init__(self):
        R = np.atleast_2d(np.asarray(self.R, dtype=complex))
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise ValueError("parameter matrix must be square")
        scale = max(1.0, float(np.max(np.abs(R))))
        if np.max(np.abs(R - R.T)) > 1e-12 * scale:
            raise ValueError("parameter matrix must be symmetric")
        try:
            m = tuple(int(k) for k in np.atleast_1d(self.m))
        except (TypeError, ValueError) as exc:
            raise ValueError("multi-index must be a sequence of integers") from exc
        if len(m) != R.shape[0]:
            raise ValueError("multi-index length must match the matrix dimension")
        if any(k < 0 for k in m):
            raise ValueError("multi-index entries must be non-negative")
        if sum(m) > self.max_order:
            raise OrderOverflow(
                f"total order {sum(m)} exceeds the configured maximum {self.max_order}"
            )
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "m", m)

    @property
    def dim(self) -> int:
        return len(self.m)


def _hermite_lattice(R, y, bounds):
    """Fill the full index box up to ``bounds`` with H_m^R evaluated at ``y``.

    Parameters
    ----------
    R : ndarray
        Symmetric (d, d) complex parameter matrix.
    y : ndarray
        Evaluation points, shape (..., d).
    bounds : sequence of int
        Per-axis index maxima; the box {0..b_0} x ... x {0..b_{d-1}} is filled.

    Returns
    -------
    ndarray
        Complex array of shape (b_0+1, ..., b_{d-1}+1) + y.shape[:-1].

    One sweep in lexicographic index order suffices: every index referenced by
    the raising recurrence is componentwise smaller, hence already computed.
    """
    R = np.asarray(R, dtype=complex)
    y = np.asarray(y, dtype=complex)
    d = R.shape[0]
    pts = y.shape[:-1]
    ry = y @ R.T  # (..., k) holds (R y)_k at every point
    box = tuple(int(b) + 1 for b in bounds)
    H = np.zeros(box + pts, dtype=complex)
    H[(0,) * d] = 1.0
    for idx in np.ndindex(*box):
        if sum(idx) == 0:
            continue
        k = next(i for i, v in enumerate(idx) if v > 0)
        prev = list(idx)
        prev[k] -= 1
        prev = tuple(prev)
        acc = ry[..., k] * H[prev]
        for j in range(d):
            if prev[j] > 0:
                down = list(prev)
                down[j] -= 1
                acc = acc - R[k, j] * prev[j] * H[tuple(down)]
        H[idx] = acc
    return H


def hermite_eval(spec: HermiteSpec, x):
    """Evaluate H_m^R(x) by the raising recurrence.

    Parameters
    ----------
    spec : HermiteSpec
        Parameter matrix and multi-index.
    x : array_like
        A single point of shape (d,) or a batch of points of shape (..., d).
        For d = 1 a bare scalar (or any shape interpreted pointwise) is fine.

    Returns
    -------
    complex or ndarray
        The polynomial value, one per point.
    """
    d = spec.dim
    x = np.asarray(x, dtype=complex)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        single = x.ndim == 0
        pts = x.reshape(x.shape + (1,))
    else:
        if x.ndim == 0 or x.shape[-1] != d:
            raise ValueError(f"points must have trailing dimension {d}")
        single = x.ndim == 1
        pts = x
    H = _hermite_lattice(spec.R, pts, spec.m)
    out = H[spec.m]
    return complex(out) if single else out


def _multi_indices(d, cap):
    """Yield every multi-index of length d with total order <= cap."""
    if d == 0:
        yield ()
        return
    for head in range(cap + 1):
        for tail in _multi_indices(d - 1, cap - head):
            yield (head,) + tail


def _poly_mul(a, b, cap):
    """Multiply two multi-index coefficient dicts, dropping total order > cap."""
    out: dict[tuple[int, ...], complex] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple(i + j for i, j in zip(ka, kb))
            if sum(key) > cap:
                continue
            out[key] = out.get(key, 0j) + va * vb
    return out


def hermite_series_oracle(R, x, max_order):
    """Brute-force table of H_m^R(x) for every |m| <= max_order.

    Expands exp(-1/2 a^T R a + a^T R x) by exact truncated polynomial
    arithmetic in the auxiliary variables and reads H_m off as m! times the
    a^m coefficient.  Slow on purpose; this is the independent cross-check
    for hermite_eval, not a production evaluator.

    Parameters
    ----------
    R : array_like
        Symmetric (d, d) parameter matrix (scalar accepted for d = 1).
    x : array_like
        One evaluation point of shape (d,).
    max_order : int
        Total-order cap, at most 12.

    Returns
    -------
    dict
        Mapping multi-index tuple -> complex value, covering all |m| <= cap.
    """
    if max_order > 12:
        raise OrderOverflow("the series oracle is limited to total order 12")
    R = np.atleast_2d(np.asarray(R, dtype=complex))
    d = R.shape[0]
    x = np.asarray(x, dtype=complex).reshape(d)
    rx = R @ x
    zero = (0,) * d
    expo: dict[tuple[int, ...], complex] = {}
    for k in range(d):
        key = tuple(1 if i == k else 0 for i in range(d))
        expo[key] = expo.get(key, 0j) + rx[k]
    for j in range(d):
        for k in range(d):
            key = tuple((1 if i == j else 0) + (1 if i == k else 0) for i in range(d))
            expo[key] = expo.get(key, 0j) - 0.5 * R[j, k]
    result = {zero: 1.0 + 0j}
    power = {zero: 1.0 + 0j}
    for p in range(1, max_order + 1):
        power = _poly_mul(power, expo, max_order)
        fact = math.factorial(p)
        for key, val in power.items():
            result[key] = result.get(key, 0j) + val / fact
    table = {}
    for m in _multi_indices(d, max_order):
        weight = math.prod(math.factorial(k) for k in m)
        table[m] = result.get(m, 0j) * weight
    return table


def _double_factorial_odd(mu):
    """(2 mu - 1)!! with the empty-product convention for mu = 0."""
    return math.prod(range(1, 2 * mu, 2))


def legendre_assoc(l, mu, z):
    """Associated Legendre function P_l^mu(z), Condon-Shortley phase.

    Evaluated by the standard recurrences: the diagonal seed
    P_mu^mu = (-1)^mu (2 mu - 1)!! (1 - z^2)^{mu/2}, one off-diagonal step,
    then upward in degree via
    (l - mu + 1) P_{l+1}^mu = (2l + 1) z P_l^mu - (l + mu) P_{l-1}^mu.

    Parameters
    ----------
    l, mu : int
        Degree and order, both non-negative integers.  mu > l returns 0.
    z : float
        Argument.  |z| may exceed 1 for even mu (the recurrence continues
        the polynomial part analytically); odd mu needs |z| <= 1 for a real
        value.

    Returns
    -------
    float

    Raises
    ------
    DomainError
        For non-integer or negative degree/order, or odd mu with |z| > 1.
    """
    try:
        l_ok = float(l).is_integer()
        mu_ok = float(mu).is_integer()
    except (TypeError, ValueError):
        raise DomainError("degree and order must be integers")
    if not (l_ok and mu_ok):
        raise DomainError("degree and order must be integers")
    l = int(l)
    mu = int(mu)
    if l < 0 or mu < 0:
        raise DomainError("degree and order must be non-negative")
    if mu > l:
        return 0.0
    z = float(z)
    s = 1.0 - z * z
    if s < 0.0 and mu % 2 == 1:
        raise DomainError("odd order needs |z| <= 1 for a real value")
    pmm = float((-1) ** mu) * _double_factorial_odd(mu) * s ** (mu // 2)
    if mu % 2 == 1:
        pmm *= math.sqrt(s)
    if l == mu:
        return pmm
    p_prev = pmm
    p_curr = (2 * mu + 1) * z * pmm
    for ll in range(mu + 1, l):
        p_next = ((2 * ll + 1) * z * p_curr - (ll + mu) * p_prev) / (ll - mu + 1)
        p_prev, p_curr = p_curr, p_next
    return p_curr


def hermite2d_legendre(R, n, m):
    """Closed form for the two-index polynomial at the origin.

    For real symmetric 2 x 2 R with r11 r22 <= 0 < r12^2 - r11 r22 and
    n + m even (take n >= m; the other ordering follows by the symmetry that
    swaps the indices together with r11 and r22):

        H_{(n,m)}^R(0,0) = (-1)^{l+k} m! r11^k (-r11 r22)^{-k/2}
                           (r12^2 - r11 r22)^{(n+m)/4} P_l^k(z)

    with k = (n - m)/2, l = (n + m)/2 and z = r12 / sqrt(r12^2 - r11 r22),
    Condon-Shortley P_l^k.  Odd n + m returns exactly 0: the generating
    function is even at the origin, so those coefficients vanish (a parity
    flag rather than an error).  The direct recurrence value for comparison
    is hermite_eval(HermiteSpec(R, (n, m)), [0.0, 0.0]).

    Parameters
    ----------
    R : array_like
        Real symmetric 2 x 2 parameter matrix.
    n, m : int
        Index pair, non-negative.

    Returns
    -------
    complex

    Raises
    ------
    DomainError
        If R is not real symmetric 2 x 2, the indices are invalid, or
        (r11, r12, r22) leave the real-valued domain stated above.
    """
    R = np.asarray(R)
    if R.shape != (2, 2):
        raise DomainError("parameter matrix must be 2 x 2")
    if np.max(np.abs(np.imag(R))) > 1e-12 * max(1.0, float(np.max(np.abs(R)))):
        raise DomainError("the closed form is stated for real parameter matrices")
    R = np.real(R).astype(float)
    if abs(R[0, 1] - R[1, 0]) > 1e-12 * max(1.0, float(np.max(np.abs(R)))):
        raise DomainError("parameter matrix must be symmetric")
    for idx in (n, m):
        if not float(idx).is_integer() or idx < 0:
            raise DomainError("indices must be non-negative integers")
    n = int(n)
    m = int(m)
    if (n + m) % 2 == 1:
        return 0j
    r11, r12, r22 = R[0, 0], R[0, 1], R[1, 1]
    if n < m:
        n, m = m, n
        r11, r22 = r22, r11
    k = (n - m) // 2
    ltot = (n + m) // 2
    disc = r12 * r12 - r11 * r22
    prod = r11 * r22
    if disc <= 0.0:
        raise DomainError("r12^2 - r11 r22 must be positive")
    if prod > 0.0 or (k > 0 and prod == 0.0):
        raise DomainError("r11 r22 must be negative (or zero when n = m)")
    z = r12 / math.sqrt(disc)
    value = (
        float((-1) ** (ltot + k))
        * math.factorial(m)
        * r11**k
        * (-prod) ** (-k / 2.0)
        * disc ** ((n + m) / 4.0)
        * legendre_assoc(ltot, k, z)
    )
    return complex(value)
