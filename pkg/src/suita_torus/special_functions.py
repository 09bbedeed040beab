"""Nome, Jacobi theta_1 and Dedekind eta with the nome q = exp(i*pi*tau).

All q-products are truncated according to a :class:`SeriesControl`.  Fractional
powers of q (q**(1/4), q**(1/12)) use the principal branch of ``log q``.

Functions accept a scalar or an array of arguments ``z``; scalars come back as
Python ``complex``/``float``, arrays as ndarrays of the same shape.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

#: smallest accepted Im(tau); below it the products converge too slowly and a
#: modular transformation would be required.
MIN_IM_TAU = 0.05

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for every q-product and q-series."""

    max_terms: int = 200
    term_tolerance: float = 1e-16

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if not (self.term_tolerance > 0 and math.isfinite(self.term_tolerance)):
            raise DomainError(f"term_tolerance must be > 0, got {self.term_tolerance!r}")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class Nome:
    """A modulus ``tau`` in the upper half-plane together with ``q = exp(i*pi*tau)``."""

    tau: complex
    q: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if not (math.isfinite(tau.real) and math.isfinite(tau.imag)):
            raise DomainError(f"tau must be finite, got {tau!r}")
        if tau.imag <= 0:
            raise DomainError(f"Im(tau) must be positive, got tau={tau!r}")
        expected = math.exp(-math.pi * tau.imag)
        if abs(abs(self.q) - expected) > 1e-12 * expected:
            raise DomainError(f"q={self.q!r} is not exp(i*pi*tau) for tau={tau!r}")

    @property
    def im_tau(self) -> float:
        return self.tau.imag

    @property
    def log_q(self) -> complex:
        """Principal logarithm of q, computed from tau without round-tripping through q."""
        arg = math.remainder(math.pi * self.tau.real, 2.0 * math.pi)
        if arg == -math.pi:
            arg = math.pi
        return complex(-math.pi * self.tau.imag, arg)

    def power(self, p: float) -> complex:
        """Principal branch of ``q**p``."""
        return cmath.exp(p * self.log_q)


def _as_complex_scalar(x, name: str) -> complex:
    try:
        x = complex(x)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a complex number, got {x!r}") from exc
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def _as_complex_array(z, name: str = "z"):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _unwrap(arr, scalar_input: bool):
    if scalar_input:
        v = arr.item()
        return v
    return arr


def _check_finite_output(arr, what: str):
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} overflowed double precision; reduce the argument first")


def _reduce_real_period(z):
    """``z = r + m`` with integer m and ``|Re r| <= 1/2``; returns ``(r, (-1)**m)``.

    theta_1(z + m) = (-1)**m theta_1(z); reducing first keeps sin(pi z) accurate
    near the zeros at nonzero integers.
    """
    m = np.round(z.real)
    return z - m, np.where(np.mod(m, 2) == 0, 1.0, -1.0)


def nome_from_tau(tau) -> Nome:
    """Build the :class:`Nome` for ``tau``.

    Raises
    ------
    DomainError
        If ``tau`` is not finite, ``Im(tau) <= 0``, or ``Im(tau) < MIN_IM_TAU``.
    """
    if isinstance(tau, Nome):
        return tau
    tau = _as_complex_scalar(tau, "tau")
    if tau.imag <= 0:
        raise DomainError(f"Im(tau) must be positive, got tau={tau!r}")
    if tau.imag < MIN_IM_TAU:
        raise DomainError(
            f"Im(tau)={tau.imag!r} is below {MIN_IM_TAU}; modular reduction is not supported"
        )
    return Nome(tau, cmath.exp(1j * math.pi * tau))


def theta1(z, nome: Nome, ctrl: SeriesControl = DEFAULT_CONTROL):
    r"""Jacobi theta_1 from its product expansion.

    .. math:: \theta_1(z;q) = 2 q^{1/4} \sin(\pi z)
              \prod_{n\ge1} (1-q^{2n})(1 - 2\cos(2\pi z) q^{2n} + q^{4n})

    The quadratic factor is evaluated as ``(1 - q^{2n} e^{2 pi i z})(1 - q^{2n} e^{-2 pi i z})``,
    which is the same polynomial but keeps relative accuracy near the zeros
    ``z = +-n tau``.  The product stops at the first factor within
    ``ctrl.term_tolerance`` of one.
    """
    scalar = np.ndim(z) == 0
    zz, sign = _reduce_real_period(_as_complex_array(z))
    log_q = nome.log_q
    e_plus = np.exp(2j * np.pi * zz)
    e_minus = np.exp(-2j * np.pi * zz)
    prod = np.ones_like(zz)
    for n in range(1, ctrl.max_terms + 1):
        q2n = cmath.exp(2 * n * log_q)
        factor = (1.0 - q2n) * (1.0 - q2n * e_plus) * (1.0 - q2n * e_minus)
        prod = prod * factor
        if np.max(np.abs(factor - 1.0), initial=0.0) < ctrl.term_tolerance:
            break
    else:
        raise ConvergenceError(
            f"theta1 product not converged after {ctrl.max_terms} factors (|q|={abs(nome.q):.3g})"
        )
    out = 2.0 * nome.power(0.25) * sign * np.sin(np.pi * zz) * prod
    _check_finite_output(out, "theta1")
    return _unwrap(out, scalar)


def theta1_series_oracle(z, nome: Nome, ctrl: SeriesControl = DEFAULT_CONTROL):
    r"""Jacobi theta_1 from the alternating sum, independent of :func:`theta1`.

    .. math:: \theta_1(z;q) = 2 \sum_{n\ge0} (-1)^n q^{(n+1/2)^2} \sin((2n+1)\pi z)

    Terms are summed until the bound ``|q|^{(n+1/2)^2} e^{(2n+1) pi |Im z|}`` falls
    below ``ctrl.term_tolerance`` on the decreasing side of its peak.
    """
    scalar = np.ndim(z) == 0
    zz, sign = _reduce_real_period(_as_complex_array(z))
    log_q = nome.log_q
    q_quarter = nome.power(0.25)
    t = nome.im_tau
    y_max = float(np.max(np.abs(zz.imag), initial=0.0))
    total = np.zeros_like(zz)
    for n in range(ctrl.max_terms):
        coeff = q_quarter * cmath.exp(n * (n + 1) * log_q)
        term = coeff * np.sin((2 * n + 1) * np.pi * zz)
        total = total + term if n % 2 == 0 else total - term
        h = n + 0.5
        log_bound = -math.pi * t * h * h + 2.0 * math.pi * h * y_max
        if h * t >= y_max and log_bound < math.log(ctrl.term_tolerance):
            break
    else:
        raise ConvergenceError(
            f"theta1 series not converged after {ctrl.max_terms} terms (|q|={abs(nome.q):.3g})"
        )
    out = 2.0 * sign * total
    _check_finite_output(out, "theta1_series_oracle")
    return _unwrap(out, scalar)


def _euler_product(nome: Nome, ctrl: SeriesControl, power: int = 1) -> complex:
    """prod_{n>=1} (1 - q^{2n})**power."""
    log_q = nome.log_q
    prod = 1.0 + 0.0j
    for n in range(1, ctrl.max_terms + 1):
        factor = (1.0 - cmath.exp(2 * n * log_q)) ** power
        prod *= factor
        if abs(factor - 1.0) < ctrl.term_tolerance:
            return prod
    raise ConvergenceError(
        f"Euler product not converged after {ctrl.max_terms} factors (|q|={abs(nome.q):.3g})"
    )


def theta1_prime_at_zero(nome: Nome, ctrl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Derivative of theta_1 at the origin, ``2 pi q^{1/4} prod (1 - q^{2n})^3``."""
    return 2.0 * math.pi * nome.power(0.25) * _euler_product(nome, ctrl, power=3)


def dedekind_eta(tau, ctrl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Dedekind eta, ``q^{1/12} prod (1 - q^{2m})`` with ``q = exp(i pi tau)``.

    ``tau`` may also be a :class:`Nome`.
    """
    nome = nome_from_tau(tau)
    return nome.power(1.0 / 12.0) * _euler_product(nome, ctrl)


def log_abs_eta(nome: Nome, ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """``log|eta(tau)|`` summed in log space (no underflow at large Im tau)."""
    total = -math.pi * nome.im_tau / 12.0
    log_q = nome.log_q
    for n in range(1, ctrl.max_terms + 1):
        a = cmath.exp(2 * n * log_q)
        total += _log_abs_one_minus(a)
        if abs(a) < ctrl.term_tolerance:
            return total
    raise ConvergenceError(f"eta product not converged after {ctrl.max_terms} factors")


def _log_abs_one_minus(a):
    """log|1 - a| for |a| < 1, accurate when a is tiny."""
    if np.ndim(a) == 0:
        a = complex(a)
        return 0.5 * math.log1p(a.real * a.real + a.imag * a.imag - 2.0 * a.real)
    return 0.5 * np.log1p(a.real * a.real + a.imag * a.imag - 2.0 * a.real)


def _log_abs_sin_pi(z):
    """log|sin(pi z)| for an array with |Re z| <= 1/2 (exact at z = 0: -inf)."""
    shape = np.shape(z)
    z = np.atleast_1d(z)
    x, y = z.real, z.imag
    ay = np.abs(y)
    big = ay > 1.0
    out = np.empty(z.shape, dtype=float)
    with np.errstate(divide="ignore"):
        small = ~big
        xs, ys = x[small], y[small]
        out[small] = 0.5 * np.log(np.sin(np.pi * xs) ** 2 + np.sinh(np.pi * ys) ** 2)
    if np.any(big):
        xb, yb = x[big], ay[big]
        e = np.exp(-2.0 * np.pi * yb)
        out[big] = np.pi * yb - _LOG2 + 0.5 * np.log1p(e * e - 2.0 * np.cos(2.0 * np.pi * xb) * e)
    return out.reshape(shape)


def lattice_split(z, nome: Nome):
    """Split ``z = r + m + n*tau`` with integers m, n and ``r`` in the centred cell.

    The centred cell is ``{a + b*tau : a, b in [-1/2, 1/2)}``.  Returns ``(r, m, n)``.
    """
    zz = np.asarray(z, dtype=complex)
    tau = nome.tau
    n = np.floor(zz.imag / tau.imag + 0.5)
    z1 = zz - n * tau
    m = np.floor(z1.real + 0.5)
    return z1 - m, m, n


def lattice_distance(z, nome: Nome):
    """Euclidean distance from ``z`` to the nearest point of ``Z + tau Z``."""
    r, _, _ = lattice_split(z, nome)
    best = np.abs(r)
    for j in (-1, 0, 1):
        for k in (-1, 0, 1):
            if j or k:
                best = np.minimum(best, np.abs(r - j - k * nome.tau))
    return best


def log_abs_theta1(z, nome: Nome, ctrl: SeriesControl = DEFAULT_CONTROL):
    """``log|theta_1(z; q)|`` for any finite ``z``, stable at large ``|Im z|``.

    ``z`` is first moved into the centred lattice cell; the exact quasi-period
    factor ``|theta_1(r + n tau)| = |theta_1(r)| exp(pi t n^2 + 2 pi n Im r)``
    (``t = Im tau``) is then added back, so the result equals the logarithm of the
    unreduced product.  Lattice points map to ``-inf``.
    """
    scalar = np.ndim(z) == 0
    zz = _as_complex_array(z)
    r, _, n = lattice_split(zz, nome)
    t = nome.im_tau
    log_q = nome.log_q
    out = _LOG2 - 0.25 * math.pi * t + _log_abs_sin_pi(r)
    phase = 2j * np.pi * r
    for k in range(1, ctrl.max_terms + 1):
        q2k = cmath.exp(2 * k * log_q)
        # exponents combined first: e^{2 pi |Im r|} alone overflows at large Im tau
        a_plus = np.exp(2 * k * log_q + phase)
        a_minus = np.exp(2 * k * log_q - phase)
        out = out + _log_abs_one_minus(q2k) + _log_abs_one_minus(a_plus) + _log_abs_one_minus(a_minus)
        dev = abs(q2k) + max(np.max(np.abs(a_plus), initial=0.0), np.max(np.abs(a_minus), initial=0.0))
        if dev < ctrl.term_tolerance:
            break
    else:
        raise ConvergenceError(f"log|theta1| product not converged after {ctrl.max_terms} factors")
    out = out + math.pi * t * n * n + 2.0 * math.pi * n * r.imag
    return _unwrap(out, scalar)
