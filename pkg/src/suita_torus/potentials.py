"""Green functions, potentials and metric densities on a torus and a once-punctured torus.

Densities are the coefficients of ``|dw|^2``.  The Bergman density is taken as
``1 / (2 Im tau)``, i.e. the kernel ``(Im tau)^{-1} dz ^ d(bar z)`` rewritten
against ``|dz|^2`` with the factor 2 from ``dz ^ d(bar z) = -2i dx ^ dy``.
With this normalization the Suita ratio near the puncture behaves as
``pi |w - u|^2 / (2 Im tau)``.

Log-potentials accept scalar or array evaluation points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PoleError
from .special_functions import (
    DEFAULT_CONTROL,
    Nome,
    SeriesControl,
    _as_complex_array,
    _as_complex_scalar,
    lattice_distance,
    lattice_split,
    log_abs_eta,
    log_abs_theta1,
    nome_from_tau,
)

#: reduced distance below which a logarithmic pole is considered hit
POLE_GUARD = 1e-14

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Torus:
    """The complex torus ``C / (Z + tau Z)``."""

    nome: Nome
    ctrl: SeriesControl = field(default=DEFAULT_CONTROL, compare=False)

    @classmethod
    def from_tau(cls, tau, ctrl: SeriesControl = DEFAULT_CONTROL) -> "Torus":
        return cls(nome_from_tau(tau), ctrl)

    @property
    def tau(self) -> complex:
        return self.nome.tau

    @property
    def im_tau(self) -> float:
        return self.nome.tau.imag


@dataclass(frozen=True)
class PuncturedTorus:
    """A torus with the point ``u`` removed.

    ``u`` is stored as its representative ``a + b*tau`` with ``a, b in [0, 1)``.
    """

    torus: Torus
    u: complex

    def __post_init__(self):
        u = _as_complex_scalar(self.u, "u")
        object.__setattr__(self, "u", complex(reduce_to_fundamental_domain(u, self.torus)))

    @classmethod
    def from_tau(cls, tau, u, ctrl: SeriesControl = DEFAULT_CONTROL) -> "PuncturedTorus":
        return cls(Torus.from_tau(tau, ctrl), u)

    @property
    def nome(self) -> Nome:
        return self.torus.nome


def reduce_to_fundamental_domain(z, torus: Torus):
    """Representative ``a + b*tau`` of ``z`` modulo ``Z + tau Z`` with ``a, b in [0, 1)``.

    Examples
    --------
    >>> t = Torus.from_tau(1j)
    >>> reduce_to_fundamental_domain(1.5 + 2j, t)
    (0.5+0j)
    """
    scalar = np.ndim(z) == 0
    zz = _as_complex_array(z)
    tau = torus.tau
    b = zz.imag / tau.imag
    a = zz.real - b * tau.real
    a = a - np.floor(a)
    b = b - np.floor(b)
    # floor of a value a hair below an integer can land exactly on 1.0
    a = np.where(a >= 1.0, 0.0, a)
    b = np.where(b >= 1.0, 0.0, b)
    out = a + b * tau
    return out.item() if scalar else out


def fundamental_coordinates(z, torus: Torus):
    """Real coordinates ``(a, b)`` of ``z = a + b*tau``, without reduction."""
    zz = np.asarray(z, dtype=complex)
    tau = torus.tau
    b = zz.imag / tau.imag
    return zz.real - b * tau.real, b


def _guard(diff, nome: Nome, pole: str, what: str):
    dist = lattice_distance(diff, nome)
    if np.any(dist < POLE_GUARD):
        raise PoleError(f"{what}: evaluation point within {POLE_GUARD:g} of pole {pole}", pole=pole)


def _out(arr, scalar):
    return float(arr) if scalar else arr


def arakelov_green(torus: Torus, z, w):
    r"""Arakelov-Green function of the torus with pole ``w``.

    .. math:: g_w(z) = \log\left|\frac{\theta_1(z-w; q)}{\eta(\tau)}\right|
              - \frac{\pi (\operatorname{Im}(z-w))^2}{\operatorname{Im}\tau}

    ``z - w`` is reduced to a lattice cell before evaluation; the combination is
    doubly periodic, so the value does not depend on the representative.

    Raises
    ------
    PoleError
        If ``z`` and ``w`` agree modulo the lattice to within ``POLE_GUARD``.
    """
    scalar = np.ndim(z) == 0 and np.ndim(w) == 0
    d = _as_complex_array(z, "z") - _as_complex_array(w, "w")
    nome = torus.nome
    _guard(d, nome, "w", "arakelov_green")
    r, _, _ = lattice_split(d, nome)
    val = (
        log_abs_theta1(r, nome, torus.ctrl)
        - log_abs_eta(nome, torus.ctrl)
        - math.pi * r.imag**2 / torus.im_tau
    )
    return _out(val, scalar)


def log_arakelov_metric_torus(torus: Torus) -> float:
    return _LOG_2PI + 2.0 * log_abs_eta(torus.nome, torus.ctrl)


def arakelov_metric_torus(torus: Torus) -> float:
    """Arakelov metric density ``2 pi |eta(tau)|^2`` (constant on the torus)."""
    return math.exp(log_arakelov_metric_torus(torus))


def evans_selberg(pt: PuncturedTorus, w, z):
    r"""Evans-Selberg potential on the punctured torus with pole ``w``.

    .. math:: E_w(z) = \log|\theta_1(z-w; q)| - \log|\theta_1(z-u; q)|

    The formula is taken as written: it is invariant under ``z -> z + 1`` and
    shifts by ``2 pi Im(u - w)`` under ``z -> z + tau``.

    Raises
    ------
    PoleError
        ``pole="w"`` if ``z`` hits ``w``, ``pole="u"`` if ``z`` (or ``w``) hits the
        puncture.
    """
    scalar = np.ndim(z) == 0 and np.ndim(w) == 0
    zz = _as_complex_array(z, "z")
    ww = _as_complex_array(w, "w")
    nome = pt.nome
    _guard(ww - pt.u, nome, "u", "evans_selberg: pole w sits on the puncture")
    _guard(zz - ww, nome, "w", "evans_selberg")
    _guard(zz - pt.u, nome, "u", "evans_selberg")
    ctrl = pt.torus.ctrl
    val = log_abs_theta1(zz - ww, nome, ctrl) - log_abs_theta1(zz - pt.u, nome, ctrl)
    return _out(val, scalar)


def log_fundamental_metric(pt: PuncturedTorus, w):
    """``log c_{tau,u}(w)``; harmonic in ``w`` away from the puncture."""
    scalar = np.ndim(w) == 0
    d = _as_complex_array(w, "w") - pt.u
    nome = pt.nome
    _guard(d, nome, "u", "fundamental_metric")
    ctrl = pt.torus.ctrl
    val = _LOG_2PI + 3.0 * log_abs_eta(nome, ctrl) - log_abs_theta1(d, nome, ctrl)
    return _out(val, scalar)


def fundamental_metric(pt: PuncturedTorus, w):
    """Fundamental metric density ``2 pi |eta|^3 / |theta_1(w - u)|``.

    Behaves like ``1 / |w - u|`` at the puncture.
    """
    log_c = log_fundamental_metric(pt, w)
    return np.exp(log_c) if np.ndim(log_c) else math.exp(log_c)


def bergman_density_torus(torus: Torus) -> float:
    """Bergman density ``1 / (2 Im tau)`` in the ``|dw|^2`` normalization."""
    return 1.0 / (2.0 * torus.im_tau)


def bergman_density_punctured(pt: PuncturedTorus) -> float:
    # a single puncture is removable for L^2 holomorphic 1-forms
    return bergman_density_torus(pt.torus)


def suita_ratio_punctured(pt: PuncturedTorus, w):
    """``pi k / c^2`` for the punctured torus; tends to 0 at the puncture."""
    log_c = log_fundamental_metric(pt, w)
    k = bergman_density_punctured(pt)
    if np.ndim(log_c):
        return math.pi * k * np.exp(-2.0 * log_c)
    return math.pi * k * math.exp(-2.0 * log_c)


def suita_ratio_torus(torus: Torus) -> float:
    """``pi k / c^2 = 1 / (8 pi Im(tau) |eta|^4)`` for the compact torus."""
    return math.pi * bergman_density_torus(torus) * math.exp(-2.0 * log_arakelov_metric_torus(torus))
