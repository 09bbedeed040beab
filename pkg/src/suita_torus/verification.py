"""Numerical checks of the PDEs, bounds, limits and identities.

Each check returns a :class:`VerificationReport`; :func:`run_full_suite`
drives all of them with deterministic pseudo-random samples.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PoleError
from .potentials import (
    POLE_GUARD,
    PuncturedTorus,
    Torus,
    arakelov_green,
    arakelov_metric_torus,
    bergman_density_punctured,
    bergman_density_torus,
    evans_selberg,
    fundamental_metric,
    log_fundamental_metric,
    reduce_to_fundamental_domain,
    suita_ratio_punctured,
    suita_ratio_torus,
)
from .special_functions import (
    dedekind_eta,
    lattice_distance,
    theta1,
    theta1_prime_at_zero,
    theta1_series_oracle,
)


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class FiniteDifferenceScheme:
    """5-point Laplacian with grid spacing ``step``."""

    step: float = 1e-3
    stencil: str = "5-point"

    def __post_init__(self):
        if not (1e-6 <= self.step <= 1e-1):
            raise DomainError(f"finite-difference step must lie in [1e-6, 1e-1], got {self.step!r}")
        if self.stencil != "5-point":
            raise DomainError(f"unsupported stencil {self.stencil!r}")

    @property
    def tolerance(self) -> float:
        return max(1e-4, 50.0 * self.step**2)


@dataclass(frozen=True)
class SupSearchConfig:
    coarse_grid: int = 256
    refinement_rounds: int = 3
    refinement_factor: int = 8
    pole_exclusion_radius: float = 0.0

    def __post_init__(self):
        if self.coarse_grid < 32:
            raise DomainError(f"coarse_grid must be >= 32, got {self.coarse_grid}")
        if self.refinement_rounds < 0:
            raise DomainError(f"refinement_rounds must be >= 0, got {self.refinement_rounds}")
        if self.refinement_factor < 2:
            raise DomainError(f"refinement_factor must be >= 2, got {self.refinement_factor}")
        if self.pole_exclusion_radius < 0:
            raise DomainError("pole_exclusion_radius must be >= 0")


@dataclass
class VerificationReport:
    """Outcome of one check.  ``passed`` is always ``max_residual <= tolerance``.

    ``details`` holds one record per sample: ``{"input": {...}, "residual": float}``,
    optionally with a ``"data"`` mapping of reported (not asserted) values.
    """

    check_name: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    details: list = field(default_factory=list)

    @classmethod
    def build(cls, check_name: str, tolerance: float, details: list) -> "VerificationReport":
        residuals = [d["residual"] for d in details]
        max_residual = max(residuals) if residuals else 0.0
        if any(math.isnan(r) for r in residuals):
            max_residual = math.nan
        return cls(
            check_name=check_name,
            samples=len(details),
            max_residual=float(max_residual),
            tolerance=float(tolerance),
            passed=bool(max_residual <= tolerance),
            details=details,
        )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RatioSample:
    """One evaluation of the Suita ratio ``pi k / c^2``."""

    tau: complex
    u: complex
    w: complex
    k: float
    c: float
    ratio: float


@dataclass(frozen=True)
class PunctureSample(RatioSample):
    """A :class:`RatioSample` at distance ``r`` from the puncture."""

    r: float = math.nan

    @property
    def c_times_r(self) -> float:
        return self.c * self.r

    @property
    def normalized_ratio(self) -> float:
        """ratio / (pi r^2 / (2 Im tau)); tends to 1 at the puncture."""
        return self.ratio / (math.pi * self.r**2 / (2.0 * self.tau.imag))


@dataclass(frozen=True)
class DegenerationSample(RatioSample):
    """A punctured-torus sample together with the compact-torus ratio at the same tau."""

    ratio_torus: float = math.nan
    c_limit: float = math.nan


def cfmt(z: complex) -> str:
    """Complex number as a round-trip text literal ``a+bi``."""
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _record(residual, data=None, **inputs) -> dict:
    rec = {
        "input": {k: (cfmt(v) if isinstance(v, complex) else v) for k, v in inputs.items()},
        "residual": float(residual),
    }
    if data:
        rec["data"] = {k: (cfmt(v) if isinstance(v, complex) else float(v) if isinstance(v, (float, np.floating)) else v)
                       for k, v in data.items()}
    return rec


# ---------------------------------------------------------------------------
# finite differences


def discrete_dzdzbar(f: Callable, z, step: float):
    """``d^2 f / dz d(bar z)`` from the 5-point Laplacian, i.e. ``Delta_h f / 4``."""
    z = np.asarray(z, dtype=complex)
    h = step
    lap = f(z + h) + f(z - h) + f(z + 1j * h) + f(z - 1j * h) - 4.0 * f(z)
    return lap / (4.0 * h * h)


def _require_clearance(points, poles, nome, min_dist, what):
    pts = np.asarray(points, dtype=complex)
    for name, p in poles.items():
        d = lattice_distance(pts - p, nome)
        if np.any(d <= min_dist):
            raise DomainError(f"{what}: a sample lies within {min_dist:g} of pole {name}")


def laplacian_check_green(torus: Torus, w, sample_points: Sequence[complex],
                          scheme: FiniteDifferenceScheme = FiniteDifferenceScheme()) -> VerificationReport:
    """Away from the pole, ``d^2 g / dz d(bar z) = -pi / (2 Im tau)``."""
    pts = np.asarray(sample_points, dtype=complex)
    _require_clearance(pts, {"w": w}, torus.nome, 10 * scheme.step, "laplacian_check_green")
    target = -math.pi / (2.0 * torus.im_tau)
    if pts.size == 0:
        return VerificationReport.build("green_laplacian", scheme.tolerance, [])
    vals = discrete_dzdzbar(lambda z: arakelov_green(torus, z, w), pts, scheme.step)
    details = [_record(abs(v - target), z=complex(z), tau=torus.tau) for z, v in zip(pts, vals)]
    return VerificationReport.build("green_laplacian", scheme.tolerance, details)


def laplacian_check_evans(pt: PuncturedTorus, w, sample_points: Sequence[complex],
                          scheme: FiniteDifferenceScheme = FiniteDifferenceScheme()) -> VerificationReport:
    """The Evans-Selberg potential is harmonic away from ``w`` and ``u``."""
    pts = np.asarray(sample_points, dtype=complex)
    _require_clearance(pts, {"w": w, "u": pt.u}, pt.nome, 10 * scheme.step, "laplacian_check_evans")
    if pts.size == 0:
        return VerificationReport.build("evans_laplacian", scheme.tolerance, [])
    vals = discrete_dzdzbar(lambda z: evans_selberg(pt, w, z), pts, scheme.step)
    details = [_record(abs(v), z=complex(z), tau=pt.torus.tau) for z, v in zip(pts, vals)]
    return VerificationReport.build("evans_laplacian", scheme.tolerance, details)


def flux_through_circle(f: Callable, center: complex, radius: float = 0.05, n_points: int = 720,
                        dr: float = 1e-6) -> float:
    """Outward flux of ``grad f`` through a circle, trapezoid rule in the angle."""
    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    e = np.exp(1j * theta)
    d_normal = (f(center + (radius + dr) * e) - f(center + (radius - dr) * e)) / (2.0 * dr)
    return float(np.sum(d_normal) * radius * 2.0 * np.pi / n_points)


def flux_balance_evans(pt: PuncturedTorus, w, radius: float = 0.05, n_points: int = 720,
                       tolerance: float = 0.01) -> VerificationReport:
    """Flux of ``grad E`` is ``+2 pi`` around ``w`` and ``-2 pi`` around ``u``."""
    f = lambda z: evans_selberg(pt, w, z)
    details = []
    for name, center, expected in (("w", complex(w), 2 * math.pi), ("u", pt.u, -2 * math.pi)):
        flux = flux_through_circle(f, center, radius, n_points)
        details.append(_record(abs(flux / expected - 1.0), data={"flux": flux, "expected": expected},
                               pole=name, center=center, radius=radius))
    return VerificationReport.build("evans_flux_balance", tolerance, details)


# ---------------------------------------------------------------------------
# sup search and the compact bound


def sup_green(torus: Torus, config: SupSearchConfig = SupSearchConfig()):
    """Maximum of ``g_0`` over the torus by grid search with local zooming.

    The Green function depends on ``z - w`` only, so the supremum over pairs is
    the supremum of ``g_0(z)``.  Returns ``(s, argmax)`` with ``argmax`` reduced
    to the fundamental domain.
    """
    tau = torus.tau
    n = config.coarse_grid

    def values(a, b):
        z = a + b * tau
        out = np.full(z.shape, -np.inf)
        ok = lattice_distance(z, torus.nome) > max(config.pole_exclusion_radius, POLE_GUARD)
        out[ok] = arakelov_green(torus, z[ok], 0.0)
        return out

    a, b = np.meshgrid(np.arange(n) / n, np.arange(n) / n, indexing="ij")
    g = values(a, b)
    idx = np.unravel_index(int(np.argmax(g)), g.shape)
    best_a, best_b, best = float(a[idx]), float(b[idx]), float(g[idx])
    spacing = 1.0 / n
    f = config.refinement_factor
    offsets = np.arange(-f, f + 1) / f
    for _ in range(config.refinement_rounds):
        la, lb = np.meshgrid(best_a + spacing * offsets, best_b + spacing * offsets, indexing="ij")
        lg = values(la, lb)
        idx = np.unravel_index(int(np.argmax(lg)), lg.shape)
        if lg[idx] > best:
            best_a, best_b, best = float(la[idx]), float(lb[idx]), float(lg[idx])
        spacing /= f
    argmax = reduce_to_fundamental_domain(best_a + best_b * tau, torus)
    return best, complex(argmax)


def verify_bound_compact(torus: Torus, config: SupSearchConfig = SupSearchConfig()) -> VerificationReport:
    """Check ``pi k / c^2 >= exp(-2 s)`` with ``s = sup G`` on the torus.

    Passes iff ``lhs >= rhs * (1 - 1e-9)``.  The record also carries ``s``,
    ``rhs < 1`` and the margin ``lhs / rhs``.
    """
    s, argmax = sup_green(torus, config)
    lhs = suita_ratio_torus(torus)
    rhs = math.exp(-2.0 * s)
    residual = max(0.0, (rhs - lhs) / rhs)
    rec = _record(residual, tau=torus.tau,
                  data={"lhs": lhs, "rhs": rhs, "sup_green": s, "argmax": argmax,
                        "margin": lhs / rhs, "rhs_below_one": rhs < 1.0})
    return VerificationReport.build("bound_compact", 1e-9, [rec])


# ---------------------------------------------------------------------------
# curvature and scans


def curvature_report_fundamental(pt: PuncturedTorus, w,
                                 scheme: FiniteDifferenceScheme = FiniteDifferenceScheme()) -> VerificationReport:
    """Compare ``-4 d dbar log c`` with ``-4 pi k`` for the fundamental metric.

    Only the harmonicity ``|lhs| <= 1e-3`` is asserted; ``rhs`` and the
    difference are reported in ``details[0]["data"]``.
    """
    w = complex(w)
    _require_clearance([w], {"u": pt.u}, pt.nome, 10 * scheme.step, "curvature_report_fundamental")
    lhs = -4.0 * float(discrete_dzdzbar(lambda x: log_fundamental_metric(pt, x), w, scheme.step))
    rhs = -4.0 * math.pi * bergman_density_punctured(pt)
    rec = _record(abs(lhs), w=w, tau=pt.torus.tau, u=pt.u,
                  data={"lhs": lhs, "rhs": rhs, "difference": lhs - rhs, "step": scheme.step})
    return VerificationReport.build("curvature_fundamental", 1e-3, [rec])


def asymptotic_scan_puncture(pt: PuncturedTorus, direction: complex = 1.0,
                             radii: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4)) -> list:
    """Sample ``w = u + r * direction`` for each radius."""
    direction = complex(direction)
    if abs(abs(direction) - 1.0) > 1e-12:
        raise DomainError(f"direction must have unit modulus, got {direction!r}")
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise DomainError("radii must be positive")
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise DomainError("radii must be strictly decreasing")
    if any(r < POLE_GUARD for r in radii):
        raise PoleError(f"radius below pole guard {POLE_GUARD:g}", pole="u")
    k = bergman_density_punctured(pt)
    out = []
    for r in radii:
        w = pt.u + r * direction
        c = float(fundamental_metric(pt, w))
        out.append(PunctureSample(tau=pt.torus.tau, u=pt.u, w=w, k=k, c=c,
                                  ratio=float(suita_ratio_punctured(pt, w)), r=r))
    return out


def degeneration_scan(u, w, im_tau_values: Sequence[float]) -> list:
    """Samples along ``tau = i t``: punctured ratio, torus ratio and the metric's limit."""
    ts = [float(t) for t in im_tau_values]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise DomainError("im_tau_values must be strictly increasing")
    if any(t < 0.05 for t in ts):
        raise DomainError("im_tau_values must be >= 0.05")
    u, w = complex(u), complex(w)
    out = []
    for t in ts:
        pt = PuncturedTorus.from_tau(complex(0.0, t), u)
        # keep the caller's offset w - u when u is moved to its reduced representative
        ww = w + (pt.u - u)
        k = bergman_density_punctured(pt)
        c = float(fundamental_metric(pt, ww))
        out.append(DegenerationSample(
            tau=pt.torus.tau, u=pt.u, w=ww, k=k, c=c,
            ratio=float(suita_ratio_punctured(pt, ww)),
            ratio_torus=suita_ratio_torus(pt.torus),
            c_limit=math.pi / abs(np.sin(np.pi * (w - u))),
        ))
    return out


# ---------------------------------------------------------------------------
# the suite


def sample_clear_points(rng: np.random.Generator, torus: Torus, n: int, poles: Sequence[complex],
                        clearance: float) -> np.ndarray:
    """``n`` uniform points of the fundamental domain at lattice distance > ``clearance`` from each pole."""
    pts = []
    while len(pts) < n:
        a, b = rng.random(2)
        z = complex(a + b * torus.tau)
        if all(lattice_distance(z - complex(p), torus.nome) > clearance for p in poles):
            pts.append(z)
    return np.array(pts)


# 5-point truncation error of log|z - p| is about step^2 / (4 d^4); a clearance
# of 0.25 keeps it below 1e-4 at step 1e-3.
FD_CLEARANCE = 0.25


def _fd_calibration(scheme: FiniteDifferenceScheme, rng) -> VerificationReport:
    pts = rng.uniform(-0.5, 0.5, 20) + 1j * rng.uniform(-0.5, 0.5, 20)
    vals = discrete_dzdzbar(lambda z: (z * z).real, pts, scheme.step)
    return VerificationReport.build("fd_calibration", 1e-10,
                                    [_record(abs(v), z=complex(z)) for z, v in zip(pts, vals)])


def _theta_reports(torus: Torus, rng, n: int = 200) -> list:
    nome = torus.nome
    z = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    th = theta1(z, nome)
    scale = np.maximum(1.0, np.abs(th))
    reps = []

    series = theta1_series_oracle(z, nome)
    rel = np.abs(th - series) / np.abs(series)
    reps.append(VerificationReport.build(
        "theta1_product_vs_series", 1e-12,
        [_record(r, z=complex(zz), tau=torus.tau) for zz, r in zip(z, rel)]))

    odd = np.abs(theta1(-z, nome) + th) / scale
    reps.append(VerificationReport.build(
        "theta1_oddness", 1e-12, [_record(r, z=complex(zz), tau=torus.tau) for zz, r in zip(z, odd)]))

    qp1 = np.abs(theta1(z + 1, nome) + th) / np.abs(th)
    reps.append(VerificationReport.build(
        "theta1_quasi_period_1", 1e-11, [_record(r, z=complex(zz), tau=torus.tau) for zz, r in zip(z, qp1)]))

    if torus.im_tau >= 0.5:
        expected = -np.exp(-nome.log_q) * np.exp(-2j * np.pi * z) * th
        qpt = np.abs(theta1(z + torus.tau, nome) - expected) / np.abs(expected)
        reps.append(VerificationReport.build(
            "theta1_quasi_period_tau", 1e-10,
            [_record(r, z=complex(zz), tau=torus.tau) for zz, r in zip(z, qpt)]))

    eta = dedekind_eta(nome)
    tp = theta1_prime_at_zero(nome)
    rel = abs(tp - 2 * math.pi * eta**3) / abs(tp)
    reps.append(VerificationReport.build(
        "theta1_prime_identity", 1e-12,
        [_record(rel, tau=torus.tau, data={"theta1_prime": tp, "eta": eta, "abs_eta": abs(eta)})]))
    return reps


def _green_reports(torus: Torus, rng, scheme) -> list:
    tau = torus.tau
    reps = []
    z = np.array([complex(a + b * tau) for a, b in rng.random((200, 2))])
    w = np.array([complex(a + b * tau) for a, b in rng.random((200, 2))])
    keep = lattice_distance(z - w, torus.nome) > 1e-6
    z, w = z[keep], w[keep]
    gzw = arakelov_green(torus, z, w)
    sym = np.abs(gzw - arakelov_green(torus, w, z))
    reps.append(VerificationReport.build(
        "green_symmetry", 1e-12, [_record(r, z=complex(a), w=complex(b)) for a, b, r in zip(z, w, sym)]))

    shifts = np.maximum.reduce([
        np.abs(arakelov_green(torus, z + 1, w) - gzw),
        np.abs(arakelov_green(torus, z + tau, w) - gzw),
        np.abs(arakelov_green(torus, z, w + 1) - gzw),
        np.abs(arakelov_green(torus, z, w + tau) - gzw),
    ])
    reps.append(VerificationReport.build(
        "green_lattice_invariance", 1e-10,
        [_record(r, z=complex(a), w=complex(b)) for a, b, r in zip(z, w, shifts)]))

    pole = 0.0
    pts = sample_clear_points(rng, torus, 100, [pole], FD_CLEARANCE)
    reps.append(laplacian_check_green(torus, pole, pts, scheme))

    mean = green_grid_mean(torus, 0.0, 256)
    reps.append(VerificationReport.build(
        "green_mean_zero", 5e-3, [_record(abs(mean), tau=tau, grid=256, data={"mean": mean})]))

    h = 1e-6
    c = arakelov_metric_torus(torus)
    est = math.exp(arakelov_green(torus, h, 0.0) - math.log(h))
    reps.append(VerificationReport.build(
        "arakelov_metric_limit", 1e-6,
        [_record(abs(est / c - 1.0), tau=tau, offset=h, data={"limit_estimate": est, "closed_form": c})]))
    return reps


def fundamental_metric_limit_estimate(pt: PuncturedTorus, w, h: float = 1e-6) -> float:
    """Two-sided estimate of ``exp lim (E_w(z) - log|z - w|)`` with ``z = w +- h``."""
    w = complex(w)
    e_plus = evans_selberg(pt, w, w + h) - math.log(h)
    e_minus = evans_selberg(pt, w, w - h) - math.log(h)
    return math.exp(0.5 * (e_plus + e_minus))


def _evans_reports(torus: Torus, rng, scheme) -> list:
    tau = torus.tau
    pt = PuncturedTorus(torus, 0.0)
    w = complex(0.5 + 0.2 * tau)
    reps = []
    z = sample_clear_points(rng, torus, 100, [w, pt.u], 1e-3)
    e = evans_selberg(pt, w, z)
    quasi = 2 * math.pi * (pt.u - w).imag
    res = np.maximum(np.abs(evans_selberg(pt, w, z + 1) - e),
                     np.abs(evans_selberg(pt, w, z + tau) - e - quasi))
    reps.append(VerificationReport.build(
        "evans_quasi_periods", 1e-9,
        [_record(r, z=complex(a), data={"tau_quasi_period": quasi}) for a, r in zip(z, res)]))

    pts = sample_clear_points(rng, torus, 100, [w, pt.u], FD_CLEARANCE)
    reps.append(laplacian_check_evans(pt, w, pts, scheme))
    reps.append(flux_balance_evans(pt, w))

    c = float(fundamental_metric(pt, w))
    est = fundamental_metric_limit_estimate(pt, w)
    reps.append(VerificationReport.build(
        "fundamental_metric_limit", 1e-6,
        [_record(abs(est / c - 1.0), tau=tau, w=w, offset=1e-6,
                 data={"limit_estimate": est, "closed_form": c})]))

    reps.append(curvature_report_fundamental(pt, complex(0.4 + 0.3 * tau), scheme))
    return reps


def _puncture_reports(torus: Torus) -> list:
    pt = PuncturedTorus(torus, 0.0)
    recs_c, recs_ratio, limits = [], [], {}
    for direction in (1.0 + 0j, 1j):
        scan = asymptotic_scan_puncture(pt, direction, (1e-1, 1e-2, 1e-3, 1e-4))
        last = scan[-1]
        limits[direction] = last
        recs_c.append(_record(abs(last.c_times_r - 1.0), direction=direction, r=last.r,
                              data={"c_times_r": [s.c_times_r for s in scan]}))
        recs_ratio.append(_record(abs(last.normalized_ratio - 1.0), direction=direction, r=last.r,
                                  data={"normalized_ratio": [s.normalized_ratio for s in scan]}))
    a, b = limits[1.0 + 0j], limits[1j]
    indep = max(abs(a.c_times_r - b.c_times_r), abs(a.normalized_ratio - b.normalized_ratio))
    return [
        VerificationReport.build("puncture_metric_limit", 1e-3, recs_c),
        VerificationReport.build("puncture_ratio_limit", 1e-3, recs_ratio),
        VerificationReport.build("puncture_direction_independence", 1e-6,
                                 [_record(indep, tau=torus.tau, r=a.r)]),
    ]


DEGENERATION_T = (1.0, 2.0, 5.0, 10.0, 20.0, 40.0)


def _degeneration_reports(u=0.0, w=0.3, ts=DEGENERATION_T) -> list:
    scan = degeneration_scan(u, w, ts)
    ratios = [s.ratio for s in scan]
    torus_ratios = [s.ratio_torus for s in scan]
    dec = sum(1 for x, y in zip(ratios, ratios[1:]) if not y < x)
    inc = sum(1 for x, y in zip(torus_ratios, torus_ratios[1:]) if not y > x)
    last = scan[-1]
    t_last = last.tau.imag
    limit = abs(np.sin(np.pi * (complex(w) - complex(u)))) ** 2 / (2.0 * t_last * math.pi)
    return [
        VerificationReport.build("degeneration_monotone", 0.0, [
            _record(dec, data={"series": "ratio_punctured", "values": ratios}),
            _record(inc, data={"series": "ratio_torus", "values": torus_ratios}),
        ]),
        VerificationReport.build("degeneration_ratio_limit", 0.05, [
            _record(abs(last.ratio / limit - 1.0), im_tau=t_last, data={"ratio": last.ratio, "limit": limit}),
        ]),
        VerificationReport.build("degeneration_metric_limit", 1e-10, [
            _record(abs(last.c / last.c_limit - 1.0), im_tau=t_last, data={"c": last.c, "c_limit": last.c_limit}),
        ]),
        VerificationReport.build("torus_ratio_growth", 1.0, [
            _record(100.0 * torus_ratios[0] / torus_ratios[-1],
                    data={"growth_factor": torus_ratios[-1] / torus_ratios[0]}),
        ]),
    ]


def run_full_suite(seed: int, torus_samples: Sequence[complex],
                   scheme: FiniteDifferenceScheme = FiniteDifferenceScheme(),
                   sup_config: SupSearchConfig = SupSearchConfig()) -> list:
    """Run every check for each sampled tau; deterministic in ``(seed, torus_samples)``.

    Failures are recorded in the reports, never raised.  An empty sample list
    gives an empty report list.
    """
    taus = [complex(t) for t in torus_samples]
    if not taus:
        return []
    rng = np.random.default_rng(seed)
    reports = [_fd_calibration(scheme, rng)]
    for tau in taus:
        torus = Torus.from_tau(tau)
        reports.extend(_theta_reports(torus, rng))
        reports.extend(_green_reports(torus, rng, scheme))
        reports.extend(_evans_reports(torus, rng, scheme))
        reports.extend(_puncture_reports(torus))
        reports.append(verify_bound_compact(torus, sup_config))
    reports.extend(_degeneration_reports())
    return reports


def suite_passed(reports: Sequence[VerificationReport]) -> bool:
    return all(r.passed for r in reports)


# ---------------------------------------------------------------------------
# mean-zero normalization


def _integral_log_abs_segment(p1: complex, p2: complex) -> float:
    """Integral over s in [0, 1] of log|p1 + s (p2 - p1)|."""
    d = p2 - p1
    dd = abs(d)
    # |p1 + s d|^2 = dd^2 ((s - s0)^2 + c^2)
    s0 = -(p1 * d.conjugate()).real / (dd * dd)
    c = abs((p1.conjugate() * d).imag) / (dd * dd)

    def prim(x):
        # antiderivative of log(x^2 + c^2)
        if c == 0.0:
            return x * math.log(x * x) - 2 * x if x != 0 else 0.0
        return x * math.log(x * x + c * c) - 2 * x + 2 * c * math.atan(x / c)

    return math.log(dd) + 0.5 * (prim(1.0 - s0) - prim(-s0))


def mean_log_abs_over_polygon(vertices: Sequence[complex]) -> float:
    """Average of ``log|z|`` over a convex polygon containing the origin.

    Fans the polygon into triangles ``(0, p_i, p_{i+1})``; on each,
    ``int log r dA = (1/2) cross(p_i, d) int_0^1 (log|p_i + s d| - 1/2) ds``.
    """
    total, area = 0.0, 0.0
    n = len(vertices)
    for i in range(n):
        p1, p2 = complex(vertices[i]), complex(vertices[(i + 1) % n])
        cross = (p1.conjugate() * (p2 - p1)).imag
        total += 0.5 * cross * (_integral_log_abs_segment(p1, p2) - 0.5)
        area += 0.5 * cross
    return total / area


def green_grid_mean(torus: Torus, w=0.0, n: int = 256) -> float:
    """Average of ``g_w`` over an ``n x n`` grid of cell centres covering the torus.

    The grid is aligned so that ``w`` is the centre of one cell.  That cell's
    value is replaced by its exact cell average: the mean of ``log|z - w|`` over
    the cell plus the regular part ``log c`` of ``g_w`` at the pole.
    """
    tau = torus.tau
    j = np.arange(n) / n
    a, b = np.meshgrid(j, j, indexing="ij")
    z = complex(w) + a + b * tau
    vals = np.empty(z.shape)
    mask = np.ones(z.shape, dtype=bool)
    mask[0, 0] = False
    vals[mask] = arakelov_green(torus, z[mask], w)
    e1, e2 = 1.0 / n, tau / n
    corners = [(-e1 - e2) / 2, (e1 - e2) / 2, (e1 + e2) / 2, (-e1 + e2) / 2]
    vals[0, 0] = mean_log_abs_over_polygon(corners) + math.log(arakelov_metric_torus(torus))
    return float(vals.mean())
