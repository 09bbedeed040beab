import math

import mpmath
import numpy as np
import pytest

from suita_torus.errors import DomainError, PoleError
from suita_torus.potentials import PuncturedTorus, Torus, arakelov_green, suita_ratio_torus
from suita_torus.verification import (
    FiniteDifferenceScheme,
    RatioSample,
    SupSearchConfig,
    VerificationReport,
    asymptotic_scan_puncture,
    curvature_report_fundamental,
    degeneration_scan,
    discrete_dzdzbar,
    flux_balance_evans,
    flux_through_circle,
    green_grid_mean,
    laplacian_check_evans,
    laplacian_check_green,
    mean_log_abs_over_polygon,
    run_full_suite,
    sample_clear_points,
    sup_green,
    suite_passed,
    verify_bound_compact,
)


def mp_sup_green_tau_i():
    """On the square torus the maximum sits at the half period (1+i)/2."""
    mpmath.mp.dps = 30
    q = mpmath.exp(-mpmath.pi)
    eta = mpmath.exp(-mpmath.pi / 12) * mpmath.qp(q**2)
    z = mpmath.mpc(0.5, 0.5)
    th = mpmath.jtheta(1, mpmath.pi * z, q)
    return float(mpmath.log(abs(th / eta)) - mpmath.pi * 0.25)


@pytest.fixture
def square():
    return Torus.from_tau(1j)


class TestSchemes:
    def test_step_range(self):
        with pytest.raises(DomainError):
            FiniteDifferenceScheme(step=1e-7)
        with pytest.raises(DomainError):
            FiniteDifferenceScheme(step=0.5)
        with pytest.raises(DomainError):
            FiniteDifferenceScheme(stencil="9-point")

    def test_tolerance(self):
        assert FiniteDifferenceScheme(1e-3).tolerance == 1e-4
        assert FiniteDifferenceScheme(1e-2).tolerance == pytest.approx(5e-3)

    @pytest.mark.parametrize("kw", [dict(coarse_grid=16), dict(refinement_rounds=-1),
                                    dict(refinement_factor=1), dict(pole_exclusion_radius=-0.1)])
    def test_sup_config_validation(self, kw):
        with pytest.raises(DomainError):
            SupSearchConfig(**kw)


class TestReport:
    def test_passed_is_residual_comparison(self):
        details = [{"input": {}, "residual": r} for r in (1e-5, 3e-4, 2e-6)]
        rep = VerificationReport.build("x", 1e-4, details)
        assert rep.samples == 3 and rep.max_residual == 3e-4 and rep.passed is False
        assert VerificationReport.build("x", 3e-4, details).passed is True

    def test_nan_fails(self):
        rep = VerificationReport.build("x", 1.0, [{"input": {}, "residual": math.nan}])
        assert math.isnan(rep.max_residual) and not rep.passed

    def test_schema(self):
        rep = VerificationReport.build("x", 1.0, [])
        assert list(rep.to_dict()) == ["check_name", "samples", "max_residual", "tolerance", "passed", "details"]
        assert rep.passed and rep.samples == 0

    def test_ratio_sample_consistency(self):
        pt = PuncturedTorus.from_tau(1j, 0.0)
        s = asymptotic_scan_puncture(pt, 1.0, (0.1,))[0]
        assert isinstance(s, RatioSample)
        assert s.ratio == pytest.approx(math.pi * s.k / s.c**2, rel=1e-14)


class TestFiniteDifferences:
    def test_quadratic_exact(self):
        z = np.array([0.1 + 0.2j, -0.3 + 0.4j])
        # |z|^2 has d dbar = 1
        v = discrete_dzdzbar(lambda x: np.abs(x) ** 2, z, 1e-3)
        assert np.allclose(v, 1.0, atol=1e-7)

    def test_green_laplacian(self, square):
        rng = np.random.default_rng(0)
        pts = sample_clear_points(rng, square, 100, [0.0], 0.25)
        rep = laplacian_check_green(square, 0.0, pts)
        assert rep.passed and rep.samples == 100

    def test_second_order_convergence(self, square):
        z = np.array([0.45 + 0.4j])
        target = -math.pi / 2
        errs = [abs(float(discrete_dzdzbar(lambda x: arakelov_green(square, x, 0.0), z, h)[0]) - target)
                for h in (4e-2, 2e-2)]
        assert 3.0 <= errs[0] / errs[1] <= 5.0

    def test_constant_shift_immunity(self, square):
        z = np.array([0.4 + 0.35j])
        f = lambda x: arakelov_green(square, x, 0.0)
        a = discrete_dzdzbar(f, z, 1e-2)
        b = discrete_dzdzbar(lambda x: f(x) + 7.5, z, 1e-2)
        assert abs(a[0] - b[0]) < 1e-8

    def test_near_pole_precondition(self, square):
        with pytest.raises(DomainError):
            laplacian_check_green(square, 0.0, [5e-3 + 1j])
        pt = PuncturedTorus(square, 0.0)
        with pytest.raises(DomainError):
            laplacian_check_evans(pt, 0.5 + 0.2j, [0.5 + 0.205j])

    @pytest.mark.parametrize("tau", [1j, 0.3 + 1.2j, 3j])
    def test_evans_harmonic(self, tau):
        t = Torus.from_tau(tau)
        pt = PuncturedTorus(t, 0.0)
        w = 0.5 + 0.2 * tau
        pts = sample_clear_points(np.random.default_rng(1), t, 100, [w, 0.0], 0.25)
        assert laplacian_check_evans(pt, w, pts).passed

    def test_flux_balance(self):
        pt = PuncturedTorus.from_tau(0.3 + 1.2j, 0.0)
        rep = flux_balance_evans(pt, 0.5 + 0.4j)
        assert rep.passed and rep.samples == 2
        fluxes = [d["data"]["flux"] for d in rep.details]
        assert fluxes[0] == pytest.approx(2 * math.pi, rel=1e-3)
        assert fluxes[1] == pytest.approx(-2 * math.pi, rel=1e-3)

    def test_flux_of_log(self):
        assert flux_through_circle(lambda z: np.log(np.abs(z)), 0.0) == pytest.approx(2 * math.pi, rel=1e-8)


class TestSupGreen:
    def test_tau_i_against_mpmath(self, square):
        expected = mp_sup_green_tau_i()
        assert expected == pytest.approx(math.log(2) / 2, abs=1e-15)
        s, argmax = sup_green(square)
        assert s == pytest.approx(expected, abs=1e-12)
        assert abs(argmax - (0.5 + 0.5j)) < 1e-6

    def test_positive(self):
        for tau in (1j, 0.3 + 1.2j, 5j, 0.5 + 0.6j):
            assert sup_green(Torus.from_tau(tau))[0] > 0

    def test_grid_doubling(self):
        t = Torus.from_tau(0.3 + 1.2j)
        a = sup_green(t, SupSearchConfig(coarse_grid=128))[0]
        b = sup_green(t, SupSearchConfig(coarse_grid=256))[0]
        assert abs(a - b) < 1e-6

    def test_monotone_in_rounds(self):
        t = Torus.from_tau(0.2 + 0.9j)
        vals = [sup_green(t, SupSearchConfig(coarse_grid=64, refinement_rounds=k))[0] for k in range(5)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_argmax_symmetry(self):
        # g_0 is even, so -argmax is also a maximizer
        t = Torus.from_tau(0.3 + 1.2j)
        s, z = sup_green(t)
        assert arakelov_green(t, -z, 0.0) == pytest.approx(s, abs=1e-12)


class TestBoundCompact:
    def test_large_im_tau_holds(self):
        rep = verify_bound_compact(Torus.from_tau(5j))
        data = rep.details[0]["data"]
        assert rep.passed and data["rhs_below_one"] is True
        assert data["margin"] > 1

    def test_square_torus_violation_measured(self, square):
        # independent values: s = log(2)/2 exactly, lhs = 1 / (8 pi eta(i)^4)
        eta_i = math.gamma(0.25) / (2.0 * math.pi**0.75)
        lhs = 1 / (8 * math.pi * eta_i**4)
        rhs = 0.5
        rep = verify_bound_compact(square)
        assert not rep.passed
        assert rep.max_residual == pytest.approx((rhs - lhs) / rhs, rel=1e-9)
        assert rep.details[0]["data"]["lhs"] == pytest.approx(suita_ratio_torus(square), rel=1e-15)


class TestCurvature:
    def test_harmonic_and_discrepancy_reported(self):
        pt = PuncturedTorus.from_tau(1j, 0.0)
        rep = curvature_report_fundamental(pt, 0.4 + 0.3j)
        data = rep.details[0]["data"]
        assert rep.passed
        assert data["rhs"] == pytest.approx(-2 * math.pi)
        assert abs(data["difference"]) > 6

    def test_pole_rejected(self):
        pt = PuncturedTorus.from_tau(1j, 0.0)
        with pytest.raises(DomainError):
            curvature_report_fundamental(pt, 1e-3)


class TestScans:
    def test_puncture_scan(self):
        pt = PuncturedTorus.from_tau(1j, 0.0)
        scan = asymptotic_scan_puncture(pt, 1j, (1e-1, 1e-2, 1e-3, 1e-4))
        assert [s.r for s in scan] == [1e-1, 1e-2, 1e-3, 1e-4]
        assert abs(scan[-1].c_times_r - 1) < 1e-3
        assert 0.999 <= scan[-1].normalized_ratio <= 1.001
        errs = [abs(s.c_times_r - 1) for s in scan]
        assert all(b < a for a, b in zip(errs, errs[1:]))

    @pytest.mark.parametrize("kw,exc", [
        (dict(direction=2.0), DomainError),
        (dict(radii=(1e-2, 1e-1)), DomainError),
        (dict(radii=(1e-1, -1.0)), DomainError),
        (dict(radii=(1e-1, 1e-16)), PoleError),
    ])
    def test_puncture_scan_errors(self, kw, exc):
        pt = PuncturedTorus.from_tau(1j, 0.0)
        with pytest.raises(exc):
            asymptotic_scan_puncture(pt, **kw)

    def test_degeneration_scan(self):
        scan = degeneration_scan(0.0, 0.3, [1, 2, 5, 10, 20, 40])
        ratios = [s.ratio for s in scan]
        assert all(b < a for a, b in zip(ratios, ratios[1:]))
        assert scan[-1].c == pytest.approx(math.pi / math.sin(0.3 * math.pi), rel=1e-10)
        assert scan[-1].c_limit == pytest.approx(3.88322, abs=1e-5)

    def test_degeneration_scan_keeps_offset(self):
        a = degeneration_scan(0.0, 0.3, [2.0])[0]
        b = degeneration_scan(1.5 + 2j, 1.8 + 2j, [2.0])[0]
        assert b.ratio == pytest.approx(a.ratio, rel=1e-12)

    def test_degeneration_scan_errors(self):
        with pytest.raises(DomainError):
            degeneration_scan(0.0, 0.3, [2.0, 1.0])
        with pytest.raises(DomainError):
            degeneration_scan(0.0, 0.3, [0.01, 1.0])


class TestMeanZero:
    def test_square_average_closed_form(self):
        # mean of log|z| over [-1/2, 1/2]^2
        expected = (math.log(2) - 3 + math.pi / 2) / 2 + math.log(0.5)
        assert mean_log_abs_over_polygon([-0.5 - 0.5j, 0.5 - 0.5j, 0.5 + 0.5j, -0.5 + 0.5j]) == pytest.approx(
            expected, abs=1e-14)

    def test_skew_average_brute_force(self):
        e1, e2 = 1.0, 0.3 + 0.8j
        corners = [(-e1 - e2) / 2, (e1 - e2) / 2, (e1 + e2) / 2, (-e1 + e2) / 2]
        n = 2000
        s = (np.arange(n) + 0.5) / n - 0.5
        a, b = np.meshgrid(s, s, indexing="ij")
        brute = float(np.mean(np.log(np.abs(a * e1 + b * e2))))
        assert mean_log_abs_over_polygon(corners) == pytest.approx(brute, abs=1e-5)

    @pytest.mark.parametrize("tau", [1j, 0.3 + 1.2j, 2.5j])
    def test_green_mean(self, tau):
        assert abs(green_grid_mean(Torus.from_tau(tau), 0.0, 256)) < 5e-3

    def test_green_mean_converges(self):
        t = Torus.from_tau(0.3 + 1.2j)
        assert abs(green_grid_mean(t, 0.0, 256)) <= abs(green_grid_mean(t, 0.0, 32))


class TestSuite:
    def test_empty(self):
        assert run_full_suite(1, []) == []

    def test_deterministic(self):
        a = [r.to_dict() for r in run_full_suite(7, [2j])]
        b = [r.to_dict() for r in run_full_suite(7, [2j])]
        assert a == b

    def test_report_invariant(self):
        reports = run_full_suite(3, [0.3 + 1.2j])
        for r in reports:
            assert r.passed == (r.max_residual <= r.tolerance)
            assert r.samples == len(r.details)

    def test_only_compact_bound_fails_below_threshold(self):
        reports = run_full_suite(42, [1j])
        failed = [r.check_name for r in reports if not r.passed]
        assert failed == ["bound_compact"]
        assert not suite_passed(reports)

    def test_large_im_tau_suite_passes(self):
        assert suite_passed(run_full_suite(42, [5j]))
