import math

import numpy as np
import pytest
from scipy import integrate

from sschain.core.exceptions import (
    BudgetExhaustedError,
    GammaOverflowError,
    InadmissibleExponentError,
    InvalidParametersError,
    OutOfDomainError,
    SingularPointError,
)
from sschain.core.params import ChainParams, ToleranceBudget
from sschain.engine.continuum import (
    ContinuumParams,
    SampledFunction,
    constant_C,
    continuum_constants,
    continuum_laplacian,
    continuum_transform,
    gamma_fn,
    kernel_g,
    kernel_laplacian,
    longwave_frequency,
    longwave_omega_sq,
    oscillator_density,
    rl_fractional_integral,
)
from sschain.engine.fields import EvaluableField, constant, cosine, gaussian, lorentzian
from sschain.engine.selfsim_ops import selfsim_laplacian
from sschain.engine.wm_dispersion import omega_sq


def closed_form_C(delta: float) -> float:
    if delta == 1.0:
        return math.pi
    return 2.0 * math.gamma(2.0 - delta) * math.cos(math.pi * delta / 2.0) / (delta * (1.0 - delta))


def power_bump() -> EvaluableField:
    return EvaluableField(
        eval=lambda t: np.where(t > 0.0, t * t * np.exp(-np.abs(t)), 0.0),
        decay_beta=-4.0,
        name="power_bump",
    )


class TestGamma:
    @pytest.mark.parametrize("z,expected", [(5.0, 24.0), (1.0, 1.0), (0.5, math.sqrt(math.pi))])
    def test_values(self, z, expected):
        assert gamma_fn(z) == pytest.approx(expected, rel=1e-12)

    def test_factorial_range(self):
        assert gamma_fn(170.0) == pytest.approx(math.factorial(169), rel=1e-12)

    @pytest.mark.parametrize("z", [0.0, -1.5, float("nan")])
    def test_out_of_domain(self, z):
        with pytest.raises(OutOfDomainError):
            gamma_fn(z)

    def test_overflow(self):
        with pytest.raises(GammaOverflowError):
            gamma_fn(180.0)


class TestConstantC:
    @pytest.mark.parametrize("delta", [0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9])
    def test_matches_closed_form(self, tol, delta):
        assert constant_C(delta, tol) == pytest.approx(closed_form_C(delta), rel=1e-6)

    def test_unit_delta_is_pi(self, tol):
        assert constant_C(1.0, tol) == pytest.approx(math.pi, rel=1e-6)

    def test_closed_form_against_plain_quadrature(self):
        delta = 1.5
        near, _ = integrate.quad(
            lambda t: 2.0 * math.sin(0.5 * t) ** 2 / t ** (1.0 + delta), 0.0, 1.0, epsabs=0.0, epsrel=1e-12
        )
        far, _ = integrate.quad(lambda t: t ** (-1.0 - delta), 1.0, np.inf, weight="cos", wvar=1.0)
        reference = 2.0 * (near + 1.0 / delta - far)
        assert closed_form_C(delta) == pytest.approx(reference, rel=1e-7)

    @pytest.mark.parametrize("delta", [0.0, 2.0, -0.5])
    def test_out_of_domain(self, tol, delta):
        with pytest.raises(OutOfDomainError):
            constant_C(delta, tol)

    def test_constants_record(self, tol):
        cp = ContinuumParams(epsilon=1e-3, delta=1.0)
        constants = continuum_constants(cp, tol)
        assert constants.C == pytest.approx(math.pi, rel=1e-6)
        assert constants.power_coeff == pytest.approx(constants.C / 1e-3)
        assert constants.density_coeff == pytest.approx(2.0 / math.pi * 1e-3 / constants.C)


class TestLongwave:
    def test_zero(self):
        cp = ContinuumParams(epsilon=1e-4, delta=0.5)
        value = longwave_omega_sq(cp, 0.0, 2.0)
        assert value.omega_sq == 0.0
        assert value.in_regime

    def test_regime_flag(self):
        cp = ContinuumParams(epsilon=1e-4, delta=0.5)
        assert longwave_omega_sq(cp, 1e-10, 2.0).in_regime
        assert not longwave_omega_sq(cp, 1.0, 2.0).in_regime

    def test_negative_kh(self):
        with pytest.raises(OutOfDomainError):
            longwave_omega_sq(ContinuumParams(epsilon=1e-4, delta=0.5), -1.0, 2.0)

    def test_homogeneity(self, rng):
        cp = ContinuumParams(epsilon=1e-3, delta=0.7)
        for lam in rng.uniform(0.1, 10.0, size=20):
            base = longwave_omega_sq(cp, 1e-6, 2.5).omega_sq
            scaled = longwave_omega_sq(cp, lam * 1e-6, 2.5).omega_sq
            assert scaled == pytest.approx(lam ** cp.delta * base, rel=1e-12)

    def test_frequency_is_root(self):
        cp = ContinuumParams(epsilon=1e-3, delta=1.5)
        assert longwave_frequency(cp, 1e-4, 3.0) ** 2 == pytest.approx(
            longwave_omega_sq(cp, 1e-4, 3.0).omega_sq
        )

    @pytest.mark.parametrize("delta", [0.5, 1.0, 1.5])
    @pytest.mark.parametrize("kh", [1e-10, 1e-9, 1e-8])
    def test_series_follows_power_law(self, delta, kh):
        N = 1.0 + 1e-4
        tol = ToleranceBudget(rel_tol=1e-6, abs_tol=1e-30)
        epsilon = math.log(N)
        series = omega_sq(ChainParams(N=N, delta=delta), kh, tol)
        ratio = series.omega_sq * epsilon / kh ** delta
        assert ratio == pytest.approx(constant_C(delta, tol), rel=0.02)


class TestDensity:
    @pytest.mark.parametrize("delta", [0.5, 1.0, 1.5])
    def test_power_law_slope(self, delta):
        cp = ContinuumParams(epsilon=1e-3, delta=delta)
        omega = np.array([0.1, 0.2, 0.4, 0.8])
        rho = oscillator_density(cp, omega, 2.0)
        slopes = np.diff(np.log(rho)) / np.diff(np.log(omega))
        np.testing.assert_allclose(slopes, 2.0 / delta - 1.0, rtol=1e-10)

    def test_vanishes_at_zero(self):
        assert oscillator_density(ContinuumParams(epsilon=1e-3, delta=0.5), 0.0, 2.0) == 0.0

    def test_doubling_ratio(self):
        cp = ContinuumParams(epsilon=1e-3, delta=0.5)
        ratio = oscillator_density(cp, 2.0, 2.0) / oscillator_density(cp, 1.0, 2.0)
        assert ratio == pytest.approx(8.0, rel=1e-14)

    def test_direct_substitution(self):
        cp = ContinuumParams(epsilon=1e-3, delta=1.0)
        assert oscillator_density(cp, 1.0, math.pi) == pytest.approx(2.0 / math.pi * (1e-3 / math.pi))

    def test_negative_frequency(self):
        with pytest.raises(OutOfDomainError):
            oscillator_density(ContinuumParams(epsilon=1e-3, delta=1.0), -0.1, math.pi)


class TestKernel:
    def test_power_branch(self):
        cp = ContinuumParams(epsilon=0.01, delta=0.5)
        assert kernel_g(4.0, cp) == pytest.approx(-800.0)
        assert kernel_g(-4.0, cp) == kernel_g(4.0, cp)

    def test_log_branch(self):
        cp = ContinuumParams(epsilon=0.01, delta=1.0)
        assert kernel_g(1.0, cp) == 0.0
        assert kernel_g(math.e, cp) == pytest.approx(-100.0)

    @pytest.mark.parametrize("delta", [1.0, 1.5])
    def test_singular_at_origin(self, delta):
        with pytest.raises(SingularPointError):
            kernel_g(0.0, ContinuumParams(epsilon=0.01, delta=delta))

    def test_regular_at_origin_below_one(self):
        assert kernel_g(0.0, ContinuumParams(epsilon=0.01, delta=0.5)) == 0.0


class TestRiemannLiouville:
    def test_constant_function(self):
        v = SampledFunction.from_callable(np.ones_like, 0.0, 1.0, 65)
        for D in (0.3, 0.5, 1.7):
            assert rl_fractional_integral(v, D, 1.0) == pytest.approx(1.0 / math.gamma(D + 1.0), rel=1e-11)

    def test_linear_function_is_exact(self):
        v = SampledFunction.from_callable(lambda t: t, 0.0, 1.0, 33)
        expected = math.gamma(2.0) / math.gamma(2.5)
        assert rl_fractional_integral(v, 0.5, 1.0) == pytest.approx(expected, rel=1e-11)

    def test_second_order_convergence(self):
        expected = math.gamma(3.0) / math.gamma(3.5)
        errors = []
        for n in (33, 65, 129):
            v = SampledFunction.from_callable(lambda t: t * t, 0.0, 1.0, n)
            errors.append(abs(rl_fractional_integral(v, 0.5, 1.0) - expected))
        assert errors[0] / errors[1] > 3.5
        assert errors[1] / errors[2] > 3.5

    def test_order_one_is_trapezoid(self):
        v = SampledFunction.from_callable(np.sin, 0.0, 2.0, 101)
        assert rl_fractional_integral(v, 1.0, 2.0) == pytest.approx(integrate.trapezoid(v.values, v.grid), rel=1e-11)
        assert rl_fractional_integral(v, 1.0, 2.0) == pytest.approx(1.0 - math.cos(2.0), rel=1e-4)

    def test_interior_point(self):
        v = SampledFunction.from_callable(np.ones_like, 0.0, 1.0, 11)
        assert rl_fractional_integral(v, 0.5, 0.35) == pytest.approx(0.35 ** 0.5 / math.gamma(1.5), rel=1e-11)

    def test_lower_endpoint(self):
        v = SampledFunction.from_callable(np.ones_like, 0.0, 1.0, 11)
        assert rl_fractional_integral(v, 0.5, 0.0) == 0.0

    def test_linear_and_positive(self, rng):
        a = SampledFunction.from_callable(np.cos, 0.0, 1.0, 41)
        b = SampledFunction(values=rng.uniform(0.1, 1.0, size=41), a=0.0, b=1.0)
        both = SampledFunction(values=2.0 * a.values + b.values, a=0.0, b=1.0)
        combined = rl_fractional_integral(both, 0.7, 0.9)
        separate = 2.0 * rl_fractional_integral(a, 0.7, 0.9) + rl_fractional_integral(b, 0.7, 0.9)
        assert combined == pytest.approx(separate, rel=1e-11)
        assert rl_fractional_integral(b, 0.7, 0.9) > 0.0

    @pytest.mark.parametrize("D,x", [(0.0, 0.5), (-1.0, 0.5), (0.5, 1.5), (0.5, -0.1)])
    def test_out_of_domain(self, D, x):
        v = SampledFunction.from_callable(np.ones_like, 0.0, 1.0, 11)
        with pytest.raises(OutOfDomainError):
            rl_fractional_integral(v, D, x)


class TestContinuumLaplacian:
    def test_constant_field(self, tol):
        cp = ContinuumParams(epsilon=1e-3, delta=0.7)
        assert continuum_laplacian(constant(2.0), cp, 0.3, tol) == 0.0

    @pytest.mark.parametrize("delta", [0.5, 1.0, 1.5])
    @pytest.mark.parametrize("field", [gaussian, lorentzian])
    def test_kernel_form_agrees(self, tol, delta, field):
        cp = ContinuumParams(epsilon=1e-3, delta=delta)
        u = field()
        direct = continuum_laplacian(u, cp, 0.3, tol)
        convolved = kernel_laplacian(u, cp, 0.3, tol)
        assert convolved == pytest.approx(direct, rel=1e-6)

    def test_kernel_form_needs_second_derivative(self, tol):
        u = EvaluableField(eval=lambda x: np.exp(-x * x), decay_beta=-4.0)
        with pytest.raises(OutOfDomainError):
            kernel_laplacian(u, ContinuumParams(epsilon=1e-3, delta=0.7), 0.0, tol)

    def test_cosine_long_wave(self, tol):
        cp = ContinuumParams(epsilon=1e-3, delta=0.5)
        k = 1e-6
        C = constant_C(cp.delta, tol)
        value = continuum_laplacian(cosine(k), cp, 0.0, tol)
        assert value == pytest.approx(-longwave_omega_sq(cp, k, C).omega_sq, rel=0.02)

    @pytest.mark.filterwarnings("error::scipy.integrate.IntegrationWarning")
    @pytest.mark.parametrize("delta,k", [(0.3, 1e-6), (1.0, 1e-6), (1.7, 0.1)])
    def test_plane_wave_is_exact(self, tol, delta, k):
        cp = ContinuumParams(epsilon=1e-3, delta=delta)
        expected = -(k ** delta) * constant_C(delta, tol) / cp.epsilon
        assert continuum_laplacian(cosine(k), cp, 0.0, tol) == pytest.approx(expected, rel=1e-6)

    def test_plane_wave_off_peak(self, tol):
        cp = ContinuumParams(epsilon=1e-3, delta=0.7)
        k, x = 0.8, 0.4
        expected = -(k ** 0.7) * constant_C(0.7, tol) / cp.epsilon * math.cos(k * x)
        assert continuum_laplacian(cosine(k), cp, x, tol) == pytest.approx(expected, rel=1e-6)

    def test_undecaying_field_exhausts_budget(self, tol):
        cp = ContinuumParams(epsilon=1e-3, delta=0.3)
        waves = cosine(3.0) + cosine(5.0)
        with pytest.raises(BudgetExhaustedError):
            continuum_laplacian(waves, cp, 0.0, tol)

    def test_matches_discrete_chain(self, tol):
        epsilon = 1e-3
        delta = 0.7
        params = ChainParams(N=math.exp(epsilon), delta=delta)
        cp = ContinuumParams(epsilon=epsilon, delta=delta)
        discrete = selfsim_laplacian(gaussian(), params, 0.0, tol)
        continuous = continuum_laplacian(gaussian(), cp, 0.0, tol)
        assert continuous == pytest.approx(discrete.value, rel=0.01)


class TestContinuumTransform:
    @pytest.mark.parametrize("delta", [0.3, 0.7, 1.4])
    def test_gamma_oracle(self, tol, delta):
        cp = ContinuumParams(epsilon=1e-3, delta=delta)
        value = continuum_transform(power_bump(), cp, 2.0, tol)
        expected = 2.0 ** delta / 1e-3 * math.gamma(2.0 - delta)
        assert value == pytest.approx(expected, rel=1e-8)

    def test_homogeneity(self, rng, tol):
        cp = ContinuumParams(epsilon=1e-3, delta=0.7)
        base = continuum_transform(power_bump(), cp, 1.0, tol)
        for lam in rng.uniform(0.1, 10.0, size=5):
            scaled = continuum_transform(power_bump(), cp, lam, tol)
            assert scaled == pytest.approx(lam ** cp.delta * base, rel=1e-12)

    def test_inadmissible(self, tol):
        f = EvaluableField(eval=lambda t: t, decay_beta=1.0, smooth_alpha=1.5)
        with pytest.raises(InadmissibleExponentError):
            continuum_transform(f, ContinuumParams(epsilon=1e-3, delta=1.7), 1.0, tol)

    def test_quadrature_budget(self):
        cp = ContinuumParams(epsilon=1e-3, delta=1.4)
        with pytest.raises(BudgetExhaustedError):
            continuum_transform(power_bump(), cp, 1.0, ToleranceBudget(max_quad_evals=1))


class TestContinuumParams:
    @pytest.mark.parametrize("kwargs", [
        {"epsilon": 0.2, "delta": 0.5},
        {"epsilon": 0.0, "delta": 0.5},
        {"epsilon": 1e-3, "delta": 2.0},
        {"epsilon": 1e-3, "delta": 0.5, "h": -1.0},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(InvalidParametersError):
            ContinuumParams.checked(**kwargs)

    def test_coarse_epsilon_is_accepted(self):
        assert ContinuumParams.checked(epsilon=0.05, delta=0.5).epsilon == 0.05

    def test_from_n(self):
        cp = ContinuumParams.from_n(math.exp(1e-3), 0.5)
        assert cp.epsilon == pytest.approx(1e-3, rel=1e-12)
