"""Tests for Young functions and the Orlicz calculus."""

import numpy as np
import pytest

from src.utils.exceptions import PreconditionError, ValidationError
from src.young import (
    LinfYoung,
    PowerLogYoung,
    PowerYoung,
    TableYoung,
    conjugate,
    hat_A,
    parse_young,
    sigma_A,
    sobolev_conjugate,
    xi_eta,
    young_from_dict,
)
from src.young.calculus import continuity_kernels, second_differences
from src.young.zygmund_table import modulus_table


class TestParsing:
    """Test Young function descriptions."""

    def test_shorthand(self):
        """Test the command-line shorthand."""
        assert parse_young('power:2').to_dict() == {'kind': 'power', 'p': 2.0}
        assert isinstance(parse_young('powerlog:3,1'), PowerLogYoung)
        assert isinstance(parse_young('linf'), LinfYoung)

    def test_unknown_kind(self):
        """Test unknown kinds are rejected."""
        with pytest.raises(ValidationError, match="Invalid Young function kind"):
            parse_young('cosh:2')

    def test_wrong_parameter_count(self):
        """Test the parameter count is checked."""
        with pytest.raises(ValidationError, match="expected parameters"):
            parse_young('power:2,3')

    def test_missing_parameter(self):
        """Test JSON descriptions need all parameters."""
        with pytest.raises(ValidationError, match="Missing parameter"):
            young_from_dict({'kind': 'powerlog', 'p': 2.0})

    def test_density_table_from_file(self, tmp_path):
        """Test a density table is read relative to the base directory."""
        (tmp_path / 'a.csv').write_text("t,a\n1.0,1.0\n2.0,3.0\n")
        young = young_from_dict({'kind': 'table', 'path': 'a.csv'}, base_dir=tmp_path)
        np.testing.assert_allclose(young.value(np.array([1.0, 2.0])), [1.0, 4.0])

    def test_p_below_one(self):
        """Test powers below 1 are not Young functions."""
        with pytest.raises(ValidationError, match="Invalid p"):
            PowerYoung(0.5)


class TestYoungFunctions:
    """Test values, densities and conjugates."""

    def test_power_values(self):
        """Test t^2 and its density."""
        young = PowerYoung(2.0)
        assert young.value(np.array([3.0]))[0] == pytest.approx(9.0)
        assert young.density(np.array([3.0]))[0] == pytest.approx(6.0)

    def test_power_asymptotics(self):
        """Test the power class at zero and infinity."""
        cls = PowerYoung(1.5).asymptotics()
        assert cls.zero == (1.5, 0.0, 0.0)
        assert cls.infinity == (1.5, 0.0, 0.0)

    def test_linf_is_not_finite(self):
        """Test the L^inf indicator jumps to infinity past 1."""
        young = LinfYoung()
        assert not young.is_finite_valued()
        assert young.value(np.array([0.5]))[0] == 0.0
        assert np.isinf(young.value(np.array([2.0]))[0])

    def test_conjugate_of_square(self):
        """Test the conjugate of t^2 is t^2/4."""
        dual = conjugate(PowerYoung(2.0))
        assert dual.value(np.array([2.0]))[0] == pytest.approx(1.0, rel=1e-3)

    def test_conjugate_is_involution(self):
        """Test conjugating twice returns the original function."""
        young = PowerYoung(3.0)
        assert conjugate(conjugate(young)) is young

    def test_convexity(self):
        """Test second differences of a Young function are nonnegative."""
        t = np.geomspace(1e-2, 1e2, 50)
        assert np.all(second_differences(PowerLogYoung(2.0, 1.0), t[t > 3.0]) >= -1e-6)


class TestConjugateOracles:
    """Test the conjugate against Legendre transforms and Young's inequality."""

    @staticmethod
    def random_table(rng):
        """A strictly increasing positive step density with a few steps."""
        steps = int(rng.integers(2, 8))
        breakpoints = np.cumsum(rng.uniform(0.1, 1.0, steps))
        values = np.cumsum(rng.uniform(0.1, 2.0, steps))
        return TableYoung(breakpoints, values)

    @pytest.mark.parametrize('p', [1.5, 3.0, 5.0])
    def test_legendre_power(self, p):
        """Test conj(t^p)(t) = (1 - 1/p) t (t/p)^(1/(p-1))."""
        t = np.geomspace(1e-2, 1e2, 21)
        expected = (1.0 - 1.0 / p) * t * (t / p) ** (1.0 / (p - 1.0))
        np.testing.assert_allclose(conjugate(PowerYoung(p)).value(t), expected, rtol=1e-6)

    def test_legendre_power_log(self):
        """Test the conjugate of t^2 log-type growth matches sup_s (s t - A(s)) on a fine grid."""
        young = PowerLogYoung(2.0, 1.0)
        s = np.geomspace(1e-4, 1e4, 200001)
        a_s = young.value(s)
        t = np.geomspace(1e-1, 1e2, 7)
        oracle = np.array([np.max(s * point - a_s) for point in t])
        np.testing.assert_allclose(conjugate(young).value(t), oracle, rtol=1e-3)

    def test_table_involution(self):
        """Test conjugating a table twice gives back its values within 1e-8."""
        rng = np.random.default_rng(11)
        for _ in range(10):
            table = self.random_table(rng)
            t = np.linspace(0.0, 3.0 * table.end, 97)[1:]
            twice = conjugate(conjugate(table))
            np.testing.assert_allclose(twice.value(t), table.value(t), rtol=1e-8, atol=1e-12)

    def test_young_inequality(self):
        """Test s t <= A(s) + conj(A)(t) on random pairs."""
        rng = np.random.default_rng(5)
        youngs = [PowerYoung(1.5), PowerYoung(3.0), PowerLogYoung(2.0, 1.0), self.random_table(rng)]
        for young in youngs:
            dual = conjugate(young)
            s = np.exp(rng.uniform(np.log(1e-3), np.log(1e2), 1000))
            t = np.exp(rng.uniform(np.log(1e-3), np.log(1e2), 1000))
            bound = young.value(s) + dual.value(t)
            assert np.all(s * t <= bound * (1 + 1e-9) + 1e-12), young.describe()


class TestSobolevConjugate:
    """Test the optimal Orlicz target growth."""

    def test_subcritical_power(self):
        """Test t^2 in dimension 3 gives t^6 / 16."""
        result = sobolev_conjugate(PowerYoung(2.0), 3)
        assert not result.collapse
        log_values = result.young.log_value(np.array([0.0, 2.0]))
        np.testing.assert_allclose(log_values, [-np.log(16.0), 12.0 - np.log(16.0)], atol=1e-2)

    def test_supercritical_power_collapses(self):
        """Test t^3 in dimension 2 collapses to L^inf with a finite H limit."""
        young, collapse = sobolev_conjugate(PowerYoung(3.0), 2)
        assert collapse
        h_limit = sobolev_conjugate(PowerYoung(3.0), 2).h_limit
        assert np.isfinite(h_limit) and h_limit > 0
        assert np.isinf(young.log_value(np.array([np.log(h_limit) + 1.0]))[0])

    def test_critical_power_is_regularized(self):
        """Test t^n receives a density floor near zero."""
        result = sobolev_conjugate(PowerYoung(3.0), 3)
        assert not result.collapse
        assert 'near-zero-floor' in [entry.kind for entry in result.regularizations]

    def test_linf_collapses(self):
        """Test the L^inf indicator is its own target."""
        result = sobolev_conjugate(LinfYoung(), 2)
        assert result.collapse
        assert [entry.kind for entry in result.regularizations] == ['linf-collapse']

    @pytest.mark.parametrize('p,n', [(1.5, 2), (2.0, 3), (3.0, 4)])
    def test_power_growth_bracket(self, p, n):
        """Test A_n(t) / t^(np/(n-p)) stays two-sided bounded on [1, 1e3]."""
        result = sobolev_conjugate(PowerYoung(p), n)
        assert not result.collapse
        u = np.log(np.geomspace(1.0, 1e3, 13))
        log_ratio = result.young.log_value(u) - n * p / (n - p) * u
        assert np.all(np.isfinite(log_ratio))
        assert log_ratio.max() - log_ratio.min() < np.log(2.0)

    def test_invalid_dimension(self):
        """Test the dimension must be at least 2."""
        with pytest.raises(ValidationError, match="Invalid dimension"):
            sobolev_conjugate(PowerYoung(2.0), 1)


class TestContinuityKernels:
    """Test xi, eta and the modulus sigma_A."""

    def test_linf_modulus_shape(self):
        """Test sigma of the L^inf indicator behaves like r log(1/r)."""
        r = np.geomspace(1e-4, 1e-2, 5)
        ratio = sigma_A(LinfYoung(), 2, r) / (r * np.log(1.0 / r))
        assert np.all(ratio > 1.0) and np.all(ratio < 4.0)
        assert ratio.max() / ratio.min() < 1.5

    def test_xi_eta_of_square(self):
        """Test t^2 in the plane: the conjugate is t^2/4, so eta(t) = t^2/4 and xi diverges."""
        xi, eta = xi_eta(PowerYoung(2.0), 2, 1.0)
        assert xi == float('inf')
        assert eta == pytest.approx(0.25, rel=1e-2)
        with pytest.raises(ValidationError, match="Invalid t"):
            xi_eta(PowerYoung(2.0), 2, 0.0)

    @pytest.mark.parametrize('text,example,beta,alpha', [
        ('exppower:0.5', 'exp', 0.5, None),
        ('exppower:1', 'exp', 1.0, None),
        ('exppower:2', 'exp', 2.0, None),
        ('powerlog:2,2', 'lnlog', None, 2.0),
    ])
    def test_example_modulus_brackets(self, text, example, beta, alpha):
        """Test sigma_A over the tabulated modulus of each worked example spreads by at most 10x."""
        r = np.geomspace(1e-6, 1e-2, 9)
        predicted = modulus_table(example, 2, beta=beta, alpha=alpha).evaluate(r)
        ratio = np.asarray(sigma_A(parse_young(text), 2, r)) / predicted
        assert np.all(np.isfinite(ratio)) and np.all(ratio > 0)
        assert ratio.max() / ratio.min() <= 10.0

    def test_sigma_needs_finite_xi(self):
        """Test the modulus is undefined when the tail integral diverges."""
        assert not continuity_kernels(PowerYoung(2.0), 2).xi_finite
        with pytest.raises(PreconditionError, match="tail integral diverges"):
            sigma_A(PowerYoung(2.0), 2, 0.1)

    def test_sigma_rejects_nonpositive_radius(self):
        """Test radii must be positive."""
        with pytest.raises(ValidationError, match="Invalid r"):
            sigma_A(LinfYoung(), 2, 0.0)


class TestHatA:
    """Test the Orlicz-Lorentz target density."""

    def test_collapse_has_no_hat(self):
        """Test hat-A is undefined when A_n collapses."""
        with pytest.raises(PreconditionError, match="collapses to L\\^inf"):
            hat_A(PowerYoung(3.0), 2)

    def test_power_hat_is_increasing(self):
        """Test hat-A of t^2 in dimension 3 is a nondecreasing table."""
        hat = hat_A(PowerYoung(2.0), 3)
        t = np.geomspace(1e-2, 1e2, 9)
        values = hat.value(t)
        assert np.all(np.diff(values) >= 0)
        assert values[-1] > values[0]
