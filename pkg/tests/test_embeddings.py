"""Tests for optimal targets, the L^inf criterion and moduli of continuity."""

import numpy as np
import pytest

from src.embeddings import (
    TargetNormHandle,
    linf_embedding_check,
    moduli,
    modulus_curve,
    rn_target_norm,
    rn_zero_space_admissible,
    uniform_continuity_verdict,
    x1_associate_norm,
)
from src.norms import NormSpec
from src.rearrangement import DecreasingProfile
from src.utils.exceptions import UnsupportedSpaceError, ValidationError
from src.utils.ledger import ChoiceLedger
from src.young import LinfYoung, PowerYoung, sigma_A


class TestAssociateFormula:
    """Test ||s^{1/n} f**(s)||_{X'}."""

    def test_sup_case(self):
        """Test the L^inf associate of chi_(0,1) in the plane."""
        value = x1_associate_norm(NormSpec.lebesgue(float('inf'), L=1.0), DecreasingProfile.indicator(1.0), 2)
        assert value == pytest.approx(1.0)

    def test_integral_case(self):
        """Test the L^1 associate approaches 2/3 from below."""
        value = x1_associate_norm(NormSpec.lebesgue(1.0, L=1.0), DecreasingProfile.indicator(1.0), 2)
        assert value == pytest.approx(2.0 / 3.0, rel=1e-4)
        assert value <= 2.0 / 3.0 * (1 + 1e-9)

    def test_zero_profile(self):
        """Test the zero profile has zero norm."""
        assert x1_associate_norm(NormSpec.lebesgue(1.0, L=1.0), DecreasingProfile.zero(), 2) == 0.0

    def test_support_too_long(self):
        """Test a profile longer than the interval is rejected."""
        with pytest.raises(ValidationError, match="exceeds L"):
            x1_associate_norm(NormSpec.lebesgue(1.0, L=1.0), DecreasingProfile.indicator(2.0), 2)

    def test_lebesgue_tail_on_half_line(self):
        """Test L^3(0, inf) adds the tail s^(-1/2) beyond the support: 2/5 + 2 = 12/5 for the cube."""
        value = x1_associate_norm(NormSpec.lebesgue(3.0), DecreasingProfile.indicator(1.0), 2)
        assert value == pytest.approx(2.4 ** (1.0 / 3.0), rel=1e-4)

    def test_lebesgue_tail_diverges(self):
        """Test the tail of s^(-1/2) is not square integrable."""
        assert x1_associate_norm(NormSpec.lebesgue(2.0), DecreasingProfile.indicator(1.0), 2) == float('inf')

    def test_omitted_tail_is_recorded(self):
        """Test families without a closed-form tail report a lower bound."""
        ledger = ChoiceLedger()
        spec = NormSpec.orlicz(PowerYoung(2.0))
        value = x1_associate_norm(spec, DecreasingProfile.indicator(1.0), 2, ledger=ledger)
        assert np.isfinite(value) and value > 0
        assert 'x1-tail-omitted' in [entry.kind for entry in ledger.entries]
        bounded = x1_associate_norm(NormSpec.orlicz(PowerYoung(2.0), L=1.0), DecreasingProfile.indicator(1.0), 2,
                                    ledger=ledger)
        assert value == pytest.approx(bounded, rel=1e-9)


class TestLinfCriterion:
    """Test the embedding of E^1 X into L^inf."""

    @pytest.mark.parametrize('spec,n,expected', [
        (NormSpec.lebesgue(3.0), 2, True),
        (NormSpec.lebesgue(2.0), 2, False),
        (NormSpec.lorentz(2.0, 1.0), 2, True),
        (NormSpec.lebesgue(2.0), 3, False),
    ])
    def test_verdicts(self, spec, n, expected):
        """Test the critical Lebesgue and Lorentz cases."""
        assert linf_embedding_check(spec, n, 1.0) is expected

    def test_invalid_length(self):
        """Test L must be positive."""
        with pytest.raises(ValidationError):
            linf_embedding_check(NormSpec.lebesgue(3.0), 2, 0.0)


class TestModuli:
    """Test theta, rho and sigma."""

    def test_bounded_gradient(self):
        """Test the L^inf gradient in the plane against the closed form."""
        result = moduli(NormSpec.lebesgue(float('inf')), 2, 1.0, 0.1)
        assert result.theta == pytest.approx(0.2, rel=1e-9)
        assert result.rho == pytest.approx(0.1 * np.log(200.0), rel=1e-6)
        assert result.sigma == pytest.approx(result.theta + result.rho)
        assert result.radius == 2.0
        assert result.bracket == (1.0, 1.0)
        assert result.sigma_bracket == [result.sigma, result.sigma]
        assert [entry.kind for entry in result.regularizations] == ['rho-radius']

    def test_explicit_radius(self):
        """Test an explicit R records no radius choice."""
        result = moduli(NormSpec.lebesgue(float('inf')), 2, 1.0, 0.1, R=4.0)
        assert result.rho == pytest.approx(0.1 * np.log(400.0), rel=1e-6)
        assert 'rho-radius' not in [entry.kind for entry in result.regularizations]

    def test_beyond_diameter(self):
        """Test scales past the diameter report the values at d."""
        result = moduli(NormSpec.lebesgue(float('inf')), 2, 1.0, 2.0)
        assert result.s == 1.0
        assert 'continued-beyond-diameter' in [entry.kind for entry in result.regularizations]

    def test_invalid_radius(self):
        """Test R must exceed d^n."""
        with pytest.raises(ValidationError, match="Invalid R"):
            moduli(NormSpec.lebesgue(float('inf')), 2, 1.0, 0.1, R=0.5)

    def test_orlicz_sigma_tracks_young_modulus(self):
        """Test sigma_X of the L^inf Orlicz norm follows sigma_A up to one constant inside the factor-2 bracket."""
        r = np.geomspace(1e-4, 1e-2, 5)
        found = [moduli(NormSpec.orlicz(LinfYoung()), 2, 1.0, float(point)) for point in r]
        assert all(result.bracket == (1.0, 2.0) for result in found)
        lower = np.array([result.sigma_bracket[0] for result in found])
        upper = np.array([result.sigma_bracket[1] for result in found])
        np.testing.assert_allclose(upper, 2.0 * lower)
        ratio = lower / sigma_A(LinfYoung(), 2, r)
        assert np.all(ratio > 0)
        assert ratio.max() / ratio.min() < 2.0


class TestUniformContinuity:
    """Test the vanishing verdict on dyadic grids."""

    @pytest.fixture
    def scales(self):
        """Dyadic scales 2^-1 .. 2^-40."""
        return 2.0 ** -np.arange(1, 41)

    def test_vanishing(self, scales):
        """Test sigma(s) = s vanishes."""
        assert uniform_continuity_verdict(scales, scales) is True

    def test_constant(self, scales):
        """Test a constant sigma does not vanish."""
        assert uniform_continuity_verdict(scales, np.ones_like(scales)) is False

    def test_infinite(self, scales):
        """Test an infinite sigma does not vanish."""
        sigma = scales.copy()
        sigma[0] = np.inf
        assert uniform_continuity_verdict(scales, sigma) is False

    def test_curves(self):
        """Test the verdict on the bounded and the critical Lebesgue gradients."""
        bounded = modulus_curve(NormSpec.lebesgue(float('inf')), 2)
        assert bounded.uniform_continuity is True
        assert bounded.s.size == 40 and len(bounded.rows()) == 40
        assert modulus_curve(NormSpec.lebesgue(2.0), 2).uniform_continuity is False


class TestRnTargets:
    """Test the R^n target norms."""

    def test_zero_space(self):
        """Test admissibility of Lebesgue gradients."""
        assert rn_zero_space_admissible(NormSpec.lebesgue(1.0), 2) is True
        assert rn_zero_space_admissible(NormSpec.lebesgue(2.0), 2) is False
        assert rn_zero_space_admissible(NormSpec.lebesgue(2.0), 3) is True

    def test_zero_space_unknown(self):
        """Test families without an associate on (0, inf) are rejected."""
        with pytest.raises(UnsupportedSpaceError, match="Unknown associate"):
            rn_zero_space_admissible(NormSpec.glz(2.0), 2)

    def test_handle_finite(self):
        """Test the finite-measure handle for the L^1 gradient."""
        handle = TargetNormHandle(NormSpec.lebesgue(1.0), 'X1', 2, 1.0)
        f = DecreasingProfile.indicator(1.0)
        assert handle.associate_norm(f) == pytest.approx([1.0, 1.0])
        assert handle.norm(f) == pytest.approx(1.0, rel=1e-6)
        assert handle.norm(DecreasingProfile.zero()) == 0.0

    def test_handle_modes(self):
        """Test mode validation and the missing R^n associate."""
        with pytest.raises(ValidationError, match="Invalid target mode"):
            TargetNormHandle(NormSpec.lebesgue(1.0), 'X2')
        handle = TargetNormHandle(NormSpec.lebesgue(1.0), 'X1Rn', 2)
        with pytest.raises(UnsupportedSpaceError, match="no associate formula"):
            handle.associate_norm(DecreasingProfile.indicator(1.0))

    def test_rn_norm(self):
        """Test the sum norm of chi_(0,1) for the L^1 gradient."""
        f = DecreasingProfile.indicator(1.0)
        value = rn_target_norm(NormSpec.lebesgue(1.0), f, 2)
        assert value == pytest.approx(2.0, rel=1e-6)
        handle = TargetNormHandle(NormSpec.lebesgue(1.0), 'X1Rn', 2)
        assert handle.norm(f) == pytest.approx(value)
