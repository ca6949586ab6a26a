from fractions import Fraction

import numpy as np
import pytest

from opakit.approx.shapiro import (
    bergman_bidisk_closed_form,
    closed_form_ratios,
    drury_arveson_closed_form,
    hardy_bidisk_closed_form,
    shapiro_shields,
    ss_verify,
)
from opakit.core.errors import DomainError
from opakit.core.spaces import SpaceSpec, norm_squared
from opakit.core.text import parse_poly
from opakit.utils.utils import make_rng


@pytest.fixture
def lam():
    return (Fraction(1, 2), Fraction(1, 3))


@pytest.fixture
def samples():
    rng = make_rng(7)
    radius = rng.uniform(0, 0.6, size=(20, 2))
    angle = rng.uniform(0, 2 * np.pi, size=(20, 2))
    return [tuple(z) for z in radius * np.exp(1j * angle)]


class TestShapiroShields:
    """Tests for bordered-determinant weakly inner functions."""

    def test_single_point_cofactors(self, lam):
        ssf = shapiro_shields(SpaceSpec.hardy(2), [lam])
        assert ssf.exact
        assert ssf.cofactors[0] == Fraction(3, 2)
        assert ssf.cofactors[1] == -1
        assert abs(ssf.evaluate(lam)) < 1e-12

    def test_truncation(self, lam):
        ssf = shapiro_shields(SpaceSpec.hardy(2), [lam])
        assert ssf.truncation(1, exact=True) == parse_poly("1/2-z1/2-z2/3")
        assert not ssf.truncation(1).is_exact

    def test_two_points(self):
        points = [(Fraction(1, 2), Fraction(1, 3)), (Fraction(-1, 4), Fraction(1, 5))]
        for text in ("hardy2", "bergman2", "da:2"):
            ssf = shapiro_shields(SpaceSpec.parse(text), points)
            for point in points:
                assert abs(ssf.evaluate(point)) < 1e-12

    def test_float_kernels(self):
        """Dirichlet kernels have no rational closed form."""
        ssf = shapiro_shields(SpaceSpec.dirichlet_bidisk(1, 1), [(0.5, 0.25)])
        assert not ssf.exact
        assert abs(ssf.evaluate((0.5, 0.25))) < 1e-12

    def test_normalized(self, lam):
        ssf = shapiro_shields(SpaceSpec.hardy(2), [lam]).normalized()
        assert np.isclose(ssf.norm2(), 1.0)
        assert np.isclose(norm_squared(ssf.space, ssf.truncation(40)).real, 1.0)

    def test_invalid_points(self, lam):
        space = SpaceSpec.hardy(2)
        with pytest.raises(ValueError):
            shapiro_shields(space, [])
        with pytest.raises(ValueError):
            shapiro_shields(space, [(0, 0)])
        with pytest.raises(ValueError):
            shapiro_shields(space, [lam, lam])
        with pytest.raises(ValueError):
            shapiro_shields(space, [(Fraction(1, 2),)])
        with pytest.raises(DomainError):
            shapiro_shields(space, [(1, 0)])
        with pytest.raises(DomainError):
            shapiro_shields(SpaceSpec.drury_arveson(2), [(0.8, 0.8)])


class TestClosedForms:
    """Single-point functions against their closed forms."""

    @pytest.mark.parametrize(
        "text,closed_form",
        [
            ("hardy2", hardy_bidisk_closed_form),
            ("bergman2", bergman_bidisk_closed_form),
            ("da:2", drury_arveson_closed_form),
        ],
    )
    def test_constant_ratio(self, lam, samples, text, closed_form):
        ssf = shapiro_shields(SpaceSpec.parse(text), [lam])
        ratios = closed_form_ratios(ssf, closed_form, samples)
        assert np.ptp(ratios.real) <= 1e-10 * abs(ratios[0])
        assert np.ptp(ratios.imag) <= 1e-10 * abs(ratios[0])

    def test_printed_sign_disagrees(self, lam, samples):
        ssf = shapiro_shields(SpaceSpec.hardy(2), [lam])

        def printed(l, z):
            return hardy_bidisk_closed_form(l, z, printed_sign=True)

        ratios = closed_form_ratios(ssf, printed, samples)
        assert np.ptp(np.abs(ratios)) > 1e-6

    def test_multi_point_rejected(self):
        points = [(Fraction(1, 2), Fraction(1, 3)), (Fraction(-1, 4), Fraction(1, 5))]
        ssf = shapiro_shields(SpaceSpec.hardy(2), points)
        with pytest.raises(ValueError):
            closed_form_ratios(ssf, hardy_bidisk_closed_form, [(0, 0)])


class TestTruncationResiduals:
    def test_weakly_inner_within_tail(self, lam):
        ssf = shapiro_shields(SpaceSpec.hardy(2), [lam])
        report = ss_verify(ssf, 60, 10)
        assert report.passed
        assert len(report.weak_residuals) == 10
        assert max(report.determinant_residuals) < 1e-12
