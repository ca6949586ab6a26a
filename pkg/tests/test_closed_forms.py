import math
from fractions import Fraction

import numpy as np
import pytest

from opakit.approx.closed_forms import (
    DiagonalTarget,
    WeightSequence,
    ball_distance_rates,
    ball_rotation_opa,
    ball_rotation_target,
    cyclicity_classify,
    da_weight_asymptotic,
    diag_embed_opa,
    drury_arveson_diag_weight,
    fms_distance,
    fms_opa,
    hardy_one_variable_opa,
    inverse_partial_sums,
    stirling_check,
    substitute_diagonal,
    tail_corrected_inverse_sum,
)
from opakit.approx.opa import opa, opa_sequence
from opakit.core.mpoly import MPoly, diag_threshold
from opakit.core.spaces import SpaceSpec
from opakit.core.text import parse_poly


class TestWeightSequence:
    """Tests for one-variable weight sequences."""

    def test_drury_arveson_diagonal(self):
        assert drury_arveson_diag_weight(2, 0) == 1
        assert drury_arveson_diag_weight(2, 1) == 2
        assert drury_arveson_diag_weight(2, 2) == Fraction(8, 3)
        assert drury_arveson_diag_weight(1, 7) == 1
        with pytest.raises(ValueError):
            drury_arveson_diag_weight(0, 1)

    def test_parse(self):
        assert WeightSequence.parse("hardy") == WeightSequence.hardy()
        assert WeightSequence.parse("dirichlet:1").exponent == 1
        assert WeightSequence.parse("da:3") == WeightSequence.drury_arveson_diag(3)
        assert WeightSequence.parse("omega:[1,2]").table == (1, 2)
        with pytest.raises(ValueError):
            WeightSequence.parse("bogus")

    def test_values(self):
        w = WeightSequence.dirichlet(1)
        assert w(3) == 4
        assert w.is_exact
        assert not WeightSequence.dirichlet(0.5).is_exact
        assert np.isclose(WeightSequence.drury_arveson_diag(2).float_value(2), 8 / 3)
        with pytest.raises(ValueError):
            w(-1)
        with pytest.raises(ValueError):
            WeightSequence.from_table([1, 2])(2)

    def test_partial_sums(self):
        assert inverse_partial_sums(WeightSequence.hardy(), 2) == (1, 2, 3)
        assert inverse_partial_sums(WeightSequence.drury_arveson_diag(2), 2) == (
            1,
            Fraction(3, 2),
            Fraction(15, 8),
        )


class TestOneVariable:
    """Tests for approximants to 1/(1 - x)."""

    def test_hardy_formula(self):
        assert hardy_one_variable_opa(1) == parse_poly("2/3+z1/3")
        assert fms_opa(WeightSequence.hardy(), 0) == parse_poly("1/2", 1)

    @pytest.mark.parametrize("s", [0, 1, -1, 2])
    def test_matches_grammian_solve(self, s):
        weights = WeightSequence.dirichlet(s)
        space = SpaceSpec.dirichlet_disk(s)
        f = parse_poly("1-z1")
        for n in range(5):
            result = opa(space, f, n)
            assert result.approximant == fms_opa(weights, n)
            assert result.nu2 == fms_distance(weights, n).nu2_exact

    def test_negative_order(self):
        with pytest.raises(ValueError):
            fms_opa(WeightSequence.hardy(), -1)

    def test_limit_distances(self):
        assert fms_distance(WeightSequence.hardy()).cyclic
        limit = fms_distance(WeightSequence.dirichlet(2))
        assert not limit.cyclic
        assert np.isclose(limit.nu, math.sqrt(6) / math.pi)
        with pytest.raises(ValueError):
            fms_distance(WeightSequence.from_table([1, 2]))

    def test_tail_correction(self):
        estimate, tail = tail_corrected_inverse_sum(WeightSequence.dirichlet(2), 500)
        assert abs(estimate - math.pi**2 / 6) < 1e-4
        assert 0 < tail < 1e-2
        with pytest.raises(ValueError):
            tail_corrected_inverse_sum(WeightSequence.dirichlet(2), 3)


class TestDiagonalTargets:
    """Tests for 1 - a z1...zd through the one-variable formula."""

    def test_parse_and_scale(self):
        assert DiagonalTarget.parse("bidisk:1,1") == DiagonalTarget.bidisk(1, 1)
        assert DiagonalTarget.ball(2).scale() == 2
        assert DiagonalTarget.ball(4).scale() == 16
        assert np.isclose(DiagonalTarget.ball(3).scale(), 3**1.5)
        with pytest.raises(ValueError):
            DiagonalTarget.parse("torus:2")
        with pytest.raises(ValueError):
            DiagonalTarget.parse("bidisk:1")

    def test_target_poly(self):
        assert DiagonalTarget.ball(2).target_poly() == parse_poly("1-2*z1*z2")
        assert DiagonalTarget.bidisk(0, 0).target_poly() == parse_poly("1-z1*z2")

    def test_ball_orders(self):
        target = DiagonalTarget.ball(2)
        assert diag_embed_opa(target, 0).approximant == parse_poly("1/3", 2)
        first = diag_embed_opa(target, 1)
        assert first.approximant == parse_poly("7/15+2/5*z1*z2")
        assert first.valid_ranks == (diag_threshold(1, 2), diag_threshold(2, 2))

    def test_matches_grammian_on_valid_ranks(self):
        target = DiagonalTarget.bidisk(0, -1)
        embedded = diag_embed_opa(target, 1)
        start, stop = embedded.valid_ranks
        sequence = opa_sequence(target.space(), target.target_poly(), stop - 1)
        for N in range(start, stop):
            assert sequence[N].approximant == embedded.approximant

    def test_substitute_diagonal(self):
        q = parse_poly("1+z1^2")
        assert substitute_diagonal(q, 3, 2) == parse_poly("1+9*z1^2*z2^2")
        with pytest.raises(ValueError):
            substitute_diagonal(parse_poly("z1", 2), 1, 2)

    def test_cyclicity(self):
        assert cyclicity_classify(DiagonalTarget.bidisk(0, 0)).classification == "cyclic"
        assert cyclicity_classify(DiagonalTarget.bidisk(1, 0)).classification == "cyclic"
        result = cyclicity_classify(DiagonalTarget.bidisk(1, 1))
        assert result.classification == "non_cyclic"
        assert np.isclose(result.nu_limit, math.sqrt(6) / math.pi)
        assert cyclicity_classify(DiagonalTarget.ball(3)).classification == "cyclic"
        ball4 = cyclicity_classify(DiagonalTarget.ball(4))
        assert ball4.classification == "non_cyclic"
        assert 0 < ball4.nu_limit < 1


class TestBallAsymptotics:
    """Tests for Drury-Arveson diagonal weights and rates."""

    def test_weight_growth(self):
        table = da_weight_asymptotic(2, 400)
        assert len(table.rows) == 400
        assert abs(table.rows[-1].ratio / math.sqrt(math.pi) - 1) < 1e-2
        assert table.drift < 1e-2
        with pytest.raises(ValueError):
            da_weight_asymptotic(2, 5)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_stirling(self, d):
        assert stirling_check(d, 400) < 1e-2

    def test_rotation_opa(self):
        expected = parse_poly("2/3+s2/6*z1+s2/6*z2")
        assert ball_rotation_opa(2) == expected
        result = opa(SpaceSpec.drury_arveson(2), ball_rotation_target(), 2)
        assert result.approximant == expected
        assert opa(SpaceSpec.drury_arveson(2), ball_rotation_target(), 5).approximant == ball_rotation_opa(5)
        with pytest.raises(ValueError):
            ball_rotation_opa(3)

    def test_rates(self):
        rows = ball_distance_rates(10)
        assert len(rows) == 11
        assert np.isclose(rows[0].rotated, 0.5)
        assert np.isclose(rows[0].diagonal, 2 / 3)
        assert all(r.diagonal >= r.rotated for r in rows)
