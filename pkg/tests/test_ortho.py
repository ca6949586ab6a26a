from fractions import Fraction

import pytest

from opakit.approx.opa import opa_sequence
from opakit.approx.ortho import (
    MONIC,
    diagonal_structure,
    hardy_diag_basis,
    opa_differences,
    verify_recovery,
    weighted_gram_schmidt,
    weighted_monomial_product,
    weighted_orthogonal_r,
)
from opakit.core.errors import ConsistencyError
from opakit.core.mpoly import MPoly, deglex_unrank
from opakit.core.spaces import SpaceSpec, inner_product, weighted_inner_product
from opakit.core.text import parse_poly


class TestGramSchmidt:
    """Tests for orthogonal polynomials of the f-weighted inner product."""

    def setup_method(self):
        self.hardy = SpaceSpec.hardy(2)
        self.f = parse_poly("2-z1-z2")
        self.family = weighted_gram_schmidt(self.hardy, self.f, 5)

    def test_first_members(self):
        assert len(self.family) == 6
        assert self.family[0] == 1
        assert self.family[1] == parse_poly("z1+1/3", 2)
        assert self.family.norms[0] == 6

    def test_convention(self):
        assert self.family.convention == MONIC
        diffs = opa_differences(opa_sequence(self.hardy, self.f, 1))
        assert diffs[0] == self.family[0] / 3

    def test_monic_in_leading_monomial(self):
        for n, phi in enumerate(self.family.members):
            assert phi.leading_rank() == n
            assert phi.coeff(deglex_unrank(n, 2)) == 1

    def test_pairwise_orthogonal(self):
        members = self.family.members
        for i in range(len(members)):
            for j in range(i):
                assert weighted_inner_product(self.hardy, self.f, members[i], members[j]) == 0

    @pytest.mark.parametrize("text", ["hardy2", "bergman2", "dirichlet2", "da:2"])
    def test_recovery_from_approximants(self, text):
        space = SpaceSpec.parse(text)
        family = weighted_gram_schmidt(space, self.f, 6)
        diffs = opa_differences(opa_sequence(space, self.f, 6))
        report = verify_recovery(family, diffs)
        assert report.ok
        assert len(report.entries) == 6

    def test_recovery_detects_mismatch(self):
        diffs = opa_differences(opa_sequence(self.hardy, self.f, 3))
        diffs[2] = diffs[2] + MPoly.variable(0, 2)
        report = verify_recovery(weighted_gram_schmidt(self.hardy, self.f, 3), diffs)
        assert not report.ok

    def test_differences(self):
        diffs = opa_differences(opa_sequence(self.hardy, self.f, 2))
        assert diffs[0] == parse_poly("1/3", 2)
        assert diffs[1] == parse_poly("(1+3*z1)/24", 2)
        assert diffs[2] == parse_poly("(5-z1+16*z2)/136")

    def test_zero_weight(self):
        with pytest.raises(ValueError):
            weighted_gram_schmidt(self.hardy, MPoly.zero(2), 3)


class TestDiagonalStructure:
    """Tests for f depending on z1 z2 only."""

    def setup_method(self):
        self.hardy = SpaceSpec.hardy(2)
        self.f = parse_poly("1-z1*z2")

    def test_rows_match_closed_form(self):
        """In the Hardy space phi_n is z_axis^gap r_m(z1 z2)."""
        entries = diagonal_structure(self.hardy, self.f, 14)
        family = weighted_gram_schmidt(self.hardy, self.f, 14)
        for entry in entries:
            A, B = entry.leading
            expected = hardy_diag_basis(entry.gap, min(A, B), entry.axis)
            assert family[entry.index] == expected
            assert entry.r == weighted_orthogonal_r(min(A, B))

    def test_entry_fields(self):
        entries = diagonal_structure(self.hardy, self.f, 5)
        assert entries[4].leading == (1, 1)
        assert entries[4].gap == 0
        assert entries[4].r == parse_poly("1/2+z1")
        assert entries[5].axis == 2
        assert entries[5].gap == 2

    def test_constant_term_normalised(self):
        scaled = diagonal_structure(SpaceSpec.bergman(2), parse_poly("2-2*z1*z2"), 8)
        plain = diagonal_structure(SpaceSpec.bergman(2), self.f, 8)
        assert [e.r for e in scaled] == [e.r for e in plain]

    def test_invalid_profiles(self):
        with pytest.raises(ValueError):
            diagonal_structure(self.hardy, parse_poly("1-z1", 2), 3)
        with pytest.raises(ValueError):
            diagonal_structure(self.hardy, parse_poly("z1*z2"), 3)

    def test_weighted_monomial_product(self):
        a = [1, -1]
        for k, l in [((1, 1), (0, 0)), ((0, 0), (1, 1)), ((2, 1), (1, 0)), ((1, 0), (0, 1))]:
            direct = inner_product(
                self.hardy, self.f.shift(k), self.f.shift(l)
            )
            assert weighted_monomial_product(self.hardy, a, k, l) == direct
        assert weighted_monomial_product(self.hardy, a, (1, 1), (0, 0)) == -1

    def test_basis_arguments(self):
        assert weighted_orthogonal_r(2) == parse_poly("(1+2*z1+3*z1^2)/3")
        assert hardy_diag_basis(1, 1, axis=2) == parse_poly("z2/2+z1*z2^2")
        with pytest.raises(ValueError):
            hardy_diag_basis(0, 1, axis=3)
        with pytest.raises(ValueError):
            hardy_diag_basis(-1, 1)
        with pytest.raises(ValueError):
            weighted_orthogonal_r(-1)
