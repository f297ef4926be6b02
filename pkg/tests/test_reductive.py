import numpy as np
import pytest

from nkahler import reductive as rd
from nkahler.linalg import RankDeficiency
from nkahler.octonion import cross

ANCHORS = [np.eye(7)[6], np.eye(7)[0], np.ones(7) / np.sqrt(7)]


@pytest.fixture(scope="module")
def g2():
    return rd.derivation_algebra()


class TestDerivations:
    def test_dimension(self, g2):
        assert g2.dim == 14

    def test_invariants(self, g2):
        assert g2.leibniz_residual() <= 1e-10
        assert g2.skew_residual() <= 1e-10
        assert g2.closure_residual() <= 1e-10
        assert g2.jacobi_residual() <= 1e-10

    def test_derivations_are_automorphism_generators(self, g2, rng):
        # exp(D) preserves the cross product
        D = g2.element(rng.standard_normal(14))
        w, v = np.linalg.eigh(1j * D)
        g = (v @ np.diag(np.exp(-1j * w)) @ v.conj().T).real
        a, b = rng.standard_normal((2, 7))
        assert np.allclose(g @ cross(a, b), cross(g @ a, g @ b), atol=1e-10)

    def test_wrong_expected_dimension(self):
        with pytest.raises(RankDeficiency):
            rd.derivation_algebra(expected_dim=13)


class TestIsotropySplit:
    @pytest.mark.parametrize("p0", ANCHORS, ids=["e7", "e1", "diagonal"])
    def test_dimensions_and_invariants(self, g2, p0):
        split = rd.isotropy_split(g2, p0)
        assert split.h_basis.shape[0] == 8 and split.m_basis.shape[0] == 6
        res = rd.split_residuals(split)
        assert res["h_kills_p0"] <= 1e-12
        assert res["h_commutes_with_J"] <= 1e-10
        assert res["h_bracket_h_in_h"] <= 1e-10
        assert res["h_bracket_m_in_m"] <= 1e-10
        assert res["eval_min_singular_value"] > 0.1

    def test_non_unit_anchor(self, g2):
        with pytest.raises(ValueError):
            rd.isotropy_split(g2, np.ones(7))


class TestNaturalReductivity:
    def test_random_triples(self, g2):
        split = rd.isotropy_split(g2)
        assert rd.natural_reductivity_check(split, seed=0, n=1000) <= 1e-10

    def test_repeated_argument(self, g2, rng):
        split = rd.isotropy_split(g2)
        x, y = rng.standard_normal((2, 6))
        assert abs(split.metric(split.bracket_m(x, y), y)) <= 1e-10

    def test_torsion_table_antisymmetric(self, g2):
        split = rd.isotropy_split(g2)
        assert rd.table_antisymmetry(split.torsion_table()) <= 1e-10
        assert rd.torsion_invariance_residual(split) <= 1e-10


class TestCanonicalTorsion:
    @pytest.mark.parametrize("p0", ANCHORS, ids=["e7", "e1", "diagonal"])
    def test_kappa(self, g2, p0):
        fit = rd.canonical_torsion_match(rd.isotropy_split(g2, p0), seed=0, n=300)
        assert fit["residual"] <= 1e-8
        assert fit["kappa"] == pytest.approx(1.0, abs=1e-10)

    def test_degenerate_triple(self, g2, rng):
        split = rd.isotropy_split(g2)
        x, z = rng.standard_normal((2, 6))
        assert split.torsion(x, x, z) == pytest.approx(0.0, abs=1e-14)
