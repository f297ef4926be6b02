import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nkahler.octonion import (
    Octonion,
    basis,
    cayley_dickson_mul,
    cross,
    cross_constants,
    embed,
    identity_suite,
    imag,
    jacobi,
    multiplication_table,
    oct_conj,
    oct_mul,
    oct_norm,
    structure_constants,
    triple,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
E8 = np.eye(8)
oct8 = arrays(np.float64, 8, elements=finite)
vec7 = arrays(np.float64, 7, elements=finite)


class TestTable:
    def test_unit_is_identity(self, rng):
        x = rng.standard_normal(8)
        assert np.allclose(oct_mul(E8[0], x), x, atol=0)
        assert np.allclose(oct_mul(x, E8[0]), x, atol=0)

    def test_e1_e2_is_e3(self):
        assert np.array_equal(oct_mul(E8[1], E8[2]), E8[3])

    @pytest.mark.parametrize("i", range(1, 8))
    def test_imaginary_units_square_to_minus_one(self, i):
        assert np.array_equal(oct_mul(E8[i], E8[i]), -E8[0])

    def test_table_entries_are_signed_units(self):
        c = structure_constants()
        assert np.all(np.abs(c).sum(axis=2) == 1)

    def test_agrees_with_cayley_dickson(self, rng):
        x, y = rng.standard_normal((2, 100, 8))
        assert np.abs(oct_mul(x, y) - cayley_dickson_mul(x, y)).max() < 1e-13

    def test_printable(self):
        text = str(multiplication_table())
        assert "e7" in text and len(text.splitlines()) >= 8

    def test_cross_constants_fully_antisymmetric(self):
        f = cross_constants()
        for perm in [(1, 0, 2), (0, 2, 1), (2, 1, 0)]:
            assert np.array_equal(f, -f.transpose(perm))
        assert np.count_nonzero(f) == 7 * 6


class TestConjugation:
    def test_conj_of_one(self):
        assert np.array_equal(oct_conj(E8[0]), E8[0])

    def test_conj_of_e5(self):
        assert np.array_equal(oct_conj(E8[5]), -E8[5])

    @given(oct8)
    def test_involution(self, x):
        assert np.array_equal(oct_conj(oct_conj(x)), x)

    def test_embed_and_imag_round_trip(self, rng):
        v = rng.standard_normal(7)
        assert embed(v)[0] == 0
        assert np.array_equal(imag(embed(v)), v)


class TestComposition:
    @given(oct8, oct8)
    def test_norm_multiplicative(self, x, y):
        lhs = oct_norm(oct_mul(x, y))
        assert lhs == pytest.approx(oct_norm(x) * oct_norm(y), rel=1e-12, abs=1e-12)

    @given(oct8, oct8)
    def test_conjugation_reverses_products(self, x, y):
        lhs = oct_conj(oct_mul(x, y))
        rhs = oct_mul(oct_conj(y), oct_conj(x))
        assert np.allclose(lhs, rhs, atol=1e-10)

    def test_basis_is_cayley_unit(self):
        assert np.array_equal(embed(basis(5)), E8[5])
        with pytest.raises(ValueError):
            basis(0)

    def test_not_associative(self):
        a, b, c = E8[1], E8[2], E8[4]
        assert not np.allclose(oct_mul(oct_mul(a, b), c), oct_mul(a, oct_mul(b, c)))


class TestCross:
    @given(vec7)
    def test_self_cross_vanishes(self, a):
        assert np.allclose(cross(a, a), 0, atol=1e-12)

    def test_e1_cross_e2(self):
        e = np.eye(7)
        assert np.array_equal(cross(e[0], e[1]), e[2])

    def test_malcev_on_basis(self):
        e = np.eye(7)
        assert np.array_equal(cross(e[0], cross(e[0], e[1])), -e[1])

    @given(vec7, vec7)
    @settings(max_examples=50)
    def test_malcev(self, a, b):
        lhs = cross(a, cross(a, b))
        rhs = -(a @ a) * b + (a @ b) * a
        assert np.allclose(lhs, rhs, atol=1e-10 * (1 + (a @ a) * np.linalg.norm(b)))

    @given(vec7, vec7)
    @settings(max_examples=50)
    def test_commutator_of_imaginary_octonions(self, a, b):
        comm = 0.5 * (oct_mul(embed(a), embed(b)) - oct_mul(embed(b), embed(a)))
        assert np.allclose(comm, embed(cross(a, b)), atol=1e-10)

    def test_triple(self, rng):
        e = np.eye(7)
        a, b = rng.standard_normal((2, 7))
        assert triple(e[0], e[1], e[2]) == 1
        assert abs(triple(a, a, b)) < 1e-12

    def test_jacobi_witness(self):
        e = np.eye(7)
        assert np.linalg.norm(jacobi(e[0], e[1], e[3])) == pytest.approx(3.0)

    def test_jacobi_vanishes_inside_quaternions(self, rng):
        a, b, c = rng.standard_normal((3, 3))
        pad = lambda v: np.concatenate([v, np.zeros(4)])  # noqa: E731
        assert np.allclose(jacobi(pad(a), pad(b), pad(c)), 0, atol=1e-12)


class TestOctonionType:
    def test_arithmetic(self):
        i, j = Octonion.unit(1), Octonion.unit(2)
        assert i * j == Octonion.unit(3)
        assert (i * j).conj() == -Octonion.unit(3)
        assert (i + j - j) == i
        assert Octonion.from_cayley(np.eye(7)[4]) == Octonion.unit(5)

    def test_norm_and_real(self):
        x = Octonion(np.arange(8.0))
        assert x.real == 0.0
        assert x.norm() == pytest.approx(np.sqrt(np.sum(np.arange(8.0) ** 2)))


class TestIdentitySuite:
    def test_default_run(self):
        res = identity_suite(0, 2000)
        for key in ("norm_multiplicativity", "malcev", "orthogonal_c", "triple_product", "cross_is_commutator"):
            assert res[key] <= 1e-12, key
        assert res["jacobi"] > 0.5

    def test_printed_orthogonal_form_fails(self):
        # the sign of the first term is flipped relative to the identity that holds
        assert identity_suite(0, 500)["orthogonal_c_as_printed"] > 1.0

    def test_deterministic(self):
        assert identity_suite(3, 200) == identity_suite(3, 200)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            identity_suite(0, 0)
