"""
Tests for exact arithmetic in Q(zeta_n).
"""
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy.utilities.exceptions import SymPyDeprecationWarning

from clifford_cyclotomic_tool import cyclotomic as cyc
from clifford_cyclotomic_tool.errors import (
    DivisionByZeroError,
    LevelMismatchError,
    NotAutomorphismError,
    NotRealError,
    NotTwoLocalError,
    PayloadError,
)
from .test_utils import sqrt2

small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=8)


def elements(n):
    return st.lists(small_rationals, min_size=cyc.degree(n), max_size=cyc.degree(n)).map(
        lambda coeffs: cyc.CycElem(n, tuple(coeffs)))


class TestCyclotomicPolynomials:
    """Phi_n and the power basis."""

    def test_small_levels(self):
        """Coefficients are listed lowest degree first."""
        assert cyc.cyclotomic_poly(1) == (-1, 1)
        assert cyc.cyclotomic_poly(4) == (1, 0, 1)
        assert cyc.cyclotomic_poly(8) == (1, 0, 0, 0, 1)
        assert cyc.cyclotomic_poly(12) == (1, 0, -1, 0, 1)

    def test_degree_is_euler_phi(self):
        """deg Phi_n equals phi(n)."""
        assert [cyc.degree(n) for n in (3, 8, 12, 16, 21, 24)] == [2, 4, 4, 8, 12, 8]

    def test_coefficient_count_is_checked(self):
        """A level-8 element needs exactly four coefficients."""
        with pytest.raises(ValueError):
            cyc.CycElem(8, (1, 2, 3))


class TestRingOperations:
    """Field operations on reduced coefficient vectors."""

    def test_zeta_has_order_n(self):
        """zeta_8^4 = -1 and zeta_8^8 = 1."""
        z = cyc.zeta(8)
        assert z ** 4 == -1
        assert z ** 8 == 1
        assert cyc.zeta(8, 9) == z

    def test_sqrt2_squares_to_two(self):
        """zeta_8 - zeta_8^3 is sqrt(2)."""
        assert sqrt2() * sqrt2() == 2

    def test_inverse(self):
        """(1 + zeta_8)^-1 multiplies back to one."""
        a = 1 + cyc.zeta(8)
        assert a * cyc.inv(a) == 1
        assert a / a == 1
        assert a ** -2 * a * a == 1

    def test_inverse_of_zero_raises(self):
        """Zero has no inverse."""
        with pytest.raises(DivisionByZeroError):
            cyc.inv(cyc.zero(8))
        with pytest.raises(ZeroDivisionError):
            cyc.one(8) / 0

    def test_level_mismatch(self):
        """Elements of different levels do not combine."""
        with pytest.raises(LevelMismatchError):
            cyc.zeta(8) + cyc.zeta(12)

    def test_from_poly_reduces(self):
        """Long coefficient lists fold modulo x^n - 1 and reduce modulo Phi_n."""
        assert cyc.from_poly(8, [0, 0, 0, 0, 1]) == -1
        assert cyc.from_poly(4, [1, 0, 0, 0, 0, 1]) == 1 + cyc.zeta(4)

    def test_level_raise(self):
        """zeta_4 becomes zeta_8^2 at level 8."""
        i = cyc.zeta(4)
        assert cyc.level_raise(i, 2) == cyc.zeta(8, 2)
        assert cyc.level_raise(cyc.from_rational(3, Fraction(1, 2)), 4) == Fraction(1, 2)

    @settings(max_examples=40, deadline=None)
    @given(elements(12), elements(12), elements(12))
    def test_ring_axioms(self, a, b, c):
        """Addition and multiplication are commutative, associative and distributive."""
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0

    @settings(max_examples=30, deadline=None)
    @given(elements(8))
    def test_inverse_property(self, a):
        """Every nonzero element is invertible."""
        if a:
            assert a * cyc.inv(a) == 1


class TestGaloisAndMembership:
    """Automorphisms, conjugation and R_n membership."""

    def test_conjugation(self):
        """conj(zeta_8) = zeta_8^7 and conj fixes sqrt(2)."""
        assert cyc.conj(cyc.zeta(8)) == cyc.zeta(8, 7)
        assert cyc.is_real(sqrt2())
        assert not cyc.is_real(cyc.zeta(8))

    def test_galois_is_a_ring_map(self):
        """sigma_3 sends sqrt(2) to -sqrt(2) at level 8."""
        assert cyc.galois(sqrt2(), 3) == -sqrt2()
        a, b = 1 + cyc.zeta(8), 2 - cyc.zeta(8, 3)
        assert cyc.galois(a * b, 5) == cyc.galois(a, 5) * cyc.galois(b, 5)

    def test_non_unit_exponent(self):
        """zeta_8 -> zeta_8^2 is not an automorphism."""
        with pytest.raises(NotAutomorphismError):
            cyc.galois(cyc.zeta(8), 2)

    def test_rn_membership(self):
        """Only powers of two may appear in denominators of R_n."""
        assert cyc.is_in_Rn((1 + cyc.zeta(8)) / 4)
        assert not cyc.is_in_Rn(cyc.from_rational(8, Fraction(1, 3)))
        assert cyc.is_in_Rn_plus(sqrt2() / 2)
        assert not cyc.is_in_Rn_plus(cyc.zeta(8) / 2)

    def test_denominator_exponent(self):
        """denom_exp is the least k with 2^k a integral."""
        assert cyc.denom_exp(cyc.one(8)) == 0
        assert cyc.denom_exp((1 + cyc.zeta(8)) / 4) == 2
        with pytest.raises(NotTwoLocalError):
            cyc.denom_exp(cyc.from_rational(8, Fraction(1, 6)))

    def test_norms(self):
        """N(1 + zeta_8) = Phi_8(-1) = 2 and N_{F_8/Q}(sqrt 2) = -2."""
        assert cyc.field_norm(1 + cyc.zeta(8)) == 2
        assert cyc.field_norm(cyc.from_rational(8, 3)) == 81
        assert cyc.real_norm(sqrt2()) == -2
        assert cyc.real_norm(2 + sqrt2()) == 2


class TestEmbeddings:
    """Exact signs of real elements."""

    def test_embedding_indices(self):
        """One index per complex-conjugate pair of units."""
        assert cyc.real_embedding_indices(8) == (1, 3)
        assert cyc.real_embedding_indices(12) == (1, 5)
        assert cyc.real_embedding_indices(21) == (1, 2, 4, 5, 8, 10)

    def test_total_positivity(self):
        """2 + sqrt(2) is totally positive, sqrt(2) is not."""
        assert cyc.is_totally_positive(2 + sqrt2())
        assert not cyc.is_totally_positive(sqrt2())
        assert cyc.embeddings(sqrt2()).signs() == (1, -1)

    def test_sign_of_a_non_real_element(self):
        """Only real elements have signs."""
        with pytest.raises(NotRealError):
            cyc.embedding_sign(cyc.zeta(8), 1)

    def test_compare_real(self):
        """1 < sqrt(2) < 3/2 at the first embedding."""
        assert cyc.compare_real(sqrt2(), cyc.one(8)) == 1
        assert cyc.compare_real(sqrt2(), cyc.from_rational(8, Fraction(3, 2))) == -1
        assert cyc.compare_real(sqrt2(), sqrt2()) == 0

    def test_embedding_width(self):
        """Requested widths are honoured."""
        box = cyc.embeddings(sqrt2(), width=Fraction(1, 10 ** 30))
        for lo, hi in zip(box.lower, box.upper):
            assert hi - lo <= Fraction(1, 10 ** 30)
        assert box.lower[0] ** 2 < 2 < box.upper[0] ** 2


class TestSquareness:
    """Square certificates in the real subfield."""

    def test_square_of_a_real_element(self):
        """(1 + sqrt 2)^2 has the root 1 + sqrt 2, positive at the first embedding."""
        b = 1 + sqrt2()
        cert = cyc.is_square_in_F(b * b)
        assert cert.is_square
        assert cert.root == b

    def test_square_root_at_level_16(self):
        """2 + sqrt(2) = (2 cos(pi/8))^2 is a square in F_16."""
        a = 2 + cyc.zeta(16, 2) + cyc.zeta(16, 14)
        cert = cyc.is_square_in_F(a)
        assert cert.is_square
        assert cert.root == cyc.zeta(16, 1) + cyc.zeta(16, 15)

    def test_rational_squares(self):
        """9/4 is a square everywhere; 3 is a square in F_12 = Q(sqrt 3) but not in F_8."""
        assert cyc.is_square_in_F(cyc.from_rational(8, Fraction(9, 4))).root == Fraction(3, 2)
        assert cyc.is_square_in_F(cyc.from_rational(12, 3)).root == cyc.zeta(12, 1) + cyc.zeta(12, 11)
        assert not cyc.is_square_in_F(cyc.from_rational(8, 3)).is_square

    def test_sign_witness(self):
        """sqrt(2) is negative at embedding 3, so it cannot be a square."""
        cert = cyc.is_square_in_F(sqrt2())
        assert not cert.is_square
        assert cert.kind == "sign"
        assert cert.embedding == 3

    def test_residue_witness(self):
        """(2 + sqrt 2)/4 is totally positive but a non-residue at a split prime."""
        cert = cyc.is_square_in_F((2 + sqrt2()) / 4)
        assert not cert.is_square
        assert cert.kind == "residue"
        assert cert.witness_prime % 8 == 1

    def test_non_real_input(self):
        """Squareness is only decided in the real subfield."""
        with pytest.raises(NotRealError):
            cyc.is_square_in_F(cyc.zeta(8))


class TestSpecialElements:
    """Gauss sums and sqrt(21)."""

    def test_gauss_sums(self):
        """g_p^2 = (-1)^((p-1)/2) p."""
        assert cyc.quadratic_gauss_sum(3) ** 2 == -3
        assert cyc.quadratic_gauss_sum(5) ** 2 == 5
        assert cyc.quadratic_gauss_sum(7, 21) ** 2 == -7

    def test_residue_symbols_raise_no_deprecation(self):
        """Legendre symbols come from their current sympy location."""
        with warnings.catch_warnings():
            warnings.simplefilter("error", SymPyDeprecationWarning)
            assert cyc.quadratic_gauss_sum(11) ** 2 == -11
            assert cyc.is_square_in_F((2 + sqrt2()) / 4).kind == "residue"

    def test_sqrt21(self):
        """sqrt(21) squares to 21 and is positive at the first embedding."""
        s = cyc.sqrt21()
        assert s * s == 21
        assert cyc.first_embedding_sign(s) == 1


class TestJsonCodec:
    """The {"n", "coeffs"} element format."""

    def test_round_trip(self):
        """Coefficients are written as decimal strings."""
        a = (1 + 3 * cyc.zeta(8, 3)) / 4
        data = cyc.to_json(a)
        assert data == {"n": 8, "coeffs": [["1", "4"], ["0", "1"], ["0", "1"], ["3", "4"]]}
        assert cyc.from_json(data) == a

    def test_bare_rational_needs_a_level(self):
        """"1/2" is accepted only when the level is known."""
        assert cyc.from_json("1/2", 8) == Fraction(1, 2)
        with pytest.raises(PayloadError):
            cyc.from_json("1/2")

    def test_malformed_coefficients(self):
        """Bad coefficients and levels are payload errors."""
        with pytest.raises(PayloadError):
            cyc.from_json({"n": 8, "coeffs": [["1", "0"], 0, 0, 0]})
        with pytest.raises(PayloadError):
            cyc.from_json({"n": 0, "coeffs": []})
        with pytest.raises(PayloadError):
            cyc.from_json({"n": 8, "coeffs": "1"})


dyadic = st.builds(lambda a, k: Fraction(a, 2 ** k), st.integers(-8, 8), st.integers(0, 3))


def dyadic_elements(n):
    return st.lists(dyadic, min_size=cyc.degree(n), max_size=cyc.degree(n)).map(
        lambda coeffs: cyc.CycElem(n, tuple(coeffs)))


class TestGaloisProperties:
    """Galois action, conjugation and 2-adic denominators on random elements."""

    @settings(max_examples=40, deadline=None)
    @given(elements(12), st.sampled_from([1, 5, 7, 11]), st.sampled_from([1, 5, 7, 11]))
    def test_galois_composition(self, a, j, k):
        """sigma_j sigma_k = sigma_jk and conj commutes with every sigma_k."""
        assert cyc.galois(cyc.galois(a, k), j) == cyc.galois(a, (j * k) % 12)
        assert cyc.conj(cyc.galois(a, k)) == cyc.galois(cyc.conj(a), k)

    @settings(max_examples=40, deadline=None)
    @given(elements(8))
    def test_conj_is_an_involution(self, a):
        """conj(conj(a)) = a, and a conj(a) is real and totally positive for a != 0."""
        assert cyc.conj(cyc.conj(a)) == a
        if a:
            norm = a * cyc.conj(a)
            assert cyc.is_real(norm)
            assert cyc.is_totally_positive(norm)

    @settings(max_examples=40, deadline=None)
    @given(dyadic_elements(8), dyadic_elements(8))
    def test_denominator_exponent_of_products(self, a, b):
        """denom_exp(ab) <= denom_exp(a) + denom_exp(b)."""
        assert cyc.is_in_Rn(a) and cyc.is_in_Rn(b)
        assert cyc.denom_exp(a * b) <= cyc.denom_exp(a) + cyc.denom_exp(b)

    @settings(max_examples=30, deadline=None)
    @given(dyadic_elements(12))
    def test_real_squares_are_totally_positive(self, b):
        """For real a != 0, a^2 is totally positive."""
        a = b + cyc.conj(b)
        if a:
            assert cyc.is_totally_positive(a * a)


class TestSquareCorpus:
    """Squares of random real elements are recognised with a certified root."""

    def test_two_hundred_squares(self, rng):
        """is_square_in_F(a^2) returns Square with root +-a."""
        for t in range(200):
            n = 8 if t % 2 else 12
            coeffs = [Fraction(rng.randint(-6, 6), 2 ** rng.randint(0, 2)) for _ in range(cyc.degree(n))]
            b = cyc.CycElem(n, tuple(coeffs))
            a = b + cyc.conj(b)
            if not a:
                continue
            cert = cyc.is_square_in_F(a * a)
            assert cert.is_square
            assert cert.root == a or cert.root == -a
