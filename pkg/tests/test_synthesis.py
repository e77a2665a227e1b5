"""
Tests for gate words, H(zeta^j) rewriting and exact synthesis.
"""
import pytest

from clifford_cyclotomic_tool import matrices as mat
from clifford_cyclotomic_tool import synthesis as syn
from clifford_cyclotomic_tool.errors import (
    NotInGroupError,
    NotSpecialError,
    PayloadError,
    UnsupportedLevelError,
)


class TestWords:
    """Parsing, formatting and evaluation."""

    def test_parse_and_format(self):
        """Adjacent T powers merge and T^n vanishes."""
        word = syn.parse_word("T H T^3 T^5 H T^-1", 8)
        assert word.tokens == (1, "H", "H", 7)
        assert syn.format_word(word) == "T^1 H H T^7"
        assert syn.parse_word("T^4 T^4", 8).tokens == ()

    def test_bad_tokens(self):
        """Unknown tokens and bad exponents are payload errors."""
        with pytest.raises(PayloadError):
            syn.parse_word("H S", 8)
        with pytest.raises(PayloadError):
            syn.parse_word("T^x", 8)

    def test_eval(self):
        """H T^4 H is the bit flip up to the scalar zeta_8^2."""
        u = syn.eval_word(syn.parse_word("H T^4 H", 8))
        assert u == mat.gate_X(8) * mat.imaginary_unit(8)

    def test_det_power(self, rng):
        """det(eval(w)) = zeta_n^det_power(w)."""
        for n in (8, 12):
            for _ in range(10):
                word = syn.random_word(n, rng.randint(1, 12), rng)
                assert mat.membership(syn.eval_word(word)).det_power == syn.det_power(word)

    def test_scalar_word(self):
        """scalar_word(n, c) evaluates to zeta_n^c I."""
        for n in (8, 12):
            for c in range(n):
                assert syn.eval_word(syn.scalar_word(n, c)) == mat.gate_scalar(n, c)


class TestHzRewriting:
    """Determinant-1 words as products of H(zeta_n^j)."""

    def test_round_trip(self, rng):
        """The rewritten word evaluates to the same matrix."""
        for n in (8, 12, 16):
            for _ in range(8):
                word = syn.special_word(n, rng.randint(1, 12), rng)
                assert syn.eval_hz_word(syn.to_hz_word(word)) == syn.eval_word(word)

    def test_factor_count(self):
        """One H(zeta^j) per H."""
        word = syn.parse_word("H T^2 H T^2", 8)
        assert syn.det_power(word) == 0
        assert len(syn.to_hz_word(word).factors) == 2

    def test_not_special(self):
        """T alone has determinant zeta_n."""
        with pytest.raises(NotSpecialError):
            syn.to_hz_word(syn.parse_word("T", 8))


class TestExactSynthesis:
    """Denominator-exponent descent."""

    def test_sde(self):
        """sqrt(2)-adic exponents of 1, 1/2 and 1/4."""
        one = mat.UMat.identity(8)[0, 0]
        assert syn.sqrt2_sde(one) == 0
        assert syn.sqrt2_sde(one / 2) == 2
        assert syn.sqrt2_sde(one / 4) == 4

    def test_round_trip_at_level_8(self, rng):
        """Random words of length <= 60 are re-synthesized exactly."""
        for _ in range(20):
            u = syn.eval_word(syn.random_word(8, rng.randint(1, 60), rng))
            word = syn.synthesize(u)
            assert syn.eval_word(word) == u

    def test_monomials(self):
        """Diagonal and anti-diagonal root-of-unity matrices need no descent."""
        for u in (mat.gate_T(8) ** 3, mat.gate_X(8), mat.gate_scalar(8, 5) * mat.gate_X(8) * mat.gate_T(8)):
            assert syn.eval_word(syn.monomial_word(u)) == u
            assert syn.eval_word(syn.synthesize_n8(u)) == u

    def test_simple_words_at_other_levels(self):
        """T^k and H are synthesized at levels 12, 16 and 24."""
        for n in (12, 16, 24):
            for u in (mat.gate_T(n) ** 5, mat.gate_H(n)):
                assert syn.eval_word(syn.synthesize(u)) == u

    def test_outside_the_group(self):
        """Non-unitary matrices are rejected."""
        with pytest.raises(NotInGroupError):
            syn.synthesize(mat.UMat.diagonal(8, [2, 1]))

    def test_unsupported_level(self):
        """Level 20 has no synthesis procedure."""
        with pytest.raises(UnsupportedLevelError):
            syn.synthesize(mat.gate_T(20))

    def test_random_hz_words(self, rng):
        """Products of H(zeta^j) have determinant 1 and survive synthesis at level 8."""
        for _ in range(10):
            u = syn.eval_hz_word(syn.random_hz_word(8, rng.randint(1, 12), rng))
            assert mat.membership(u).in_su2
            assert syn.eval_word(syn.synthesize(u)) == u
