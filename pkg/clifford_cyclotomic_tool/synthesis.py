"""
Gate words over {H, T_n}, their rewriting into products of H(zeta_n^j), and
exact synthesis of U2(R_8) matrices by denominator-exponent descent.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Tuple, Union

from . import cyclotomic as cyc
from . import matrices as mat
from .config import get_settings
from .errors import (
    InvariantViolation,
    NotInGroupError,
    NotSpecialError,
    PayloadError,
    UnsupportedLevelError,
    UnsynthesizedError,
)

logger = logging.getLogger(__name__)

SYNTHESIS_LEVELS = (8, 12, 16, 24)

Token = Union[str, int]


# --- Words ---

def _normalize(tokens, n):
    out = []
    for token in tokens:
        if token == "H":
            out.append("H")
            continue
        k = token % n
        if out and out[-1] != "H":
            k = (out.pop() + k) % n
        if k:
            out.append(k)
    return tuple(out)


@dataclass(frozen=True)
class GateWord:
    """Tokens are "H" or an integer k standing for T_n^k; adjacent T powers are merged."""
    n: int
    tokens: Tuple[Token, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'tokens', _normalize(self.tokens, self.n))

    def __add__(self, other):
        return GateWord(self.n, self.tokens + other.tokens)

    def __len__(self):
        return len(self.tokens)

    def h_count(self):
        return sum(1 for t in self.tokens if t == "H")


@dataclass(frozen=True)
class HzWord:
    n: int
    factors: Tuple[int, ...] = ()


def parse_word(text, n):
    """Parses space-separated tokens "H", "T" and "T^k" (k may be negative)."""
    tokens = []
    for raw in text.split():
        if raw == "H":
            tokens.append("H")
        elif raw == "T":
            tokens.append(1)
        elif raw.startswith("T^"):
            try:
                tokens.append(int(raw[2:]))
            except ValueError:
                raise PayloadError(f"Invalid T exponent in token '{raw}'")
        else:
            raise PayloadError(f"Unknown gate token '{raw}' (expected H, T or T^k)")
    return GateWord(n, tuple(tokens))


def format_word(word):
    return " ".join("H" if t == "H" else f"T^{t}" for t in word.tokens)


def det_power(word):
    """j with det(eval_word(word)) = zeta_n^j; det H = -i = zeta_n^(-n/4)."""
    n = word.n
    total = sum(t for t in word.tokens if t != "H")
    return (total - (n // 4) * word.h_count()) % n


def eval_word(word):
    n = word.n
    mat.imaginary_unit(n)
    h, t = mat.gate_H(n), mat.gate_T(n)
    result = mat.UMat.identity(n)
    for token in word.tokens:
        result = result * (h if token == "H" else t ** token)
    return result


def eval_hz_word(word):
    result = mat.UMat.identity(word.n)
    for j in word.factors:
        result = result * mat.gate_Hz(word.n, j)
    return result


def to_hz_word(word):
    """
    Rewrites a determinant-1 word as a product of H(zeta_n^j). Each H becomes
    T_n^(-n/4) H(1) and every T power is pushed to the right through
    T^c H(1) = H(zeta_n^-c) T^c; the trailing power is T^0.
    """
    n = word.n
    mat.imaginary_unit(n)
    current = 0
    factors = []
    for token in word.tokens:
        if token == "H":
            current -= n // 4
            factors.append((-current) % n)
        else:
            current += token
    if current % n:
        raise NotSpecialError(f"Word '{format_word(word)}' has determinant zeta_{n}^{current % n}, not 1")
    return HzWord(n, tuple(factors))


def random_word(n, length, rng):
    tokens = ["H" if rng.random() < 0.5 else rng.randrange(1, n) for _ in range(length)]
    return GateWord(n, tuple(tokens))


def special_word(n, length, rng):
    """A random word closed off by the T power that makes its determinant 1."""
    word = random_word(n, length, rng)
    return word + GateWord(n, (-det_power(word),))


def random_hz_word(n, length, rng):
    return HzWord(n, tuple(rng.randrange(n) for _ in range(length)))


# --- Synthesis ---

def scalar_word(n, c):
    """A word evaluating to zeta_n^c I, built from H T^(n/2) H T H T^(n/2) H T = -zeta_n I."""
    half = n // 2
    unit = GateWord(n, ("H", half, "H", 1, "H", half, "H", 1))
    k = (c * pow(1 + half, -1, n)) % n
    return GateWord(n, unit.tokens * k)


def _root_power(x):
    return mat.root_of_unity_power(x) if x else None


def monomial_word(u):
    """A word for a diagonal or anti-diagonal matrix with root-of-unity entries, or None."""
    n = u.n
    (p, q), (r, s) = u.rows
    if not q and not r:
        a, b = _root_power(p), _root_power(s)
        if a is None or b is None:
            return None
        return scalar_word(n, a) + GateWord(n, (b - a,))
    if not p and not s:
        a, b = _root_power(q), _root_power(r)
        if a is None or b is None:
            return None
        # [[0, z^a], [z^b, 0]] = X z^b T^(a-b) with X = zeta_n^(3n/4) H T^(n/2) H.
        return GateWord(n, ("H", n // 2, "H")) + scalar_word(n, b + 3 * n // 4) + GateWord(n, (a - b,))
    return None


def sqrt2_sde(x):
    """Least k >= 0 with sqrt(2)^k x integral, for x in Z[zeta_8, 1/2]."""
    if x.is_zero():
        return 0
    k2 = cyc.denom_exp(x)
    if k2 == 0:
        return 0
    root2 = cyc.zeta(8, 1) - cyc.zeta(8, 3)
    if cyc.denom_exp(x * root2 * 2 ** (k2 - 1)) == 0:
        return 2 * k2 - 1
    return 2 * k2


def _norm_top_left(u):
    return u[0, 0] * cyc.conj(u[0, 0])


def _step(u, a, h_dagger, t):
    return h_dagger * t ** (-a) * u


def _descend(u, potential, lookahead, max_steps, branching):
    """
    Repeatedly replaces u by H^dagger T^-a u choosing the smallest resulting
    potential (then smallest a). When no single step lowers the potential,
    sequences of up to `lookahead` steps are searched breadth first.
    Returns (prefix tokens, final matrix) or None when stuck.
    """
    n = u.n
    h_dagger = mat.dagger(mat.gate_H(n))
    t = mat.gate_T(n)
    prefix = []
    current = potential(u)
    steps = 0
    while current != potential.floor:
        if steps >= max_steps:
            return None
        candidates = [(potential(_step(u, a, h_dagger, t)), a) for a in range(branching)]
        best, a = min(candidates)
        if best < current:
            u = _step(u, a, h_dagger, t)
            prefix.extend([a, "H"])
            current = best
            steps += 1
            logger.debug(f"Descent step T^{a} H -> potential {best}")
            continue
        found = None
        for depth in range(2, lookahead + 1):
            for seq in itertools.product(range(branching), repeat=depth):
                v = u
                for b in seq:
                    v = _step(v, b, h_dagger, t)
                if potential(v) < current:
                    found = (seq, v)
                    break
            if found:
                break
        if not found:
            return None
        seq, u = found
        for b in seq:
            prefix.extend([b, "H"])
        current = potential(u)
        steps += len(seq)
        logger.debug(f"Lookahead of {len(seq)} steps -> potential {current}")
    return prefix, u


class _Sqrt2Potential:
    floor = 0

    def __call__(self, u):
        return sqrt2_sde(_norm_top_left(u))


class _DyadicPotential:
    """2-adic exponent of |u|^2, then whether u is monomial."""
    floor = (0, 0)

    def __call__(self, u):
        (p, q), (r, s) = u.rows
        monomial = (not q and not r) or (not p and not s)
        return cyc.denom_exp(_norm_top_left(u)), 0 if monomial else 1


def _strip_determinant(u):
    member = mat.membership(u)
    if not member.in_u2_zeta:
        raise NotInGroupError(f"{u} is not in U2^zeta(R_{u.n})")
    j = member.det_power
    return j, mat.gate_T(u.n) ** (-j) * u


def synthesize_n8(u):
    """
    Returns a word over {H, T_8} evaluating exactly to u in U2(R_8). The
    potential is the sqrt(2)-adic exponent of |u_00|^2; the base cases are the
    monomial matrices.
    """
    if u.n != 8:
        raise UnsupportedLevelError(f"synthesize_n8 needs level 8, got {u.n}")
    if not mat.membership(u).in_u2:
        raise NotInGroupError(f"{u} is not in U2(R_8)")
    j, v = _strip_determinant(u)
    settings = get_settings()
    result = _descend(v, _Sqrt2Potential(), settings.synthesis_lookahead, settings.synthesis_max_steps, 4)
    if result is None:
        raise InvariantViolation(f"Descent stalled on {v}")
    prefix, base = result
    tail = monomial_word(base)
    if tail is None:
        raise InvariantViolation(f"Descent ended at a non-monomial matrix {base}")
    word = GateWord(8, (j,) + tuple(prefix)) + tail
    if eval_word(word) != u:
        raise InvariantViolation(f"Synthesized word '{format_word(word)}' does not evaluate to {u}")
    return word


def synthesize(u):
    """
    Synthesis at levels 8, 12, 16 and 24. Level 8 uses the complete descent;
    the other levels use a bounded descent that raises UnsynthesizedError.
    """
    if u.n == 8:
        return synthesize_n8(u)
    if u.n not in SYNTHESIS_LEVELS:
        raise UnsupportedLevelError(f"Synthesis supports levels {SYNTHESIS_LEVELS}, got {u.n}")
    j, v = _strip_determinant(u)
    settings = get_settings()
    result = _descend(v, _DyadicPotential(), settings.synthesis_lookahead, settings.synthesis_max_steps, u.n)
    if result is None:
        raise UnsynthesizedError(f"Bounded descent did not reach a monomial matrix at level {u.n}")
    prefix, base = result
    tail = monomial_word(base)
    if tail is None:
        raise UnsynthesizedError(f"Bounded descent ended at a non-monomial matrix at level {u.n}")
    word = GateWord(u.n, (j,) + tuple(prefix)) + tail
    if eval_word(word) != u:
        raise InvariantViolation(f"Synthesized word '{format_word(word)}' does not evaluate to {u}")
    return word
