"""
Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are stored on the power basis 1, zeta_n, ..., zeta_n^(phi(n)-1) with
Fraction coefficients, reduced modulo the cyclotomic polynomial. Real
subfield elements are simply the elements fixed by complex conjugation.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import sympy
from sympy import Poly, QQ, Rational
from sympy.functions.combinatorial.numbers import legendre_symbol
from sympy.ntheory import isprime, primitive_root, sqrt_mod

from . import intervals
from .config import get_settings
from .errors import (
    DivisionByZeroError,
    InvariantViolation,
    LevelMismatchError,
    NotAutomorphismError,
    NotRealError,
    NotTwoLocalError,
    PayloadError,
    UndecidedError,
)

logger = logging.getLogger(__name__)

_x = sympy.Symbol('x')


# --- Cyclotomic polynomials ---

@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """
    Returns the coefficients of Phi_n in ascending order.
    Phi_n is obtained by dividing x^n - 1 exactly by Phi_d for every proper divisor d of n.
    """
    if n < 1:
        raise ValueError(f"Cyclotomic level must be positive, got {n}")
    quotient = Poly(_x ** n - 1, _x, domain='ZZ')
    for d in sympy.divisors(n)[:-1]:
        quotient = quotient.exquo(Poly(list(reversed(cyclotomic_poly(d))), _x, domain='ZZ'))
    return tuple(int(c) for c in reversed(quotient.all_coeffs()))


def degree(n):
    return len(cyclotomic_poly(n)) - 1


def _reduce(values, n):
    """Reduces an ascending coefficient list modulo Phi_n (works for ints and Fractions)."""
    phi = cyclotomic_poly(n)
    d = len(phi) - 1
    if len(values) > n:
        folded = [0] * n
        for j, c in enumerate(values):
            folded[j % n] += c
        values = folded
    else:
        values = list(values)
    for k in range(len(values) - 1, d - 1, -1):
        c = values[k]
        if c:
            shift = k - d
            for j in range(d):
                if phi[j]:
                    values[shift + j] -= c * phi[j]
            values[k] = 0
    values = values[:d]
    values.extend([0] * (d - len(values)))
    return values


def _integral(coeffs):
    den = math.lcm(*(c.denominator for c in coeffs))
    return den, [c.numerator * (den // c.denominator) for c in coeffs]


# --- Elements ---

@dataclass(frozen=True, eq=False)
class CycElem:
    n: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(c if type(c) is Fraction else Fraction(c) for c in self.coeffs)
        if len(coeffs) != degree(self.n):
            raise ValueError(f"Level {self.n} needs {degree(self.n)} coefficients, got {len(coeffs)}")
        object.__setattr__(self, 'coeffs', coeffs)

    def _coerce(self, other):
        if isinstance(other, CycElem):
            if other.n != self.n:
                raise LevelMismatchError(f"Cannot combine elements of levels {self.n} and {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return from_rational(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycElem(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycElem(self.n, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycElem(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycElem(self.n, tuple(c * other for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            return self * other.coeffs[0]
        if self.is_rational():
            return other * self.coeffs[0]
        da, ia = _integral(self.coeffs)
        db, ib = _integral(other.coeffs)
        product = [0] * (len(ia) + len(ib) - 1)
        for i, x in enumerate(ia):
            if x:
                for j, y in enumerate(ib):
                    if y:
                        product[i + j] += x * y
        den = da * db
        return CycElem(self.n, tuple(Fraction(c, den) for c in _reduce(product, self.n)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZeroError("Division by zero")
            return CycElem(self.n, tuple(c / other for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * inv(other)

    def __rtruediv__(self, other):
        return inv(self) * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return inv(self) ** (-k)
        result = from_rational(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CycElem):
            return self.n == other.n and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                power = "z" if j == 1 else f"z^{j}"
                terms.append(power if c == 1 else f"{c}*{power}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"CycElem(n={self.n}, {self})"


def from_rational(n, q):
    return CycElem(n, (Fraction(q),) + (Fraction(0),) * (degree(n) - 1))


def from_poly(n, coeffs):
    """Builds the element sum(c_j * zeta_n^j) from a coefficient list of any length."""
    return CycElem(n, tuple(_reduce([Fraction(c) for c in coeffs], n)))


def zeta(n, k=1):
    coeffs = [0] * n
    coeffs[k % n] = 1
    return from_poly(n, coeffs)


def zero(n):
    return from_rational(n, 0)


def one(n):
    return from_rational(n, 1)


# --- Field operations ---

def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def neg(a):
    return -a


def inv(a):
    """Inverse via the extended gcd of the representing polynomial with Phi_n."""
    if a.is_zero():
        raise DivisionByZeroError(f"Cannot invert zero at level {a.n}")
    if a.is_rational():
        return from_rational(a.n, 1 / a.coeffs[0])
    p = Poly([Rational(c.numerator, c.denominator) for c in reversed(a.coeffs)], _x, domain=QQ)
    modulus = Poly(list(reversed(cyclotomic_poly(a.n))), _x, domain=QQ)
    r = p.invert(modulus)
    return from_poly(a.n, [Fraction(int(c.p), int(c.q)) for c in reversed(r.all_coeffs())])


def galois(a, k):
    """Applies the automorphism zeta_n -> zeta_n^k."""
    n = a.n
    if math.gcd(k % n, n) != 1:
        raise NotAutomorphismError(f"zeta_{n} -> zeta_{n}^{k} is not an automorphism (gcd({k}, {n}) != 1)")
    out = [Fraction(0)] * n
    for j, c in enumerate(a.coeffs):
        if c:
            out[(j * k) % n] += c
    return CycElem(n, tuple(_reduce(out, n)))


def conj(a):
    return galois(a, -1)


def level_raise(a, m):
    """Re-expresses a at level n*m using zeta_n = zeta_(n*m)^m."""
    if m < 1:
        raise ValueError(f"Level multiplier must be positive, got {m}")
    if m == 1:
        return a
    target = a.n * m
    out = [Fraction(0)] * (len(a.coeffs) * m)
    for j, c in enumerate(a.coeffs):
        out[j * m] = c
    return from_poly(target, out)


# --- Membership ---

def is_real(a):
    return conj(a) == a


def _is_power_of_two(d):
    return d & (d - 1) == 0


def is_in_Rn(a):
    return all(_is_power_of_two(c.denominator) for c in a.coeffs)


def is_in_Rn_plus(a):
    return is_in_Rn(a) and is_real(a)


def denom_exp(a):
    """Least k >= 0 such that 2^k * a has integer coefficients."""
    k = 0
    for c in a.coeffs:
        if not _is_power_of_two(c.denominator):
            raise NotTwoLocalError(f"Coefficient {c} has a denominator that is not a power of 2")
        k = max(k, c.denominator.bit_length() - 1)
    return k


def field_norm(a):
    """N_{K_n/Q}(a), computed as the resultant of Phi_n and the representing polynomial."""
    if a.is_rational():
        return a.coeffs[0] ** degree(a.n)
    p = Poly([Rational(c.numerator, c.denominator) for c in reversed(a.coeffs)], _x, domain=QQ)
    modulus = Poly(list(reversed(cyclotomic_poly(a.n))), _x, domain=QQ)
    value = Rational(modulus.resultant(p))
    return Fraction(int(value.p), int(value.q))


def real_norm(a):
    """N_{F_n/Q}(a) for real a: the product of its real conjugates."""
    if not is_real(a):
        raise NotRealError(f"{a} is not real")
    result = one(a.n)
    for k in real_embedding_indices(a.n):
        result = result * galois(a, k)
    if not result.is_rational():
        raise InvariantViolation(f"Norm of {a} is not rational")
    return result.coeffs[0]


# --- Real embeddings ---

@dataclass(frozen=True)
class EmbeddingBox:
    indices: Tuple[int, ...]
    lower: Tuple[Fraction, ...]
    upper: Tuple[Fraction, ...]

    def signs(self):
        return tuple(1 if lo > 0 else (-1 if hi < 0 else 0) for lo, hi in zip(self.lower, self.upper))


def real_embedding_indices(n):
    """One k per pair {k, n-k} of units mod n; zeta_n -> zeta_n^k gives the real embeddings of F_n."""
    if n <= 2:
        return (1,)
    return tuple(k for k in range(1, (n + 1) // 2) if math.gcd(k, n) == 1)


def _enclose(a, k, bits):
    with intervals.working_precision(bits):
        total = intervals.from_fraction(a.coeffs[0])
        for j, c in enumerate(a.coeffs[1:], start=1):
            if c:
                total = total + intervals.from_fraction(c) * intervals.cos_two_pi(j * k, a.n)
        return intervals.bounds(total)


def embeddings(a, width=None):
    """
    Encloses every real embedding of the real element a.
    Precision doubles until each interval excludes zero and, if width is given,
    is no wider than width.
    """
    if not is_real(a):
        raise NotRealError(f"{a} is not real")
    indices = real_embedding_indices(a.n)
    if a.is_rational():
        value = a.coeffs[0]
        return EmbeddingBox(indices, (value,) * len(indices), (value,) * len(indices))
    settings = get_settings()
    bits = settings.embedding_initial_precision
    while bits <= settings.embedding_max_precision:
        enclosures = [_enclose(a, k, bits) for k in indices]
        separated = all(lo > 0 or hi < 0 for lo, hi in enclosures)
        narrow = width is None or all(hi - lo <= width for lo, hi in enclosures)
        if separated and narrow:
            return EmbeddingBox(indices, tuple(lo for lo, _ in enclosures), tuple(hi for _, hi in enclosures))
        logger.debug(f"Refining embeddings of level-{a.n} element beyond {bits} bits")
        bits *= 2
    raise UndecidedError(f"Embeddings of {a} not separated from zero at {settings.embedding_max_precision} bits")


def is_totally_positive(a):
    if not is_real(a):
        raise NotRealError(f"{a} is not real")
    if a.is_zero():
        return False
    return all(s > 0 for s in embeddings(a).signs())


def embedding_sign(a, k):
    """Exact sign of the real element a under zeta_n -> zeta_n^k."""
    if not is_real(a):
        raise NotRealError(f"{a} is not real")
    if a.is_zero():
        return 0
    if a.is_rational():
        return 1 if a.coeffs[0] > 0 else -1
    settings = get_settings()
    bits = settings.embedding_initial_precision
    while bits <= settings.embedding_max_precision:
        lo, hi = _enclose(a, k, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    raise UndecidedError(f"Sign of {a} at embedding {k} undecided at {settings.embedding_max_precision} bits")


def first_embedding_sign(a):
    return embedding_sign(a, 1)


def compare_real(a, b):
    """-1, 0 or 1 as a <, =, > b under the embedding zeta_n -> exp(2*pi*i/n)."""
    return first_embedding_sign(a - b)


# --- Squareness ---

@dataclass(frozen=True)
class Square:
    root: CycElem

    is_square = True
    verdict = "Square"


@dataclass(frozen=True)
class NonSquare:
    """
    A refutation of squareness. A residue witness names a split prime p, the
    embedding index k (zeta_n -> omega^k mod p) and the non-residue image. A
    sign witness leaves witness_prime None and names an embedding where the
    element is negative.
    """
    witness_prime: Optional[int]
    embedding: int
    residue: Optional[int] = None

    is_square = False
    verdict = "NonSquare"

    @property
    def kind(self):
        return "sign" if self.witness_prime is None else "residue"


def _split_primes(n):
    step = n if n % 2 == 0 else 2 * n
    p = step + 1
    while True:
        if isprime(p):
            yield p
        p += step


def _root_of_unity(n, p, e=1):
    """A primitive n-th root of unity modulo p^e (the Teichmuller lift of one mod p)."""
    g = primitive_root(p)
    return pow(g, p ** (e - 1) * ((p - 1) // n), p ** e)


def _image(coeffs_mod, omega, modulus):
    value = 0
    power = 1
    for c in coeffs_mod:
        if c:
            value = (value + c * power) % modulus
        power = power * omega % modulus
    return value


def _coeffs_mod(a, modulus):
    return [c.numerator * pow(c.denominator, -1, modulus) % modulus for c in a.coeffs]


def _hensel_sqrt(x, p, e):
    """Square root of the unit x modulo p^e by Newton iteration from a root mod p."""
    r = sqrt_mod(x % p, p)
    precision = 1
    while precision < e:
        precision = min(2 * precision, e)
        modulus = p ** precision
        r = (r - (r * r - x) * pow(2 * r, -1, modulus)) % modulus
    return r % p ** e


def _rational_reconstruction(value, modulus):
    """Wang's rational reconstruction with numerator and denominator bounds sqrt(modulus/2)."""
    bound = math.isqrt((modulus - 1) // 2)
    r0, r1 = modulus, value % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def _interpolation_basis(n, p, e):
    """Lagrange basis at the roots omega^k of Phi_n modulo p^e, k a unit mod n."""
    modulus = p ** e
    phi = [c % modulus for c in cyclotomic_poly(n)]
    d = len(phi) - 1
    omega = _root_of_unity(n, p, e)
    basis = {}
    for k in range(1, n + 1):
        if math.gcd(k, n) != 1:
            continue
        root = pow(omega, k, modulus)
        # Synthetic division of Phi_n by (x - root).
        quotient = [0] * d
        carry = 0
        for j in range(d, 0, -1):
            carry = (phi[j] + carry * root) % modulus
            quotient[j - 1] = carry
        derivative = _image(quotient, root, modulus)
        basis[k % n] = (root, quotient, pow(derivative, -1, modulus))
    return basis


def _try_lift(a, p, e):
    modulus = p ** e
    n = a.n
    coeffs = _coeffs_mod(a, modulus)
    basis = _interpolation_basis(n, p, e)
    reps = real_embedding_indices(n)
    roots = []
    for k in reps:
        root, _, _ = basis[k % n]
        roots.append(_hensel_sqrt(_image(coeffs, root, modulus), p, e))

    d = degree(n)
    # The root is determined up to sign, so the first sign stays fixed.
    for pattern in range(2 ** (len(reps) - 1)):
        values = {}
        for i, k in enumerate(reps):
            v = roots[i]
            if i and (pattern >> (i - 1)) & 1:
                v = modulus - v
            values[k % n] = v
            values[(n - k) % n] = v
        candidate = [0] * d
        for k, (_, quotient, inverse) in basis.items():
            weight = values[k] * inverse % modulus
            for j in range(d):
                candidate[j] = (candidate[j] + weight * quotient[j]) % modulus
        recovered = []
        for c in candidate:
            q = _rational_reconstruction(c, modulus)
            if q is None:
                break
            recovered.append(q)
        else:
            b = CycElem(n, tuple(recovered))
            if b * b == a:
                return b
    return None


def is_square_in_F(a):
    """
    Decides whether the real element a is a square in the real subfield F_n.

    Returns Square(root) with root * root == a, or NonSquare carrying a sign
    witness (a is not totally positive) or a quadratic non-residue witness at a
    completely split prime. Raises UndecidedError if every residue test passes
    but no root is reconstructed within the configured modulus exponent.
    """
    if not is_real(a):
        raise NotRealError(f"{a} is not real")
    if a.is_zero():
        return Square(a)
    n = a.n
    if a.is_rational():
        q = a.coeffs[0]
        if q > 0:
            num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if num * num == q.numerator and den * den == q.denominator:
                return Square(from_rational(n, Fraction(num, den)))

    box = embeddings(a)
    for k, sign in zip(box.indices, box.signs()):
        if sign < 0:
            logger.debug(f"{a} is negative at embedding {k}")
            return NonSquare(None, k)

    settings = get_settings()
    denominators = math.lcm(*(c.denominator for c in a.coeffs))
    reps = real_embedding_indices(n)
    good_primes = []
    for p in _split_primes(n):
        if len(good_primes) >= settings.square_primes:
            break
        if denominators % p == 0:
            continue
        omega = _root_of_unity(n, p)
        coeffs = _coeffs_mod(a, p)
        images = [_image(coeffs, pow(omega, k, p), p) for k in reps]
        if any(v == 0 for v in images):
            continue
        for k, v in zip(reps, images):
            if legendre_symbol(v, p) == -1:
                logger.debug(f"{a} is a non-residue at p={p}, embedding {k}")
                return NonSquare(p, k, v)
        good_primes.append(p)

    if not good_primes:
        raise UndecidedError(f"No split prime was tested for {a} (square_primes = {settings.square_primes})")
    p = good_primes[0]
    e = settings.square_initial_exponent
    while e <= settings.square_max_exponent:
        root = _try_lift(a, p, e)
        if root is not None:
            if first_embedding_sign(root) < 0:
                root = -root
            return Square(root)
        if 2 * e > settings.square_max_exponent:
            break
        e *= 2
        if e == settings.square_max_exponent:
            logger.warning(f"Square root of {a} needs modulus {p}^{e}, the configured cap")
        else:
            logger.debug(f"Raising the modulus exponent to {e} at p={p}")
    raise UndecidedError(
        f"{a} passed residue tests at primes {good_primes} but no root was reconstructed "
        f"modulo {p}^{settings.square_max_exponent}"
    )


# --- Special elements ---

def quadratic_gauss_sum(p, level=None):
    """sum of (a/p) * zeta_p^a for an odd prime p, expressed at a level divisible by p."""
    level = level or p
    if level % p:
        raise ValueError(f"Level {level} is not divisible by {p}")
    m = level // p
    coeffs = [0] * level
    for a in range(1, p):
        coeffs[(a * m) % level] += int(legendre_symbol(a, p))
    return from_poly(level, coeffs)


def sqrt21():
    """The positive square root of 21 inside Q(zeta_21), from the Gauss sums of conductors 3 and 7."""
    s = quadratic_gauss_sum(3, 21) * quadratic_gauss_sum(7, 21)
    if first_embedding_sign(s) < 0:
        s = -s
    if s * s != 21:
        raise InvariantViolation(f"Gauss sum product {s} does not square to 21")
    return s


# --- JSON codec ---

def to_json(a):
    return {"n": a.n, "coeffs": [[str(c.numerator), str(c.denominator)] for c in a.coeffs]}


def _parse_rational(value):
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError(value)
            return Fraction(int(value[0]), int(value[1]))
        if isinstance(value, bool):
            raise ValueError(value)
        if isinstance(value, (int, str)):
            return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise PayloadError(f"Invalid rational coefficient {value!r}: {e}")
    raise PayloadError(f"Invalid rational coefficient {value!r}")


def from_json(data, n=None):
    """
    Parses {"n": int, "coeffs": [[num, den], ...]}. A bare number or "p/q"
    string is accepted as a rational element when the level n is supplied.
    """
    if not isinstance(data, dict):
        if n is None:
            raise PayloadError(f"Expected an element object, got {data!r}")
        return from_rational(n, _parse_rational(data))
    level = data.get("n", n)
    if not isinstance(level, int) or isinstance(level, bool) or level < 1:
        raise PayloadError(f"Element level must be a positive integer, got {level!r}")
    if n is not None and level != n:
        raise PayloadError(f"Element has level {level}, expected {n}")
    raw = data.get("coeffs")
    if not isinstance(raw, list):
        raise PayloadError("Element needs a 'coeffs' list")
    coeffs = [_parse_rational(c) for c in raw]
    if len(coeffs) != degree(level):
        return from_poly(level, coeffs)
    return CycElem(level, tuple(coeffs))
