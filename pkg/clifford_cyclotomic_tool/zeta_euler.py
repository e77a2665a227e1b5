"""
Special values of Dedekind zeta functions of the real cyclotomic fields F_n
and the Euler-Poincare characteristics built from them.

zeta_{F_n}(-1) is the product of L(-1, chi) over the even Dirichlet characters
mod n, and each L(-1, chi) is -B_{2,chi}/2 for the primitive character
inducing chi. Character values are exact roots of unity at the level m equal
to the exponent of (Z/nZ)^x.
"""
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import sympy
from mpmath import iv
from sympy.ntheory import primitive_root
from sympy.ntheory.modular import crt

from . import cyclotomic as cyc
from . import intervals
from .config import get_settings
from .errors import InvariantViolation, UnsupportedLevelError

logger = logging.getLogger(__name__)

EQUAL_LEVELS = (8, 12, 16, 24)


# --- Unit groups and characters ---

@dataclass(frozen=True)
class UnitGroup:
    n: int
    generators: Tuple[int, ...]
    orders: Tuple[int, ...]
    dlog: Dict[int, Tuple[int, ...]] = field(compare=False, repr=False)

    @property
    def exponent(self):
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def order(self):
        return math.prod(self.orders)


@dataclass(frozen=True)
class DirichletChar:
    """
    A character mod `modulus`, chi(g_i) = zeta_level^(exponents[i] * level / ord_i)
    on the unit group generators. `primitive` maps residues mod the conductor
    to the exponent j of the value zeta_level^j.
    """
    modulus: int
    exponents: Tuple[int, ...]
    level: int
    conductor: int
    parity: int
    primitive: Dict[int, int] = field(compare=False, repr=False)

    def is_trivial(self):
        return not any(self.exponents)


def _lift(n, q, g):
    """The residue mod n that is g mod q and 1 mod n/q."""
    if q == n:
        return g % n
    return int(crt([q, n // q], [g % q, 1])[0]) % n


@lru_cache(maxsize=None)
def unit_group(n):
    """Generators and orders of (Z/nZ)^x; the 2-part comes first as <-1> x <5>."""
    if n < 1:
        raise ValueError(f"Modulus must be positive, got {n}")
    generators, orders = [], []
    factors = sympy.factorint(n)
    e2 = factors.pop(2, 0)
    if e2 >= 2:
        q = 2 ** e2
        generators.append(_lift(n, q, -1))
        orders.append(2)
        if e2 >= 3:
            generators.append(_lift(n, q, 5))
            orders.append(2 ** (e2 - 2))
    for p in sorted(factors):
        q = p ** factors[p]
        generators.append(_lift(n, q, primitive_root(q)))
        orders.append(q // p * (p - 1))

    dlog = {}
    for exps in itertools.product(*(range(o) for o in orders)):
        x = 1
        for g, e in zip(generators, exps):
            x = x * pow(g, e, n) % n
        dlog[x % n] = exps
    return UnitGroup(n, tuple(generators), tuple(orders), dlog)


def _value_exponent(group, exponents, a):
    m = group.exponent
    logs = group.dlog[a % group.n]
    return sum(k * e * (m // o) for k, e, o in zip(exponents, logs, group.orders)) % m


def _make_character(group, exponents):
    n, m = group.n, group.exponent
    values = {a: _value_exponent(group, exponents, a) for a in group.dlog}
    parity = 1 if values[(n - 1) % n] == 0 else -1
    conductor = n
    for f in sympy.divisors(n):
        if all(j == 0 for a, j in values.items() if a % f == 1 % f):
            conductor = f
            break
    primitive = {}
    for b in range(conductor):
        if math.gcd(b, conductor) != 1:
            continue
        a = b
        while math.gcd(a, n) != 1:
            a += conductor
        primitive[b] = values[a % n]
    return DirichletChar(n, tuple(exponents), m, conductor, parity, primitive)


def characters(n):
    group = unit_group(n)
    return [_make_character(group, exps)
            for exps in itertools.product(*(range(o) for o in group.orders))]


def even_characters(n):
    """The phi(n)/2 even characters mod n, each annotated with its conductor and primitive values."""
    if n < 3:
        raise ValueError(f"Even characters need n >= 3, got {n}")
    return [chi for chi in characters(n) if chi.parity == 1]


def _bernoulli2(x):
    return x * x - x + Fraction(1, 6)


def L_minus1(chi):
    """L(-1, chi) = -B_{2,chi}/2 for the primitive character inducing chi."""
    f = chi.conductor
    acc = [Fraction(0)] * chi.level
    for a in range(1, f + 1):
        j = chi.primitive.get(a % f)
        if j is None:
            continue
        acc[j] += _bernoulli2(Fraction(a, f))
    b2 = cyc.from_poly(chi.level, acc) * f
    return -b2 / 2


@lru_cache(maxsize=None)
def zeta_F_minus1(n):
    """zeta_{F_n}(-1), F_n the maximal real subfield of Q(zeta_n)."""
    if n < 3:
        raise ValueError(f"zeta_F(-1) needs n >= 3, got {n}")
    product = None
    for chi in even_characters(n):
        value = L_minus1(chi)
        product = value if product is None else product * value
    if not product.is_rational():
        raise InvariantViolation(f"Product of L-values at level {n} is not rational: {product}")
    return product.coeffs[0]


# --- Splitting of 2 ---

@dataclass(frozen=True)
class SplitData:
    n: int
    r: int
    r_plus: int
    e: int
    f: int
    e_plus: int
    f_plus: int


def _two_part(n):
    s = 0
    while n % 2 == 0:
        n //= 2
        s += 1
    return s, n


def _closure(generators, n):
    group = {1 % n}
    frontier = list(group)
    while frontier:
        x = frontier.pop()
        for g in generators:
            y = x * g % n
            if y not in group:
                group.add(y)
                frontier.append(y)
    return group


def require_gate_level(n):
    if n < 8 or n % 4:
        raise UnsupportedLevelError(f"Level {n} must satisfy 4 | n and n >= 8")


@lru_cache(maxsize=None)
def split_data(n):
    """
    Primes above 2 in K_n and F_n from the decomposition and inertia groups
    inside (Z/nZ)^x, F_n corresponding to the quotient by H = {1, -1}.
    """
    if n % 4:
        raise UnsupportedLevelError(f"Splitting data needs 4 | n, got {n}")
    s, d = _two_part(n)
    units = [a for a in range(1, n) if math.gcd(a, n) == 1]
    phi = len(units)
    inertia = {a for a in units if a % d == 1 % d}
    frobenius = 1 if d == 1 else _lift(n, d, 2)
    decomposition = _closure(list(inertia) + [frobenius], n)
    h = {1, n - 1}
    dh = _closure(list(decomposition) + [n - 1], n)
    ih = _closure(list(inertia) + [n - 1], n)

    data = SplitData(
        n=n,
        r=phi // len(decomposition),
        r_plus=phi // len(dh),
        e=len(inertia),
        f=len(decomposition) // len(inertia),
        e_plus=len(ih) // len(h),
        f_plus=len(dh) // len(ih),
    )
    if data.e * data.f * data.r != phi or 2 * data.e_plus * data.f_plus * data.r_plus != phi:
        raise InvariantViolation(f"Inconsistent splitting data at level {n}: {data}")
    return data


def u2_equals_u2zeta(n):
    """True iff -1 mod d lies in <2 mod d>, n = 2^s d with d odd."""
    s, d = _two_part(n)
    if s < 2:
        raise UnsupportedLevelError(f"Level {n} needs 4 | n")
    if d == 1:
        return True
    return d - 1 in _closure([2], d)


# --- Euler characteristics ---

def M_value(n):
    require_gate_level(n)
    data = split_data(n)
    degree = cyc.degree(n) // 2
    return (Fraction(1, 2 ** (degree - 1)) * abs(zeta_F_minus1(n))
            * abs(1 - 2 ** data.f_plus) ** data.r_plus)


def chi_amalgam(a, b, c):
    """Euler characteristic of an amalgam of finite groups of orders a and b over one of order c."""
    if min(a, b, c) < 1:
        raise ValueError(f"Group orders must be positive: {a}, {b}, {c}")
    return Fraction(1, a) + Fraction(1, b) - Fraction(1, c)


@dataclass(frozen=True)
class ChiTable:
    n: int
    zeta_minus1: Fraction
    m_value: Fraction
    chi_su2: Fraction
    chi_psu2: Fraction
    chi_pu2_zeta: Fraction
    chi_pu2: Fraction
    chi_so3: Optional[Fraction]
    chi_sgn: Fraction
    chi_g4n: Fraction
    c: Optional[int]
    cbar: Optional[int]
    r: int
    r_plus: int
    disc_kn: int
    disc_fn: Fraction

    @property
    def chi_so3_formula(self):
        return "-M_n/c" if self.chi_so3 is None else None


def chi_table(n):
    require_gate_level(n)
    from .selmer import selmer_table, supported_level

    data = split_data(n)
    m = M_value(n)
    chi_su2 = -m / 2
    chi_psu2 = 2 * chi_su2
    chi_pu2 = chi_su2 / 2 ** (data.r - data.r_plus)
    c = cbar = chi_so3 = None
    if supported_level(n):
        table = selmer_table(n)
        c, cbar = table.c, table.cbar
        chi_so3 = chi_pu2 / cbar
        if chi_so3 != chi_psu2 / c:
            raise InvariantViolation(f"chi(SO3) disagrees between c and cbar at level {n}")
    chi_sgn = chi_amalgam(24, 2 * n, 8)
    if chi_sgn != Fraction(-1, 12) + Fraction(1, 2 * n):
        raise InvariantViolation(f"Amalgam characteristic mismatch at level {n}")
    return ChiTable(
        n=n,
        zeta_minus1=zeta_F_minus1(n),
        m_value=m,
        chi_su2=chi_su2,
        chi_psu2=chi_psu2,
        chi_pu2_zeta=chi_su2,
        chi_pu2=chi_pu2,
        chi_so3=chi_so3,
        chi_sgn=chi_sgn,
        chi_g4n=chi_sgn,
        c=c,
        cbar=cbar,
        r=data.r,
        r_plus=data.r_plus,
        disc_kn=disc_Kn(n),
        disc_fn=disc_Fn(n),
    )


def serre_chi_so3(n):
    """-2^(-2^(s-2)) zeta_{F_n}(-1) for n = 2^s, s >= 3."""
    s, d = _two_part(n)
    if d != 1 or s < 3:
        raise UnsupportedLevelError(f"Level {n} is not a power of 2 at least 8")
    return -Fraction(1, 2 ** (2 ** (s - 2))) * zeta_F_minus1(n)


# --- Discriminants ---

def disc_Kn(n):
    phi = cyc.degree(n)
    value = Fraction(n ** phi)
    for p in sympy.primefactors(n):
        value /= p ** (phi // (p - 1))
    return int(value)


def disc_Fn(n):
    if n % 4:
        raise UnsupportedLevelError(f"Discriminant formula needs 4 | n, got {n}")
    phi = cyc.degree(n)
    s, d = _two_part(n)
    f = 2 if d == 1 else 1
    value = Fraction(n ** (phi // 2), f)
    for p in sympy.primefactors(n):
        value /= p ** (phi // (2 * (p - 1)))
    return value


# --- Decision ---

@dataclass(frozen=True)
class Decision:
    n: int
    verdict: str
    relation: str
    evidence: ChiTable


def gate_bound(n):
    return Fraction(1, 12) - Fraction(1, 2 * n)


def _relation(n, chi_su2):
    size = abs(chi_su2)
    bound = gate_bound(n)
    if size == bound:
        return "="
    if size > bound:
        return ">"
    raise InvariantViolation(f"|chi(SU2(R_{n}))| = {size} is below 1/12 - 1/(2n) = {bound}")


def decide_gate_equality(n):
    """Equal when the gate group is all of U2^zeta(R_n), InfiniteIndex otherwise."""
    table = chi_table(n)
    relation = _relation(n, table.chi_su2)
    verdict = "Equal" if n in EQUAL_LEVELS else "InfiniteIndex"
    if (relation == "=") != (verdict == "Equal"):
        raise InvariantViolation(f"Level {n}: verdict {verdict} contradicts relation {relation}")
    return Decision(n, verdict, relation, table)


def scan_row(n):
    zeta = zeta_F_minus1(n)
    m = M_value(n)
    chi_su2 = -m / 2
    return {
        "n": n,
        "zetaMinus1": zeta,
        "M": m,
        "chiSU2": chi_su2,
        "bound": gate_bound(n),
        "relation": _relation(n, chi_su2),
    }


def analytic_lower_bound(n, precision=None):
    """Rational enclosure of (n^(3/4) (2 pi)^-2)^[F_n:Q] / (2 sqrt 2)."""
    bits = precision or get_settings().analytic_precision
    degree = cyc.degree(n) // 2
    with intervals.working_precision(bits):
        base = iv.exp(iv.log(iv.mpf(n)) * 3 / 4) / (2 * iv.pi) ** 2
        value = base ** degree / (2 * iv.sqrt(2))
        return intervals.bounds(value)


def threshold_check(precision=None):
    """Encloses (2 pi)^(8/3) and confirms it lies below 134.5."""
    bits = precision or get_settings().analytic_precision
    with intervals.working_precision(bits):
        lo, hi = intervals.bounds(iv.exp(iv.log(2 * iv.pi) * 8 / 3))
    _, pi_hi = intervals.pi_enclosure(bits)
    # (2 pi)^(8/3) < 269/2 iff (2 pi)^8 < (269/2)^3, decided on the rational upper bound of pi.
    holds = (2 * pi_hi) ** 8 < Fraction(269, 2) ** 3
    if holds != (hi < Fraction(269, 2)):
        raise InvariantViolation(f"Threshold enclosures disagree at {bits} bits")
    return {"lower": lo, "upper": hi, "piUpper": pi_hi, "holds": holds}


def analytic_row(n):
    lo, hi = analytic_lower_bound(n)
    size = abs(-M_value(n) / 2)
    row = {
        "n": n,
        "chiSU2": -size,
        "analyticLower": lo,
        "exceedsAnalytic": size > hi,
        "analyticAboveBound": lo > gate_bound(n),
    }
    if not (row["exceedsAnalytic"] and row["analyticAboveBound"]):
        raise InvariantViolation(f"Analytic bound chain fails at level {n}: {row}")
    return row


@dataclass(frozen=True)
class ScanReport:
    rows: list
    analytic_rows: list
    threshold: Optional[dict]

    @property
    def equalities(self):
        return [row["n"] for row in self.rows if row["relation"] == "="]

    @property
    def strict(self):
        return [row["n"] for row in self.rows if row["relation"] == ">"]


def _evaluate(function, levels, workers):
    if workers > 1 and len(levels) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(function, levels))
    else:
        results = [function(n) for n in levels]
    return sorted(results, key=lambda row: row["n"])


def scan(n_max, workers=None, analytic_max=None):
    """
    Compares |chi(SU2(R_n))| with 1/12 - 1/(2n) exactly for 4 | n, 8 <= n <= n_max,
    and optionally checks the analytic bound chain for 136 <= n <= analytic_max.
    """
    if n_max < 8:
        raise UnsupportedLevelError(f"Scan needs an upper level of at least 8, got {n_max}")
    workers = workers or get_settings().scan_workers
    levels = list(range(8, n_max + 1, 4))
    logger.info(f"Scanning {len(levels)} levels up to {n_max} with {workers} worker(s)")
    rows = _evaluate(scan_row, levels, workers)

    analytic_rows, threshold = [], None
    if analytic_max:
        threshold = threshold_check()
        if not threshold["holds"]:
            raise InvariantViolation(f"(2 pi)^(8/3) not shown below 134.5: {threshold}")
        analytic_rows = _evaluate(analytic_row, list(range(136, analytic_max + 1, 4)), workers)
    return ScanReport(rows, analytic_rows, threshold)
