"""
The square-class obstruction to lifting SO3(R_n^+) matrices to SU2(R_n).

phi_profile evaluates the four diagonal functions phi_i and the six
off-diagonal functions theta_ij of a rotation; their common square class is
the obstruction. When it is trivial, the square roots of the phi_i assemble
into an explicit SU2 lift.
"""
import itertools
import logging
from collections import Counter
from fractions import Fraction
from dataclasses import dataclass
from typing import Tuple

import sympy

from . import cyclotomic as cyc
from . import matrices as mat
from .cyclotomic import CycElem
from .errors import InvariantViolation, UnsupportedLevelError

logger = logging.getLogger(__name__)


# --- Types ---

@dataclass(frozen=True, eq=False)
class SquareClass:
    rep: CycElem

    def __post_init__(self):
        if self.rep.is_zero():
            raise ValueError("Zero has no square class")

    @property
    def n(self):
        return self.rep.n

    def __mul__(self, other):
        return SquareClass(self.rep * other.rep)

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        return square_class_equal(self, other)

    __hash__ = None

    def certificate(self):
        return cyc.is_square_in_F(self.rep)

    def is_trivial(self):
        return self.certificate().is_square


@dataclass(frozen=True)
class PhiProfile:
    """phi holds phi_1..phi_4; theta is symmetric with theta[i][i] = phi[i] (0-based)."""
    phi: Tuple[CycElem, ...]
    theta: Tuple[Tuple[CycElem, ...], ...]

    def first_nonzero(self):
        return next(i for i, value in enumerate(self.phi) if value)


@dataclass(frozen=True)
class Obstructed:
    square_class: SquareClass
    certificate: cyc.NonSquare


@dataclass(frozen=True)
class SelmerTable:
    n: int
    rank: int
    c: int
    cbar: int


@dataclass(frozen=True)
class DrearyWitness:
    tq: mat.OMat
    mq: mat.UMat
    u: CycElem
    sqrt21: CycElem
    verdicts: dict


def square_class_equal(a, b):
    return cyc.is_square_in_F(a.rep / b.rep).is_square


# --- phi and theta ---

def phi_profile(m):
    mat.require_SO3(m)
    r = m.rows
    phi = (
        (1 + r[0][0] + r[1][1] + r[2][2]) / 4,
        (1 - r[0][0] - r[1][1] + r[2][2]) / 4,
        (1 - r[0][0] + r[1][1] - r[2][2]) / 4,
        (1 + r[0][0] - r[1][1] - r[2][2]) / 4,
    )
    off = {
        (0, 1): (r[0][1] - r[1][0]) / 4,
        (0, 2): (r[2][0] - r[0][2]) / 4,
        (0, 3): (r[1][2] - r[2][1]) / 4,
        (2, 3): (r[0][1] + r[1][0]) / 4,
        (1, 3): (r[2][0] + r[0][2]) / 4,
        (1, 2): (r[1][2] + r[2][1]) / 4,
    }
    theta = tuple(
        tuple(phi[i] if i == j else off[(min(i, j), max(i, j))] for j in range(4))
        for i in range(4)
    )
    if phi[0] + phi[1] + phi[2] + phi[3] != 1:
        raise InvariantViolation(f"phi values of {m} do not sum to 1")
    for i, j in itertools.combinations(range(4), 2):
        if phi[i] * phi[j] != theta[i][j] * theta[i][j]:
            raise InvariantViolation(f"phi_{i + 1} phi_{j + 1} != theta_{i + 1}{j + 1}^2 for {m}")
    return PhiProfile(phi, theta)


def phi_class(m, check=True):
    """
    The square class of the first nonzero phi_i(m). With check set, every
    other nonzero phi_j is confirmed to lie in the same class.
    """
    profile = phi_profile(m)
    first = profile.first_nonzero()
    rep = profile.phi[first]
    if check:
        for j, value in enumerate(profile.phi):
            if j != first and value and not cyc.is_square_in_F(value / rep).is_square:
                raise InvariantViolation(f"phi_{first + 1} and phi_{j + 1} of {m} differ in square class")
    return SquareClass(rep)


# --- Lifting ---

def try_lift_to_SU2(m):
    """
    Returns A in SU2(R_n) with adjoint(A) == m, or Obstructed when the square
    class of m is nontrivial. The first nonzero a_i is positive at the first
    real embedding; the other a_j follow from a_i a_j = theta_ij.
    """
    profile = phi_profile(m)
    first = profile.first_nonzero()
    certificate = cyc.is_square_in_F(profile.phi[first])
    if not certificate.is_square:
        return Obstructed(SquareClass(profile.phi[first]), certificate)

    root = certificate.root
    a = [profile.theta[first][j] / root for j in range(4)]
    a[first] = root
    i = mat.imaginary_unit(m.n)
    lift = mat.UMat(m.n, [
        [a[0] + a[1] * i, a[2] + a[3] * i],
        [-a[2] + a[3] * i, a[0] - a[1] * i],
    ])
    if mat.adjoint(lift) != m:
        raise InvariantViolation(f"Constructed lift {lift} does not map back to {m}")
    logger.debug(f"Lifted level-{m.n} rotation to SU2")
    return lift


def supported_level(n):
    if n < 8 or n % 4:
        return False
    odd = n
    while odd % 2 == 0:
        odd //= 2
    return odd in (1, 3)


def require_supported(n):
    if not supported_level(n):
        raise UnsupportedLevelError(f"Level {n} is not of the form 2^s (n >= 8) or 3*2^s with 4 | n")


def try_lift_to_U2_supported(m):
    """
    Lifts m to U2(R_n) at levels 2^s and 3*2^s. Either m itself lifts to SU2,
    or pi(T_n)^-1 m does and T_n A is returned.
    """
    require_supported(m.n)
    result = try_lift_to_SU2(m)
    if not isinstance(result, Obstructed):
        return result
    t = mat.gate_T(m.n)
    twisted = try_lift_to_SU2(mat.pi_map(t).transpose() * m)
    if isinstance(twisted, Obstructed):
        raise InvariantViolation(f"Neither {m} nor its T_{m.n} twist lifts at a supported level")
    return t * twisted


# --- Homomorphism ---

def product_square_identity(m, n):
    """
    phi_i(M) phi_i(N) phi_1(MN) == (phi_i(M) phi_i(N) +- sum_j theta_ij(M) theta_ij(N))^2
    for every i, the sign being -1 exactly when 1 is among the subscripts.
    """
    pm, pn, pmn = phi_profile(m), phi_profile(n), phi_profile(m * n)
    for i in range(4):
        inner = pm.phi[i] * pn.phi[i]
        for j in range(4):
            if j == i:
                continue
            term = pm.theta[i][j] * pn.theta[i][j]
            inner = inner - term if 0 in (i, j) else inner + term
        if pm.phi[i] * pn.phi[i] * pmn.phi[0] != inner * inner:
            return False
    return True


def homomorphism_check(m, n):
    class_m = phi_class(m, check=False)
    class_n = phi_class(n, check=False)
    class_mn = phi_class(m * n, check=False)
    return square_class_equal(class_mn, class_m * class_n) and product_square_identity(m, n)


def lemma_profile_checks(m):
    """Exact checks of the algebraic properties of phi and theta on one rotation."""
    profile = phi_profile(m)
    phi, theta = profile.phi, profile.theta
    n = m.n
    pairings = [theta[0][1] * theta[2][3], theta[0][2] * theta[1][3], theta[0][3] * theta[1][2]]
    first = profile.first_nonzero()
    consistent = all(
        value == 0 or (theta[first][j] / phi[first]) ** 2 == value / phi[first]
        for j, value in enumerate(phi)
    )
    own = Counter(phi)
    invariant = True
    for axis in (mat.matrix_x(n), mat.matrix_y(n), mat.matrix_z(n)):
        for other in (m * axis, axis * m):
            if Counter(phi_profile(other).phi) != own:
                invariant = False
    rep = phi[first]
    return {
        "sum_is_one": sum(phi, cyc.zero(n)) == 1,
        "products_are_squares": all(
            phi[i] * phi[j] == theta[i][j] ** 2 for i, j in itertools.combinations(range(4), 2)),
        "pairing_independent": pairings[0] == pairings[1] == pairings[2],
        "classes_consistent": consistent,
        "totally_positive": cyc.is_totally_positive(rep),
        "parity_defects": selmer_parity_defects(SquareClass(rep)),
        "axis_invariant": invariant,
    }


def selmer_parity_defects(square_class):
    """
    Odd primes at which the F_n/Q norm of the representative has odd
    valuation. A class in the Selmer group has none.
    """
    norm = cyc.real_norm(square_class.rep)
    defects = []
    for part in (norm.numerator, norm.denominator):
        for p, e in sympy.factorint(abs(part)).items():
            if p != 2 and e % 2:
                defects.append(int(p))
    return sorted(defects)


# --- Tables and witnesses ---

def selmer_table(n):
    """Rank of the totally positive Selmer group and the indices c, cbar at supported levels."""
    require_supported(n)
    from .zeta_euler import split_data
    data = split_data(n)
    table = SelmerTable(n=n, rank=1, c=2, cbar=1)
    if table.c != 2 ** (1 + data.r - data.r_plus) * table.cbar:
        raise InvariantViolation(f"Index relation fails at level {n}: r={data.r}, r+={data.r_plus}")
    return table


def _in_z_sqrt21_half(e, s):
    sigma = cyc.galois(e, 2)
    x = (e + sigma) / 2
    y = (e - sigma) * s / 42
    if not (x.is_rational() and y.is_rational()):
        return False
    if not (cyc.is_in_Rn(x) and cyc.is_in_Rn(y)):
        return False
    return e == x + y * s


def example_dreary_witness():
    """
    Builds the rotation T_q over Z[sqrt21, 1/2] and the matrix M_q with
    M_q M_q^dagger = u Id, u = (5 + sqrt21)/2, and verifies that T_q is not in
    the image of PU2.
    """
    s = cyc.sqrt21()
    u = (5 + s) / 2
    a, b, c = (s + 3) / 8, cyc.from_rational(21, Fraction(1, 4)), (3 - s) / 8
    tq = mat.OMat(21, [[a, b, c], [c, a, b], [b, c, a]])

    s84 = cyc.level_raise(s, 4)
    u84 = cyc.level_raise(u, 4)
    i = mat.imaginary_unit(84)
    mq = mat.UMat(84, [
        [(4 + s84 + i) / 4, (1 + i) / 4],
        [(i - 1) / 4, (4 + s84 - i) / 4],
    ])

    u_class = SquareClass(u)
    u_certificate = u_class.certificate()
    verdicts = {
        "tq_in_so3": mat.is_in_SO3(tq),
        "entries_in_z_sqrt21_half": all(_in_z_sqrt21_half(e, s) for e in tq.entries()),
        "mq_mq_dagger_is_u": mq * mat.dagger(mq) == mat.UMat.identity(84) * u84,
        "mq_conjugation_is_tq": mat.conjugation_action(mq, u84) == tq.map_entries(
            lambda e: cyc.level_raise(e, 4), 84),
        "u_totally_positive": cyc.is_totally_positive(u),
        "u_nonsquare": not u_certificate.is_square,
        "phi_tq_is_class_of_u": square_class_equal(phi_class(tq), u_class),
    }
    logger.debug(f"Dreary verdicts: {verdicts}")
    return DrearyWitness(tq=tq, mq=mq, u=u, sqrt21=s, verdicts=verdicts)
