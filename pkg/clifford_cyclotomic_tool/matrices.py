"""
Exact 2x2 and 3x3 matrices over Q(zeta_n).

UMat holds unitary-group candidates (gates, lifts), OMat holds rotations with
real entries. The adjoint map and its extension pi send the former to the
latter by conjugation on the Pauli basis.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import cyclotomic as cyc
from .cyclotomic import CycElem
from .errors import (
    LevelLacksIError,
    LevelMismatchError,
    NotSpecialOrthogonalError,
    NotSpecialUnitaryError,
    NotUnitaryError,
    PayloadError,
)

logger = logging.getLogger(__name__)


class SquareMatrix:
    size = None

    def __init__(self, n, rows):
        if len(rows) != self.size or any(len(row) != self.size for row in rows):
            raise ValueError(f"{type(self).__name__} needs {self.size}x{self.size} entries")
        entries = []
        for row in rows:
            out = []
            for entry in row:
                if isinstance(entry, CycElem):
                    if entry.n != n:
                        raise LevelMismatchError(f"Entry of level {entry.n} in a level-{n} matrix")
                    out.append(entry)
                else:
                    out.append(cyc.from_rational(n, entry))
            entries.append(tuple(out))
        self.n = n
        self.rows = tuple(entries)

    @classmethod
    def identity(cls, n):
        return cls(n, [[1 if i == j else 0 for j in range(cls.size)] for i in range(cls.size)])

    @classmethod
    def diagonal(cls, n, values):
        return cls(n, [[values[i] if i == j else 0 for j in range(cls.size)] for i in range(cls.size)])

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return type(self) is type(other) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.rows))

    def _check_level(self, other):
        if other.n != self.n:
            raise LevelMismatchError(f"Cannot combine matrices of levels {self.n} and {other.n}")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycElem)):
            return type(self)(self.n, [[entry * other for entry in row] for row in self.rows])
        if not isinstance(other, SquareMatrix) or other.size != self.size:
            return NotImplemented
        self._check_level(other)
        size = self.size
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                total = cyc.zero(self.n)
                for k in range(size):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a and b:
                        total = total + a * b
                row.append(total)
            rows.append(row)
        return type(self)(self.n, rows)

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, Fraction, CycElem)):
            return self * scalar
        return NotImplemented

    def __neg__(self):
        return self * -1

    def __add__(self, other):
        self._check_level(other)
        return type(self)(self.n, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = type(self).identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def transpose(self):
        return type(self)(self.n, [list(col) for col in zip(*self.rows)])

    def trace(self):
        total = cyc.zero(self.n)
        for i in range(self.size):
            total = total + self.rows[i][i]
        return total

    def entries(self):
        return [entry for row in self.rows for entry in row]

    def map_entries(self, f, n=None):
        return type(self)(n or self.n, [[f(entry) for entry in row] for row in self.rows])

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"{type(self).__name__}(n={self.n}, [{body}])"


class UMat(SquareMatrix):
    size = 2

    def det(self):
        (a, b), (c, d) = self.rows
        return a * d - b * c

    def inverse(self):
        (a, b), (c, d) = self.rows
        det = self.det()
        return UMat(self.n, [[d / det, -b / det], [-c / det, a / det]])


class OMat(SquareMatrix):
    size = 3

    def det(self):
        m = self.rows
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    def inverse(self):
        """Inverse of an orthogonal matrix."""
        return self.transpose()


@dataclass(frozen=True)
class PauliVec:
    x: CycElem
    y: CycElem
    z: CycElem


@dataclass(frozen=True)
class Membership:
    in_u2: bool
    in_u2_zeta: bool
    in_su2: bool
    det_power: Optional[int]


# --- Basic operations ---

def det(u):
    return u.det()


def dagger(u):
    return UMat(u.n, [[cyc.conj(u[j, i]) for j in range(2)] for i in range(2)])


def is_unitary(u):
    return u * dagger(u) == UMat.identity(u.n)


def imaginary_unit(n):
    if n % 4:
        raise LevelLacksIError(f"Level {n} has no square root of -1 (4 does not divide {n})")
    return cyc.zeta(n, n // 4)


def root_of_unity_power(x):
    """Returns j with x == zeta_n^j, or None."""
    for j in range(x.n):
        if x == cyc.zeta(x.n, j):
            return j
    return None


def membership(u):
    in_u2 = is_unitary(u) and all(cyc.is_in_Rn(e) for e in u.entries())
    power = root_of_unity_power(u.det()) if in_u2 else None
    return Membership(
        in_u2=in_u2,
        in_u2_zeta=power is not None,
        in_su2=power == 0,
        det_power=power,
    )


def projective_equal(u, v):
    """Returns the root of unity lam with u == lam * v, or None."""
    if u.n != v.n or type(u) is not type(v):
        return None
    for a, b in zip(u.entries(), v.entries()):
        if b:
            lam = a / b
            break
        if a:
            return None
    else:
        return cyc.one(u.n)
    if u != v * lam:
        return None
    if root_of_unity_power(lam) is None and root_of_unity_power(-lam) is None:
        return None
    return lam


# --- Pauli basis ---

def pauli_matrices(n):
    i = imaginary_unit(n)
    return (
        UMat(n, [[0, 1], [1, 0]]),
        UMat(n, [[0, -i], [i, 0]]),
        UMat(n, [[1, 0], [0, -1]]),
    )


def pauli_coordinates(m):
    """Coordinates of a trace-0 hermitian [[z, x-iy], [x+iy, -z]] in the Pauli basis."""
    i = imaginary_unit(m.n)
    return PauliVec(
        x=(m[1, 0] + m[0, 1]) / 2,
        y=(m[1, 0] - m[0, 1]) / (2 * i),
        z=m[0, 0],
    )


def hermitian_from_pauli(v):
    sx, sy, sz = pauli_matrices(v.x.n)
    return sx * v.x + sy * v.y + sz * v.z


def pauli_form(v):
    return v.x * v.x + v.y * v.y + v.z * v.z


def conjugation_action(g, scale=None):
    """
    The rotation X -> g X g^dagger / scale on the Pauli basis, where g g^dagger
    is scale times the identity. scale defaults to det(g) * conj(det(g)).
    """
    if scale is None:
        d = g.det()
        scale = d * cyc.conj(d)
    g_dag = dagger(g)
    columns = []
    for sigma in pauli_matrices(g.n):
        v = pauli_coordinates(g * sigma * g_dag)
        columns.append((v.x / scale, v.y / scale, v.z / scale))
    return OMat(g.n, [[columns[j][i] for j in range(3)] for i in range(3)])


# --- Adjoint and pi ---

def su2_parameters(a):
    """Returns real (a, b, c, d) with a == [[a+bi, c+di], [-c+di, a-bi]]."""
    i = imaginary_unit(a.n)
    p = (a[0, 0] + a[1, 1]) / 2
    q = (a[0, 0] - a[1, 1]) / (2 * i)
    r = (a[0, 1] - a[1, 0]) / 2
    s = (a[0, 1] + a[1, 0]) / (2 * i)
    if not all(cyc.is_real(x) for x in (p, q, r, s)):
        raise NotSpecialUnitaryError(f"{a} is not of the form [[a+bi, c+di], [-c+di, a-bi]]")
    return p, q, r, s


def adjoint(a):
    """The 3x3 image of an SU2 matrix, by the explicit quadratic formula in (a, b, c, d)."""
    imaginary_unit(a.n)
    if a.det() != 1 or not is_unitary(a):
        raise NotSpecialUnitaryError(f"{a} is not in SU2")
    p, q, r, s = su2_parameters(a)
    pp, qq, rr, ss = p * p, q * q, r * r, s * s
    return OMat(a.n, [
        [pp - qq - rr + ss, 2 * p * q + 2 * r * s, -2 * p * r + 2 * q * s],
        [-2 * p * q + 2 * r * s, pp - qq + rr - ss, 2 * p * s + 2 * q * r],
        [2 * p * r + 2 * q * s, -2 * p * s + 2 * q * r, pp + qq - rr - ss],
    ])


def pi_map(g):
    """
    Extends the adjoint map to all of U2(R_n) by conjugation on the Pauli basis.
    Scalars act trivially, so no square root of det(g) is needed.
    """
    imaginary_unit(g.n)
    if not membership(g).in_u2:
        raise NotUnitaryError(f"{g} is not in U2(R_{g.n})")
    return conjugation_action(g, cyc.one(g.n))


def is_orthogonal(m):
    return m * m.transpose() == OMat.identity(m.n)


def is_in_SO3(m):
    return (
        is_orthogonal(m)
        and m.det() == 1
        and all(cyc.is_in_Rn_plus(e) for e in m.entries())
    )


def require_SO3(m):
    if not is_in_SO3(m):
        raise NotSpecialOrthogonalError(f"{m} is not in SO3(R_{m.n}^+)")


def matrix_x(n):
    return OMat.diagonal(n, [1, -1, -1])


def matrix_y(n):
    return OMat.diagonal(n, [-1, 1, -1])


def matrix_z(n):
    return OMat.diagonal(n, [-1, -1, 1])


# --- Gates ---

def gate_T(n):
    return UMat.diagonal(n, [1, cyc.zeta(n)])


def gate_H(n):
    i = imaginary_unit(n)
    w = (1 + i) / 2
    return UMat(n, [[w, w], [w, -w]])


def gate_Hz(n, j):
    """H(zeta_n^j) = T_n^-j H(1) T_n^j, determinant 1."""
    i = imaginary_unit(n)
    z = cyc.zeta(n, j)
    return UMat(n, [
        [(1 + i) / 2, z * (1 + i) / 2],
        [cyc.conj(z) * (i - 1) / 2, (1 - i) / 2],
    ])


def gate_X(n):
    i = imaginary_unit(n)
    h = gate_H(n)
    return h * gate_T(n) ** (n // 2) * h * (-i)


def gate_scalar(n, j):
    z = cyc.zeta(n, j)
    return UMat.diagonal(n, [z, z])


# --- JSON codec ---

def to_json(m):
    return {"n": m.n, "rows": [[cyc.to_json(e) for e in row] for row in m.rows]}


def from_json(data, kind=UMat):
    if not isinstance(data, dict) or "rows" not in data:
        raise PayloadError("Expected a matrix object {\"n\": int, \"rows\": [[...], ...]}")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise PayloadError(f"Matrix level must be a positive integer, got {n!r}")
    rows = data["rows"]
    if not isinstance(rows, list) or len(rows) != kind.size or any(
            not isinstance(row, list) or len(row) != kind.size for row in rows):
        raise PayloadError(f"Expected {kind.size}x{kind.size} rows for {kind.__name__}")
    return kind(n, [[cyc.from_json(e, n) for e in row] for row in rows])
