"""Rational enclosures of real numbers, backed by mpmath interval arithmetic."""
import threading
from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv

# iv.prec is context-global.
_prec_lock = threading.RLock()


@contextmanager
def working_precision(bits):
    with _prec_lock:
        saved = iv.prec
        iv.prec = bits
        try:
            yield
        finally:
            iv.prec = saved


def _raw_to_fraction(raw):
    sign, man, exp, _bc = raw
    value = Fraction(int(man)) * Fraction(2) ** exp
    return -value if sign else value


def bounds(x):
    """Returns the exact endpoints (lower, upper) of an mpmath interval."""
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def from_fraction(q):
    return iv.mpf(q.numerator) / q.denominator


def cos_two_pi(numerator, denominator):
    """Encloses cos(2*pi*numerator/denominator)."""
    return iv.cos(iv.pi * (2 * numerator) / denominator)


def pi_enclosure(bits):
    with working_precision(bits):
        return bounds(iv.pi)
