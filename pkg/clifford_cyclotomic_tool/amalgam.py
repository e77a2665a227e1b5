"""
The projective gate group as the amalgam S4 *_{D4} D_n of two finite rotation
groups, with normal forms over fixed right transversals.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Dict, FrozenSet, Tuple

from . import cyclotomic as cyc
from . import matrices as mat
from .errors import InvariantViolation, NotAGeneratorError, UnsupportedLevelError
from .zeta_euler import chi_amalgam, require_gate_level

logger = logging.getLogger(__name__)

SIDE_S4 = "S4"
SIDE_DN = "Dn"


@dataclass(frozen=True)
class AmalgamFactors:
    n: int
    y_rot4: mat.OMat
    z_rot_n: mat.OMat
    s4: FrozenSet[mat.OMat]
    dn: FrozenSet[mat.OMat]
    d4: FrozenSet[mat.OMat]
    transversals: Dict[str, Tuple[mat.OMat, ...]]
    cosets: Dict[str, Dict[mat.OMat, Tuple[mat.OMat, mat.OMat]]]
    ordered: Dict[str, Tuple[mat.OMat, ...]]

    def side_of(self, g):
        if g in self.s4:
            return SIDE_S4
        if g in self.dn:
            return SIDE_DN
        raise NotAGeneratorError(f"{g} lies in neither S4 nor D_{self.n}")


@dataclass(frozen=True)
class AmalgamWord:
    """head (in D4) times the alternating non-trivial coset representatives."""
    n: int
    head: mat.OMat
    letters: Tuple[Tuple[str, mat.OMat], ...] = ()

    def __len__(self):
        return len(self.letters)


def closure(generators):
    n = generators[0].n
    group = {mat.OMat.identity(n)}
    frontier = list(group)
    while frontier:
        x = frontier.pop()
        for g in generators:
            y = x * g
            if y not in group:
                group.add(y)
                frontier.append(y)
    return frozenset(group)


def _compare_matrices(a, b):
    for x, y in zip(a.entries(), b.entries()):
        c = cyc.compare_real(x, y)
        if c:
            return c
    return 0


def _ordered(group):
    return tuple(sorted(group, key=cmp_to_key(_compare_matrices)))


def _transversal(group, subgroup):
    """Right coset representatives of subgroup in group; the identity represents the subgroup itself."""
    identity = mat.OMat.identity(next(iter(group)).n)
    remaining = set(group)
    reps = [identity]
    table = {}
    for c in subgroup:
        table[c] = (identity, c)
        remaining.discard(c)
    for g in _ordered(remaining):
        if g in table:
            continue
        reps.append(g)
        for c in subgroup:
            table[c * g] = (g, c)
    return tuple(reps), table


@lru_cache(maxsize=None)
def amalgam_generators(n):
    """
    The order-4 rotation pi(H T^(n/2)) about the y-axis, the order-n rotation
    pi(T_n) about the z-axis, the finite factors S4, D_n, their intersection D4
    and fixed right transversals of D4 in each factor.
    """
    require_gate_level(n)
    y = mat.pi_map(mat.gate_H(n) * mat.gate_T(n) ** (n // 2))
    z = mat.pi_map(mat.gate_T(n))
    s4 = closure([y, z ** (n // 4)])
    dn = closure([z, y * y])
    d4 = s4 & dn
    if (len(s4), len(dn), len(d4)) != (24, 2 * n, 8):
        raise InvariantViolation(f"Factor orders at level {n} are {len(s4)}, {len(dn)}, {len(d4)}")
    s4_reps, s4_table = _transversal(s4, d4)
    dn_reps, dn_table = _transversal(dn, d4)
    logger.debug(f"Level {n}: {len(s4_reps)} S4 cosets, {len(dn_reps)} D_n cosets")
    return AmalgamFactors(
        n=n,
        y_rot4=y,
        z_rot_n=z,
        s4=s4,
        dn=dn,
        d4=d4,
        transversals={SIDE_S4: s4_reps, SIDE_DN: dn_reps},
        cosets={SIDE_S4: s4_table, SIDE_DN: dn_table},
        ordered={SIDE_S4: _ordered(s4), SIDE_DN: _ordered(dn)},
    )


def normal_form(letters, n):
    """
    Reduces a product of factor-group elements to head * r_1 * ... * r_m with
    the r_i alternating non-trivial transversal elements. Letters are absorbed
    from the right end, each one multiplied on the left.
    """
    factors = amalgam_generators(n)
    identity = mat.OMat.identity(n)
    head = identity
    reps = []
    for g in reversed(list(letters)):
        side = factors.side_of(g)
        table = factors.cosets[side]
        if reps and reps[0][0] == side:
            rep, head = table[g * head * reps[0][1]]
            if rep == identity:
                reps.pop(0)
            else:
                reps[0] = (side, rep)
        else:
            rep, head = table[g * head]
            if rep != identity:
                reps.insert(0, (side, rep))
    return AmalgamWord(n, head, tuple(reps))


def eval_amalgam(word):
    result = word.head
    for _, rep in word.letters:
        result = result * rep
    return result


def word_to_letters(word):
    """Factor letters of pi(word): T_n -> z-rotation, H -> y-rotation times z^(-n/2)."""
    factors = amalgam_generators(word.n)
    z = factors.z_rot_n
    letters = []
    for token in word.tokens:
        if token == "H":
            letters.append(factors.y_rot4)
            letters.append(z ** (word.n // 2))
        else:
            letters.append(z ** token)
    return letters


def _product(letters, n):
    result = mat.OMat.identity(n)
    for g in letters:
        result = result * g
    return result


def amalgam_equal(letters1, letters2, n):
    """Normal-form equality, cross-checked against equality of the matrix products."""
    nf1, nf2 = normal_form(letters1, n), normal_form(letters2, n)
    forms_equal = nf1 == nf2
    products_equal = _product(letters1, n) == _product(letters2, n)
    if forms_equal != products_equal:
        raise InvariantViolation(f"Normal forms and matrix products disagree at level {n}")
    return forms_equal


def chi_group_identities(n):
    if n % 4:
        raise UnsupportedLevelError(f"Level {n} needs 4 | n")
    expected = Fraction(-1, 12) + Fraction(1, 2 * n)
    via_s4 = chi_amalgam(24, 2 * n, 8)
    via_binary = 2 * chi_amalgam(48, 4 * n, 16)
    if not via_s4 == via_binary == expected:
        raise InvariantViolation(f"Amalgam characteristics disagree at level {n}: {via_s4}, {via_binary}")
    return {"n": n, "s4_d4_dn": via_s4, "binary_amalgam_doubled": via_binary, "expected": expected}


def gate_word_normal_form(word):
    return normal_form(word_to_letters(word), word.n)


def random_letters(n, length, rng):
    """Letters drawn uniformly from a uniformly chosen factor group."""
    factors = amalgam_generators(n)
    pools = (factors.ordered[SIDE_S4], factors.ordered[SIDE_DN])
    return [rng.choice(pools[rng.randrange(2)]) for _ in range(length)]

