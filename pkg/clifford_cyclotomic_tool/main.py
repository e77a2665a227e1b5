import json
import logging
import random
from fractions import Fraction
from pathlib import Path

import yaml

from . import amalgam
from . import cyclotomic as cyc
from . import matrices as mat
from . import selmer
from . import synthesis
from . import zeta_euler
from .config import get_settings
from .cyclotomic import CycElem
from .errors import InvariantViolation, NotTwoLocalError, PayloadError, UnsynthesizedError
from .matrices import OMat, SquareMatrix, UMat

logger = logging.getLogger(__name__)

MAX_TRIAL_WORD_LENGTH = 60
MAX_TRIAL_LETTERS = 20


# --- Payloads ---

def load_payload(source):
    """
    Parses the --input value: a path to a JSON file, or the JSON text itself.
    Malformed JSON is reported with its line, column and character position.
    """
    if source is None:
        raise PayloadError("No input given; pass --input with a JSON file or inline JSON")
    text = source
    if not source.lstrip().startswith(('{', '[', '"')):
        path = Path(source)
        try:
            if path.is_file():
                text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise PayloadError(f"Cannot read input file {source}: {e}")
        if text is source:
            try:
                return json.loads(source)
            except json.JSONDecodeError:
                raise PayloadError(f"Input file {source} does not exist and the value is not inline JSON")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise PayloadError(f"Malformed JSON at line {e.lineno}, column {e.colno} (char {e.pos}): {e.msg}")


def _element_payload(source, n):
    return cyc.from_json(load_payload(source), n)


def _matrix_payload(source, kind=None):
    data = load_payload(source)
    if kind is None:
        rows = data.get("rows") if isinstance(data, dict) else None
        kind = OMat if isinstance(rows, list) and len(rows) == 3 else UMat
    return mat.from_json(data, kind)


# --- Rendering ---

def to_plain(value):
    """JSON-ready form of a report: fractions become "p/q" strings, elements and matrices their codec form."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, CycElem):
        return cyc.to_json(value)
    if isinstance(value, SquareMatrix):
        return mat.to_json(value)
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    raise TypeError(f"Cannot render {type(value).__name__} in a report")


def _table_scalar(value):
    if isinstance(value, SquareMatrix):
        return "[" + "; ".join(", ".join(str(e) for e in row) for row in value.rows) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    return str(value)


def _table_lines(report, indent=0):
    pad = " " * indent
    lines = []
    width = max((len(str(k)) for k in report), default=0)
    for key in sorted(report, key=str):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_table_lines(value, indent + 2))
        elif isinstance(value, (list, tuple)) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            lines.extend(_row_table(value, indent + 2))
        elif isinstance(value, (list, tuple)):
            lines.append(f"{pad}{str(key).ljust(width)}  " + ", ".join(_table_scalar(v) for v in value))
        else:
            lines.append(f"{pad}{str(key).ljust(width)}  {_table_scalar(value)}")
    return lines


def _row_table(rows, indent):
    pad = " " * indent
    columns = list(rows[0])
    cells = [[_table_scalar(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
    lines = [pad + "  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    for r in cells:
        lines.append(pad + "  ".join(v.rjust(w) for v, w in zip(r, widths)))
    return lines


def render(report, fmt='json'):
    if fmt == 'json':
        return json.dumps(to_plain(report), sort_keys=True, indent=2)
    if fmt == 'yaml':
        return yaml.safe_dump(to_plain(report), sort_keys=True, default_flow_style=False).rstrip("\n")
    if fmt == 'table':
        return "\n".join(_table_lines(report))
    raise ValueError(f"Unknown output format '{fmt}'")


def _certificate(cert):
    if cert.is_square:
        return {"verdict": cert.verdict, "root": cert.root}
    return {
        "verdict": cert.verdict,
        "kind": cert.kind,
        "prime": cert.witness_prime,
        "embedding": cert.embedding,
        "residue": cert.residue,
    }


def _trial_settings(trials, seed):
    settings = get_settings()
    trials = settings.default_trials if trials is None else trials
    seed = settings.default_seed if seed is None else seed
    return trials, seed, random.Random(seed)


# --- Ring and matrix checks ---

def ring_check(source, n=None):
    """Membership in R_n and R_n^+, positivity and square class of one element."""
    a = _element_payload(source, n)
    try:
        exponent = cyc.denom_exp(a)
    except NotTwoLocalError:
        exponent = None
    report = {
        "n": a.n,
        "element": a,
        "isReal": cyc.is_real(a),
        "inRn": cyc.is_in_Rn(a),
        "inRnPlus": cyc.is_in_Rn_plus(a),
        "denomExp": exponent,
        "fieldNorm": cyc.field_norm(a),
    }
    if report["isReal"] and a:
        report["embeddingSigns"] = list(cyc.embeddings(a).signs())
        report["totallyPositive"] = cyc.is_totally_positive(a)
        report["square"] = _certificate(cyc.is_square_in_F(a))
    return report


def mat_check(source):
    m = _matrix_payload(source)
    if isinstance(m, OMat):
        return {
            "n": m.n,
            "kind": "SO3",
            "det": m.det(),
            "orthogonal": mat.is_orthogonal(m),
            "inSO3": mat.is_in_SO3(m),
        }
    member = mat.membership(m)
    return {
        "n": m.n,
        "kind": "U2",
        "det": m.det(),
        "unitary": mat.is_unitary(m),
        "inU2": member.in_u2,
        "inU2zeta": member.in_u2_zeta,
        "inSU2": member.in_su2,
        "detPower": member.det_power,
    }


def adjoint_image(source):
    a = _matrix_payload(source, UMat)
    return {"n": a.n, "image": mat.adjoint(a)}


def pi_image(source):
    g = _matrix_payload(source, UMat)
    return {"n": g.n, "image": mat.pi_map(g)}


# --- Obstruction ---

def phi_report(source):
    m = _matrix_payload(source, OMat)
    profile = selmer.phi_profile(m)
    square_class = selmer.phi_class(m)
    cert = square_class.certificate()
    return {
        "n": m.n,
        "phi": list(profile.phi),
        "theta": [list(row) for row in profile.theta],
        "class": square_class.rep,
        "trivial": cert.is_square,
        "certificate": _certificate(cert),
        "checks": selmer.lemma_profile_checks(m),
    }


def lift_report(source, u2=False):
    m = _matrix_payload(source, OMat)
    if u2:
        lift = selmer.try_lift_to_U2_supported(m)
        return {"n": m.n, "lifted": True, "target": "U2", "lift": lift}
    result = selmer.try_lift_to_SU2(m)
    if isinstance(result, selmer.Obstructed):
        return {
            "n": m.n,
            "lifted": False,
            "target": "SU2",
            "class": result.square_class.rep,
            "certificate": _certificate(result.certificate),
        }
    return {"n": m.n, "lifted": True, "target": "SU2", "lift": result}


def selmer_report(n):
    table = selmer.selmer_table(n)
    return {"n": table.n, "rank": table.rank, "c": table.c, "cbar": table.cbar}


def dreary_report():
    witness = selmer.example_dreary_witness()
    if not all(witness.verdicts.values()):
        failed = sorted(k for k, v in witness.verdicts.items() if not v)
        raise InvariantViolation(f"Dreary example checks failed: {', '.join(failed)}")
    return {
        "tq": witness.tq,
        "mq": witness.mq,
        "u": witness.u,
        "sqrt21": witness.sqrt21,
        "verdicts": witness.verdicts,
    }


# --- Euler characteristics ---

def _chi_dict(table):
    return {
        "n": table.n,
        "zetaMinus1": table.zeta_minus1,
        "M": table.m_value,
        "chiSU2": table.chi_su2,
        "chiPSU2": table.chi_psu2,
        "chiPU2zeta": table.chi_pu2_zeta,
        "chiPU2": table.chi_pu2,
        "chiSO3": table.chi_so3 if table.chi_so3 is not None else table.chi_so3_formula,
        "chiSgn": table.chi_sgn,
        "chiG4n": table.chi_g4n,
        "c": table.c,
        "cbar": table.cbar,
        "r": table.r,
        "rPlus": table.r_plus,
        "discKn": table.disc_kn,
        "discFn": table.disc_fn,
    }


def chi_report(n):
    return _chi_dict(zeta_euler.chi_table(n))


def decide_report(n):
    decision = zeta_euler.decide_gate_equality(n)
    return {
        "n": n,
        "verdict": decision.verdict,
        "relation": decision.relation,
        "chiSU2": decision.evidence.chi_su2,
        "bound": zeta_euler.gate_bound(n),
        "u2EqualsU2zeta": zeta_euler.u2_equals_u2zeta(n),
    }


def scan_report(n_max, workers=None, analytic_max=None):
    result = zeta_euler.scan(n_max, workers=workers, analytic_max=analytic_max)
    report = {
        "max": n_max,
        "rows": result.rows,
        "equalities": result.equalities,
        "strictCount": len(result.strict),
    }
    if analytic_max:
        report["analyticRows"] = result.analytic_rows
        report["threshold"] = result.threshold
    return report


# --- Words, synthesis and amalgams ---

def eval_word_report(text, n):
    word = synthesis.parse_word(text, n)
    u = synthesis.eval_word(word)
    report = {
        "n": n,
        "word": synthesis.format_word(word),
        "matrix": u,
        "detPower": synthesis.det_power(word),
    }
    if report["detPower"] == 0:
        report["hzWord"] = list(synthesis.to_hz_word(word).factors)
    return report


def synth_report(source):
    u = _matrix_payload(source, UMat)
    word = synthesis.synthesize(u)
    return {
        "n": u.n,
        "word": synthesis.format_word(word),
        "length": len(word),
        "hCount": word.h_count(),
    }


def synth_round_trips(n=8, trials=None, seed=None):
    """
    Synthesizes the matrices of random words and checks each result evaluates
    back to the same matrix. Away from level 8 the bounded descent may give up;
    those trials are counted rather than failed.
    """
    trials, seed, rng = _trial_settings(trials, seed)
    longest = 0
    unsynthesized = 0
    for _ in range(trials):
        word = synthesis.random_word(n, rng.randint(1, MAX_TRIAL_WORD_LENGTH), rng)
        u = synthesis.eval_word(word)
        try:
            found = synthesis.synthesize(u)
        except UnsynthesizedError:
            unsynthesized += 1
            continue
        longest = max(longest, len(found))
    logger.info(f"{trials} synthesis round trips at level {n}, {unsynthesized} unsynthesized")
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "verified": trials - unsynthesized,
        "unsynthesized": unsynthesized,
        "longestWord": longest,
    }


def _normal_form_dict(nf):
    return {
        "n": nf.n,
        "head": nf.head,
        "length": len(nf),
        "letters": [{"side": side, "rep": rep} for side, rep in nf.letters],
    }


def amalgam_nf_report(text, n):
    word = synthesis.parse_word(text, n)
    nf = amalgam.gate_word_normal_form(word)
    if amalgam.eval_amalgam(nf) != mat.pi_map(synthesis.eval_word(word)):
        raise InvariantViolation(f"Normal form of '{text}' does not evaluate to pi of the word")
    report = _normal_form_dict(nf)
    report["word"] = synthesis.format_word(word)
    return report


def amalgam_trials(n=12, trials=None, seed=None):
    """
    Compares normal-form equality with matrix equality on random letter
    strings. Every other pair is built to be equal by reading the second
    string off the first one's normal form.
    """
    trials, seed, rng = _trial_settings(trials, seed)
    factors = amalgam.amalgam_generators(n)
    equal = 0
    for t in range(trials):
        letters = amalgam.random_letters(n, rng.randint(1, MAX_TRIAL_LETTERS), rng)
        if t % 2 == 0:
            nf = amalgam.normal_form(letters, n)
            other = [nf.head] + [rep for _, rep in nf.letters]
        else:
            other = amalgam.random_letters(n, rng.randint(1, MAX_TRIAL_LETTERS), rng)
        if amalgam.amalgam_equal(letters, other, n):
            equal += 1
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "equal": equal,
        "unequal": trials - equal,
        "factorOrders": {"S4": len(factors.s4), "Dn": len(factors.dn), "D4": len(factors.d4)},
        "chi": amalgam.chi_group_identities(n),
    }
