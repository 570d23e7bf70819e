"""JSON documents for algebras and chains.

Exact numbers are written as ``"num/den"`` strings so a round trip is lossless.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, Tuple

from .ainfty import AInfinityStructure, ClassIndex
from .algebra_core import ChainAccumulator, ChainElement, FieldValue, GradedBasis, NovikovScalar
from .pairing import CyclicPairing


class DocumentError(ValueError):
    """Malformed document; the message starts with the JSON location."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: Any, where: str) -> Fraction:
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise DocumentError(where, f"expected a 'num/den' string, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(where, f"bad rational {text!r}") from exc


def field_to_json(v: FieldValue) -> Dict[str, str]:
    return {"rat": frac_str(v.a), "sqrt2": frac_str(v.b)}


def field_from_json(d: Any, where: str) -> FieldValue:
    if not isinstance(d, dict):
        raise DocumentError(where, "expected an object with 'rat' and 'sqrt2'")
    return FieldValue(parse_frac(d.get("rat", "0/1"), f"{where}.rat"),
                      parse_frac(d.get("sqrt2", "0/1"), f"{where}.sqrt2"))


def _need(d: Dict, key: str, where: str, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise DocumentError(where, f"missing key {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise DocumentError(f"{where}.{key}", f"expected {kind.__name__}")
    return v


# --- algebra ----------------------------------------------------------------------

def algebra_to_doc(A: AInfinityStructure, P: CyclicPairing) -> Dict:
    ops = []
    for (k, beta, word), out in sorted(A.constants.items(),
                                       key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        ops.append({
            "k": k,
            "energy": frac_str(beta.energy),
            "maslov": beta.maslov,
            "inputs": list(word),
            "output": [{"basis": n, "coeff": field_to_json(v)} for n, v in sorted(out.items())],
        })
    return {
        "basis": [{"name": n, "degree": A.basis.degree(n)} for n in A.basis],
        "unit": A.unit,
        "e_max": frac_str(A.e_max),
        "max_arity": A.max_arity,
        "pairing": [{"left": a, "right": b, "value": field_to_json(v)}
                    for (a, b), v in sorted(P.matrix.items())],
        "operations": ops,
    }


def algebra_from_doc(doc: Any) -> Tuple[AInfinityStructure, CyclicPairing]:
    if not isinstance(doc, dict):
        raise DocumentError("$", "expected an object")
    entries = []
    for i, b in enumerate(_need(doc, "basis", "$", list)):
        where = f"$.basis[{i}]"
        name = _need(b, "name", where, str)
        deg = _need(b, "degree", where, int)
        entries.append((name, deg))
    try:
        basis = GradedBasis(entries)
    except ValueError as exc:
        raise DocumentError("$.basis", str(exc)) from exc
    names = set(basis.names)
    unit = doc.get("unit")
    if unit is not None and unit not in names:
        raise DocumentError("$.unit", f"unknown basis name {unit!r}")
    e_max = parse_frac(doc.get("e_max", "2/1"), "$.e_max")
    max_arity = doc.get("max_arity")
    if max_arity is not None and not isinstance(max_arity, int):
        raise DocumentError("$.max_arity", "expected an integer or null")
    matrix = {}
    for i, e in enumerate(_need(doc, "pairing", "$", list)):
        where = f"$.pairing[{i}]"
        a, b = _need(e, "left", where, str), _need(e, "right", where, str)
        for side, n in (("left", a), ("right", b)):
            if n not in names:
                raise DocumentError(f"{where}.{side}", f"unknown basis name {n!r}")
        matrix[(a, b)] = field_from_json(_need(e, "value", where), f"{where}.value")
    consts: Dict = {}
    for i, op in enumerate(_need(doc, "operations", "$", list)):
        where = f"$.operations[{i}]"
        k = _need(op, "k", where, int)
        beta = ClassIndex(parse_frac(_need(op, "energy", where), f"{where}.energy"),
                          _need(op, "maslov", where, int))
        inputs = tuple(_need(op, "inputs", where, list))
        if len(inputs) != k:
            raise DocumentError(f"{where}.inputs", f"expected {k} inputs")
        for j, n in enumerate(inputs):
            if n not in names:
                raise DocumentError(f"{where}.inputs[{j}]", f"unknown basis name {n!r}")
        out = {}
        for j, o in enumerate(_need(op, "output", where, list)):
            n = _need(o, "basis", f"{where}.output[{j}]", str)
            if n not in names:
                raise DocumentError(f"{where}.output[{j}].basis", f"unknown basis name {n!r}")
            out[n] = field_from_json(_need(o, "coeff", f"{where}.output[{j}]"),
                                     f"{where}.output[{j}].coeff")
        consts[(k, beta, inputs)] = out
    try:
        A = AInfinityStructure(basis, consts, unit=unit, e_max=e_max, max_arity=max_arity)
        P = CyclicPairing(basis, matrix)
    except ValueError as exc:
        raise DocumentError("$", str(exc)) from exc
    return A, P


# --- chains -----------------------------------------------------------------------

def chain_to_doc(chain: ChainElement) -> Dict:
    words = []
    for letters, c in chain.items():
        for lam, v in c.terms:
            d = field_to_json(v)
            d["energy"] = frac_str(lam)
            words.append({"coeff": d, "letters": list(letters)})
    return {"e_max": frac_str(chain.e_max), "words": words}


def chain_from_doc(doc: Any, basis: GradedBasis = None, e_max=None) -> ChainElement:
    if not isinstance(doc, dict):
        raise DocumentError("$", "expected an object")
    if e_max is None:
        e_max = parse_frac(doc.get("e_max", "2/1"), "$.e_max")
    acc = ChainAccumulator(e_max)
    for i, w in enumerate(_need(doc, "words", "$", list)):
        where = f"$.words[{i}]"
        letters = tuple(_need(w, "letters", where, list))
        if not letters:
            raise DocumentError(f"{where}.letters", "empty word")
        for j, n in enumerate(letters):
            if not isinstance(n, str) or (basis is not None and n not in basis):
                raise DocumentError(f"{where}.letters[{j}]", f"unknown basis name {n!r}")
        c = _need(w, "coeff", where)
        v = field_from_json(c, f"{where}.coeff")
        lam = parse_frac(c.get("energy", "0/1"), f"{where}.coeff.energy")
        acc.add(letters, NovikovScalar.monomial(v, lam, e_max))
    return acc.result()


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc
    except OSError as exc:
        raise DocumentError(path, exc.strerror or str(exc)) from exc


def dump_json(obj: Any, path: str = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
