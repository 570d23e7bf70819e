"""Canonical model of the Clifford torus in CP^2 and the cyclic cycle ``alpha``.

The model is built in three steps:

1. the classical wedge table with unit ``e`` and the Maslov-two disc formula
   ``m_{k,beta_j}(x_1..x_k) = (1/k!) prod_s (d beta_j . x_s) T`` on one-forms;
2. a strict change of basis between ``(e1, e2)`` and the Hessian eigenbasis
   ``f1 = (e1+e2)/sqrt2``, ``f2 = (e1-e2)/sqrt2``;
3. exact completion of every remaining structure constant (inputs involving
   the top class) from the A-infinity relations and cyclic symmetry, solved
   energy level by energy level.
"""

from __future__ import annotations

import itertools
import math
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .ainfty import AInfinityStructure, ClassIndex, FiltrationMonoid, ZERO_CLASS
from .algebra_core import (
    DEFAULT_E_MAX,
    SQRT2,
    ChainAccumulator,
    ChainElement,
    FieldValue,
    GradedBasis,
    NovikovScalar,
    symmetrize_N,
)
from .hochschild import cyclic_cycle_check, hat_d_by_arity
from .linalg import LinExpr, solve_affine
from .pairing import CyclicPairing, m_plus, m_plus_chain
from .report import Report

UNIT = "e"
E_BASIS = GradedBasis([("e", 0), ("e1", 1), ("e2", 1), ("e12", 2)])
F_BASIS = GradedBasis([("e", 0), ("f1", 1), ("f2", 1), ("f12", 2)])

# one-forms as vectors in the (dx, dy) = (e1, e2) frame
_HALF_SQRT2 = SQRT2 * Fraction(1, 2)
ONE_FORMS = {
    "e1": (FieldValue(1), FieldValue(0)),
    "e2": (FieldValue(0), FieldValue(1)),
    "f1": (_HALF_SQRT2, _HALF_SQRT2),
    "f2": (_HALF_SQRT2, -_HALF_SQRT2),
}


class ConstraintError(RuntimeError):
    """The structure-constant system has no solution."""


@dataclass(frozen=True)
class DiscClass:
    name: str
    boundary: Tuple[int, int]
    area: Fraction = Fraction(1)


@dataclass(frozen=True)
class DiscClassTable:
    classes: Tuple[DiscClass, ...]

    def __post_init__(self):
        sx = sum(c.boundary[0] for c in self.classes)
        sy = sum(c.boundary[1] for c in self.classes)
        if (sx, sy) != (0, 0):
            raise ValueError("boundary classes of the basic discs must sum to zero")
        if any(c.area <= 0 for c in self.classes):
            raise ValueError("disc areas must be positive")

    @classmethod
    def standard(cls) -> "DiscClassTable":
        return cls((DiscClass("beta0", (-1, -1)), DiscClass("beta1", (1, 0)),
                    DiscClass("beta2", (0, 1))))

    def intersection(self, disc: DiscClass, letter: str) -> FieldValue:
        vx, vy = ONE_FORMS[letter]
        return vx * disc.boundary[0] + vy * disc.boundary[1]


# --- step 1: formula constants -------------------------------------------------

def classical_constants(basis: GradedBasis, unit: str = UNIT) -> Dict:
    """Wedge-product table (classical class) for a basis ``unit, a, b, ab``."""
    _, a, b, top = basis.names
    out = {(2, ZERO_CLASS, w): {} for w in basis.words(2)}
    for x in basis:
        out[(2, ZERO_CLASS, (unit, x))] = {x: FieldValue(1)}
        out[(2, ZERO_CLASS, (x, unit))] = {x: FieldValue(-1 if basis.degree(x) % 2 else 1)}
    out[(2, ZERO_CLASS, (a, b))] = {top: FieldValue(1)}
    out[(2, ZERO_CLASS, (b, a))] = {top: FieldValue(-1)}
    return out


def build_maslov2_constants(table: DiscClassTable, k_max: int, letters: Sequence[str],
                            unit: str = UNIT, include_curvature: bool = True) -> Dict:
    """Disc-formula constants on words in the one-form ``letters``, arities ``0..k_max``.

    Discs of equal area and Maslov index share one aggregated class.
    """
    out: Dict = {}
    for k in range(0 if include_curvature else 2, k_max + 1):
        fact = math.factorial(k)
        for word in itertools.product(letters, repeat=k):
            per_class: Dict[ClassIndex, FieldValue] = {}
            for disc in table.classes:
                prod = FieldValue(1)
                for x in word:
                    prod = prod * table.intersection(disc, x)
                beta = ClassIndex(disc.area, 2)
                per_class[beta] = per_class.get(beta, FieldValue(0)) + prod
            for beta, v in per_class.items():
                v = v * Fraction(1, fact)
                out[(k, beta, word)] = {unit: v} if v else {}
    return out


def formula_model_constants(basis: GradedBasis, k_max: int = 4,
                            table: Optional[DiscClassTable] = None) -> Dict:
    table = table or DiscClassTable.standard()
    consts = classical_constants(basis)
    consts.update(build_maslov2_constants(table, k_max, basis.of_degree(1)))
    return consts


# --- step 2: change of basis ----------------------------------------------------

# e-basis name -> f-basis combination
E_TO_F = {
    "e": {"e": FieldValue(1)},
    "e1": {"f1": _HALF_SQRT2, "f2": _HALF_SQRT2},
    "e2": {"f1": _HALF_SQRT2, "f2": -_HALF_SQRT2},
    "e12": {"f12": FieldValue(-1)},
}
F_TO_E = {
    "e": {"e": FieldValue(1)},
    "f1": {"e1": _HALF_SQRT2, "e2": _HALF_SQRT2},
    "f2": {"e1": _HALF_SQRT2, "e2": -_HALF_SQRT2},
    "f12": {"e12": FieldValue(-1)},
}


def transport_constants(constants: Mapping, forward: Mapping, backward: Mapping) -> Dict:
    """Constants of the target presentation: ``m'(y..) = H(m(H^{-1} y, ..))``.

    Slots present in the source with an empty value are treated as known zeros
    and transported as such.
    """
    by_k_beta: Dict[Tuple[int, ClassIndex], Dict] = {}
    for (k, beta, word), out in constants.items():
        by_k_beta.setdefault((k, beta), {})[word] = out
    target_names = sorted({n for v in forward.values() for n in v})
    result: Dict = {}
    for (k, beta), table in by_k_beta.items():
        if k == 0:
            out = table.get((), {})
            result[(0, beta, ())] = _push(out, forward)
            continue
        for yword in itertools.product(target_names, repeat=k):
            expansions = [list(backward[y].items()) for y in yword]
            acc: Dict[str, FieldValue] = {}
            known = True
            for combo in itertools.product(*expansions):
                xword = tuple(x for x, _ in combo)
                if xword not in table:
                    known = False
                    break
                c = FieldValue(1)
                for _, v in combo:
                    c = c * v
                for n, v in table[xword].items():
                    acc[n] = acc.get(n, FieldValue(0)) + c * v
            if known:
                result[(k, beta, yword)] = _push(acc, forward)
    return result


def _push(vec: Mapping[str, FieldValue], forward: Mapping) -> Dict[str, FieldValue]:
    out: Dict[str, FieldValue] = {}
    for n, v in vec.items():
        for m, w in forward[n].items():
            out[m] = out.get(m, FieldValue(0)) + v * w
    return {n: v for n, v in out.items() if v}


def change_basis_f(e_constants: Mapping) -> Tuple[Dict, Dict, Dict]:
    """f-basis presentation of e-basis constants plus the strict map in both directions."""
    return transport_constants(e_constants, E_TO_F, F_TO_E), dict(E_TO_F), dict(F_TO_E)


def pairing_f() -> CyclicPairing:
    return CyclicPairing(F_BASIS, {("f1", "f2"): 1, ("f2", "f1"): -1,
                                   ("e", "f12"): 1, ("f12", "e"): 1})


def pairing_e() -> CyclicPairing:
    return CyclicPairing(E_BASIS, {("e1", "e2"): -1, ("e2", "e1"): 1,
                                   ("e", "e12"): -1, ("e12", "e"): -1})


# --- step 3: completion ---------------------------------------------------------

@dataclass
class CompletionResult:
    constants: Dict
    provenance: Dict
    report: Report
    free: List = field(default_factory=list)


def _slot_key(slot):
    k, beta, word = slot[:3]
    return (k, beta, word) + tuple(slot[3:])


def complete_constants(basis: GradedBasis, pairing: CyclicPairing, known: Mapping,
                       unit: str = UNIT, e_max=DEFAULT_E_MAX, k_max: int = 4,
                       max_length: int = 4) -> CompletionResult:
    """Solve for every structure constant not fixed by the formula table or the unit.

    Unknowns are the slots of arity ``2..k_max`` whose inputs avoid the unit and
    are not all one-forms. Constraints: cyclic symmetry on words of length
    ``<= k_max + 1`` and the A-infinity relations on words of length
    ``<= max_length``, one energy level at a time. Free parameters are set to
    zero with a warning; an inconsistent level raises :class:`ConstraintError`.
    """
    t0 = time.perf_counter()
    e_max = Fraction(e_max)
    rep = Report("complete_constants", True)
    values: Dict = {s: dict(v) for s, v in known.items() if s[1].energy <= e_max}
    provenance = {s: "formula" for s, v in values.items()}
    one_forms = set(basis.of_degree(1))
    gens = {s[1] for s in values if s[1] != ZERO_CLASS}
    levels = sorted(c for c in FiltrationMonoid(gens, e_max).closure() if c != ZERO_CLASS)
    classes = [ZERO_CLASS] + levels
    splits = {b: [(b1, b2) for b1 in classes for b2 in classes if b1 + b2 == b] for b in levels}
    sh = basis.shifted

    def outputs(k, beta, word):
        d = sum(basis.degree(x) for x in word) + 2 - k - beta.maslov
        return basis.of_degree(d)

    def is_formula_slot(k, beta, word):
        if beta == ZERO_CLASS or unit in word:
            return True
        return beta.maslov == 2 and all(x in one_forms for x in word)

    all_free = []
    for beta in levels:
        unknown = set()
        for k in range(2, k_max + 1):
            for word in itertools.product([n for n in basis if n != unit], repeat=k):
                if is_formula_slot(k, beta, word) or (k, beta, word) in values:
                    continue
                for b in outputs(k, beta, word):
                    unknown.add((k, beta, word, b))
        unknown_slots = {(k, b_, w) for (k, b_, w, _) in unknown}

        def M(k, b, word):
            if k < 2:
                return {}
            if (k, b, word) in unknown_slots:
                return {o: LinExpr.var((k, b, word, o)) for o in outputs(k, b, word)}
            return {o: LinExpr.constant(v) for o, v in values.get((k, b, word), {}).items()}

        equations: List[LinExpr] = []
        labels: List[str] = []
        # cyclic symmetry at this class
        for n in range(3, k_max + 2):
            k = n - 1
            for word in basis.words(n):
                K = sh(word[0]) * sum(sh(x) for x in word[1:])
                lhs = LinExpr()
                for o, ex in M(k, beta, word[:k]).items():
                    v = pairing.value(o, word[k])
                    if v:
                        lhs = lhs + ex * v
                rhs = LinExpr()
                for o, ex in M(k, beta, word[1:]).items():
                    v = pairing.value(o, word[0])
                    if v:
                        rhs = rhs + ex * v
                eq = lhs - rhs if K % 2 == 0 else lhs + rhs
                if not eq.is_zero():
                    equations.append(eq)
                    labels.append(f"cyclic{word}@{beta}")
        # A-infinity relations at this energy
        for n in range(2, max_length + 1):
            for word in basis.words(n):
                comp: Dict[str, LinExpr] = {}
                prefix = 0
                for i in range(n):
                    for k2 in range(2, n - i + 1):
                        k1 = n - k2 + 1
                        if k1 < 2:
                            continue
                        sign = -1 if prefix % 2 else 1
                        for b1, b2 in splits[beta]:
                            inner = M(k2, b2, word[i:i + k2])
                            for o, ex_in in inner.items():
                                outer_word = word[:i] + (o,) + word[i + k2:]
                                for o2, ex_out in M(k1, b1, outer_word).items():
                                    term = ex_in * ex_out * sign
                                    comp[o2] = comp[o2] + term if o2 in comp else term
                    prefix += sh(word[i])
                for o2, eq in comp.items():
                    if not eq.is_zero():
                        equations.append(eq)
                        labels.append(f"ainfty{word}->{o2}@{beta}")
        order = sorted(unknown, key=lambda s: (s[0], s[2], s[3]))
        sol = solve_affine(equations, order=order)
        if not sol.consistent:
            rep.passed = False
            for idx, resid in sol.inconsistent[:10]:
                rep.witnesses.append({"relation": labels[idx], "residual": str(resid)})
            rep.timing = time.perf_counter() - t0
            raise ConstraintError(f"inconsistent constraints at class {beta}: {rep.witnesses[0]}")
        free = sorted(set(unknown) - set(sol.values), key=lambda s: (s[0], s[2], s[3]))
        untouched = [s for s in free if not any(s in eq.coeffs for eq in equations)]
        all_free.extend(free)
        if free:
            msg = (f"{len(free)} free parameter(s) at class {beta} set to zero "
                   f"({len(untouched)} unconstrained)")
            rep.warnings.append(msg)
            warnings.warn(msg, stacklevel=2)
        dependent = [s for s in sol.values if s not in sol.determined]
        for slot in unknown_slots:
            k, b, w = slot
            out = {}
            for o in outputs(k, b, w):
                v = sol.values.get((k, b, w, o), FieldValue(0))
                if v:
                    out[o] = v
            values[slot] = out
            provenance[slot] = "solved"
        rep.details[str(beta)] = {
            "unknowns": len(unknown),
            "equations": len(equations),
            "determined": len(sol.determined),
            "dependent_on_free": len(dependent),
            "free": len(free),
        }
    rep.details["classes"] = [str(c) for c in classes]
    rep.timing = time.perf_counter() - t0
    return CompletionResult(values, provenance, rep, all_free)


# --- the bundle ------------------------------------------------------------------

@dataclass
class ModelBundle:
    structure: AInfinityStructure          # full model, m_0 included
    pairing: CyclicPairing
    alpha: ChainElement
    provenance: Dict
    completion: Report
    free: List

    @property
    def reduced(self) -> AInfinityStructure:
        return self._reduced

    def __post_init__(self):
        self._reduced = self.structure.reduced()


def build_alpha(e_max=DEFAULT_E_MAX) -> ChainElement:
    """``N_3(f1 f1 f12) + 3 N_3(f2 f2 f12) + 3 T N_3(e f1 f2)``."""
    T = NovikovScalar.monomial(1, 1, e_max)
    acc = ChainAccumulator(e_max)
    acc.add_chain(symmetrize_N(ChainElement.word(("f1", "f1", "f12"), 1, e_max), F_BASIS))
    acc.add_chain(symmetrize_N(ChainElement.word(("f2", "f2", "f12"), 3, e_max), F_BASIS))
    acc.add_chain(symmetrize_N(ChainElement.word(("e", "f1", "f2"), 3, e_max), F_BASIS), scale=T)
    return acc.result()


def alpha_groups(e_max=DEFAULT_E_MAX) -> Dict[str, ChainElement]:
    T = NovikovScalar.monomial(1, 1, e_max)
    return {
        "f1 f1 f12": symmetrize_N(ChainElement.word(("f1", "f1", "f12"), 1, e_max), F_BASIS),
        "f2 f2 f12": symmetrize_N(ChainElement.word(("f2", "f2", "f12"), 3, e_max), F_BASIS),
        "e f1 f2": symmetrize_N(ChainElement.word(("e", "f1", "f2"), 3, e_max), F_BASIS) * T,
    }


def _structure(basis, constants, e_max, k_max) -> AInfinityStructure:
    clean = {s: v for s, v in constants.items() if v}
    return AInfinityStructure(basis, clean, unit=UNIT, e_max=e_max, max_arity=k_max)


_CACHE: Dict = {}


def build_model(e_max=DEFAULT_E_MAX, k_max: int = 4, basis: str = "f",
                route: str = "transport") -> ModelBundle:
    """Completed Clifford model in the ``f`` (default) or ``e`` presentation.

    ``route="transport"`` builds formula constants in the e-basis and moves
    them to the f-basis by the strict basis change; ``route="direct"``
    evaluates the disc formula on the f one-forms. Both complete afterwards.
    """
    key = (Fraction(e_max), k_max, basis, route)
    if key in _CACHE:
        return _CACHE[key]
    e_max = Fraction(e_max)
    if basis == "e":
        B, P = E_BASIS, pairing_e()
        formula = formula_model_constants(E_BASIS, k_max)
    elif basis == "f":
        B, P = F_BASIS, pairing_f()
        if route == "transport":
            formula, _, _ = change_basis_f(formula_model_constants(E_BASIS, k_max))
        else:
            formula = formula_model_constants(F_BASIS, k_max)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        comp = complete_constants(B, P, formula, e_max=e_max, k_max=k_max)
    structure = _structure(B, comp.constants, e_max, k_max)
    alpha = build_alpha(e_max) if basis == "f" else transport_chain(build_alpha(e_max), F_TO_E)
    bundle = ModelBundle(structure, P, alpha, comp.provenance, comp.report, comp.free)
    _CACHE[key] = bundle
    return bundle


def transport_chain(chain: ChainElement, letter_map: Mapping) -> ChainElement:
    """Apply a strict linear map letter by letter (no signs: it has degree zero)."""
    acc = ChainAccumulator(chain.e_max)
    for letters, c in chain.terms.items():
        for combo in itertools.product(*[list(letter_map[x].items()) for x in letters]):
            coeff = c
            for _, v in combo:
                coeff = coeff * v
            acc.add(tuple(n for n, _ in combo), coeff)
    return acc.result()


# --- quoted values ---------------------------------------------------------------

def _fv(rat=0, sq=0) -> FieldValue:
    return FieldValue(Fraction(rat), Fraction(sq))


ONE = ClassIndex(1, 2)

# (slot, expected output) for every constant quoted alongside the cycle computation
QUOTED_CONSTANTS = [
    ((2, ONE, ("f1", "f1")), {"e": _fv(Fraction(3, 2))}),
    ((2, ONE, ("f2", "f2")), {"e": _fv(Fraction(1, 2))}),
    ((2, ZERO_CLASS, ("f1", "f2")), {"f12": _fv(1)}),
    ((2, ZERO_CLASS, ("f2", "f1")), {"f12": _fv(-1)}),
    ((2, ONE, ("f12", "f1")), {"f2": _fv(Fraction(-3, 2))}),
    ((2, ONE, ("f12", "f2")), {"f1": _fv(Fraction(1, 2))}),
    ((2, ONE, ("f1", "f12")), {"f2": _fv(Fraction(-3, 2))}),
    ((2, ONE, ("f2", "f12")), {"f1": _fv(Fraction(1, 2))}),
    ((3, ONE, ("f12", "f2", "f2")), {"f2": _fv(0, Fraction(-1, 12))}),
    ((3, ONE, ("f2", "f12", "f2")), {"f2": _fv(0, Fraction(-1, 12))}),
    ((3, ONE, ("f2", "f2", "f12")), {"f2": _fv(0, Fraction(-1, 12))}),
    ((3, ONE, ("f1", "f1", "f1")), {"e": _fv(0, Fraction(-1, 4))}),
    ((3, ONE, ("f1", "f2", "f2")), {"e": _fv(0, Fraction(1, 12))}),
]

# the sign of m_3(f12, f1, f1) is displayed both ways; compare against each
M3_F12_F1_F1_DISPLAYED = {"first display": _fv(0, Fraction(1, 4)),
                          "second display": _fv(0, Fraction(-1, 4))}


def provenance_table(bundle: ModelBundle) -> List[Dict]:
    rows = []
    A = bundle.structure
    for slot, expected in QUOTED_CONSTANTS:
        got = A.constants.get(slot, {})
        rows.append({
            "slot": f"m_{slot[0]},{slot[1]}({', '.join(slot[2])})",
            "expected": {n: str(v) for n, v in expected.items()},
            "got": {n: str(v) for n, v in got.items()},
            "source": bundle.provenance.get(slot, "formula"),
            "match": got == expected,
        })
    return rows


def m3_sign_report(bundle: ModelBundle) -> Dict:
    A = bundle.structure
    out = {}
    for slot_word in [("f12", "f1", "f1"), ("f1", "f12", "f1"), ("f1", "f1", "f12")]:
        got = A.constants.get((3, ONE, slot_word), {})
        out[" ".join(slot_word)] = {n: str(v) for n, v in got.items()}
    got = A.constants.get((3, ONE, ("f12", "f1", "f1")), {}).get("f2", FieldValue(0))
    out["matches"] = [name for name, v in M3_F12_F1_F1_DISPLAYED.items() if v == got]
    return out


def evaluate_alpha(bundle: ModelBundle) -> Report:
    """Cycle check of ``alpha`` followed by ``m^+(alpha)`` and ``m^+(alpha/3)``."""
    t0 = time.perf_counter()
    A, P = bundle.reduced, bundle.pairing
    alpha = bundle.alpha
    rep = Report("evaluate_alpha", True)
    cyc = cyclic_cycle_check(A, alpha)
    stages = hat_d_by_arity(A, alpha)
    rep.details["hat_m2_alpha"] = str(stages.get(2, "0"))
    rep.details["m3_alpha"] = str(stages.get(3, "0"))
    rep.details["cycle"] = cyc.passed
    value = m_plus_chain(A, P, alpha)
    third = m_plus_chain(A, P, alpha * Fraction(1, 3))
    rep.details["m_plus_alpha"] = str(value)
    rep.details["m_plus_alpha_over_3"] = str(third)
    groups = {}
    for name, g in alpha_groups(A.e_max).items():
        groups[name] = {" ".join(w): str(m_plus(A, P, tw)) for w, tw in
                        ((tw.letters, tw) for tw in g.words())}
        groups[name]["total"] = str(m_plus_chain(A, P, g))
    rep.details["contributions"] = groups
    T = NovikovScalar.monomial(1, 1, A.e_max)
    rep.passed = cyc.passed and value == T * 18 and third == T * 6
    rep.timing = time.perf_counter() - t0
    return rep
