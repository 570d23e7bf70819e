"""Gapped filtered A-infinity structures stored as exact structure constants.

A structure holds ``m_{k,beta}(x_1, ..., x_k)`` for basis words and classes
``beta = (energy, maslov)``; the full operation is
``m_k = sum_beta T**energy(beta) * m_{k,beta}``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra_core import (
    DEFAULT_E_MAX,
    ChainAccumulator,
    ChainElement,
    FieldValue,
    GradedBasis,
    GradedElement,
    NovikovScalar,
    TensorWord,
    Word,
    _frac,
)
from .report import Report


class UndeterminedConstant(LookupError):
    """An operation slot needed by a computation has no known value."""

    def __init__(self, slot):
        super().__init__(f"undetermined constant {slot}")
        self.slot = slot


@dataclass(frozen=True, order=True)
class ClassIndex:
    energy: Fraction
    maslov: int

    def __init__(self, energy=0, maslov: int = 0):
        object.__setattr__(self, "energy", _frac(energy))
        object.__setattr__(self, "maslov", int(maslov))
        if self.energy < 0:
            raise ValueError("class energy must be nonnegative")

    def __add__(self, other: "ClassIndex") -> "ClassIndex":
        return ClassIndex(self.energy + other.energy, self.maslov + other.maslov)

    def __str__(self) -> str:
        return f"({self.energy},{self.maslov})"


ZERO_CLASS = ClassIndex(0, 0)

Slot = Tuple[int, ClassIndex, Word]


class FiltrationMonoid:
    """Set of classes, closed under addition up to ``e_max`` on demand.

    ``classes`` may be any iterable, including an unbounded generator; at most
    ``cap`` items are ever consumed.
    """

    def __init__(self, classes: Iterable, e_max=DEFAULT_E_MAX, cap: int = 2000):
        self.e_max = _frac(e_max)
        self.cap = cap
        self.truncated = False
        items = []
        for i, c in enumerate(classes):
            if i >= cap:
                self.truncated = True
                break
            items.append(c if isinstance(c, ClassIndex) else ClassIndex(*c))
        self.generators = frozenset(items)

    def closure(self) -> Optional[frozenset]:
        """Additive closure within energy ``e_max``; ``None`` if it exceeds ``cap``."""
        out = set(self.generators) | {ZERO_CLASS}
        frontier = set(out)
        while frontier:
            new = set()
            for a in frontier:
                for b in self.generators:
                    c = a + b
                    if c.energy <= self.e_max and c not in out:
                        new.add(c)
            out |= new
            if len(out) > self.cap:
                return None
            frontier = new
        return frozenset(out)


def verify_gapped(G: FiltrationMonoid) -> Report:
    t0 = time.perf_counter()
    rep = Report("gapped", True)
    odd = sorted(str(c) for c in G.generators if c.maslov % 2)
    if odd:
        rep.passed = False
        rep.witnesses.append({"condition": "maslov_even", "classes": odd})
    closure = None if G.truncated else G.closure()
    energies = sorted({c.energy for c in G.generators if c.energy <= G.e_max})
    if G.truncated or closure is None:
        rep.passed = False
        rep.witnesses.append({
            "condition": 1,
            "reason": f"more than {G.cap} classes below energy {G.e_max}; energies accumulate",
            "sample_energies": [str(e) for e in energies[:5]],
        })
    bad = sorted(str(c) for c in G.generators if c.energy == 0 and c.maslov != 0)
    if bad:
        rep.passed = False
        rep.witnesses.append({"condition": 2, "classes": bad})
    if closure is not None:
        per_level: Dict[Fraction, int] = {}
        for c in closure:
            per_level[c.energy] = per_level.get(c.energy, 0) + 1
        rep.details["classes"] = [str(c) for c in sorted(closure)]
        rep.details["max_per_energy"] = max(per_level.values())
    rep.timing = time.perf_counter() - t0
    return rep


class AInfinityStructure:
    """Exact structure constants ``(k, beta, inputs) -> {basis name: FieldValue}``.

    Slots of arity ``<= max_arity`` that are absent are zero; slots of larger
    arity, and any slot listed in ``undetermined``, raise
    :class:`UndeterminedConstant` when a computation needs them.
    """

    def __init__(self, basis: GradedBasis, constants: Mapping[Slot, Mapping[str, object]],
                 unit: Optional[str] = None, e_max=DEFAULT_E_MAX,
                 max_arity: Optional[int] = None, undetermined: Iterable[Slot] = (),
                 check_degrees: bool = True):
        self.basis = basis
        self.unit = unit
        self.e_max = _frac(e_max)
        self.max_arity = max_arity
        self.undetermined = frozenset(undetermined)
        self._undet_words = {(k, w) for k, _, w in self.undetermined}
        consts: Dict[Slot, Dict[str, FieldValue]] = {}
        for (k, beta, word), out in constants.items():
            beta = beta if isinstance(beta, ClassIndex) else ClassIndex(*beta)
            word = tuple(word)
            if len(word) != k:
                raise ValueError(f"slot arity {k} does not match word {word}")
            if beta.energy > self.e_max:
                continue
            clean = {n: FieldValue.coerce(v) for n, v in out.items() if FieldValue.coerce(v)}
            if clean:
                consts[(k, beta, word)] = clean
        self.constants = consts
        if unit is not None and unit not in basis:
            raise ValueError(f"unit {unit!r} not in basis")
        if check_degrees:
            bad = self.degree_violations()
            if bad:
                raise ValueError(f"degree rule violated at {bad[0]}")
        self._index: Dict[Tuple[int, Word], List[Tuple[ClassIndex, Dict[str, FieldValue]]]] = {}
        for (k, beta, word), out in sorted(consts.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
            self._index.setdefault((k, word), []).append((beta, out))
        self._cache: Dict[Tuple[int, Word], Dict[str, NovikovScalar]] = {}

    # --- bookkeeping ---------------------------------------------------------

    def output_degree(self, k: int, beta: ClassIndex, word: Word) -> int:
        return sum(self.basis.degree(x) for x in word) + 2 - k - beta.maslov

    def degree_violations(self) -> List[Slot]:
        bad = []
        for (k, beta, word), out in self.constants.items():
            d = self.output_degree(k, beta, word)
            if any(self.basis.degree(n) != d for n in out):
                bad.append((k, beta, word))
        return bad

    def classes(self) -> frozenset:
        return frozenset({ZERO_CLASS} | {b for (_, b, _) in self.constants})

    def arities(self) -> List[int]:
        return sorted({k for (k, _, _) in self.constants})

    def filtration(self) -> FiltrationMonoid:
        return FiltrationMonoid(self.classes(), self.e_max)

    def with_constants(self, constants, **kw) -> "AInfinityStructure":
        args = dict(basis=self.basis, constants=constants, unit=self.unit, e_max=self.e_max,
                    max_arity=self.max_arity, undetermined=self.undetermined)
        args.update(kw)
        return AInfinityStructure(**args)

    def reduced(self) -> "AInfinityStructure":
        """Same structure with every ``m_0`` replaced by zero."""
        return self.with_constants({s: v for s, v in self.constants.items() if s[0] != 0})

    def has_curvature(self) -> bool:
        return any(k == 0 for (k, _, _) in self.constants)

    # --- evaluation ----------------------------------------------------------

    def constant(self, k: int, beta: ClassIndex, word: Sequence[str]) -> GradedElement:
        """The unweighted constant ``m_{k,beta}(word)``."""
        word = tuple(word)
        self._check_slot(k, word)
        out = self.constants.get((k, beta, word), {})
        return GradedElement(out, self.e_max)

    def _check_slot(self, k: int, word: Word) -> None:
        if self.max_arity is not None and k > self.max_arity:
            if self.unit is not None and self.unit in word:
                return  # strict unitality: these vanish at every arity above two
            raise UndeterminedConstant((k, None, word))
        if (k, word) in self._undet_words:
            slot = next(s for s in self.undetermined if s[0] == k and s[2] == word)
            raise UndeterminedConstant(slot)

    def m_word(self, k: int, word: Word) -> Dict[str, NovikovScalar]:
        """``m_k`` on a basis word, energy-weighted and truncated."""
        key = (k, word)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self._check_slot(k, word)
        acc: Dict[str, NovikovScalar] = {}
        for beta, out in self._index.get(key, ()):
            for n, c in out.items():
                s = NovikovScalar.monomial(c, beta.energy, self.e_max)
                acc[n] = acc[n] + s if n in acc else s
        res = {n: s for n, s in acc.items() if s}
        self._cache[key] = res
        return res

    def apply_m(self, k: int, inputs: Sequence[GradedElement]) -> GradedElement:
        if len(inputs) != k:
            raise ValueError(f"m_{k} takes {k} inputs, got {len(inputs)}")
        acc: Dict[str, NovikovScalar] = {}
        if k == 0:
            acc = dict(self.m_word(0, ()))
        else:
            for combo in itertools.product(*[list(x.items()) for x in inputs]):
                word = tuple(n for n, _ in combo)
                c = combo[0][1]
                for _, s in combo[1:]:
                    c = c * s
                if not c:
                    continue
                for n, v in self.m_word(k, word).items():
                    p = c * v
                    acc[n] = acc[n] + p if n in acc else p
        return GradedElement(acc, self.e_max)

    def m_of_word(self, letters: Word) -> Dict[str, NovikovScalar]:
        """``m`` applied to a whole word (arity = word length)."""
        return self.m_word(len(letters), letters)

    def hat_d_word(self, letters: Word, coeff: NovikovScalar, acc: ChainAccumulator) -> None:
        """Accumulate the coderivation applied to ``coeff * letters``."""
        n = len(letters)
        shifted = [self.basis.shifted(x) for x in letters]
        prefix_sign = [0] * (n + 1)
        for i in range(n):
            prefix_sign[i + 1] = prefix_sign[i] + shifted[i]
        lo = 0 if self.has_curvature() else 1
        for k in range(lo, n + 1):
            for i in range(n - k + 1):
                out = self.m_word(k, letters[i:i + k])
                if not out:
                    continue
                c = coeff if prefix_sign[i] % 2 == 0 else -coeff
                head, tail = letters[:i], letters[i + k:]
                for name, s in out.items():
                    acc.add(head + (name,) + tail, c * s)

    def hat_d(self, x) -> ChainElement:
        """The coderivation ``sum_k hat m_k`` on a word or a chain."""
        if isinstance(x, TensorWord):
            x = x.chain()
        acc = ChainAccumulator(self.e_max)
        for letters, c in x.terms.items():
            self.hat_d_word(letters, c, acc)
        return acc.result()

    def m_chain(self, chain: ChainElement) -> GradedElement:
        """Apply ``m`` to every word of a chain (arity = word length) and sum."""
        acc: Dict[str, NovikovScalar] = {}
        for letters, c in chain.terms.items():
            for n, v in self.m_of_word(letters).items():
                p = c * v
                acc[n] = acc[n] + p if n in acc else p
        return GradedElement(acc, self.e_max)


def verify_ainfty(A: AInfinityStructure, max_length: int = 4) -> Report:
    """Evaluate ``hat d o hat d`` on every basis word up to ``max_length``."""
    t0 = time.perf_counter()
    rep = Report("ainfty", True, details={"max_length": max_length, "e_max": str(A.e_max)})
    one = NovikovScalar.const(1, A.e_max)
    checked = 0
    for n in range(1, max_length + 1):
        for word in A.basis.words(n):
            checked += 1
            try:
                first = A.hat_d(ChainElement({word: one}, A.e_max))
                second = A.hat_d(first)
            except UndeterminedConstant as exc:
                rep.passed = False
                rep.witnesses.append({"word": list(word), "undetermined": str(exc.slot)})
                continue
            if second:
                rep.passed = False
                rep.witnesses.append({"word": list(word), "residue": str(second)})
    rep.details["words_checked"] = checked
    rep.timing = time.perf_counter() - t0
    return rep


def verify_unit(A: AInfinityStructure, max_arity: Optional[int] = None) -> Report:
    """Strict unit: ``m_2(e,x) = x``, ``m_2(x,e) = (-1)^deg(x) x``, all other slots with ``e`` vanish."""
    t0 = time.perf_counter()
    rep = Report("unit", True)
    e = A.unit
    if e is None:
        rep.passed = False
        rep.witnesses.append({"reason": "no unit designated"})
        return rep
    zero = ZERO_CLASS
    for x in A.basis:
        left = A.constants.get((2, zero, (e, x)), {})
        right = A.constants.get((2, zero, (x, e)), {})
        sgn = -1 if A.basis.degree(x) % 2 else 1
        if left != {x: FieldValue(1)}:
            rep.passed = False
            rep.witnesses.append({"identity": f"m2({e},{x}) = {x}", "got": {n: str(v) for n, v in left.items()}})
        if right != {x: FieldValue(sgn)}:
            rep.passed = False
            rep.witnesses.append({"identity": f"m2({x},{e}) = {sgn:+d}{x}", "got": {n: str(v) for n, v in right.items()}})
    for (k, beta, word), out in A.constants.items():
        if e in word and (k, beta) != (2, zero):
            rep.passed = False
            rep.witnesses.append({"slot": [k, str(beta), list(word)], "got": {n: str(v) for n, v in out.items()}})
    top = max_arity if max_arity is not None else (A.max_arity or max(A.arities() or [2]))
    rep.details["max_arity"] = top
    rep.timing = time.perf_counter() - t0
    return rep
