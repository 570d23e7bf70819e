"""Cyclic inner products and the ``m^+`` functional."""

from __future__ import annotations

import random
import time
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .ainfty import AInfinityStructure, UndeterminedConstant
from .algebra_core import (
    ChainAccumulator,
    ChainElement,
    FieldValue,
    GradedBasis,
    GradedElement,
    NovikovScalar,
    TensorWord,
    apply_t,
    one_minus_t,
    permutation_koszul_sign,
)
from .linalg import det, inverse
from .report import Report


class CyclicPairing:
    """Graded skew-symmetric nondegenerate pairing on the shifted basis.

    Skew symmetry reads ``<a,b> = -(-1)^{|a|'|b|'} <b,a>``. Values are
    constants in Q(sqrt 2) and extend bilinearly over Novikov scalars.
    """

    def __init__(self, basis: GradedBasis, matrix: Mapping[Tuple[str, str], object]):
        self.basis = basis
        self.matrix: Dict[Tuple[str, str], FieldValue] = {}
        for (a, b), v in matrix.items():
            v = FieldValue.coerce(v)
            if a not in basis or b not in basis:
                raise ValueError(f"pairing entry ({a},{b}) outside the basis")
            if v:
                self.matrix[(a, b)] = v
        problems = self.problems()
        if problems:
            raise ValueError("; ".join(problems))

    def problems(self) -> List[str]:
        out = []
        sh = self.basis.shifted
        degs = {sh(a) + sh(b) for (a, b) in self.matrix}
        if len(degs) > 1:
            out.append(f"pairing degree not homogeneous: {sorted(degs)}")
        for a in self.basis:
            for b in self.basis:
                lhs = self.value(a, b)
                rhs = self.value(b, a) * (1 if (sh(a) * sh(b)) % 2 else -1)
                if lhs != rhs:
                    out.append(f"skew symmetry fails at ({a},{b})")
        if det(self.gram()) == 0:
            out.append("pairing is degenerate")
        return out

    @property
    def degree(self) -> Optional[int]:
        sh = self.basis.shifted
        for (a, b) in self.matrix:
            return sh(a) + sh(b)
        return None

    def gram(self) -> List[List[FieldValue]]:
        names = self.basis.names
        return [[self.value(a, b) for b in names] for a in names]

    def value(self, a: str, b: str) -> FieldValue:
        return self.matrix.get((a, b), FieldValue(0))

    def pair(self, x: GradedElement, y: GradedElement) -> NovikovScalar:
        total = NovikovScalar.zero(x.e_max)
        for a, ca in x.items():
            for b, cb in y.items():
                v = self.matrix.get((a, b))
                if v:
                    total = total + ca * cb * v
        return total

    def pair_dicts(self, x: Mapping[str, NovikovScalar], y: Mapping[str, NovikovScalar], e_max) -> NovikovScalar:
        total = NovikovScalar.zero(e_max)
        for a, ca in x.items():
            for b, cb in y.items():
                v = self.matrix.get((a, b))
                if v:
                    total = total + ca * cb * v
        return total

    def pair_with_basis(self, x: Mapping[str, NovikovScalar], b: str, e_max) -> NovikovScalar:
        total = NovikovScalar.zero(e_max)
        for a, ca in x.items():
            v = self.matrix.get((a, b))
            if v:
                total = total + ca * v
        return total

    def dual_element(self, functional: Mapping[str, FieldValue]) -> Dict[str, FieldValue]:
        """The unique ``z`` with ``<z, y> = functional[y]`` for every basis ``y``."""
        names = self.basis.names
        inv = inverse(self.gram())
        # <z,y> = sum_a z_a G[a][y]  =>  z = f G^{-1}
        out = {}
        for j, a in enumerate(names):
            s = FieldValue(0)
            for i, y in enumerate(names):
                f = functional.get(y)
                if f:
                    s = s + f * inv[i][j]
            if s:
                out[a] = s
        return out


def verify_cyclic_symmetry(A: AInfinityStructure, P: CyclicPairing, max_length: int = 4) -> Report:
    """Check ``<m_{k,b}(x_1..x_k), x_{k+1}> = (-1)^K <m_{k,b}(x_2..x_{k+1}), x_1>`` per class."""
    t0 = time.perf_counter()
    rep = Report("cyclic", True, details={"max_length": max_length})
    sh = A.basis.shifted
    classes = sorted(A.classes())
    checked = 0
    for n in range(1, max_length + 1):
        k = n - 1
        if A.max_arity is not None and k > A.max_arity:
            break
        for word in A.basis.words(n):
            K = sh(word[0]) * sum(sh(x) for x in word[1:])
            for beta in classes:
                lhs = _pair_const(A, P, k, beta, word[:k], word[k])
                rhs = _pair_const(A, P, k, beta, word[1:], word[0])
                checked += 1
                if lhs != (rhs if K % 2 == 0 else -rhs):
                    rep.passed = False
                    rep.witnesses.append({"word": list(word), "class": str(beta),
                                          "lhs": str(lhs), "rhs": str(rhs), "K": K})
    rep.details["identities_checked"] = checked
    rep.timing = time.perf_counter() - t0
    return rep


def _pair_const(A, P, k, beta, inputs, last) -> FieldValue:
    out = A.constants.get((k, beta, tuple(inputs)), {})
    s = FieldValue(0)
    for n, c in out.items():
        v = P.matrix.get((n, last))
        if v:
            s = s + c * v
    return s


def verify_stokes(A: AInfinityStructure, P: CyclicPairing) -> Report:
    """``<m_1(x), y> = (-1)^{deg x} <x, m_1(y)>`` on all basis pairs."""
    t0 = time.perf_counter()
    rep = Report("stokes", True)
    e_max = A.e_max
    for x in A.basis:
        for y in A.basis:
            mx = A.m_word(1, (x,))
            my = A.m_word(1, (y,))
            lhs = P.pair_with_basis(mx, y, e_max)
            rhs = NovikovScalar.zero(e_max)
            for b, c in my.items():
                v = P.matrix.get((x, b))
                if v:
                    rhs = rhs + c * v
            if A.basis.degree(x) % 2:
                rhs = -rhs
            if lhs != rhs:
                rep.passed = False
                rep.witnesses.append({"pair": [x, y], "lhs": str(lhs), "rhs": str(rhs)})
    rep.timing = time.perf_counter() - t0
    return rep


def split_pairing_sum(A: AInfinityStructure, P: CyclicPairing, inputs: Sequence[str],
                restricted: bool = True) -> NovikovScalar:
    """Signed sum over cyclic splittings ``<m_{k1}(..), m_{k2}(..)>`` of the inputs.

    With ``restricted`` only splittings whose first factor contains the first
    input are summed. The result vanishes for a cyclic A-infinity structure.
    """
    xs = tuple(inputs)
    n = len(xs)
    sh = [A.basis.shifted(x) for x in xs]
    # letters: m_{k1}, m_{k2}, x_1 .. x_n ; the m letters have degree 1
    degs = [1, 1] + sh
    total = NovikovScalar.zero(A.e_max)
    for s in range(n):
        order = [(s + j) % n for j in range(n)]
        rot = tuple(xs[i] for i in order)
        for k1 in range(n + 1):
            k2 = n - k1
            if restricted and 0 not in order[:k1]:
                continue
            first = A.m_word(k1, rot[:k1])
            if not first:
                continue
            second = A.m_word(k2, rot[k1:])
            if not second:
                continue
            perm = [0] + [2 + i for i in order[:k1]] + [1] + [2 + i for i in order[k1:]]
            sign = permutation_koszul_sign(degs, perm)
            val = P.pair_dicts(first, second, A.e_max)
            total = total + (val if sign > 0 else -val)
    return total


def m_plus(A: AInfinityStructure, P: CyclicPairing, word) -> NovikovScalar:
    """``m^+(x_1..x_k) = <m_{k-1}(x_1..x_{k-1}), x_k>`` times the word's coefficient."""
    if isinstance(word, TensorWord):
        letters, coeff = word.letters, word.coeff
    else:
        letters, coeff = tuple(word), NovikovScalar.const(1, A.e_max)
    if not letters:
        raise ValueError("m_plus needs at least one letter")
    inner = A.m_word(len(letters) - 1, letters[:-1])
    return coeff * P.pair_with_basis(inner, letters[-1], A.e_max)


def m_plus_chain(A: AInfinityStructure, P: CyclicPairing, chain: ChainElement) -> NovikovScalar:
    total = NovikovScalar.zero(A.e_max)
    for letters, c in chain.terms.items():
        inner = A.m_word(len(letters) - 1, letters[:-1])
        if inner:
            total = total + c * P.pair_with_basis(inner, letters[-1], A.e_max)
    return total


def random_chain(basis: GradedBasis, rng: random.Random, max_length: int = 3, n_words: int = 4,
                 e_max=2, energies=(0, 1)) -> ChainElement:
    """Seeded random chain with small integer coefficients."""
    names = basis.names
    acc = ChainAccumulator(e_max)
    for _ in range(n_words):
        n = rng.randint(1, max_length)
        letters = tuple(rng.choice(names) for _ in range(n))
        c = NovikovScalar.monomial(FieldValue(rng.randint(-3, 3), rng.randint(-1, 1)),
                                   rng.choice(energies), e_max)
        acc.add(letters, c)
    return acc.result()


def verify_mplus_rotation(A: AInfinityStructure, P: CyclicPairing, n_samples: int = 100,
                          seed: int = 0, max_length: int = 4) -> Report:
    t0 = time.perf_counter()
    rep = Report("mplus_rotation", True)
    rng = random.Random(seed)
    for i in range(n_samples):
        c = random_chain(A.basis, rng, max_length=max_length, e_max=A.e_max)
        a = m_plus_chain(A, P, c)
        b = m_plus_chain(A, P, apply_t(c, A.basis))
        z = m_plus_chain(A, P, one_minus_t(c, A.basis))
        if a != b or z:
            rep.passed = False
            rep.witnesses.append({"sample": i, "chain": str(c), "m_plus": str(a),
                                  "m_plus_t": str(b), "m_plus_1_minus_t": str(z)})
    rep.details["samples"] = n_samples
    rep.timing = time.perf_counter() - t0
    return rep


def verify_bar_boundary(A: AInfinityStructure, P: CyclicPairing, max_length: int = 3,
                   witness_length: int = 4) -> Report:
    """``m^+(hat d(x_1..x_k) | x_{k+1}) = 0`` on basis words, plus a search for
    words with ``m^+(hat d(x_1..x_n)) != 0``."""
    t0 = time.perf_counter()
    rep = Report("bar_boundary", True, details={"max_length": max_length})
    one = NovikovScalar.const(1, A.e_max)
    for n in range(2, max_length + 1):
        for word in A.basis.words(n):
            dw = A.hat_d(ChainElement({word[:-1]: one}, A.e_max))
            val = NovikovScalar.zero(A.e_max)
            for letters, c in dw.terms.items():
                val = val + m_plus(A, P, TensorWord(letters + (word[-1],), c))
            if val:
                rep.passed = False
                rep.witnesses.append({"word": list(word), "value": str(val)})
    found = None
    if witness_length:
        for word in A.basis.words(witness_length):
            try:
                v = m_plus_chain(A, P, A.hat_d(ChainElement({word: one}, A.e_max)))
            except UndeterminedConstant:
                continue
            if v:
                found = {"word": list(word), "value": str(v)}
                break
    rep.details["remark_witness"] = found if found else "none found in this model"
    rep.timing = time.perf_counter() - t0
    return rep


def verify_split_pairing(A: AInfinityStructure, P: CyclicPairing, max_length: int = 4,
                         min_length: int = 2) -> Report:
    """The split-pairing sum vanishes on every basis tuple, and the unrestricted sum is twice it."""
    t0 = time.perf_counter()
    rep = Report("split_pairing", True)
    tuples = 0
    for n in range(min_length, max_length + 1):
        for word in A.basis.words(n):
            tuples += 1
            r = split_pairing_sum(A, P, word)
            u = split_pairing_sum(A, P, word, restricted=False)
            if r or u != r * 2:
                rep.passed = False
                rep.witnesses.append({"word": list(word), "restricted": str(r),
                                      "unrestricted": str(u)})
    rep.details["tuples"] = tuples
    rep.timing = time.perf_counter() - t0
    return rep
