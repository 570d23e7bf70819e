"""A-infinity homomorphisms, their cohomomorphisms on bar and Hochschild words,
and preservation of ``m^+``.

Components ``h_k`` have shifted degree zero, so distributing them over blocks
of a word costs no sign. The only sign on Hochschild words comes from rotating
the wrapped block to the front.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .ainfty import AInfinityStructure, ClassIndex, ZERO_CLASS
from .algebra_core import ChainAccumulator, ChainElement, FieldValue, NovikovScalar
from .pairing import CyclicPairing, m_plus_chain, random_chain
from .report import Report

Slot = Tuple[int, ClassIndex, Tuple[str, ...]]


@dataclass
class MorphismData:
    """``{h_k}``: components keyed by ``(k, beta, input word)`` with outputs in the target basis."""

    source: AInfinityStructure
    target: AInfinityStructure
    components: Dict[Slot, Dict[str, FieldValue]]
    source_pairing: Optional[CyclicPairing] = None
    target_pairing: Optional[CyclicPairing] = None
    _cache: Dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        sh_a, sh_b = self.source.basis.shifted, self.target.basis.shifted
        for (k, beta, word), out in self.components.items():
            if k < 1 or len(word) != k:
                raise ValueError(f"bad component slot {(k, beta, word)}")
            want = sum(sh_a(x) for x in word) - beta.maslov
            for n in out:
                if sh_b(n) != want:
                    raise ValueError(f"h_{k}{word} -> {n} does not preserve shifted degree")
        self.e_max = self.target.e_max
        self._index: Dict = {}
        for (k, beta, word), out in self.components.items():
            if beta.energy <= self.e_max:
                self._index.setdefault(word, []).append((beta, out))

    @property
    def is_strict(self) -> bool:
        return all(k == 1 and beta == ZERO_CLASS for (k, beta, _) in self.components)

    def h_word(self, word: Tuple[str, ...]) -> Dict[str, NovikovScalar]:
        """``h_{len(word)}`` on a basis word."""
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        acc: Dict[str, NovikovScalar] = {}
        for beta, out in self._index.get(word, ()):
            for n, c in out.items():
                s = NovikovScalar.monomial(c, beta.energy, self.e_max)
                acc[n] = acc[n] + s if n in acc else s
        res = {n: s for n, s in acc.items() if s}
        self._cache[word] = res
        return res


def strict_morphism(source: AInfinityStructure, target: AInfinityStructure,
                    linear_map: Mapping[str, Mapping[str, object]],
                    source_pairing: CyclicPairing = None,
                    target_pairing: CyclicPairing = None) -> MorphismData:
    comps = {(1, ZERO_CLASS, (x,)): {n: FieldValue.coerce(v) for n, v in linear_map[x].items()}
             for x in source.basis}
    return MorphismData(source, target, comps, source_pairing, target_pairing)


def identity_morphism(A: AInfinityStructure, P: CyclicPairing = None) -> MorphismData:
    return strict_morphism(A, A, {x: {x: 1} for x in A.basis}, P, P)


def _compositions(n: int):
    """Block lengths summing to ``n``, each at least one."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def _expand_blocks(h: MorphismData, blocks: Sequence[Tuple[str, ...]]):
    """Yield ``(letters, coefficient)`` for ``h(block_1) (x) ... (x) h(block_l)``."""
    partial = [((), None)]
    for blk in blocks:
        out = h.h_word(blk)
        if not out:
            return
        nxt = []
        for letters, c in partial:
            for n, s in out.items():
                nxt.append((letters + (n,), s if c is None else c * s))
        partial = nxt
    yield from partial


def apply_hat_h_bar(h: MorphismData, chain: ChainElement) -> ChainElement:
    """Cohomomorphism on bar words: all partitions into consecutive blocks."""
    acc = ChainAccumulator(h.e_max)
    for letters, c in chain.terms.items():
        for sizes in _compositions(len(letters)):
            blocks, pos = [], 0
            for s in sizes:
                blocks.append(letters[pos:pos + s])
                pos += s
            for out, s in _expand_blocks(h, blocks):
                acc.add(out, c if s is None else c * s)
    return acc.result()


def apply_hat_h(h: MorphismData, chain: ChainElement) -> ChainElement:
    """Induced map on Hochschild words ``(v | x_1 .. x_k)``.

    The block holding the module slot may wrap around the end of the word;
    the wrapped letters are rotated to the front with the Koszul sign.
    """
    sh = h.source.basis.shifted
    acc = ChainAccumulator(h.e_max)
    for letters, c in chain.terms.items():
        v, xs = letters[0], letters[1:]
        k = len(xs)
        total = sum(sh(x) for x in letters)
        for a in range(k + 1):
            moved = xs[k - a:] if a else ()
            md = sum(sh(x) for x in moved)
            sign = -1 if (md * (total - md)) % 2 else 1
            for b in range(k - a + 1):
                first = moved + (v,) + xs[:b]
                rest = xs[b:k - a]
                for sizes in _compositions(len(rest)):
                    blocks, pos = [first], 0
                    for s in sizes:
                        blocks.append(rest[pos:pos + s])
                        pos += s
                    for out, s in _expand_blocks(h, blocks):
                        cc = c if s is None else c * s
                        acc.add(out, cc if sign > 0 else -cc)
    return acc.result()


def verify_homomorphism(h: MorphismData, max_length: int = 4) -> Report:
    """``h(hat d_A w) = m_B(hat h w)`` on every source basis word up to ``max_length``."""
    t0 = time.perf_counter()
    A, B = h.source, h.target
    rep = Report("homomorphism", True, details={"max_length": max_length})
    one = NovikovScalar.const(1, h.e_max)
    start = 0 if (A.has_curvature() or B.has_curvature()) else 1
    checked = 0
    for n in range(start, max_length + 1):
        for word in A.basis.words(n):
            w = ChainElement({word: one}, h.e_max)
            lhs = ChainAccumulator(h.e_max)
            for letters, c in A.hat_d(w).terms.items():
                for name, s in h.h_word(letters).items():
                    lhs.add((name,), c * s)
            rhs = ChainAccumulator(h.e_max)
            image = apply_hat_h_bar(h, w) if n else ChainElement({(): one}, h.e_max)
            for letters, c in image.terms.items():
                for name, s in B.m_word(len(letters), letters).items():
                    rhs.add((name,), c * s)
            diff = lhs.result() - rhs.result()
            checked += 1
            if diff:
                rep.passed = False
                rep.witnesses.append({"word": list(word), "residue": str(diff)})
    rep.details["words_checked"] = checked
    rep.timing = time.perf_counter() - t0
    return rep


def verify_cyclic_homomorphism(h: MorphismData, max_k: int = 4, strict: bool = False) -> Report:
    """Pairing preservation by ``h_1`` and the vanishing of split pairings of higher components.

    The split condition is checked for word lengths from 3 (from 2 with ``strict``).
    """
    t0 = time.perf_counter()
    PA, PB = h.source_pairing, h.target_pairing
    if PA is None or PB is None:
        raise ValueError("cyclic check needs pairings on both sides")
    A = h.source
    rep = Report("cyclic_homomorphism", True, details={"strict": strict, "max_k": max_k})
    for a in A.basis:
        for b in A.basis:
            lhs = PB.pair_dicts(h.h_word((a,)), h.h_word((b,)), h.e_max)
            rhs = NovikovScalar.const(PA.value(a, b), h.e_max)
            if lhs != rhs:
                rep.passed = False
                rep.witnesses.append({"condition": 1, "pair": [a, b],
                                      "image": str(lhs), "source": str(rhs)})
    for k in range(2 if strict else 3, max_k + 1):
        for word in A.basis.words(k):
            total = NovikovScalar.zero(h.e_max)
            for i in range(1, k):
                total = total + PB.pair_dicts(h.h_word(word[:i]), h.h_word(word[i:]), h.e_max)
            if total:
                rep.passed = False
                rep.witnesses.append({"condition": 2, "word": list(word), "value": str(total)})
    rep.timing = time.perf_counter() - t0
    return rep


def verify_mplus_preserved(h: MorphismData, chains: Iterable[ChainElement] = None,
                           n_random: int = 100, seed: int = 0, max_length: int = 3) -> Report:
    """``m^+_A(c) = m^+_B(hat h(c))`` exactly on the given chains plus seeded random ones."""
    t0 = time.perf_counter()
    A, B = h.source, h.target
    PA, PB = h.source_pairing, h.target_pairing
    rep = Report("mplus_preserved", True)
    samples: List[Tuple[str, ChainElement]] = [(f"given[{i}]", c) for i, c in enumerate(chains or [])]
    rng = random.Random(seed)
    for i in range(n_random):
        samples.append((f"random[{i}]", random_chain(A.basis, rng, max_length=max_length,
                                                     e_max=A.e_max)))
    for label, c in samples:
        va = m_plus_chain(A, PA, c)
        vb = m_plus_chain(B, PB, apply_hat_h(h, c))
        if va != vb:
            rep.passed = False
            rep.witnesses.append({"chain": label, "source": str(va), "target": str(vb)})
    rep.details["chains"] = len(samples)
    rep.timing = time.perf_counter() - t0
    return rep


def scaling_morphism(A: AInfinityStructure, P: CyclicPairing, lam) -> MorphismData:
    """``f1 -> lam f1``, ``f2 -> lam^{-1} f2``: keeps the pairing, breaks the products."""
    lam = FieldValue.coerce(lam)
    a, b = A.basis.of_degree(1)
    m = {x: {x: 1} for x in A.basis}
    m[a] = {a: lam}
    m[b] = {b: lam.inverse()}
    return strict_morphism(A, A, m, P, P)


def clifford_basis_change(e_bundle, f_bundle) -> MorphismData:
    """Strict morphism from the e-presentation to the f-presentation of the Clifford model."""
    from .clifford import E_TO_F
    return strict_morphism(e_bundle.reduced, f_bundle.reduced, E_TO_F,
                           e_bundle.pairing, f_bundle.pairing)
