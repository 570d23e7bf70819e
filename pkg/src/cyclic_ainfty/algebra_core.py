"""Exact scalars, graded bases, tensor words and the sign rules shared by
every other module.

Scalars live in Q(sqrt 2) and are promoted to a truncated Novikov ring
(finite sums of ``c * T**lam`` with ``lam`` an exact rational, cut off at
``e_max``). All gradings used for signs are *shifted* degrees
``|x|' = deg x - 1``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

DEFAULT_E_MAX = Fraction(2)

Rational = Union[int, Fraction]


class ConfigurationError(ValueError):
    """Raised when objects built for different settings are combined."""


class ResourceError(RuntimeError):
    """Raised when a request exceeds a configured size cap."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class FieldValue:
    """An element ``a + b*sqrt(2)`` of Q(sqrt 2) with exact rational parts."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0):
        self.a = _frac(a)
        self.b = _frac(b)

    @classmethod
    def coerce(cls, x) -> "FieldValue":
        if isinstance(x, FieldValue):
            return x
        return cls(x, 0)

    @property
    def rational_part(self) -> Fraction:
        return self.a

    @property
    def sqrt2_part(self) -> Fraction:
        return self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        try:
            o = FieldValue.coerce(other)
        except TypeError:
            return NotImplemented
        return FieldValue(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = FieldValue.coerce(other)
        except TypeError:
            return NotImplemented
        return FieldValue(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return FieldValue.coerce(other) - self

    def __neg__(self) -> "FieldValue":
        return FieldValue(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, (NovikovScalar, GradedElement)):
            return NotImplemented
        try:
            o = FieldValue.coerce(other)
        except TypeError:
            return NotImplemented
        return FieldValue(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "FieldValue":
        n = self.norm()
        if n == 0:
            # sqrt 2 is irrational, so the norm vanishes only at zero
            raise ZeroDivisionError("inverse of zero in Q(sqrt 2)")
        return FieldValue(self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * FieldValue.coerce(other).inverse()

    def __rtruediv__(self, other):
        return FieldValue.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "FieldValue":
        if n < 0:
            return self.inverse() ** (-n)
        out = FieldValue(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            o = FieldValue.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 2 ** 0.5

    def __repr__(self) -> str:
        return f"FieldValue({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        sign = "+" if self.b > 0 else "-"
        return f"({self.a} {sign} {abs(self.b)}*sqrt2)"


SQRT2 = FieldValue(0, 1)
ONE = FieldValue(1)
ZERO = FieldValue(0)


class NovikovScalar:
    """Truncated element ``sum_i c_i T**lam_i`` of the Novikov ring.

    Exponents are exact nonnegative rationals, strictly increasing, and
    never exceed ``e_max``; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "e_max")

    def __init__(self, terms: Union[Mapping, Iterable] = (), e_max: Rational = DEFAULT_E_MAX):
        self.e_max = _frac(e_max)
        acc: Dict[Fraction, FieldValue] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for lam, c in items:
            lam = _frac(lam)
            if lam < 0:
                raise ValueError(f"negative energy exponent {lam}")
            if lam > self.e_max:
                continue
            c = FieldValue.coerce(c)
            acc[lam] = acc[lam] + c if lam in acc else c
        self._terms = tuple(sorted((k, v) for k, v in acc.items() if v))

    @classmethod
    def _raw(cls, terms: tuple, e_max: Fraction) -> "NovikovScalar":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.e_max = e_max
        return obj

    @classmethod
    def const(cls, c=1, e_max: Rational = DEFAULT_E_MAX) -> "NovikovScalar":
        return cls([(0, c)], e_max)

    @classmethod
    def monomial(cls, c, lam: Rational, e_max: Rational = DEFAULT_E_MAX) -> "NovikovScalar":
        return cls([(lam, c)], e_max)

    @classmethod
    def zero(cls, e_max: Rational = DEFAULT_E_MAX) -> "NovikovScalar":
        return cls((), e_max)

    @property
    def terms(self) -> Tuple[Tuple[Fraction, FieldValue], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def min_energy(self):
        return self._terms[0][0] if self._terms else None

    def coefficient(self, lam: Rational) -> FieldValue:
        lam = _frac(lam)
        for k, v in self._terms:
            if k == lam:
                return v
        return ZERO

    def _promote(self, other) -> "NovikovScalar":
        if isinstance(other, NovikovScalar):
            if other.e_max != self.e_max:
                raise ConfigurationError(
                    f"mismatched truncation: {self.e_max} vs {other.e_max}")
            return other
        return NovikovScalar.const(FieldValue.coerce(other), self.e_max)

    def __add__(self, other):
        try:
            o = self._promote(other)
        except TypeError:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        acc = dict(self._terms)
        for k, v in o._terms:
            acc[k] = acc[k] + v if k in acc else v
        return NovikovScalar._raw(tuple(sorted((k, v) for k, v in acc.items() if v)), self.e_max)

    __radd__ = __add__

    def __neg__(self) -> "NovikovScalar":
        return NovikovScalar._raw(tuple((k, -v) for k, v in self._terms), self.e_max)

    def __sub__(self, other):
        try:
            o = self._promote(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._promote(other) - self

    def __mul__(self, other):
        if isinstance(other, GradedElement):
            return NotImplemented
        if not isinstance(other, NovikovScalar):
            try:
                c = FieldValue.coerce(other)
            except TypeError:
                return NotImplemented
            if not c:
                return NovikovScalar._raw((), self.e_max)
            return NovikovScalar._raw(tuple((k, v * c) for k, v in self._terms), self.e_max)
        o = self._promote(other)
        acc: Dict[Fraction, FieldValue] = {}
        for k1, v1 in self._terms:
            for k2, v2 in o._terms:
                k = k1 + k2
                if k > self.e_max:
                    break
                p = v1 * v2
                acc[k] = acc[k] + p if k in acc else p
        return NovikovScalar._raw(tuple(sorted((k, v) for k, v in acc.items() if v)), self.e_max)

    __rmul__ = __mul__

    def shift(self, lam: Rational) -> "NovikovScalar":
        """Multiply by ``T**lam`` and truncate."""
        lam = _frac(lam)
        if lam == 0:
            return self
        return NovikovScalar._raw(
            tuple((k + lam, v) for k, v in self._terms if k + lam <= self.e_max), self.e_max)

    def truncate(self, e_max: Rational) -> "NovikovScalar":
        return NovikovScalar(self._terms, e_max)

    def __eq__(self, other) -> bool:
        if isinstance(other, NovikovScalar):
            return self._terms == other._terms and self.e_max == other.e_max
        try:
            return self == self._promote(other)
        except (TypeError, ConfigurationError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self._terms, self.e_max))

    def __repr__(self) -> str:
        return f"NovikovScalar({list(self._terms)!r}, e_max={self.e_max})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for lam, c in self._terms:
            parts.append(str(c) if lam == 0 else f"{c}*T^{lam}")
        return " + ".join(parts)


def _check_e_max(*scalars: NovikovScalar) -> Fraction:
    e = scalars[0].e_max
    for s in scalars[1:]:
        if s.e_max != e:
            raise ConfigurationError(f"mismatched truncation: {e} vs {s.e_max}")
    return e


def scalar_ops(a: NovikovScalar, b: NovikovScalar, op: str = "mul") -> NovikovScalar:
    """Dispatch ``add``, ``sub``, ``mul`` on two scalars with a shared cutoff."""
    _check_e_max(a, b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown scalar op {op!r}")


class GradedBasis:
    """Named basis vectors with integer degrees."""

    def __init__(self, entries: Iterable[Tuple[str, int]]):
        self.entries: Tuple[Tuple[str, int], ...] = tuple((str(n), int(d)) for n, d in entries)
        self._deg = dict(self.entries)
        if len(self._deg) != len(self.entries):
            raise ValueError("basis names must be unique")

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def degree(self, name: str) -> int:
        return self._deg[name]

    def shifted(self, name: str) -> int:
        return self._deg[name] - 1

    def __contains__(self, name) -> bool:
        return name in self._deg

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.entries)

    def of_degree(self, d: int) -> Tuple[str, ...]:
        return tuple(n for n, k in self.entries if k == d)

    def words(self, length: int) -> Iterator[Tuple[str, ...]]:
        return itertools.product(self.names, repeat=length)

    def word_shifted(self, letters: Sequence[str]) -> int:
        return sum(self._deg[x] - 1 for x in letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedBasis) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"GradedBasis({list(self.entries)!r})"


class GradedElement:
    """Finite linear combination of basis names with Novikov coefficients."""

    __slots__ = ("coeffs", "e_max")

    def __init__(self, coeffs: Mapping[str, object] = None, e_max: Rational = DEFAULT_E_MAX):
        self.e_max = _frac(e_max)
        out = {}
        for name, c in (coeffs or {}).items():
            if not isinstance(c, NovikovScalar):
                c = NovikovScalar.const(c, self.e_max)
            elif c.e_max != self.e_max:
                raise ConfigurationError("coefficient truncation differs from element's")
            if c:
                out[name] = c
        self.coeffs: Dict[str, NovikovScalar] = out

    @classmethod
    def basis(cls, name: str, e_max: Rational = DEFAULT_E_MAX) -> "GradedElement":
        return cls({name: 1}, e_max)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, name: str) -> NovikovScalar:
        return self.coeffs.get(name) or NovikovScalar.zero(self.e_max)

    def items(self):
        return self.coeffs.items()

    def __add__(self, other: "GradedElement") -> "GradedElement":
        if other.e_max != self.e_max:
            raise ConfigurationError("mismatched truncation")
        acc = dict(self.coeffs)
        for n, c in other.coeffs.items():
            acc[n] = acc[n] + c if n in acc else c
        return GradedElement(acc, self.e_max)

    def __neg__(self) -> "GradedElement":
        return GradedElement({n: -c for n, c in self.coeffs.items()}, self.e_max)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __mul__(self, s) -> "GradedElement":
        return GradedElement({n: c * s for n, c in self.coeffs.items()}, self.e_max)

    __rmul__ = __mul__

    def degrees(self, basis: GradedBasis) -> set:
        return {basis.degree(n) for n in self.coeffs}

    def is_homogeneous(self, basis: GradedBasis) -> bool:
        return len(self.degrees(basis)) <= 1

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"GradedElement({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*{n}" for n, c in sorted(self.coeffs.items()))


class TensorWord:
    """A single tensor monomial ``coeff * (x_0 | x_1 | ... )``.

    Position 0 is the module slot when the word is read as a Hochschild chain.
    """

    __slots__ = ("letters", "coeff")

    def __init__(self, letters: Sequence[str], coeff=1, e_max: Rational = DEFAULT_E_MAX):
        letters = tuple(letters)
        if not letters:
            raise ValueError("a tensor word has at least one letter")
        if not isinstance(coeff, NovikovScalar):
            coeff = NovikovScalar.const(coeff, e_max)
        self.letters = letters
        self.coeff = coeff

    def __len__(self) -> int:
        return len(self.letters)

    def chain(self) -> "ChainElement":
        return ChainElement({self.letters: self.coeff}, self.coeff.e_max)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TensorWord) and self.letters == other.letters
                and self.coeff == other.coeff)

    def __hash__(self):
        return hash((self.letters, self.coeff))

    def __repr__(self) -> str:
        return f"TensorWord({'|'.join(self.letters)}, {self.coeff})"


Word = Tuple[str, ...]


class ChainElement:
    """Formal sum of tensor words; equal letter tuples are merged."""

    __slots__ = ("terms", "e_max")

    def __init__(self, terms: Mapping[Word, object] = None, e_max: Rational = DEFAULT_E_MAX):
        self.e_max = _frac(e_max)
        out: Dict[Word, NovikovScalar] = {}
        for letters, c in (terms or {}).items():
            if not isinstance(c, NovikovScalar):
                c = NovikovScalar.const(c, self.e_max)
            elif c.e_max != self.e_max:
                raise ConfigurationError("coefficient truncation differs from chain's")
            if c:
                out[tuple(letters)] = c
        self.terms = out

    @classmethod
    def from_words(cls, words: Iterable[TensorWord], e_max: Rational = DEFAULT_E_MAX) -> "ChainElement":
        acc = ChainAccumulator(e_max)
        for w in words:
            acc.add(w.letters, w.coeff)
        return acc.result()

    @classmethod
    def word(cls, letters: Sequence[str], coeff=1, e_max: Rational = DEFAULT_E_MAX) -> "ChainElement":
        return cls({tuple(letters): coeff}, e_max)

    def words(self) -> Iterator[TensorWord]:
        for letters in sorted(self.terms):
            yield TensorWord(letters, self.terms[letters])

    def items(self):
        return ((k, self.terms[k]) for k in sorted(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, letters) -> NovikovScalar:
        return self.terms.get(tuple(letters)) or NovikovScalar.zero(self.e_max)

    def __add__(self, other: "ChainElement") -> "ChainElement":
        if other.e_max != self.e_max:
            raise ConfigurationError("mismatched truncation")
        acc = ChainAccumulator(self.e_max, dict(self.terms))
        for k, v in other.terms.items():
            acc.add(k, v)
        return acc.result()

    def __neg__(self) -> "ChainElement":
        return ChainElement({k: -v for k, v in self.terms.items()}, self.e_max)

    def __sub__(self, other: "ChainElement") -> "ChainElement":
        return self + (-other)

    def __mul__(self, s) -> "ChainElement":
        return ChainElement({k: v * s for k, v in self.terms.items()}, self.e_max)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, ChainElement) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self) -> str:
        return f"ChainElement({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*[{'|'.join(k)}]" for k, c in self.items())


class ChainAccumulator:
    """Mutable builder for chains; used inside hot loops."""

    __slots__ = ("acc", "e_max")

    def __init__(self, e_max: Rational = DEFAULT_E_MAX, initial: Dict[Word, NovikovScalar] = None):
        self.e_max = _frac(e_max)
        self.acc: Dict[Word, NovikovScalar] = initial if initial is not None else {}

    def add(self, letters: Word, c: NovikovScalar) -> None:
        if not c:
            return
        cur = self.acc.get(letters)
        self.acc[letters] = c if cur is None else cur + c

    def add_chain(self, chain: ChainElement, scale=None) -> None:
        for k, v in chain.terms.items():
            self.add(k, v if scale is None else v * scale)

    def result(self) -> ChainElement:
        out = ChainElement(e_max=self.e_max)
        out.terms = {k: v for k, v in self.acc.items() if v}
        return out


# --- signs -----------------------------------------------------------------

def permutation_koszul_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Koszul sign of reordering items with ``degrees`` into ``[perm[0], perm[1], ...]``.

    ``perm[j]`` is the original index of the item that ends up at slot ``j``.
    """
    n = len(perm)
    if sorted(perm) != list(range(n)) or len(degrees) != n:
        raise ValueError("not a permutation")
    odd = 0
    for a in range(n):
        da = degrees[perm[a]] & 1
        if not da:
            continue
        for b in range(a + 1, n):
            if perm[a] > perm[b] and degrees[perm[b]] & 1:
                odd += 1
    return -1 if odd & 1 else 1


def koszul_sign(before: Sequence, after: Sequence, degrees) -> int:
    """Koszul sign for rearranging the labelled letters ``before`` into ``after``.

    Labels must be unique within ``before``; ``degrees`` maps a label to its
    degree (or is a sequence aligned with ``before``).
    """
    before = list(before)
    after = list(after)
    if len(set(before)) != len(before):
        raise ValueError("letter labels must be unique; tag repeated letters")
    if sorted(map(repr, before)) != sorted(map(repr, after)):
        raise ValueError("after is not a permutation of before")
    pos = {x: i for i, x in enumerate(before)}
    if isinstance(degrees, Mapping):
        degs = [degrees[x] for x in before]
    else:
        degs = list(degrees)
    return permutation_koszul_sign(degs, [pos[x] for x in after])


def rotation_sign(basis: GradedBasis, letters: Word) -> int:
    """Sign of one application of the cyclic operator to ``letters``."""
    if len(letters) <= 1:
        return 1
    last = basis.shifted(letters[-1])
    rest = basis.word_shifted(letters[:-1])
    return -1 if (last * rest) & 1 else 1


def t_rotate(word: TensorWord, basis: GradedBasis) -> TensorWord:
    """Move the last letter to the front, folding the Koszul sign into the coefficient."""
    letters = word.letters
    if len(letters) == 1:
        return word
    s = rotation_sign(basis, letters)
    return TensorWord((letters[-1],) + letters[:-1], word.coeff if s > 0 else -word.coeff)


def rotations(letters: Word, basis: GradedBasis) -> Iterator[Tuple[int, Word]]:
    """Yield ``(sign, t^j(letters))`` for ``j = 0 .. n-1``."""
    s = 1
    cur = letters
    for _ in range(len(letters)):
        yield s, cur
        s *= rotation_sign(basis, cur)
        cur = (cur[-1],) + cur[:-1] if len(cur) > 1 else cur


def apply_t(chain: ChainElement, basis: GradedBasis) -> ChainElement:
    acc = ChainAccumulator(chain.e_max)
    for letters, c in chain.terms.items():
        if len(letters) == 1:
            acc.add(letters, c)
            continue
        s = rotation_sign(basis, letters)
        acc.add((letters[-1],) + letters[:-1], c if s > 0 else -c)
    return acc.result()


def symmetrize_N(chain: ChainElement, basis: GradedBasis) -> ChainElement:
    """``N = 1 + t + ... + t^(n-1)`` applied length by length."""
    acc = ChainAccumulator(chain.e_max)
    for letters, c in chain.terms.items():
        for s, rot in rotations(letters, basis):
            acc.add(rot, c if s > 0 else -c)
    return acc.result()


def one_minus_t(chain: ChainElement, basis: GradedBasis) -> ChainElement:
    return chain - apply_t(chain, basis)


def ce_symmetrize(letters: Sequence[str], basis: GradedBasis, cap: int = 7,
                  e_max: Rational = DEFAULT_E_MAX) -> ChainElement:
    """Koszul-signed sum over all orderings of ``letters``."""
    letters = tuple(letters)
    k = len(letters)
    if k > cap:
        raise ResourceError(f"symmetrization of {k} letters exceeds cap {cap}")
    degs = [basis.shifted(x) for x in letters]
    acc = ChainAccumulator(e_max)
    one = NovikovScalar.const(1, e_max)
    for perm in itertools.permutations(range(k)):
        s = permutation_koszul_sign(degs, perm)
        acc.add(tuple(letters[i] for i in perm), one if s > 0 else -one)
    return acc.result()
