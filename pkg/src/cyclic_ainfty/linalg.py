"""Exact Gaussian elimination over Q(sqrt 2)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Sequence, Tuple

from .algebra_core import FieldValue

Matrix = List[List[FieldValue]]


def _copy(M: Sequence[Sequence]) -> Matrix:
    return [[FieldValue.coerce(x) for x in row] for row in M]


def det(M: Sequence[Sequence]) -> FieldValue:
    A = _copy(M)
    n = len(A)
    d = FieldValue(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return FieldValue(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = -d
        d = d * A[c][c]
        inv = A[c][c].inverse()
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return d


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    A = [row + [FieldValue(1 if i == j else 0) for j in range(n)] for i, row in enumerate(_copy(M))]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c].inverse()
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


class LinExpr:
    """Affine expression ``const + sum coeff[v] * v`` with exact coefficients."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: Dict[Hashable, FieldValue] = None, const: FieldValue = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}
        self.const = const if const is not None else FieldValue(0)

    @classmethod
    def var(cls, key: Hashable) -> "LinExpr":
        return cls({key: FieldValue(1)})

    @classmethod
    def constant(cls, c) -> "LinExpr":
        return cls(None, FieldValue.coerce(c))

    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other) -> "LinExpr":
        if not isinstance(other, LinExpr):
            other = LinExpr.constant(other)
        acc = dict(self.coeffs)
        for k, v in other.coeffs.items():
            acc[k] = acc[k] + v if k in acc else v
        return LinExpr(acc, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "LinExpr":
        return LinExpr({k: -v for k, v in self.coeffs.items()}, -self.const)

    def __sub__(self, other) -> "LinExpr":
        if not isinstance(other, LinExpr):
            other = LinExpr.constant(other)
        return self + (-other)

    def __mul__(self, other) -> "LinExpr":
        if isinstance(other, LinExpr):
            if other.is_constant():
                other = other.const
            elif self.is_constant():
                return other * self.const
            else:
                raise ValueError("product of two non-constant expressions is not linear")
        c = FieldValue.coerce(other)
        return LinExpr({k: v * c for k, v in self.coeffs.items()}, self.const * c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs and not self.const

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        terms = [f"{v}*{k}" for k, v in self.coeffs.items()]
        return " + ".join(terms + [str(self.const)])


@dataclass
class SolveResult:
    values: Dict[Hashable, FieldValue] = field(default_factory=dict)
    free: List[Hashable] = field(default_factory=list)
    determined: set = field(default_factory=set)
    inconsistent: List[Tuple[int, FieldValue]] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.inconsistent


def solve_affine(equations: Sequence[LinExpr], order: Sequence[Hashable] = None) -> SolveResult:
    """Solve ``expr = 0`` for every expression; free variables are set to zero.

    ``inconsistent`` lists ``(equation index, residual)`` for rows that reduce
    to a nonzero constant.
    """
    keys = list(order) if order is not None else []
    seen = set(keys)
    for eq in equations:
        for k in eq.coeffs:
            if k not in seen:
                seen.add(k)
                keys.append(k)
    col = {k: i for i, k in enumerate(keys)}
    # sparse rows: dict col -> value, plus rhs constant (row means sum a_j v_j + c = 0)
    rows: List[Tuple[Dict[int, FieldValue], FieldValue, int]] = []
    for idx, eq in enumerate(equations):
        if eq.is_zero():
            continue
        rows.append(({col[k]: v for k, v in eq.coeffs.items()}, eq.const, idx))
    pivots: Dict[int, Tuple[Dict[int, FieldValue], FieldValue]] = {}
    result = SolveResult()
    for row, c, idx in rows:
        row = dict(row)
        # reduce against existing pivots
        changed = True
        while changed:
            changed = False
            for j in sorted(row):
                if j in pivots and row.get(j):
                    f = row[j]
                    prow, pc = pivots[j]
                    for jj, v in prow.items():
                        nv = row.get(jj, FieldValue(0)) - f * v
                        if nv:
                            row[jj] = nv
                        else:
                            row.pop(jj, None)
                    c = c - f * pc
                    changed = True
                    break
        if not row:
            if c:
                result.inconsistent.append((idx, c))
            continue
        j = min(row)
        inv = row[j].inverse()
        row = {jj: v * inv for jj, v in row.items()}
        c = c * inv
        # eliminate j from existing pivot rows to keep reduced form
        for pj, (prow, pc) in list(pivots.items()):
            f = prow.get(j)
            if f:
                for jj, v in row.items():
                    nv = prow.get(jj, FieldValue(0)) - f * v
                    if nv:
                        prow[jj] = nv
                    else:
                        prow.pop(jj, None)
                pivots[pj] = (prow, pc - f * c)
        pivots[j] = (row, c)
    free_cols = [i for i in range(len(keys)) if i not in pivots]
    result.free = [keys[i] for i in free_cols]
    for j, (prow, pc) in pivots.items():
        # v_j + sum_{free} a v + c = 0, free variables zero
        result.values[keys[j]] = -pc
        if len(prow) == 1:
            result.determined.add(keys[j])
    return result
