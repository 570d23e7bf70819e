"""Reference implementations written independently of the package code paths.

They favour directness over speed: signs come from explicit labelled
permutations, geometry from plane areas and barycentric coordinates.
"""

import math
from fractions import Fraction
from itertools import permutations

from cyclic_ainfty.algebra_core import ChainAccumulator, NovikovScalar

R2 = math.sqrt(2)


def perm_sign(degrees, order):
    """Koszul sign by bubble sort: ``order`` lists original positions in their new order."""
    seq = list(order)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] > seq[i + 1]:
                if degrees[seq[i]] % 2 and degrees[seq[i + 1]] % 2:
                    sign = -sign
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                changed = True
    return sign


def naive_d_hoch(A, chain):
    """Hochschild differential as a sum over cyclic placements of one operation.

    Every term is produced by rotating the cyclic word so the operation's
    block is contiguous, reading the sign off the labelled permutation with
    the operation letter (degree one) placed in front of its block.
    """
    sh = A.basis.shifted
    acc = ChainAccumulator(A.e_max)
    for letters, c in chain.terms.items():
        n = len(letters)
        degs = [1] + [sh(x) for x in letters]  # position 0 is the operation letter
        for start in range(n):
            for length in range(1, n + 1):
                idx = [(start + j) % n for j in range(length)]
                contains_module = start == 0 or start + length > n
                block = tuple(letters[i] for i in idx)
                out = A.m_word(length, block)
                if not out:
                    continue
                rest = [i for i in range(n) if i not in idx]
                if contains_module:
                    # result: m(block) | remaining letters in order
                    order = [0] + [1 + i for i in idx] + [1 + i for i in rest]
                else:
                    before = [i for i in rest if i < start]
                    after = [i for i in rest if i > start]
                    order = [1 + i for i in before] + [0] + [1 + i for i in idx] + [1 + i for i in after]
                s = perm_sign(degs, order)
                for name, val in out.items():
                    if contains_module:
                        word = (name,) + tuple(letters[i] for i in rest)
                    else:
                        word = tuple(letters[i] for i in before) + (name,) + \
                            tuple(letters[i] for i in after)
                    acc.add(word, c * val if s > 0 else -(c * val))
        # curvature: an empty block in any gap after the module slot
        m0 = A.m_word(0, ())
        for gap in range(1, n + 1):
            order = list(range(1, gap + 1)) + [0] + list(range(gap + 1, n + 1))
            s = perm_sign(degs, order)
            for name, val in m0.items():
                word = letters[:gap] + (name,) + letters[gap:]
                acc.add(word, c * val if s > 0 else -(c * val))
    return acc.result()


def disc_formula_float(vectors, k_word):
    """``(1/k!) sum_j prod_s <d beta_j, v_s>`` in floating point."""
    boundaries = [(-1, -1), (1, 0), (0, 1)]
    total = 0.0
    for bx, by in boundaries:
        prod = 1.0
        for name in k_word:
            vx, vy = vectors[name]
            prod *= bx * vx + by * vy
        total += prod
    return total / math.factorial(len(k_word))


F_VECTORS = {"f1": (1 / R2, 1 / R2), "f2": (1 / R2, -1 / R2)}
E_VECTORS = {"e1": (1.0, 0.0), "e2": (0.0, 1.0)}


def orientation_by_area(a, b, c):
    """Sign of the planar triangle on the unit circle: CCW iff positive area."""
    pa, pb, pc = [(math.cos(t), math.sin(t)) for t in (a, b, c)]
    area = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0])
    return "CCW" if area > 0 else "CW"


def in_upper_triangle(base, y):
    """Membership in ``{base + (s, t) : 0 <= s <= t <= 1}`` mod Z^2 by testing lifts."""
    for a in (-1, 0, 1):
        for b in (-1, 0, 1):
            s = y[0] + a - base[0]
            t = y[1] + b - base[1]
            if 0 <= s <= t <= 1:
                return True
    return False


def t_pqr_oracle(p, q, r):
    P, Q, R = p.unit(), q.unit(), r.unit()
    a = in_upper_triangle(P, R) and in_upper_triangle(Q, R)
    b = in_upper_triangle(P, Q) and in_upper_triangle(R, Q)
    c = in_upper_triangle(Q, P) and in_upper_triangle(R, P)
    return (a + b + c) % 2


def mobius_on_disc_check(a, c, z):
    return complex(math.cos(c), math.sin(c)) * (z - a) / (1 - a.conjugate() * z)


def all_orderings_sign_sum(letters, degrees):
    """``sum_tau sign(tau) x_tau`` as a dict, via itertools and the bubble-sort sign."""
    out = {}
    for order in permutations(range(len(letters))):
        w = tuple(letters[i] for i in order)
        out[w] = out.get(w, 0) + perm_sign(degrees, order)
    return {w: v for w, v in out.items() if v}


def T(c=1, lam=1, e_max=2):
    return NovikovScalar.monomial(Fraction(c) if not hasattr(c, "a") else c, lam, e_max)


def naive_hat_d(A, chain):
    """Bar differential: the operation letter walks from the front to its block."""
    sh = A.basis.shifted
    acc = ChainAccumulator(A.e_max)
    for letters, c in chain.terms.items():
        n = len(letters)
        degs = [1] + [sh(x) for x in letters]
        for start in range(n + 1):
            for length in range(0, n - start + 1):
                out = A.m_word(length, letters[start:start + length])
                if not out:
                    continue
                order = list(range(1, start + 1)) + [0] + list(range(start + 1, n + 1))
                s = perm_sign(degs, order)
                for name, val in out.items():
                    word = letters[:start] + (name,) + letters[start + length:]
                    acc.add(word, c * val if s > 0 else -(c * val))
    return acc.result()
