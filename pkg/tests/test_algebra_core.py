from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclic_ainfty.algebra_core import (
    SQRT2, ChainElement, ConfigurationError, FieldValue, GradedBasis, GradedElement,
    NovikovScalar, ResourceError, TensorWord, apply_t, ce_symmetrize, koszul_sign, one_minus_t,
    permutation_koszul_sign, rotations, scalar_ops, symmetrize_N, t_rotate,
)
from cyclic_ainfty.clifford import F_BASIS
from oracles import all_orderings_sign_sum, perm_sign

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
fields = st.builds(FieldValue, fracs, fracs)
energies = st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)])
scalars = st.lists(st.tuples(energies, fields), max_size=3).map(lambda t: NovikovScalar(t, 2))
letters = st.sampled_from(F_BASIS.names)
words = st.lists(letters, min_size=1, max_size=5).map(tuple)


def chains():
    term = st.tuples(words, st.integers(-3, 3), st.sampled_from([0, 1]))
    return st.lists(term, max_size=5).map(
        lambda ts: ChainElement({w: NovikovScalar.monomial(c, lam) for w, c, lam in ts}))


# --- Q(sqrt 2) ----------------------------------------------------------------------

def test_field_norm_example():
    assert (FieldValue(1, 1) * FieldValue(1, -1)) == FieldValue(-1)


def test_sqrt2_squares_to_two():
    assert SQRT2 * SQRT2 == FieldValue(2)


def test_zero_iff_both_parts_zero():
    assert not FieldValue(0, 0)
    assert FieldValue(0, 1) and FieldValue(1, 0)


@given(fields, fields, fields)
def test_field_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(fields)
def test_field_inverse(a):
    if a:
        assert a * a.inverse() == FieldValue(1)
    else:
        with pytest.raises(ZeroDivisionError):
            a.inverse()


# --- Novikov scalars ----------------------------------------------------------------

def test_multiplicative_identity():
    one = NovikovScalar.const(1)
    assert one * one == one


def test_truncation_drops_high_energy():
    a = NovikovScalar.monomial(Fraction(3, 2), 1, e_max=1)
    b = NovikovScalar.monomial(1, 1, e_max=1)
    assert (a * b).is_zero()


def test_norm_as_scalar():
    a = NovikovScalar.const(FieldValue(1, 1))
    b = NovikovScalar.const(FieldValue(1, -1))
    assert scalar_ops(a, b, "mul") == NovikovScalar.const(-1)


def test_mismatched_e_max_rejected():
    with pytest.raises(ConfigurationError):
        NovikovScalar.const(1, e_max=1) + NovikovScalar.const(1, e_max=2)


def test_exponents_strictly_increasing_and_nonzero():
    s = NovikovScalar([(1, 2), (0, 1), (1, -2), (3, 5)], e_max=2)
    assert s.terms == ((Fraction(0), FieldValue(1)),)


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        NovikovScalar([(-1, 1)])


@settings(max_examples=60)
@given(scalars, scalars, scalars)
def test_novikov_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(scalars)
def test_truncation_bound(a):
    assert all(lam <= 2 for lam, _ in (a * a).terms)


# --- graded data ---------------------------------------------------------------------

def test_basis_shifted_degree():
    assert [F_BASIS.shifted(n) for n in F_BASIS] == [-1, 0, 0, 1]


def test_basis_rejects_duplicates():
    with pytest.raises(ValueError):
        GradedBasis([("a", 0), ("a", 1)])


def test_graded_element_drops_zero_and_homogeneity():
    x = GradedElement({"f1": 1, "f2": 0, "e": 0})
    assert [n for n, _ in x.items()] == ["f1"]
    assert x.is_homogeneous(F_BASIS)
    assert not GradedElement({"f1": 1, "f12": 1}).is_homogeneous(F_BASIS)


def test_chain_merges_identical_words():
    c = ChainElement({("f1", "f2"): 1}) + ChainElement({("f1", "f2"): 2})
    assert c == ChainElement({("f1", "f2"): 3})
    assert (c - c).is_zero()


def test_tensor_word_needs_letters():
    with pytest.raises(ValueError):
        TensorWord(())


# --- signs ---------------------------------------------------------------------------

def test_even_letters_commute():
    assert koszul_sign(["a", "b", "c"], ["c", "a", "b"], {"a": 0, "b": 2, "c": 0}) == 1


def test_odd_swap():
    assert koszul_sign(["m", "n"], ["n", "m"], {"m": 1, "n": 1}) == -1


def test_operation_letters_crossing():
    degs = {"ma": 1, "mb": 1, "x1": 0, "x2": 0, "x3": 0}
    before = ["ma", "mb", "x1", "x2", "x3"]
    # the first operation moves behind the second: one odd-odd crossing
    assert koszul_sign(before, ["mb", "x2", "x3", "ma", "x1"], degs) == -1
    # the first operation stays in front: nothing odd crosses
    assert koszul_sign(before, ["ma", "x2", "x3", "mb", "x1"], degs) == 1


def test_koszul_rejects_non_permutation():
    with pytest.raises(ValueError):
        koszul_sign(["a", "b"], ["a", "c"], {"a": 1, "b": 1, "c": 1})
    with pytest.raises(ValueError):
        koszul_sign(["a", "a"], ["a", "a"], {"a": 1})


@given(st.lists(st.integers(-2, 3), min_size=1, max_size=6), st.randoms(use_true_random=False))
def test_permutation_sign_matches_bubble_sort(degs, rnd):
    perm = list(range(len(degs)))
    rnd.shuffle(perm)
    assert permutation_koszul_sign(degs, perm) == perm_sign(degs, perm)


@given(st.lists(st.integers(-2, 3), min_size=1, max_size=6), st.randoms(use_true_random=False))
def test_koszul_sign_multiplicative(degs, rnd):
    n = len(degs)
    p = list(range(n))
    rnd.shuffle(p)
    q = list(range(n))
    rnd.shuffle(q)
    # apply p, then rearrange the result by q
    composite = [p[q[j]] for j in range(n)]
    degs_after_p = [degs[i] for i in p]
    assert permutation_koszul_sign(degs, composite) == \
        permutation_koszul_sign(degs, p) * permutation_koszul_sign(degs_after_p, q)


def test_rotation_examples():
    w = t_rotate(TensorWord(("f1", "f12")), F_BASIS)
    assert w.letters == ("f12", "f1") and w.coeff == NovikovScalar.const(1)
    w = t_rotate(TensorWord(("f12", "e")), F_BASIS)
    assert w.letters == ("e", "f12") and w.coeff == NovikovScalar.const(-1)


@given(words)
def test_full_cycle_of_rotations(w):
    c = ChainElement({w: 1})
    out = c
    for _ in range(len(w)):
        out = apply_t(out, F_BASIS)
    assert out == c or out == -c
    if all(F_BASIS.shifted(x) % 2 == 0 for x in w):
        assert out == c


def test_symmetrize_example():
    got = symmetrize_N(ChainElement({("f1", "f1", "f12"): 1}), F_BASIS)
    want = ChainElement({("f1", "f1", "f12"): 1, ("f12", "f1", "f1"): 1, ("f1", "f12", "f1"): 1})
    assert got == want


def test_one_minus_t_length_one():
    assert one_minus_t(ChainElement({("f12",): 1}), F_BASIS).is_zero()


@settings(max_examples=60)
@given(chains())
def test_N_and_one_minus_t_annihilate(c):
    assert one_minus_t(symmetrize_N(c, F_BASIS), F_BASIS).is_zero()
    assert symmetrize_N(one_minus_t(c, F_BASIS), F_BASIS).is_zero()


def test_N_on_invariant_chain_scales_by_length():
    inv = symmetrize_N(ChainElement({("f1", "f2", "f12"): 1}), F_BASIS)
    assert symmetrize_N(inv, F_BASIS) == inv * 3


def test_rotations_yield_all_positions():
    rots = list(rotations(("e", "f1", "f12"), F_BASIS))
    assert len(rots) == 3 and rots[0] == (1, ("e", "f1", "f12"))


def test_ce_symmetrize_examples():
    assert ce_symmetrize(["f1"], F_BASIS) == ChainElement({("f1",): 1})
    assert ce_symmetrize(["f1", "f2"], F_BASIS) == ChainElement({("f1", "f2"): 1, ("f2", "f1"): 1})
    assert ce_symmetrize(["e", "f12"], F_BASIS) == ChainElement({("e", "f12"): 1, ("f12", "e"): -1})


@given(st.lists(letters, min_size=1, max_size=4))
def test_ce_symmetrize_matches_oracle(ls):
    got = ce_symmetrize(ls, F_BASIS)
    want = all_orderings_sign_sum(ls, [F_BASIS.shifted(x) for x in ls])
    assert got == ChainElement(want)


def test_ce_symmetrize_cap():
    with pytest.raises(ResourceError):
        ce_symmetrize(["f1"] * 4, F_BASIS, cap=3)
