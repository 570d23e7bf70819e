import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclic_ainfty.ainfty import AInfinityStructure, ClassIndex, ZERO_CLASS
from cyclic_ainfty.algebra_core import (
    ChainElement, FieldValue, GradedElement, NovikovScalar, TensorWord, apply_t, one_minus_t,
)
from cyclic_ainfty.clifford import F_BASIS, pairing_f
from cyclic_ainfty.pairing import (
    CyclicPairing, m_plus, m_plus_chain, random_chain, split_pairing_sum, verify_bar_boundary,
    verify_cyclic_symmetry, verify_mplus_rotation, verify_split_pairing, verify_stokes,
)
from oracles import T

ONE = ClassIndex(1, 2)
P = pairing_f()


def with_m1(a, b, d):
    """Classical model plus a differential ``m_1`` on the f-basis."""
    consts = {
        (1, ZERO_CLASS, ("e",)): {"f1": a, "f2": b},
        (1, ZERO_CLASS, ("f1",)): {"f12": -b},
        (1, ZERO_CLASS, ("f2",)): {"f12": d},
    }
    return AInfinityStructure(F_BASIS, consts, max_arity=2)


# --- the pairing itself ---------------------------------------------------------------

def test_pairing_values():
    f1, f2, e, f12 = (GradedElement.basis(n) for n in ("f1", "f2", "e", "f12"))
    assert P.pair(f1, f2) == NovikovScalar.const(1)
    assert P.pair(f2, f1) == NovikovScalar.const(-1)
    assert P.pair(e, f12) == P.pair(f12, e) == NovikovScalar.const(1)
    assert P.pair(f1, f1).is_zero()


def test_pairing_is_bilinear_over_novikov():
    x = GradedElement({"f1": NovikovScalar.monomial(2, 1)})
    y = GradedElement({"f2": NovikovScalar.monomial(FieldValue(0, 1), Fraction(1, 2))})
    assert P.pair(x, y) == NovikovScalar.monomial(FieldValue(0, 2), Fraction(3, 2))


def test_rejects_non_skew():
    with pytest.raises(ValueError, match="skew"):
        CyclicPairing(F_BASIS, {("f1", "f2"): 1, ("f2", "f1"): 1, ("e", "f12"): 1, ("f12", "e"): 1})


def test_rejects_degenerate():
    with pytest.raises(ValueError, match="degenerate"):
        CyclicPairing(F_BASIS, {("f1", "f2"): 1, ("f2", "f1"): -1})


def test_rejects_mixed_degree():
    with pytest.raises(ValueError, match="homogeneous"):
        CyclicPairing(F_BASIS, {("f1", "f2"): 1, ("f2", "f1"): -1, ("e", "f12"): 1,
                                ("f12", "e"): 1, ("e", "e"): 1})


def test_dual_element():
    z = P.dual_element({"f1": FieldValue(1)})
    # <z, f1> = 1 forces z = -f2 since <f2, f1> = -1
    assert z == {"f2": FieldValue(-1)}
    for y in F_BASIS:
        want = FieldValue(1) if y == "f1" else FieldValue(0)
        assert P.pair(GradedElement(z), GradedElement.basis(y)) == NovikovScalar.const(want)


# --- cyclic symmetry and Stokes --------------------------------------------------------

def test_cyclic_symmetry_clifford(fmodel):
    rep = verify_cyclic_symmetry(fmodel.structure, fmodel.pairing, 5)
    assert rep, rep.witnesses


def test_cyclic_symmetry_zero_structure():
    assert verify_cyclic_symmetry(AInfinityStructure(F_BASIS, {}, max_arity=4), P)


def test_cyclic_symmetry_detects_flipped_constant(fmodel):
    consts = dict(fmodel.structure.constants)
    key = (2, ONE, ("f12", "f1"))
    consts[key] = {n: -c for n, c in consts[key].items()}
    rep = verify_cyclic_symmetry(fmodel.structure.with_constants(consts), fmodel.pairing, 3)
    assert not rep
    words = [tuple(w["word"]) for w in rep.witnesses]
    assert {("f12", "f1", "f1"), ("f1", "f12", "f1")} & set(words)


def test_stokes_canonical_model(fmodel):
    assert verify_stokes(fmodel.structure, fmodel.pairing)


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_stokes_random_cyclic_m1(a, b):
    A = with_m1(a, b, a)
    assert verify_stokes(A, P)
    assert verify_cyclic_symmetry(A, P, 2)


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_stokes_non_cyclic_m1(a, b):
    assert not verify_stokes(with_m1(a, b, a + 1), P)


# --- split pairing ---------------------------------------------------------------------

def test_split_pairing_zero_structure():
    Z = AInfinityStructure(F_BASIS, {}, max_arity=4)
    assert split_pairing_sum(Z, P, ("f1", "f2", "e")).is_zero()


def test_split_pairing_clifford_tuple(fmodel):
    assert split_pairing_sum(fmodel.structure, fmodel.pairing, ("f2", "f1", "f1", "f1")).is_zero()


def test_split_pairing_exhaustive(fmodel):
    rep = verify_split_pairing(fmodel.structure, fmodel.pairing, 4)
    assert rep, rep.witnesses[:3]
    assert rep.details["tuples"] == 16 + 64 + 256


def test_unrestricted_sum_is_twice_restricted_off_shell(fmodel):
    """With a non-cyclic perturbation the sums are nonzero and still in ratio two."""
    consts = dict(fmodel.structure.constants)
    consts[(2, ONE, ("f12", "f1"))] = {"f2": 5}
    A = fmodel.structure.with_constants(consts)
    rng = random.Random(11)
    nonzero = 0
    for _ in range(200):
        w = tuple(rng.choice(F_BASIS.names) for _ in range(rng.randint(3, 4)))
        r = split_pairing_sum(A, P, w)
        u = split_pairing_sum(A, P, w, restricted=False)
        assert u == r * 2
        nonzero += bool(r)
    assert nonzero


# --- m plus ---------------------------------------------------------------------------

def test_m_plus_example(fmodel):
    assert m_plus(fmodel.reduced, fmodel.pairing, ("f1", "f1", "f12")) == T(Fraction(3, 2))


def test_m_plus_length_one_reduced(fmodel):
    for x in F_BASIS:
        assert m_plus(fmodel.reduced, fmodel.pairing, (x,)).is_zero()


def test_m_plus_scales_with_coefficient(fmodel):
    w = TensorWord(("f1", "f1", "f12"), NovikovScalar.monomial(2, Fraction(1, 2)))
    assert m_plus(fmodel.reduced, fmodel.pairing, w) == NovikovScalar.monomial(3, Fraction(3, 2))


def test_m_plus_empty_word_rejected(fmodel):
    with pytest.raises(ValueError):
        m_plus(fmodel.reduced, fmodel.pairing, ())


def test_m_plus_rotation_example(fmodel):
    c = ChainElement({("f1", "f1", "f12"): 1})
    A = fmodel.reduced
    assert m_plus_chain(A, P, apply_t(c, F_BASIS)) == m_plus_chain(A, P, c) == T(Fraction(3, 2))


def test_m_plus_rotation_sweep(fmodel):
    assert verify_mplus_rotation(fmodel.structure, fmodel.pairing, 100)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_m_plus_kills_one_minus_t(fmodel, seed):
    c = random_chain(F_BASIS, random.Random(seed), max_length=4)
    A = fmodel.structure
    assert m_plus_chain(A, P, one_minus_t(c, F_BASIS)).is_zero()
    assert m_plus_chain(A, P, apply_t(c, F_BASIS)) == m_plus_chain(A, P, c)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(F_BASIS.names), st.lists(st.sampled_from(F_BASIS.names), max_size=3),
       st.sampled_from([0, Fraction(1, 2), 1]))
def test_m_plus_respects_energy(fmodel, first, rest, lam):
    w = TensorWord((first, *rest), NovikovScalar.monomial(1, lam))
    v = m_plus(fmodel.structure, fmodel.pairing, w)
    assert v.is_zero() or v.min_energy() >= lam


# --- bar boundaries -------------------------------------------------------------------

def test_bar_boundary_zero_structure():
    assert verify_bar_boundary(AInfinityStructure(F_BASIS, {}, max_arity=4), P)


def test_bar_boundary_clifford(fmodel):
    rep = verify_bar_boundary(fmodel.structure, fmodel.pairing, 3)
    assert rep
    w = rep.details["remark_witness"]
    assert isinstance(w, dict) and len(w["word"]) == 4
