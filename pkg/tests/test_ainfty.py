import random
from fractions import Fraction

import pytest

from cyclic_ainfty.ainfty import (
    AInfinityStructure, ClassIndex, FiltrationMonoid, UndeterminedConstant, ZERO_CLASS,
    verify_ainfty, verify_gapped, verify_unit,
)
from cyclic_ainfty.algebra_core import ChainElement, GradedElement, NovikovScalar
from cyclic_ainfty.clifford import F_BASIS
from oracles import naive_hat_d

ONE = ClassIndex(1, 2)


def test_apply_m_examples(fmodel):
    A = fmodel.reduced
    f1 = GradedElement.basis("f1")
    e = GradedElement.basis("e")
    assert A.apply_m(2, [f1, f1]) == GradedElement({"e": NovikovScalar.monomial(Fraction(3, 2), 1)})
    assert A.apply_m(2, [e, f1]) == f1
    for x in F_BASIS:
        assert A.m_word(1, (x,)) == {}


def test_apply_m_arity_mismatch(fmodel):
    with pytest.raises(ValueError):
        fmodel.reduced.apply_m(2, [GradedElement.basis("f1")])


def test_hat_d_examples(fmodel):
    A = fmodel.reduced
    assert A.hat_d(ChainElement({("f2", "f1"): 1})) == ChainElement({("f12",): -1})
    zero = AInfinityStructure(F_BASIS, {}, max_arity=4)
    assert zero.hat_d(ChainElement({("f1",): 1})).is_zero()


def test_hat_d_matches_naive_oracle(fmodel):
    for A in (fmodel.reduced, fmodel.structure):
        rng = random.Random(3)
        for _ in range(60):
            n = rng.randint(1, 4)
            w = tuple(rng.choice(F_BASIS.names) for _ in range(n))
            c = ChainElement({w: NovikovScalar.monomial(rng.randint(1, 3), rng.choice([0, 1]))})
            assert A.hat_d(c) == naive_hat_d(A, c)


def test_energy_filtration_not_decreased(fmodel):
    A = fmodel.reduced
    for w in [("f1", "f1"), ("f12", "f1", "f1"), ("e", "f1")]:
        for lam_in in (0, 1):
            out = A.hat_d(ChainElement({w: NovikovScalar.monomial(1, lam_in)}))
            for _, c in out.terms.items():
                assert c.min_energy() >= lam_in


def test_zero_structure_is_ainfty():
    assert verify_ainfty(AInfinityStructure(F_BASIS, {}, max_arity=4), 3)


def test_clifford_passes(fmodel):
    assert verify_ainfty(fmodel.structure, 4)
    assert verify_ainfty(fmodel.reduced, 4)


def test_zeroed_constant_fails_at_expected_word(fmodel):
    consts = dict(fmodel.structure.constants)
    consts.pop((2, ONE, ("f12", "f1")))
    A = fmodel.structure.with_constants(consts)
    rep = verify_ainfty(A, 3)
    assert not rep
    assert ["f2", "f1", "f1"] in [w["word"] for w in rep.witnesses]


def test_undetermined_slot_reported():
    A = AInfinityStructure(F_BASIS, {}, max_arity=2, undetermined=[(2, ONE, ("f1", "f12"))])
    rep = verify_ainfty(A, 3)
    assert not rep
    assert any("undetermined" in w for w in rep.witnesses)
    with pytest.raises(UndeterminedConstant):
        A.m_word(2, ("f1", "f12"))
    with pytest.raises(UndeterminedConstant):
        A.m_word(3, ("f1", "f1", "f1"))


def test_degree_rule_enforced_at_load():
    with pytest.raises(ValueError):
        AInfinityStructure(F_BASIS, {(2, ZERO_CLASS, ("f1", "f1")): {"e": 1}})


def test_reduced_drops_curvature(fmodel):
    assert fmodel.structure.has_curvature()
    assert not fmodel.reduced.has_curvature()
    assert fmodel.structure.m_word(0, ()) == {"e": NovikovScalar.monomial(3, 1)}


# --- gapped ---------------------------------------------------------------------------

def test_gapped_clifford(fmodel):
    rep = verify_gapped(fmodel.structure.filtration())
    assert rep
    assert rep.details["classes"] == ["(0,0)", "(1,2)", "(2,4)"]


def test_gapped_zero_energy_nonzero_maslov():
    rep = verify_gapped(FiltrationMonoid([ClassIndex(0, 2)]))
    assert not rep
    assert any(w.get("condition") == 2 for w in rep.witnesses)


def test_gapped_accumulating_energies():
    gen = (ClassIndex(Fraction(1, n), 2) for n in range(1, 10 ** 9))
    rep = verify_gapped(FiltrationMonoid(gen, e_max=2))
    assert not rep
    assert any(w.get("condition") == 1 for w in rep.witnesses)


def test_gapped_odd_maslov():
    assert not verify_gapped(FiltrationMonoid([ClassIndex(1, 3)]))


# --- unit -----------------------------------------------------------------------------

def test_unit_laws(fmodel):
    A = fmodel.structure
    assert verify_unit(A)
    assert A.m_word(2, ("e", "f12")) == {"f12": NovikovScalar.const(1)}
    assert A.m_word(2, ("f1", "e")) == {"f1": NovikovScalar.const(-1)}
    assert A.m_word(3, ("e", "f1", "f2")) == {}


def test_unit_sign_consistent_with_relations(fmodel):
    """Flipping the right-unit sign on odd letters breaks the A-infinity relations."""
    consts = dict(fmodel.structure.constants)
    for x in ("f1", "f2"):
        consts[(2, ZERO_CLASS, (x, "e"))] = {x: 1}
    A = fmodel.structure.with_constants(consts)
    assert not verify_unit(A)
    assert not verify_ainfty(A, 3)


def test_unit_detects_quantum_unit_slot(fmodel):
    consts = dict(fmodel.structure.constants)
    consts[(2, ONE, ("e", "f1"))] = {"f1": 1}
    consts[(2, ONE, ("e", "f12"))] = {"f12": 1}
    assert not verify_unit(fmodel.structure.with_constants(consts, check_degrees=False))
