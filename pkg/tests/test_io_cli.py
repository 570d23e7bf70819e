import json
from fractions import Fraction

import pytest

from cyclic_ainfty.algebra_core import ChainElement, FieldValue, NovikovScalar
from cyclic_ainfty.cli import format_scalar, main
from cyclic_ainfty.io import (
    DocumentError, algebra_from_doc, algebra_to_doc, chain_from_doc, chain_to_doc, dump_json,
    field_from_json, field_to_json, load_json,
)
from oracles import T


@pytest.fixture(scope="module")
def files(tmp_path_factory, fmodel):
    d = tmp_path_factory.mktemp("docs")
    model, alpha = d / "clifford.json", d / "alpha.json"
    dump_json(algebra_to_doc(fmodel.structure, fmodel.pairing), str(model))
    dump_json(chain_to_doc(fmodel.alpha), str(alpha))
    return d, model, alpha


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# --- documents ---------------------------------------------------------------------------

def test_field_round_trip():
    v = FieldValue(Fraction(-3, 7), Fraction(5, 2))
    d = field_to_json(v)
    assert d == {"rat": "-3/7", "sqrt2": "5/2"}
    assert field_from_json(d, "$") == v


def test_algebra_round_trip(fmodel):
    doc = algebra_to_doc(fmodel.structure, fmodel.pairing)
    A, P = algebra_from_doc(json.loads(json.dumps(doc)))
    assert A.constants == fmodel.structure.constants
    assert P.matrix == fmodel.pairing.matrix
    assert algebra_to_doc(A, P) == doc


def test_chain_round_trip(fmodel):
    c = fmodel.alpha + ChainElement({("f1",): NovikovScalar([(0, 2), (Fraction(3, 2), FieldValue(0, 1))])})
    assert chain_from_doc(json.loads(json.dumps(chain_to_doc(c)))) == c


def test_document_errors_carry_location(fmodel):
    doc = algebra_to_doc(fmodel.structure, fmodel.pairing)
    doc["operations"][0]["inputs"] = ["nope"]
    with pytest.raises(DocumentError, match=r"operations\[0\]"):
        algebra_from_doc(doc)
    with pytest.raises(DocumentError, match=r"words\[0\]\.letters\[0\]"):
        chain_from_doc({"words": [{"letters": ["g"], "coeff": {"rat": "1/1"}}]},
                       basis=fmodel.structure.basis)
    with pytest.raises(DocumentError, match="rational"):
        field_from_json({"rat": "x"}, "$")


def test_load_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"basis": [\n  1,,\n]}', encoding="utf-8")
    with pytest.raises(DocumentError, match=r"bad.json:2:"):
        load_json(str(p))


def test_format_scalar():
    assert format_scalar(T(18)) == "18 T"
    assert format_scalar(NovikovScalar.zero(2)) == "0"
    assert format_scalar(T(1, 2)) == "T^2"


# --- verify ---------------------------------------------------------------------------------

def test_verify_passes(capsys, files):
    _, model, _ = files
    code, out, _ = run(capsys, "verify", model, "--checks", "ainfty,cyclic", "--max-length", "3")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_gapped_classes(capsys, files):
    _, model, _ = files
    code, out, _ = run(capsys, "verify", model, "--checks", "gapped")
    assert code == 0
    assert json.loads(out)["checks"][0]["details"]["classes"] == ["(0,0)", "(1,2)", "(2,4)"]


def test_verify_perturbed_fails_with_witness(capsys, files, fmodel):
    d, _, _ = files
    doc = algebra_to_doc(fmodel.structure, fmodel.pairing)
    for op in doc["operations"]:
        if op["inputs"] == ["f12", "f1"] and op["energy"] == "1/1":
            op["output"][0]["coeff"] = {"rat": "5/1", "sqrt2": "0/1"}
    broken = d / "broken.json"
    dump_json(doc, str(broken))
    code, out, _ = run(capsys, "verify", broken, "--checks", "ainfty", "--max-length", "3")
    assert code == 1
    assert json.loads(out)["checks"][0]["witnesses"]


def test_verify_input_errors(capsys, files, tmp_path):
    _, model, _ = files
    assert run(capsys, "verify", model, "--checks", "nonsense")[0] == 2
    bad = tmp_path / "x.json"
    bad.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "verify", bad)
    assert code == 2 and "x.json:1:" in err


# --- mplus ----------------------------------------------------------------------------------

def test_mplus_alpha(capsys, files):
    _, model, alpha = files
    code, out, _ = run(capsys, "mplus", model, alpha)
    res = json.loads(out)
    assert code == 0
    assert res["m_plus_display"] == "18 T" and res["status"] == "cyclic cycle"
    code, out, _ = run(capsys, "mplus", model, alpha, "--scale", "1/3")
    assert json.loads(out)["m_plus_display"] == "6 T"


def test_mplus_non_cycle(capsys, files):
    d, model, _ = files
    chain = d / "word.json"
    dump_json(chain_to_doc(ChainElement({("f1", "f1", "f12"): 1})), str(chain))
    code, out, err = run(capsys, "mplus", model, chain)
    assert code == 0
    assert json.loads(out)["status"] == "not a cycle"
    assert "not a cycle" in err and "3/2 T" in err


def test_mplus_unknown_letter(capsys, files):
    d, model, _ = files
    chain = d / "odd.json"
    chain.write_text(json.dumps({"words": [{"letters": ["g"], "coeff": {"rat": "1/1"}}]}),
                     encoding="utf-8")
    assert run(capsys, "mplus", model, chain)[0] == 2


# --- clifford, count, region -----------------------------------------------------------------

def test_clifford_verify_alpha(capsys, tmp_path):
    code, out, _ = run(capsys, "clifford", "--verify-alpha", "--emit-alpha", tmp_path / "a.json")
    assert code == 0
    assert out.rstrip().splitlines()[-1] == "m_plus_alpha: 18 T"
    assert (tmp_path / "a.json").exists()


def test_count_single_triple(capsys):
    code, out, _ = run(capsys, "count", "--p", "0,0", "--q", "1,-1", "--r", "2,-2")
    rep = json.loads(out)
    assert code == 0 and rep["total"] in (0, 2)
    assert rep["discs"]["b1+b2"] is None


def test_count_degenerate_triple(capsys):
    code, _, err = run(capsys, "count", "--p", "0,0", "--q", "0,1", "--r", "2,3")
    assert code == 2 and "input error" in err


def test_count_needs_points(capsys):
    assert run(capsys, "count", "--p", "0,0")[0] == 2
    assert run(capsys, "count", "--p", "0", "--q", "1,1", "--r", "2,2")[0] == 2


def test_count_samples(capsys):
    code, out, _ = run(capsys, "count", "--samples", "500", "--seed", "7", "--check", "parity,invariant")
    assert code == 0 and json.loads(out)["checks"] == {"parity": True, "invariant": True}


def test_region(capsys, tmp_path):
    svg = tmp_path / "map.svg"
    code, out, _ = run(capsys, "region", "--resolution", "16", "--out", svg)
    res = json.loads(out)
    assert code == 0 and res["passed"]
    assert svg.exists() and (tmp_path / "map.csv").exists()
    assert run(capsys, "region", "--resolution", "0")[0] == 2
