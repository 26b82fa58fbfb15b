import json
import subprocess
import sys
from fractions import Fraction

import pytest

from hkatomic import presets, serialize
from hkatomic.cli import main
from hkatomic.errors import MalformedInput, UnknownPreset
from hkatomic.exactalg import GaussRat, Mat
from hkatomic.llv import harmonic_project, sym_power
from hkatomic.mukai import QuadSpace, make_mukai

D3 = {"gram": [[2, 0, 0], [0, 2, 0], [0, 0, -2]]}
HODGE = {"e": [1, 0, 0], "f": [0, 1, 0]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def _vec(n, exps):
    return json.dumps({"n": n, "terms": [{"exp": e, "coeff": c} for e, c in exps]})


ALPHA3 = _vec(3, [([3, 0, 0, 0, 0], 1)])
ALPHA_BETA = _vec(2, [([2, 0, 0, 0, 0], 1), ([0, 0, 0, 0, 2], 1)])


# serialize and presets

def test_parse_rat_rejects_floats():
    assert serialize.parse_rat("-3/4") == Fraction(-3, 4)
    assert serialize.parse_rat(5) == 5
    for bad in (0.5, True, "x", None):
        with pytest.raises(MalformedInput):
            serialize.parse_rat(bad)
    assert serialize.parse_scalar({"re": "1/2", "im": 3}) == GaussRat(Fraction(1, 2), 3)


def test_round_trips():
    q = QuadSpace(Mat([[2, 1], [1, -2]]), ("u", "w"))
    assert serialize.lattice_from_json(json.loads(json.dumps(serialize.lattice_to_json(q)))) == q
    space = make_mukai(q)
    assert serialize.mukai_from_json(serialize.mukai_to_json(space)) == space
    x = harmonic_project(sym_power(space, [1, Fraction(1, 3), -2, 5], 3))
    doc = json.loads(json.dumps(serialize.symvector_to_json(x)))
    assert serialize.symvector_from_json(space, doc) == x
    v = (Fraction(1, 2), 0, -3, 7)
    assert serialize.parse_vector(serialize.vector_to_json(v)) == v
    sp3 = make_mukai(serialize.lattice_from_json(D3))
    hd = serialize.hodge_from_json(sp3, HODGE)
    assert serialize.hodge_from_json(sp3, serialize.hodge_to_json(sp3, hd)) == hd


def test_symvector_input_forms():
    space = make_mukai(serialize.lattice_from_json(D3))
    by_label = serialize.symvector_from_json(space, {"n": 2, "terms": [{"monomial": {"alpha": 1, "beta": 1}, "coeff": "2"}]})
    by_exp = serialize.symvector_from_json(space, {"n": 2, "terms": [{"exp": [1, 0, 0, 0, 1], "coeff": 2}]})
    assert by_label == by_exp
    powers = serialize.symvector_from_json(space, {"n": 2, "powers": [{"vector": [1, 0, 0, 0, 1]}]})
    assert powers == harmonic_project(sym_power(space, [1, 0, 0, 0, 1], 2))
    with pytest.raises(Exception):
        serialize.symvector_from_json(space, {"n": 2, "terms": [{"exp": [1, 0, 0, 0, 0]}]})


def test_presets_listing_and_show():
    listing = presets.listing()
    b2 = {d["name"]: d["b2"] for d in listing["lattices"]}
    assert b2 == {"k3": 22, "k3n": 23, "kum_n": 7, "og6": 8, "og10": 24}
    assert "epw" in [d["name"] for d in listing["examples"]]
    epw = presets.show("epw")
    assert epw["diamond"] == [[1, 0, 45], [0, 100, 0], [45, 0, 1]]
    with pytest.raises(UnknownPreset):
        presets.show("nope")


@pytest.mark.parametrize("name", ["k3", "k3n", "kum_n", "og6", "og10"])
def test_lattice_presets_have_hk_signature(name):
    from hkatomic.exactalg import inertia

    q = presets.lattice_preset(name)
    pos, neg, zero = inertia(q.gram)
    assert (pos, zero) == (3, 0) and pos + neg == q.dim


def test_n_dependent_presets():
    assert presets.lattice_preset("k3n", 3).gram[22, 22] == -4
    assert presets.lattice_preset("kum_n", 4).gram[6, 6] == -10


# commands

def test_atomic_check(capsys):
    code, doc, _ = run(capsys, "atomic", "check", "--lattice", json.dumps(D3), "--vector", ALPHA3, "--hodge", json.dumps(HODGE))
    assert code == 0 and doc["atomic"] and doc["criteria_agree"]
    assert doc["codim"]["codim"] == 4 and doc["obstruction"]["obs_rank"] == 1
    code, doc, _ = run(capsys, "atomic", "check", "--lattice", json.dumps(D3), "--vector", ALPHA_BETA)
    assert code == 0 and doc["atomic"] is False


def test_input_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "atomic", "check", "--lattice", json.dumps(D3), "--vector", str(bad))
    assert code == 2 and "malformed" in err
    code, _, _ = run(capsys, "atomic", "check", "--lattice", str(tmp_path / "missing.json"), "--vector", ALPHA3)
    assert code == 2
    code, _, _ = run(capsys, "atomic", "check", "--lattice", json.dumps({"gram": [[0.5]]}), "--vector", ALPHA3)
    assert code == 2


def test_precondition_errors_exit_3(capsys):
    not_harmonic = _vec(2, [([0, 2, 0, 0, 0], 1)])
    code, _, err = run(capsys, "atomic", "check", "--lattice", json.dumps(D3), "--vector", not_harmonic)
    assert code == 3 and "NotHarmonic" in err
    code, _, _ = run(capsys, "tangent-bundle", "--n", "3")
    assert code == 3
    code, _, _ = run(capsys, "presets", "show", "nowhere")
    assert code == 3
    code, _, _ = run(capsys, "spherical", "verdict", "--preset", "nowhere")
    assert code == 3


def test_vtilde_and_obs(capsys):
    vec = json.dumps({"n": 2, "powers": [{"vector": [2, 1, 0, 0, 3], "coeff": 5}]})
    code, doc, _ = run(capsys, "vtilde", "recover", "--lattice", json.dumps(D3), "--vector", vec, "--rank", "2", "--c1", "[1, 0, 0]")
    assert code == 0 and doc["vtilde"] == ["2", "1", "0", "0", "3"]
    assert doc["extended"]["s"] == "3" and doc["extended"]["a"] == "5"
    code, doc, _ = run(capsys, "vtilde", "recover", "--lattice", json.dumps(D3), "--vector", ALPHA_BETA, "--rank", "1")
    assert doc["feasible"] is False and doc["extended"] is None
    vec = json.dumps({"n": 2, "powers": [{"vector": [1, 0, 0, 1, 1]}, {"vector": [2, 0, 0, -1, 1]}]})
    code, doc, _ = run(capsys, "obs", "rank", "--lattice", json.dumps(D3), "--vector", vec, "--hodge", json.dumps(HODGE))
    assert code == 0 and doc["rank"] >= 2 and doc["atomic"] is False


def test_verbitsky_dims(capsys):
    code, doc, _ = run(capsys, "verbitsky", "dims", "--b2", "23", "--n", "2")
    assert (code, doc["dim_sh"], doc["dim_sym"]) == (0, 324, 325)
    code, doc, _ = run(capsys, "verbitsky", "dims", "--lattice", "k3n", "--n", "2")
    assert doc["dim_sh"] == 324 and doc["b2"] == 23
    code, doc, _ = run(capsys, "verbitsky", "dims", "--b2", "3", "--n", "1")
    assert doc["dim_sh"] == 5


def test_tangent_bundle_and_fujiki(capsys):
    code, doc, _ = run(capsys, "tangent-bundle", "--n", "2")
    assert doc == {"c2sq": "576", "c4": "-432", "verdict": "not_atomic", "reason": "euler_characteristic_negative"}
    code, doc, _ = run(capsys, "fujiki", "check")
    assert code == 0 and doc["label"] == "not_atomic"
    code, doc, _ = run(capsys, "fujiki", "check", "--n", "2", "--c2sq", "576", "--c4", "-432")
    assert doc["label"] == "not_excluded"
    code, _, _ = run(capsys, "fujiki", "check", "--c2sq", "1")
    assert code == 2


def test_lagrangian_spherical_series(capsys, tmp_path):
    code, doc, _ = run(capsys, "lagrangian", "check", "--preset", "epw")
    assert doc["verdict"]["outcome"] is True and doc["ext_dims"] == [1, 0, 190, 0, 1]
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"matrix": [[1, 0], [0, 1]], "c1L": [0, 0]}))
    code, doc, _ = run(capsys, "lagrangian", "check", "--restriction", str(path))
    assert doc["verdict"]["outcome"] is False
    code, doc, _ = run(capsys, "spherical", "verdict", "--preset", "og10")
    assert doc["label"] == "no_spherical_objects"
    code, doc, _ = run(capsys, "spherical", "verdict", "--preset", "k3")
    assert doc["label"] == "not_excluded"
    code, doc, _ = run(capsys, "spherical", "verdict", "--preset", "k3n", "--n", "3")
    assert doc["label"] == "no_spherical_objects" and doc["data"]["n"] == 3
    code, _, _ = run(capsys, "spherical", "verdict", "--preset", "k3n", "--n", "1")
    assert code == 3
    code, doc, _ = run(capsys, "series", "verify", "--order", "12")
    assert doc["lagrangian_identity"] is True


def test_presets_command(capsys):
    code, doc, _ = run(capsys, "presets", "list")
    assert code == 0 and {d["name"] for d in doc["lattices"]} >= {"k3", "k3n", "kum_n", "og6", "og10"}
    code, doc, _ = run(capsys, "presets", "show", "epw")
    assert doc["kind"] == "lagrangian_example" and doc["diamond"][1][1] == 100


def test_suite_small_and_fault(capsys):
    code, doc, _ = run(capsys, "suite", "--seed", "3", "--sizes", "b2=3,n=2", "--count", "4")
    assert code == 0 and doc["ok"] and doc["seed"] == 3
    code, doc, _ = run(capsys, "suite", "--seed", "3", "--sizes", "b2=3,n=2", "--count", "4", "--inject-fault", "laplacian-sign")
    assert code == 1 and not doc["ok"]
    assert doc["invariants"]["laplacian_exactness"]["failed"] > 0
    code, _, _ = run(capsys, "suite", "--sizes", "q=1")
    assert code == 2


def test_out_flag_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["--out", str(p), "suite", "--seed", "11", "--sizes", "b2=3,n=2", "--count", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_emitted_json_reparses(capsys):
    code, doc, _ = run(capsys, "atomic", "check", "--lattice", json.dumps(D3), "--vector", ALPHA3)
    space = make_mukai(serialize.lattice_from_json(D3))
    v = serialize.parse_vector(doc["codim"]["vtilde"])
    assert v == space.alpha


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "hkatomic", "tangent-bundle"], capture_output=True, text=True, check=True
    )
    assert json.loads(out.stdout)["c4"] == "-432"
    bad = subprocess.run([sys.executable, "-m", "hkatomic", "atomic", "check", "--lattice", "{", "--vector", "{}"], capture_output=True)
    assert bad.returncode == 2
