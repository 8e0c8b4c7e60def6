import json

import numpy as np
import pytest

from utcat import io_schemas as io
from utcat.algebra_object import validate_algebra_object
from utcat.annulus import build_annulus
from utcat.cli import main
from utcat.errors import SchemaError
from utcat.fixtures import fibonacci, ising, vec_zn
from utcat.semicircular import BaseAlgebra


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


# -- io round trips -----------------------------------------------------------

def test_ring_round_trip():
    ring = ising().ring
    again = io.ring_from_json(io.ring_to_json(ring))
    assert again == ring


def test_cat_round_trip_preserves_f_and_r():
    for cat in (fibonacci(), ising(), vec_zn(4)):
        again = io.cat_from_json(io.cat_to_json(cat))
        assert again.verify_pentagon() < 1e-10
        for key, M in cat._F.items():
            assert np.allclose(again.fmat(*key), M)
        for key, M in cat._R.items():
            assert np.allclose(again.rmat(*key), M)
        assert again.qdim == pytest.approx(cat.qdim)


def test_aobj_round_trip():
    cat = ising()
    ann = build_annulus(cat)
    again = io.aobj_from_json(cat, io.aobj_to_json(ann))
    res = validate_algebra_object(again)
    assert max(res["associativity"], res["star_monoidality"]) < 1e-9
    assert again.fibers == {X: n for X, n in ann.fibers.items() if n}


def test_eta_round_trip():
    alg = BaseAlgebra((2,))
    raw = {"index": [0, 1],
           "entries": {"0,0": [[[1, 0]] * 4] * 4,
                       "1,1": [[[1, 0]] * 4] * 4}}
    eta = io.eta_from_json(raw, alg)
    assert eta.index == (0, 1)
    assert np.allclose(eta.entries[(0, 1)], 0.0)


def test_schema_errors_carry_pointers():
    with pytest.raises(SchemaError) as exc:
        io.ring_from_json({"labels": ["1"], "unit": "1", "dual": {"1": "1"}})
    assert exc.value.pointer == "/fusion"
    with pytest.raises(SchemaError) as exc:
        io.base_from_json({"blocks": [0]})
    assert exc.value.pointer == "/blocks"
    cat = vec_zn(2)
    raw = io.aobj_to_json(build_annulus(cat))
    raw["unit"] = [[1, 0]] * 5
    with pytest.raises(SchemaError) as exc:
        io.aobj_from_json(cat, raw)
    assert exc.value.pointer == "/unit"


def test_complex_wire_format():
    raw = io.cat_to_json(fibonacci())
    block = raw["F"]["tau,tau,tau;tau"]
    for rows in block.values():
        for row in rows:
            for v in row:
                assert isinstance(v, list) and len(v) == 2


# -- exit codes ----------------------------------------------------------------

def test_validate_bundled_fixture(capsys):
    code, rep = run(capsys, "validate", "fib.json")
    assert code == 0
    assert rep["residuals"]["pentagon"] < 1e-10
    assert rep["seed"] == 0 and rep["tolerance"] == 1e-9


def test_validate_axiom_violation_exits_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"labels": ["1", "x"], "unit": "1",
                             "dual": {"1": "1", "x": "x"},
                             "fusion": {"x,x": {"x": 1}}}))
    code, rep = run(capsys, "validate", str(p))
    assert code == 2
    assert any(v["axiom"] == "duality" for v in rep["violations"])


def test_schema_error_exits_3(capsys, tmp_path):
    p = tmp_path / "frag.json"
    p.write_text("{not json")
    assert run(capsys, "validate", str(p))[0] == 3
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 3


def test_verify_reports_three_residuals(capsys, tmp_path):
    code, rep = run(capsys, "verify", "ising")
    assert code == 0
    assert rep["pentagon"] < 1e-10 and rep["hexagon"] < 1e-10
    assert rep["zigzag"] < 1e-10
    # dropping R makes the category unbraided: hexagon reported as null
    raw = io.cat_to_json(fibonacci())
    del raw["R"]
    p = tmp_path / "fib_nor.json"
    p.write_text(json.dumps(raw))
    code, rep = run(capsys, "verify", str(p))
    assert code == 0 and rep["hexagon"] is None


def test_aobj_verify_annulus_round_trip(capsys, tmp_path):
    out = tmp_path / "ann.json"
    code, rep = run(capsys, "annulus", "--cat", "fib", "--out", str(out))
    assert code == 0 and rep["z_state"]["positivity_floor"] >= -1e-10
    code, rep = run(capsys, "aobj-verify", "fib", str(out))
    assert code == 0
    assert max(v for v in rep["residuals"].values() if v > 0) < 1e-9


def test_annulus_support_restriction(capsys, tmp_path):
    code, rep = run(capsys, "annulus", "--cat", "vec_z4",
                    "--support", "gen=g2,depth=1")
    assert code == 0
    assert rep["support"] == ["g0", "g2"]


def test_coend_group_oracle(capsys):
    code, rep = run(capsys, "coend", "--cat", "z3",
                    "--left", "fiber", "--right", "groupalg")
    assert code == 0
    assert rep["group_oracle_residual"] == 0.0
    assert rep["norm_sandwich"]["violations"] == 0
    assert rep["faithfulness"]["failures"] == 0


def test_coend_fibonacci_annulus(capsys):
    code, rep = run(capsys, "coend", "--cat", "fib",
                    "--left", "annulus", "--right", "annulus",
                    "--samples", "6")
    assert code == 0
    assert rep["group_oracle_residual"] is None
    assert rep["norm_sandwich"]["max_ratio"] <= rep["norm_sandwich"]["max_bound"] + 1e-8


def test_analyze_chain(capsys):
    code, rep = run(capsys, "analyze", "--cat", "z2", "--aobj", "annulus")
    assert code == 0
    assert rep["discrete"] and rep["pqr"] and rep["ind"]
    assert rep["verdict"]["verdict"] == "IND"


def test_analyze_explicit_state(capsys, tmp_path):
    p = tmp_path / "omega.json"
    p.write_text(json.dumps([[1.0, 0.0], [0.0, 0.0]]))
    code, rep = run(capsys, "analyze", "--cat", "z2", "--aobj", "annulus",
                    "--state", str(p))
    assert code == 0 and rep["gns_dims"] == {"g0": 2}


def test_fock_catalan_moments(capsys):
    code, rep = run(capsys, "fock", "--depth", "10", "--moments", "8")
    assert code == 0
    assert rep["moments"] == pytest.approx([1, 0, 1, 0, 2, 0, 5, 0, 14],
                                           abs=1e-9)


def test_fock_custom_base_and_cov(capsys, tmp_path):
    base = tmp_path / "base.json"
    base.write_text(json.dumps({"blocks": [1, 1]}))
    cov = tmp_path / "eta.json"
    cov.write_text(json.dumps({
        "index": [0],
        "entries": {"0,0": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}}))
    code, rep = run(capsys, "fock", "--base", str(base), "--cov", str(cov),
                    "--depth", "4", "--moments", "4")
    assert code == 0
    assert rep["trace_symmetry_residual"] < 1e-12


def test_reports_are_deterministic(capsys, tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"rep{k}.json"
        code, _ = run(capsys, "coend", "--cat", "fib", "--left", "annulus",
                      "--right", "annulus", "--samples", "4",
                      "--seed", "7", "--report", str(p))
        assert code == 0
        rep = json.loads(p.read_text())
        del rep["wall_clock"]
        outs.append(json.dumps(rep, sort_keys=True))
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["seed"] == 7


def test_bad_support_spec_exits_3(capsys):
    assert run(capsys, "annulus", "--cat", "fib",
               "--support", "gen=omega,depth=1")[0] == 3
    assert run(capsys, "annulus", "--cat", "fib",
               "--support", "depth=2")[0] == 3


def test_nonpositive_tolerance_exits_3(capsys):
    assert run(capsys, "validate", "fib", "--tol", "0")[0] == 3
