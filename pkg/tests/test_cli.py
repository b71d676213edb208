import json

import pytest

from darbouxkit.cli import main
from darbouxkit.dcrit import hand_built_certificate
from darbouxkit.modelfile import certificate_model, dump


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture
def cubic(tmp_path):
    spec = _write(tmp_path, "spec.json", {
        "base": ["x"],
        "darboux_spec": {"family": "odd", "d": 0, "hamiltonian": "x^3"},
    })
    out = str(tmp_path / "model.json")
    assert main(["gen-darboux", "--spec", spec, "--out", out]) == 0
    return spec, out


def test_generate_then_check(cubic, capsys):
    _, model = cubic
    for what in ("d2", "closed", "nondeg"):
        assert main(["check", what, "--model", model]) == 0
    assert main(["check", "nondeg", "--model", model, "--at", "x=0"]) == 0
    out = capsys.readouterr().out
    assert "d o d = 0: pass" in out and "closed: pass" in out
    assert "strictly nondegenerate: pass" in out


def test_generate_to_stdout_is_a_model(cubic, capsys):
    spec, model = cubic
    capsys.readouterr()
    assert main(["gen-darboux", "--spec", spec]) == 0
    assert capsys.readouterr().out == open(model).read()


def test_master_weak(tmp_path, capsys):
    spec = _write(tmp_path, "weak.json", {
        "base": ["x"],
        "darboux_spec": {"family": "weak2", "d": 0, "ranks": [2], "q": ["1", "-1"],
                         "hamiltonian": "z1*x^2 + z2*x^2"},
    })
    assert main(["check", "master", "--spec", spec]) == 0
    assert "master equation: pass" in capsys.readouterr().out


def test_master_failure_lists_residue(tmp_path, capsys):
    spec = _write(tmp_path, "bad.json", {
        "base": ["x"],
        "darboux_spec": {"family": "strong2", "d": 0, "ranks": [1], "hamiltonian": "z1*x"},
    })
    assert main(["check", "master", "--spec", spec]) == 1
    assert "residue master:" in capsys.readouterr().out


def test_minimal_at(tmp_path, capsys):
    spec = _write(tmp_path, "sq.json", {"base": ["x"], "darboux_spec": {"family": "odd", "d": 0, "hamiltonian": "x^2"}})
    model = str(tmp_path / "sq_model.json")
    main(["gen-darboux", "--spec", spec, "--out", model])
    capsys.readouterr()
    assert main(["minimal-at", "--model", model, "--at", "x=0"]) == 1
    out = capsys.readouterr().out
    assert "minimal at x=0: fail" in out
    assert "residue d^-1[x, y1_1]: 2" in out


def test_cotangent(cubic, capsys):
    _, model = cubic
    capsys.readouterr()
    assert main(["cotangent", "--model", model]) == 0
    assert "[6*x]" in capsys.readouterr().out
    assert main(["cotangent", "--model", model, "--at", "x=2"]) == 0
    assert "[12]" in capsys.readouterr().out


def test_brackets(cubic, capsys):
    _, model = cubic
    capsys.readouterr()
    assert main(["bracket", "--model", model, "-f", "x", "-g", "y1_1"]) == 0
    assert main(["bracket", "--model", model, "-f", "y1_1", "-g", "x"]) == 0
    assert capsys.readouterr().out.splitlines() == ["{f, g} = 1", "{f, g} = -1"]


def test_axioms_deterministic(cubic, capsys):
    _, model = cubic
    capsys.readouterr()
    assert main(["axioms", "--model", model, "--samples", "5", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    main(["axioms", "--model", model, "--samples", "5", "--seed", "3"])
    assert capsys.readouterr().out == first
    assert "Poisson axioms on 5 triples (seed 3): pass" in first


def test_extract_h(cubic, capsys):
    _, model = cubic
    capsys.readouterr()
    assert main(["extract-h", "--model", model]) == 0
    out = capsys.readouterr().out
    assert out.startswith("H = x^3\n")


def test_verify_overlap(tmp_path, capsys):
    path = tmp_path / "cert.json"
    dump(certificate_model(hand_built_certificate("1")), path)
    assert main(["verify-overlap", "--cert", str(path)]) == 0
    out = capsys.readouterr().out
    assert "status: pass" in out
    assert "-9*z^4" in out


def test_malformed_inputs_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["check", "d2", "--model", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("error: ")
    empty = _write(tmp_path, "empty.json", {"base": ["x"]})
    assert main(["gen-darboux", "--spec", empty]) == 2
    assert "no darboux_spec section" in capsys.readouterr().err
    assert main(["check", "closed", "--spec", empty]) == 2
    assert main(["no-such-verb"]) == 2
