import io
import json

import pytest

from latva.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_lattice_info():
    code, data = run_json("lattice", "info", "--gram", "[[2]]")
    assert code == 0
    assert data["coker"] == [2]
    assert data["parity"] == {"b1": 0}
    code, data = run_json("lattice", "info", "--gram", "[[2,1],[1,2]]")
    assert data["coker"] == [3]
    assert data["cocycle"] == [[1, 1], [-1, 1]]


def test_ope_pole_order():
    code, data = run_json("ope", "--g1", "1", "--g2", "-1")
    assert code == 0 and data["pole_order"] == -2


def test_symbol_values():
    assert run_json("symbol", "t", "5")[1]["symbol"] == "1/5"
    assert run_json("symbol", "5", "t")[1]["symbol"] == "5"
    assert run_json("symbol", "1-e*t", "1-f*t^-1")[1]["symbol"] == "1 - e*f"


def test_vertex_expansion():
    code, data = run_json("vertex", "--gamma", "1", "--charge", "1", "--window", "-3:3")
    assert code == 0
    assert data["expansion"]["window"] == [-3, 3]
    assert [t[0] for t in data["expansion"]["terms"]] == [2, 3]


def test_state_apply():
    code, data = run_json("state", "apply", "--op", "h:1:-1", "--op", "h:1:1")
    assert code == 0
    assert data["state"] == [{"charge": [0], "coeff": [2, 1], "modes": []}]


def test_module_commands():
    code, data = run_json("module", "build", "--chi", "1", "--cutoff", "2")
    assert data["offset"] == [1]
    assert data["graded_dimension"] == {"1/4": 2, "5/4": 2}
    code, _ = run("module", "certify", "--chi", "1", "--cutoff", "3")
    assert code == 0


def test_twist_and_gauge():
    code, data = run_json("twist", "--nu", "1/3*t^-1+2*t^-2", "--apply-to", "1")
    assert code == 0 and data["covariant"] is True
    code, data = run_json(
        "gauge", "--nu", '[[0,["1/2"]]]', "--gamma-check", "2", "--unit", "1:1+t"
    )
    assert data["class_after"]["residue"] == ["5/2"]
    assert data["class_after"]["residue_class"] == ["1/2"]


def test_locality_negative_control():
    code, data = run_json("locality", "--g1", "1", "--g2", "-1", "--N", "1")
    assert data["zero"] is False and data["witness"] is not None
    code, data = run_json("locality", "--g1", "1", "--g2", "-1")
    assert data["N"] == 2 and data["zero"] is True


def test_verify_forced_small_n_fails():
    code, data = run_json("verify", "locality", "--n-shift", "-1")
    assert code == 1
    main_prop = data["suites"]["locality"][0]
    assert main_prop["passed"] is False and main_prop["counterexample"]


def test_verify_symbol_passes():
    code, data = run_json("verify", "symbol", "--cases", "30")
    assert code == 0 and data["seed"] == 0


def test_exit_codes(capsys):
    assert run("symbol", "0", "t")[0] == 2
    assert run("lattice", "info", "--gram", "[[1,2],[3,4]]")[0] == 2
    assert run("symbol", "1+t+e*t^-1", "t", "--series-trunc", "1")[0] == 3
    assert run("state", "apply", "--op", "h:1:-3", "--hard-cutoff", "2")[0] == 3
    with pytest.raises(SystemExit) as info:
        run("lattice", "info", "--bogus")
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "job.toml"
    cfg.write_text('[lattice]\ngram = [[2,1],[1,2]]\n[truncation]\ncutoff = 3\n')
    code, data = run_json("lattice", "info", "--config", str(cfg))
    assert data["coker"] == [3]
    code, data = run_json("lattice", "info", "--config", str(cfg), "--gram", "[[2]]")
    assert data["coker"] == [2]
    js = tmp_path / "job.json"
    js.write_text(json.dumps({"lattice": {"gram": [[1]]}, "format": "text"}))
    code, text = run("lattice", "info", "--config", str(js))
    assert code == 0
    with pytest.raises(json.JSONDecodeError):
        json.loads(text)


def test_text_format():
    code, text = run("ope", "--g1", "1", "--g2", "1", "--format", "text")
    assert code == 0 and "pole_order" in text


def test_deterministic_output():
    args = ("verify", "spectral", "--cases", "10", "--seed", "4")
    assert run(*args) == run(*args)
