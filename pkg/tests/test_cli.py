import json

import pytest

from purikit.bell_core import XState, random_density
from purikit import cli
from purikit.cli import EXIT_CHECK_FAILED, EXIT_DEGENERATE, EXIT_INVALID, EXIT_OK, main
from purikit.errors import DegenerateNormalization
from purikit.serialization import dumps, matrix_to_json, x_to_json


@pytest.fixture
def write_state(tmp_path):
    def write(obj, name="state.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else dumps(obj))
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_iterate(capsys, write_state):
    path = write_state(x_to_json(XState(0.7, 0.1, 0.1, 0.1)))
    code, out, _ = run(capsys, "iterate", "--state", path, "--steps", "4")
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data) == 4
    assert data[-1]["x"]["r"][0] > data[0]["x"]["r"][0]


def test_iterate_general_state(capsys, write_state):
    path = write_state(matrix_to_json(random_density(3)))
    code, out, _ = run(capsys, "iterate", "--state", path, "--steps", "2")
    assert code == EXIT_OK
    assert len(json.loads(out)) == 2


def test_degenerate_exit_code(capsys, write_state, monkeypatch):
    # N >= 1/2 for any unit-trace input, so the failure is injected
    def fail(*args):
        raise DegenerateNormalization(0.0, step=2)

    monkeypatch.setattr(cli, "iterate", fail)
    path = write_state(x_to_json(XState(0.7, 0.1, 0.1, 0.1)))
    code, _, err = run(capsys, "iterate", "--state", path, "--steps", "3")
    assert code == EXIT_DEGENERATE
    assert "error" in err


def test_invalid_state_exit_code(capsys, write_state):
    path = write_state('{"x": {"r": [0.9, 0.9, 0, 0]}}')
    code, _, err = run(capsys, "iterate", "--state", path)
    assert code == EXIT_INVALID
    assert "trace" in err


def test_parse_error_exit_code(capsys, write_state):
    path = write_state('{"x": {"r": [1, 0, 0]}}')
    code, _, err = run(capsys, "classify", "--state", path)
    assert code == EXIT_INVALID
    assert "x.r" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "measure", "--state", str(tmp_path / "absent.json"))
    assert code == EXIT_INVALID


def test_classify(capsys, write_state):
    path = write_state(x_to_json(XState(0.6, 0.2, 0.1, 0.1)))
    code, out, _ = run(capsys, "classify", "--state", path)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["verdict"] == "PurifiesPsiMinus"
    assert data["margins"]["psi_minus"]["lhs"] == pytest.approx(0.2 * 0.6)
    assert data["iteration"]["attractor"] == "PsiMinus"


def test_measure(capsys, write_state):
    path = write_state(x_to_json(XState(1, 0, 0, 0)))
    code, out, _ = run(capsys, "measure", "--state", path)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["concurrence"] == pytest.approx(1)
    assert data["max_entangled_fidelity"] == pytest.approx(1)


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--trials", "50", "--seed", "3")
    assert code == EXIT_OK
    assert out.startswith("50/50 agree")


def test_oracle_check_failure_code(capsys):
    code, out, _ = run(capsys, "oracle-check", "--trials", "5", "--tol", "-1")
    assert code == EXIT_CHECK_FAILED
    assert out.startswith("0/5 agree")


@pytest.mark.parametrize("name, param", [(1, "0.75"), (2, "0.3")])
def test_example(capsys, name, param):
    code, out, _ = run(capsys, "example", "--name", str(name), "--param", param)
    assert code == EXIT_OK
    assert json.loads(out)["pass"] is True


def test_example_out_of_range(capsys):
    code, _, err = run(capsys, "example", "--name", "1", "--param", "0.4")
    assert code == EXIT_INVALID
    assert "(0.5, 1]" in err


def test_fixed_points_table(capsys):
    code, out, _ = run(capsys, "fixed-points", "--grid", "8")
    assert code == EXIT_OK
    assert out.count("stable") == 9
    assert out.count("unstable") == 6


def test_regions_csv_with_manifest(capsys, tmp_path):
    out_path = tmp_path / "regions.csv"
    code, _, err = run(capsys, "regions", "--family", "dephasing1", "--eta-a", "0.4",
                       "--eta-b", "0.1", "--grid", "8", "--seed", "11", "--out", str(out_path))
    assert code == EXIT_OK
    assert "none=" in err
    assert out_path.read_text().startswith("r1,r2,r3,label\n")
    m = json.loads((tmp_path / "regions.csv.manifest.json").read_text())
    assert m["command"] == "regions" and m["seed"] == 11
    assert m["config"]["eta"] == [0.4, 0.1]


def test_seed_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PURIKIT_SEED", "5")
    out_path = tmp_path / "check.txt"
    run(capsys, "fixed-points", "--grid", "4", "--out", str(out_path))
    assert json.loads((tmp_path / "check.txt.manifest.json").read_text())["seed"] == 5


def test_output_is_deterministic(capsys, tmp_path):
    texts = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        run(capsys, "regions", "--grid", "10", "--seed", "2", "--out", str(path))
        texts.append(path.read_bytes())
    assert texts[0] == texts[1]


def test_oracle_check_seed_determinism(capsys):
    _, a, _ = run(capsys, "oracle-check", "--trials", "20", "--seed", "9")
    _, b, _ = run(capsys, "oracle-check", "--trials", "20", "--seed", "9")
    assert a == b
