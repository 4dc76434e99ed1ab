import json

from telescoper.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_ops(capsys):
    assert run(capsys, "ops", "mul", "Dt + x1/(x1*t+1)", "Dt - x1/(x1*t+1)")[:2] == (0, "Dt^2")
    assert run(capsys, "ops", "lclm", "Dt", "Dt - 1/t")[:2] == (0, "Dt^2")
    code, out, _ = run(capsys, "ops", "rdiv", "Dt^2", "Dt", "--json")
    assert json.loads(out) == {"quotient": "Dt", "remainder": "0"}
    assert run(capsys, "ops", "gcrd", "Dt^2", "Dt - x1/(x1*t+1)")[1] == "Dt - (x1/(t*x1 + 1))"
    assert run(capsys, "ops", "transform", "Dt - 1/t", "Dt")[1] == "Dt"


def test_separable(capsys):
    code, out, _ = run(capsys, "separable", "Dt + x1/(x1*t+1)")
    assert (code, out) == (0, "not separable")
    code, out, _ = run(capsys, "separable", "Dt - x1/t")
    assert (code, out) == (2, "unknown")
    code, out, _ = run(capsys, "separable", "Dt - x1/t", "--accept-bound-negatives")
    assert code == 0 and out == "not separable"


def test_parse_error(capsys):
    code, _, err = run(capsys, "ops", "mul", "Dt +", "Dt")
    assert code == 1 and "line 1, column 5" in err


def test_telescope_and_verify(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    inst.write_text(json.dumps({"version": 1, "n": 1, "form": {"degree": 1, "terms": [{"indices": [1], "coefficient": "1/(x1*t+1)"}]}}))
    code, out, _ = run(capsys, "telescope", str(inst), "--json")
    assert code == 0 and json.loads(out)["status"] == "telescoper"
    res = tmp_path / "res.json"
    res.write_text(out)
    assert run(capsys, "verify", str(inst), str(res))[:2] == (0, "verified")
    data = json.loads(out)
    data["L"] = "Dt"
    res.write_text(json.dumps(data))
    assert run(capsys, "verify", str(inst), str(res))[:2] == (1, "rejected")
    code, out, _ = run(capsys, "closed", str(inst))
    assert code == 0 and out.startswith("L = ")


def test_bad_json_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1,\n "form": [}')
    code, _, err = run(capsys, "telescope", str(bad))
    assert code == 1 and "line 2" in err


def test_hints_file(tmp_path, capsys):
    hints = tmp_path / "hints.txt"
    hints.write_text("# right factor\nDt - t\n")
    code, out, _ = run(capsys, "separable", "(Dt - 1)*(Dt - t)", "--hints", str(hints))
    assert code == 0 and out.startswith("separable")
