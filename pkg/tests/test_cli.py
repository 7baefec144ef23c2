import csv
import io
import json

import numpy as np
import pytest

from zsspec.classify import SpectrumReport
from zsspec.cli import complex_str, main, parse_complex
from zsspec.gradients import GradientField
from zsspec.potential import Potential, random_focusing


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, p in {
        "zero": Potential.zero(),
        "one": Potential.constant(1),
        "pi": Potential.constant(np.pi),
        "half": Potential.constant(0.5),
        "rand": random_focusing(np.random.default_rng(2), 2, 0.4),
        "rand2": random_focusing(np.random.default_rng(3), 2, 0.4),
    }.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(p.to_json()))
        out[name] = str(path)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_complex_formats():
    assert complex_str(1 - 2j) == "1-2j"
    assert complex(complex_str(0.1 + 3e-20j)) == 0.1 + 3e-20j
    assert parse_complex("1.5,-2") == 1.5 - 2j


def test_spectrum_zero(files, capsys):
    code, out = run(capsys, "spectrum", "--potential", files["zero"], "--n-scan", "3")
    assert code == 0
    rep = SpectrumReport.from_json(json.loads(out))
    for r in rep.periodic():
        n = round(r.value.real / np.pi)
        assert abs(r.value - n * np.pi) < 1e-7 and r.m_alg == 2 and r.m_geom == 2


def test_spectrum_verdicts(files, capsys):
    _, out = run(capsys, "spectrum", "--potential", files["one"], "--n-scan", "3")
    v = json.loads(out)["verdicts"]
    assert v["standard"] and v["dirichlet_simple"]
    _, out = run(capsys, "spectrum", "--potential", files["pi"], "--n-scan", "3")
    assert json.loads(out)["verdicts"]["standard"] is False


def test_spectrum_csv(files, capsys):
    code, out = run(capsys, "spectrum", "--potential", files["one"], "--n-scan", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert set(rows[0]) == {"value", "m_alg", "m_geom", "parity", "is_real", "partner", "disk"}
    assert all(isinstance(complex(r["value"]), complex) for r in rows)


def test_spectrum_is_byte_identical(files, capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["spectrum", "--potential", files["rand"], "--n-scan", "3", "--out", str(a)]) == 0
    assert main(["spectrum", "--potential", files["rand"], "--n-scan", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = SpectrumReport.from_json(json.loads(a.read_text()))
    assert rep.to_json()["records"] == json.loads(a.read_text())["records"]


def test_spectrum_layout_failure_exit(files, capsys):
    code, _ = run(capsys, "spectrum", "--potential", files["one"], "--R", "0", "--n-scan", "3")
    assert code == 2


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["spectrum", "--potential", str(bad)]) == 1
    assert main(["spectrum", "--potential", str(tmp_path / "missing.json")]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--format", "xml", "--potential", str(bad)])
    assert exc.value.code == 1
    assert main(["gradcheck", "--potential", str(bad), "--lambda", "oops"]) == 1


def test_gradcheck_kinds(files, capsys):
    for which in ("floquet", "chiD"):
        code, out = run(capsys, "gradcheck", "--potential", files["rand"], "--lambda", "0.7,0.2", "--kind", which, "--directions", "3")
        assert code == 0
        data = json.loads(out)
        assert data["ok"] and max(c["rel_error"] for c in data["checks"]) < 1e-4


def test_gradcheck_precondition_exit(files, capsys):
    code, _ = run(capsys, "gradcheck", "--potential", files["zero"], "--lambda", f"{np.pi},0", "--kind", "delta")
    assert code == 4


def test_gradcheck_gradient_roundtrip(files, capsys):
    code, out = run(
        capsys, "gradcheck", "--potential", files["rand"], "--lambda", "0.3,0", "--kind", "chiD", "--directions", "2", "--with-gradient"
    )
    assert code == 0
    data = json.loads(out)
    g = GradientField.from_json(data["gradients"]["chiD"])
    assert g.to_json() == data["gradients"]["chiD"]


def test_discriminant_command(files, capsys):
    code, out = run(capsys, "discriminant", "--potential", files["half"])
    assert code == 0
    data = json.loads(out)
    assert set(data) >= {"R", "which", "coeffs", "discriminant", "indicator"}
    assert data["indicator"] > 1e-3
    code, out = run(capsys, "discriminant", "--potential", files["pi"], "--R", "1")
    assert json.loads(out)["indicator"] < 1e-8


def test_oracle_compare(capsys):
    code, out = run(capsys, "oracle-compare", "--a", "1,0", "--k", "1", "--n-scan", "3")
    assert code == 0
    data = json.loads(out)
    assert data["ok"] and all(row["ok"] for row in data["diffs"])


def test_deform_deterministic(files, capsys, tmp_path):
    argv = ["deform", "--potential", files["rand"], "--end", files["rand2"], "--samples", "3", "--n-scan", "2", "--seed", "4"]
    code, first = run(capsys, *argv)
    assert code == 0
    _, second = run(capsys, *argv)
    assert first == second
    data = json.loads(first)
    for s in data["deformed"]["samples"]:
        Potential.from_json(s["potential"])
    csv_path = tmp_path / "path.csv"
    assert main(argv + ["--csv", str(csv_path)]) == 0
    header = csv_path.read_text().splitlines()[0]
    assert header == "t,M_D,M_p,standard,R"


def test_tolerance_override_validation(files, capsys):
    assert main(["spectrum", "--potential", files["zero"], "--tol-geometric", "-1"]) == 1
