import csv
import io
import json
import shlex

import pytest

from zeromodes import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def header(text, key):
    for line in text.splitlines():
        if line.startswith(f"# {key}: "):
            return line[len(f"# {key}: "):]
    raise KeyError(key)


def test_spectrum_worked_point(capsys):
    code, out, _ = run(capsys, "spectrum", "--lambda", "4", "--mu", "1")
    assert code == 0
    rows = table(out)
    assert list(rows[0]) == ["n", "k_y", "kappa", "regime"]
    assert [float(r["k_y"]) for r in rows] == pytest.approx(
        [3.6400549, 2.6925824, 1.8027756, 1.1180340], abs=1e-7)
    assert out.splitlines()[0] == "# schema_version: 1"


def test_spectrum_empty_and_hole(capsys):
    code, out, _ = run(capsys, "spectrum", "--lambda", "0.4", "--mu", "1")
    assert code == 0 and table(out) == []
    assert "n,k_y,kappa,regime" in out
    code, out, _ = run(capsys, "spectrum", "--lambda", "-4", "--mu", "1")
    rows = table(out)
    assert len(rows) == 4 and {r["regime"] for r in rows} == {"HoleBound"}


def test_spectrum_invalid_lambda(capsys):
    code, _, err = run(capsys, "spectrum", "--lambda", "0", "--mu", "1")
    assert code == 1
    assert "Invalid" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["spectrum", "--mu", "1"])
    assert exc.value.code == 1


def test_wavefunction(capsys):
    base = ["wavefunction", "--lambda", "4", "--mu", "1", "--n", "0",
            "--x-min", "-2", "--x-max", "2", "--points", "5"]
    code, out, _ = run(capsys, *base)
    assert code == 0
    rows = table(out)
    assert list(rows[0]) == ["x", "re_psiA", "im_psiA", "re_psiB", "im_psiB"]
    mid = rows[2]
    assert float(mid["x"]) == 0
    assert complex(float(mid["re_psiA"]) + float(mid["re_psiB"]),
                   float(mid["im_psiA"]) + float(mid["im_psiB"])) == pytest.approx(1, abs=1e-11)
    _, out_minus, _ = run(capsys, *base, "--ky-sign", "-")
    for p, m in zip(rows, table(out_minus)):
        assert (p["re_psiA"], p["im_psiA"]) == (m["re_psiB"], m["im_psiB"])
        assert (p["re_psiB"], p["im_psiB"]) == (m["re_psiA"], m["im_psiA"])


def test_wavefunction_normalized(capsys):
    code, out, _ = run(capsys, "wavefunction", "--lambda", "4", "--mu", "1", "--n", "1",
                       "--x-min", "-25", "--x-max", "25", "--points", "5001", "--normalize")
    assert code == 0
    rows = table(out)
    xs = [float(r["x"]) for r in rows]
    dens = [sum(float(r[k]) ** 2 for k in ("re_psiA", "im_psiA", "re_psiB", "im_psiB")) for r in rows]
    integral = sum((dens[i] + dens[i + 1]) / 2 * (xs[i + 1] - xs[i]) for i in range(len(xs) - 1))
    assert integral == pytest.approx(1.0, rel=1e-9)
    assert header(out, "normalized") == "true"


def test_wavefunction_bad_n(capsys):
    code, _, err = run(capsys, "wavefunction", "--lambda", "4", "--mu", "1", "--n", "4")
    assert code == 1
    assert "n must satisfy n < 3.5" in err


def test_potential(capsys):
    code, out, _ = run(capsys, "potential", "--lambda", "4", "--mu", "1",
                       "--x-min", "-30", "--x-max", "30", "--points", "7")
    assert code == 0
    rows = table(out)
    assert list(rows[0]) == ["x", "V", "V_tilde"]
    assert [float(v) for v in rows[3].values()] == [0, -4, -4]
    assert float(rows[-1]["V"]) == pytest.approx(1, abs=1e-12)
    assert float(rows[-1]["V_tilde"]) == pytest.approx(0, abs=1e-12)


def test_scan_crosses_boundaries(capsys):
    code, out, _ = run(capsys, "scan", "--lambda-range", "-1", "1", "--lambda-steps", "9")
    assert code == 0
    rows = table(out)
    assert [float(r["lambda"]) for r in rows] == [-1, -0.75, -0.5, -0.25, 0, 0.25, 0.5, 0.75, 1]
    assert [int(r["mode_count"]) for r in rows] == [1, 1, 0, 0, 0, 0, 0, 1, 1]
    assert rows[4]["regime"] == "Invalid"
    assert rows[2]["ky_min"] == ""


def test_scan_mode_count_independent_of_mu(capsys):
    _, out, _ = run(capsys, "scan", "--lambda-range", "4", "4", "--lambda-steps", "1",
                    "--mu-range", "-2", "3", "--mu-steps", "6")
    assert {int(r["mode_count"]) for r in table(out)} == {4}


def test_scan_with_oracle(capsys):
    _, out, _ = run(capsys, "scan", "--lambda-range", "0.3", "2.5", "--lambda-steps", "3",
                    "--mu-range", "0.5", "0.5", "--oracle")
    rows = table(out)
    assert [r["mode_count"] for r in rows] == [r["oracle_count"] for r in rows] == ["0", "1", "2"]


def test_units(capsys):
    assert cli.convert_units(0.0, 3.0) == (0.0, 0.0)
    energy, ky = cli.convert_units(1.0, 1.0)
    assert ky == 1.0 and energy == pytest.approx(658.2, abs=0.05)
    assert cli.convert_units(3.6400549, 10.0)[1] == pytest.approx(0.36400549)
    with pytest.raises(ValueError):
        cli.convert_units(1.0, 0.0)
    code, out, _ = run(capsys, "units", "--ky", "1", "--length-scale-nm", "1")
    assert code == 0 and float(table(out)[0]["E_meV"]) == pytest.approx(658.2119569)
    code, _, _ = run(capsys, "units", "--ky", "1", "--length-scale-nm", "-1")
    assert code == 1


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--lambda", "4", "--mu", "1", "--profile", "strict")
    assert code == 0
    rows = table(out)
    assert all(r["status"] == "PASS" for r in rows)
    assert sum("Dirac residual (+ky)" in r["check"] for r in rows) == 4


def test_verify_empty_spectrum(capsys):
    code, out, _ = run(capsys, "verify", "--lambda", "0.4", "--mu", "1", "--profile", "fast")
    assert code == 0
    assert any(r["check"] == "empty-spectrum agreement" and r["status"] == "PASS" for r in table(out))


def test_verify_pt_branch(capsys):
    code, out, _ = run(capsys, "verify", "--lambda", "1", "--mu", "0", "--profile", "fast")
    assert code == 0
    assert any(r["check"].startswith("PT symmetry conj") and r["status"] == "PASS" for r in table(out))


def test_verify_failure_path(capsys, tmp_path):
    report = tmp_path / "report.csv"
    code, _, _ = run(capsys, "verify", "--lambda", "1", "--mu", "0", "--profile", "fast",
                     "--scale-tolerances", "1e-20", "-o", str(report))
    assert code == 2
    text = report.read_text()
    assert "FAIL" in text and header(text, "all_passed") == "false"


@pytest.mark.parametrize("argv", [
    ["spectrum", "--lambda", "-2.5", "--mu", "0.5"],
    ["wavefunction", "--lambda", "2.5", "--mu", "-1", "--n", "1", "--ky-sign", "-", "--points", "21", "--normalize"],
    ["potential", "--lambda", "4", "--mu", "1", "--points", "11", "--format", "json"],
    ["scan", "--lambda-range", "-2", "2", "--lambda-steps", "5", "--mu-range", "0", "1", "--mu-steps", "2"],
    ["units", "--ky", "3.6400549", "--length-scale-nm", "10"],
])
def test_round_trip_from_header(capsys, argv):
    _, first, _ = run(capsys, *argv)
    if first.startswith("{"):
        echoed = json.loads(first)["argv"]
    else:
        echoed = shlex.split(header(first, "argv"))
    _, second, _ = run(capsys, *echoed)
    assert second == first


def test_json_mirrors_csv(capsys):
    _, text, _ = run(capsys, "spectrum", "--lambda", "4", "--mu", "1", "--format", "json")
    doc = json.loads(text)
    assert doc["schema_version"] == 1 and doc["command"] == "spectrum"
    assert doc["params"] == {"lambda": 4.0, "mu": 1.0, "regime": "ElectronBound"}
    assert doc["columns"] == ["n", "k_y", "kappa", "regime"]
    assert doc["rows"][0] == [0, 3.64005494464, 3.5, "ElectronBound"]
