import csv
import io
import os

import pytest

from entqfi import cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def as_dict(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


def test_bound_prints_key_value_lines(capsys):
    code, out, _ = run(["bound", "--family", "schmidt", "--measure", "negativity",
                        "--param", "eps=0.6"], capsys)
    assert code == 0
    rec = as_dict(out)
    assert float(rec["varBound"]) == pytest.approx(0.64)
    assert float(rec["Q"]) == pytest.approx(0.5625)


def test_bound_twin_beam(capsys):
    code, out, _ = run(["bound", "--family", "twinBeam", "--measure", "dtilde",
                        "--param", "d=0.2", "--delta", "0.1", "--delta", "0.05"], capsys)
    rec = as_dict(out)
    assert code == 0
    assert float(rec["H"]) == pytest.approx(25)
    assert float(rec["Q"]) == pytest.approx(1)
    assert float(rec["Mdelta_0.05"]) == pytest.approx(3600)


def test_domain_violation_names_parameter(capsys):
    code, _, err = run(["bound", "--family", "schmidt", "--param", "q=1.5"], capsys)
    assert code == 1
    assert "invalid parameter q" in err


@pytest.mark.parametrize("argv", [
    ["bound"],
    ["bound", "--family", "schmidt", "--param", "q"],
    ["bound", "--family", "schmidt", "--param", "q=abc"],
    ["bound", "--family", "nosuch", "--param", "q=0.5"],
    ["sweep", "--family", "werner", "--param", "q=0.5"],
    ["sweep", "--family", "werner", "--param", "q=0.5", "--sweep", "eps:0.5:0.5:2"],
    ["simulate", "--family", "werner", "--param", "p=0.5", "--param", "q=0.5"],
    ["bound", "--family", "schmidt", "--branch", "middle"],
    ["frobnicate"],
])
def test_validation_errors_exit_one(argv, capsys):
    # argparse rejections leave through SystemExit, the rest through a return code
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# Schmidt run\nfamily = schmidt\nmeasure = negativity\n"
                   "eps = 0.6   # measure value\ndelta = 0.1, 0.2\n")
    code, out, _ = run(["bound", "--config", str(cfg)], capsys)
    rec = as_dict(out)
    assert code == 0
    assert float(rec["varBound"]) == pytest.approx(0.64)
    assert "Mdelta_0.2" in rec
    code, out, _ = run(["bound", "--config", str(cfg), "--param", "eps=0.8", "--delta", "0.5"],
                       capsys)
    rec = as_dict(out)
    assert float(rec["varBound"]) == pytest.approx(0.36)
    assert "Mdelta_0.5" in rec and "Mdelta_0.2" not in rec


def test_malformed_config_line(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("family schmidt\n")
    code, _, err = run(["bound", "--config", str(cfg)], capsys)
    assert code == 1
    assert "bad.cfg:1" in err


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "werner.csv"
    code, _, _ = run(["sweep", "--family", "werner", "--param", "q=0.5",
                      "--sweep", "eps:0.01:1:20", "--out", str(out)], capsys)
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 20
    assert rows[-1]["Q"] == "inf" and rows[-1]["status"] == "divergent"
    assert all(r["status"] == "ok" for r in rows[:-1])


def test_sweep_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / f"s{i}.csv" for i in range(2)]
    for p in paths:
        run(["sweep", "--family", "horodecki", "--branch", "lower", "--delta", "0.1",
             "--sweep", "a:0.01:0.3:12", "--out", str(p)], capsys)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_unwritable_output_path(tmp_path, capsys):
    target = tmp_path / "missing" / "dir" / "out.csv"
    code, _, err = run(["sweep", "--family", "werner", "--param", "q=0.5",
                        "--sweep", "eps:0.1:0.9:3", "--out", str(target)], capsys)
    assert code == 1
    assert not os.path.exists(target)
    assert err


def test_verify_exit_codes(monkeypatch, capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    assert "suites passed" in out

    from entqfi import families
    original = families.closed_form_qfi

    def perturbed(*args, **kwargs):
        return original(*args, **kwargs) * (1 + 1e-3)

    monkeypatch.setattr(families, "closed_form_qfi", perturbed)
    code, out, _ = run(["verify"], capsys)
    assert code == 2
    assert "FAIL" in out


def read_simulation(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


def test_simulate_ratio_near_one(tmp_path, capsys):
    out = tmp_path / "sim.csv"
    code, _, _ = run(["simulate", "--family", "schmidt", "--param", "q=0.5",
                      "--samples", "100000", "--seed", "3", "--out", str(out)], capsys)
    assert code == 0
    (row,) = read_simulation(out)
    assert 0.95 <= float(row["ratio"]) <= 1.05
    assert set(["M", "empiricalVar", "crb", "ratio"]) <= set(row)


def test_simulate_weak_entanglement_needs_many_runs(tmp_path, capsys):
    strong, weak = tmp_path / "strong.csv", tmp_path / "weak.csv"
    run(["simulate", "--family", "schmidt", "--param", "q=0.5", "--samples", "20000",
         "--seed", "1", "--out", str(strong)], capsys)
    run(["simulate", "--family", "schmidt", "--param", "q=0.01", "--samples", "20000",
         "--seed", "1", "--out", str(weak)], capsys)
    (s,), (w,) = read_simulation(strong), read_simulation(weak)
    assert abs(float(w["ratio"]) - 1) < 0.1
    assert float(w["Q"]) < 0.02
    assert float(w["Mdelta_0.1"]) > 50 * float(s["Mdelta_0.1"])


def test_simulate_is_reproducible(tmp_path, capsys):
    paths = [tmp_path / f"sim{i}.csv" for i in range(2)]
    for p in paths:
        run(["simulate", "--family", "horodecki", "--param", "a=0.4", "--seed", "11",
             "--samples", "1000", "--samples", "5000", "--out", str(p)], capsys)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert len(read_simulation(paths[0])) == 2


def test_simulate_rejects_too_few_samples(capsys):
    code, _, _ = run(["simulate", "--family", "schmidt", "--param", "q=0.5",
                      "--samples", "10"], capsys)
    assert code == 1
