import csv
import json
import math

import pytest

from orlicz_lab import cli, suites
from orlicz_lab.errors import ConfigError, CostGuardError
from orlicz_lab.field import load_field
from orlicz_lab.report import CSV_COLUMNS, VerificationReport, strip_timestamp
from orlicz_lab.suites import SUITES, SuiteConfig, resolve, run_suite


def test_report_schema(tmp_path):
    rep = VerificationReport("demo", {"n": 1, "N": 64, "L": 4.0})
    assert rep.add_row("a", 64, {"x": 1}, 1.0, 2.0) == 0.5
    assert rep.add_row("b", 64, {"x": 2}, 0.0, 0.0) == 0.0
    rep.constants["C"] = 1.5
    rep.check("ok", True)
    d = rep.to_dict()
    assert set(d) == {"suite", "config", "rows", "summary", "pass", "environment"}
    assert set(d["summary"]) >= {"max_ratio", "constants", "stability"}
    assert d["pass"] and d["summary"]["max_ratio"] == 0.5
    assert "timestamp" in d["environment"] and "timestamp" not in strip_timestamp(d)["environment"]
    json_path, csv_path = rep.write(tmp_path)
    assert json.loads(json_path.read_text())["suite"] == "demo"
    with csv_path.open() as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1][:3] == ["demo", "a", "64"] and json.loads(rows[1][3]) == {"x": 1}
    assert float(rows[1][6]) == 0.5


def test_report_fails_on_bad_rows_or_checks():
    rep = VerificationReport("demo", {})
    rep.add_row("inf", 0, {}, 1.0, 0.0)
    assert not rep.rows_finite and not rep.passed
    assert json.loads(rep.to_json())["rows"][0]["ratio"] == "inf"
    rep = VerificationReport("demo", {})
    rep.check("bad", False)
    assert not rep.passed


def test_young_axioms_example():
    rep = run_suite(SuiteConfig("young-axioms", young="power:p=2"))
    assert rep.passed
    assert rep.constants["young_violation"] <= 1e-9


def test_bessel_kernel_example():
    rep = run_suite(SuiteConfig("bessel-kernel", s=0.5, n=1))
    assert rep.passed
    masses = [r for r in rep.rows if r["case"] == "mass"]
    assert masses and all(abs(r["lhs"] - r["rhs"]) <= 5e-6 for r in masses)
    assert abs(rep.constants["modulus_slope"] - 0.5) <= 0.05


def test_determinism(tmp_path):
    cfg = SuiteConfig("orlicz-norms", N=1024, family_size=5, seed=11)
    a = strip_timestamp(run_suite(cfg).to_dict())
    b = strip_timestamp(run_suite(cfg).to_dict())
    assert a == b
    threaded = strip_timestamp(run_suite(SuiteConfig("orlicz-norms", N=1024, family_size=5, seed=11, threads=2)).to_dict())
    assert threaded["rows"] == a["rows"]


@pytest.mark.parametrize(
    "cfg",
    [
        SuiteConfig("nope"),
        SuiteConfig("embedding-s1", s=0.6, s2=0.6),
        SuiteConfig("embedding-s2", s=0.8, s2=0.5),
        SuiteConfig("young-axioms", young="power:p=0.5"),
        SuiteConfig("young-axioms", N="many"),
        SuiteConfig("orlicz-norms", family="cubes"),
        SuiteConfig("strauss", n=1),
        SuiteConfig("lp-equivalence", K=20),
        SuiteConfig("lp-equivalence", q=1.0),
        SuiteConfig("calderon-s1", quadrature={"rings": 3}),
        SuiteConfig("orlicz-norms", threads=0),
    ],
)
def test_config_errors(cfg):
    with pytest.raises(ConfigError):
        resolve(cfg)


@pytest.mark.parametrize(
    "cfg",
    [
        SuiteConfig("increment-kernel", N=256),
        SuiteConfig("atoms", I_max=12),
        SuiteConfig("young-axioms", n=3, N=256),
    ],
)
def test_resource_guards(cfg):
    with pytest.raises(CostGuardError):
        resolve(cfg)


def test_defaults_cover_every_suite():
    for name in SUITES:
        cfg = resolve(SuiteConfig(name))
        assert cfg.N is not None and cfg.young is not None


def test_cli_list_suites(capsys):
    assert cli.main(["list-suites"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in SUITES)


def test_cli_run_pass(tmp_path, capsys):
    code = cli.main(["run", "young-axioms", "--young", "power:p=3", "--out", str(tmp_path)])
    assert code == 0
    assert "PASS" in capsys.readouterr().out
    data = json.loads((tmp_path / "young-axioms.json").read_text())
    assert data["pass"] and data["config"]["young"] == "power:p=3"
    assert (tmp_path / "young-axioms.csv").exists()


def test_cli_run_fail(tmp_path, monkeypatch):
    def failing(cfg, rep):
        rep.add_row("x", 0, {}, 2.0, 1.0)
        rep.check("forced", False)

    monkeypatch.setitem(suites._RUNNERS, "young-axioms", failing)
    assert cli.main(["run", "young-axioms", "--out", str(tmp_path)]) == 1
    assert json.loads((tmp_path / "young-axioms.json").read_text())["pass"] is False


def test_cli_exit_codes(tmp_path):
    out = str(tmp_path)
    assert cli.main(["run", "embedding-s1", "--s", "0.8", "--s2", "0.5", "--out", out]) == 2
    assert cli.main(["run", "unknown-suite", "--out", out]) == 2
    assert cli.main(["run", "increment-kernel", "--grid", "256", "--out", out]) == 3
    for argv in (["--family", "gaussians:x"], ["--grid", "abc"], []):
        with pytest.raises(SystemExit) as exc:
            cli.main(["run", "young-axioms"] + argv + (["--out", out] if argv else []))
        assert exc.value.code == 2


def test_cli_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"young": "power:p=1.5", "N": 32, "L": 4.0}))
    assert cli.main(["run", "young-axioms", "--config", str(cfg), "--grid", "64", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "young-axioms.json").read_text())
    assert (data["config"]["young"], data["config"]["N"], data["config"]["L"]) == ("power:p=1.5", 64, 4.0)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": 1}))
    assert cli.main(["run", "young-axioms", "--config", str(bad), "--out", str(tmp_path)]) == 2
    bad.write_text("[1, 2]")
    assert cli.main(["run", "young-axioms", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert cli.main(["run", "young-axioms", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2


def test_cli_quadrature_flags(tmp_path):
    args = ["run", "embedding-s1", "--grid", "512", "--family", "gaussians:3", "--ring-count", "16", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    data = json.loads((tmp_path / "embedding-s1.json").read_text())
    assert data["config"]["quadrature"] == {"ring_count": 16}
    assert data["config"]["family_size"] == 3


def test_cli_kernel_export(tmp_path):
    assert cli.main(["kernel", "--s", "0.5", "--grid", "256", "--extent", "16", "--out", str(tmp_path / "g")]) == 0
    k = load_field(tmp_path / "g.json")
    assert k.grid.N == 256
    assert math.isclose(float(k.samples.sum() * k.grid.h), 1.0, rel_tol=1e-5)
    assert cli.main(["kernel", "--s", "0", "--out", str(tmp_path / "bad")]) == 2
