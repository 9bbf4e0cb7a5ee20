import json

import pytest
from click.testing import CliRunner

from twgklo import cli
from twgklo.report import CheckReport


def parse(d):
    return cli.parse_config(json.dumps(d))


def strip_timing(report):
    report = json.loads(json.dumps(report))
    report.pop("elapsed_ms")
    for s in report["suites"]:
        for c in s["cases"]:
            c.pop("ms")
    return report


# parse_config

def test_valid_config():
    cfg = parse({"n": 2, "lambda": [2], "mu": [0], "suites": ["gklo-defining"]})
    assert cfg.shape().m == (1,)
    assert cfg.N == 4 and cfg.roots == "symbolic" and cfg.parallelism >= 1


def test_defaults():
    cfg = parse({"n": 3, "lambda": [1, 1]})
    assert cfg.mu == [0, 0] and cfg.suites == list(cli.SUITES)


@pytest.mark.parametrize("doc,msg", [
    ({"n": 2, "lambda": [0], "mu": [1]}, "mu not ≤ lambda"),
    ({}, "n required"),
    ({"n": 2}, "lambda required"),
    ({"n": 1, "lambda": []}, "n must be"),
    ({"n": 2, "lambda": [-2], "mu": [0]}, "negative"),
    ({"n": 3, "lambda": [2]}, "n-1"),
    ({"n": 2, "lambda": [2], "N": 0}, "N must be"),
    ({"n": 2, "lambda": [2], "suites": ["bogus"]}, "suites"),
    ({"n": 2, "lambda": [2], "colour": 1}, "unknown keys"),
    ({"n": 2, "lambda": [2], "roots": [[1]]}, "roots"),
    ({"n": 2, "lambda": [2], "roots": [["x", 1]]}, "rationals"),
    ({"n": 2, "lambda": [2], "parallelism": 0}, "parallelism"),
])
def test_config_errors(doc, msg):
    with pytest.raises(cli.ConfigError, match=msg):
        parse(doc)


def test_malformed_document():
    with pytest.raises(cli.ConfigError, match="malformed"):
        cli.parse_config("{n: 2")
    with pytest.raises(cli.ConfigError, match="object"):
        cli.parse_config("[1, 2]")


def test_rational_roots_accepted():
    cfg = parse({"n": 2, "lambda": [2], "roots": [["1/2", 3]]})
    assert cfg.echo()["roots"] == [["1/2", "3"]]


# run_and_report

def test_default_config_n2_exits_zero():
    cfg = parse({"n": 2, "lambda": [2], "parallelism": 1})
    report, code = cli.run_and_report(cfg)
    assert code == 0
    assert report["summary"]["fail"] == 0
    assert report["summary"]["expected_fail"] == 3
    assert [s["id"] for s in report["suites"]] == list(cli.SUITES)


def test_negative_controls_text():
    cfg = parse({"n": 2, "lambda": [2], "suites": ["negative-controls"], "parallelism": 1})
    report, code = cli.run_and_report(cfg)
    assert code == 0
    text = cli.format_text(report)
    assert text.count("expected-fail observed") == 3


def test_poisson_rtt_n2():
    cfg = parse({"n": 2, "lambda": [2], "N": 4, "suites": ["poisson-rtt"], "parallelism": 1})
    report, code = cli.run_and_report(cfg)
    assert code == 0 and report["summary"]["pass"] > 0


def test_shifted_shape_skips_mu_zero_suites():
    cfg = parse({"n": 3, "lambda": [2, 2], "mu": [1, 1], "suites": ["kernel", "ideal-closure"],
                 "parallelism": 1})
    report, code = cli.run_and_report(cfg)
    assert code == 0 and report["summary"]["skipped"] == 2


def test_unexpected_failure_exits_one(monkeypatch):
    bad = CheckReport("h-h", (1, 1), "x", "fail", "beta[0]: 1", 0.0)
    monkeypatch.setattr(cli, "run_suite_id", lambda cfg, sid: [bad])
    report, code = cli.run_and_report(parse({"n": 2, "lambda": [2], "suites": ["central"]}))
    assert code == 1 and report["suites"][0]["cases"][0]["witness"] == "beta[0]: 1"


def test_report_is_deterministic():
    cfg = parse({"n": 3, "lambda": [1, 1], "N": 3,
                 "suites": ["gklo-defining", "gklo-aux", "semiclassical", "dirac"], "parallelism": 2})
    r1, _ = cli.run_and_report(cfg)
    cfg.parallelism = 1
    r2, _ = cli.run_and_report(cfg)
    a = json.dumps(strip_timing(r1), sort_keys=True)
    b = json.dumps(strip_timing(r2), sort_keys=True)
    assert a == b


# command line

def test_cli_json_to_file(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"n": 2, "lambda": [2], "suites": ["central", "kernel"]}))
    out = tmp_path / "r.json"
    res = CliRunner().invoke(cli.main, ["--config", str(conf), "--format", "json", "--out", str(out),
                                        "--jobs", "1"])
    assert res.exit_code == 0, res.output
    rep = json.loads(out.read_text())
    assert set(rep) == {"config", "suites", "summary", "elapsed_ms"}
    assert set(rep["summary"]) >= {"pass", "fail", "expected_fail"}
    case = rep["suites"][0]["cases"][0]
    assert set(case) >= {"relation", "indices", "status", "witness", "ms"}


def test_cli_stdin_and_suite_override():
    res = CliRunner().invoke(cli.main, ["--config", "-", "--suite", "desnanot", "--jobs", "1"],
                             input='{"n": 3, "lambda": [1, 1]}')
    assert res.exit_code == 0, res.output
    assert "[desnanot]" in res.output and "[gklo-defining]" not in res.output
    assert "summary:" in res.output


def test_cli_config_error_exit_two():
    res = CliRunner().invoke(cli.main, ["--config", "-"], input='{"n":2,"lambda":[0],"mu":[1]}')
    assert res.exit_code == 2
    assert "mu not" in res.output


def test_cli_missing_config():
    res = CliRunner().invoke(cli.main, [])
    assert res.exit_code == 2
