"""Batch driver.

The configuration is a flat JSON object::

    {"n": 3, "lambda": [1, 1], "mu": [0, 0], "roots": "symbolic",
     "N": 4, "suites": ["gklo-defining", "poisson-rtt"], "parallelism": 4}

Only ``n`` and ``lambda`` are required.  ``mu`` defaults to zeros, ``roots``
to "symbolic" (otherwise a list with λ_i rationals per node, as numbers or
strings like "1/2"), ``N`` to 4, ``suites`` to all of them and
``parallelism`` to the number of cores.  ``jobs`` is accepted as an alias
of ``parallelism``.  Unknown keys are rejected.
"""
from __future__ import annotations

import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import click

from . import poisson as P
from . import relcheck as RC
from .gklo import GKLO, ShapeError, build_shape
from .report import CheckReport

SUITES = (
    "gklo-defining", "gklo-aux", "abcd", "kernel", "central", "semiclassical",
    "poisson-rtt", "dirac", "desnanot", "ideal-closure", "negative-controls",
)
KEYS = {"n", "lambda", "mu", "roots", "N", "suites", "parallelism", "jobs"}


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    n: int
    lam: List[int]
    mu: List[int]
    roots: object = "symbolic"
    N: int = 4
    suites: List[str] = field(default_factory=lambda: list(SUITES))
    parallelism: int = 1

    def echo(self) -> dict:
        roots = self.roots if self.roots == "symbolic" else [[str(x) for x in row] for row in self.roots]
        return {"n": self.n, "lambda": self.lam, "mu": self.mu, "roots": roots, "N": self.N,
                "suites": self.suites}

    def shape(self):
        return build_shape(self.n, self.lam, self.mu, self.roots)


def _int_list(v, name):
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ConfigError("%s must be a list of integers" % name)
    return v


def parse_config(text: str) -> JobConfig:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("malformed config: %s" % e) from None
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(d) - KEYS
    if extra:
        raise ConfigError("unknown keys: %s" % ", ".join(sorted(extra)))
    if "n" not in d:
        raise ConfigError("n required")
    n = d["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ConfigError("n must be an integer >= 2")
    if "lambda" not in d:
        raise ConfigError("lambda required")
    lam = _int_list(d["lambda"], "lambda")
    mu = _int_list(d.get("mu", [0] * (n - 1)), "mu")
    if len(lam) != n - 1 or len(mu) != n - 1:
        raise ConfigError("lambda and mu need n-1 coordinates")
    if any(x < 0 for x in lam + mu):
        raise ConfigError("negative coordinates")
    roots = d.get("roots", "symbolic")
    if roots != "symbolic":
        if not isinstance(roots, list) or len(roots) != n - 1:
            raise ConfigError("roots must be \"symbolic\" or one list per node")
        try:
            roots = [[Fraction(str(x)) for x in row] for row in roots]
        except (ValueError, TypeError, ZeroDivisionError):
            raise ConfigError("roots must be rationals") from None
    N = d.get("N", 4)
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise ConfigError("N must be an integer >= 1")
    suites = d.get("suites", list(SUITES))
    if not isinstance(suites, list) or any(s not in SUITES for s in suites):
        raise ConfigError("suites must be drawn from: %s" % ", ".join(SUITES))
    par = d.get("parallelism", d.get("jobs", os.cpu_count() or 1))
    if not isinstance(par, int) or par < 1:
        raise ConfigError("parallelism must be a positive integer")
    cfg = JobConfig(n, lam, mu, roots, N, list(suites), par)
    try:
        cfg.shape()
    except ShapeError as e:
        raise ConfigError(str(e)) from None
    return cfg


# --------------------------------------------------------------------------
# suites

def _skipped(label: str, why: str) -> CheckReport:
    return CheckReport(label, (), "", "skipped", None, 0.0, why)


def _relcheck_suite(cfg: JobConfig, tags: Sequence[str]) -> List[CheckReport]:
    S = cfg.shape()
    if any(t in RC.UNSHIFTED_ONLY for t in tags) and not S.is_unshifted:
        return [_skipped(t, "needs mu = 0") for t in tags]
    return RC.run_suite(S, tags, jobs=cfg.parallelism)


def _z_consistency(cfg: JobConfig) -> CheckReport:
    S = cfg.shape()
    G = GKLO(S)
    cases = []
    for i in range(1, S.n):
        t0 = time.perf_counter()
        d = G.A.scalar(G.z_closed(i, "u")) - G.z_from_h(i, "u")
        ok = d.is_zero()
        cases.append(CheckReport("z-consistency", (i,), S.summary(), "pass" if ok else "fail",
                                 None if ok else RC.witness_of(d), (time.perf_counter() - t0) * 1000))
    return RC._family(S, "z-consistency", cases)


def _negative_controls(cfg: JobConfig) -> List[CheckReport]:
    S = cfg.shape()
    if not any(S.m):
        return [_skipped("negative-controls", "all m_i = 0; nothing to mutate")]
    return [RC.negative_control(S, m) for m in RC.EXPECTED_FAILURE]


def _ideal_closure(cfg: JobConfig) -> List[CheckReport]:
    S = cfg.shape()
    if not S.is_unshifted:
        return [_skipped("ideal-closure", "needs mu = 0")]
    r = [2 * S.mi(i) for i in range(1, S.n)]
    label = "n=%d N=%d r=%s" % (S.n, cfg.N, r)
    t0 = time.perf_counter()
    ev = P.conjecture_evidence(S.n, cfg.N, r)
    ms = (time.perf_counter() - t0) * 1000
    cases = []
    d = ev["degree"]
    if d > cfg.N:
        return [CheckReport("ideal-closure", (), label, "info", None, ms,
                            "degree r_1+1 = %d exceeds N" % d)]
    note = "dims without B %s, with B %s" % (ev["dims_without_B"], ev["dims_with_B"])
    cases.append(CheckReport("no-element-at-degree-r1+1", (d,), label,
                             "pass" if ev["dim_without_B"] == 0 else "info", None, ms, note))
    cases.append(CheckReport("B-adds-degree-r1+1", (d,), label,
                             "pass" if ev["dim_with_B"] >= 1 else "info", None, 0.0, note))
    return [CheckReport("ideal-closure", (), label, "pass", None, ms, note, cases)]


POISSON_SUITES = {
    "poisson-rtt": ("rtt-poisson", "jacobi", "minor-bracket-formula", "det-central", "tau-compat"),
    "dirac": ("dirac-paths", "ideal-proof-identities", "shifted-generators", "nonvanishing-steps"),
    "desnanot": ("desnanot-jacobi",),
}


def run_suite_id(cfg: JobConfig, sid: str) -> List[CheckReport]:
    if sid == "gklo-defining":
        return _relcheck_suite(cfg, list(RC.RL.DEFINING) + ["power-range"]) + [_z_consistency(cfg)]
    if sid == "gklo-aux":
        return _relcheck_suite(cfg, ["aux-five", "aux-reformulated", "aux-mixed3", "aux-xxxST"])
    if sid == "abcd":
        return _relcheck_suite(cfg, ["abcd-subset"])
    if sid == "kernel":
        return _relcheck_suite(cfg, ["kernel"])
    if sid == "central":
        return _relcheck_suite(cfg, ["central"])
    if sid == "semiclassical":
        return _relcheck_suite(cfg, ["semiclassical"])
    if sid in POISSON_SUITES:
        return [P.check_identity(name, cfg.n, cfg.N) for name in POISSON_SUITES[sid]]
    if sid == "ideal-closure":
        return _ideal_closure(cfg)
    if sid == "negative-controls":
        return _negative_controls(cfg)
    raise ConfigError("unknown suite %r" % sid)


def _flatten(fam: CheckReport) -> List[dict]:
    rows = fam.cases or [fam]
    out = []
    for c in rows:
        d = {"family": fam.relation, "relation": c.relation, "indices": _jsonable(c.indices),
             "status": c.status, "witness": c.witness, "ms": round(c.ms, 1)}
        if c.note:
            d["note"] = c.note
        out.append(d)
    if fam.note and not (rows[0] is fam):
        out[0]["family_note"] = fam.note
    return out


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    return x


def run_and_report(cfg: JobConfig):
    """Returns (report dict, exit code)."""
    t0 = time.perf_counter()
    suites = []
    summary = {"pass": 0, "fail": 0, "expected_fail": 0, "info": 0, "skipped": 0}
    key = {"pass": "pass", "fail": "fail", "expected-fail": "expected_fail", "info": "info",
           "skipped": "skipped"}
    for sid in cfg.suites:
        cases = []
        for fam in run_suite_id(cfg, sid):
            cases.extend(_flatten(fam))
        for c in cases:
            summary[key[c["status"]]] += 1
        suites.append({"id": sid, "cases": cases})
    report = {"config": cfg.echo(), "suites": suites, "summary": summary,
              "elapsed_ms": round((time.perf_counter() - t0) * 1000, 1)}
    return report, (1 if summary["fail"] else 0)


def format_text(report: dict) -> str:
    lines = ["config: %s" % json.dumps(report["config"], sort_keys=True)]
    for s in report["suites"]:
        lines.append("")
        lines.append("[%s]" % s["id"])
        for c in s["cases"]:
            idx = ",".join(str(x) for x in c["indices"]) if c["indices"] else "-"
            status = "expected-fail observed" if c["status"] == "expected-fail" else c["status"]
            line = "  %-28s %-22s %-24s %9.1f ms" % (c["relation"], idx[:22], status, c["ms"])
            if c.get("note"):
                line += "  # " + c["note"]
            lines.append(line)
            if c.get("family_note"):
                lines.insert(len(lines) - 1, "  # %s: %s" % (c["family"], c["family_note"]))
            if c["status"] == "fail" and c["witness"]:
                lines.append("      witness: " + c["witness"][:200])
    sm = report["summary"]
    lines.append("")
    lines.append("summary: %d pass, %d fail, %d expected-fail, %d info, %d skipped (%.1f ms)"
                 % (sm["pass"], sm["fail"], sm["expected_fail"], sm["info"], sm["skipped"],
                    report["elapsed_ms"]))
    return "\n".join(lines) + "\n"


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(dir_okay=False, allow_dash=True),
              help="JSON job configuration ('-' reads stdin).")
@click.option("--suite", "suites", multiple=True, type=click.Choice(SUITES),
              help="Suite to run; repeatable; overrides the config.")
@click.option("--out", "out", type=click.Path(dir_okay=False), help="Write the report here.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), help="Worker processes; overrides the config.")
def main(config_path: Optional[str], suites, out, fmt, jobs):
    """Verify GKLO images and the τ-minor Poisson algebra for one shape."""
    try:
        if not config_path:
            raise ConfigError("--config is required")
        with click.open_file(config_path) as fh:
            cfg = parse_config(fh.read())
    except (ConfigError, OSError) as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(2)
    if suites:
        cfg.suites = list(suites)
    if jobs:
        cfg.parallelism = jobs
    report, code = run_and_report(cfg)
    text = json.dumps(report, indent=2, sort_keys=False) + "\n" if fmt == "json" else format_text(report)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    sys.exit(code)


if __name__ == "__main__":
    main()
