"""Command-line checks: exit codes, output files and re-ingestion of the normalized scene."""

import filecmp
import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = Path(sys.argv[1])
SCENES = Path(sys.argv[2])
failures = []


def run(*args):
    return subprocess.run([str(BIN), *map(str, args)], capture_output=True, text=True)


def expect(name, proc, code, needle=None):
    text = proc.stdout + proc.stderr
    ok = proc.returncode == code and (needle is None or needle in text)
    print(f"{'ok  ' if ok else 'FAIL'} {name}: exit {proc.returncode} (want {code})")
    if not ok:
        failures.append(name)
        print(text)


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    out = tmp / "cone"
    expect("analyze cone", run("--t-samples", 60, "analyze", SCENES / "circular_cone.json", "-o", out), 0, "conical")
    for f in ("report.json", "scene.normalized.json", "striction.csv", "mesh.obj"):
        if not (out / f).exists():
            failures.append(f"missing {f}")
    again = tmp / "again"
    expect("re-ingest normalized", run("analyze", out / "scene.normalized.json", "-o", again), 0)
    for f in ("report.json", "scene.normalized.json"):
        if not filecmp.cmp(out / f, again / f, shallow=False):
            failures.append(f"re-ingest changed {f}")

    expect("missing file", run("analyze", tmp / "nope.json", "-o", tmp / "x"), 2)
    bad = tmp / "bad.json"
    bad.write_text('{\n  "patch": {"builtin": "helicoid",}\n}\n')
    expect("syntax error", run("analyze", bad, "-o", tmp / "x"), 2, ":2:")
    bad.write_text(json.dumps({"patch": {"builtin": "helicoid"}, "grid": {"t_samples": 1}}))
    expect("validation error", run("analyze", bad, "-o", tmp / "x"), 2, "/grid/t_samples")
    expect("bad flag value", run("--rank-tol", 2, "analyze", SCENES / "helicoid.json", "-o", tmp / "x"), 2)
    expect("unknown option", run("--frobnicate", "list-builtins"), 2)
    expect("no subcommand", run(), 2)
    expect("degenerate frame", run("analyze", SCENES / "dependent_frame.json", "-o", tmp / "x"), 3, "t=0")
    expect("list-builtins", run("list-builtins"), 0, "circular_cone")
    expect("selftest loose rank tol", run("--t-samples", 60, "--rank-tol", 0.5, "selftest"), 4, "FAIL")
    expect("selftest", run("--t-samples", 60, "selftest"), 0, "selftest passed")

sys.exit(1 if failures else 0)
