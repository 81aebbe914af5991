"""Exit codes, determinism and side outputs of the fracgrad executable.

Usage: test_cli.py <path-to-fracgrad> <configs-dir>
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

EXE = sys.argv[1]
CONFIGS = Path(sys.argv[2])
failures = []


def run(*args):
    return subprocess.run([EXE, *args], capture_output=True, text=True)


def check(name, cond, extra=""):
    print(("ok    " if cond else "FAIL  ") + name + (f" ({extra})" if extra and not cond else ""))
    if not cond:
        failures.append(name)


r = run("constants", "--n", "2", "--s-grid", "0.5:0.999:10")
rows = [l for l in r.stdout.splitlines() if l and not l.startswith("#")]
check("constants exits 0", r.returncode == 0, r.stderr)
check("constants has header and 10 rows", len(rows) == 11 and rows[0] == "n,s,c_ns,c_ns_over_1ms,gamma_1ms")
check("provenance lines", r.stdout.startswith("# tool: fracgrad"))
check("determinism: constants", r.stdout == run("constants", "--n", "2", "--s-grid", "0.5:0.999:10").stdout)

r = run("frobnicate")
check("unknown subcommand exits 2", r.returncode == 2)
check("usage on stderr", "Usage" in r.stderr or "usage" in r.stderr, r.stderr)
check("no subcommand exits 2", run().returncode == 2)
check("bad option value exits 2", run("constants", "--n", "two").returncode == 2)
check("out-of-range dimension exits 2", run("constants", "--n", "7").returncode == 2)
check("missing config exits 3", run("gamma", "--config", "missing.json").returncode == 3)

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    bad = tmp / "bad.json"
    bad.write_text("{ not json")
    check("malformed config exits 3", run("gamma", "--config", str(bad)).returncode == 3)
    budget = tmp / "budget.json"
    budget.write_text(json.dumps({"grid": {"n": 2, "N": 16384}, "W": {"kind": "quadratic"},
                                  "omega": {"type": "full"}, "s_grid": [0.5]}))
    check("memory cap exits 4", run("gamma", "--config", str(budget)).returncode == 4)
    noconv = tmp / "noconv.json"
    noconv.write_text(json.dumps({"grid": {"n": 1, "L": 16.0, "N": 64}, "W": {"kind": "quadratic"},
                                  "omega": {"type": "ball", "r": 4.0}, "f": {"type": "bump", "radius": 2.0},
                                  "s_grid": [0.5], "tol": 1e-9, "max_iter": 1}))
    r = run("gamma", "--config", str(noconv))
    check("non-convergence is flagged in the table", r.returncode == 0 and ",0,1\n" in r.stdout, r.stdout)

    a = run("minors", "--n", "2", "--N", "48", "--s", "0.7,0.99", "--no-ibp")
    b = run("minors", "--n", "2", "--N", "48", "--s", "0.7,0.99", "--no-ibp")
    check("minors exits 0", a.returncode == 0, a.stderr)
    check("determinism: minors", a.stdout == b.stdout)
    check("minors columns", "s,quantity,value,limit,rel_err\n" in a.stdout)

    out = tmp / "gamma.csv"
    r = run("--out", str(out), "gamma", "--config", str(CONFIGS / "gamma_quadratic.json"))
    check("gamma exits 0", r.returncode == 0, r.stderr)
    check("gamma CSV written", out.exists() and "s,energy,dist_to_local,converged,iters" in out.read_text())
    side = tmp / "gamma.json"
    check("sidecar written", side.exists())
    if side.exists():
        meta = json.loads(side.read_text())
        check("sidecar echoes config", meta.get("config", {}).get("W", {}).get("kind") == "quadratic", str(meta))
    check("recovery table written", (tmp / "gamma.recovery.csv").exists())
    check("local minimizer written", (tmp / "gamma.u_local.bin").exists())
    check("fractional minimizer written", (tmp / "gamma.u_s0.99.bin").exists())
    first = out.read_text()
    run("--out", str(out), "gamma", "--config", str(CONFIGS / "gamma_quadratic.json"))
    check("determinism: gamma", out.read_text() == first)

    r = run("--out", str(tmp / "ineq.csv"), "inequalities", "--config", str(CONFIGS / "inequalities.json"))
    check("inequalities exits 0", r.returncode == 0, r.stderr)

r = run("localize", "--spec", "gaussian", "--n", "2", "--N", "128", "--L", "16", "--p", "2", "--s", "0.5,0.9,0.99")
check("localize exits 0", r.returncode == 0, r.stderr)
r = run("crosscheck", "--spec", "bump", "--n", "1", "--N", "128", "--s", "0.5")
check("crosscheck exits 0", r.returncode == 0, r.stderr)
r = run("selftest", "--only", "1,2,8")
check("selftest subset exits 0", r.returncode == 0, r.stderr)

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
