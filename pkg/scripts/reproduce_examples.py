"""Run the catalog through bounds + FEM oracle and print a comparison table.

    python3 scripts/reproduce_examples.py [catalog/catalog.json] [--resolution N] [--jobs J]
"""
import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]


def fmt(x):
    return "-" if x is None else f"{x:.5g}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("spec", nargs="?", default=str(ROOT / "catalog" / "catalog.json"))
    ap.add_argument("--resolution", type=int)
    ap.add_argument("--jobs", type=int, default=4)
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp) / "verify.json"
        cmd = [sys.executable, "-m", "membrane.cli", "verify", args.spec, "-o", str(out), "-j", str(args.jobs)]
        if args.resolution:
            cmd += ["--resolution", str(args.resolution)]
        code = subprocess.call(cmd)
        if code:
            sys.exit(code)
        records = json.loads(out.read_text())

    cols = ["domain", "alpha", "lower_A", "lower_B", "lower_C", "lower_pw", "oracle", "polya", "verdicts"]
    print("  ".join(f"{c:>12}" for c in cols))
    for r in records:
        bad = [k for k, v in r["verdicts"].items() if v == "FAIL"]
        row = [r["domain_name"], r["alpha_used"] if r["alpha_used"] == "inf" else fmt(r["alpha_used"]),
               fmt(r["lower_A"]), fmt(r["lower_B"]), fmt(r["lower_C"]), fmt(r["lower_pw"]),
               fmt(r["oracle_lambda1"]), fmt(r["upper_polya"]), "FAIL " + ",".join(bad) if bad else "ok"]
        print("  ".join(f"{c:>12}" for c in row))


if __name__ == "__main__":
    main()
