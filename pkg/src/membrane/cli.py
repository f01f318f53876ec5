"""Command line front end: ``membrane bound|verify|sweep|classify``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from . import pipeline
from .errors import SpecError
from .quad import QuadConfig
from .specfile import load_spec

EXIT_OK, EXIT_SPEC, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("membrane")


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump(records):
    return json.dumps(records, indent=2, allow_nan=False) + "\n"


def _run_all(func, entries, opts, jobs, **kw):
    """Apply func to every entry; output order always follows the spec file."""
    if jobs <= 1 or len(entries) <= 1:
        return [func(e, opts, **kw) for e in entries]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(func, e, opts, **kw) for e in entries]
        return [f.result() for f in futures]


def _options(args):
    cfg = QuadConfig.from_env()
    return pipeline.Options(cfg=cfg, resolution=getattr(args, "resolution", None),
                            timing=getattr(args, "timing", False))


def cmd_bound(args):
    entries = load_spec(args.spec)
    records = _run_all(pipeline.build_record, entries, _options(args), args.jobs)
    _write(args.output, _dump(records))


def cmd_verify(args):
    entries = load_spec(args.spec)
    records = _run_all(pipeline.build_record, entries, _options(args), args.jobs, verify=True)
    for rec in records:
        fails = [k for k, v in rec["verdicts"].items() if v == "FAIL"]
        if fails:
            log.warning("%s: FAIL for %s", rec["domain_name"], ", ".join(fails))
    _write(args.output, _dump(records))


def _parse_alphas(text):
    if text is None or not text.strip():
        return []
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            val = math.inf if tok.lower() in ("inf", "infinity") else float(tok)
        except ValueError:
            raise SpecError(f"--alphas: {tok!r} is not a number") from None
        if not val > 0:
            raise SpecError(f"--alphas: alpha must be positive, got {tok}")
        out.append(val)
    return out


def _fmt(x):
    return x if isinstance(x, str) else format(x, ".17g")


def cmd_sweep(args):
    entries = {e.name: e for e in load_spec(args.spec)}
    if args.domain not in entries:
        raise SpecError(f"--domain: no domain named {args.domain!r} (have: {', '.join(entries)})")
    alphas = _parse_alphas(args.alphas)
    rows = pipeline.sweep_rows(entries[args.domain], alphas, _options(args))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "norm_alpha", "lower_bound"])
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    _write(args.output, buf.getvalue())


def cmd_classify(args):
    entries = load_spec(args.spec)
    records = _run_all(pipeline.classify_record, entries, _options(args), args.jobs)
    _write(args.output, _dump(records))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="membrane",
        description="Bounds for the first nontrivial Neumann eigenvalue of conformal images.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=True):
        p.add_argument("spec", help="domain specification JSON")
        p.add_argument("-o", "--output", default="-", help="output path (default: stdout)")
        if jobs:
            p.add_argument("-j", "--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("bound", help="compute all bounds for each domain")
    common(p)
    p.add_argument("--timing", action="store_true", help="record wall time (breaks byte determinism)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="bounds plus the transplanted FEM eigenvalue and verdicts")
    common(p)
    p.add_argument("--resolution", type=int, default=None,
                   help="mesh resolution for every domain (overrides runs.oracle_resolution)")
    p.add_argument("--timing", action="store_true", help="record wall time (breaks byte determinism)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="CSV of the alpha-dependence of the L^alpha bound")
    common(p, jobs=False)
    p.add_argument("--domain", required=True)
    p.add_argument("--alphas", default="", help="comma separated, e.g. 2.5,3,4,inf")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classify", help="conformal-uniform and convexity classification")
    common(p)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="membrane: %(message)s")
    if getattr(args, "resolution", None) is not None and args.resolution < 16:
        print("membrane: --resolution must be at least 16", file=sys.stderr)
        return EXIT_SPEC
    try:
        args.func(args)
    except (SpecError, OSError) as exc:
        print(f"membrane: spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except pipeline.StageFailure as exc:
        print(f"membrane: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
