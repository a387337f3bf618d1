"""Command-line front end: ``mcmb <command> <bundle> [options]``.

Exit codes: 0 ran (and passed, where a verdict applies), 1 ran and failed,
2 usage or parse error, 3 genericity failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .cohomology import GenericityError, cohomology_table
from .constructors import (
    SteinerParams,
    euler_tangent,
    ideal_point_extension,
    line_bundle,
    random_steiner,
    split_bundle,
    stable_02_bundle,
    trivial_extension,
)
from .lines import (
    PencilParam,
    TorsionDetectedError,
    generic_splitting_type,
    jumping_lines_in_pencil,
    splitting_constraints_check,
)
from .linalg import parse_field
from .matrixfile import MatrixFileError, load_matrix_file
from .mcm import (
    MCMCertificate,
    admissible_parameters,
    mcm_vanishing_check,
    natural_cohomology_threshold,
    verify_certificate,
)

FIELD_ENV = "MCMB_FIELD"
SEED_ENV = "MCMB_SEED"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GENERICITY = 0, 1, 2, 3

BUNDLES = ("tangent", "line-bundle", "split", "steiner", "stable02",
           "ideal-point", "trivial-extension", "matrix")


class UsageError(ValueError):
    pass


def _int_list(text):
    return tuple(int(x) for x in text.replace(",", " ").split())


def _range(text):
    """``lo:hi`` (inclusive) or a single integer."""
    if ":" in str(text):
        lo, hi = (int(x) for x in str(text).split(":"))
        if lo > hi:
            raise UsageError(f"empty range {text}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"{args.bundle} needs --{name.replace('_', '-')}")


def build_bundle(args, field):
    """Construct the bundle named by ``args.bundle`` and its flags."""
    kind = args.bundle
    twist = args.twist or 0
    if kind == "tangent":
        _need(args, "n")
        return euler_tangent(args.n, twist)
    if kind == "line-bundle":
        _need(args, "n", "d")
        E = line_bundle(args.n, args.d)
    elif kind == "split":
        _need(args, "n", "twists")
        E = split_bundle(args.n, _int_list(args.twists))
    elif kind == "steiner":
        _need(args, "n", "t", "r")
        E = random_steiner(
            SteinerParams(args.n, args.t, args.r, args.k or 1, args.seed), field=field
        )
    elif kind == "stable02":
        E = stable_02_bundle(args.seed, field)
    elif kind in ("ideal-point", "trivial-extension"):
        _need(args, "point")
        pt = _int_list(args.point)
        if kind == "ideal-point":
            q_seed = args.q_seed if args.q_seed is not None else args.seed
            E = ideal_point_extension(pt, q_seed)
        else:
            E = trivial_extension(pt)
    elif kind == "matrix":
        _need(args, "matrix")
        E = load_matrix_file(args.matrix)
    else:
        raise UsageError(f"unknown bundle {kind!r}; choose from {', '.join(BUNDLES)}")
    return E.twist(twist)


def _window(text, default):
    if text is None:
        return default
    ms = _range(text)
    return ms[0], ms[-1]


def _emit(args, text, doc):
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)


# -- commands -------------------------------------------------------------------

def cmd_table(args, field):
    E = build_bundle(args, field)
    lo, hi = _window(args.window, (-8, 3))
    tab = cohomology_table(E, lo, hi, field)
    label = args.label or {"tangent": "T", "line-bundle": "O"}.get(args.bundle, "E")
    if args.bundle == "tangent" and args.twist:
        label = f"T({args.twist})"
    _emit(args, tab.render(label), tab.to_dict())
    return EXIT_OK


def cmd_mcm_check(args, field):
    E = build_bundle(args, field)
    cert = mcm_vanishing_check(E, field, trials=args.trials, seed=args.seed)
    if args.out != "-":
        Path(args.out).write_text(cert.to_json() + "\n", encoding="utf-8")
    _emit(args, cert.summary(), cert.to_dict())
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_verify(args, field):
    cert = MCMCertificate.from_json(Path(args.certificate).read_text(encoding="utf-8"))
    report = verify_certificate(cert)
    text = f"{'VERIFIED' if report.ok else 'MISMATCH'} {cert.provenance}"
    if not report.ok:
        text += f"  differing: {', '.join(report.mismatches)}"
    _emit(args, text, {"ok": report.ok, "mismatches": list(report.mismatches),
                       "provenance": cert.provenance})
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_threshold(args, field):
    k = natural_cohomology_threshold(args.n, args.t, args.r)
    _emit(args, str(k), {"n": args.n, "t": args.t, "r": args.r, "threshold": k})
    return EXIT_OK


def cmd_params(args, field):
    t = admissible_parameters(args.n, args.r)
    _emit(args, "none" if t is None else str(t), {"n": args.n, "r": args.r, "t": t})
    return EXIT_OK


def cmd_split(args, field):
    E = build_bundle(args, field)
    rows, docs, status = [], [], EXIT_OK
    for i in range(args.lines):
        try:
            st = generic_splitting_type(E, seed=args.seed + i, field=field)
        except TorsionDetectedError as exc:
            rows.append(f"line {i}: torsion ({exc})")
            docs.append({"line": i, "error": str(exc)})
            status = EXIT_FAIL
            continue
        rep = splitting_constraints_check(st, E.rank, E.c1)
        rows.append(f"line {i}: {st}  constraints: "
                    + ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in rep.checks.items() if v is not None))
        docs.append({"line": i, "splitting_type": list(st.degrees), "checks": rep.checks})
    _emit(args, "\n".join([E.provenance] + rows), {"provenance": E.provenance, "lines": docs})
    return status


def cmd_jumping(args, field):
    E = build_bundle(args, field)
    reports = [jumping_lines_in_pencil(E, PencilParam.random(args.seed + i))
               for i in range(args.pencils)]
    rows = [f"{r.pencil}: degree {r.degree}, roots found {r.distinct_roots}, "
            f"multiplicity sum {r.multiplicity_sum}"
            + ("  [pencil inside jumping curve]" if r.degenerate else "") for r in reports]
    _emit(args, "\n".join([E.provenance] + rows),
          {"provenance": E.provenance, "pencils": [r.to_dict() for r in reports]})
    return EXIT_FAIL if any(r.degenerate for r in reports) else EXIT_OK


SWEEP_KEYS = ("n", "d", "t", "r", "k", "twist", "seed")


def _sweep_point(payload):
    ns, field_name = payload
    args = argparse.Namespace(**ns)
    field = parse_field(field_name)
    start = time.perf_counter()
    try:
        cert = mcm_vanishing_check(build_bundle(args, field), field, trials=args.trials, seed=args.seed)
        verdict = cert.verdict
    except GenericityError:
        verdict = "genericity-failure"
    return verdict, time.perf_counter() - start


def cmd_sweep(args, field):
    grids = {k: _range(getattr(args, k)) for k in SWEEP_KEYS if getattr(args, k) is not None}
    keys = list(grids)
    points = [dict(zip(keys, combo)) for combo in itertools.product(*(grids[k] for k in keys))]
    base = vars(args).copy()
    base.pop("func", None)
    jobs = []
    for p in points:
        ns = dict(base, **p)
        if ns["seed"] is None:
            ns["seed"] = 0
        jobs.append((ns, field.name))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(j) for j in jobs]

    # aggregate over seeds; every other swept key defines a parameter point
    group_keys = [k for k in keys if k != "seed"]
    agg = {}
    for p, (verdict, dt) in zip(points, results):
        key = tuple(p[k] for k in group_keys)
        a = agg.setdefault(key, {"runs": 0, "pass": 0, "time": 0.0, "failing_seeds": []})
        a["runs"] += 1
        a["time"] += dt
        if verdict == "pass":
            a["pass"] += 1
        elif "seed" in p:
            a["failing_seeds"].append(p["seed"])
    lines = [f"{args.bundle} sweep over {', '.join(keys)}"]
    docs = []
    for key, a in agg.items():
        label = " ".join(f"{k}={v}" for k, v in zip(group_keys, key)) or "(all)"
        rate = a["pass"] / a["runs"]
        lines.append(f"{label}: pass rate {a['pass']}/{a['runs']} = {rate:.2f}, "
                     f"mean {a['time'] / a['runs']:.3f}s"
                     + (f", failing seeds {a['failing_seeds']}" if a["failing_seeds"] else ""))
        docs.append({"point": dict(zip(group_keys, key)), "runs": a["runs"], "passes": a["pass"],
                     "pass_rate": rate, "mean_seconds": a["time"] / a["runs"],
                     "failing_seeds": a["failing_seeds"]})
    _emit(args, "\n".join(lines), {"bundle": args.bundle, "points": docs})
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def _common(p):
    p.add_argument("--field", default=os.environ.get(FIELD_ENV, "QQ"),
                   help=f"QQ (default), GF(p), or 'prime' for a seeded random prime > 2^30 [env {FIELD_ENV}]")
    p.add_argument("--seed", type=int, default=int(os.environ.get(SEED_ENV, "0")),
                   help=f"seed for random constructions [env {SEED_ENV}, default 0]")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--trials", type=int, default=16, help="random points for the local-freeness probe")


def _bundle_flags(p, ranged=False):
    conv = str if ranged else int
    p.add_argument("bundle", choices=BUNDLES)
    p.add_argument("--n", type=conv)
    p.add_argument("--twist", type=conv, help="twist (for tangent: the m in T(m))")
    p.add_argument("--d", type=conv, help="degree of the line bundle")
    p.add_argument("--twists", help="comma-separated twists for split")
    p.add_argument("--t", type=conv)
    p.add_argument("--r", type=conv)
    p.add_argument("--k", type=conv)
    p.add_argument("--point", help="point of P^2 as 'x0,x1,x2'")
    p.add_argument("--q-seed", type=int, dest="q_seed", help="seed for the conic of ideal-point")
    p.add_argument("--matrix", help="presentation file (see README for the grammar)")


def build_parser():
    ap = argparse.ArgumentParser(prog="mcmb", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="cohomology table over a twist window")
    _bundle_flags(p)
    _common(p)
    p.add_argument("--window", help="twists lo:hi (default -8:3)")
    p.add_argument("--label", help="bundle name used in row labels")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("mcm-check", help="certify the two-sided vanishing criterion")
    _bundle_flags(p)
    _common(p)
    p.add_argument("--out", default="mcm-cert.json", help="certificate path ('-' to skip)")
    p.set_defaults(func=cmd_mcm_check)

    p = sub.add_parser("verify", help="recompute a stored certificate")
    p.add_argument("certificate")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("threshold", help="natural-cohomology threshold k for (n, t, r)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("params", help="largest admissible t for (n, r)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("sweep", help="pass rates over parameter ranges lo:hi")
    _bundle_flags(p, ranged=True)
    _common(p)
    p.set_defaults(seed=None)
    p.add_argument("--seeds", dest="seed", help="seed range lo:hi")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("split", help="splitting types on random lines")
    _bundle_flags(p)
    _common(p)
    p.add_argument("--lines", type=int, default=5)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("jumping", help="jumping lines along random pencils")
    _bundle_flags(p)
    _common(p)
    p.add_argument("--pencils", type=int, default=5)
    p.set_defaults(func=cmd_jumping)
    return ap


def _glue_negative_values(argv):
    """Turn ``--window -8:3`` into ``--window=-8:3`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok.startswith("--") and "=" not in tok and re.match(r"^-\d", nxt):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = ap.parse_args(_glue_negative_values(argv))
    try:
        field = parse_field(args.field, seed=args.seed if isinstance(args.seed, int) else 0)
        if getattr(field, "p", 3) <= 2:
            raise UsageError("prime-field mode needs p > 2")
        return args.func(args, field)
    except GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except (UsageError, MatrixFileError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
