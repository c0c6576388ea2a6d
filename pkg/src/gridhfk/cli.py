"""Command-line front end: compute, simplify, verify, torus.

Exit codes: 0 success, 1 verification mismatch, 2 bad input, 3 internal
consistency failure (inexact S-factor division, grading calibration).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources

from .filtered import GradingError
from .grid import GridDiagram, GridError, load_grid, mirror_grid, serialize_grid, torus_grid
from .homology import StripError, hfk_hat
from .moves import simplify
from .poly import BigradedPoly, format_poly
from .spectral import e2_page

EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

log = logging.getLogger("gridhfk")


def _threads(args):
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("HFK_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise GridError(f"HFK_THREADS must be an integer, got {env!r}")
    return 1


def grid_to_json(g):
    return {"n": g.n, "x": list(g.x_rows), "o": list(g.o_rows)}


def grid_from_json(d):
    try:
        return GridDiagram(d["n"], d["x"], d["o"])
    except (KeyError, TypeError) as exc:
        raise GridError(f"bad grid record {d!r}: {exc}")


def compute_record(g, range_="nonneg", want_tau=False, want_e2=False, threads=1, name=None):
    """Everything ``compute`` reports, as a fixture-shaped dict."""
    record = {"name": name, "grid": grid_to_json(g), "hfk": None, "tau": None, "e2": None}
    if want_tau or want_e2:
        pages = e2_page(g, range_, threads=threads)
        hfk = pages.e1
        t = pages.tau()
        if want_tau:
            record["tau"] = t.value
            record["tau_reason"] = t.reason
        if want_e2:
            record["e2"] = pages.e2.to_json()
    else:
        hfk = hfk_hat(g, range_, threads=threads)
    record["hfk"] = hfk.to_json()
    return record


def cmd_compute(args):
    g = load_grid(args.grid)
    if args.mirror:
        g = mirror_grid(g)
    rec = compute_record(
        g, args.range, args.tau, args.e2, _threads(args), name=os.path.basename(args.grid)
    )
    if args.json:
        print(json.dumps(rec, indent=2))
        return 0
    print(format_poly(BigradedPoly.from_json(rec["hfk"])))
    if args.tau:
        if rec["tau"] is None:
            print(f"tau: indeterminate ({rec['tau_reason']})")
        else:
            print(f"tau: {rec['tau']}")
    if args.e2:
        print(f"E2: {format_poly(BigradedPoly.from_json(rec['e2']))}")
    return 0


def cmd_simplify(args):
    g = load_grid(args.grid)
    trajectory = []
    out = simplify(g, seed=args.seed, budget=args.budget, trajectory=trajectory)
    print("sizes: " + " ".join(str(k) for k in trajectory))
    print(f"result: n={out.n}")
    text = serialize_grid(out)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def load_fixtures(path=None):
    if path is None:
        text = resources.files("gridhfk").joinpath("data/fixtures.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GridError(f"fixtures file is not valid JSON: {exc}")
    if not isinstance(records, list):
        raise GridError("fixtures file must hold a JSON array")
    for k, rec in enumerate(records):
        if not isinstance(rec, dict) or "hfk" not in rec:
            raise GridError(f"fixture {k} lacks an 'hfk' term list")
    return records


def _negate(p):
    return BigradedPoly(((-a, -m), d) for (a, m), d in p.items())


def term_diff(expected, got):
    """Lines ``(a, m): expected -> got`` for every differing term."""
    keys = sorted(set(expected) | set(got))
    return [
        f"  (a={a}, m={m}): expected {expected.get((a, m), 0)}, got {got.get((a, m), 0)}"
        for a, m in keys
        if expected.get((a, m), 0) != got.get((a, m), 0)
    ]


def verify_record(rec, range_="nonneg", allow_mirror=False, threads=1):
    """Compare one fixture with a fresh computation.

    Returns ``(status, lines)`` with status 'pass', 'fail' or 'skip'.  With
    ``allow_mirror`` the record may instead describe the mirror knot: HFK
    then matches after ``(a, m) -> (a, 2a - m)``, tau changes sign and
    ``E^2`` reflects through the origin.
    """
    if rec.get("grid") is None:
        return "skip", ["no grid supplied"]
    g = grid_from_json(rec["grid"])
    want_hfk = BigradedPoly.from_json(rec["hfk"])
    want_tau = rec.get("tau")
    want_e2 = None if rec.get("e2") is None else BigradedPoly.from_json(rec["e2"])
    got = compute_record(
        g, range_, want_tau is not None, want_e2 is not None, threads
    )
    got_hfk = BigradedPoly.from_json(got["hfk"])
    got_e2 = None if got["e2"] is None else BigradedPoly.from_json(got["e2"])

    def mismatches(hfk, tau, e2):
        lines = []
        if hfk != want_hfk:
            lines.append("hfk differs:")
            lines += term_diff(want_hfk, hfk)
        if want_tau is not None and tau != want_tau:
            lines.append(f"tau: expected {want_tau}, got {tau}")
        if want_e2 is not None and e2 != want_e2:
            lines.append("e2 differs:")
            lines += term_diff(want_e2, e2)
        return lines

    direct = mismatches(got_hfk, got["tau"], got_e2)
    if not direct:
        return "pass", []
    if allow_mirror:
        flipped = mismatches(
            got_hfk.mirror(),
            None if got["tau"] is None else -got["tau"],
            None if got_e2 is None else _negate(got_e2),
        )
        if not flipped:
            return "pass", ["matched the mirror"]
    return "fail", direct


def cmd_verify(args):
    records = load_fixtures(args.fixtures)
    threads = _threads(args)
    failed = 0
    for rec in records:
        name = rec.get("name", "?")
        status, lines = verify_record(rec, args.range, args.allow_mirror, threads)
        print(f"{status.upper():4}  {name}")
        for line in lines:
            print(f"      {line}")
        failed += status == "fail"
    print(f"{len(records)} records, {failed} failed")
    return EXIT_MISMATCH if failed else 0


def cmd_torus(args):
    sys.stdout.write(serialize_grid(torus_grid(args.p, args.q)))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gridhfk", description="Knot Floer homology from grid diagrams."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="HFK-hat (and optionally tau, E2) of a grid")
    p.add_argument("--grid", required=True, help="grid file")
    p.add_argument("--range", choices=("nonneg", "full"), default="nonneg")
    p.add_argument("--tau", action="store_true")
    p.add_argument("--e2", action="store_true")
    p.add_argument("--mirror", action="store_true", help="use the mirror grid")
    p.add_argument("--json", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("simplify", help="shrink a grid by random moves")
    p.add_argument("--grid", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--out", help="write the result here instead of stdout")
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("verify", help="recompute fixture records and compare")
    p.add_argument("--fixtures", help="JSON fixtures (default: bundled set)")
    p.add_argument("--allow-mirror", action="store_true")
    p.add_argument("--range", choices=("nonneg", "full"), default="nonneg")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("torus", help="print the standard grid of the (p, q) torus knot")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_torus)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (GridError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StripError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        if exc.residual is not None:
            print(f"residual: {exc.residual}", file=sys.stderr)
        return EXIT_INTERNAL
    except GradingError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
