"""Command-line surface.

Subcommands: systole, minvecs, stratum, retract, embed, bavard, scan, verify.
Exit codes: 0 success / all checks pass, 1 a verification or flow failure,
2 input or usage error.
"""

import argparse
import sys

import numpy as np

from latgeo import actions, io, siegel, suites
from latgeo.core import (
    BasisMatrix,
    gram_of,
    stratum_index,
    systole_data,
)
from latgeo.errors import LatticeError, NoEventError
from latgeo.flow import well_rounded_retract

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _fmt_matrix(m):
    return "\n".join("  " + " ".join("%.12g" % x for x in row) for row in np.asarray(m))


def _load(path):
    gram, _, label = io.read_lattice_file(path)
    return gram, label


def cmd_systole(args):
    gram, label = _load(args.file)
    m = systole_data(gram)
    if label:
        print("label: %s" % label)
    print("systole_sq: %r" % m.systole_sq)
    print("minimal vectors (up to sign): %d" % len(m))
    for v in m.vectors:
        print("  " + " ".join(str(int(x)) for x in v))
    print("stratum: %d" % stratum_index(gram))
    return EXIT_OK


def cmd_minvecs(args):
    gram, _ = _load(args.file)
    m = systole_data(gram)
    for v in m.vectors:
        print(" ".join(str(int(x)) for x in v))
    return EXIT_OK


def cmd_stratum(args):
    gram, _ = _load(args.file)
    print(stratum_index(gram))
    return EXIT_OK


def cmd_retract(args):
    gram, _ = _load(args.file)
    try:
        trace = well_rounded_retract(gram)
    except NoEventError as exc:
        print("flow failed: %s" % exc, file=sys.stderr)
        return EXIT_FAIL
    for e in trace.events:
        vecs = "; ".join(" ".join(str(int(x)) for x in v) for v in e.new_vectors)
        print(
            "event t*=%.12g stratum %d -> %d new: %s"
            % (e.t_star, e.stratum_before, e.stratum_after, vecs)
        )
    print("final gram:")
    print(_fmt_matrix(trace.final.entries))
    if args.trace:
        io.write_trace(args.trace, trace)
        print("trace written to %s" % args.trace)
    return EXIT_OK


def cmd_embed(args):
    taus = io.parse_tau_list(args.taus)
    if not taus:
        raise ValueError("no points given")
    point = siegel.product_embed(taus)
    gram = gram_of(BasisMatrix(point.a))
    print("siegel basis:")
    print(_fmt_matrix(point.a))
    print("gram:")
    print(_fmt_matrix(gram.entries))
    print("stratum: %d" % stratum_index(gram))
    print("bavard: %s" % siegel.in_bavard_set(point))
    if args.out:
        io.write_lattice_file(args.out, basis=BasisMatrix(point.a), label=args.label)
        print("lattice written to %s" % args.out)
    return EXIT_OK


def cmd_bavard(args):
    taus = io.parse_tau_list(args.taus)
    if not taus:
        raise ValueError("no points given")
    point = siegel.product_embed(taus)
    gram = gram_of(BasisMatrix(point.a))
    m = systole_data(gram)
    form = siegel.restricted_form(m, siegel.standard_J(point.g))
    print("restricted symplectic form on the systole span:")
    print(_fmt_matrix(form))
    print("bavard: %s" % siegel.in_bavard_set(point))
    return EXIT_OK


def cmd_scan(args):
    w, h = _parse_grid(args.grid)
    if args.imax <= actions.CLAIM_REGION[2]:
        raise ValueError("--imax must exceed the lower edge of the scan strip")
    region = (-0.5, 0.5, actions.CLAIM_REGION[2], args.imax)
    xs, ys, systoles, strata = actions.product_grid(region, (w, h), jobs=args.jobs)
    wrote = False
    try:
        if args.out:
            io.write_scan_csv(args.out, xs, ys, systoles, strata)
            print("csv written to %s" % args.out)
            wrote = True
        if args.pgm:
            io.write_pgm(args.pgm, strata)
            print("pgm written to %s" % args.pgm)
            wrote = True
    except OSError as exc:
        print("cannot write output: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    if not wrote:
        hi = int(strata.max())
        print("grid %dx%d, max stratum %d (no output file requested)" % (w, h, hi))
    return EXIT_OK


def cmd_verify(args):
    opts = suites.SuiteOptions(
        seed=args.seed,
        grid=_parse_grid(args.grid) if args.grid else None,
        jobs=args.jobs,
        tol_scale=args.tol,
        p_values=tuple(args.p) if args.p else (1, 2),
    )
    try:
        outcomes = suites.run_suite(args.suite, opts)
    except KeyError:
        print("unknown suite: %s" % args.suite, file=sys.stderr)
        print("known suites: %s, all" % ", ".join(sorted(suites.SUITES)), file=sys.stderr)
        return EXIT_USAGE
    ok = True
    for outcome in outcomes:
        for line in suites.format_outcome(outcome):
            print(line)
        ok = ok and outcome.passed
    if args.out and args.suite in ("claim-g2", "all"):
        steps = opts.grid if opts.grid else (200, 120)
        xs, ys, systoles, strata = actions.product_grid(
            actions.CLAIM_REGION, steps, jobs=opts.jobs
        )
        io.write_scan_csv(args.out, xs, ys, systoles, strata)
        print("scan csv written to %s" % args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_grid(text):
    try:
        w, h = text.lower().split("x")
        w, h = int(w), int(h)
    except ValueError:
        raise ValueError("grid must look like 200x120")
    if w < 2 or h < 2:
        raise ValueError("grid needs at least 2 steps per axis")
    return w, h


def build_parser():
    parser = argparse.ArgumentParser(
        prog="latgeo",
        description="Lattice systoles, well-rounded retraction, and symplectic scans",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("systole", help="systole, minimal vectors, and stratum of a lattice file")
    p.add_argument("file")
    p.set_defaults(func=cmd_systole)

    p = sub.add_parser("minvecs", help="minimal vectors of a lattice file")
    p.add_argument("file")
    p.set_defaults(func=cmd_minvecs)

    p = sub.add_parser("stratum", help="stratum index of a lattice file")
    p.add_argument("file")
    p.set_defaults(func=cmd_stratum)

    p = sub.add_parser("retract", help="run the well-rounding flow")
    p.add_argument("file")
    p.add_argument("--trace", help="write the event trace as JSON")
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("embed", help="product lattice from comma-separated x+yi points")
    p.add_argument("taus")
    p.add_argument("--out", help="write the result as a lattice file")
    p.add_argument("--label")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("bavard", help="non-isotropic systole span membership")
    p.add_argument("taus")
    p.set_defaults(func=cmd_bavard)

    p = sub.add_parser("scan", help="grid scan of the product family (csv/pgm output)")
    p.add_argument("--grid", default="100x60")
    p.add_argument("--imax", type=float, default=2.0)
    p.add_argument("--out", help="csv output path")
    p.add_argument("--pgm", help="binary PGM output path")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", help="override scan grid, e.g. 200x120")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=1.0, help="scale all check bounds")
    p.add_argument("--out", help="csv output for scan suites")
    p.add_argument("--p", type=int, action="append", help="odd-case sizes (repeatable)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (LatticeError, io.LatticeFileError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
