"""Command-line front end.

Exit codes: 0 Compatible, 1 Incompatible, 2 Inconclusive, 3 input or
usage error. Reports go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction

from . import __version__
from .compat import (
    CommonRootPresent, CompatVerdict, Not3Compatible, NotCompatible, NotProper,
    RetryBudgetExhausted, family_compatible, pair_compatible, perturb_family_mean,
    simplex_interior_perturbation, triple_compatible,
)
from .interlace import InterleaverFailure, NotRealRootedInput, common_interleaver
from .oracle import edge_scan, sample_convex_combinations, scan_to_csv
from .poly import Family, Poly, Tolerances, family_to_json, load_family

log = logging.getLogger("compatpoly")

EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exact", action="store_true",
                        help="rational arithmetic for properness tests where inputs permit")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["json", "text", "csv"], default="json")
    common.add_argument("--profile", default=None,
                        help="tolerance profile (default: $COMPATPOLY_TOLERANCE_PROFILE or 'default')")
    for name in ("tau-zero", "tau-root", "tau-sign", "tau-proper", "epsilon-perturb"):
        common.add_argument(f"--{name}", type=float, default=None)
    common.add_argument("--max-retries", type=int, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="compatpoly", description="Compatibility of real-rooted polynomial families.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="decide compatibility of a family")
    s.add_argument("family")

    s = sub.add_parser("interleaver", parents=[common], help="search for a common interleaver")
    s.add_argument("family")

    s = sub.add_parser("perturb", parents=[common], help="perturb a family")
    s.add_argument("family")
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--method", choices=["mean", "interior"], default="mean")

    s = sub.add_parser("scan", parents=[common], help="root trajectory along an edge (CSV)")
    s.add_argument("family")
    s.add_argument("--edge", nargs=2, type=int, required=True, metavar=("I", "J"))
    s.add_argument("-k", type=int, default=101)

    s = sub.add_parser("oracle", parents=[common], help="sample convex combinations")
    s.add_argument("family")
    s.add_argument("-n", type=int, default=10000)

    s = sub.add_parser("example-cs", parents=[common],
                       help="the family (r^2 - t^2, t^2 + 2t - 3, t^2 - 2t - 3)")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--r", type=str, help="value of r")
    g.add_argument("--r2", type=str, help="value of r^2 (allows exact rational input such as 3)")
    s.add_argument("--r-from", type=float)
    s.add_argument("--r-to", type=float)
    s.add_argument("--steps", type=int, default=31)
    return p


def _tolerances(args) -> Tolerances:
    base = Tolerances.profile(args.profile) if args.profile else Tolerances.from_env()
    return base.with_overrides(tau_zero=args.tau_zero, tau_root=args.tau_root,
                               tau_sign=args.tau_sign, tau_proper=args.tau_proper,
                               epsilon_perturb=args.epsilon_perturb, max_retries=args.max_retries)


def _emit_report(rep, args, out):
    if args.format == "text":
        out.write(f"verdict: {rep.verdict.value}\n")
        w = rep.witness.to_dict()
        out.write("witness: " + ", ".join(f"{k}={v}" for k, v in w.items()) + "\n")
        out.write(f"triples checked: {rep.triples_checked}\n")
    else:
        out.write(rep.to_json(indent=2) + "\n")


def cmd_check(args, tol, out) -> int:
    fam = load_family(args.family, exact=args.exact)
    rep = family_compatible(fam, tol, exact=args.exact, seed=args.seed)
    _emit_report(rep, args, out)
    return rep.verdict.exit_code


def cmd_interleaver(args, tol, out) -> int:
    fam = load_family(args.family)
    res = common_interleaver(fam, tol)
    doc = {
        "witness": None if res.witness is None else res.witness.tolist(),
        "failure_reason": None if res.failure_reason is None else res.failure_reason.value,
        "epsilon": res.epsilon,
        "attempts": res.attempts,
    }
    out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if res.witness is not None:
        return 0
    return 1 if res.failure_reason is InterleaverFailure.NOT_PAIRWISE_CONSISTENT else 2


def cmd_perturb(args, tol, out) -> int:
    fam = load_family(args.family)
    try:
        if args.method == "mean":
            res = perturb_family_mean(fam, args.epsilon, tol)
        else:
            res = simplex_interior_perturbation(fam, args.epsilon, tol)
    except (NotCompatible, Not3Compatible) as exc:
        print(f"compatpoly: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (NotProper, CommonRootPresent, RetryBudgetExhausted) as exc:
        print(f"compatpoly: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    out.write(json.dumps(family_to_json(res), indent=2) + "\n")
    return 0


def cmd_scan(args, tol, out) -> int:
    fam = load_family(args.family)
    i, j = args.edge
    n = len(fam)
    if not (0 <= i < n and 0 <= j < n):
        raise UsageError(f"edge indices must lie in [0, {n - 1}]")
    if args.k < 2:
        raise UsageError("-k must be at least 2")
    rows = edge_scan(fam[i], fam[j], args.k, tol)
    scan_to_csv(rows, fam.ambient_degree, out)
    return 0


def cmd_oracle(args, tol, out) -> int:
    fam = load_family(args.family)
    if args.n < 1:
        raise UsageError("-n must be at least 1")
    rep = sample_convex_combinations(fam, args.n, args.seed, tol)
    if args.format == "text":
        out.write(f"samples: {rep.samples}\nviolations: {len(rep.violations)}\n"
                  f"max margin: {rep.max_margin:.3g}\nmin gap: {rep.min_gap_observed:.3g}\n")
    else:
        out.write(rep.to_json() + "\n")
    return 1 if rep.violations else 0


def example_family(r2) -> Family:
    """(r^2 - t^2, t^2 + 2t - 3, t^2 - 2t - 3); r2 may be a Fraction."""
    rows = [[r2, 0, -1], [-3, 2, 1], [-3, -2, 1]]
    rational = None
    if isinstance(r2, Fraction):
        rational = [[Fraction(x) for x in row] for row in rows]
    members = [Poly([float(x) for x in row], 2) for row in rows]
    return Family(members, ["f", "g", "h"], rational)


def _example_reports(r2, tol, exact, seed):
    fam = example_family(r2)
    fg = pair_compatible(fam[0], fam[1], tol, exact, seed, _fam=fam.subfamily([0, 1]))
    fh = pair_compatible(fam[0], fam[2], tol, exact, seed, _fam=fam.subfamily([0, 2]))
    tri = triple_compatible(*fam.members, tol=tol, exact=exact, seed=seed, _fam=fam)
    return fg, fh, tri


def _parse_number(text: str, exact: bool):
    try:
        return Fraction(text) if exact else float(text)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def cmd_example(args, tol, out) -> int:
    if args.r_from is not None or args.r_to is not None:
        if args.r_from is None or args.r_to is None or args.steps < 2:
            raise UsageError("sweep mode needs --r-from, --r-to and --steps >= 2")
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["r", "pair_fg", "pair_fh", "triple"])
        for k in range(args.steps):
            r = args.r_from + (args.r_to - args.r_from) * k / (args.steps - 1)
            fg, fh, tri = _example_reports(r * r, tol, False, args.seed)
            w.writerow([repr(r), fg.verdict.value, fh.verdict.value, tri.verdict.value])
        return 0
    if args.r is None and args.r2 is None:
        raise UsageError("give --r, --r2 or a sweep range")
    if args.r2 is not None:
        r2 = _parse_number(args.r2, args.exact)
        label = {"r2": str(r2)}
    else:
        r = _parse_number(args.r, args.exact)
        r2 = r * r
        label = {"r": str(r)}
    fg, fh, tri = _example_reports(r2, tol, args.exact, args.seed)
    if args.format == "text":
        (key, val), = label.items()
        out.write(f"{key} = {val}\npair (f, g): {fg.verdict.value}\npair (f, h): {fh.verdict.value}\n")
        _emit_report(tri, args, out)
    else:
        doc = dict(label)
        doc["pairs"] = {"f,g": fg.verdict.value, "f,h": fh.verdict.value}
        doc["triple"] = tri.to_dict()
        if tri.verdict is CompatVerdict.INCOMPATIBLE:
            doc["failing_triple"] = ["f", "g", "h"]
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return tri.verdict.exit_code


COMMANDS = {
    "check": cmd_check, "interleaver": cmd_interleaver, "perturb": cmd_perturb,
    "scan": cmd_scan, "oracle": cmd_oracle, "example-cs": cmd_example,
}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(name)s: %(message)s", stream=sys.stderr)
        tol = _tolerances(args)
        return COMMANDS[args.command](args, tol, out)
    except UsageError as exc:
        print(f"compatpoly: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, NotRealRootedInput, ValueError) as exc:
        print(f"compatpoly: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
