"""``torustop`` command-line interface.

Every subcommand prints one JSON document (sorted keys) that embeds the tool
version, the seed, the tolerances in force and a SHA-256 digest of every
input file.  Exit status: 0 success, 1 computation failure or mismatch,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from .alexander import homology, novikov_vanishing_certificate, torsion_profile
from .arrangements import (
    ArrangementError,
    bounded_regions,
    characteristic_polynomial,
    complement_euler,
    generic_lines,
    genericity_report,
    intersection_poset,
    is_essential,
    load_arrangement,
    poincare_polynomial,
    save_arrangement,
)
from .complexes import (
    ComplexError,
    CWPresentation,
    circle,
    euler_char,
    fox_complex,
    load,
    tensor,
    torus_skeleton,
)
from .critical import (
    GenericityError,
    MasterProblem,
    PartialSolveWarning,
    SolveError,
    TrackerConfig,
    count_critical,
    load_torus_ci,
)
from .critical.system import MalformedProblemError
from .laurent import parse_rational
from .localsys import FLOAT_RANK_TOL, LocalSystemSpec, generic_vanishing_scan, milnor_dims, twisted_dims
from .verify import canonical_json, run_verify

log = logging.getLogger("torustop")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
INPUT_ERRORS = (ComplexError, ArrangementError, MalformedProblemError, OSError, json.JSONDecodeError)


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _envelope(args, result, tolerances=None, inputs=()) -> dict:
    return {
        "tool": "torustop",
        "version": __version__,
        "command": args.command,
        "seed": getattr(args, "seed", 0),
        "tolerances": tolerances or {},
        "inputs": {str(p): _digest(p) for p in inputs},
        "result": result,
    }


def _table(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            value = obj[key]
            name = f"{prefix}{key}"
            if isinstance(value, dict):
                lines.extend(_table(value, name + "."))
            else:
                lines.append(f"{name}: {json.dumps(value, sort_keys=True)}")
    else:
        lines.append(f"{prefix}: {json.dumps(obj, sort_keys=True)}")
    return lines


def _emit(args, doc: dict) -> None:
    if args.format == "table":
        text = "\n".join(_table(doc)) + "\n"
    else:
        text = canonical_json(doc)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# -- model --------------------------------------------------------------------


def cmd_model(args) -> int:
    if args.kind == "torus-skeleton":
        if args.u is None:
            raise UsageError("torus-skeleton needs -u")
        c = torus_skeleton(args.k, args.n, args.u)
    elif args.kind == "circle":
        c = circle(args.u[0] if args.u else 1)
    elif args.kind == "fox":
        if not args.generators or args.xi is None:
            raise UsageError("fox needs --generators and --xi")
        gens = [g for g in args.generators.split(",") if g]
        c = fox_complex(CWPresentation(gens, args.relator or [], args.xi))
    elif args.kind == "tensor":
        if len(args.factors) != 2:
            raise UsageError("tensor needs exactly two complex files")
        c = tensor(load(args.factors[0]), load(args.factors[1]))
    elif args.kind == "lines":
        A = generic_lines(args.k, args.u)
        text = json.dumps(A.to_json(), sort_keys=True, indent=1) + "\n"
        if args.output:
            save_arrangement(A, args.output)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown model {args.kind}")
    text = json.dumps(c.to_json(), sort_keys=True, indent=1) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- exact invariants ------------------------------------------------------------


def cmd_alexander(args) -> int:
    c = load(args.complex)
    data = homology(c)
    result = data.to_json()
    result["torsion_profile"] = torsion_profile(data)
    result["label"] = c.label
    _emit(args, _envelope(args, result, inputs=[args.complex]))
    return EXIT_OK


def cmd_novikov(args) -> int:
    c = load(args.complex)
    data = homology(c)
    cert = novikov_vanishing_certificate(data, args.middle)
    result = {"betti": list(data.ranks), "euler_char": euler_char(c), "certificate": cert}
    _emit(args, _envelope(args, result, inputs=[args.complex]))
    return EXIT_OK


def cmd_twisted(args) -> int:
    c = load(args.complex)
    if args.float:
        try:
            s = complex(args.s.replace(" ", ""))
        except ValueError:
            raise UsageError(f"cannot parse complex s {args.s!r}") from None
        shown = [s.real, s.imag]
    else:
        try:
            s = parse_rational(args.s)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse rational s {args.s!r}; use --float for complex values") from None
        shown = args.s
    if s == 0:
        raise UsageError("s must be nonzero")
    dims = twisted_dims(LocalSystemSpec(c, s), tol=args.tol)
    via = milnor_dims(homology(c), s)
    result = {"s": shown, "exact": not args.float, "dims": dims, "milnor_dims": via, "consistent": dims == via}
    tol = {"rank_tol": args.tol} if args.float else {}
    _emit(args, _envelope(args, result, tolerances=tol, inputs=[args.complex]))
    return EXIT_OK if dims == via else EXIT_FAIL


def cmd_scan(args) -> int:
    c = load(args.complex)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    rep = generic_vanishing_scan(c, args.middle, args.samples, args.seed, include_roots=not args.no_roots)
    _emit(args, _envelope(args, rep, inputs=[args.complex]))
    return EXIT_OK if rep["all_consistent"] else EXIT_FAIL


def cmd_euler(args) -> int:
    A = load_arrangement(args.arrangement)
    poset = intersection_poset(A)
    result = {
        "dim": A.dim,
        "hyperplanes": A.k,
        "flats": len(poset.flats),
        "characteristic_polynomial": characteristic_polynomial(A, poset),
        "poincare_polynomial": poincare_polynomial(A, poset),
        "complement_euler": complement_euler(A, poset),
        "signed_euler": (-1) ** A.dim * complement_euler(A, poset),
        "essential": is_essential(A),
        "bounded_regions": bounded_regions(A, poset) if is_essential(A) else None,
        "general_position": genericity_report(A),
    }
    _emit(args, _envelope(args, result, inputs=[args.arrangement]))
    return EXIT_OK


# -- critical points --------------------------------------------------------------


def _tracker_config(args) -> TrackerConfig:
    return TrackerConfig(
        newton_tol=args.newton_tol,
        dedup_radius=args.dedup_radius,
        singular_cond=args.singular_cond,
        membership_margin=args.membership_margin,
    )


def cmd_critical(args) -> int:
    if bool(args.arrangement) == bool(args.torus_ci):
        raise UsageError("give exactly one of --arrangement / --torus-ci")
    if args.arrangement:
        A = load_arrangement(args.arrangement)
        if args.u is not None:
            A = A.with_weights(args.u)
        elif not A.weights:
            raise UsageError("arrangement file has no weights; pass --u")
        problem, source = MasterProblem(arrangement=A), args.arrangement
    else:
        ci = load_torus_ci(args.torus_ci)
        problem, source = MasterProblem(torus_ci=ci), args.torus_ci
        if args.u is not None:
            problem = problem.with_weights(args.u)
    cfg = _tracker_config(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PartialSolveWarning)
        try:
            result = count_critical(problem, seed=args.seed, trials=args.trials, config=cfg, check=not args.no_check)
            status = EXIT_OK if result["match"] is not False else EXIT_FAIL
        except GenericityError as exc:
            result = {"error": str(exc), "genericity": exc.report, "weights": list(problem.weights)}
            status = EXIT_FAIL
            print(f"torustop: {exc}", file=sys.stderr)
        except SolveError as exc:
            result = {"error": str(exc), "weights": list(problem.weights)}
            status = EXIT_FAIL
            print(f"torustop: {exc}", file=sys.stderr)
    result["warnings"] = sorted({str(w.message) for w in caught})
    _emit(args, _envelope(args, result, tolerances=cfg.to_json(), inputs=[source]))
    return status


def cmd_verify(args) -> int:
    report, timings = run_verify(seed=args.seed, determinism=not args.skip_determinism)
    for cid, seconds in sorted(timings.items()):
        print(f"criterion {cid}: {seconds:.2f} s", file=sys.stderr)
    _emit(args, report)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    common.add_argument("--seed", type=int, default=None, help="64-bit seed, echoed in the report (default 0; 42 for verify)")

    parser = argparse.ArgumentParser(prog="torustop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"torustop {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", parents=[common], help="write a model complex or arrangement")
    p.add_argument("kind", choices=["torus-skeleton", "circle", "fox", "tensor", "lines"])
    p.add_argument("factors", nargs="*", help="two complex files for 'tensor'")
    p.add_argument("-k", type=int, default=3)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("-u", type=_int_list)
    p.add_argument("--generators")
    p.add_argument("--relator", action="append", help="relator word such as 'a b a^-1 b^-1' (repeatable)")
    p.add_argument("--xi", type=_int_list)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("alexander", parents=[common], help="Alexander modules and polynomials")
    p.add_argument("--complex", required=True)
    p.set_defaults(func=cmd_alexander)

    p = sub.add_parser("novikov", parents=[common], help="Novikov-Betti numbers and vanishing certificate")
    p.add_argument("--complex", required=True)
    p.add_argument("--middle", type=int, required=True)
    p.set_defaults(func=cmd_novikov)

    p = sub.add_parser("twisted", parents=[common], help="homology with a rank-one local system")
    p.add_argument("--complex", required=True)
    p.add_argument("--s", required=True, help="p/q, or a complex number with --float")
    p.add_argument("--float", action="store_true", help="diagnostic floating-point mode")
    p.add_argument("--tol", type=float, default=FLOAT_RANK_TOL)
    p.set_defaults(func=cmd_twisted)

    p = sub.add_parser("scan", parents=[common], help="generic-vanishing scan over rational s")
    p.add_argument("--complex", required=True)
    p.add_argument("--middle", type=int, required=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--no-roots", action="store_true", help="do not append rational Alexander roots")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("euler", parents=[common], help="arrangement combinatorics")
    p.add_argument("--arrangement", required=True)
    p.set_defaults(func=cmd_euler)

    defaults = TrackerConfig()
    p = sub.add_parser("critical", parents=[common], help="count critical points of a master function")
    p.add_argument("--arrangement")
    p.add_argument("--torus-ci")
    p.add_argument("--u", type=_int_list, help="override weights, e.g. 1,2,3")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--no-check", action="store_true", help="skip the genericity resampling")
    p.add_argument("--newton-tol", type=float, default=defaults.newton_tol)
    p.add_argument("--dedup-radius", type=float, default=defaults.dedup_radius)
    p.add_argument("--singular-cond", type=float, default=defaults.singular_cond)
    p.add_argument("--membership-margin", type=float, default=defaults.membership_margin)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("verify", parents=[common], help="run the regression suite")
    p.add_argument("--skip-determinism", action="store_true", help="run the suite once")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = 42 if args.command == "verify" else 0
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except INPUT_ERRORS as exc:
        print(f"torustop: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"torustop: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
