import argparse, itertools, logging, sys
from .errors import HardyLabError, ParameterError
from .param import parse_number, get_seed
from .io import load_weight, load_sequence, scan_to_csv
from .report import dumps, all_passed, DIVERGENT
from .discrete import theorem2_sides, copson_sides, hardy_classical_sides
from .continuous import TheoremParams, theorem1_sides, corollary1_sides, lemma1_sides, holder_interpolation_sides
from .sharpness import limit_scan, limit_scan_holds
from .search import FAMILIES, PREFIX, RHIQuery
from .rhi import rhi_range
from .rearrange import theoremC_check, theoremD_check
from .selftest import SUITES, run_selftest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

CHECKS = ["theorem1", "theorem2", "corollary1", "lemma1", "interpolation", "copson", "hardy"]

def _require(args, name):
    value = getattr(args, name)
    if value is None or (isinstance(value, list) and len(value) == 0):
        raise ParameterError(f"The flag --{name} is required for '{args.command}{' ' + args.check if args.command == 'verify' else ''}'")
    return value

def _tol(args):
    return {} if args.tol is None else {"tol": args.tol}

def _verify(args):
    check = args.check
    if check in ("theorem2", "copson", "hardy"):
        s = load_sequence(_require(args, "sequence"))
        reports = []
        for p in _require(args, "p"):
            if check == "theorem2":
                reports.append(theorem2_sides(s, p, **_tol(args)))
            elif check == "copson":
                reports.append(copson_sides(s, p, **_tol(args)))
            else:
                reports.append(hardy_classical_sides(s.a, p, **_tol(args)))
        return reports

    w = load_weight(_require(args, "weight"))
    ps = _require(args, "p")
    if check == "theorem1":
        return [theorem1_sides(w, TheoremParams.of(w, p, q), **_tol(args)) for p, q in itertools.product(ps, _require(args, "q"))]
    elif check == "corollary1":
        return [corollary1_sides(w, p, **_tol(args)) for p in ps]
    elif check == "lemma1":
        return [lemma1_sides(w, p, delta, **_tol(args)) for p, delta in itertools.product(ps, _require(args, "delta"))]
    elif check == "interpolation":
        return [holder_interpolation_sides(w, p, q, **_tol(args)) for p, q in itertools.product(ps, _require(args, "q"))]
    else:
        assert False

def cmd_verify(args):
    reports = _verify(args)
    return [r.to_dict() for r in reports], EXIT_OK if all_passed(reports) else EXIT_FAIL

def cmd_analyze(args):
    w = load_weight(_require(args, "weight"))
    q = _require(args, "q")
    if len(q) != 1:
        raise ParameterError(f"analyze takes a single --q, got {len(q)} values")
    result = rhi_range(w, RHIQuery(q[0], args.family, args.grid), args.n_p)
    if result.status == DIVERGENT:
        logger.warning(f"The constant of the weight is infinite for q={q[0]}")
    return result.to_dict(), EXIT_OK if result.verified else EXIT_FAIL

def cmd_extremal(args):
    q = _require(args, "q")
    p = _require(args, "p")
    if len(p) != 1 or len(q) != 1:
        raise ParameterError("extremal takes a single --p and a single --q")
    TheoremParams(p[0], q[0], args.f)
    rows = limit_scan(p[0], q[0], args.f, args.k)
    return scan_to_csv(rows), EXIT_OK if limit_scan_holds(rows, q[0]) else EXIT_FAIL

def cmd_rearrange(args):
    w = load_weight(_require(args, "weight"))
    results = []
    for q in _require(args, "q"):
        results.append(theoremC_check(w, q, args.grid))
        if args.one_sided:
            results.append(theoremD_check(w, q, args.grid))
    output = [r.to_dict() for r in results]
    return output if len(output) > 1 else output[0], EXIT_OK if all(r.passed for r in results) else EXIT_FAIL

def cmd_selftest(args):
    result = run_selftest(get_seed(args.seed), args.suites, args.scale)
    return result, EXIT_OK if result["status"] == "pass" else EXIT_FAIL

def _common(parser):
    parser.add_argument("--out", default=None, help="write the output to this file instead of stdout")
    parser.add_argument("--verbose", action="store_true", help="log debug messages to stderr")
    parser.add_argument("--seed", type=int, default=None, help="master seed, defaults to $HARDY_LAB_SEED or 20240117")

def _numbers(parser, name, help):
    parser.add_argument(f"--{name}", type=parse_number, nargs="+", default=None, help=help)

def build_parser():
    parser = argparse.ArgumentParser(prog="hardy-lab", description="Numerical checks of Hardy-type and reverse Hölder inequalities")
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze = subparsers.add_parser("analyze", help="reverse Hölder constant, sharp exponent and improved constants of a weight")
    analyze.add_argument("--weight", required=True, help="weight JSON file")
    _numbers(analyze, "q", "exponent q > 1")
    analyze.add_argument("--family", choices=FAMILIES, default=PREFIX)
    analyze.add_argument("--grid", type=int, default=256)
    analyze.add_argument("--n-p", type=int, default=16, help="number of exponents in [q, p0)")
    _common(analyze)
    analyze.set_defaults(func=cmd_analyze)

    verify = subparsers.add_parser("verify", help="evaluate one inequality or identity")
    verify.add_argument("check", choices=CHECKS)
    verify.add_argument("--weight", default=None, help="weight JSON file")
    verify.add_argument("--sequence", default=None, help="sequence CSV file with header lambda,a")
    _numbers(verify, "p", "exponents p > 1")
    _numbers(verify, "q", "exponents 1 <= q <= p")
    _numbers(verify, "delta", "prefix lengths in (0, 1]")
    verify.add_argument("--tol", type=parse_number, default=None, help="relative tolerance")
    _common(verify)
    verify.set_defaults(func=cmd_verify)

    extremal = subparsers.add_parser("extremal", help="limit scan of the extremal family as CSV")
    _numbers(extremal, "p", "exponent p > 1")
    _numbers(extremal, "q", "exponent 1 <= q <= p")
    extremal.add_argument("--f", type=parse_number, default=1.0, help="mass of the weight")
    extremal.add_argument("--k", type=int, nargs="+", default=[1, 2, 3, 4], help="scan points a = 1/p - 10^-k")
    _common(extremal)
    extremal.set_defaults(func=cmd_extremal)

    rearrange = subparsers.add_parser("rearrange", help="compare constants before and after rearranging a step weight")
    rearrange.add_argument("--weight", required=True, help="step weight JSON file")
    _numbers(rearrange, "q", "exponents q > 1")
    rearrange.add_argument("--grid", type=int, default=256)
    rearrange.add_argument("--one-sided", action="store_true", help="also compare the one-sided constants of a non-increasing weight")
    _common(rearrange)
    rearrange.set_defaults(func=cmd_rearrange)

    selftest = subparsers.add_parser("selftest", help="run the randomized property suites")
    selftest.add_argument("--suites", nargs="+", choices=list(SUITES.keys()), default=None)
    selftest.add_argument("--scale", type=parse_number, default=1.0, help="factor on the number of random cases")
    _common(selftest)
    selftest.set_defaults(func=cmd_selftest)

    return parser

def _emit(output, path):
    text = output if isinstance(output, str) else dumps(output) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)

def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)

    try:
        output, code = args.func(args)
        _emit(output, args.out)
    except (HardyLabError, ValueError, OSError) as e:
        print(f"hardy-lab {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as e:
        print(f"hardy-lab {args.command}: arithmetic error while evaluating the input ({e})", file=sys.stderr)
        return EXIT_USAGE
    return code
