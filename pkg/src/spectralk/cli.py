"""Command-line interface.

    spectralk stats  --input x.csv --degree 3 --kind all --format table
    spectralk sample --input x.csv --m 3 --count 5 --seed 1
    spectralk verify --suite inheritance --builtin arange8 --m 4 --replicates 20000 --seed 7
    spectralk tables --degree 3 --n 4

Exit status: 0 on success, 1 on usage or input errors, 2 when a gated
verification check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import experiments as ex
from .classical import k_statistic
from .combinat import (
    IntegerPartition,
    SetPartition,
    canonical_set_partition,
    coeff_d,
    coeff_s,
    enumerate_partitions,
    kstat_prefactor,
    moebius,
)
from .errors import CapacityError, DegreeExceedsSampleError
from .random_matrix import spectral_samples
from .spectral import (
    ANNOTATION_MISMATCHES,
    DEFAULT_SPECTRAL_CAP,
    PRINTED_TYPOS,
    annotation_coefficients,
    closed_form_coefficients,
    generalized_polykay_l,
    mu_identity_inverse,
    spectral_kstat,
    statistic_coefficients,
)

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
CLASSICAL_CAP = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_input(path):
    if path == "-":
        return ex.parse_population(sys.stdin.read())
    return ex.read_population(path)


def _fmt(value):
    return str(value) if isinstance(value, (int, Fraction)) else repr(float(value))


def cmd_stats(args):
    x = _read_input(args.input)
    n, d = len(x), args.degree
    if d < 1:
        raise ValueError("degree must be >= 1")
    kinds = ex.STAT_KINDS if args.kind == "all" else (args.kind,)
    if d > n:
        raise DegreeExceedsSampleError(d, n)
    if d > DEFAULT_SPECTRAL_CAP:
        raise CapacityError(f"degree {d} exceeds the cap {DEFAULT_SPECTRAL_CAP}")
    if args.kind == "classical_k" and d > CLASSICAL_CAP:
        raise CapacityError(f"classical k-statistics are tabulated only up to degree {CLASSICAL_CAP}")
    rows = []
    for kind in kinds:
        for i in range(1, d + 1):
            if kind == "classical_k" and i > CLASSICAL_CAP:
                continue
            for lam in enumerate_partitions(i):
                if kind == "spectral_k":
                    value = spectral_kstat(lam, x)
                elif kind == "spectral_l":
                    value = generalized_polykay_l(lam, x)
                else:
                    value = k_statistic(lam, x)
                rows.append((kind, lam, value))
    if args.format == "json":
        out = {"n": n, "degree": d, "statistics": [
            {"kind": kind, "lambda": list(lam), "value_rational": _fmt(v), "value": float(v)}
            for kind, lam, v in rows]}
        print(json.dumps(out, indent=2))
    else:
        print(f"{'kind':<12} {'lambda':<12} {'value':<24} float")
        for kind, lam, v in rows:
            print(f"{kind:<12} {str(lam):<12} {_fmt(v):<24} {float(v):.12g}")
    return EXIT_OK


def cmd_sample(args):
    x = _read_input(args.input)
    if args.count < 1:
        raise ValueError("count must be >= 1")
    rows = spectral_samples(x, args.m, args.seed, range(args.count))
    text = "".join(",".join(repr(float(v)) for v in row) + "\n" for row in rows)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _population(args):
    if args.builtin:
        return ex.BUILTIN_POPULATIONS[args.builtin], args.builtin
    if args.input:
        return _read_input(args.input), args.input
    return (), None


def _combine(reports):
    results, trend = [], []
    for r in reports:
        for res in r.results:
            results.append({"suite": r.suite, **res})
        trend.extend(r.trend)
    gated = [r.verdict for r in reports if r.verdict != "DEMONSTRATION"]
    verdict = "FAIL" if "FAIL" in gated else ("PASS" if gated else "DEMONSTRATION")
    config = dict(reports[0].config)
    config["suites"] = [r.suite for r in reports]
    return ex.SpectralExperimentReport("all", config, reports[0].rng, results, verdict,
                                       sum(r.elapsed_s for r in reports), trend)


def cmd_verify(args):
    suites = ("inheritance", "variance", "limit") if args.suite == "all" else (args.suite,)
    population, name = _population(args)
    needs_sample = any(s != "limit" for s in suites)
    if needs_sample:
        if not population:
            raise ValueError("--input or --builtin is required for the inheritance and variance suites")
        if args.m is None:
            raise ValueError("--m is required for the inheritance and variance suites")

    def config():
        return ex.ExperimentConfig(population=population, population_name=name, m=args.m or 1,
                                   replicates=args.replicates, seed=args.seed, workers=args.workers)

    runners = {"inheritance": ex.run_inheritance, "variance": ex.run_variance_check, "limit": ex.run_limit_demo}
    reports = [runners[s](config()) for s in suites]
    report = reports[0] if len(reports) == 1 else _combine(reports)
    if args.output:
        ex.write_report(report, args.output)
        for res in report.results:
            status = "DEMO" if res.get("gating") is False else ("PASS" if res["pass"] else "FAIL")
            extra = f" m={res['m']}" if "m" in res else ""
            print(f"{status} {res.get('suite', report.suite)} {res['kind']} {res.get('statistic', IntegerPartition(res['lambda']))}"
                  f"{extra} target={res['target']:.6g} estimate={res['estimate']:.6g} z={res['z']:.2f}")
        print(f"verdict: {report.verdict}")
    else:
        print(ex.report_json(report))
    return EXIT_FAIL if report.failed else EXIT_OK


def _vector(coeffs, classes):
    return "[" + ", ".join(str(coeffs.get(nu, 0)) for nu in classes) + "]"


def cmd_tables(args):
    i, n = args.degree, args.n
    classes = enumerate_partitions(i)
    if n < i:
        raise DegreeExceedsSampleError(i, n)
    one = SetPartition([list(range(1, i + 1))])
    print(f"degree {i}, n = {n}")
    print()
    print(f"{'lambda':<14} {'d_lambda':>10} {'s_lambda':>10} {'prod (j-1)!':>12} {'m(0,pi)':>10} {'m(pi,1)':>10}")
    zero = SetPartition([[k] for k in range(1, i + 1)])
    for lam in classes:
        pi = canonical_set_partition(lam)
        print(f"{str(lam):<14} {str(coeff_d(lam)):>10} {coeff_s(lam):>10} {kstat_prefactor(lam):>12} "
              f"{moebius(zero, pi):>10} {moebius(pi, one):>10}")
    print()
    inverse = mu_identity_inverse(n, i)
    print(f"mu(I_{n})^-1 class values:")
    for lam in classes:
        print(f"  {str(lam):<14} {inverse[lam]}")
    if i > 4:
        return EXIT_OK
    print()
    print(f"power-sum coefficients of K_lambda at n = {n}, basis {[str(c) for c in classes]}")
    for lam in classes:
        algo = statistic_coefficients("spectral_k", lam, n)
        printed = closed_form_coefficients(lam, n)
        verdict = "MATCH" if printed == algo else "MISMATCH"
        print(f"  K_{lam}")
        print(f"    algorithm   {_vector(algo, classes)}")
        print(f"    closed form {_vector(printed, classes)}  {verdict}")
        if verdict == "MISMATCH":
            note = PRINTED_TYPOS.get(("spectral_k", tuple(lam)), "")
            fixed = closed_form_coefficients(lam, n, corrected=True) == algo
            print(f"    note: {note}; corrected form {'MATCH' if fixed else 'MISMATCH'}")
        if i <= 3:
            ann = annotation_coefficients(lam, n)
            verdict = "MATCH" if ann == algo else "MISMATCH"
            print(f"    k-annotation {_vector(ann, classes)}  {verdict}")
            if verdict == "MISMATCH":
                print(f"    note: {ANNOTATION_MISMATCHES.get(tuple(lam), '')}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="spectralk", description="Spectral k-statistics and polykays of Haar-unitary spectral samples.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="statistics of a population file")
    p.add_argument("--input", required=True, help="CSV file, or - for stdin")
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--kind", choices=ex.STAT_KINDS + ("all",), default="all")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sample", help="draw spectral samples")
    p.add_argument("--input", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", help="CSV output file (default stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run Monte Carlo verification suites")
    p.add_argument("--suite", choices=("inheritance", "variance", "limit", "all"), default="all")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input")
    src.add_argument("--builtin", choices=sorted(ex.BUILTIN_POPULATIONS))
    p.add_argument("--m", type=int)
    p.add_argument("--replicates", type=int, default=20000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", help="JSON report path (default: report to stdout)")
    p.add_argument("--workers", type=int, default=1, help="threads for replicate chunks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="print coefficient tables")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
