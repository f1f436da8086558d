"""Batch command-line interface.

Subcommands: pairs, params, sieve-consts, rosser, primes, expsum,
search2, search4, scan, paper-audit.  Reports go to stdout (JSON by
default); commands with delimited output also render a PNG figure next
to the output file.  A plain key=value config file (one pair per line,
`#` comments) can supply any flag's value; explicit flags win.

Exit codes: 0 success, 1 audit or assertion failure, 2 usage error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import expsums, pairs, params, primes, rosser, sieve_functions, solver
from .errors import (
    DegenerateSieveError,
    InadmissiblePairError,
    OscillationBudgetError,
    ParameterRangeError,
    ResourceBudgetError,
)
from .reports import emit_report, format_float, write_report

_CONFIG_KEYS: set[str] = set()


# ---------------------------------------------------------------------------
# flag parsing helpers: every value flag is a string so that config-file
# values (always strings) and CLI values take the same conversion path

def as_fraction(value) -> Fraction:
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    text = str(value).strip()
    try:
        return Fraction(text)
    except ValueError:
        return Fraction(repr(float(text)))


def as_float(value) -> float:
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def as_int(value) -> int:
    f = as_float(value)
    n = int(round(f))
    if abs(f - n) > 1e-9:
        raise ParameterRangeError(f"expected an integer, got {value!r}")
    return n


def as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ParameterRangeError(f"expected a boolean, got {value!r}")


def _arg(parser: argparse.ArgumentParser, *names: str, **kw) -> None:
    action = parser.add_argument(*names, **kw)
    _CONFIG_KEYS.add(action.dest)


def read_config(path: str) -> dict[str, str]:
    """Parse key=value lines; '#' starts a comment; keys match flag names."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParameterRangeError(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParameterRangeError(
                f"{path}:{lineno}: expected key=value, got {raw!r}")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ParameterRangeError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _threads(args) -> int:
    if args.threads is None:
        return os.cpu_count() or 1
    n = as_int(args.threads)
    if n < 1:
        raise ParameterRangeError(f"--threads must be >= 1, got {n}")
    return n


def _check_out_path(out: str) -> Path:
    path = Path(out)
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.is_dir():
        raise ParameterRangeError(f"output directory {parent} does not exist")
    return path


def _load_or_build_table(limit: int, with_spf: bool = False) -> primes.PrimeTable:
    cache = primes.default_cache_path(limit)
    if cache.is_file():
        try:
            table = primes.load_tables(cache)
            if table.limit >= limit and (not with_spf or table.spf is not None):
                return table
        except (ValueError, OSError):
            pass
    return primes.build_tables(limit, with_spf=with_spf)


def _pair_json(word: str, pair: pairs.ExponentPair) -> dict:
    return {"word": word, "kappa": pair.kappa, "lambda": pair.lam,
            "eps": pair.eps_slack}


def _parse_seed(text: str) -> pairs.ExponentPair:
    if text == "trivial":
        return pairs.TRIVIAL_PAIR
    if text == "huxley":
        return pairs.HUXLEY_PAIR
    try:
        k_str, l_str = text.split(",")
        return pairs.ExponentPair(Fraction(k_str.strip()), Fraction(l_str.strip()))
    except (ValueError, TypeError):
        raise ParameterRangeError(
            f"seed must be 'trivial', 'huxley' or 'K,L', got {text!r}")


# ---------------------------------------------------------------------------
# subcommand handlers

def cmd_pairs(args) -> int:
    seed = _parse_seed(args.seed)
    if args.action == "eval":
        if not args.word:
            raise ParameterRangeError("pairs eval requires --word")
        pair = pairs.eval_word(args.word, seed)
        write_report(_pair_json(args.word, pair), args.format, args.out)
        return 0
    # optimize: objective is an expression in k and l, minimized
    expr = args.objective

    def objective(p: pairs.ExponentPair) -> float:
        namespace = {"k": float(p.kappa), "l": float(p.lam), "__builtins__": {}}
        return float(eval(expr, namespace))  # noqa: S307 - local CLI input

    word, pair = pairs.optimize_word(objective, as_int(args.depth), seed)
    report = _pair_json(word, pair)
    report["objective"] = expr
    report["value"] = objective(pair)
    write_report(report, args.format, args.out)
    return 0


def _audit_report_json(c: Fraction, report: params.AuditReport) -> dict:
    return {
        "c": c,
        "all_pass": report.all_pass,
        "rows": [
            {"name": r.name, "lhs": r.lhs, "rhs": r.rhs,
             "verdict": r.verdict, "margin": r.margin}
            for r in report.rows
        ],
    }


def _combined_audit(c: Fraction) -> params.AuditReport:
    rows: list[params.AuditRow] = []
    for audit in (params.audit_lemma27, params.audit_lemma210,
                  params.audit_lemma211):
        rows.extend(audit(c).rows)
    return params.AuditReport(tuple(rows))


def cmd_params(args) -> int:
    if args.action == "derive":
        if args.n is None:
            raise ParameterRangeError("params derive requires --n")
        p = params.derive_params(as_fraction(args.c), as_float(args.n),
                                 E=as_float(args.e), mu=as_fraction(args.mu))
        write_report(p, args.format, args.out)
        return 0
    # audit
    if args.sweep is not None:
        grid = params.sweep_audits(as_int(args.sweep))
        fail_rows = []
        boundary = 0
        for c, report in grid.items():
            for row in report.rows:
                if row.verdict == params.FAIL:
                    fail_rows.append({"c": c, "name": row.name,
                                      "margin": row.margin})
                elif row.verdict == params.BOUNDARY_PASS:
                    boundary += 1
        report_json = {
            "grid_points": as_int(args.sweep),
            "c_values": len(grid),
            "all_pass": not fail_rows,
            "boundary_rows": boundary,
            "fail_rows": fail_rows,
        }
        write_report(report_json, args.format, args.out)
        return 0 if not fail_rows else 1
    c = as_fraction(args.c)
    report = _combined_audit(c)
    write_report(_audit_report_json(c, report), args.format, args.out)
    return 0 if report.all_pass else 1


QUATERNARY_PAPER_BOUND = 0.00027


def cmd_sieve_consts(args) -> int:
    s0 = as_fraction(args.s0)
    F = sieve_functions.upper_F(float(s0))
    f = sieve_functions.lower_f(float(s0))
    if args.mode == "binary":
        margin = sieve_functions.binary_margin(float(s0))
        passes = margin > 0.0
    else:
        margin = sieve_functions.quaternary_margin(float(s0))
        passes = margin >= QUATERNARY_PAPER_BOUND
    report = {"s0": s0, "mode": args.mode, "F": F, "f": f,
              "margin": margin, "passes_paper_bound": passes}
    write_report(report, args.format, args.out)
    return 0


def cmd_rosser(args) -> int:
    D = as_int(args.d)
    z = as_int(args.z)
    nmax = as_int(args.nmax)
    weights = rosser.build_weights(D, z, validate=False)
    lower, mid, upper = rosser.sandwich_arrays(weights, nmax)
    bad = np.nonzero((lower > mid) | (mid > upper))[0]
    sums = rosser.compute_sums(weights)
    report = {
        "D": D, "z": z, "nmax": nmax,
        "entries": len(weights.entries),
        "n_pass": int(nmax - len(bad)),
        "n_fail": int(len(bad)),
        "first_violation": int(bad[0]) + 1 if len(bad) else None,
        "sums": {"P_frak": sums.P_frak, "M_plus": sums.M_plus,
                 "M_minus": sums.M_minus, "s0": sums.s0},
        "sums_ordered": sums.M_minus <= sums.P_frak <= sums.M_plus,
    }
    write_report(report, args.format, args.out)
    return 0 if len(bad) == 0 else 1


def cmd_primes(args) -> int:
    limit = as_int(args.limit)
    if args.action == "build":
        table = primes.build_tables(limit, with_spf=as_bool(args.spf))
        out = Path(args.table_out) if args.table_out else primes.default_cache_path(limit)
        out.parent.mkdir(parents=True, exist_ok=True)
        primes.save_tables(table, out)
        write_report({"limit": limit, "pi": int(np.count_nonzero(
            table.is_prime[: limit + 1])), "path": str(out)},
            args.format, None)
        return 0
    # stats
    table = _load_or_build_table(limit)
    pi = int(np.count_nonzero(table.is_prime[: limit + 1]))
    omega = table.omega[2: limit + 1]
    classes = np.bincount(omega)
    report = {
        "limit": limit,
        "pi": pi,
        "omega_classes": {int(k): int(v) for k, v in enumerate(classes) if v},
    }
    write_report(report, args.format, None)
    return 0


def _build_context(args) -> expsums.SumContext:
    c = as_float(args.c)
    X = as_float(args.bigx)
    mu = as_float(args.mu)
    table = _load_or_build_table(max(100, math.ceil(X)))
    scheme = args.scheme
    if scheme == "mobius":
        D = as_float(args.dcap)
        return expsums.SumContext.from_free_weights(
            c, X, mu, D, table, expsums.mobius_weights(D), E=as_float(args.e))
    if scheme in ("rosser:+", "rosser:-"):
        weights = rosser.build_weights(as_int(args.dcap), as_int(args.z))
        return expsums.SumContext.from_rosser(
            c, X, mu, table, weights, scheme[-1], E=as_float(args.e))
    raise ParameterRangeError(
        f"scheme must be mobius, rosser:+ or rosser:-, got {scheme!r}")


def cmd_expsum(args) -> int:
    if args.action == "eval":
        what = args.what
        if what == "theta":
            kernel = expsums.SmoothingKernel(
                as_float(args.a), as_float(args.delta), as_int(args.r))
            x = as_float(args.x)
            report = {"what": "theta", "x": x,
                      "theta": expsums.theta(kernel, x),
                      "bound": expsums.theta_bound(kernel, x)}
            write_report(report, args.format, None)
            return 0
        ctx = _build_context(args)
        x = as_float(args.x)
        fn = {"L": expsums.eval_L, "I": expsums.eval_I, "T": expsums.eval_T}
        if what not in fn:
            raise ParameterRangeError(f"--what must be L, I, T or theta, got {what!r}")
        value = fn[what](ctx, x)
        report = {"what": what, "x": x, "re": value.real, "im": value.imag,
                  "abs": abs(value)}
        write_report(report, args.format, None)
        return 0
    # scan
    from .plotting import plot_expsum_scan

    out = _check_out_path(args.scan_out)
    ctx = _build_context(args)
    grid = as_int(args.grid)
    if grid < 4:
        raise ParameterRangeError(f"--grid must be >= 4, got {grid}")
    if args.range == "major":
        xs = np.linspace(-ctx.tau, ctx.tau, grid)
    elif args.range == "minor":
        half = np.geomspace(ctx.tau, ctx.K, grid // 2)
        xs = np.concatenate([-half[::-1], half])
    else:
        raise ParameterRangeError(f"--range must be major or minor, got {args.range!r}")
    values = expsums.eval_L_many(ctx, xs)
    bound = ctx.trivial_mass
    rows = [
        {"x": float(x), "re": v.real, "im": v.imag, "abs": abs(v), "bound": bound}
        for x, v in zip(xs, values)
    ]
    write_report(rows, "csv", str(out))
    abs_vals = np.abs(values)
    if args.range == "minor":
        pos = xs > 0
        fig = plot_expsum_scan(xs[pos], abs_vals[pos],
                               np.full(int(pos.sum()), bound), out)
    else:
        fig = plot_expsum_scan(xs, abs_vals, np.full(len(xs), bound), out)
    arg = int(np.argmax(abs_vals))
    summary = {"range": args.range, "n_points": len(xs),
               "sup_abs": float(abs_vals[arg]), "argmax_x": float(xs[arg]),
               "out": str(out), "figure": str(fig)}
    write_report(summary, args.format, None)
    return 0


def _search_config(args) -> tuple[solver.SearchConfig, primes.PrimeTable]:
    X = as_float(args.bigx)
    cfg = solver.SearchConfig(
        c=as_float(args.c), Delta=as_float(args.delta), X=X,
        mu=as_float(args.mu),
        constraint=solver.Constraint.parse(args.constraint),
        weighting=args.weight)
    table = _load_or_build_table(max(100, math.ceil(X)))
    return cfg, table


def _solution_json(target_name: str, target: float,
                   report: solver.SolutionReport) -> dict:
    return {
        target_name: target,
        "count": report.count,
        "weighted": report.weighted,
        "prediction": report.prediction,
        "ratio": report.ratio,
        "exemplars": [
            {"primes": list(tup), "dist": dist} for tup, dist in report.exemplars
        ],
        "elapsed": report.elapsed,
    }


def cmd_search2(args) -> int:
    if args.r is None:
        raise ParameterRangeError("search2 requires --r")
    cfg, table = _search_config(args)
    report = solver.search_binary(as_float(args.r), cfg, table)
    write_report(_solution_json("R", as_float(args.r), report),
                 args.format, args.out)
    return 0


def cmd_search4(args) -> int:
    if args.n is None:
        raise ParameterRangeError("search4 requires --n")
    cfg, table = _search_config(args)
    report = solver.search_quaternary(as_float(args.n), cfg, table)
    write_report(_solution_json("N", as_float(args.n), report),
                 args.format, args.out)
    return 0


def cmd_scan(args) -> int:
    from .plotting import plot_scan

    cfg, table = _search_config(args)
    out = _check_out_path(args.scan_out)
    N = as_float(args.n) if args.n is not None else as_float(args.bigx) ** as_float(args.c)
    report = solver.scan_exceptional(N, as_int(args.samples), cfg, table,
                                     seed=as_int(args.seed),
                                     threads=_threads(args))
    write_report(report, "csv", str(out))
    fig = plot_scan([r.count for r in report.rows],
                    [r.R for r in report.rows],
                    [r.ratio for r in report.rows], out)
    summary = {
        "N": report.N, "samples": report.samples, "seed": report.seed,
        "fraction_zero": report.fraction_zero,
        "histogram": {str(k): v for k, v in report.histogram.items()},
        "ratio_min": report.ratio_min, "ratio_median": report.ratio_median,
        "ratio_max": report.ratio_max, "elapsed": report.elapsed,
        "out": str(out), "figure": str(fig),
    }
    write_report(summary, args.format, None)
    return 0


# ---------------------------------------------------------------------------
# paper-audit: end-to-end reproduction suites

def _suite_pairs() -> tuple[bool, str]:
    want = [
        ("ABA3B", pairs.TRIVIAL_PAIR, Fraction(11, 82), Fraction(57, 82)),
        ("BA4B", pairs.TRIVIAL_PAIR, Fraction(13, 31), Fraction(16, 31)),
        ("BA", pairs.HUXLEY_PAIR, Fraction(187, 659), Fraction(374, 659)),
    ]
    ok = 0
    for word, seed, kappa, lam in want:
        pair = pairs.eval_word(word, seed)
        ok += pair.kappa == kappa and pair.lam == lam
    return ok == len(want), f"{ok}/{len(want)} words reproduced exactly"


def _suite_params(c: Fraction) -> tuple[bool, str]:
    grid = params.sweep_audits(64)
    fails = sum(
        1 for report in grid.values() for row in report.rows
        if row.verdict == params.FAIL)
    single = _combined_audit(c)
    passed = fails == 0 and single.all_pass
    return passed, (f"{len(grid)} grid points, {fails} failing rows; "
                    f"audit at c={c} {'passes' if single.all_pass else 'fails'}")


def _suite_binary_margin() -> tuple[bool, str]:
    margin = sieve_functions.binary_margin(float(Fraction(53, 20)))
    closed = (80.0 * sieve_functions.E_GAMMA / 53.0) * (math.log(33.0 / 20.0) - 0.5)
    passed = margin > 0.0 and abs(margin - closed) <= 1e-10
    return passed, f"margin {format_float(margin)} vs closed form {format_float(closed)}"


def _suite_quaternary_margin() -> tuple[bool, str]:
    s0 = float(Fraction(62451, 20000))
    margin = sieve_functions.quaternary_margin(s0)
    cross = sieve_functions.quaternary_margin(s0, method="gauss")
    consistent = abs(margin - cross) <= 1e-9
    passed = consistent and margin >= QUATERNARY_PAPER_BOUND
    return passed, (f"margin {format_float(margin)} vs required "
                    f"{QUATERNARY_PAPER_BOUND} (quadratures agree to "
                    f"{format_float(abs(margin - cross))})")


def _suite_rosser() -> tuple[bool, str]:
    weights = rosser.build_weights(10**4, 50, validate=False)
    lower, mid, upper = rosser.sandwich_arrays(weights, 10**5)
    violations = int(np.count_nonzero((lower > mid) | (mid > upper)))
    sums = rosser.compute_sums(weights)
    ordered = sums.M_minus <= sums.P_frak <= sums.M_plus
    passed = violations == 0 and ordered
    return passed, (f"{violations} sandwich violations on n <= 1e5; "
                    f"sums ordered: {ordered}")


def _suite_kernel() -> tuple[bool, str]:
    kernel = expsums.SmoothingKernel(a=1.0, Delta=0.01, r=4)
    xs = np.logspace(-3, 4, 1000)
    worst = 0.0
    bad = 0
    for x in xs:
        t = abs(expsums.theta(kernel, float(x)))
        b = expsums.theta_bound(kernel, float(x))
        worst = max(worst, t - b)
        bad += t > b
    qmax = 0.0
    for x in np.logspace(-2, 1, 20):
        direct = expsums.theta_quadrature(kernel, float(x))
        qmax = max(qmax, abs(direct - expsums.theta(kernel, float(x))))
    passed = bad == 0 and qmax <= 1e-8
    return passed, (f"{bad}/1000 bound violations; quadrature gap "
                    f"{format_float(qmax)}")


def cmd_paper_audit(args) -> int:
    c = as_fraction(args.c)
    if not 1 < c < params.C_SUP:
        raise ParameterRangeError(
            f"c = {c} outside the theorem range (1, 1787/1502)")
    suites = [
        ("exponent-pairs", _suite_pairs()),
        ("parameter-audits", _suite_params(c)),
        ("binary-sieve-constant", _suite_binary_margin()),
        ("quaternary-sieve-constant", _suite_quaternary_margin()),
        ("rosser-sandwich", _suite_rosser()),
        ("kernel-bounds", _suite_kernel()),
    ]
    all_pass = all(passed for _, (passed, _) in suites)
    if as_bool(args.json):
        report = [
            {"suite": name, "passed": passed, "detail": detail}
            for name, (passed, detail) in suites
        ]
        report.append({"suite": "overall", "passed": all_pass,
                       "detail": f"{sum(p for _, (p, _) in suites)}/{len(suites)}"
                                 " suites passed"})
        sys.stdout.buffer.write(emit_report(report, "json"))
    else:
        print(f"{'suite':<28} {'verdict':<8} detail")
        for name, (passed, detail) in suites:
            print(f"{name:<28} {'PASS' if passed else 'FAIL':<8} {detail}")
        print(f"{'overall':<28} {'PASS' if all_pass else 'FAIL':<8} "
              f"{sum(p for _, (p, _) in suites)}/{len(suites)} suites passed")
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# parser construction

def _add_format(p: argparse.ArgumentParser, report_out: bool = True) -> None:
    _arg(p, "--format", default="json", choices=["json", "csv", "text"],
         help="stdout report format")
    if report_out:
        _arg(p, "--out", default=None,
             help="write the report here instead of stdout")


def _add_context_flags(p: argparse.ArgumentParser) -> None:
    _arg(p, "--c", default="11/10", help="exponent c")
    _arg(p, "--bigx", default="1e4", help="upper end X")
    _arg(p, "--mu", default="1/2", help="lower end factor: primes in (mu X, X]")
    _arg(p, "--dcap", default="10", help="sieve level D (weight support cap)")
    _arg(p, "--scheme", default="mobius",
         help="weight scheme: mobius, rosser:+ or rosser:-")
    _arg(p, "--z", default="5", help="sifting bound z for rosser schemes")
    _arg(p, "--e", default="2", help="log-power parameter E")


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    _arg(p, "--c", default="11/10", help="exponent c")
    _arg(p, "--bigx", "--x", dest="bigx", default="1e5", help="upper end X")
    _arg(p, "--delta", default="0.01", help="window half-width Delta")
    _arg(p, "--mu", default="1/2", help="lower end factor")
    _arg(p, "--constraint", default="none",
         help="shift condition on p+2: none, zrough:Z or omega:R")
    _arg(p, "--weight", default="log", choices=["unit", "log"],
         help="solution weights")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="diocheck",
        allow_abbrev=False,
        description="Numerical companion for binary/quaternary prime-power "
                    "inequalities: exponent pairs, sieve tables, exponential "
                    "sums, and desk-scale searches.")
    top.add_argument("--config", metavar="FILE",
                     help="key=value file supplying flag defaults")
    top.add_argument("--threads", default=None,
                     help="worker cap (default: available parallelism)")
    sub = top.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("pairs", allow_abbrev=False, help="exponent-pair calculus")
    p.set_defaults(func=cmd_pairs)
    _arg(p, "action", choices=["eval", "optimize"])
    _arg(p, "--word", default=None, help="process word, e.g. ABA3B or BA^4B")
    _arg(p, "--seed", default="trivial",
         help="starting pair: trivial, huxley, or 'K,L' rationals")
    _arg(p, "--objective", default="k+l",
         help="expression in k and l to minimize")
    _arg(p, "--depth", default="8", help="maximum word length for optimize")
    _add_format(p)

    p = sub.add_parser("params", allow_abbrev=False, help="theorem parameters and exponent audits")
    p.set_defaults(func=cmd_params)
    _arg(p, "action", choices=["derive", "audit"])
    _arg(p, "--c", default="11/10", help="exponent c (rational)")
    _arg(p, "--n", default=None, help="main parameter N for derive")
    _arg(p, "--e", default="2", help="log-power parameter E")
    _arg(p, "--mu", default="1/2", help="lower end factor")
    _arg(p, "--sweep", default=None,
         help="audit an interior grid of this many c values")
    _add_format(p)

    p = sub.add_parser("sieve-consts", allow_abbrev=False, help="linear-sieve functions F, f and margins")
    p.set_defaults(func=cmd_sieve_consts)
    _arg(p, "--s0", default="53/20", help="sifting parameter s0 (rational)")
    _arg(p, "--mode", default="binary", choices=["binary", "quaternary"])
    _add_format(p)

    p = sub.add_parser("rosser", allow_abbrev=False, help="Rosser weight tables and sandwich audit")
    p.set_defaults(func=cmd_rosser)
    _arg(p, "action", choices=["audit"])
    _arg(p, "--d", default="10000", help="sieve level D")
    _arg(p, "--z", default="50", help="sifting bound z")
    _arg(p, "--nmax", default="100000", help="audit all n up to this")
    _add_format(p)

    p = sub.add_parser("primes", allow_abbrev=False, help="prime/factor tables and cache")
    p.set_defaults(func=cmd_primes)
    _arg(p, "action", choices=["build", "stats"])
    _arg(p, "--limit", default="1000000", help="table limit")
    _arg(p, "--spf", default="false", help="also store smallest prime factors")
    _arg(p, "--out", dest="table_out", default=None,
         help="table file path for build (default: cache dir)")
    _add_format(p, report_out=False)

    p = sub.add_parser("expsum", allow_abbrev=False, help="exponential sums and smoothing kernel")
    p.set_defaults(func=cmd_expsum)
    _arg(p, "action", choices=["eval", "scan"])
    _arg(p, "--what", default="L", help="eval target: L, I, T or theta")
    _arg(p, "--x", default="0", help="frequency x")
    _add_context_flags(p)
    _arg(p, "--a", default="1", help="kernel half-width a (theta)")
    _arg(p, "--delta", default="0.01", help="kernel Delta (theta)")
    _arg(p, "--r", default="4", help="kernel smoothing order r (theta)")
    _arg(p, "--range", default="minor", choices=["minor", "major"],
         help="scan range")
    _arg(p, "--grid", default="4096", help="scan grid size")
    _arg(p, "--out", dest="scan_out", default="expsum_scan.csv",
         help="CSV output path for scan (figure goes alongside)")
    _add_format(p, report_out=False)

    p = sub.add_parser("search2", allow_abbrev=False, help="binary inequality search")
    p.set_defaults(func=cmd_search2)
    _arg(p, "--r", default=None, help="target R")
    _add_search_flags(p)
    _add_format(p)

    p = sub.add_parser("search4", allow_abbrev=False, help="quaternary inequality search")
    p.set_defaults(func=cmd_search4)
    _arg(p, "--n", default=None, help="target N")
    _add_search_flags(p)
    _add_format(p)

    p = sub.add_parser("scan", allow_abbrev=False, help="exceptional-set scan over sampled targets")
    p.set_defaults(func=cmd_scan)
    _arg(p, "--n", default=None, help="targets drawn from (N, 2N] (default X^c)")
    _arg(p, "--samples", default="1000", help="number of sampled targets")
    _arg(p, "--seed", default="42", help="RNG seed")
    _arg(p, "--out", dest="scan_out", default="scan.csv",
         help="CSV output path (figure goes alongside)")
    _add_search_flags(p)
    _add_format(p, report_out=False)

    p = sub.add_parser("paper-audit", allow_abbrev=False,
                       help="run the end-to-end reproduction suites")
    p.set_defaults(func=cmd_paper_audit)
    _arg(p, "--c", default="11/10", help="exponent c for the parameter audit")
    _arg(p, "--json", default="false", nargs="?", const="true",
         help="emit a JSON report instead of the table")
    return top


def _apply_config(parser: argparse.ArgumentParser, values: dict[str, str]) -> None:
    """Install config values as defaults on the parser and every subparser.

    Subparsers parse into a fresh namespace, so their action defaults would
    otherwise shadow set_defaults on the top-level parser; explicit flags
    still override because parsing overwrites defaults.
    """
    parser.set_defaults(**values)
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                known = {a.dest for a in sub._actions}
                sub.set_defaults(
                    **{k: v for k, v in values.items() if k in known})


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    try:
        if known.config:
            _apply_config(parser, read_config(known.config))
        args = parser.parse_args(argv)
        return args.func(args)
    except (ResourceBudgetError, OscillationBudgetError) as exc:
        print(f"diocheck: resource budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ParameterRangeError, InadmissiblePairError, DegenerateSieveError,
            ValueError, OSError) as exc:
        print(f"diocheck: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
