"""Command-line front end: solving, spectral analysis, theta sweeps, and
method benchmarks. stdout carries machine-readable JSON/CSV paths only;
diagnostics go to stderr. Exit codes: 0 converged/success, 1 usage or input
error, 2 iteration cap, 3 divergence.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings

from . import complexity, io, spectral, solvers
from .problem import RidgeProblem, solve_direct

# Conditioning reports need the full SVD; skip them past this size.
_SVD_REPORT_CAP = 2000

_STATUS_EXIT = {solvers.CONVERGED: 0, solvers.MAX_ITER: 2, solvers.DIVERGED: 3}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_theta(text: str):
    if text.lower() in (solvers.OPTIMAL, solvers.PURE):
        return text.lower()
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"theta must be a number, 'optimal' or 'pure', got {text!r}")


def _parse_gen(text: str) -> io.GeneratorSpec:
    """--gen 'd=10,n=500,m=1,lambda=0.002,seed=7[,dist=normal]'."""
    fields = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, _, value = item.partition("=")
        fields[key.strip().lower()] = value.strip()
    try:
        return io.GeneratorSpec(
            d=int(fields["d"]),
            n=int(fields["n"]),
            m=int(fields.get("m", "1")),
            lam=float(fields.get("lambda", "1.0")),
            seed=int(fields.get("seed", "0")),
            distribution=fields.get("dist", io.STANDARD_NORMAL),
        )
    except (KeyError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"bad --gen spec {text!r}: {exc}")


def _load(args) -> RidgeProblem:
    if getattr(args, "gen", None) is not None:
        return io.generate_problem(args.gen)
    if getattr(args, "problem", None) is None:
        raise SystemExit("either a problem path or --gen is required")
    return io.load_problem(args.problem)


def _conditioning_info(problem):
    """(SpectralInfo, kappa, factors) or Nones when the SVD is too big."""
    if min(problem.d, problem.big_n) > _SVD_REPORT_CAP:
        return None, None, None
    info = spectral.SpectralInfo.from_problem(problem)
    kappa = complexity.conditioning(problem, info).kappa
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        factors = complexity.complexity_factors(info)
    return info, kappa, factors


def _method_report(problem, method, result, info, kappa, factors):
    theta = result.theta_used
    if method == solvers.CG or info is None:
        rho = None
    else:
        rho = spectral.rho_theory(method, theta, info.sigma1, problem.lam_n)
    rho_emp = result.trace.rate_estimate[-1] if result.trace and len(result.trace) else None
    try:
        cost = complexity.cost_per_iteration(method, problem.d, problem.big_n)
    except ValueError:
        cost = None
    return io.solver_report(
        method=method,
        theta=theta,
        rho_theory=rho,
        rho_empirical=rho_emp,
        iterations=result.iterations,
        kappa=kappa,
        factors=factors,
        cost_per_iter=cost,
        status=result.status,
    )


def cmd_solve(args) -> int:
    problem = _load(args)
    config = solvers.SolverConfig(
        method=args.method,
        theta=args.theta,
        max_iter=args.max_iter,
        tol=args.tol,
        tol_metric=args.tol_metric,
        record_trace=True,
        exact_sigma=args.exact_sigma,
    )
    x_star = solve_direct(problem) if problem.d <= _SVD_REPORT_CAP else None
    result = solvers.solve(problem, config, x_star=x_star)
    info, kappa, factors = _conditioning_info(problem)
    report = _method_report(problem, config.method, result, info, kappa, factors)
    print(json.dumps(report, indent=2))
    if args.trace is not None:
        if result.trace is not None and len(result.trace):
            io.write_trace(result.trace, args.trace)
            print(f"trace written to {args.trace}", file=sys.stderr)
        else:
            print("no iterations performed; trace not written", file=sys.stderr)
    return _STATUS_EXIT[result.status]


def cmd_spectrum(args) -> int:
    problem = _load(args)
    info = spectral.SpectralInfo.from_problem(problem)
    theta = args.theta
    rows = []
    rows += [("M1", ev) for ev in spectral.spectrum_m1(info)]
    rows += [("M2", ev) for ev in spectral.spectrum_m2(info)]
    rows += [("G1", ev) for ev in spectral.spectrum_g1(info, theta)]
    rows += [("G2", ev) for ev in spectral.spectrum_g2(info, theta)]
    rows += [("G3", ev) for ev in spectral.spectrum_g3(info, theta)]
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("matrix,re,im\n")
        for tag, ev in rows:
            fh.write(f"{tag},{float(ev.real)!r},{float(ev.imag)!r}\n")
        for tb in spectral.theta_thresholds(info):
            fh.write(f"theta_bar,{float(tb)!r},0.0\n")
    print(json.dumps({"out": args.out, "theta": theta, "rank": info.p,
                      "theta_bar": [float(t) for t in spectral.theta_thresholds(info)]}))
    return 0


def cmd_sweep_theta(args) -> int:
    problem = _load(args)
    method = args.method.upper()
    if method == solvers.CG:
        raise SystemExit("sweep-theta applies to the fixed-point methods only")
    sigma1 = solvers.sigma1_estimate(problem, exact=True)
    upper = spectral.admissible_upper(method, sigma1, problem.lam_n)
    thetas = [1.1 * upper * i / args.grid for i in range(1, args.grid + 1)]
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("theta,rho_theory,converged_flag,iters_to_tol\n")
        for theta in thetas:
            rho = spectral.rho_theory(method, theta, sigma1, problem.lam_n)
            config = solvers.SolverConfig(
                method=method, theta=theta, max_iter=args.max_iter, tol=args.tol
            )
            result = solvers.solve(problem, config)
            flag = 1 if result.status == solvers.CONVERGED else 0
            iters = result.iterations if flag else -1
            fh.write(f"{theta!r},{rho!r},{flag},{iters}\n")
    print(json.dumps({"out": args.out, "method": method, "admissible_upper": upper,
                      "optimal_theta": spectral.optimal_theta(method, sigma1, problem.lam_n)}))
    return 0


def cmd_bench(args) -> int:
    problem = _load(args)
    methods = [m.strip().upper() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in solvers.METHODS:
            raise SystemExit(f"unknown method {m!r}")
    x_star = solve_direct(problem) if problem.d <= _SVD_REPORT_CAP else None
    info, kappa, factors = _conditioning_info(problem)
    reports = []
    for method in methods:
        config = solvers.SolverConfig(
            method=method, theta=args.theta, max_iter=args.max_iter,
            tol=args.tol, record_trace=True,
        )
        start = time.perf_counter()
        result = solvers.solve(problem, config, x_star=x_star)
        elapsed = time.perf_counter() - start
        report = _method_report(problem, method, result, info, kappa, factors)
        report["seconds"] = round(elapsed, 6)
        if report["cost_per_iter"] is not None:
            report["cost_total"] = report["cost_per_iter"] * result.iterations
        else:
            report["cost_total"] = None
        reports.append(report)
        print(f"{method}: {result.status} in {result.iterations} iterations "
              f"({elapsed:.3f}s)", file=sys.stderr)
    text = json.dumps(reports, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


def cmd_gen(args) -> int:
    spec = io.GeneratorSpec(
        d=args.d, n=args.n, m=args.m, lam=args.lam, seed=args.seed,
        distribution=args.dist,
    )
    problem = io.generate_problem(spec)
    io.save_problem(problem, args.out)
    print(json.dumps({"out": args.out, "d": spec.d, "n": spec.n, "m": spec.m,
                      "lambda": spec.lam, "seed": spec.seed, "dist": spec.distribution}))
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="ridgefp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_source(p, allow_gen=True):
        p.add_argument("problem", nargs="?", help="problem file path")
        if allow_gen:
            p.add_argument("--gen", type=_parse_gen, default=None,
                           help="generate instead of load: d=..,n=..,m=..,lambda=..,seed=..")

    p = sub.add_parser("solve", help="run one solver and print a JSON report")
    add_problem_source(p)
    p.add_argument("--method", required=True,
                   type=str, help="pdfp1|pdfp2|qtz|nqtz|mqtz|mqtz2|cg")
    p.add_argument("--theta", type=_parse_theta, default="optimal",
                   help="number, 'optimal' or 'pure' (default optimal)")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--tol-metric", choices=[solvers.GAP, solvers.RESIDUAL],
                   default=solvers.GAP)
    p.add_argument("--max-iter", type=int, default=100_000)
    p.add_argument("--trace", default=None, help="write per-iteration CSV here")
    p.add_argument("--exact-sigma", action="store_true",
                   help="resolve optimal theta from a full SVD instead of power iteration")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", help="closed-form spectra of all iteration matrices")
    add_problem_source(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep-theta", help="rate/convergence over a theta grid")
    add_problem_source(p)
    p.add_argument("--method", required=True)
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=20_000)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_sweep_theta)

    p = sub.add_parser("bench", help="compare methods at matched tolerance")
    add_problem_source(p)
    p.add_argument("--methods", default="pdfp1,pdfp2,qtz,nqtz,mqtz,mqtz2,cg")
    p.add_argument("--theta", type=_parse_theta, default="optimal")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=200_000)
    p.add_argument("--out", default=None, help="also write the JSON array here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a generated problem file")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", choices=[io.STANDARD_NORMAL, io.UNIFORM01],
                   default=io.STANDARD_NORMAL)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (OSError, ValueError) as exc:
        print(f"ridgefp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
