"""Command line front end.

Subcommands: moduli, solve, sweep, control, verify. Every command reads a
JSON problem file (--input), writes CSV-style lines to --out (default
stdout) with floats at 17 significant digits, and exits with a code from
the fixed partition: 0 ok, 2 input, 3 numeric breakdown, 4 locality or
regularity failure, 5 uncontrollable, 6 verification failed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .convex import AffineSet, Intersection
from .control import (TAU_FLOOR, calm_sweep, kalman_rank, linearize,
                      reachable_interior, steer, steering_setup,
                      _remainder, _weighted_operator)
from .errors import (ContractError, InfeasibilitySuspectedError,
                     LocalityError, NumericBreakdownError, ProblemFileError,
                     RegularityError, ShapeError, UncontrollableError)
from .linalg import least_norm_solve, operator_norm
from .moduli import (CSV_HEADER, ModulusEstimate, SampledMapping,
                     clm_estimate, fmt_float, lg_bound_check, lip_estimate,
                     lsc_probe, reg_linear, sampled_reg,
                     truncated_counterexample, verify_aubin,
                     verify_metric_regularity)
from .problems import ProblemFile, load_problem
from .selection import (GeneralizedEquation, IterationConfig, compute_tau,
                        default_config, solve, solve_implicit, sweep)
from .smooth import SmoothProblem, config_for, smooth_selection, split

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_LOCALITY = 4
EXIT_UNCONTROLLABLE = 5
EXIT_VERIFICATION = 6


class _Writer:
    """Collects output lines; flushed once so partial runs stay atomic."""

    def __init__(self, path: str | None):
        self.path = path
        self.lines: list[str] = []

    def line(self, text: str):
        self.lines.append(text)

    def flush(self):
        if not self.lines:
            return
        text = "\n".join(self.lines) + "\n"
        if self.path is None:
            sys.stdout.write(text)
        else:
            with open(self.path, "w", encoding="utf-8") as handle:
                handle.write(text)


def _parse_vector(text: str, flag: str) -> np.ndarray:
    parts = [tok.strip() for tok in text.split(",")]
    try:
        vals = [float(tok) for tok in parts if tok != ""]
    except ValueError:
        raise ProblemFileError(
            f"{flag}: expected comma-separated floats, got {text!r}")
    if not vals:
        raise ProblemFileError(f"{flag}: empty vector")
    return np.array(vals)


def _bool(value: bool) -> str:
    return "true" if value else "false"


def _seed(pf: ProblemFile, args) -> int:
    return args.seed if args.seed is not None else pf.seed


# ---------------------------------------------------------------------------
# building blocks shared by solve/sweep


def _generalized_pieces(pf: ProblemFile, args):
    """Equation and config for a generalized problem file."""
    mat = pf.matrix
    if pf.constraint is not None:
        def finv(w, _m=mat, _c=pf.constraint):
            return Intersection([AffineSet(_m, w), _c])
    else:
        def finv(w, _m=mat):
            return AffineSet(_m, w)
    if pf.perturbation is not None:
        g = pf.perturbation
    else:
        def g(x, _rows=mat.shape[0]):
            return np.zeros(_rows)
    equation = GeneralizedEquation(
        finv=finv, g=g, x_base=pf.base_x, y_base=pf.base_y,
        radius_x=pf.radius_x, radius_y=pf.radius_y,
        radius_graph=pf.radius_graph)
    seed = _seed(pf, args)
    consts = pf.constants
    if {"kappa", "lambda", "alpha"} <= set(consts):
        cfg = IterationConfig(kappa=consts["kappa"], lam=consts["lambda"],
                              alpha=consts["alpha"], tol=args.tol,
                              max_iter=args.max_iter)
    else:
        lip = lip_estimate(g, pf.base_x, pf.radius_x, samples=600, seed=seed)
        cfg = default_config(reg_linear(mat), lip.value, tol=args.tol,
                             max_iter=args.max_iter)
        if "kappa" in consts or "alpha" in consts or "lambda" in consts:
            cfg = IterationConfig(
                kappa=consts.get("kappa", cfg.kappa),
                lam=consts.get("lambda", cfg.lam),
                alpha=consts.get("alpha", cfg.alpha),
                tol=args.tol, max_iter=args.max_iter)
    return equation, cfg


def _smooth_problem(pf: ProblemFile) -> SmoothProblem:
    return SmoothProblem(f=pf.smooth_map, x_base=pf.base,
                         jacobian=pf.smooth_map.jacobian, radius=pf.radius)


def _certificate_lines(out: _Writer, cfg: IterationConfig, tau: float,
                       cert=None):
    out.line(f"kappa,{fmt_float(cfg.kappa)}")
    out.line(f"lambda,{fmt_float(cfg.lam)}")
    out.line(f"alpha,{fmt_float(cfg.alpha)}")
    out.line(f"tau,{fmt_float(tau)}")
    if cert is not None:
        out.line(f"iterations,{cert.iterate_count}")
        out.line(f"residual,{fmt_float(cert.residual)}")
        out.line(f"tail_bound,{fmt_float(cert.tail_bound)}")
        out.line(f"calm_ok,{_bool(cert.calm_ok)}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_moduli(pf: ProblemFile, args, out: _Writer) -> int:
    seed = _seed(pf, args)
    samples = args.samples
    rows: list = []
    if pf.kind == "linear":
        mat = pf.matrix
        base = pf.base_x if pf.base_x is not None else np.zeros(mat.shape[1])
        radius = args.radius if args.radius is not None else 1.0

        def g(x, _rows=mat.shape[0]):
            return np.zeros(_rows)

        rows.append(ModulusEstimate(kind="reg", value=reg_linear(mat), seed=seed))
        rows.append(lip_estimate(g, base, radius, samples=samples, seed=seed))
        rows.append(clm_estimate(g, base, radius, samples=samples, seed=seed))
    elif pf.kind == "smooth":
        problem = _smooth_problem(pf)
        radius = args.radius if args.radius is not None else problem.radius
        b = problem.base_jacobian
        x0 = problem.x_base

        def g(x, _b=b, _x0=x0, _f=problem.f):
            return np.asarray(_f(x), dtype=float) - _b @ (np.asarray(x) - _x0)

        rows.append(ModulusEstimate(kind="reg", value=reg_linear(b), seed=seed))
        rows.append(lip_estimate(g, x0, radius, samples=samples, seed=seed))
        rows.append(clm_estimate(g, x0, radius, samples=samples, seed=seed))
    elif pf.kind == "generalized":
        if pf.fixture is not None:
            raise ProblemFileError(
                "the counterexample fixture only supports the verify command")
        mat = pf.matrix
        radius = args.radius if args.radius is not None else pf.radius_x
        g = pf.perturbation if pf.perturbation is not None else (
            lambda x, _rows=mat.shape[0]: np.zeros(_rows))
        rows.append(ModulusEstimate(kind="reg", value=reg_linear(mat),
                                    seed=seed))
        rows.append(lip_estimate(g, pf.base_x, radius, samples=samples,
                                 seed=seed))
        rows.append(clm_estimate(g, pf.base_x, radius, samples=samples,
                                 seed=seed))
    else:
        problem = pf.control
        sys_ = linearize(problem)
        mat = _weighted_operator(sys_)
        g = _remainder(problem, sys_)
        radius = args.radius if args.radius is not None else 0.5
        center = np.zeros(mat.shape[1])
        rows.append(ModulusEstimate(kind="reg", value=reg_linear(mat), seed=seed))
        rows.append(lip_estimate(g, center, radius, samples=samples, seed=seed))
        rows.append(clm_estimate(g, center, radius, samples=samples, seed=seed))
    out.line(CSV_HEADER)
    for row in rows:
        out.line(row.csv_row())
    return EXIT_OK


def cmd_solve(pf: ProblemFile, args, out: _Writer) -> int:
    if pf.kind == "control":
        raise ProblemFileError(
            "control problems are driven by the control subcommand")
    if pf.kind == "generalized" and pf.fixture is not None:
        raise ProblemFileError("the counterexample fixture has no solver")
    target = args.target if args.target is not None else pf.target
    if target is None and args.parameter is None:
        raise ProblemFileError("solve needs --target (or --parameter)")
    if isinstance(target, str):
        target = _parse_vector(target, "--target")

    if pf.kind == "linear":
        mat = pf.matrix
        y = np.asarray(target, dtype=float)
        if y.size != mat.shape[0]:
            raise ProblemFileError(
                f"--target: expected {mat.shape[0]} components, got {y.size}")
        x = least_norm_solve(mat, y)
        out.line("x," + ",".join(fmt_float(v) for v in np.atleast_1d(x)))
        out.line(f"kappa,{fmt_float(reg_linear(mat))}")
        out.line(f"residual,{fmt_float(float(np.linalg.norm(mat @ x - y)))}")
        return EXIT_OK

    if pf.kind == "smooth":
        problem = _smooth_problem(pf)
        cfg = config_for(problem, seed=_seed(pf, args), tol=args.tol,
                         max_iter=args.max_iter)
        ge = split(problem)
        tau = compute_tau(cfg, (ge.radius_x, ge.radius_y))
        try:
            x, cert = smooth_selection(problem, target, cfg)
        except (LocalityError, RegularityError) as exc:
            _certificate_lines(out, cfg, tau)
            out.line(f"error,{exc}")
            return EXIT_LOCALITY
        out.line("x," + ",".join(fmt_float(v) for v in x))
        _certificate_lines(out, cfg, tau, cert)
        return EXIT_OK

    equation, cfg = _generalized_pieces(pf, args)
    tau = compute_tau(cfg, (equation.radius_x, equation.radius_y))
    try:
        if args.parameter is not None:
            p = _parse_vector(args.parameter, "--parameter")
            shifted = GeneralizedEquation(
                finv=equation.finv,
                g=lambda x, q, _g=equation.g: np.asarray(_g(x), dtype=float) + q,
                x_base=equation.x_base, y_base=equation.y_base,
                radius_x=equation.radius_x, radius_y=equation.radius_y,
                radius_graph=equation.radius_graph,
                p_base=np.zeros(equation.y_base.size))
            if p.size != equation.y_base.size:
                raise ProblemFileError(
                    f"--parameter: expected {equation.y_base.size} components")
            x, cert = solve_implicit(shifted, cfg, p)
        else:
            y = np.asarray(target, dtype=float)
            if y.size != equation.y_base.size:
                raise ProblemFileError(
                    f"--target: expected {equation.y_base.size} components, "
                    f"got {y.size}")
            x, cert = solve(equation, cfg, y)
    except (LocalityError, RegularityError) as exc:
        _certificate_lines(out, cfg, tau)
        out.line(f"error,{exc}")
        return EXIT_LOCALITY
    out.line("x," + ",".join(fmt_float(v) for v in x))
    _certificate_lines(out, cfg, tau, cert)
    return EXIT_OK


def cmd_sweep(pf: ProblemFile, args, out: _Writer) -> int:
    if pf.kind not in ("smooth", "generalized") or pf.fixture is not None:
        raise ProblemFileError(
            "sweep drives smooth or generalized problems")
    if args.grid is None or args.grid < 1:
        raise ProblemFileError("--grid: need a positive point count")
    target = args.target if args.target is not None else pf.target
    if target is None:
        raise ProblemFileError("sweep needs --target for the grid endpoint")
    if isinstance(target, str):
        target = _parse_vector(target, "--target")

    if pf.kind == "smooth":
        problem = _smooth_problem(pf)
        cfg = config_for(problem, seed=_seed(pf, args), tol=args.tol,
                         max_iter=args.max_iter)
        equation = split(problem)
    else:
        equation, cfg = _generalized_pieces(pf, args)
    base_out = equation.y_base + np.asarray(equation.g_value(equation.x_base),
                                            dtype=float)
    target = np.asarray(target, dtype=float)
    if target.size != equation.y_base.size:
        raise ProblemFileError(
            f"--target: expected {equation.y_base.size} components, got "
            f"{target.size}")
    if args.grid == 1:
        ys = [target]
    else:
        steps = np.linspace(0.0, 1.0, args.grid)
        ys = [base_out + t * (target - base_out) for t in steps]
    result = sweep(equation, cfg, ys)

    ydim = equation.y_base.size
    xdim = equation.x_base.size
    header = (["index", "status"] + [f"y{j + 1}" for j in range(ydim)]
              + [f"x{j + 1}" for j in range(xdim)] + ["iterations", "residual"])
    out.line(",".join(header))
    ok_rows = 0
    for i, row in enumerate(result.rows):
        cells = [str(i)]
        if row.x is None:
            cells.append("error")
        else:
            cells.append("ok")
            ok_rows += 1
        cells += [fmt_float(v) for v in row.y]
        if row.x is None:
            cells += [""] * xdim + ["", ""]
        else:
            cells += [fmt_float(v) for v in row.x]
            cells += [str(row.certificate.iterate_count),
                      fmt_float(row.certificate.residual)]
        out.line(",".join(cells))
    out.line(f"tau,{fmt_float(result.tau)}")
    out.line(f"gamma,{fmt_float(result.gamma)}")
    out.line(f"max_continuity_ratio,{fmt_float(result.max_continuity_ratio)}")
    out.line(f"empirical_clm,{fmt_float(result.empirical_clm)}")
    out.line(f"jumps,{len(result.jump_indices)}")
    return EXIT_OK if ok_rows else EXIT_LOCALITY


def cmd_control(pf: ProblemFile, args, out: _Writer) -> int:
    if pf.kind != "control":
        raise ProblemFileError("control drives control problem files")
    problem = pf.control
    if args.mesh is not None:
        from dataclasses import replace
        if args.mesh < 2:
            raise ProblemFileError("--mesh: need at least 2 intervals")
        problem = replace(problem, mesh_size=args.mesh)
    sys_ = linearize(problem)
    rank, rank_ok = kalman_rank(sys_)
    interior_ok, margin = reachable_interior(sys_, problem.control_set,
                                             seed=_seed(pf, args))
    out.line(f"kalman_rank,{rank}")
    out.line(f"kalman_controllable,{_bool(rank_ok)}")
    out.line(f"reachable_interior,{_bool(interior_ok)}")
    out.line(f"interior_margin,{fmt_float(margin)}")
    if not (rank_ok or interior_ok):
        out.line("error,neither controllability test passed")
        return EXIT_UNCONTROLLABLE

    target = args.target if args.target is not None else pf.target
    if target is None:
        raise ProblemFileError("control needs --target for the endpoint")
    if isinstance(target, str):
        target = _parse_vector(target, "--target")
    b = np.asarray(target, dtype=float)
    if b.size != problem.state_dim:
        raise ProblemFileError(
            f"--target: expected {problem.state_dim} components, got {b.size}")
    seed = _seed(pf, args)
    tau_target = max(TAU_FLOOR, 1.3 * float(np.linalg.norm(b)))

    if args.grid is not None:
        if args.grid < 1:
            raise ProblemFileError("--grid: need a positive point count")
        if args.grid == 1:
            targets = [b]
        else:
            steps = np.linspace(0.0, 1.0, args.grid)
            targets = [t * b for t in steps]
        try:
            result = calm_sweep(problem, sys_, targets, tau_target=tau_target,
                                tol=args.tol, seed=seed)
        except (LocalityError, RegularityError) as exc:
            out.line(f"error,{exc}")
            return EXIT_LOCALITY
        header = (["index", "status"]
                  + [f"b{j + 1}" for j in range(problem.state_dim)]
                  + ["endpoint_error", "calm_ratio"])
        out.line(",".join(header))
        ok_rows = 0
        for i, (t, res, err) in enumerate(zip(targets, result.results,
                                              result.errors)):
            if res is None:
                cells = [str(i), f"error: {err.replace(',', ';')}"]
                cells += [fmt_float(v) for v in t] + ["", ""]
            else:
                ok_rows += 1
                cells = [str(i), "ok"] + [fmt_float(v) for v in res.target]
                cells += [fmt_float(res.endpoint_error),
                          fmt_float(res.calm_ratio)]
            out.line(",".join(cells))
        out.line(f"tau,{fmt_float(result.tau)}")
        out.line(f"calm_bound,{fmt_float(result.calm_bound)}")
        out.line(f"max_calm_ratio,{fmt_float(result.max_calm_ratio)}")
        out.line(f"max_continuity_ratio,{fmt_float(result.max_continuity_ratio)}")
        return EXIT_OK if ok_rows else EXIT_LOCALITY

    try:
        setup = steering_setup(problem, sys_, tau_target=tau_target,
                               tol=args.tol, seed=seed)
        res = steer(problem, sys_, b, setup=setup)
    except (LocalityError, RegularityError) as exc:
        out.line(f"error,{exc}")
        return EXIT_LOCALITY
    out.line(f"tau,{fmt_float(res.tau)}")
    out.line(f"kappa,{fmt_float(setup.config.kappa)}")
    out.line(f"lambda,{fmt_float(setup.config.lam)}")
    out.line(f"iterations,{res.certificate.iterate_count}")
    out.line(f"endpoint_error,{fmt_float(res.endpoint_error)}")
    out.line(f"dynamics_residual,{fmt_float(res.dynamics_residual)}")
    out.line(f"calm_ratio,{fmt_float(res.calm_ratio)}")
    out.line(f"calm_bound,{fmt_float(res.calm_bound)}")
    for line in res.csv_lines():
        out.line(line)
    return EXIT_OK


def cmd_verify(pf: ProblemFile, args, out: _Writer) -> int:
    seed = _seed(pf, args)
    grid = args.grid if args.grid is not None else 11
    reports = []
    informational = []

    if pf.kind == "generalized" and pf.fixture is not None:
        # grid reconstruction cannot resolve the 1/k branch structure, so
        # the inequality checks are skipped; the probe is the whole point
        probe = lsc_probe(truncated_counterexample(),
                          at=(np.zeros(1), np.array([0.05])),
                          approach=[np.array([10.0 ** -j])
                                    for j in range(1, 15)])
        informational.append(probe)
    elif pf.kind == "linear":
        mat = pf.matrix
        base_x = pf.base_x if pf.base_x is not None else np.zeros(mat.shape[1])
        kappa = args.kappa if args.kappa is not None else 1.1 * reg_linear(mat)

        def forward(x, _m=mat):
            return _m @ x

        mapping = SampledMapping(
            forward=forward, x_base=base_x, y_base=mat @ base_x,
            radius_x=1.0, radius_y=2.0 * max(operator_norm(mat), 1e-9))
        reports.append(verify_metric_regularity(mapping, kappa, grid=grid))
        reports.append(verify_aubin(mapping, kappa, grid=grid))
    elif pf.kind == "generalized":
        mat = pf.matrix
        kappa = args.kappa if args.kappa is not None else 1.1 * reg_linear(mat)

        def forward(x, _m=mat):
            return _m @ x

        mapping = SampledMapping(
            forward=forward, x_base=pf.base_x, y_base=mat @ pf.base_x,
            radius_x=pf.radius_x,
            radius_y=2.0 * max(operator_norm(mat), 1e-9) * pf.radius_x)
        reports.append(verify_metric_regularity(mapping, kappa, grid=grid))
        reports.append(verify_aubin(mapping, kappa, grid=grid))
        if pf.perturbation is not None:
            lip = lip_estimate(pf.perturbation, pf.base_x, pf.radius_x,
                               samples=600, seed=seed)
            lam = pf.constants.get("lambda", 1.2 * lip.value)
            if lam <= 0:
                lam = 0.5 / kappa
            report, _ = lg_bound_check(mat, pf.perturbation, pf.base_x,
                                       kappa=kappa, lam=lam,
                                       radius=pf.radius_x, grid=grid,
                                       seed=seed)
            reports.append(report)
    elif pf.kind == "smooth":
        problem = _smooth_problem(pf)
        mapping = SampledMapping(
            forward=lambda x: np.asarray(problem.f(x), dtype=float),
            x_base=problem.x_base, y_base=problem.y_base,
            radius_x=problem.radius,
            radius_y=2.0 * (operator_norm(problem.base_jacobian) + 1.0)
            * problem.radius)
        if args.kappa is not None:
            kappa = args.kappa
        else:
            kappa = 1.05 * sampled_reg(mapping, grid=grid).value
        reports.append(verify_metric_regularity(mapping, kappa, grid=grid))
        reports.append(verify_aubin(mapping, kappa, grid=grid))
    else:
        raise ProblemFileError("verify does not drive control problems")

    out.line(CSV_HEADER)
    for report in reports:
        out.line(report.csv_row())
    for probe in informational:
        witness = fmt_float(float(probe.witness_x[0]))
        tail = fmt_float(min(probe.distances[3:]) if probe.distances[3:]
                         else float("nan"))
        out.line(f"lsc-probe,{tail},,,,{probe.verdict},{witness}")
    if all(r.ok for r in reports):
        return EXIT_OK
    return EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# parser and dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regsel",
        description="Calm local selections of regular set-valued inverses: "
                    "modulus estimation, solving, sweeping, steering, and "
                    "verification over JSON problem files.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="problem file (JSON)")
        p.add_argument("--seed", type=int, default=None,
                       help="sampling seed (default: the file's seed)")
        p.add_argument("--tol", type=float, default=1e-10,
                       help="iteration tolerance")
        p.add_argument("--out", default=None,
                       help="output path (default stdout)")

    p = sub.add_parser(
        "moduli", help="estimate reg/lip/clm moduli",
        description="Emits CSV with columns kind,value,radius,samples,seed,"
                    "verdict,witness: one row per modulus.")
    common(p)
    p.add_argument("--radius", type=float, default=None,
                   help="sampling ball radius")
    p.add_argument("--samples", type=int, default=3000,
                   help="sample budget per estimate")
    p.set_defaults(func=cmd_moduli)

    p = sub.add_parser(
        "solve", help="solve one query through the selection engine",
        description="Emits the solution row x,<components> followed by "
                    "certificate lines kappa/lambda/alpha/tau/iterations/"
                    "residual/tail_bound/calm_ok.")
    common(p)
    p.add_argument("--target", default=None, help="query y (comma separated)")
    p.add_argument("--parameter", default=None,
                   help="parameter p for the implicit variant")
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser(
        "sweep", help="solve along a query grid and report continuity",
        description="Emits CSV with columns index,status,y*,x*,iterations,"
                    "residual, then summary lines tau/gamma/"
                    "max_continuity_ratio/empirical_clm/jumps.")
    common(p)
    p.add_argument("--target", default=None, help="grid endpoint")
    p.add_argument("--grid", type=int, default=None, help="grid point count")
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "control", help="check controllability and steer endpoints",
        description="Emits controllability lines (kalman_rank, "
                    "kalman_controllable, reachable_interior, "
                    "interior_margin), then either certificate lines plus a "
                    "trajectory CSV (columns t,x*,u*) or, with --grid, "
                    "per-target rows index,status,b*,endpoint_error,"
                    "calm_ratio.")
    common(p)
    p.add_argument("--target", default=None, help="endpoint target b")
    p.add_argument("--grid", type=int, default=None,
                   help="sweep targets on the segment 0 -> b")
    p.add_argument("--mesh", type=int, default=None, help="mesh override")
    p.set_defaults(func=cmd_control)

    p = sub.add_parser(
        "verify", help="run distance-inequality verdicts",
        description="Emits CSV rows (columns as in moduli) with pass/fail "
                    "verdicts for the regularity and Aubin checks, the "
                    "perturbation bound when a perturbation is present, and "
                    "an informational lsc-probe row for the counterexample "
                    "fixture. Exit 6 when any verdict fails.")
    common(p)
    p.add_argument("--kappa", type=float, default=None,
                   help="constant to verify (default: 1.1x measured)")
    p.add_argument("--grid", type=int, default=None, help="grid per axis")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    out = _Writer(args.out)
    try:
        pf = load_problem(args.input)
        code = args.func(pf, args, out)
    except ProblemFileError as exc:
        print(f"regsel: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ContractError, ShapeError) as exc:
        print(f"regsel: contract violation: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericBreakdownError, InfeasibilitySuspectedError) as exc:
        out.flush()
        print(f"regsel: numeric breakdown: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (LocalityError, RegularityError) as exc:
        out.flush()
        print(f"regsel: locality/regularity: {exc}", file=sys.stderr)
        return EXIT_LOCALITY
    except UncontrollableError as exc:
        out.line(f"kalman_controllable,{_bool(exc.rank_verdict)}")
        out.line(f"reachable_interior,{_bool(exc.interior_verdict)}")
        out.line(f"error,{exc}")
        out.flush()
        print(f"regsel: uncontrollable: {exc}", file=sys.stderr)
        return EXIT_UNCONTROLLABLE
    out.flush()
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
