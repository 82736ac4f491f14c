"""Command-line front end.

Subcommands:

    eval    evaluate a q-special function at points (series or product route)
    solve   solve a Jackson q-difference equation from a problem JSON file
    order   estimate the logarithmic order of a named model over a radius grid
    verify  run a named identity/theorem check suite

Complex numbers are written "re+imi" on the command line ("2", "0.5i",
"1+0.5i") and as [re, im] pairs in JSON files. Exit codes: 0 success,
1 check failure, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .checks import SUITES, run_suite
from .errors import (
    JacksonQError,
    RegimeMismatch,
    SchemaError,
    UnknownFunction,
)
from .nevanlinna import (
    MeroModel,
    RadialGrid,
    characteristic,
    log_order_from_T,
    log_order_from_counting,
    log_order_from_nu,
    samples_to_csv,
)
from .qcore import QParam, TruncatedSeries
from .qode import QdeProblem, RationalFunction, residual, solve_series
from .qspecial import (
    BigEProduct,
    EtildeProduct,
    big_e_q,
    etilde_q,
    exp_q,
    phi_rs,
    PhiParams,
    sinq_cosq,
)

_EVAL_FNS = ("exp_q", "etilde_q", "E_q", "sin_q", "cos_q", "phi_rs")
_ORDER_MODELS = ("etilde_q", "E_q", "exp_q", "polynomial")


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """Parse 're+imi' literals: '2', '-0.5', 'i', '-1.5i', '1+0.5i',
    '1e-3-2e2i'."""
    s = str(text).strip().replace(" ", "")
    if not s:
        raise SchemaError("empty complex literal")
    if s[-1] in "iIjJ":
        body = s[:-1]
        split = None
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                split = pos
                break
        if split is None:
            re_s, im_s = "", body
        else:
            re_s, im_s = body[:split], body[split:]
        try:
            if im_s in ("", "+"):
                im = 1.0
            elif im_s == "-":
                im = -1.0
            else:
                im = float(im_s)
            re = float(re_s) if re_s else 0.0
        except ValueError as e:
            raise SchemaError(f"bad complex literal {text!r}") from e
        return complex(re, im)
    try:
        return complex(float(s), 0.0)
    except ValueError as e:
        raise SchemaError(f"bad complex literal {text!r}") from e


def format_complex(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:.17g}"
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _json_complex(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v, 0.0)
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(x, (int, float)) for x in v)):
        return complex(v[0], v[1])
    raise SchemaError(f"{where}: expected number or [re, im], got {v!r}")


def _json_complex_list(v, where: str) -> list:
    if not isinstance(v, list) or not v:
        raise SchemaError(f"{where}: expected a nonempty list")
    return [_json_complex(x, f"{where}[{i}]") for i, x in enumerate(v)]


def parse_grid(text: str) -> tuple:
    """'rmin:rmax:points' -> (rmin, rmax, points)."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise SchemaError("grid must be rmin:rmax:points")
    try:
        rmin, rmax, pts = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise SchemaError(f"bad grid spec {text!r}") from e
    if pts < 4:
        raise SchemaError("grid needs at least 4 points")
    if not (0 < rmin < rmax):
        raise SchemaError("grid needs 0 < rmin < rmax")
    return rmin, rmax, pts


@dataclass(frozen=True)
class RunConfig:
    """Everything a command run depends on; fixed config means identical
    output bytes."""

    command: str
    q: complex = 0.5
    N: int = 48
    grid: tuple = (1e2, 1e6, 9)
    nodes: int = 512
    tol: float = 1e-12
    seed: int = 20240501
    out: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.tol <= 0:
            raise SchemaError("tolerance must be positive")
        if self.grid[2] < 4:
            raise SchemaError("grid needs at least 4 points")

    def radial_grid(self) -> RadialGrid:
        return RadialGrid.log_spaced(self.grid[0], self.grid[1], self.grid[2],
                                     angular_nodes=self.nodes)


def _emit(cfg: RunConfig, csv_text: str, json_obj) -> None:
    if cfg.out is None:
        return
    with open(cfg.out, "w") as fh:
        if cfg.fmt == "csv":
            fh.write(csv_text)
        else:
            json.dump(json_obj, fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _eval_series(name: str, qp: QParam, N: int, alphas, betas) -> TruncatedSeries:
    if name == "exp_q":
        return exp_q(qp, N)
    if name == "etilde_q":
        return etilde_q(qp, N)
    if name == "E_q":
        return big_e_q(qp, N)
    if name == "sin_q":
        return sinq_cosq(qp, N)[0]
    if name == "cos_q":
        return sinq_cosq(qp, N)[1]
    if name == "phi_rs":
        return phi_rs(PhiParams(tuple(alphas), tuple(betas), qp), N)
    raise UnknownFunction(f"unknown function id {name!r}")


def _eval_product(name: str, qp: QParam, z: complex, tol: float) -> complex:
    if name == "etilde_q":
        return EtildeProduct(qp, tol).eval(z)  # raises RegimeMismatch |q|<=1
    if name == "E_q":
        return BigEProduct(qp, tol).eval(z)
    raise RegimeMismatch(f"{name} has no product form")


def cmd_eval(cfg: RunConfig, name: str, zs, route: str, alphas, betas) -> int:
    if name not in _EVAL_FNS:
        raise UnknownFunction(
            f"unknown function id {name!r}; choose from {_EVAL_FNS}")
    qp = QParam(cfg.q)
    series = _eval_series(name, qp, cfg.N, alphas, betas)
    rows = []
    for z in zs:
        used = route
        if route == "auto":
            certified = (series.safe_radius is not None
                         and abs(z) <= series.safe_radius)
            if certified:
                used = "series"
            else:
                try:
                    _eval_product(name, qp, 0.0, cfg.tol)
                    used = "product"
                except RegimeMismatch:
                    used = "series"  # uncertified; error bound reported NaN
        if used == "series":
            val = series.eval(z)
            certified = (series.safe_radius is not None
                         and abs(z) <= series.safe_radius * (1 + 1e-12))
            err = series.tail_tol if certified else math.nan
        else:
            val = _eval_product(name, qp, z, cfg.tol)
            err = 2.0 * cfg.tol * abs(val)
        rows.append((z, val, err))
    print(f"# {name} at q = {format_complex(cfg.q)} (N = {cfg.N})")
    for z, val, err in rows:
        print(f"z = {format_complex(z):>24s}  ->  {format_complex(val)}"
              f"   (err <= {err:.3g})")
    csv_text = "z_re,z_im,value_re,value_im,err_bound\n" + "".join(
        f"{z.real:.16e},{z.imag:.16e},{v.real:.16e},{v.imag:.16e},{e:.16e}\n"
        for z, v, e in rows)
    json_obj = {
        "function": name,
        "q": [cfg.q.real, cfg.q.imag],
        "N": cfg.N,
        "values": [
            {"z": [z.real, z.imag], "value": [v.real, v.imag], "err_bound": e}
            for z, v, e in rows
        ],
    }
    _emit(cfg, csv_text, json_obj)
    return 0


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def load_problem(path: str):
    """Problem JSON: {"k": int, "q": num|[re,im], "A": {"num": [...],
    "den": [...]}, "B": {...} (optional), "initial": [...], "N": int}."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise SchemaError(f"cannot read problem file: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(
            f"JSON parse error at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(data, dict):
        raise SchemaError("problem file must hold a JSON object")

    def rational(key: str, default_zero: bool) -> RationalFunction:
        if key not in data:
            if default_zero:
                return RationalFunction([0.0])
            raise SchemaError(f"missing field {key!r}")
        v = data[key]
        if not isinstance(v, dict) or "num" not in v:
            raise SchemaError(f"{key}: expected {{'num': [...], 'den': [...]}}")
        num = _json_complex_list(v["num"], f"{key}.num")
        den = _json_complex_list(v.get("den", [1.0]), f"{key}.den")
        return RationalFunction(num, den)

    for field_name in ("k", "q", "A", "initial"):
        if field_name not in data:
            raise SchemaError(f"missing field {field_name!r}")
    k = data["k"]
    if not isinstance(k, int) or k < 1:
        raise SchemaError("k must be an integer >= 1")
    q = _json_complex(data["q"], "q")
    A = rational("A", default_zero=False)
    B = rational("B", default_zero=True)
    initial = _json_complex_list(data["initial"], "initial")
    if len(initial) != k:
        raise SchemaError(f"initial must list exactly k = {k} coefficients")
    N = data.get("N", 32)
    if not isinstance(N, int) or N < k:
        raise SchemaError("N must be an integer >= k")
    try:
        prob = QdeProblem(k, A, B, QParam(q), tuple(initial))
    except JacksonQError as e:
        raise SchemaError(f"invalid problem: {e}") from e
    return prob, N


def cmd_solve(cfg: RunConfig, path: str, N_override: Optional[int]) -> int:
    prob, N = load_problem(path)
    if N_override is not None:
        N = N_override
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        f = solve_series(prob, N)
    for w in caught:
        print(f"# warning: {w.message}")
    _, max_abs = residual(prob, f)
    scale = max(1.0, float(np.max(np.abs(f.coeffs))))
    ok = max_abs <= 1e-8 * scale
    print(f"# solved k={prob.k}, q={format_complex(prob.qp.q)}, N={N}")
    print(f"# residual max |coeff| = {max_abs:.3e} (scale {scale:.3e})")
    shown = min(N, 10)
    for n in range(shown + 1):
        print(f"c[{n:3d}] = {format_complex(f.c(n))}")
    if N > shown:
        print(f"# ... {N - shown} more (see --out)")
    csv_text = "n,c_re,c_im\n" + "".join(
        f"{n},{f.c(n).real:.16e},{f.c(n).imag:.16e}\n" for n in range(N + 1))
    json_obj = {
        "k": prob.k,
        "q": [prob.qp.q.real, prob.qp.q.imag],
        "N": N,
        "residual_max": max_abs,
        "coefficients": [[f.c(n).real, f.c(n).imag] for n in range(N + 1)],
    }
    _emit(cfg, csv_text, json_obj)
    if not ok:
        print(f"# FAIL residual exceeds 1e-8 * scale", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# order
# ---------------------------------------------------------------------------


def _order_models(name: str, qp: QParam, N: int, coeffs):
    """(estimator list, series or None, sweepable model or None)."""
    if name == "etilde_q":
        if abs(qp.q) <= 1.0:
            raise RegimeMismatch("etilde_q is entire only for |q| > 1")
        prod = EtildeProduct(qp)
        model = MeroModel.from_q_product(prod.zeros_up_to, prod.log_eval,
                                         eval_fn=prod.eval, qp=qp)
        return ["nu", "counting"], etilde_q(qp, N), model
    if name == "E_q":
        if abs(qp.q) >= 1.0:
            raise RegimeMismatch("E_q is entire only for |q| < 1")
        prod = BigEProduct(qp)
        model = MeroModel.from_q_product(prod.zeros_up_to, prod.log_eval,
                                         eval_fn=prod.eval, qp=qp)
        return ["counting", "nu"], big_e_q(qp, N), model
    if name == "exp_q":
        if abs(qp.q) <= 1.0:
            raise RegimeMismatch("exp_q is entire only for |q| > 1")
        return ["nu"], exp_q(qp, N), None
    if name == "polynomial":
        if coeffs is None:
            raise SchemaError("polynomial model needs --coeffs")
        rf = RationalFunction(coeffs)
        if rf.num_degree < 1:
            raise SchemaError("polynomial must be nonconstant")
        return ["T"], None, MeroModel.from_rational(rf)
    raise UnknownFunction(
        f"unknown order model {name!r}; choose from {_ORDER_MODELS}")


def cmd_order(cfg: RunConfig, name: str, estimator: str, coeffs) -> int:
    qp = QParam(cfg.q) if name != "polynomial" else QParam(0.5)
    auto, series, model = _order_models(name, qp, cfg.N, coeffs)
    wanted = auto if estimator == "auto" else [estimator]
    grid = cfg.radial_grid()
    estimates = []
    samples = []
    for est_name in wanted:
        if est_name == "nu":
            if series is None:
                raise SchemaError(f"{name} has no series route")
            est = log_order_from_nu(series, grid)
        elif est_name == "counting":
            if model is None or model.kind != "q_product":
                raise SchemaError(f"{name} has no zero lattice")
            est = log_order_from_counting(model, grid, target=0.0)
        elif est_name == "T":
            if model is None:
                raise SchemaError(f"{name} has no sweepable model")
            samples = [characteristic(model, r, cfg.nodes)
                       for r in grid.avoiding(
                           model.known_moduli(grid.radii[-1] * 2)).radii]
            est = log_order_from_T(samples)
        else:
            raise SchemaError(f"unknown estimator {estimator!r}")
        estimates.append(est)
    print(f"# logarithmic order of {name} at q = {format_complex(cfg.q)}")
    for est in estimates:
        print(f"sigma_log[{est.estimator:>8s}] = {est.value:.4f} "
              f"+- {est.half_width:.4f}")
    if cfg.out and cfg.fmt == "csv" and not samples and model is not None:
        samples = [characteristic(model, r, cfg.nodes)
                   for r in grid.avoiding(
                       model.known_moduli(grid.radii[-1] * 2)).radii]
    csv_text = samples_to_csv(samples) if samples else (
        "estimator,sigma_log,half_width\n" + "".join(
            f"{e.estimator},{e.value:.16e},{e.half_width:.16e}\n"
            for e in estimates))
    json_obj = {
        "model": name,
        "q": [cfg.q.real, cfg.q.imag],
        "grid": list(cfg.grid),
        "estimates": [
            {"estimator": e.estimator, "sigma_log": e.value,
             "half_width": e.half_width} for e in estimates
        ],
        "samples": [
            {"r": s.r, "m": s.m, "N_0": s.N0, "N_inf": s.Ninf, "T": s.T,
             "nJ_0": s.nJ0, "nJ_inf": s.nJinf, "quad_err": s.quad_err}
            for s in samples
        ],
    }
    _emit(cfg, csv_text, json_obj)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    if suite != "all" and suite not in SUITES:
        raise SchemaError(
            f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    rows = run_suite(suite, seed=cfg.seed)
    for row in rows:
        print(row.line())
    failures = [r for r in rows if not r.passed]
    print(f"# {len(rows) - len(failures)}/{len(rows)} checks passed")
    csv_text = "suite,name,passed,value,threshold\n" + "".join(
        f"{r.suite},{r.name},{int(r.passed)},{r.value:.16e},{r.threshold:.16e}\n"
        for r in rows)
    json_obj = [
        {"suite": r.suite, "name": r.name, "passed": r.passed,
         "value": r.value, "threshold": r.threshold} for r in rows
    ]
    _emit(cfg, csv_text, json_obj)
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="jacksonq",
        description="Jackson q-difference calculus and Nevanlinna toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--q", default="0.5",
                        help="base q as re+imi (default 0.5)")
        sp.add_argument("--N", type=int, default=None,
                        help="truncation order (default 48; solve: the "
                             "problem file's N)")
        sp.add_argument("--grid", default="1e2:1e6:9",
                        help="rmin:rmax:points (log-spaced)")
        sp.add_argument("--nodes", type=int, default=512,
                        help="angular quadrature nodes")
        sp.add_argument("--tol", type=float, default=1e-12)
        sp.add_argument("--seed", type=int, default=20240501)
        sp.add_argument("--out", default=None, help="artifact path")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default="csv")

    pe = sub.add_parser("eval", help="evaluate a q-special function")
    common(pe)
    pe.add_argument("--fn", required=True, help="|".join(_EVAL_FNS))
    pe.add_argument("--z", action="append", default=None,
                    help="evaluation point re+imi (repeatable)")
    pe.add_argument("--route", choices=("auto", "series", "product"),
                    default="auto")
    pe.add_argument("--alpha", default="", help="phi_rs upper params, comma-sep")
    pe.add_argument("--beta", default="", help="phi_rs lower params, comma-sep")

    ps = sub.add_parser("solve", help="solve D_q^k f + A f = B from JSON")
    common(ps)
    ps.add_argument("--problem", required=True, help="problem JSON path")

    po = sub.add_parser("order", help="logarithmic order estimation")
    common(po)
    po.add_argument("--model", required=True, help="|".join(_ORDER_MODELS))
    po.add_argument("--estimator", choices=("auto", "nu", "counting", "T"),
                    default="auto")
    po.add_argument("--coeffs", default=None,
                    help="polynomial coefficients, comma-separated re+imi")

    pv = sub.add_parser("verify", help="run a check suite")
    common(pv)
    pv.add_argument("--suite", required=True,
                    help="|".join(sorted(SUITES)) + "|all")
    return p


def _config_from(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        q=parse_complex(args.q),
        N=args.N if args.N is not None else 48,
        grid=parse_grid(args.grid),
        nodes=args.nodes,
        tol=args.tol,
        seed=args.seed,
        out=args.out,
        fmt=args.fmt,
    )


def _parse_list(text: str) -> list:
    return [parse_complex(tok) for tok in text.split(",") if tok.strip()]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        cfg = _config_from(args)
        if args.command == "eval":
            zs = [parse_complex(z) for z in (args.z or ["0"])]
            return cmd_eval(cfg, args.fn, zs, args.route,
                            _parse_list(args.alpha), _parse_list(args.beta))
        if args.command == "solve":
            return cmd_solve(cfg, args.problem, args.N)
        if args.command == "order":
            coeffs = _parse_list(args.coeffs) if args.coeffs else None
            return cmd_order(cfg, args.model, args.estimator, coeffs)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite)
        raise SchemaError(f"unknown command {args.command!r}")
    except (SchemaError, UnknownFunction, RegimeMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except JacksonQError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
