"""Command-line front end.

Exit codes: 0 success, 2 domain/region error, 3 I/O or parse error.
Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import constructions, exponents
from .errors import SummabilityError
from .exponents import ExtExponent, as_domain
from .experiments import (
    DEFAULT_GRID,
    RATIO_TOL,
    Family,
    chevet_bound_exponent,
    chevet_growth,
    growth_report,
    mixed_sum_check,
    ratios_nonincreasing,
    sweep,
)
from .normest import EstimatorConfig, estimate_norm
from .tensors import CoefficientTensor, MultilinearSpec, report_to_csv

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_IO = 3

COMMANDS = ("exponent", "norm", "construct", "verify", "growth", "mixed", "chevet")
KINDS = ("polynomial", "multilinear", "praciano", "lp-valued", "kwapien", "bennett-carl", "zalduendo", "cotype")

_REQUIRED = {
    "polynomial": ("u", "q", "p", "m"),
    "multilinear": ("r", "q", "p"),
    "praciano": ("p",),
    "lp-valued": ("u", "q", "p"),
    "kwapien": ("q", "p"),
    "bennett-carl": ("u", "q"),
    "zalduendo": ("p", "m"),
    "cotype": ("q",),
}


class InputError(Exception):
    """Unreadable or malformed input file (exit code 3)."""


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output_format: str = "json"
    seed: int = 42

    def require(self, *keys: str) -> None:
        missing = [k for k in keys if self.params.get(k) is None]
        if missing:
            raise SummabilityError(
                f"{self.command}: missing required option(s) {', '.join('--' + k for k in missing)}"
            )


def _emit(obj, fmt: str = "json") -> None:
    if fmt == "csv" and isinstance(obj, dict):
        sys.stdout.write(report_to_csv({k: v for k, v in obj.items() if not isinstance(v, (dict, list))}))
    elif fmt == "text" and isinstance(obj, dict):
        for k, v in obj.items():
            print(f"{k}: {v}")
    else:
        print(json.dumps(obj))


def _result_dict(res: exponents.ExponentResult) -> dict:
    return {"rho": str(res.rho), "case": str(res.case), "optimal_known": res.optimality_known}


def run_exponent(kind: str, params: dict) -> dict:
    """Dispatch one exponent formula; values print as exact rationals."""
    cfg = RunConfig("exponent", params)
    if kind not in _REQUIRED:
        raise SummabilityError(f"unknown kind {kind!r}")
    cfg.require(*_REQUIRED[kind])
    p = params.get("p")
    m = params.get("m")
    if kind == "polynomial":
        return _result_dict(exponents.polynomial_exponent(params["u"], params["q"], p, int(m)))
    if kind == "multilinear":
        return _result_dict(exponents.multilinear_exponent(params["r"], params["q"], as_domain(p)))
    if kind == "praciano":
        return _result_dict(exponents.praciano_exponent(as_domain(p)))
    if kind == "lp-valued":
        return _result_dict(exponents.lp_valued_exponent(params["u"], params["q"], as_domain(p)))
    if kind == "kwapien":
        return _result_dict(exponents.kwapien_exponent(params["q"], as_domain(p)))
    if kind == "bennett-carl":
        return {"rho": str(exponents.bennett_carl_r(params["u"], params["q"]))}
    if kind == "zalduendo":
        return {"rho": str(exponents.zalduendo_exponent(p, int(m)))}
    c = exponents.cotype_of_lq(params["q"])
    return {"rho": str(c), "finite_cotype": not c.is_infinite}


def _load_tensor(path: str) -> CoefficientTensor:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return CoefficientTensor.from_json(text)
    except ValueError as exc:
        if isinstance(exc, SummabilityError):
            raise
        raise InputError(f"{path}: {exc}") from exc


def _estimator(args) -> EstimatorConfig:
    return EstimatorConfig(
        restarts=args.restarts, max_sweeps=args.max_sweeps, rel_tol=args.tol, seed=args.seed
    )


def run_norm(args) -> dict:
    T = _load_tensor(args.tensor_file)
    spec = MultilinearSpec(as_domain(args.p), args.u, args.q)
    est = estimate_norm(T, spec, _estimator(args))
    return {
        "value": est.value,
        "restarts_used": est.restarts_used,
        "converged": est.converged,
        "iterations": est.iterations,
        "maximizer": [[[float(z.real), float(z.imag)] for z in x] for x in est.maximizer],
        "seed": args.seed,
    }


def _family(args) -> Family:
    return Family(args.family, as_domain(args.p), args.u, args.q, seed=args.seed)


def _resolve_t(family: Family, t: str) -> ExtExponent:
    if t == "auto":
        return family.predicted().rho
    return ExtExponent.parse(t)


def _grid(text: str | None) -> tuple[int, ...]:
    if not text:
        return DEFAULT_GRID
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise SummabilityError(f"bad --n grid {text!r}") from exc


def _write_csv(path: str | None, text: str) -> None:
    if not path:
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def run_sweep(command: str, args) -> dict:
    """verify / growth / mixed / chevet."""
    if command == "verify":
        family = _family(args)
        t = _resolve_t(family, args.t)
        norm = args.norm or "estimate"
        res = sweep(family, t, _grid(args.n), _estimator(args), norm)
        _write_csv(args.csv, res.to_csv())
        flat = ratios_nonincreasing(res.ratio_values)
        return {
            "family": family.name,
            "params": family.params(),
            "t": str(t),
            "norm_source": res.norm_source,
            "rows": [
                {"n": n, "lhs": a, "norm": b, "ratio": r}
                for n, a, b, r in zip(res.n_values, res.lhs_values, res.norm_values, res.ratio_values)
            ],
            "ratio_tolerance": RATIO_TOL,
            "pass": flat,
            "seed": args.seed,
        }
    if command == "growth":
        family = _family(args)
        t = _resolve_t(family, args.t)
        report, res = growth_report(family, t, _grid(args.n), _estimator(args))
        _write_csv(args.csv, res.to_csv())
        out = report.to_dict()
        out["rows"] = [
            {"n": n, "lhs": a, "norm": b, "ratio": r}
            for n, a, b, r in zip(res.n_values, res.lhs_values, res.norm_values, res.ratio_values)
        ]
        out["seed"] = args.seed
        return out
    if command == "mixed":
        ps = as_domain(args.p)
        q = args.q or "2"
        worst = mixed_sum_check(ps, q, args.trials, args.size, _estimator(args), norm=args.norm or "estimate")
        bound = math.sqrt(2) ** (ps.m - 1)
        return {
            "p": str(ps),
            "q": q,
            "n": args.size,
            "trials": args.trials,
            "worst_ratio": worst,
            "bound": bound,
            "pass": worst <= bound * RATIO_TOL,
            "seed": args.seed,
        }
    ps = as_domain(args.p)
    grid = _grid(args.n)
    fit = chevet_growth(ps.m, ps, grid, args.samples, _estimator(args))
    bound = float(chevet_bound_exponent(ps))
    return {
        "p": str(ps),
        "n": list(grid),
        "samples": args.samples,
        "slope": fit.slope,
        "bound_exponent": bound,
        "pass": fit.slope <= bound + 0.1,
        "seed": args.seed,
    }


def run_construct(args) -> dict:
    c = constructions.build(args.family, args.size, as_domain(args.p), args.u, args.q, seed=args.seed)
    doc = c.tensor.to_json()
    if args.out:
        try:
            Path(args.out).write_text(doc)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}") from exc
    else:
        print(doc)
        return {}
    return {
        "family": c.family,
        "n": c.n,
        "out": args.out,
        "norm_upper_bound": c.norm_upper_bound,
        "norm_upper_bound_formula": c.norm_upper_bound_formula,
        "seed": args.seed,
    }


def _add_estimator_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--max-sweeps", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-10)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="summability", description=__doc__.splitlines()[0])
    parser.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default="json")
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponent", help="closed-form summability exponents")
    p.add_argument("--kind", required=True, choices=KINDS)
    for name in ("u", "q", "p", "r"):
        p.add_argument(f"--{name}")
    p.add_argument("--m", type=int)

    p = sub.add_parser("norm", help="estimate ||T|| for a tensor JSON file")
    p.add_argument("tensor_file")
    p.add_argument("--p", required=True)
    p.add_argument("--u")
    p.add_argument("--q")
    p.add_argument("--seed", type=int, default=42)
    _add_estimator_opts(p)

    p = sub.add_parser("construct", help="write an extremal construction as tensor JSON")
    p.add_argument("--family", required=True, choices=constructions.FAMILIES)
    p.add_argument("--n", dest="size", type=int, required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--u")
    p.add_argument("--q")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")

    for name in ("verify", "growth"):
        p = sub.add_parser(name, help=f"{name} sweep over a construction family")
        p.add_argument("--family", required=True, choices=constructions.FAMILIES)
        p.add_argument("--p", required=True)
        p.add_argument("--u")
        p.add_argument("--q")
        p.add_argument("--t", default="auto")
        p.add_argument("--n", help="comma-separated dimensions (default 4,8,16,32)")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--csv", help="also write n,lhs,norm,ratio rows to this file")
        if name == "verify":
            p.add_argument("--norm", choices=("estimate", "analytic", "oracle"))
        _add_estimator_opts(p)

    p = sub.add_parser("mixed", help="mixed-sum inequality check on random tensors")
    p.add_argument("--p", required=True)
    p.add_argument("--q", default="2")
    p.add_argument("--n", dest="size", type=int, default=3)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--norm", choices=("estimate", "oracle"))
    p.add_argument("--seed", type=int, default=42)
    _add_estimator_opts(p)

    p = sub.add_parser("chevet", help="growth of random-sign form norms")
    p.add_argument("--p", required=True)
    p.add_argument("--n")
    p.add_argument("--samples", type=int, default=32)
    p.add_argument("--seed", type=int, default=42)
    _add_estimator_opts(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        import logging

        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)
    try:
        if args.command == "exponent":
            params = {k: getattr(args, k) for k in ("u", "q", "p", "r", "m")}
            out = run_exponent(args.kind, params)
        elif args.command == "norm":
            out = run_norm(args)
        elif args.command == "construct":
            out = run_construct(args)
            if not out:
                return EXIT_OK
        else:
            out = run_sweep(args.command, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SummabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(out, args.output_format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
