"""Command line interface.

Subcommands:

  verify   run verification suites, write a JSON report and curve CSVs
  norms    estimate a Hardy or weighted radial-power norm of a polynomial
  ineq     run a single inequality check and print its report
  curves   dump threshold curves and the rearranged profile as CSVs

Exit codes: 0 all checks passed, 1 at least one check failed, 2 invalid
configuration or usage.  Configuration precedence for verify: command
line flags override the JSON config file, which overrides defaults.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from .checks import SUITES
from .holo import LevelFunction, PolynomialFunction, load_poly
from .inequalities import (
    isoperimetric_model_check,
    isoperimetric_refined_check,
    kalaj_lemma_check,
    sobolev_check,
    weighted_hardy_check,
)
from .integrate import McConfig
from .norms import SpaceParams, bergman_norm, hardy_norm
from .rearrange import truncate_level_function
from .suite import ConfigError, SuiteConfig, dump_curves, run_suite

__all__ = ["main"]

INEQ_CHECKS = (
    "iso-model",
    "iso-refined",
    "sobolev-I",
    "sobolev-II",
    "sobolev-III",
    "sobolev-IV",
    "hardy-weighted",
    "kalaj",
)
CONFIG_KEYS = ("seed", "n_list", "sample_budget", "suites", "output_dir")


def _jsonable(x):
    """Recursively convert numpy and dataclass values for json.dumps."""
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else repr(v)
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return _jsonable(dataclasses.asdict(x))
    return x


def _emit(doc) -> None:
    print(json.dumps(_jsonable(doc), indent=2, sort_keys=True))


def _parse_int_list(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"expected a comma separated integer list, got {text!r}") from exc


def _parse_suites(text: str) -> tuple:
    if text.strip() == "all":
        return tuple(sorted(SUITES))
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _load_config_file(path: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("the config file must hold a JSON object")
    unknown = sorted(set(doc) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys {unknown}; known: {list(CONFIG_KEYS)}")
    return doc


def _suite_config(args) -> SuiteConfig:
    defaults = SuiteConfig()
    merged = {key: getattr(defaults, key) for key in CONFIG_KEYS}
    if args.config is not None:
        merged.update(_load_config_file(args.config))
    flags = {
        "seed": args.seed,
        "n_list": _parse_int_list(args.n) if args.n is not None else None,
        "sample_budget": args.samples,
        "suites": _parse_suites(args.suite) if args.suite is not None else None,
        "output_dir": args.out,
    }
    merged.update({k: v for k, v in flags.items() if v is not None})
    merged["n_list"] = tuple(merged["n_list"])
    merged["suites"] = tuple(merged["suites"])
    return SuiteConfig(**merged)


def _cmd_verify(args) -> int:
    cfg = _suite_config(args)
    records, code = run_suite(cfg)
    width = max(len(r.check_id) for r in records)
    for rec in records:
        flag = "PASS" if rec.passed else "FAIL"
        print(
            f"{flag} {rec.check_id:<{width}}  margin={rec.margin:+.3e}"
            f"  tolerance={rec.tolerance:.3e}"
        )
    failed = sum(not r.passed for r in records)
    print(f"{len(records)} records, {failed} failed")
    print(f"report: {Path(cfg.output_dir) / 'report.json'}")
    return code


def _cmd_norms(args) -> int:
    f = load_poly(args.f)
    params = SpaceParams(args.space, args.p, args.alpha)
    cfg = McConfig(seed=args.seed, sphere_samples=args.samples)
    if params.kind == "hardy":
        est = hardy_norm(f, params.p, cfg)
    else:
        est = bergman_norm(f, params.p, params.alpha, cfg)
    _emit(
        {
            "space": params.kind,
            "p": params.p,
            "alpha": params.alpha,
            "n": f.n,
            "value": est.value,
            "stderr": est.stderr,
            "samples": est.samples,
            "method": est.method,
        }
    )
    return 0


def _battery_field(n: int):
    f = PolynomialFunction.coordinate(0, n) + PolynomialFunction.constant(0.5, n)
    return LevelFunction(f=f, a=2.0, b=1.0)


def _cmd_ineq(args) -> int:
    name = args.check
    cfg = McConfig(seed=args.seed, sphere_samples=args.samples)
    rho_grid = np.geomspace(1e-3, 3.0, 50)
    if name == "iso-model":
        report = isoperimetric_model_check(rho_grid, args.n)
    elif name == "iso-refined":
        report = isoperimetric_refined_check(rho_grid, args.n)
    elif name.startswith("sobolev-"):
        regime = name.split("-", 1)[1]
        default_p = {"I": 1.0, "II": 1.5, "III": 2.0, "IV": 2.0 * args.n + 2.0}[regime]
        p = default_p if args.p is None else args.p
        u = truncate_level_function(_battery_field(args.n), t_cut=0.2)
        report = sobolev_check(u, p, regime, cfg)
    elif name == "hardy-weighted":
        p = 2.0 if args.p is None else args.p
        eps = 2.0 if args.eps is None else args.eps
        step = lambda x: np.where(np.asarray(x, dtype=float) <= 1.0, 1.0, 0.0)
        report = weighted_hardy_check(step, p, eps, x_max=1.0)
    elif name == "kalaj":
        alpha = 2.0 if args.alpha is None else args.alpha
        report = kalaj_lemma_check(
            phi=lambda x: np.maximum(np.asarray(x, dtype=float) - 1.0, 0.0),
            psi=lambda t: np.asarray(t, dtype=float),
            g=lambda t: 1.0 - 0.5 * np.asarray(t, dtype=float),
            alpha=alpha,
        )
    else:  # pragma: no cover - argparse restricts the choices
        raise ConfigError(f"unknown check {name!r}")
    _emit({"check": name, "report": report})
    return 0 if report["passed"] else 1


def _cmd_curves(args) -> int:
    if args.f is not None:
        f = load_poly(args.f)
    else:
        f = PolynomialFunction.coordinate(0, args.n) + PolynomialFunction.constant(
            0.5, args.n
        )
    cfg = SuiteConfig(seed=args.seed, output_dir=args.out)
    params = {"a": args.a, "b": args.b, "points": args.points, "samples": args.samples}
    if args.label:
        params["label"] = args.label
    curves_path, profile_path = dump_curves(f, params, cfg)
    print(f"curves: {curves_path}")
    print(f"rearrangement: {profile_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chball",
        description="Verification suites and estimators for level functions "
        "on the complex hyperbolic ball.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("--suite", help="comma separated suite names, or 'all'")
    p_verify.add_argument("--n", help="comma separated dimensions, e.g. 1,2")
    p_verify.add_argument("--seed", type=int, help="base seed for all estimators")
    p_verify.add_argument("--samples", type=int, help="direction samples per estimator")
    p_verify.add_argument("--out", help="output directory for the report and curves")
    p_verify.add_argument("--config", help="JSON config file (flags take precedence)")
    p_verify.set_defaults(func=_cmd_verify)

    p_norms = sub.add_parser("norms", help="estimate a polynomial norm")
    p_norms.add_argument("--f", required=True, help="polynomial JSON file")
    p_norms.add_argument("--space", required=True, choices=("hardy", "bergman"))
    p_norms.add_argument("--p", type=float, required=True, help="norm exponent")
    p_norms.add_argument("--alpha", type=float, help="radial weight power (bergman)")
    p_norms.add_argument("--seed", type=int, default=42)
    p_norms.add_argument("--samples", type=int, default=16384)
    p_norms.set_defaults(func=_cmd_norms)

    p_ineq = sub.add_parser("ineq", help="run one inequality check")
    p_ineq.add_argument("--check", required=True, choices=INEQ_CHECKS)
    p_ineq.add_argument("--n", type=int, default=2, help="complex dimension")
    p_ineq.add_argument("--p", type=float, help="exponent where applicable")
    p_ineq.add_argument("--eps", type=float, help="weight power (hardy-weighted)")
    p_ineq.add_argument("--alpha", type=float, help="profile power (kalaj)")
    p_ineq.add_argument("--seed", type=int, default=42)
    p_ineq.add_argument("--samples", type=int, default=16384)
    p_ineq.set_defaults(func=_cmd_ineq)

    p_curves = sub.add_parser("curves", help="dump threshold and profile CSVs")
    p_curves.add_argument("--f", help="polynomial JSON file (default: z1 + 0.5)")
    p_curves.add_argument("--n", type=int, default=1, help="dimension for the default f")
    p_curves.add_argument("--a", type=float, default=2.0)
    p_curves.add_argument("--b", type=float, default=1.0)
    p_curves.add_argument("--points", type=int, default=64, help="threshold grid size")
    p_curves.add_argument("--samples", type=int, default=4096)
    p_curves.add_argument("--seed", type=int, default=42)
    p_curves.add_argument("--label", help="suffix for the output file names")
    p_curves.add_argument("--out", default="./report", help="output directory")
    p_curves.set_defaults(func=_cmd_curves)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
