"""Command-line interface.

Subcommands: compute, range, verify, index, search. Every flag may also come from a TOML
file given with --config (top-level keys, optionally overridden by a table named after the
subcommand); explicit flags win over the file.

Exit codes: 0 success; 1 suite failures or no result; 2 missing file or bad
configuration; 3 malformed JSON or invalid matrix; 4 dimension mismatch; 5 input is not
admissible for the weight.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import checks, errors
from .ensembles import KINDS, EnsembleConfig
from .linalg import DEFAULT_TOL, Tolerances
from .matrix_io import load_matrix, matrix_to_dict
from .radius import WeightPair, numerical_range_cloud, weighted_radius, write_range_csv
from .spectral import SUBALGEBRAS, a_spectral_radius, distance_to_scalars, numerical_index
from .suite import EnsembleSpec, default_ensembles, kappa_ratio_search, run_suite, tightness_search
from .weighted import a_adjoint, a_seminorm, make_weight

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_MALFORMED, EXIT_DIM, EXIT_NONMEMBER = 0, 1, 2, 3, 4, 5

DEFAULTS = {
    "t": 0.5,
    "s": 0.5,
    "seed": 0,
    "trials": 100,
    "tol": DEFAULT_TOL.chain_tol,
    "budget": 200,
    "subalgebra": "full",
    "n_random": 2000,
    "n_boundary": 360,
    "dims": "2,3,4",
    "pair": 0,
    "kind": None,
    "dim": 2,
    "rank": None,
    "checkers": None,
    "checker": None,
    "out": None,
    "weight": None,
    "matrix": None,
}

INF = "inf"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aradius", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="TOML file with default values for any flag")
        sp.add_argument("--out", help="output file")
        sp.add_argument("--seed", type=int)

    c = sub.add_parser("compute", help="all quantities for a weight and a matrix")
    common(c)
    c.add_argument("--weight")
    c.add_argument("--matrix")
    c.add_argument("--t", type=float)
    c.add_argument("--s", type=float)

    r = sub.add_parser("range", help="numerical range point cloud as CSV")
    common(r)
    r.add_argument("--weight")
    r.add_argument("--matrix")
    r.add_argument("--n-random", dest="n_random", type=int)
    r.add_argument("--n-boundary", dest="n_boundary", type=int)

    v = sub.add_parser("verify", help="run the inequality suite")
    common(v)
    v.add_argument("--trials", type=int)
    v.add_argument("--tol", type=float, help="chain tolerance")
    v.add_argument("--checkers", help="comma separated checker ids (default: all)")
    v.add_argument("--dims", help="comma separated dimensions (default 2,3,4)")

    i = sub.add_parser("index", help="estimate the numerical index")
    common(i)
    i.add_argument("--weight")
    i.add_argument("--subalgebra", choices=sorted(SUBALGEBRAS) + ["commutative-diagonal"])
    i.add_argument("--budget", type=int)

    s = sub.add_parser("search", help="tightness or kappa ratio search")
    common(s)
    s.add_argument("kind", choices=["tightness", "kappa"])
    s.add_argument("--checker")
    s.add_argument("--pair", type=int, help="index i of the ratio values[i]/values[i+1]")
    s.add_argument("--ensemble", dest="kind_ensemble", choices=KINDS)
    s.add_argument("--dim", type=int)
    s.add_argument("--rank", type=int)
    s.add_argument("--weight")
    s.add_argument("--budget", type=int)
    return p


def _load_config(path, command: str) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise CliError(EXIT_CONFIG, f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise CliError(EXIT_CONFIG, f"invalid config file: {exc}") from None
    merged = {k.replace("-", "_"): v for k, v in data.items() if not isinstance(v, dict)}
    section = data.get(command, {})
    if isinstance(section, dict):
        merged.update({k.replace("-", "_"): v for k, v in section.items()})
    return merged


class Options:
    """Flag value if given, else config value, else the documented default."""

    def __init__(self, args: argparse.Namespace, config: dict):
        self._args, self._config = args, config

    def __getattr__(self, name):
        val = getattr(self._args, name, None)
        if val is not None:
            return val
        if name in self._config:
            return self._config[name]
        return DEFAULTS.get(name)


def _read_matrix(path, what: str) -> np.ndarray:
    if path is None:
        raise CliError(EXIT_CONFIG, f"--{what} is required")
    try:
        return load_matrix(path)
    except FileNotFoundError:
        raise CliError(EXIT_CONFIG, f"{what} file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_MALFORMED, f"{what} file is not valid JSON: {exc}") from None
    except errors.MalformedMatrixError as exc:
        raise CliError(EXIT_MALFORMED, f"{what} file: {exc}") from None


def _weight(path):
    A = _read_matrix(path, "weight")
    try:
        return make_weight(A)
    except (errors.NotHermitianError, errors.NotPSDError, errors.NonFiniteError, errors.NotSquareError) as exc:
        raise CliError(EXIT_MALFORMED, f"invalid weight: {exc}") from None


def _weight_and_matrix(opts):
    W = _weight(opts.weight)
    x = _read_matrix(opts.matrix, "matrix")
    if x.shape != W.A.shape:
        raise CliError(EXIT_DIM, f"matrix is {x.shape[0]}x{x.shape[0]} but weight is {W.n}x{W.n}")
    return W, x


def _emit(payload: dict, out) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _infinite() -> dict:
    return {"finite": False, "value": INF}


def _radius_entry(opt) -> dict:
    return {"finite": True, "value": opt.value, "theta_star": opt.theta_star, "certified_error": opt.certified_error}


def cmd_compute(opts) -> int:
    W, x = _weight_and_matrix(opts)
    p = WeightPair(float(opts.t), float(opts.s))
    norm = a_seminorm(W, x)
    report = {
        "n": W.n,
        "weight_rank": W.rank,
        "t": p.t,
        "s": p.s,
        "membership": norm.finite,
        "membership_defect": norm.membership_defect,
    }
    if not norm.finite:
        for key in ("a_seminorm", "a_numerical_radius", "weighted_radius", "a_spectral_radius", "distance_to_scalars"):
            report[key] = _infinite()
        report["a_adjoint"] = None
        _emit(report, opts.out)
        return EXIT_OK
    rad = weighted_radius(W, x, WeightPair(0.5, 0.5))
    wrad = weighted_radius(W, x, p)
    spr = a_spectral_radius(W, x)
    dist = distance_to_scalars(W, x)
    report.update({
        "a_seminorm": {"finite": True, "value": norm.value, "certified_error": 0.0},
        "a_adjoint": matrix_to_dict(a_adjoint(W, x)),
        "a_numerical_radius": _radius_entry(rad),
        "weighted_radius": _radius_entry(wrad),
        "a_spectral_radius": {"finite": True, "value": spr.r_eig, "power_estimate": spr.r_limit,
                              "certified_error": abs(spr.r_eig - spr.r_limit)},
        "distance_to_scalars": {"finite": True, "value": dist.value, "lower_bound": dist.lower_bound,
                                "zeta_star": {"re": dist.zeta_star.real, "im": dist.zeta_star.imag},
                                "certified_error": dist.value - dist.lower_bound},
    })
    _emit(report, opts.out)
    return EXIT_OK


def cmd_range(opts) -> int:
    W, x = _weight_and_matrix(opts)
    try:
        cloud = numerical_range_cloud(W, x, int(opts.n_random), int(opts.n_boundary), int(opts.seed))
    except errors.NonMemberError as exc:
        raise CliError(EXIT_NONMEMBER, f"matrix is not admissible for the weight: {exc}") from None
    out = opts.out or "range.csv"
    write_range_csv(cloud, out)
    print(f"radius_estimate {cloud.radius_estimate!r}")
    return EXIT_OK


def _int_list(text, what: str) -> list[int]:
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise CliError(EXIT_CONFIG, f"bad {what}: {text!r}") from None


def cmd_verify(opts) -> int:
    trials, tol_val = int(opts.trials), float(opts.tol)
    if trials < 1:
        raise CliError(EXIT_CONFIG, "--trials must be at least 1")
    try:
        tol = Tolerances(chain_tol=tol_val)
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    ids = opts.checkers
    if isinstance(ids, str):
        ids = [c.strip() for c in ids.split(",") if c.strip()]
    if ids is not None:
        unknown = [c for c in ids if c not in checks.CHECKERS]
        if unknown or not ids:
            raise CliError(EXIT_CONFIG, f"unknown or empty checker list: {unknown or ids}")
    dims = _int_list(opts.dims, "dims")
    if not dims or any(d < 2 or d > 8 for d in dims):
        raise CliError(EXIT_CONFIG, "--dims must list sizes between 2 and 8")
    report = run_suite(default_ensembles(tuple(dims)), ids, trials, int(opts.seed), tol)
    text = report.to_json()
    if opts.out:
        Path(opts.out).write_text(text + "\n")
    print(f"{'checker':<10} {'trials':>6} {'pass':>6} {'skip':>6} {'fail':>6} {'min slack':>12}")
    for cid, summ in report.checkers.items():
        sl = min(summ.slacks) if summ.slacks else math.nan
        print(f"{cid:<10} {summ.trials:>6} {summ.passes:>6} {summ.skips:>6} {len(summ.failures):>6} {sl:>12.3e}")
    failed = report.total_failures
    print(f"total failures: {failed}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_index(opts) -> int:
    W = _weight(opts.weight)
    sub = opts.subalgebra
    if sub == "commutative-diagonal":
        sub = "diagonal"
    if sub not in SUBALGEBRAS:
        raise CliError(EXIT_CONFIG, f"unknown subalgebra {sub!r}")
    budget = int(opts.budget)
    if budget < 1:
        raise CliError(EXIT_CONFIG, "--budget must be positive")
    try:
        est = numerical_index(W, sub, budget, int(opts.seed))
    except errors.IndexBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit({
        "subalgebra": sub,
        "upper": est.upper,
        "lower": est.lower,
        "verdict": est.verdict,
        "certificate": est.certificate,
        "witness": None if est.witness is None else matrix_to_dict(est.witness),
        "samples": len(est.ratios),
    }, opts.out)
    return EXIT_OK


def cmd_search(opts) -> int:
    budget = int(opts.budget)
    if budget < 1:
        raise CliError(EXIT_CONFIG, "--budget must be positive")
    seed = int(opts.seed)
    if opts.kind == "tightness":
        cid = opts.checker
        if cid not in checks.CHECKERS:
            raise CliError(EXIT_CONFIG, f"unknown checker {cid!r}")
        kind = opts.kind_ensemble or "general-member"
        dim = int(opts.dim)
        rank = int(opts.rank) if opts.rank is not None else dim
        try:
            cfg = EnsembleConfig(seed, dim, rank, kind)
            res = tightness_search(cid, cfg, budget, seed, int(opts.pair))
        except (ValueError, errors.ARadiusError) as exc:
            raise CliError(EXIT_CONFIG, str(exc)) from None
        inp = res.inputs
        _emit({
            "checker": cid,
            "pair": int(opts.pair),
            "ratio": res.ratio,
            "evaluations": res.evaluations,
            "ensemble": cfg.as_dict(),
            "weight": matrix_to_dict(res.weight),
            "inputs": {"x": matrix_to_dict(inp.x), "y": None if inp.y is None else matrix_to_dict(inp.y),
                       "t": inp.t, "s": inp.s},
            "chain": res.chain.to_dict(),
        }, opts.out)
        return EXIT_OK
    kind = opts.kind_ensemble or "a-self-adjoint"
    if opts.weight is not None:
        W = _weight(opts.weight)
    else:
        from .ensembles import sample_weight

        dim = int(opts.dim)
        rank = int(opts.rank) if opts.rank is not None else dim
        try:
            W = sample_weight(EnsembleConfig(seed, dim, rank, kind))
        except (ValueError, errors.ARadiusError) as exc:
            raise CliError(EXIT_CONFIG, str(exc)) from None
    try:
        res = kappa_ratio_search(W, budget, seed, kind)
    except (ValueError, errors.ARadiusError) as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from None
    _emit({
        "kind": kind,
        "sup_ratio": res.sup_ratio,
        "weight": matrix_to_dict(W.A),
        "x": matrix_to_dict(res.x),
        "y": matrix_to_dict(res.y),
        "seed": seed,
        "budget": budget,
    }, opts.out)
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "range": cmd_range, "verify": cmd_verify, "index": cmd_index, "search": cmd_search}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        opts = Options(args, _load_config(args.config, args.command))
        return COMMANDS[args.command](opts)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except errors.DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIM


if __name__ == "__main__":
    sys.exit(main())
