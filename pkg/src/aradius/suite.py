"""Seeded suite runner, failure reproduction, tightness search and the kappa ratio search."""
from __future__ import annotations

import json
import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from .checks import CHECKERS, FAIL, PASS, SKIP, Inputs, ValueChain, check, get_checker
from .ensembles import KINDS, EnsembleConfig, Latent, build, derive_seed, draw_latent, rng_for, sample_weight
from .linalg import DEFAULT_TOL, Tolerances, operator_norm
from .matrix_io import matrix_from_dict, matrix_to_dict
from .weighted import Weight, a_real_part, make_weight, require_member, seminorm


@dataclass(frozen=True)
class EnsembleSpec:
    """Shape of the random instances a suite draws from; seeds are assigned per trial."""

    dim: int
    weight_rank: int
    kind: str
    scale: float = 1.0


def default_ensembles(dims=(2, 3, 4)) -> list[EnsembleSpec]:
    out = []
    for n in dims:
        for r in sorted({n, n - 1}, reverse=True):
            for kind in KINDS:
                if kind == "nilpotent-ax2-zero" and r < 2:
                    continue
                if r < 1:
                    continue
                out.append(EnsembleSpec(n, r, kind))
    return out


def _checker_key(checker_id: str) -> int:
    return zlib.crc32(checker_id.encode())


def _prepare(checker_id: str, W: Weight, x, y, rng: np.random.Generator):
    """Adjust raw samples so structured hypotheses hold (ordering, normalization, real parts)."""
    if checker_id == "thm-4-6" and y is not None:
        x, y = a_real_part(W, x), a_real_part(W, y)
    if checker_id in ("thm-4-3", "cor-4-4", "thm-4-6") and y is not None:
        if seminorm(W, y) > seminorm(W, x):
            x, y = y, x
        if checker_id == "thm-4-3":
            nx = seminorm(W, x)
            if nx > 0:
                c = rng.uniform(0.2, 1.0) / nx
                x, y = c * x, c * y
    return x, y


def _weight_pair(rng: np.random.Generator) -> tuple[float, float]:
    mode = int(rng.integers(3))
    if mode == 0:
        u = float(rng.uniform(0.1, 1.0))
        return u, u
    if mode == 1:
        return float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 1.0)) + 1e-3
    return [(1.0, 0.0), (0.0, 1.0), (0.5, 0.5), (1.0, 1.0)][int(rng.integers(4))]


def make_trial(checker_id: str, config: EnsembleConfig) -> tuple[Weight, Inputs]:
    """Deterministic instance for a checker: weight, inputs and (t, s), all from config.seed."""
    chk = get_checker(checker_id)
    W = sample_weight(config)
    rng = rng_for(config.seed, 3)
    mags = np.exp(rng.uniform(-1.5, 1.5, size=2))
    x = build(W, draw_latent(config, W, 1), config.scale) * mags[0]
    y = build(W, draw_latent(config, W, 2), config.scale) * mags[1] if chk.arity == 2 else None
    x, y = _prepare(checker_id, W, x, y, rng)
    t, s = _weight_pair(rng)
    return W, Inputs(x, y, t, s)


def _record(config: EnsembleConfig, W: Weight, inputs: Inputs, chain: ValueChain) -> dict:
    return {
        "seed": config.seed,
        "config": config.as_dict(),
        "weight": matrix_to_dict(W.A),
        "inputs": {
            "x": matrix_to_dict(inputs.x),
            "y": None if inputs.y is None else matrix_to_dict(inputs.y),
            "t": inputs.t,
            "s": inputs.s,
        },
        "chain": chain.to_dict(),
    }


def reproduce(checker_id: str, record: dict, tol: Tolerances = DEFAULT_TOL) -> ValueChain:
    """Re-run a recorded trial from its stored matrices."""
    W = make_weight(matrix_from_dict(record["weight"]), tol)
    inp = record["inputs"]
    y = None if inp["y"] is None else matrix_from_dict(inp["y"])
    return check(checker_id, W, Inputs(matrix_from_dict(inp["x"]), y, inp["t"], inp["s"]), tol)


def regenerate(checker_id: str, record: dict, tol: Tolerances = DEFAULT_TOL) -> ValueChain:
    """Re-run a recorded trial from its seed and ensemble configuration alone."""
    config = EnsembleConfig(**record["config"])
    W, inputs = make_trial(checker_id, config)
    if tol is not W.tol:
        W = make_weight(W.A, tol)
    return check(checker_id, W, inputs, tol)


@dataclass
class CheckerSummary:
    trials: int = 0
    passes: int = 0
    skips: int = 0
    failures: list = field(default_factory=list)
    slacks: list = field(default_factory=list)
    tightest: dict | None = None

    def to_dict(self) -> dict:
        sl = sorted(self.slacks)
        return {
            "trials": self.trials,
            "passes": self.passes,
            "skips": self.skips,
            "failures": self.failures,
            "min_slack": sl[0] if sl else None,
            "median_slack": float(np.median(sl)) if sl else None,
            "tightest": self.tightest,
        }


@dataclass
class SuiteReport:
    checkers: dict

    @property
    def total_failures(self) -> int:
        return sum(len(s.failures) for s in self.checkers.values())

    def to_dict(self) -> dict:
        return {cid: s.to_dict() for cid, s in self.checkers.items()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def trial_count(checker_id: str, trials: int) -> int:
    """Distance-based checkers are nested optimizations and run a quarter of the trials."""
    return max(1, trials // 4) if get_checker(checker_id).uses_distance else trials


def run_suite(
    ensembles: list[EnsembleSpec] | None = None,
    checkers: list[str] | None = None,
    trials: int = 100,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> SuiteReport:
    """Run every checker on its compatible ensembles, cycling through them trial by trial."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    ensembles = default_ensembles() if ensembles is None else list(ensembles)
    checkers = sorted(CHECKERS) if checkers is None else list(checkers)
    if not checkers:
        raise ValueError("empty checker list")
    for cid in checkers:
        get_checker(cid)
    out = {}
    for cid in checkers:
        chk = get_checker(cid)
        compatible = [e for e in ensembles if e.kind in chk.kinds]
        summary = CheckerSummary()
        out[cid] = summary
        if not compatible:
            continue
        for k in range(trial_count(cid, trials)):
            e = compatible[k % len(compatible)]
            config = EnsembleConfig(derive_seed(seed, _checker_key(cid), k), e.dim, e.weight_rank, e.kind, e.scale)
            W, inputs = make_trial(cid, config)
            if tol is not W.tol:
                W = make_weight(W.A, tol)
            chain = check(cid, W, inputs, tol)
            summary.trials += 1
            if chain.status == SKIP:
                summary.skips += 1
                continue
            if chain.status == FAIL:
                summary.failures.append(_record(config, W, inputs, chain))
            else:
                summary.passes += 1
            if chain.slack is not None:
                summary.slacks.append(chain.slack)
                best = summary.tightest
                if best is None or chain.slack < best["chain"]["slack"]:
                    summary.tightest = _record(config, W, inputs, chain)
    return SuiteReport(out)


@dataclass(frozen=True)
class TightnessResult:
    ratio: float
    chain: ValueChain
    weight: np.ndarray = field(repr=False)
    inputs: Inputs = field(repr=False)
    evaluations: int = 0


def tightness_search(
    checker_id: str,
    config: EnsembleConfig,
    budget: int = 200,
    seed: int = 0,
    pair: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> TightnessResult:
    """Maximize values[pair] / values[pair + 1] by random restarts and coordinate perturbation.

    `config` fixes dimension, weight rank and kind; its seed is ignored in favour of `seed`.
    """
    chk = get_checker(checker_id)
    if budget < 1:
        raise ValueError("budget must be positive")
    restarts = max(1, budget // 40)
    used = 0
    best = None

    def evaluate(W, lx, ly, t, s):
        x = build(W, lx, config.scale)
        y = build(W, ly, config.scale) if ly is not None else None
        x, y = _prepare(checker_id, W, x, y, rng_for(0, 0))
        inp = Inputs(x, y, t, s)
        chain = check(checker_id, W, inp, tol)
        if chain.status == SKIP or pair + 1 >= len(chain.values):
            return None, chain, inp
        return chain.ratio(pair), chain, inp

    for j in range(restarts):
        if used >= budget:
            break
        cfg = EnsembleConfig(derive_seed(seed, _checker_key(checker_id), j), config.dim, config.weight_rank, config.kind, config.scale)
        W = sample_weight(cfg)
        lx = draw_latent(cfg, W, 1)
        ly = draw_latent(cfg, W, 2) if chk.arity == 2 else None
        t, s = _weight_pair(rng_for(cfg.seed, 3))
        q, chain, inp = evaluate(W, lx, ly, t, s)
        used += 1
        if q is None:
            continue
        if best is None or q > best.ratio:
            best = TightnessResult(q, chain, W.A, inp, used)
        step = 0.5
        share = budget // restarts
        local = 1
        coords = lx.z.size + (ly.z.size if ly is not None else 0)
        while local < share and used < budget and step > 1e-6:
            improved = False
            for c in range(coords):
                for sign in (1.0, -1.0):
                    if local >= share or used >= budget:
                        break
                    nx_z, ny_z = lx.z.copy(), None if ly is None else ly.z.copy()
                    if c < lx.z.size:
                        nx_z[c] += sign * step
                    else:
                        ny_z[c - lx.z.size] += sign * step
                    cx = Latent(lx.kind, nx_z, lx.k)
                    cy = None if ly is None else Latent(ly.kind, ny_z, ly.k)
                    q2, chain2, inp2 = evaluate(W, cx, cy, t, s)
                    used += 1
                    local += 1
                    if q2 is not None and q2 > q:
                        q, lx, ly, improved = q2, cx, cy, True
                        if q2 > best.ratio:
                            best = TightnessResult(q2, chain2, W.A, inp2, used)
                        break
            if not improved:
                step /= 2
    if best is None:
        raise ValueError(f"no non-degenerate instance of {checker_id} found within the budget")
    return TightnessResult(best.ratio, best.chain, best.weight, best.inputs, used)


def kappa_ratio(W: Weight, x, y) -> float | None:
    """(||x+y|| - ||x||) ||x|| / ||xy|| with the larger-norm input first; None if ||xy|| vanishes."""
    x, y = require_member(W, x), require_member(W, y)
    nx, ny = seminorm(W, x), seminorm(W, y)
    if ny > nx:
        x, y, nx = y, x, ny
    nxy = seminorm(W, x @ y)
    if nx == 0 or nxy <= 1e-12 * (1 + nx * nx):
        return None
    return (seminorm(W, x + y) - nx) * nx / nxy


@dataclass(frozen=True)
class KappaResult:
    sup_ratio: float
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    history: tuple = field(default=(), repr=False)  # running supremum after each candidate


def kappa_ratio_search(W: Weight, budget: int = 200, seed: int = 0, kind: str = "a-self-adjoint") -> KappaResult:
    """Empirical supremum of the kappa ratio over A-self-adjoint pairs.

    Even candidates are fresh random pairs, odd ones perturb the best pair so far. The
    running supremum is nondecreasing in the budget for a fixed seed.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    cfg = EnsembleConfig(seed, W.n, W.rank, kind) if kind != "nilpotent-ax2-zero" else None
    if cfg is None:
        raise ValueError("kappa search needs a self-adjoint capable ensemble kind")
    best, bx, by = -math.inf, None, None
    history = []
    for k in range(budget):
        rng = rng_for(seed, 10 + k)
        if k % 2 == 1 and bx is not None:
            sc = 0.2 * rng.uniform()
            x = bx + sc * a_real_part(W, build(W, Latent(kind, rng.standard_normal(bx.size * 8 + 64)[: _lsize(W, kind)])))
            y = by + sc * a_real_part(W, build(W, Latent(kind, rng.standard_normal(bx.size * 8 + 64)[: _lsize(W, kind)])))
        else:
            x = a_real_part(W, build(W, Latent(kind, rng.standard_normal(_lsize(W, kind)))))
            y = a_real_part(W, build(W, Latent(kind, rng.standard_normal(_lsize(W, kind))))) * rng.uniform(0.1, 1.0)
        q = kappa_ratio(W, x, y)
        if q is not None and q > best:
            best, bx, by = q, x, y
        history.append(best)
    if bx is None:
        raise ValueError("every sampled pair had a vanishing product")
    return KappaResult(best, bx, by, tuple(history))


def _lsize(W: Weight, kind: str) -> int:
    from .ensembles import latent_size

    return latent_size(kind, W.n, W.rank)
