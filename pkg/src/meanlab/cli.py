"""Command-line driver.

    meanlab means L 2 8
    meanlab verify chain --trials 100000 --seed 7
    meanlab scan sharp-t
    meanlab kernel phi:r=2/3 --points 1,2,3
    meanlab kernel ratio:L/heron:s=0.6 --search 8 anneal 10000
    meanlab witnesses
    meanlab reproduce

Exit codes: 0 pass, 1 violations found, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import inequality_lab as lab
from . import kernel_posdef as kp
from .matrix_core import MatrixError, PsdMatrix, random_matrix, random_psd, read_matrix
from .matrix_means import operator_chain_check
from .norms import hs_chain_check, ui_bound_details
from .scalar_means import MeanDomainError, parse_mean, parse_number

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
SUITES = ("chain", "refined", "rho", "operator", "hsnorm", "uinorm")
CHUNK = 10_000


def default_seed() -> int:
    return int(os.environ.get("MEANLAB_SEED", "0"))


@dataclass
class RunConfig:
    """Everything that determines a run; two equal configs give identical reports."""

    seed: int = 0
    trials: Optional[int] = None
    n_max: int = 8
    m_max: int = 5
    extra_params: int = 10
    r_values: List[float] = field(default_factory=lambda: [0.0, 1 / 3, 2 / 3, 1.0])
    scalar_tol: float = lab.DEFAULT_TOL
    matrix_tol: float = 1e-9
    pair_range: List[float] = field(default_factory=lambda: [1e-6, 1e6])
    condition_range: List[float] = field(default_factory=lambda: [1e-2, 1.0])
    quadrature_nodes: int = 64
    grid: Dict[str, float] = field(default_factory=lambda: asdict(lab.GridSpec()))
    output: Optional[str] = None
    format: str = "json"
    workers: int = 1

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))

    def grid_spec(self) -> lab.GridSpec:
        g = dict(self.grid)
        g["n_points"] = int(g["n_points"])
        g["refine_decades"] = int(g["refine_decades"])
        g["refine_per_decade"] = int(g["refine_per_decade"])
        return lab.GridSpec(**g)


DEFAULT_TRIALS = {"chain": 100_000, "refined": 100_000, "rho": 100_000, "operator": 200, "hsnorm": 200, "uinorm": 200}


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _pairs(cfg: RunConfig, trials: int, stream: int):
    """Log-uniform pairs; chunk k is drawn from the stream (seed, stream, k)."""
    lo, hi = cfg.pair_range
    out_a, out_b = [], []
    for k in range(math.ceil(trials / CHUNK)):
        size = min(CHUNK, trials - k * CHUNK)
        a, b = lab.log_uniform_pairs(size, np.random.default_rng([cfg.seed, stream, k]), lo, hi)
        out_a.append(a)
        out_b.append(b)
    return np.concatenate(out_a), np.concatenate(out_b)


def _scalar_suite(cfg: RunConfig, name: str, trials: int) -> dict:
    a, b = _pairs(cfg, trials, stream=SUITES.index(name))
    violations, worst = [], math.inf
    if name == "chain":
        checks = [("fundamental", lab.fundamental_terms)]
    elif name == "refined":
        checks = [(f"m={m}", lambda x, y, m=m: lab.refined_terms(m, x, y)) for m in range(1, cfg.m_max + 1)]
    else:
        checks = [("rho", lab.rho_terms)]
    for label, fn in checks:
        res = lab.sweep(fn, a, b, cfg.scalar_tol)
        worst = min(worst, res["worst_gap"])
        violations += [dict(v, check=label) for v in res["violations"]]
        if res["n_violations"] > len(res["violations"]):
            violations.append({"check": label, "more": res["n_violations"] - len(res["violations"])})
    if name == "rho":
        xs = np.logspace(-6, 6, 2001)
        for x in xs:
            lhs, rhs, ok = lab.convexity_bound(float(x), cfg.scalar_tol)
            if not ok:
                violations.append({"check": "convexity", "x": float(x), "gap": rhs - lhs})
    return {"n_trials": trials, "violations": violations, "worst_gap": worst}


def _random_params(rng):
    return (float(rng.uniform(2 / 3, 1)), float(rng.uniform(0, 2 / 3)), float(rng.uniform(1 / 3, 3)))


def _operator_trial(args):
    cfg, i, fixed = args
    rng = np.random.default_rng([cfg.seed, SUITES.index("operator"), i])
    n = 2 + i % (cfg.n_max - 1) if cfg.n_max > 2 else 2
    lo, hi = cfg.condition_range
    s = random_psd(n, rng, (lo, hi))
    t = random_psd(n, rng, (lo, hi))
    params = [fixed] + [_random_params(rng) for _ in range(cfg.extra_params)]
    out = []
    for tp, sp, p in params:
        v = operator_chain_check(s, t, tp, sp, p, cfg.matrix_tol, cfg.quadrature_nodes)
        out.append((i, n, v))
    return out


def _norm_trial(args):
    cfg, name, i = args
    rng = np.random.default_rng([cfg.seed, SUITES.index(name), i])
    n = 1 + i % min(cfg.n_max, 6)
    lo, hi = cfg.condition_range
    s = random_psd(n, rng, (lo, hi))
    t = random_psd(n, rng, (lo, hi))
    x = random_matrix(n, rng)
    if name == "hsnorm":
        rep = hs_chain_check(s, t, x, cfg.matrix_tol)
        gaps = np.diff(rep.values)
        return i, n, [{"values": rep.values}] if not rep.ok else [], float(gaps.min()) if gaps.size else 0.0
    bad, worst = [], math.inf
    for r in cfg.r_values:
        d = ui_bound_details(r, s, t, x, cfg.matrix_tol)
        worst = min(worst, d.left_gap, d.right_gap)
        if not d.holds:
            bad.append({"r": r, "left_gap": d.left_gap, "right_gap": d.right_gap})
    return i, n, bad, worst


def _map(cfg: RunConfig, fn, items):
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            return list(ex.map(fn, items, chunksize=8))
    return [fn(it) for it in items]


def _matrix_suite(cfg: RunConfig, name: str, trials: int) -> dict:
    violations, worst = [], math.inf
    if name == "operator":
        results = _map(cfg, _operator_trial, [(cfg, i, (2 / 3, 2 / 3, 1 / 3)) for i in range(trials)])
        checks = 0
        max_asym = 0.0
        for batch in results:
            for i, n, v in batch:
                checks += 1
                worst = min(worst, v.worst)
                max_asym = max(max_asym, v.middle_asymmetry)
                if not v.holds:
                    violations.append({"trial": i, "n": n, **v.to_dict()})
        return {"n_trials": trials, "n_checks": checks, "violations": violations, "worst_gap": worst,
                "max_middle_asymmetry": max_asym}
    results = _map(cfg, _norm_trial, [(cfg, name, i) for i in range(trials)])
    for i, n, bad, w in results:
        worst = min(worst, w)
        violations += [{"trial": i, "n": n, **b} for b in bad]
    return {"n_trials": trials, "violations": violations, "worst_gap": worst}


def _instance_suite(cfg: RunConfig, name: str, files: List[str]) -> dict:
    mats = [read_matrix(f) for f in files]
    if name == "operator":
        if len(mats) != 2:
            raise MatrixError("operator suite takes two matrix files: S T")
        v = operator_chain_check(PsdMatrix.from_array(mats[0]), PsdMatrix.from_array(mats[1]), tol=cfg.matrix_tol)
        return {"n_trials": 1, "violations": [] if v.holds else [v.to_dict()], "worst_gap": v.worst}
    if len(mats) != 3:
        raise MatrixError(f"{name} suite takes three matrix files: S T X")
    s, t, x = PsdMatrix.from_array(mats[0]), PsdMatrix.from_array(mats[1]), mats[2]
    if name == "hsnorm":
        rep = hs_chain_check(s, t, x, cfg.matrix_tol)
        return {"n_trials": 1, "violations": [rep.to_dict()] if not rep.ok else [], "worst_gap": float(np.diff(rep.values).min())}
    bad, worst = [], math.inf
    for r in cfg.r_values:
        d = ui_bound_details(r, s, t, x, cfg.matrix_tol)
        worst = min(worst, d.left_gap, d.right_gap)
        if not d.holds:
            bad.append({"r": r, "left_gap": d.left_gap, "right_gap": d.right_gap})
    return {"n_trials": 1, "violations": bad, "worst_gap": worst}


def run_suite(name: str, cfg: RunConfig, matrices: Optional[List[str]] = None) -> dict:
    """Run one verification suite and return its report (without timing)."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    trials = cfg.trials if cfg.trials is not None else DEFAULT_TRIALS[name]
    if matrices:
        body = _instance_suite(cfg, name, matrices)
    elif name in ("chain", "refined", "rho"):
        body = _scalar_suite(cfg, name, trials)
    else:
        body = _matrix_suite(cfg, name, trials)
    return {"suite": name, "config": asdict(cfg), **body}


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def rows_to_csv(header: List[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _emit(text: str, path: Optional[str]):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

_PARAM_FLAGS = ("p", "s", "v", "r", "alpha", "u")


def cmd_means(args) -> int:
    kind = args.kind
    param = next((getattr(args, k) for k in _PARAM_FLAGS if getattr(args, k) is not None), None)
    text = kind if param is None else f"{kind}:{param}"
    mean = parse_mean(text)
    print(f"{mean(args.a, args.b):.15g}")
    return EXIT_OK


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_json(Path(args.config).read_text()) if getattr(args, "config", None) else RunConfig(seed=default_seed())
    for key in ("seed", "trials", "n_max", "m_max", "extra_params", "workers", "output", "format"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if getattr(args, "tol", None) is not None:
        cfg.scalar_tol = cfg.matrix_tol = args.tol
    return cfg


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    start = time.perf_counter()
    report = run_suite(args.suite, cfg, args.matrices)
    runtime_ms = (time.perf_counter() - start) * 1e3
    if args.timing:
        report["runtime_ms"] = runtime_ms
    nv = len(report["violations"])
    if cfg.format == "csv":
        text = rows_to_csv(["suite", "n_trials", "n_violations", "worst_gap"],
                           [[report["suite"], report["n_trials"], nv, report["worst_gap"]]])
    else:
        text = dump_json(report)
    if cfg.output:
        Path(cfg.output).write_text(text)
    print(f"{args.suite}: {report['n_trials']} trials, {nv} violations, worst gap {report['worst_gap']:.3e} "
          f"({runtime_ms:.0f} ms)")
    return EXIT_OK if nv == 0 else EXIT_VIOLATION


def _grid_from_args(args) -> lab.GridSpec:
    base = lab.GridSpec()
    return lab.GridSpec(
        lo=args.lo if args.lo is not None else base.lo,
        hi=args.hi if args.hi is not None else base.hi,
        n_points=args.points if args.points is not None else base.n_points,
        refine_decades=args.refine_decades if args.refine_decades is not None else base.refine_decades,
        refine_per_decade=args.refine_per_decade if args.refine_per_decade is not None else base.refine_per_decade,
    )


def cmd_scan(args) -> int:
    spec = _grid_from_args(args)
    t_scan, s_scan = lab.scan_sharp_constants(spec)
    res = t_scan if args.target == "sharp-t" else s_scan
    if args.format == "csv":
        text = rows_to_csv(["x", "log_ratio", "diff_ratio"], zip(t_scan.grid, t_scan.ratio_values, s_scan.ratio_values))
    else:
        text = dump_json({"target": args.target, "grid": asdict(spec), **res.to_dict()})
    _emit(text, args.output)
    if args.output:
        print(f"{args.target}: extremum {res.extremum:.12f} at x = {res.extremum_location:.6g}, "
              f"gap to 2/3 = {abs(res.extremum - lab.TWO_THIRDS):.3e}")
    if args.target == "sharp-t":
        ok = lab.TWO_THIRDS - 1e-4 <= res.extremum <= lab.TWO_THIRDS
    else:
        ok = lab.TWO_THIRDS <= res.extremum <= lab.TWO_THIRDS + 1e-4
    return EXIT_OK if ok else EXIT_VIOLATION


def _parse_points(text: str) -> List[float]:
    return [parse_number(t) for t in text.split(",") if t.strip()]


def cmd_kernel(args) -> int:
    f = kp.parse_kernel(args.family)
    if args.search:
        n, strategy, budget = int(args.search[0]), args.search[1].lower(), int(args.search[2])
        strategy = {"integergrid": "integer", "randomuniform": "random"}.get(strategy, strategy)
        w = kp.search_counterexample(f, n, strategy, budget, seed=args.seed if args.seed is not None else default_seed())
        out = {"family": str(f), "n": n, "strategy": strategy, "budget": budget,
               "status": "witness" if w else "inconclusive", "witness": w.to_dict() if w else None}
        _emit(dump_json(out), args.output)
        if args.output:
            print(f"{f}: {out['status']}" + (f", min eigenvalue {w.min_eigenvalue:.6g}" if w else ""))
        return EXIT_OK
    points = _parse_points(args.points) if args.points else [1.0, 2.0, 3.0]
    rep = kp.gram(f, points)
    if args.format == "csv":
        text = rows_to_csv(["index", "eigenvalue"], enumerate(rep.eigenvalues))
    else:
        text = dump_json({"family": str(f), **rep.to_dict()})
    _emit(text, args.output)
    if args.output:
        print(f"{f}: eigenvalues {', '.join(f'{x:.6g}' for x in rep.eigenvalues)}; psd={rep.psd}")
    return EXIT_OK


def cmd_series(args) -> int:
    params = np.linspace(args.start, args.stop, args.count)
    points = _parse_points(args.points)
    rows = [(p, kp.gram(kp.parse_kernel(f"{args.tag}:{float(p)!r}"), points).min_eigenvalue) for p in params]
    _emit(rows_to_csv(["param", "min_eigenvalue"], rows), args.output)
    return EXIT_OK


def cmd_witnesses(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    table = [f.to_dict() for f in kp.necessity_witnesses(args.budget, seed)]
    _emit(dump_json({"budget": args.budget, "seed": seed, "findings": table}), args.output)
    if args.output:
        for row in table:
            print(f"{row['status']:>12}  {row['claim']}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import reproduction_table

    rows = reproduction_table(seed=args.seed if args.seed is not None else default_seed())
    if args.format == "csv":
        text = rows_to_csv(["item", "reference", "computed", "tolerance", "pass"],
                           [[r["item"], r["reference"], r["computed"], r["tolerance"], r["pass"]] for r in rows])
    else:
        text = dump_json({"rows": rows, "all_pass": all(r["pass"] for r in rows)})
    _emit(text, args.output)
    failed = [r for r in rows if not r["pass"]]
    print(f"reproduce: {len(rows) - len(failed)}/{len(rows)} items pass", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meanlab", description="Verify inequalities between classical means.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("means", help="evaluate a scalar mean")
    p.add_argument("kind", help="A, G, H, L, binomial, heron, heronhat, heinz, bridge, lehmer, powerdiff")
    for k in _PARAM_FLAGS:
        p.add_argument(f"--{k}", type=float)
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.set_defaults(func=cmd_means)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--n", dest="n_max", type=int, help="largest matrix dimension")
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--extra-params", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--config", help="RunConfig JSON file")
    p.add_argument("--matrices", nargs="+", help="check one instance read from matrix text files")
    p.add_argument("--output")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--timing", action="store_true", help="record runtime_ms in the report file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="scan the sharp constants")
    p.add_argument("target", choices=("sharp-t", "sharp-s"))
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--refine-decades", type=int)
    p.add_argument("--refine-per-decade", type=int)
    p.add_argument("--output")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("kernel", help="Gram spectrum or witness search for a kernel family")
    p.add_argument("family", help='e.g. "phi:r=2/3", "ratio:L/heron:s=0.6"')
    p.add_argument("--points", help="comma-separated points (default 1,2,3)")
    p.add_argument("--search", nargs=3, metavar=("N", "STRATEGY", "BUDGET"))
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("series", help="CSV of (parameter, min Gram eigenvalue)")
    p.add_argument("tag", help="one-parameter family tag, e.g. phi")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, default=11)
    p.add_argument("--points", default="1,2,3")
    p.add_argument("--output")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("witnesses", help="search every non-domination claim for a witness")
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_witnesses)

    p = sub.add_parser("reproduce", help="table of reference numbers against computed values")
    p.add_argument("--seed", type=int)
    p.add_argument("--output")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MeanDomainError, MatrixError, kp.KernelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
