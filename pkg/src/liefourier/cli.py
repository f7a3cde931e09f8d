"""Config-driven command line front end.

Usage:  liefourier --config cfg.json [--seed N] [--out DIR] [--tol NAME=VALUE]
                   [--format csv|json]

The config is a single JSON object selecting one task; see the README for
the schema.  Outputs are a rows report (CSV by default) plus a JSON run
manifest (config echo, seed, library version, headline numbers).  Identical
(config, seed) pairs produce byte-identical reports: floats are written with
17 significant digits, rows are emitted in a fixed order, and wall time is
logged to stderr only.

Exit codes: 0 success, 1 configuration error, 2 a declared tolerance was
violated (or the task aborted; partial rows are flushed with a ``failed``
marker row).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .dual import enumerate_dual, evaluate_irrep, spin_cutoff
from .errors import ConfigurationError, PreconditionError
from .groups import SU2, TORUS, make_group, su2_point_from_distance
from .multipliers import (
    EnsembleConfig,
    boundedness_sweep,
    decay_slope,
    ensemble_member,
    kernel_difference_integral,
    window_kernel,
)
from .spaces import (
    NormSpec,
    build_partition,
    lebesgue_norm,
    tl_aggregate,
    weak_tl_norm,
    window_samples,
)
from .symbols import cached_grid, check_hormander_mihlin, check_marcinkiewicz, check_weak_marcinkiewicz, symbol_from_config
from .transform import (
    GridFunction,
    forward_transform,
    inverse_on_grid,
    plancherel_norm,
    random_coefficients,
)

TASKS = ("transform", "check-symbol", "tl-norm", "kernel-decay", "bound-sweep", "selftest")

_COMMON_FIELDS = {"task", "group", "seed", "tolerances", "out", "format"}
_TASK_FIELDS = {
    "transform": {"lam", "ell_max", "count"},
    "check-symbol": {"lam", "lams", "ell_max", "ell_maxes", "symbol", "checker", "order", "s", "s0"},
    "tl-norm": {"lam", "ell_max", "specs", "count", "ensemble"},
    "kernel-decay": {"lam", "ell_max", "symbol", "windows", "c", "z_distance"},
    "bound-sweep": {"lams", "ell_maxes", "symbol", "specs", "ensemble", "trend"},
    "selftest": {"lam", "ell_max", "count"},
}
_TASK_TOLERANCES = {
    "transform": {"roundtrip_max": 1e-10, "plancherel_max": 1e-10},
    "check-symbol": {"headline_max": math.inf, "max_growth": math.inf},
    "tl-norm": {},
    "kernel-decay": {"slope_max": -0.2},
    "bound-sweep": {"spread_max": math.inf},
    "selftest": {
        "weights_max": 1e-13,
        "schur_max": 1e-10,
        "roundtrip_max": 1e-10,
        "plancherel_max": 1e-10,
        "partition_max": 1e-12,
        "reconstruction_max": 1e-11,
    },
}


def fmt(value) -> str:
    """Deterministic cell formatting: 17 significant digits for floats."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def emit_report(rows: list[dict], path: str | Path, fmt_kind: str = "csv") -> Path:
    """Write rows bit-stably ('\\n' endings, '.' decimal separator)."""
    if not rows:
        raise PreconditionError("cannot emit an empty report")
    if fmt_kind not in ("csv", "json"):
        raise ConfigurationError(f"unknown report format {fmt_kind!r}")
    path = Path(path)
    header = list(rows[0].keys())
    for row in rows:
        if list(row.keys()) != header:
            raise PreconditionError("report rows must share one column set")
    if fmt_kind == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in row.values()])
    else:
        payload = [{k: (fmt(v) if isinstance(v, (float, np.floating)) else v) for k, v in row.items()} for row in rows]
        with open(path, "w", newline="") as fh:
            fh.write(json.dumps(payload, indent=1))
            fh.write("\n")
    return path


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------

def _validate_config(cfg: dict) -> dict:
    if not isinstance(cfg, dict):
        raise ConfigurationError("config must be a JSON object")
    task = cfg.get("task")
    if task not in TASKS:
        raise ConfigurationError(f"task must be one of {TASKS}, got {task!r}")
    allowed = _COMMON_FIELDS | _TASK_FIELDS[task]
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigurationError(f"unknown config fields for task {task}: {sorted(unknown)}")
    gcfg = cfg.get("group")
    if not isinstance(gcfg, dict) or "kind" not in gcfg:
        raise ConfigurationError("config needs a group object with a 'kind'")
    extra = set(gcfg) - {"kind", "dim"}
    if extra:
        raise ConfigurationError(f"unknown group fields: {sorted(extra)}")
    make_group(gcfg["kind"], int(gcfg.get("dim", 1)))  # raises on bad values
    tol = cfg.get("tolerances", {})
    known = _TASK_TOLERANCES[task]
    bad = set(tol) - set(known)
    if bad:
        raise ConfigurationError(f"unknown tolerances for task {task}: {sorted(bad)}")
    seed = cfg.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigurationError("seed must be an integer")
    return cfg


def _tolerances(cfg: dict) -> dict:
    out = dict(_TASK_TOLERANCES[cfg["task"]])
    out.update(cfg.get("tolerances", {}))
    return {k: float(v) for k, v in out.items()}


def _group(cfg):
    gcfg = cfg["group"]
    return make_group(gcfg["kind"], int(gcfg.get("dim", 1)))


def _specs(cfg) -> list[NormSpec]:
    out = []
    for item in cfg["specs"]:
        out.append(NormSpec(float(item["r"]), float(item["p"]), float(item["q"])))
    if not out:
        raise ConfigurationError("specs must be nonempty")
    return out


def _digest(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _cutoff(cfg, group) -> float:
    if "lam" in cfg:
        return float(cfg["lam"])
    if "ell_max" in cfg:
        if group.kind != SU2:
            raise ConfigurationError("ell_max applies to su2 only")
        return spin_cutoff(float(cfg["ell_max"]))
    raise ConfigurationError("config needs 'lam' (or 'ell_max' on su2)")


def _cutoff_list(cfg, group) -> list[float]:
    if "lams" in cfg:
        return [float(v) for v in cfg["lams"]]
    if "ell_maxes" in cfg:
        if group.kind != SU2:
            raise ConfigurationError("ell_maxes applies to su2 only")
        return [spin_cutoff(float(v)) for v in cfg["ell_maxes"]]
    return [_cutoff(cfg, group)]


def _symbol_name(cfg) -> str:
    scfg = cfg["symbol"]
    parts = [str(scfg.get("type"))]
    for key in ("t", "ell", "seed"):
        if key in scfg:
            parts.append(f"{key}={scfg[key]}")
    return ",".join(parts)


# ---------------------------------------------------------------------------
# Tasks
# ---------------------------------------------------------------------------

def _task_transform(cfg, seed, tol, digest):
    group = _group(cfg)
    lam = _cutoff(cfg, group)
    count = int(cfg.get("count", 8))
    dual = enumerate_dual(group, lam)
    grid = cached_grid(group, dual.max_band)
    rows = []
    worst_rt = worst_pl = 0.0
    for member in range(count):
        rng = np.random.default_rng([seed, member])
        coeffs = random_coefficients(dual, rng)
        samples = inverse_on_grid(coeffs, grid)
        back = forward_transform(samples, dual)
        rt = max(
            float(np.max(np.abs(a - b))) for a, b in zip(coeffs.blocks, back.blocks)
        )
        pl = plancherel_norm(coeffs)
        l2 = float(np.sqrt(np.sum(grid.weights * np.abs(samples.values) ** 2)))
        rel = abs(pl - l2) / pl if pl > 0 else 0.0
        ok = rt <= tol["roundtrip_max"] and rel <= tol["plancherel_max"]
        rows.append(
            {
                "task": "transform",
                "digest": digest,
                "group": group.kind,
                "lam": lam,
                "member": member,
                "roundtrip_error": rt,
                "plancherel_rel_error": rel,
                "status": "ok" if ok else "fail",
            }
        )
        worst_rt = max(worst_rt, rt)
        worst_pl = max(worst_pl, rel)
    headline = {"roundtrip_error": worst_rt, "plancherel_rel_error": worst_pl}
    return rows, headline


def _task_check_symbol(cfg, seed, tol, digest):
    group = _group(cfg)
    lams = _cutoff_list(cfg, group)
    checker = cfg.get("checker", "marcinkiewicz")
    partition = build_partition()
    rows = []
    per_key: dict = {}
    headline_by_lam = {}
    for lam in lams:
        dual = enumerate_dual(group, lam)
        symbol = symbol_from_config(cfg["symbol"], dual, partition)
        if checker == "marcinkiewicz":
            rep = check_marcinkiewicz(symbol, cfg.get("order"))
        elif checker == "hormander-mihlin":
            rep = check_hormander_mihlin(symbol, cfg.get("s"), partition)
        elif checker == "weak-marcinkiewicz":
            rep = check_weak_marcinkiewicz(symbol, int(cfg.get("s0", 1)))
        else:
            raise ConfigurationError(f"unknown checker {checker!r}")
        headline_by_lam[lam] = rep.headline
        for key in sorted(rep.constants, key=str):
            value = rep.constants[key]
            per_key.setdefault(str(key), {})[lam] = value
            rows.append(
                {
                    "task": "check-symbol",
                    "digest": digest,
                    "group": group.kind,
                    "symbol": _symbol_name(cfg),
                    "checker": checker,
                    "lam": lam,
                    "key": str(key),
                    "value": value,
                    "status": "ok" if value <= tol["headline_max"] else "fail",
                }
            )
    if len(lams) > 1:
        for key, by_lam in per_key.items():
            lo, hi = by_lam.get(lams[0], 0.0), by_lam.get(lams[-1], 0.0)
            growth = hi / lo if lo > 0 else (math.inf if hi > 0 else 0.0)
            rows.append(
                {
                    "task": "check-symbol",
                    "digest": digest,
                    "group": group.kind,
                    "symbol": _symbol_name(cfg),
                    "checker": checker,
                    "lam": lams[-1],
                    "key": f"growth[{key}]",
                    "value": growth,
                    "status": "ok" if growth <= tol["max_growth"] else "fail",
                }
            )
    headline = {"headline": max(headline_by_lam.values())}
    return rows, headline


def _task_tl_norm(cfg, seed, tol, digest):
    group = _group(cfg)
    lam = _cutoff(cfg, group)
    count = int(cfg.get("count", 4))
    specs = _specs(cfg)
    ens_cfg = cfg.get("ensemble", {"kind": "gaussian-coefficients", "count": count})
    ensemble = EnsembleConfig(ens_cfg["kind"], int(ens_cfg.get("count", count)))
    dual = enumerate_dual(group, lam)
    grid = cached_grid(group, dual.max_band)
    partition = build_partition()
    rows = []
    for member in range(ensemble.count):
        rng = np.random.default_rng([seed, member])
        coeffs = ensemble_member(ensemble, member, dual, partition, rng)
        levels, mods = window_samples(coeffs, partition, grid)
        for spec in specs:
            agg = tl_aggregate(levels, mods, spec.r, spec.q)
            strong = lebesgue_norm(GridFunction(grid, agg.astype(complex)), spec.p)
            weak = ""
            if spec.p == 1.0:
                weak = weak_tl_norm(coeffs, spec, partition, grid)
            rows.append(
                {
                    "task": "tl-norm",
                    "digest": digest,
                    "group": group.kind,
                    "lam": lam,
                    "member": member,
                    "r": spec.r,
                    "p": spec.p,
                    "q": spec.q,
                    "norm": strong,
                    "weak_norm": weak,
                    "status": "ok",
                }
            )
    return rows, {"rows": float(len(rows))}


def _task_kernel_decay(cfg, seed, tol, digest):
    group = _group(cfg)
    lam = _cutoff(cfg, group)
    windows = [int(w) for w in cfg["windows"]]
    c = float(cfg.get("c", 1.0))
    z_distance = float(cfg["z_distance"])
    partition = build_partition()
    dual = enumerate_dual(group, lam)
    grid = cached_grid(group, dual.max_band)
    symbol = symbol_from_config(cfg["symbol"], dual, partition)
    if group.kind == TORUS:
        z = np.zeros(group.dim)
        z[0] = z_distance / (2.0 * np.pi)
    else:
        z = su2_point_from_distance(z_distance)
    rows = []
    integrals = []
    for ell in windows:
        kernel = window_kernel(symbol, partition, ell)
        value = kernel_difference_integral(kernel, z, c, grid)
        integrals.append(value)
        rows.append(
            {
                "task": "kernel-decay",
                "digest": digest,
                "group": group.kind,
                "symbol": _symbol_name(cfg),
                "lam": lam,
                "window": ell,
                "value": value,
                "status": "ok",
            }
        )
    slope = decay_slope(windows, integrals)
    rows.append(
        {
            "task": "kernel-decay",
            "digest": digest,
            "group": group.kind,
            "symbol": _symbol_name(cfg),
            "lam": lam,
            "window": "slope",
            "value": slope,
            "status": "ok" if slope <= tol["slope_max"] else "fail",
        }
    )
    return rows, {"slope": slope}


def _task_bound_sweep(cfg, seed, tol, digest):
    group = _group(cfg)
    lams = _cutoff_list(cfg, group)
    specs = _specs(cfg)
    ens_cfg = cfg["ensemble"]
    ensemble = EnsembleConfig(ens_cfg["kind"], int(ens_cfg["count"]))
    partition = build_partition()
    builder = lambda dual: symbol_from_config(cfg["symbol"], dual, partition)
    sweeps = boundedness_sweep(
        group, builder, specs, lams, ensemble, seed, partition, _symbol_name(cfg)
    )
    trend = cfg.get("trend", "none")
    if trend not in ("none", "increasing"):
        raise ConfigurationError("trend must be 'none' or 'increasing'")
    rows = []
    worst_spread = 0.0
    for sweep in sweeps:
        ratios = sweep.max_ratios
        spread = (max(ratios) - min(ratios)) / max(ratios) if max(ratios) > 0 else 0.0
        worst_spread = max(worst_spread, spread)
        increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
        ok = spread <= tol["spread_max"] and (trend != "increasing" or increasing)
        for lam, ratio, arg in zip(sweep.cutoffs, ratios, sweep.argmax_members):
            rows.append(
                {
                    "task": "bound-sweep",
                    "digest": digest,
                    "group": group.kind,
                    "symbol": sweep.symbol_id,
                    "r": sweep.spec.r,
                    "p": sweep.spec.p,
                    "q": sweep.spec.q,
                    "lam": lam,
                    "max_ratio": ratio,
                    "argmax_member": arg,
                    "seed": seed,
                    "status": "ok" if ok else "fail",
                }
            )
    return rows, {"max_spread": worst_spread}


def _schur_residual(group) -> float:
    cutoff = math.sqrt(5.0) + 1e-9 if group.kind == TORUS else spin_cutoff(1.5)
    dual = enumerate_dual(group, cutoff)
    grid = cached_grid(group, dual.max_band)
    tables = [
        np.stack([evaluate_irrep(group, ir, p) for p in grid.points]) for ir in dual.irreps
    ]
    worst = 0.0
    for i, ir1 in enumerate(dual.irreps):
        for j, ir2 in enumerate(dual.irreps):
            gram = np.einsum("p,pab,pcd->abcd", grid.weights, tables[i], np.conj(tables[j]))
            expect = np.zeros_like(gram)
            if i == j:
                d = ir1.dim
                for a in range(d):
                    for b in range(d):
                        expect[a, b, a, b] = 1.0 / d
            worst = max(worst, float(np.max(np.abs(gram - expect))))
    return worst


def _task_selftest(cfg, seed, tol, digest):
    group = _group(cfg)
    lam = _cutoff(cfg, group)
    count = int(cfg.get("count", 4))
    dual = enumerate_dual(group, lam)
    grid = cached_grid(group, dual.max_band)
    partition = build_partition()

    checks = {}
    checks["weights_sum"] = abs(float(grid.weights.sum()) - 1.0)
    checks["schur"] = _schur_residual(group)

    worst_rt = worst_pl = 0.0
    for member in range(count):
        rng = np.random.default_rng([seed, member])
        coeffs = random_coefficients(dual, rng)
        samples = inverse_on_grid(coeffs, grid)
        back = forward_transform(samples, dual)
        worst_rt = max(
            worst_rt,
            max(float(np.max(np.abs(a - b))) for a, b in zip(coeffs.blocks, back.blocks)),
        )
        pl = plancherel_norm(coeffs)
        l2 = float(np.sqrt(np.sum(grid.weights * np.abs(samples.values) ** 2)))
        worst_pl = max(worst_pl, abs(pl - l2) / pl)
    checks["roundtrip"] = worst_rt
    checks["plancherel"] = worst_pl

    lam_samples = np.geomspace(1.0, 1e6, 400)
    total = np.zeros_like(lam_samples)
    for ell in range(22):
        total += partition.psi(ell, lam_samples)
    checks["partition_sum"] = float(np.max(np.abs(total - 1.0)))

    recon = np.zeros(len(dual.irreps))
    for ell in partition.levels(dual.cutoff):
        recon += partition.psi(ell, dual.eigenvalues)
    checks["reconstruction"] = float(np.max(np.abs(recon - 1.0)))

    limits = {
        "weights_sum": tol["weights_max"],
        "schur": tol["schur_max"],
        "roundtrip": tol["roundtrip_max"],
        "plancherel": tol["plancherel_max"],
        "partition_sum": tol["partition_max"],
        "reconstruction": tol["reconstruction_max"],
    }
    rows = []
    for name, value in checks.items():
        rows.append(
            {
                "task": "selftest",
                "digest": digest,
                "group": group.kind,
                "lam": lam,
                "check": name,
                "residual": value,
                "tolerance": limits[name],
                "status": "ok" if value <= limits[name] else "fail",
            }
        )
    headline = {f"{k}_residual": v for k, v in checks.items()}
    return rows, headline


_RUNNERS = {
    "transform": _task_transform,
    "check-symbol": _task_check_symbol,
    "tl-norm": _task_tl_norm,
    "kernel-decay": _task_kernel_decay,
    "bound-sweep": _task_bound_sweep,
    "selftest": _task_selftest,
}


def run_config(cfg: dict, out_dir: str | Path, fmt_kind: str | None = None) -> int:
    """Validate and execute one task; write the rows report and manifest.

    Returns the process exit code (0 ok, 1 config error, 2 failure).
    """
    try:
        cfg = _validate_config(cfg)
    except (ConfigurationError, KeyError, TypeError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    task = cfg["task"]
    seed = int(cfg.get("seed", 0))
    tol = _tolerances(cfg)
    digest = _digest(cfg)
    fmt_kind = fmt_kind or cfg.get("format", "csv")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    status = "ok"
    headline: dict = {}
    try:
        rows, headline = _RUNNERS[task](cfg, seed, tol, digest)
        if any(row["status"] == "fail" for row in rows):
            status = "fail"
    except (ConfigurationError, PreconditionError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # flush whatever we have, marked failed
        rows = [
            {
                "task": task,
                "digest": digest,
                "group": cfg["group"]["kind"],
                "status": "failed",
                "error": f"{type(exc).__name__}: {exc}",
            }
        ]
        status = "failed"
    elapsed = time.perf_counter() - started

    report_path = out_dir / f"{task}_report.{ 'json' if fmt_kind == 'json' else 'csv' }"
    emit_report(rows, report_path, fmt_kind)
    manifest = {
        "task": task,
        "config": cfg,
        "seed": seed,
        "version": __version__,
        "digest": digest,
        "headline": {k: fmt(v) for k, v in headline.items()},
        "status": status,
    }
    with open(out_dir / "run_manifest.json", "w", newline="") as fh:
        fh.write(json.dumps(manifest, indent=1, sort_keys=True))
        fh.write("\n")
    print(f"{task}: {status} ({elapsed:.2f}s wall), report at {report_path}", file=sys.stderr)
    return 0 if status == "ok" else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="liefourier", description=__doc__)
    parser.add_argument("--config", required=True, help="path to the JSON task config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="output directory (default: config 'out' or '.')")
    parser.add_argument("--format", choices=("csv", "json"), default=None, help="rows report format")
    parser.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override a named tolerance (repeatable)",
    )
    args = parser.parse_args(argv)
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: cannot read config: {exc}", file=sys.stderr)
        return 1
    if not isinstance(cfg, dict):
        print("configuration error: config must be a JSON object", file=sys.stderr)
        return 1
    if args.seed is not None:
        cfg["seed"] = args.seed
    overrides = {}
    for item in args.tol:
        if "=" not in item:
            print(f"configuration error: bad --tol {item!r}", file=sys.stderr)
            return 1
        name, value = item.split("=", 1)
        try:
            overrides[name] = float(value)
        except ValueError:
            print(f"configuration error: bad --tol value {value!r}", file=sys.stderr)
            return 1
    if overrides:
        cfg.setdefault("tolerances", {}).update(overrides)
    out_dir = args.out or cfg.get("out", ".")
    return run_config(cfg, out_dir, args.format)


if __name__ == "__main__":
    sys.exit(main())
