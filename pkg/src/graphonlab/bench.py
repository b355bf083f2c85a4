"""Closed-form rate curves and the grid experiment runner.

Rates use unit constants throughout: the minimax statements hide constants
inside Omega/O, so these curves are for comparing shapes and orderings only.
"""

from dataclasses import asdict, dataclass, fields
import csv
import hashlib
import io
import json
import math
import os
import time

import numpy as np

from . import __version__
from .core import HardInstanceParams, make_block_matrix, planted_partition, q_matrix
from .errors import ConfigInvalid, ExhaustedAttempts
from .estimators import ESTIMATORS, empirical_risk, make_estimator
from .packing import sample_packing_set
from .rng import RngSeed

CSV_SCHEMA = "# graphonlab risk-record schema v1"


@dataclass(frozen=True)
class RateQuery:
    n: int
    k: int
    rho: float

    def __post_init__(self):
        if not 2 <= self.k <= self.n:
            raise ConfigInvalid(f"need 2 <= k <= n, got k={self.k}, n={self.n}")
        if not 0 < self.rho <= 1:
            raise ConfigInvalid(f"need 0 < rho <= 1, got {self.rho}")


def lower_rate(q: RateQuery) -> dict:
    """Unit-constant lower curve ``min(rho, klopp + this_paper + neeman)``."""
    n, k, rho = q.n, q.k, q.rho
    terms = {
        "sparse_floor": rho,
        "klopp": rho * (k / n) ** 0.25,
        "this_paper": math.sqrt(rho * k * k / (n * n)),
        "neeman": math.sqrt(rho * math.log(min(k, rho * n + 2)) / n),
    }
    total = min(rho, terms["klopp"] + terms["this_paper"] + terms["neeman"])
    return {"total": total, "terms": terms}


def upper_rate(q: RateQuery) -> float:
    """Unit-constant upper curve; the log term uses ``ln k`` in place of ``ln min(k, rho n + 2)``."""
    n, k, rho = q.n, q.k, q.rho
    s = rho * (k / n) ** 0.25 + math.sqrt(rho * k * k / (n * n)) + math.sqrt(rho * math.log(k) / n)
    return min(rho, s)


def gap_factor(q: RateQuery) -> float:
    """Largest possible upper/lower ratio, ``max(ln k / ln(rho n + 2), 1)``."""
    return max(math.log(q.k) / math.log(q.rho * q.n + 2), 1.0)


@dataclass(frozen=True)
class RiskRecord:
    estimator: str
    n: int
    k_true: int
    k_fit: int
    rho: float
    trials: int
    mean_lower_proxy: float
    se_lower: float
    mean_upper_proxy: float
    se_upper: float
    lower_rate_value: float
    upper_rate_value: float
    seed: int


RISK_FIELDS = [f.name for f in fields(RiskRecord)]


def format_records(records) -> str:
    buf = io.StringIO()
    buf.write(CSV_SCHEMA + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RISK_FIELDS)
    for r in records:
        w.writerow([repr(v) if isinstance(v, float) else v for v in asdict(r).values()])
    return buf.getvalue()


def read_records(path):
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    return rows


def _rates(n, k, rho):
    if 2 <= k <= n:
        q = RateQuery(n, k, rho)
        return lower_rate(q)["total"], upper_rate(q)
    return math.nan, math.nan


def risk_record(name, truth, n, k_fit, trials, seed, m=2, restarts=5, metric_restarts=10) -> RiskRecord:
    """Run :func:`empirical_risk` for one estimator and package the summary row."""
    est = make_estimator(name, truth=truth, k_fit=k_fit, restarts=restarts)
    res = empirical_risk(est, truth, n, trials, rng=seed, m=m, restarts=metric_restarts)
    k_true = truth.k
    rho = truth.rho
    lo_rate, up_rate = _rates(n, k_true, rho)
    k_rep = k_fit if name == "blocklsq" else (k_true if name == "oracle" else 1)
    return RiskRecord(
        estimator=name, n=n, k_true=k_true, k_fit=k_rep, rho=rho, trials=trials,
        mean_lower_proxy=res.mean_lower, se_lower=res.se_lower,
        mean_upper_proxy=res.mean_upper, se_upper=res.se_upper,
        lower_rate_value=lo_rate, upper_rate_value=up_rate, seed=seed.seed,
    )


# --- experiment configs ----------------------------------------------------

def _as_list(x):
    return list(x) if isinstance(x, (list, tuple)) else [x]


def validate_config(cfg: dict) -> dict:
    """Check an experiment config and fill in defaults."""
    if not isinstance(cfg, dict):
        raise ConfigInvalid("config must be a JSON object")
    for key in ("truth", "estimators", "grid", "trials", "seed"):
        if key not in cfg:
            raise ConfigInvalid(f"config is missing {key!r}")
    grid = cfg["grid"]
    for key in ("n", "k", "rho"):
        if not _as_list(grid.get(key, [])):
            raise ConfigInvalid(f"grid.{key} must be non-empty")
    ests = []
    for e in cfg["estimators"]:
        e = {"name": e} if isinstance(e, str) else dict(e)
        if e.get("name") not in ESTIMATORS:
            raise ConfigInvalid(f"unknown estimator {e.get('name')!r}")
        ests.append(e)
    if not ests:
        raise ConfigInvalid("estimators must be non-empty")
    kind = cfg["truth"].get("kind")
    if kind not in ("qb", "planted", "matrix", "constant"):
        raise ConfigInvalid(f"unknown truth kind {kind!r}")
    if int(cfg["trials"]) < 1:
        raise ConfigInvalid("trials must be positive")
    out = dict(cfg)
    out["estimators"] = ests
    out.setdefault("blowup_m", 2)
    out.setdefault("restarts", 5)
    out.setdefault("metric_restarts", 10)
    return out


def build_truth(truth_cfg: dict, n, k, rho, seed: RngSeed):
    kind = truth_cfg["kind"]
    if kind == "qb":
        c = float(truth_cfg.get("c", 0.25))
        target = int(truth_cfg.get("target", (k * k) // 8))
        try:
            s = sample_packing_set(k, 2, target, int(truth_cfg.get("max_attempts", 1000)), seed)
        except ExhaustedAttempts as exc:
            s = exc.achieved
        member = s.members[int(truth_cfg.get("member", 0)) % len(s.members)]
        return q_matrix(member, HardInstanceParams(n, k, rho, c))
    if kind == "planted":
        p = float(truth_cfg.get("p", rho))
        q = float(truth_cfg.get("q", rho / 2))
        return planted_partition(k, p, q)
    if kind == "constant":
        v = float(truth_cfg.get("value", rho))
        return make_block_matrix(np.full((k, k), v), rho)
    entries = truth_cfg.get("entries")
    if entries is None:
        from .io import read_matrix

        return read_matrix(truth_cfg["path"], rho=truth_cfg.get("rho"))
    return make_block_matrix(entries, truth_cfg.get("rho", 1.0))


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def grid_points(cfg):
    g = cfg["grid"]
    for n in _as_list(g["n"]):
        for k in _as_list(g["k"]):
            for rho in _as_list(g["rho"]):
                yield int(n), int(k), float(rho)


def _run_point(args):
    cfg, idx, (n, k, rho) = args
    root = RngSeed(int(cfg["seed"]), idx)
    truth = build_truth(cfg["truth"], n, k, rho, root.substream(0))
    rows = []
    for j, e in enumerate(cfg["estimators"]):
        k_fit = int(e.get("k_fit", k))
        rows.append(
            risk_record(
                e["name"], truth, n, k_fit, int(cfg["trials"]), RngSeed(int(cfg["seed"]), idx * 1000 + j + 1),
                m=int(cfg["blowup_m"]), restarts=int(e.get("restarts", cfg["restarts"])),
                metric_restarts=int(cfg["metric_restarts"]),
            )
        )
    return rows


def run_experiment(config, out_dir, threads=1, log=None) -> list:
    """Evaluate every grid point and write ``risk.csv`` plus ``manifest.json``.

    Rows are written in grid order after each point completes, so an
    interrupted run leaves a valid partial CSV and a manifest marked
    incomplete.
    """
    if isinstance(config, (str, os.PathLike)):
        with open(config) as fh:
            config = json.load(fh)
    cfg = validate_config(config)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "risk.csv")
    manifest_path = os.path.join(out_dir, "manifest.json")
    points = list(grid_points(cfg))
    tasks = [(cfg, i, p) for i, p in enumerate(points)]
    start = time.perf_counter()
    records = []
    complete = False
    try:
        with open(csv_path, "w", newline="") as fh:
            fh.write(format_records([]))
            fh.flush()
            if threads > 1:
                from concurrent.futures import ProcessPoolExecutor

                with ProcessPoolExecutor(max_workers=threads) as pool:
                    results = pool.map(_run_point, tasks)
                    for rows in results:
                        _append(fh, rows, records, log)
            else:
                for t in tasks:
                    _append(fh, _run_point(t), records, log)
        complete = True
    finally:
        manifest = {
            "config_hash": config_hash(config),
            "code_version": __version__,
            "grid_points": len(points),
            "rows": len(records),
            "complete": complete,
            "runtime_seconds": round(time.perf_counter() - start, 3),
        }
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return records


def _append(fh, rows, records, log):
    text = format_records(rows).split("\n", 2)[2]
    fh.write(text)
    fh.flush()
    records.extend(rows)
    if log:
        for r in rows:
            log(f"{r.estimator} n={r.n} k={r.k_true} rho={r.rho:.6g}: "
                f"lower={r.mean_lower_proxy:.4g} upper={r.mean_upper_proxy:.4g}")
