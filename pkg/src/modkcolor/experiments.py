"""Seeded Monte Carlo trials on G(n, p) and their aggregation.

Every trial derives its own seed from ``(master_seed, trial_index)``, so the
records do not depend on how trials are scheduled across workers.
"""

from __future__ import annotations

import csv
import io
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from .engine import FAILURE_STAGES, construct_coloring
from .exact import LowerBoundCertificate, best_certificate, find_certificates
from .graph import InputError, degree_classes, residue_class, verify_coloring
from .random_model import (
    check_class_connectivity,
    check_class_min_degree,
    check_degree_class_balance,
    derive_seed,
    gnp,
)

MODES = ("full", "engine_only")


@dataclass(frozen=True)
class ExperimentConfig:
    k: int
    n: int
    p: float
    trials: int
    master_seed: int = 0
    mode: str = "full"
    output: Optional[str] = None
    workers: int = 1
    record_timing: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise InputError(f"k must be at least 2, got {self.k}")
        if self.n < 0:
            raise InputError(f"n must be non-negative, got {self.n}")
        if not 0 <= self.p <= 1:
            raise InputError(f"p must lie in [0, 1], got {self.p}")
        if self.trials < 1:
            raise InputError(f"trials must be at least 1, got {self.trials}")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.workers < 1:
            raise InputError("workers must be positive")

    def trial_seed(self, index: int) -> int:
        return derive_seed(self.master_seed, "trial", index)


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    class_sizes: List[int]
    balance_ok: bool
    mindeg_ok: bool
    conn_ok: bool
    engine_status: str
    fail_stage: str
    colors_used: Optional[int]
    cert_kind: str
    cert_bound: Optional[int]
    certified_exact: bool
    wall_time: float
    coloring_valid: Optional[bool] = None
    coloring: Optional[List[List[int]]] = field(default=None, repr=False)


def residue_certificate(G, k: int) -> Optional[LowerBoundCertificate]:
    """A vertex of degree ``d`` forces ``residue_class(d, k)`` colors."""
    best = None
    for v, d in enumerate(G.degrees()):
        if d > 0 and (best is None or residue_class(d, k) > best[1]):
            best = (v, residue_class(d, k))
    if best is None:
        return None
    return LowerBoundCertificate("residue_vertex", {"vertex": best[0]}, best[1])


def run_trial(config: ExperimentConfig, index: int, keep_coloring: bool = False) -> TrialRecord:
    seed = config.trial_seed(index)
    t0 = time.perf_counter()
    G = gnp(config.n, config.p, seed)
    k = config.k
    sizes = list(degree_classes(G, k).sizes)
    balance_ok = all(check_degree_class_balance(G, k).values())
    mindeg_ok = config.p > 0 and check_class_min_degree(G, k, config.p).ok
    conn_ok = all(check_class_connectivity(G, k).values())

    result = construct_coloring(G, k, seed=derive_seed(seed, "engine"))
    valid = None
    if result.success:
        valid = verify_coloring(G, result.coloring).valid
    cert_kind, cert_bound = "", None
    if config.mode == "full":
        certs = find_certificates(G, k)
        residue = residue_certificate(G, k)
        if residue is not None:
            certs.append(residue)
        best = best_certificate(certs)
        if best is not None:
            cert_kind, cert_bound = best.kind, best.bound
    colors = result.colors_used
    certified = bool(result.success and valid and cert_bound is not None and colors == cert_bound)
    return TrialRecord(
        trial_index=index,
        seed=seed,
        class_sizes=sizes,
        balance_ok=balance_ok,
        mindeg_ok=mindeg_ok,
        conn_ok=conn_ok,
        engine_status="success" if result.success else "failure",
        fail_stage="" if result.success else result.failure.stage,
        colors_used=colors,
        cert_kind=cert_kind,
        cert_bound=cert_bound,
        certified_exact=certified,
        wall_time=time.perf_counter() - t0,
        coloring_valid=valid,
        coloring=result.coloring.to_triples() if keep_coloring and result.success else None,
    )


def _run_chunk(args):
    config, indices = args
    return [run_trial(config, i) for i in indices]


def run_trials(config: ExperimentConfig) -> List[TrialRecord]:
    """Run every trial; records come back in trial order whatever the worker count."""
    indices = list(range(config.trials))
    if config.workers == 1:
        records = [run_trial(config, i) for i in indices]
    else:
        chunks = [indices[w :: config.workers] for w in range(config.workers)]
        with ProcessPoolExecutor(config.workers) as pool:
            parts = list(pool.map(_run_chunk, [(config, c) for c in chunks]))
        records = sorted((r for part in parts for r in part), key=lambda r: r.trial_index)
    if config.output:
        with open(config.output, "w", newline="") as fh:
            fh.write(records_to_csv(records, config.k, config.record_timing))
    return records


def csv_columns(k: int) -> List[str]:
    return (
        ["trial", "seed"]
        + [f"n{i}" for i in range(1, k + 1)]
        + [
            "balance_ok",
            "mindeg_ok",
            "conn_ok",
            "engine_status",
            "fail_stage",
            "colors_used",
            "cert_kind",
            "cert_bound",
            "certified_exact",
            "ms",
        ]
    )


def _opt(x) -> str:
    return "" if x is None else str(x)


def records_to_csv(records: Sequence[TrialRecord], k: int, record_timing: bool = False) -> str:
    """CSV text; ``ms`` stays blank unless ``record_timing`` so reruns are byte-identical."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_columns(k))
    for r in records:
        writer.writerow(
            [r.trial_index, r.seed]
            + r.class_sizes
            + [
                int(r.balance_ok),
                int(r.mindeg_ok),
                int(r.conn_ok),
                r.engine_status,
                r.fail_stage,
                _opt(r.colors_used),
                r.cert_kind,
                _opt(r.cert_bound),
                int(r.certified_exact),
                f"{r.wall_time * 1000:.1f}" if record_timing else "",
            ]
        )
    return buf.getvalue()


def _rate(num: int, den: int) -> Dict:
    frac = Fraction(num, den)
    return {"fraction": f"{frac.numerator}/{frac.denominator}", "value": float(frac)}


def summarize(records: Sequence[TrialRecord]) -> Dict:
    if not records:
        raise InputError("cannot summarize an empty record list")
    n = len(records)
    successes = sum(r.engine_status == "success" for r in records)
    certified = sum(r.certified_exact for r in records)
    stages = Counter(r.fail_stage for r in records if r.engine_status != "success")
    colors = Counter(r.colors_used for r in records if r.colors_used is not None)
    times = np.array([r.wall_time * 1000 for r in records])
    modal = max(colors.items(), key=lambda kv: (kv[1], -kv[0]))[0] if colors else None
    return {
        "trials": n,
        "success_rate": _rate(successes, n),
        "certified_exact_rate": _rate(certified, n),
        "failure_stages": {s: stages[s] for s in FAILURE_STAGES if stages[s]},
        "colors_histogram": {int(c): colors[c] for c in sorted(colors)},
        "modal_colors_used": modal,
        "timing_ms": {
            q: float(np.quantile(times, v)) for q, v in (("p50", 0.5), ("p90", 0.9), ("max", 1.0))
        },
    }
