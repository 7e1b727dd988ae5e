"""Scripted benchmark experiments with seeded, tabulated results.

Three simulation families (planted-K recovery over a sparsity grid,
random block matrices filtered by smallest singular value, and joint
model-type + K selection) plus the political-blogs data run.  Every
cell of a run is reproducible bit for bit from (spec, seed): per-rep
generators are derived from the master seed and the cell parameters,
never from global state.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graphs import load_edge_list, largest_connected_component
from .models import sample, sim1_params, sim2_params, sim3_params
from .ncv import Candidate, candidate_grid, canonical_loss, ncv_select, repeat_ncv

logger = logging.getLogger(__name__)

_SIM_IDS = {"sim1": 1, "sim2": 2, "sim3": 3, "polblogs": 4}

# default sparsity grid for sim1 (the interesting range brackets the
# phase transition near r = 0.1 for small planted communities)
SIM1_R_GRID = (0.01, 0.02, 0.05, 0.1, 0.2)


@dataclass
class ExperimentSpec:
    which: str
    n: int = 1000
    K: tuple = (2,)
    n1: tuple | None = None       # sim1 planted community sizes
    r: tuple | None = None        # sim1 sparsity levels
    model: tuple = ("sbm", "dcbm")  # sim3 truth models
    reps: int = 20
    V: int = 3
    seed: int = 0
    loss: str = "negloglik"
    kmax_extra: int = 2           # candidates run over 1..K_true+kmax_extra
    threads: int | None = None

    def __post_init__(self):
        if self.which not in _SIM_IDS:
            raise ValueError(f"unknown experiment {self.which!r}")
        if self.reps < 1:
            raise ValueError(f"need reps >= 1, got {self.reps}")
        if self.V < 2:
            raise ValueError(f"need V >= 2, got {self.V}")
        self.loss = canonical_loss(self.loss)
        self.K = tuple(int(k) for k in self.K)
        if self.r is not None:
            self.r = tuple(float(x) for x in self.r)
        if self.n1 is not None:
            self.n1 = tuple(int(x) for x in self.n1)


@dataclass
class SuccessTable:
    which: str
    seed: int
    columns: list
    rows: list = field(default_factory=list)

    def to_csv(self, path_or_file):
        if hasattr(path_or_file, "write"):
            self._write_csv(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                self._write_csv(fh)

    def _write_csv(self, fh):
        w = csv.DictWriter(fh, fieldnames=self.columns, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow(row)

    def csv_text(self):
        buf = io.StringIO()
        self._write_csv(buf)
        return buf.getvalue()

    def to_json(self, indent=2):
        return json.dumps({"which": self.which, "seed": self.seed,
                           "rows": self.rows}, indent=indent)


def _cell_seq(seed, sim, *key):
    """Generator seed sequence tied to the cell parameters, so adding or
    reordering grid points does not shift any cell's stream."""
    ints = tuple(int(x) % (2**32) for x in key)
    return np.random.SeedSequence(seed, spawn_key=(_SIM_IDS[sim],) + ints)


def _run_reps(job, reps, threads):
    """job(rep) for rep in 0..reps-1, optionally on a thread pool; the
    result order is always by rep index."""
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(job, range(reps)))
    return [job(r) for r in range(reps)]


def _select_once(A, candidates, spec, rng):
    seed = int(rng.integers(2**63))
    return ncv_select(A, candidates, V=spec.V, fn=spec.loss, seed=seed).selected


def run_sim1(spec: ExperimentSpec) -> SuccessTable:
    """Planted-K SBM over a (r, K, n1) grid; success means the selected
    K equals the truth."""
    r_grid = spec.r if spec.r is not None else SIM1_R_GRID
    n1_grid = spec.n1 if spec.n1 is not None else (spec.n // max(spec.K),)
    cols = ["which", "n", "K", "n1", "r", "kmax", "reps", "successes", "rate",
            "under", "seed"]
    table = SuccessTable("sim1", spec.seed, cols)
    for r in r_grid:
        for K in spec.K:
            for n1 in n1_grid:
                if n1 * K > spec.n:
                    continue
                kmax = K + spec.kmax_extra
                candidates = candidate_grid(("sbm",), kmax)
                params = sim1_params(spec.n, K, n1, r)

                def rep_job(rep, K=K, n1=n1, r=r, params=params,
                            candidates=candidates):
                    rng = np.random.default_rng(
                        _cell_seq(spec.seed, "sim1", K, n1, round(r * 1e6), rep))
                    A = sample(params, rng)
                    return _select_once(A, candidates, spec, rng)

                sels = _run_reps(rep_job, spec.reps, spec.threads)
                hits = sum(1 for s in sels if s.K == K)
                under = sum(1 for s in sels if s.K < K)
                table.rows.append({"which": "sim1", "n": spec.n, "K": K,
                                   "n1": n1, "r": r, "kmax": kmax,
                                   "reps": spec.reps, "successes": hits,
                                   "rate": hits / spec.reps, "under": under,
                                   "seed": spec.seed})
    return table


def run_sim2(spec: ExperimentSpec) -> SuccessTable:
    """Random symmetric B with entries Unif(0, 0.5), kept only when its
    smallest singular value clears the pilot 25th-percentile bar."""
    cols = ["which", "n", "K", "kmax", "reps", "successes", "rate", "seed"]
    table = SuccessTable("sim2", spec.seed, cols)
    for K in spec.K:
        kmax = K + spec.kmax_extra
        candidates = candidate_grid(("sbm",), kmax)

        def rep_job(rep, K=K, candidates=candidates):
            rng = np.random.default_rng(_cell_seq(spec.seed, "sim2", K, rep))
            params = sim2_params(spec.n, K, rng)
            A = sample(params, rng)
            return _select_once(A, candidates, spec, rng)

        sels = _run_reps(rep_job, spec.reps, spec.threads)
        hits = sum(1 for s in sels if s.K == K)
        table.rows.append({"which": "sim2", "n": spec.n, "K": K, "kmax": kmax,
                           "reps": spec.reps, "successes": hits,
                           "rate": hits / spec.reps, "seed": spec.seed})
    return table


def run_sim3(spec: ExperimentSpec) -> SuccessTable:
    """Joint (model type, K) selection with both model families as truth.

    Reports the rate of picking the right family and, among those
    reps, the rate of also picking the right K (denominators kept)."""
    cols = ["which", "model", "n", "K", "kmax", "reps",
            "type_correct", "type_rate", "k_given_type", "k_rate", "seed"]
    table = SuccessTable("sim3", spec.seed, cols)
    for model in spec.model:
        for K in spec.K:
            kmax = K + spec.kmax_extra
            candidates = candidate_grid(("sbm", "dcbm"), kmax)

            def rep_job(rep, model=model, K=K, candidates=candidates):
                rng = np.random.default_rng(
                    _cell_seq(spec.seed, "sim3", 0 if model == "sbm" else 1, K, rep))
                params = sim3_params(spec.n, K, model, rng)
                A = sample(params, rng)
                return _select_once(A, candidates, spec, rng)

            sels = _run_reps(rep_job, spec.reps, spec.threads)
            type_hits = sum(1 for s in sels if s.model == model)
            k_hits = sum(1 for s in sels if s.model == model and s.K == K)
            k_rate = k_hits / type_hits if type_hits else float("nan")
            table.rows.append({"which": "sim3", "model": model, "n": spec.n,
                               "K": K, "kmax": kmax, "reps": spec.reps,
                               "type_correct": type_hits,
                               "type_rate": type_hits / spec.reps,
                               "k_given_type": k_hits, "k_rate": k_rate,
                               "seed": spec.seed})
    return table


POLBLOGS_HINT = ("edge list not found at {path}; fetch the political blogs "
                 "network (Adamic & Glance 2005), e.g. the polblogs dataset "
                 "from http://www-personal.umich.edu/~mejn/netdata/, and "
                 "convert it to a two-column whitespace edge list")


def run_polblogs(path, reps: int = 10, V: int = 3, seed: int = 0,
                 loss: str = "negloglik", kmax: int = 6,
                 threads: int | None = None):
    """Model selection on the political-blogs network.

    Restricts to the largest connected component, repeats selection
    over independent splittings, and returns (SuccessTable of selection
    frequencies, loss curves from the first splitting as a list of
    {model, K, total_loss} rows).
    """
    if not os.path.exists(path):
        raise FileNotFoundError(POLBLOGS_HINT.format(path=path))
    A, _ = load_edge_list(path, symmetrize=True)
    A_lcc, kept = largest_connected_component(A)
    logger.info("largest connected component: %d of %d nodes", kept.size, A.shape[0])
    candidates = candidate_grid(("sbm", "dcbm"), kmax)
    result = repeat_ncv(A_lcc, candidates, V, loss, reps, master_seed=seed,
                        threads=threads)
    cols = ["which", "n_lcc", "model", "K", "count", "freq", "reps", "seed"]
    table = SuccessTable("polblogs", seed, cols)
    for cand in candidates:
        cnt = result.counts.get(cand, 0)
        table.rows.append({"which": "polblogs", "n_lcc": int(kept.size),
                           "model": cand.model, "K": cand.K, "count": cnt,
                           "freq": cnt / reps, "reps": reps, "seed": seed})
    first = ncv_select(A_lcc, candidates, V=V, fn=loss, seed=result.rep_seeds[0],
                       threads=threads)
    curves = [{"model": c.model, "K": c.K, "total_loss": t}
              for c, t in zip(first.candidates, first.totals)]
    return table, curves


def write_loss_curves_csv(curves, path_or_file):
    """CSV writer for the per-candidate total-loss curves."""
    def _write(fh):
        w = csv.DictWriter(fh, fieldnames=["model", "K", "total_loss"],
                           lineterminator="\n")
        w.writeheader()
        for row in curves:
            w.writerow(row)
    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)


def run_experiment(spec: ExperimentSpec) -> SuccessTable:
    """Dispatch a simulation spec to its runner."""
    runner = {"sim1": run_sim1, "sim2": run_sim2, "sim3": run_sim3}
    if spec.which not in runner:
        raise ValueError(f"run_experiment handles simulations, not {spec.which!r}")
    return runner[spec.which](spec)
