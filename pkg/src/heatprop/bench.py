"""Experiment harness: stochastic block model generation, seed sampling,
macro-F1 scoring, and a reproducible repetition runner.

Every repetition derives its own rng streams (one for graph generation, one
for seed selection) from the master seed and the repetition index, so reports
are bitwise reproducible in single-worker mode and independent of scheduling.
All centering modes inside one repetition share the same graph, the same
seeds, and the same Dirichlet solves (paired comparison).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .classifier import CENTERING_MODES, _argmax_labels, center_fields, solve_label_fields
from .dirichlet import SolverConfig
from .errors import DataError, EvaluationError, GenerationError, HeatpropError, SamplingError
from .graph import Graph, LabeledNodes


@dataclass(frozen=True)
class SbmParams:
    sizes: tuple[int, ...]
    p: float
    q: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(x) for x in self.sizes))
        if any(nk < 1 for nk in self.sizes):
            raise DataError("block sizes must be positive")
        if not 0 < self.p <= 1:
            raise DataError("p must be in (0, 1]")
        if not 0 <= self.q <= 1:
            raise DataError("q must be in [0, 1]")


@dataclass(frozen=True)
class SbmSample:
    graph: Graph
    labels: LabeledNodes  # ground truth for every kept node
    isolated_removed: int
    kept_nodes: np.ndarray = field(repr=False)  # original id per compact id


def _bernoulli_indices(rng: np.random.Generator, m: int, prob: float) -> np.ndarray:
    """Indices i in [0, m) kept independently with probability prob.

    Uses geometric gap skipping, so the cost is proportional to the number of
    successes rather than m.
    """
    if m == 0 or prob <= 0.0:
        return np.empty(0, dtype=np.int64)
    if prob >= 1.0:
        return np.arange(m, dtype=np.int64)
    chunks = []
    pos = -1
    while pos < m:
        budget = (m - pos) * prob
        size = int(budget + 10.0 * np.sqrt(budget) + 10.0)
        gaps = rng.geometric(prob, size=size)
        idx = pos + np.cumsum(gaps)
        chunks.append(idx)
        pos = int(idx[-1])
    out = np.concatenate(chunks)
    return out[out < m]


def _triu_pairs(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Decode linear indices of the strict upper triangle of an n x n grid."""
    # row i owns indices [i*n - i*(i+1)/2, ...) of length n - 1 - i
    i = (n - 2 - np.floor(np.sqrt(-8.0 * idx + 4 * n * (n - 1) - 7) / 2.0 - 0.5)).astype(np.int64)
    j = idx + i + 1 - i * (2 * n - i - 1) // 2
    return i, j.astype(np.int64)


def generate_sbm(params: SbmParams, rng: np.random.Generator | None = None) -> SbmSample:
    """Draw a simple undirected graph: intra-block pairs connected with
    probability p, inter-block with q, no self-loops.

    Isolated nodes are removed (their count is reported) so the resulting
    Graph keeps its positive-degree invariant; node ids are compacted and the
    ground-truth block labels follow the kept nodes.
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    sizes = params.sizes
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    n = int(offsets[-1])
    rows, cols = [], []
    for a, na in enumerate(sizes):
        idx = _bernoulli_indices(rng, na * (na - 1) // 2, params.p)
        i, j = _triu_pairs(idx, na)
        rows.append(i + offsets[a])
        cols.append(j + offsets[a])
        for b in range(a + 1, len(sizes)):
            nb = sizes[b]
            idx = _bernoulli_indices(rng, na * nb, params.q)
            rows.append(idx // nb + offsets[a])
            cols.append(idx % nb + offsets[b])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    present = np.zeros(n, dtype=bool)
    present[rows] = True
    present[cols] = True
    kept = np.flatnonzero(present)
    if kept.size == 0:
        raise GenerationError("all nodes are isolated")
    compact = np.full(n, -1, dtype=np.int64)
    compact[kept] = np.arange(kept.size)
    block = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    # direct CSR assembly; no self-loops, so mirror every pair
    r, c = compact[rows], compact[cols]
    adj = sp.coo_array(
        (np.ones(2 * r.size), (np.concatenate([r, c]), np.concatenate([c, r]))),
        shape=(kept.size, kept.size),
    ).tocsr()
    adj.sum_duplicates()
    adj.sort_indices()
    degrees = np.asarray(adj.sum(axis=1)).ravel()
    graph = Graph(n=kept.size, adjacency=adj, degrees=degrees)
    labels = LabeledNodes(
        labels={int(compact[i]): int(block[i]) for i in kept},
        num_classes=len(sizes),
    )
    return SbmSample(graph=graph, labels=labels,
                     isolated_removed=n - kept.size, kept_nodes=kept)


@dataclass(frozen=True)
class PerClassCounts:
    """Sample exactly counts[k-1] seeds uniformly from each class k."""

    counts: tuple[int, ...]


@dataclass(frozen=True)
class GlobalFraction:
    """Sample round(fraction * n) seeds uniformly from all nodes; resample
    until every class present in the labels has at least one seed."""

    fraction: float
    max_retries: int = 100


def sample_seeds(labels: LabeledNodes, rule, rng: np.random.Generator) -> LabeledNodes:
    """Draw a seed subset of a fully labeled node set; deterministic given rng."""
    nodes = np.array(labels.nodes, dtype=np.int64)
    n = nodes.size
    if isinstance(rule, PerClassCounts):
        counts = tuple(int(c) for c in rule.counts)
        if len(counts) != labels.num_classes:
            raise SamplingError("one count per class required")
        chosen = {}
        for k, c in enumerate(counts, start=1):
            members = np.array(labels.of_class(k), dtype=np.int64)
            if c < 1 or c > members.size:
                raise SamplingError(
                    f"class {k} has {members.size} nodes, cannot draw {c} seeds")
            for i in rng.choice(members, size=c, replace=False):
                chosen[int(i)] = k
        if len(chosen) >= n:
            raise SamplingError("no free nodes left after seeding")
        return LabeledNodes(labels=chosen, num_classes=labels.num_classes)
    if isinstance(rule, GlobalFraction):
        s = int(round(rule.fraction * n))
        if s < 1:
            raise SamplingError(f"fraction {rule.fraction} yields no seeds")
        if s >= n:
            raise SamplingError("seed fraction leaves no free nodes")
        present = {lab for lab in labels.labels.values()}
        for _ in range(rule.max_retries):
            pick = rng.choice(nodes, size=s, replace=False)
            chosen = {int(i): labels.labels[int(i)] for i in pick}
            if {lab for lab in chosen.values()} == present:
                return LabeledNodes(labels=chosen, num_classes=labels.num_classes)
        raise SamplingError(
            f"could not cover every class in {rule.max_retries} draws")
    raise SamplingError(f"unknown seed rule {rule!r}")


def macro_f1(truth: dict[int, int], pred: dict[int, int]) -> tuple[float, dict[int, float]]:
    """Macro-F1 over the classes present in the truth; 0/0 counts as 0."""
    if set(truth) != set(pred):
        raise EvaluationError("truth and prediction cover different node sets")
    classes = sorted(set(truth.values()))
    per_class = {}
    for k in classes:
        tp = sum(1 for i in truth if truth[i] == k and pred[i] == k)
        fp = sum(1 for i in truth if truth[i] != k and pred[i] == k)
        fn = sum(1 for i in truth if truth[i] == k and pred[i] != k)
        per_class[k] = 2.0 * tp / (2 * tp + fp + fn) if tp else 0.0
    return float(np.mean(list(per_class.values()))), per_class


@dataclass(frozen=True)
class FileSource:
    """A pre-loaded graph with full ground-truth labels."""

    graph: Graph
    labels: LabeledNodes


@dataclass(frozen=True)
class ExperimentSpec:
    source: SbmParams | FileSource
    seed_rule: PerClassCounts | GlobalFraction
    modes: tuple[str, ...]
    repetitions: int
    master_seed: int
    solver: SolverConfig = SolverConfig()

    def __post_init__(self):
        if self.repetitions < 1:
            raise DataError("repetitions must be >= 1")
        for m in self.modes:
            if m not in CENTERING_MODES:
                raise DataError(f"unknown centering mode {m!r}")


@dataclass(frozen=True)
class ModeStats:
    mode: str
    macro_mean: float
    macro_std: float  # population std
    per_class_mean: dict[int, float]
    macro_per_rep: tuple[float, ...]
    runs: int


@dataclass(frozen=True)
class ExperimentReport:
    stats: dict[str, ModeStats]
    repetitions: int
    master_seed: int
    isolated_removed: tuple[int, ...]
    solver_iterations_mean: float
    solver_residual_max: float
    wall_clock_total_s: float
    wall_clock_mean_s: float
    seed_rule_note: str


def _rep_rngs(master_seed: int, rep: int):
    graph_rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(rep, 0)))
    seed_rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(rep, 1)))
    return graph_rng, seed_rng


def _run_repetition(spec: ExperimentSpec, rep: int):
    t0 = time.perf_counter()
    graph_rng, seed_rng = _rep_rngs(spec.master_seed, rep)
    if isinstance(spec.source, SbmParams):
        sample = generate_sbm(spec.source, rng=graph_rng)
        graph, truth = sample.graph, sample.labels
        isolated = sample.isolated_removed
    else:
        graph, truth = spec.source.graph, spec.source.labels
        isolated = 0
    seeds = sample_seeds(truth, spec.seed_rule, seed_rng)
    fields, residuals, iterations, seed_ids = solve_label_fields(graph, seeds, spec.solver)
    free_truth = {i: lab for i, lab in truth.labels.items() if i not in seeds.labels}
    results = {}
    for mode in spec.modes:
        scores = center_fields(fields, seed_ids, mode)
        pred = _argmax_labels(scores, seed_ids)
        results[mode] = macro_f1(free_truth, pred)
    return {
        "rep": rep,
        "results": results,
        "isolated": isolated,
        "iterations": float(np.mean(iterations)),
        "residual": float(np.max(residuals)),
        "seconds": time.perf_counter() - t0,
    }


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentReport:
    """Run all repetitions and aggregate mean/std per centering mode.

    A failing repetition aborts the whole experiment, naming its index.
    """
    t0 = time.perf_counter()
    reps = range(spec.repetitions)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_repetition, spec, r) for r in reps]
            try:
                outcomes = [f.result() for f in futures]
            except HeatpropError as exc:
                raise type(exc)(f"repetition failed: {exc}") from exc
    else:
        outcomes = []
        for r in reps:
            try:
                outcomes.append(_run_repetition(spec, r))
            except HeatpropError as exc:
                raise type(exc)(f"repetition {r} failed: {exc}") from exc
    outcomes.sort(key=lambda o: o["rep"])
    stats = {}
    for mode in spec.modes:
        macros = np.array([o["results"][mode][0] for o in outcomes])
        class_keys = sorted(outcomes[0]["results"][mode][1])
        per_class = {
            k: float(np.mean([o["results"][mode][1].get(k, 0.0) for o in outcomes]))
            for k in class_keys
        }
        stats[mode] = ModeStats(
            mode=mode,
            macro_mean=float(np.mean(macros)),
            macro_std=float(np.std(macros)),
            per_class_mean=per_class,
            macro_per_rep=tuple(float(x) for x in macros),
            runs=len(outcomes),
        )
    total = time.perf_counter() - t0
    return ExperimentReport(
        stats=stats,
        repetitions=spec.repetitions,
        master_seed=spec.master_seed,
        isolated_removed=tuple(o["isolated"] for o in outcomes),
        solver_iterations_mean=float(np.mean([o["iterations"] for o in outcomes])),
        solver_residual_max=float(np.max([o["residual"] for o in outcomes])),
        wall_clock_total_s=total,
        wall_clock_mean_s=float(np.mean([o["seconds"] for o in outcomes])),
        seed_rule_note=_seed_rule_note(spec.seed_rule),
    )


def _seed_rule_note(rule) -> str:
    if isinstance(rule, PerClassCounts):
        return f"per-class counts {rule.counts}"
    return (f"global fraction {rule.fraction} with >=1 seed per class guard "
            "(global sampling, not per class)")


# --- report serialization -------------------------------------------------

CSV_COLUMNS = ("point", "mode", "statistic", "value")


def report_rows(point: str, report: ExperimentReport):
    """Long-format rows (point, mode, statistic, value) for one report."""
    rows = []
    for mode, st in report.stats.items():
        rows.append((point, mode, "macro_f1_mean", st.macro_mean))
        rows.append((point, mode, "macro_f1_std", st.macro_std))
        for k, v in st.per_class_mean.items():
            rows.append((point, mode, f"f1_class_{k}_mean", v))
        rows.append((point, mode, "runs", st.runs))
        rows.append((point, mode, "wall_clock_total_s", report.wall_clock_total_s))
        rows.append((point, mode, "wall_clock_mean_s", report.wall_clock_mean_s))
    return rows


def atomic_write_text(path, text: str):
    """Write via a temp file and rename, so readers never see a torn file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_report_csv(path, points: list[tuple[str, ExperimentReport]]):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for point, report in points:
        writer.writerows(report_rows(point, report))
    atomic_write_text(path, buf.getvalue())


def report_to_dict(report: ExperimentReport) -> dict:
    return {
        "repetitions": report.repetitions,
        "master_seed": report.master_seed,
        "seed_rule": report.seed_rule_note,
        "isolated_removed": list(report.isolated_removed),
        "solver": {
            "iterations_mean": report.solver_iterations_mean,
            "residual_max": report.solver_residual_max,
        },
        "wall_clock": {
            "total_s": report.wall_clock_total_s,
            "mean_s": report.wall_clock_mean_s,
        },
        "modes": {
            mode: {
                "macro_f1_mean": st.macro_mean,
                "macro_f1_std": st.macro_std,
                "per_class_f1_mean": {str(k): v for k, v in st.per_class_mean.items()},
                "macro_f1_per_rep": list(st.macro_per_rep),
                "runs": st.runs,
            }
            for mode, st in report.stats.items()
        },
    }


def write_report_json(path, points: list[tuple[str, ExperimentReport]]):
    payload = {point: report_to_dict(report) for point, report in points}
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")
