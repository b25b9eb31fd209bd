"""One-vs-all diffusion classifier with temperature centering.

For each label k, the seeds of label k are held at temperature 1 and all other
seeds at 0; the equilibrium field is centered (by the mean over all nodes, over
free nodes, or not at all) and every free node takes the argmax label, ties
broken to the smallest label index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dirichlet import (
    ALL_NODES,
    FREE_NODES,
    BoundaryCondition,
    SolverConfig,
    solve_dirichlet,
)
from .errors import DataError, InvalidSeedsError
from .graph import Graph, LabeledNodes

NO_CENTERING = "none"
CENTERING_MODES = (NO_CENTERING, ALL_NODES, FREE_NODES)


@dataclass(frozen=True)
class ScoreMatrix:
    """Per-node, per-label centered temperatures plus solver diagnostics."""

    scores: np.ndarray  # shape (n, K)
    residuals: np.ndarray  # per-label achieved residual
    iterations: np.ndarray  # per-label iteration count


@dataclass(frozen=True)
class Prediction:
    labels: dict[int, int]  # free node -> label in {1..K}
    scores: ScoreMatrix = field(repr=False)


def _validate_seeds(seeds: LabeledNodes):
    if seeds.num_classes < 2:
        raise InvalidSeedsError("need at least 2 classes")
    for k in range(1, seeds.num_classes + 1):
        if not seeds.of_class(k):
            raise InvalidSeedsError(f"class {k} has no seeds")


def solve_label_fields(g: Graph, seeds: LabeledNodes, cfg: SolverConfig = SolverConfig()):
    """Solve the K one-vs-all Dirichlet problems; returns (raw n x K fields,
    residuals, iterations, seed id array).

    Shared by classify and the experiment harness, which reuses one set of
    solves across several centering modes.
    """
    _validate_seeds(seeds)
    seed_ids = np.array(seeds.nodes, dtype=np.int64)
    seed_labels = np.array([seeds.labels[i] for i in seed_ids])
    k_count = seeds.num_classes
    fields = np.empty((g.n, k_count))
    residuals = np.empty(k_count)
    iterations = np.empty(k_count, dtype=np.int64)
    for k in range(1, k_count + 1):
        bc = BoundaryCondition(seed_ids, (seed_labels == k).astype(np.float64))
        t = solve_dirichlet(g, bc, cfg)
        fields[:, k - 1] = t.values
        residuals[k - 1] = t.residual
        iterations[k - 1] = t.iterations
    return fields, residuals, iterations, seed_ids


def center_fields(fields: np.ndarray, seed_ids: np.ndarray, mode: str) -> np.ndarray:
    """Apply a centering mode to raw temperature fields (columns = labels)."""
    if mode == NO_CENTERING:
        return fields.copy()
    if mode == ALL_NODES:
        return fields - fields.mean(axis=0)
    if mode == FREE_NODES:
        free = np.ones(fields.shape[0], dtype=bool)
        free[seed_ids] = False
        return fields - fields[free].mean(axis=0)
    raise DataError(f"unknown centering mode {mode!r}")


def _argmax_labels(scores: np.ndarray, seed_ids: np.ndarray) -> dict[int, int]:
    free = np.ones(scores.shape[0], dtype=bool)
    free[seed_ids] = False
    # np.argmax returns the first maximum, which is the smallest label index
    best = np.argmax(scores, axis=1) + 1
    return {int(i): int(best[i]) for i in np.flatnonzero(free)}


def classify(
    g: Graph,
    seeds: LabeledNodes,
    mode: str = ALL_NODES,
    cfg: SolverConfig = SolverConfig(),
) -> Prediction:
    """Label every free node by one-vs-all diffusion with the given centering."""
    fields, residuals, iterations, seed_ids = solve_label_fields(g, seeds, cfg)
    scores = center_fields(fields, seed_ids, mode)
    sm = ScoreMatrix(scores=scores, residuals=residuals, iterations=iterations)
    return Prediction(labels=_argmax_labels(scores, seed_ids), scores=sm)


def classify_binary(
    g: Graph,
    seeds: LabeledNodes,
    mode: str = ALL_NODES,
    cfg: SolverConfig = SolverConfig(),
) -> Prediction:
    """Two-class special case solved with a single Dirichlet problem.

    Label-2 seeds are hot (1), label-1 seeds cold (0). The threshold is 1/2
    without centering, otherwise the mean temperature over the chosen node
    set; a free node gets label 2 iff its temperature strictly exceeds it.
    """
    if seeds.num_classes != 2:
        raise InvalidSeedsError("classify_binary needs exactly two classes")
    _validate_seeds(seeds)
    seed_ids = np.array(seeds.nodes, dtype=np.int64)
    seed_labels = np.array([seeds.labels[i] for i in seed_ids])
    bc = BoundaryCondition(seed_ids, (seed_labels == 2).astype(np.float64))
    t = solve_dirichlet(g, bc, cfg)
    if mode == NO_CENTERING:
        theta = 0.5
    elif mode == ALL_NODES:
        theta = float(np.mean(t.values))
    elif mode == FREE_NODES:
        free = np.ones(g.n, dtype=bool)
        free[seed_ids] = False
        theta = float(np.mean(t.values[free]))
    else:
        raise DataError(f"unknown centering mode {mode!r}")
    free = np.ones(g.n, dtype=bool)
    free[seed_ids] = False
    labels = {int(i): 2 if t.values[i] > theta else 1 for i in np.flatnonzero(free)}
    scores = np.column_stack([theta - t.values, t.values - theta])
    sm = ScoreMatrix(
        scores=scores,
        residuals=np.array([t.residual, t.residual]),
        iterations=np.array([t.iterations, t.iterations]),
    )
    return Prediction(labels=labels, scores=sm)
