"""Deterministic block model: complete weighted graph with intra-block weight p
(including a self-loop of weight p on every node) and inter-block weight q.

The self-loops make the degree of a block-k node exactly n_k (p - q) + n q,
which is what the closed-form equilibrium temperatures assume; this model is
NOT the stochastic generator (see bench.generate_sbm, which draws simple
graphs without self-loops).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DegenerateParamsError, ParamError
from .graph import Graph, LabeledNodes


@dataclass(frozen=True)
class BlockModelParams:
    sizes: tuple[int, ...]
    seed_counts: tuple[int, ...]
    p: float
    q: float

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(x) for x in self.sizes))
        object.__setattr__(self, "seed_counts", tuple(int(x) for x in self.seed_counts))
        if len(self.sizes) != len(self.seed_counts):
            raise ParamError("sizes and seed_counts length mismatch")
        if len(self.sizes) < 1:
            raise ParamError("need at least one block")
        if any(nk < 1 for nk in self.sizes):
            raise ParamError("block sizes must be positive")
        if any(not 1 <= sk <= nk for sk, nk in zip(self.seed_counts, self.sizes)):
            raise ParamError("seed counts must satisfy 1 <= s_k <= n_k")
        if sum(self.seed_counts) >= sum(self.sizes):
            raise ParamError("at least one free node is required")
        if not (self.p > 0 and self.q > 0):
            raise ParamError("p and q must be positive")

    @property
    def num_blocks(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def block_of(self) -> np.ndarray:
        """0-based block index per node (blocks occupy contiguous id ranges)."""
        return np.repeat(np.arange(self.num_blocks), self.sizes)

    def seed_nodes(self) -> LabeledNodes:
        """The first s_k ids of block k, labeled k (1-based)."""
        labels = {}
        start = 0
        for k, (nk, sk) in enumerate(zip(self.sizes, self.seed_counts), start=1):
            for i in range(start, start + sk):
                labels[i] = k
            start += nk
        return LabeledNodes(labels=labels, num_classes=self.num_blocks)

    def free_nodes_of_block(self, k: int) -> list[int]:
        """Free (non-seed) node ids of block k (1-based)."""
        start = sum(self.sizes[: k - 1])
        return list(range(start + self.seed_counts[k - 1], start + self.sizes[k - 1]))


@dataclass(frozen=True)
class ClosedFormSolution:
    """Equilibrium of the one-vs-all problem with hot block l (1-based)."""

    hot_block: int
    block_temperatures: tuple[float, ...]  # free-node temperature per block
    mean_temperature: float
    free_weighted_sum: float  # U = sum_j (n_j - s_j) T_j


def build_block_graph(params: BlockModelParams) -> Graph:
    block = params.block_of()
    w = np.where(block[:, None] == block[None, :], params.p, params.q)
    adj = sp.csr_array(w)
    degrees = np.asarray(adj.sum(axis=1)).ravel()
    return Graph(n=params.n, adjacency=adj, degrees=degrees)


def closed_form(params: BlockModelParams, hot_block: int) -> ClosedFormSolution:
    """Closed-form free-node temperatures for the problem heating block l.

    With c_k = s_k (p - q) + n q:
        mean = (s_l / n) * (n_l (p - q) + n q) / c_l
               / (1 - sum_k (n_k - s_k) q / c_k)
        T_l = (s_l (p - q) + n mean q) / c_l
        T_k = n mean q / c_k           for k != l
    """
    if not 1 <= hot_block <= params.num_blocks:
        raise ParamError(f"hot_block {hot_block} outside [1, {params.num_blocks}]")
    p, q, n = params.p, params.q, params.n
    sizes = np.array(params.sizes, dtype=np.float64)
    seeds = np.array(params.seed_counts, dtype=np.float64)
    c = seeds * (p - q) + n * q
    if np.any(c == 0):
        raise DegenerateParamsError("s_k (p - q) + n q vanished")
    l = hot_block - 1
    denom = 1.0 - float(np.sum((sizes - seeds) * q / c))
    if denom == 0:
        raise DegenerateParamsError("mean-temperature denominator vanished")
    mean = (seeds[l] / n) * (sizes[l] * (p - q) + n * q) / c[l] / denom
    temps = n * mean * q / c
    temps[l] = (seeds[l] * (p - q) + n * mean * q) / c[l]
    u = float(np.sum((sizes - seeds) * temps))
    return ClosedFormSolution(
        hot_block=hot_block,
        block_temperatures=tuple(float(t) for t in temps),
        mean_temperature=float(mean),
        free_weighted_sum=u,
    )


@dataclass(frozen=True)
class ConsistencyResult:
    consistent: bool
    witness: tuple[int, int] | None  # (block, wrongly winning label)
    ties: tuple[tuple[int, int], ...] = ()  # (block, tied label) pairs


def consistency_check(params: BlockModelParams) -> ConsistencyResult:
    """Does centered argmax recover every block label?

    Evaluates the centered score of block k under every hot label l from the
    closed form and checks argmax_l = k for all k. Ties resolve to the
    smallest label and are reported.
    """
    k_count = params.num_blocks
    # delta[l - 1][k - 1] = centered score of block-k free nodes, hot block l
    delta = np.empty((k_count, k_count))
    for l in range(1, k_count + 1):
        sol = closed_form(params, l)
        delta[l - 1] = np.array(sol.block_temperatures) - sol.mean_temperature
    ties = []
    for k in range(k_count):
        col = delta[:, k]
        best = int(np.argmax(col))
        tied = np.flatnonzero(col == col[best])
        for t in tied:
            if t != best:
                ties.append((k + 1, int(t) + 1))
        if best != k:
            return ConsistencyResult(consistent=False, witness=(k + 1, best + 1),
                                     ties=tuple(ties))
    return ConsistencyResult(consistent=not ties,
                             witness=ties[0] if ties else None,
                             ties=tuple(ties))


@dataclass(frozen=True)
class UncenteredCheckResult:
    correct: bool
    hot_block: int | None = None  # label whose problem overheats another block
    confused_block: int | None = None  # block misclassified as hot_block


def uncentered_failure_check(params: BlockModelParams) -> UncenteredCheckResult:
    """Does UNcentered argmax fail despite p > q?

    Block k is classified correctly without centering iff its raw temperature
    in its own problem strictly exceeds its temperature in every other
    label's problem. Returns the first violated (hot label, confused block).
    """
    k_count = params.num_blocks
    temp = np.empty((k_count, k_count))  # temp[l - 1][k - 1]
    for l in range(1, k_count + 1):
        temp[l - 1] = closed_form(params, l).block_temperatures
    for k in range(k_count):
        for l in range(k_count):
            if l != k and temp[l, k] >= temp[k, k]:
                return UncenteredCheckResult(correct=False, hot_block=l + 1,
                                             confused_block=k + 1)
    return UncenteredCheckResult(correct=True)
