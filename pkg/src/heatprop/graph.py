"""Immutable sparse undirected weighted graph plus edge-list/label file ingestion.

The graph stores the symmetric adjacency in CSR form together with the weighted
degree vector d = A @ 1. The Laplacian L = D - A and the random-walk transition
matrix P = D^{-1} A are derived on demand, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import ConstructionError, DataError


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph in canonical CSR form.

    Invariants (enforced by build_graph): symmetric adjacency, non-negative
    weights, strictly positive degrees, sorted column indices per row.
    Instances are immutable and safe to share across threads.
    """

    n: int
    adjacency: sp.csr_array = field(repr=False)
    degrees: np.ndarray = field(repr=False)

    def edge_list(self) -> list[tuple[int, int, float]]:
        """Dump edges as (i, j, w) with i <= j; self-loops appear once."""
        coo = sp.triu(self.adjacency).tocoo()
        return [(int(i), int(j), float(w)) for i, j, w in zip(coo.row, coo.col, coo.data)]

    def neighbors(self, i: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]]

    def transition_matvec(self, t: np.ndarray) -> np.ndarray:
        """P @ t with P = D^{-1} A."""
        return (self.adjacency @ t) / self.degrees


@dataclass(frozen=True)
class LabeledNodes:
    """Partial labeling: node id -> label in {1..K}."""

    labels: dict[int, int]
    num_classes: int

    def __post_init__(self):
        for node, lab in self.labels.items():
            if not 1 <= lab <= self.num_classes:
                raise DataError(f"label {lab} of node {node} outside [1, {self.num_classes}]")

    @property
    def nodes(self) -> list[int]:
        return sorted(self.labels)

    def of_class(self, k: int) -> list[int]:
        return sorted(i for i, lab in self.labels.items() if lab == k)


def build_graph(edges, n: int | None = None) -> Graph:
    """Build a Graph from (src, dst[, weight]) triples; weight defaults to 1.

    Duplicate pairs have their weights summed. Each undirected edge is stored
    in both directions; a self-loop (i, i, w) contributes w to A_ii and w to
    the degree of i exactly once. Zero-degree nodes and negative weights are
    construction errors.
    """
    edges = list(edges)
    if not edges and n is None:
        raise ConstructionError("empty edge list")
    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    wgt = np.array([e[2] if len(e) > 2 else 1.0 for e in edges], dtype=np.float64)
    if src.size and (src.min() < 0 or dst.min() < 0):
        raise ConstructionError("negative node id")
    if np.any(wgt < 0):
        bad = int(np.argmax(wgt < 0))
        raise ConstructionError(f"negative weight {wgt[bad]} on edge ({src[bad]}, {dst[bad]})")
    if n is None:
        n = int(max(src.max(), dst.max())) + 1
    off = src != dst  # mirror off-diagonal entries only
    rows = np.concatenate([src, dst[off]])
    cols = np.concatenate([dst, src[off]])
    vals = np.concatenate([wgt, wgt[off]])
    adj = sp.coo_array((vals, (rows, cols)), shape=(n, n)).tocsr()
    adj.sum_duplicates()
    adj.eliminate_zeros()
    adj.sort_indices()
    degrees = np.asarray(adj.sum(axis=1)).ravel()
    if np.any(degrees <= 0):
        node = int(np.argmax(degrees <= 0))
        raise ConstructionError(f"node {node} has zero degree")
    return Graph(n=n, adjacency=adj, degrees=degrees)


def connected_components_with_seeds(g: Graph, seeds) -> tuple[np.ndarray, list[int]]:
    """Component labels per node and the seed count of each component."""
    n_comp, comp = connected_components(g.adjacency, directed=False)
    counts = [0] * n_comp
    for s in seeds:
        counts[comp[s]] += 1
    return comp, counts


def read_edge_list(path) -> tuple[list[tuple[int, int, float]], dict[int, int]]:
    """Parse an edge-list text file.

    Format: one `src dst [weight]` per line, whitespace-separated, 0-based ids,
    `#` comments ignored. Ids need not be contiguous: they are compacted and
    the original->compact map is returned alongside the edges.
    """
    raw = []
    ids = set()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise DataError(f"{path}:{lineno}: expected `src dst [weight]`, got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            raw.append((u, v, w))
            ids.add(u)
            ids.add(v)
    if not raw:
        raise DataError(f"{path}: no edges")
    id_map = {orig: i for i, orig in enumerate(sorted(ids))}
    edges = [(id_map[u], id_map[v], w) for u, v, w in raw]
    return edges, id_map


def read_labels(path, id_map: dict[int, int] | None = None) -> dict[int, int]:
    """Parse a label file: lines `node label`, labels 1-based integers."""
    labels = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected `node label`, got {line!r}")
            try:
                node, lab = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            if lab < 1:
                raise DataError(f"{path}:{lineno}: labels are 1-based, got {lab}")
            if id_map is not None:
                if node not in id_map:
                    continue  # labeled node absent from the graph
                node = id_map[node]
            labels[node] = lab
    if not labels:
        raise DataError(f"{path}: no labels")
    return labels
