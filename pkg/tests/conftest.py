import numpy as np
import pytest

import heatprop as hp


def random_connected_graph(rng: np.random.Generator, n: int, extra_edges: int = 0,
                           weighted: bool = True) -> hp.Graph:
    """Random spanning tree plus optional extra edges; always connected."""
    edges = []
    for v in range(1, n):
        u = int(rng.integers(0, v))
        w = float(rng.uniform(0.1, 5.0)) if weighted else 1.0
        edges.append((u, v, w))
    for _ in range(extra_edges):
        u, v = rng.integers(0, n, size=2)
        if u == v:
            continue
        w = float(rng.uniform(0.1, 5.0)) if weighted else 1.0
        edges.append((int(u), int(v), w))
    return hp.build_graph(edges, n=n)


def random_boundary(rng: np.random.Generator, n: int, n_seeds: int,
                    lo: float = -2.0, hi: float = 3.0) -> hp.BoundaryCondition:
    seeds = rng.choice(n, size=n_seeds, replace=False)
    values = rng.uniform(lo, hi, size=n_seeds)
    return hp.BoundaryCondition(np.sort(seeds), values)


@pytest.fixture(scope="session")
def karate_files(tmp_path_factory):
    """Karate Club edge list and faction labels written as text files."""
    networkx = pytest.importorskip("networkx")
    g = networkx.karate_club_graph()
    d = tmp_path_factory.mktemp("karate")
    edge_path = d / "karate_edges.txt"
    label_path = d / "karate_labels.txt"
    with open(edge_path, "w") as fh:
        fh.write("# Zachary's karate club\n")
        for u, v in sorted(g.edges()):
            fh.write(f"{u} {v}\n")
    with open(label_path, "w") as fh:
        for node in sorted(g.nodes()):
            lab = 1 if g.nodes[node]["club"] == "Mr. Hi" else 2
            fh.write(f"{node} {lab}\n")
    return edge_path, label_path
