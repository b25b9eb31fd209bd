"""Dirichlet problem on graphs: fix temperatures on a seed set, solve Laplace's
equation on the free nodes.

Two backends share one residual contract (max over free i of |T_i - (PT)_i|
below tolerance): a fixed-point iteration of T <- PT on free entries, and a
conjugate-gradient solve of the grounded SPD system
(D_ff - A_ff) X = A_fs Y.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DataError, EmptySetError, SingularSystemError
from .graph import Graph, connected_components_with_seeds

FIXED_POINT = "fixed-point"
GROUNDED = "grounded-solve"


@dataclass(frozen=True)
class BoundaryCondition:
    """Seed node ids with their fixed temperatures."""

    seeds: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        seeds = np.asarray(self.seeds, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        if seeds.size == 0:
            raise DataError("empty seed set")
        if seeds.size != values.size:
            raise DataError("seeds and values length mismatch")
        if np.unique(seeds).size != seeds.size:
            raise DataError("duplicate seed ids")
        object.__setattr__(self, "seeds", seeds)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class SolverConfig:
    method: str = GROUNDED
    tolerance: float = 1e-9
    max_iterations: int = 100_000

    def __post_init__(self):
        if self.method not in (FIXED_POINT, GROUNDED):
            raise DataError(f"unknown method {self.method!r}")
        if not self.tolerance > 0:
            raise DataError("tolerance must be positive")
        if self.max_iterations < 1:
            raise DataError("max_iterations must be >= 1")


@dataclass(frozen=True)
class TemperatureField:
    """Equilibrium temperatures with solver diagnostics."""

    values: np.ndarray
    residual: float
    iterations: int
    seeds: np.ndarray = field(repr=False)

    def free_mask(self, n: int) -> np.ndarray:
        mask = np.ones(n, dtype=bool)
        mask[self.seeds] = False
        return mask


def _laplace_residual(g: Graph, t: np.ndarray, free: np.ndarray) -> float:
    pt = (g.adjacency @ t) / g.degrees
    return float(np.max(np.abs(t[free] - pt[free]))) if free.size else 0.0


def _check_seeded_components(g: Graph, seeds: np.ndarray):
    comp, counts = connected_components_with_seeds(g, seeds)
    for c, cnt in enumerate(counts):
        if cnt == 0:
            node = int(np.argmax(comp == c))
            raise SingularSystemError(
                f"component containing node {node} has no seed", node=node
            )


def solve_dirichlet(
    g: Graph,
    bc: BoundaryCondition,
    cfg: SolverConfig = SolverConfig(),
    initial: np.ndarray | None = None,
) -> TemperatureField:
    """Solve Laplace's equation on free nodes under the boundary condition.

    `initial` optionally warm-starts the free temperatures (default 0).
    """
    seeds = bc.seeds
    if seeds.max() >= g.n or seeds.min() < 0:
        raise DataError("seed id out of range")
    if seeds.size >= g.n:
        raise DataError("seed set must be a strict subset of nodes")
    _check_seeded_components(g, seeds)

    free = np.ones(g.n, dtype=bool)
    free[seeds] = False
    free_idx = np.flatnonzero(free)

    t = np.zeros(g.n)
    t[seeds] = bc.values
    if initial is not None:
        t[free_idx] = np.asarray(initial, dtype=np.float64)[free_idx]

    if cfg.method == FIXED_POINT:
        t, res, iters = _fixed_point(g, t, free_idx, cfg)
    else:
        t, res, iters = _grounded(g, t, seeds, free_idx, cfg)
    return TemperatureField(values=t, residual=res, iterations=iters, seeds=seeds)


def _fixed_point(g, t, free_idx, cfg):
    a, d = g.adjacency, g.degrees
    t = t.copy()
    pt = (a @ t) / d
    res = float(np.max(np.abs(t[free_idx] - pt[free_idx])))
    if res <= cfg.tolerance:
        return t, res, 0
    prev_change = None
    for it in range(1, cfg.max_iterations + 1):
        new_free = pt[free_idx]
        change = float(np.max(np.abs(new_free - t[free_idx])))
        t[free_idx] = new_free
        pt = (a @ t) / d
        res = float(np.max(np.abs(t[free_idx] - pt[free_idx])))
        if change <= cfg.tolerance and res <= cfg.tolerance:
            # iterate change alone understates the true error by the
            # contraction factor; bound it geometrically before stopping
            if change == 0.0:
                return t, res, it
            if prev_change is not None and change < prev_change:
                rho = change / prev_change
                if change * rho / (1.0 - rho) <= 0.5 * cfg.tolerance:
                    return t, res, it
        prev_change = change
    raise ConvergenceError(
        f"fixed-point did not reach {cfg.tolerance} in {cfg.max_iterations} iterations"
        f" (residual {res:.3e})",
        best=t,
        residual=res,
        iterations=cfg.max_iterations,
    )


def _grounded(g, t, seeds, free_idx, cfg):
    a = g.adjacency.tocsr()
    aff = a[free_idx][:, free_idx]
    afs = a[free_idx][:, seeds]
    d_free = g.degrees[free_idx]
    m = sp.diags_array(d_free) - aff
    b = afs @ t[seeds]
    # max-norm Laplace residual <= tol is implied by ||r||_2 <= tol * min(d_f)
    atol = cfg.tolerance * float(d_free.min()) * 0.5
    count = {"it": 0}

    def cb(_xk):
        count["it"] += 1

    x0 = t[free_idx]
    inv_d = 1.0 / d_free
    precond = spla.LinearOperator(m.shape, matvec=lambda v: inv_d * v)
    x, info = spla.cg(m, b, x0=x0, rtol=0.0, atol=atol,
                      maxiter=cfg.max_iterations, M=precond, callback=cb)
    t = t.copy()
    t[free_idx] = x
    res = _laplace_residual(g, t, free_idx)
    if res > cfg.tolerance:
        raise ConvergenceError(
            f"grounded solve stopped at residual {res:.3e} > {cfg.tolerance}"
            f" after {count['it']} iterations (info={info})",
            best=t,
            residual=res,
            iterations=count["it"],
        )
    return t, res, count["it"]


ALL_NODES = "all-nodes"
FREE_NODES = "free-nodes"


def mean_temperature(t: TemperatureField, over: str = ALL_NODES) -> float:
    """Arithmetic mean of the field over all nodes or over free nodes only."""
    if over == ALL_NODES:
        return float(np.mean(t.values))
    if over == FREE_NODES:
        mask = t.free_mask(t.values.size)
        if not mask.any():
            raise EmptySetError("no free nodes to average over")
        return float(np.mean(t.values[mask]))
    raise DataError(f"unknown node set {over!r}")
