"""Threshold graphs over journal correlations and their bi-connected components.

A bi-connected component is a maximal induced subgraph that stays connected
after removal of any single vertex — the robust-cluster notion used for the
stepwise correlation-threshold analysis. Decomposition uses the depth-first
lowpoint algorithm with an explicit stack, so journal counts in the
thousands are fine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlate import CorrelationMatrix

SWEEP_START = 0.2
SWEEP_STEP = 0.1
SWEEP_STOP = 0.9
MIN_COMPONENT_SIZE = 3


@dataclass(frozen=True)
class ThresholdGraph:
    """Undirected graph linking journals whose correlation reaches the threshold."""

    journal_ids: tuple[str, ...]
    threshold: float
    edges: tuple[tuple[str, str], ...]  # id pairs in matrix order, each once

    @property
    def n(self) -> int:
        return len(self.journal_ids)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {jid: [] for jid in self.journal_ids}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass(frozen=True)
class ComponentSet:
    """Bi-connected components of one threshold graph, largest first.

    ``articulation_points`` lists every cut vertex of the graph, including
    those only adjacent to components below the size filter. ``coverage``
    counts journals appearing in at least one reported component.
    """

    threshold: float
    min_size: int
    components: tuple[tuple[str, ...], ...]  # each sorted by id
    articulation_points: tuple[str, ...]
    coverage: int


@dataclass(frozen=True)
class SweepReport:
    """Per-threshold component sets for a stepwise sweep."""

    component_sets: tuple[ComponentSet, ...]

    def summary_rows(self) -> list[tuple[float, int, int]]:
        """(threshold, component count, journals covered) per step."""
        return [(cs.threshold, len(cs.components), cs.coverage) for cs in self.component_sets]


def threshold_graph(corr: CorrelationMatrix, r_min: float) -> ThresholdGraph:
    """Link every valid journal pair with r(i,j) ≥ r_min."""
    if not -1.0 <= r_min <= 1.0:
        raise ValueError(f"threshold must lie in [-1, 1], got {r_min}")
    valid = np.asarray(corr.valid, dtype=bool)
    mask = corr.r >= r_min
    mask &= valid[:, None] & valid[None, :]
    ids = corr.journal_ids
    edges = tuple(
        (ids[i], ids[j]) for i, j in np.argwhere(np.triu(mask, k=1))
    )
    return ThresholdGraph(journal_ids=ids, threshold=r_min, edges=edges)


def biconnected_components(g: ThresholdGraph, min_size: int = MIN_COMPONENT_SIZE) -> ComponentSet:
    """Decompose a threshold graph into bi-connected components.

    Components smaller than ``min_size`` vertices are discarded (a lone
    edge is vacuously bi-connected and reads as noise here). Output order
    is descending size, ties broken by the sorted member-id tuple.
    """
    if min_size < 1:
        raise ValueError(f"min_size must be positive, got {min_size}")
    ids = g.journal_ids
    index = {jid: i for i, jid in enumerate(ids)}
    n = len(ids)
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in g.edges:
        ia, ib = index[a], index[b]
        adj[ia].append(ib)
        adj[ib].append(ia)

    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    articulation: set[int] = set()
    raw_components: list[set[int]] = []
    timer = 0

    for start in range(n):
        if disc[start] != -1 or not adj[start]:
            continue
        disc[start] = low[start] = timer
        timer += 1
        stack: list[tuple[int, int]] = [(start, 0)]  # (vertex, next neighbor slot)
        edge_stack: list[tuple[int, int]] = []
        root_children = 0
        while stack:
            u, slot = stack[-1]
            if slot < len(adj[u]):
                stack[-1] = (u, slot + 1)
                v = adj[u][slot]
                if disc[v] == -1:
                    parent[v] = u
                    edge_stack.append((u, v))
                    disc[v] = low[v] = timer
                    timer += 1
                    stack.append((v, 0))
                elif v != parent[u] and disc[v] < disc[u]:
                    edge_stack.append((u, v))
                    if disc[v] < low[u]:
                        low[u] = disc[v]
            else:
                stack.pop()
                if not stack:
                    continue
                p = stack[-1][0]
                if low[u] < low[p]:
                    low[p] = low[u]
                if low[u] >= disc[p]:
                    # p separates the just-finished subtree: everything on the
                    # edge stack above (p, u) is one bi-connected component.
                    members: set[int] = set()
                    while True:
                        e = edge_stack.pop()
                        members.update(e)
                        if e == (p, u):
                            break
                    raw_components.append(members)
                    if p == start:
                        root_children += 1
                    else:
                        articulation.add(p)
        if root_children >= 2:
            articulation.add(start)

    kept = [comp for comp in raw_components if len(comp) >= min_size]
    components = tuple(
        sorted(
            (tuple(sorted(ids[i] for i in comp)) for comp in kept),
            key=lambda members: (-len(members), members),
        )
    )
    covered: set[str] = set()
    for comp in components:
        covered.update(comp)
    return ComponentSet(
        threshold=g.threshold,
        min_size=min_size,
        components=components,
        articulation_points=tuple(sorted(ids[i] for i in articulation)),
        coverage=len(covered),
    )


def sweep_thresholds(start: float, step: float, stop: float) -> tuple[float, ...]:
    """The grid {start, start+step, …} up to and including stop.

    Values are rounded to 12 decimals so a nominal 0.4 never drifts to
    0.4000000000000001 and silently excludes journals correlated at
    exactly the advertised level.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if start > stop:
        raise ValueError(f"start {start} exceeds stop {stop}")
    values = []
    i = 0
    while True:
        t = round(start + i * step, 12)
        if t > stop + 1e-12:
            break
        values.append(t)
        i += 1
    return tuple(values)


def threshold_sweep(
    corr: CorrelationMatrix,
    start: float = SWEEP_START,
    step: float = SWEEP_STEP,
    stop: float = SWEEP_STOP,
    min_size: int = MIN_COMPONENT_SIZE,
) -> SweepReport:
    """Decompose the correlation graph at each threshold of a stepwise grid."""
    sets = []
    for t in sweep_thresholds(start, step, stop):
        sets.append(biconnected_components(threshold_graph(corr, t), min_size=min_size))
    return SweepReport(component_sets=tuple(sets))
