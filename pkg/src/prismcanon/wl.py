"""Weisfeiler-Leman color refinement on weighted graphs.

Colors are dense integers assigned by sorting signatures, never by hashing,
so equal colors mean equal signatures. Comparisons run both graphs through
one shared re-indexing so their colors can be compared directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, ResourceLimit
from .graph import WeightedGraph
from .prism import DEFAULT_PRECISION, quantize

TUPLE_BUDGET = 1 << 26


@dataclass(frozen=True)
class Coloring:
    """Stable coloring of ``k``-tuples; ``colors`` has shape ``(n,) * k``."""

    k: int
    colors: np.ndarray
    rounds: int
    stable: bool = True

    @property
    def num_colors(self) -> int:
        return len(np.unique(self.colors))

    def node_partition(self) -> list[list[int]]:
        """Vertex classes (``k = 1``) or classes of diagonal tuples ``(v, ..., v)``."""
        n = self.colors.shape[0]
        diag = self.colors[(np.arange(n),) * self.k]
        groups: dict[int, list[int]] = {}
        for v, c in enumerate(diag):
            groups.setdefault(int(c), []).append(v)
        return sorted(groups.values())

    def histogram(self) -> tuple[tuple[int, int], ...]:
        vals, counts = np.unique(self.colors, return_counts=True)
        return tuple(zip(vals.tolist(), counts.tolist()))


@dataclass(frozen=True)
class WlVerdict:
    k: int
    distinguishable: bool
    rounds: tuple[int, int]
    labels: tuple[tuple, tuple]

    def to_dict(self) -> dict:
        return {"k": self.k, "distinguishable": self.distinguishable, "rounds": list(self.rounds)}


def _weight_codes(graphs: list[WeightedGraph], precision: int) -> np.ndarray:
    """Dense ranks of edge weights, shared across ``graphs``; shape ``(G, n, n)``."""
    W = np.stack([g.weights for g in graphs])
    if all(g.is_integral() for g in graphs):
        flat = [int(x) for x in W.ravel()]
        rank = {v: i for i, v in enumerate(sorted(set(flat)))}
        return np.array([rank[v] for v in flat], dtype=np.int64).reshape(W.shape)
    vals = quantize(W.astype(float), precision)
    _, inv = np.unique(vals.ravel(), return_inverse=True)
    return inv.reshape(W.shape).astype(np.int64)


def _reindex(sig: np.ndarray) -> np.ndarray:
    _, inv = np.unique(sig, axis=0, return_inverse=True)
    return inv.ravel().astype(np.int64)


def _distinct_per_graph(colors: np.ndarray) -> list[int]:
    return [len(np.unique(c)) for c in colors]


def _track(counts_prev, counts, rounds, done, t):
    for i, (a, b) in enumerate(zip(counts_prev, counts)):
        if not done[i] and a == b:
            done[i] = True
            rounds[i] = t


def _joint_wl1(codes: np.ndarray) -> tuple[np.ndarray, list[int]]:
    G, n, _ = codes.shape
    R = int(codes.max()) + 1
    colors = _reindex(codes[:, np.arange(n), np.arange(n)].reshape(-1, 1)).reshape(G, n)
    counts = _distinct_per_graph(colors)
    rounds = [0] * G
    done = [False] * G
    t = 0
    while not all(done):
        t += 1
        pairs = colors[:, None, :] * R + codes  # (G, v, w)
        pairs = np.sort(pairs, axis=2)
        sig = np.concatenate([colors[..., None], pairs], axis=2).reshape(G * n, n + 1)
        new = _reindex(sig).reshape(G, n)
        new_counts = _distinct_per_graph(new)
        _track(counts, new_counts, rounds, done, t)
        colors, counts = new, new_counts
    return colors, rounds


def _initial_tuples(codes: np.ndarray, k: int) -> np.ndarray:
    G, n, _ = codes.shape
    shape = (G,) + (n,) * k
    parts = []
    for i in range(k):
        for j in range(k):
            idx = [np.arange(G).reshape((G,) + (1,) * k)]
            ai = np.arange(n).reshape((1,) + tuple(n if a == i else 1 for a in range(k)))
            aj = np.arange(n).reshape((1,) + tuple(n if a == j else 1 for a in range(k)))
            parts.append(np.broadcast_to(codes[idx[0], ai, aj], shape))
    sig = np.stack(parts, axis=-1).reshape(-1, k * k)
    return _reindex(sig).reshape(shape)


def _joint_wlk(codes: np.ndarray, k: int) -> tuple[np.ndarray, list[int]]:
    G, n, _ = codes.shape
    colors = _initial_tuples(codes, k)
    shape = colors.shape
    counts = _distinct_per_graph(colors)
    rounds = [0] * G
    done = [False] * G
    t = 0
    while not all(done):
        t += 1
        cols = [colors.reshape(-1)]
        for j in range(k):
            ax = 1 + j
            moved = np.sort(np.moveaxis(colors, ax, -1), axis=-1)
            ids = _reindex(moved.reshape(-1, n)).reshape(moved.shape[:-1])
            cols.append(np.broadcast_to(np.expand_dims(ids, ax), shape).reshape(-1))
        new = _reindex(np.stack(cols, axis=1)).reshape(shape)
        new_counts = _distinct_per_graph(new)
        _track(counts, new_counts, rounds, done, t)
        colors, counts = new, new_counts
    return colors, rounds


def _run(graphs: list[WeightedGraph], k: int, precision: int, budget: int):
    if k < 1:
        raise InvalidArgument("k must be at least 1")
    n = graphs[0].n
    if any(g.n != n for g in graphs):
        raise InvalidArgument("joint runs need graphs of equal size")
    if len(graphs) * n**k > budget:
        raise ResourceLimit(f"{len(graphs)} x {n}^{k} tuples exceeds the budget of {budget}")
    codes = _weight_codes(graphs, precision)
    if k == 1:
        return _joint_wl1(codes)
    return _joint_wlk(codes, k)


def wl1(g: WeightedGraph, precision: int = DEFAULT_PRECISION) -> Coloring:
    colors, rounds = _run([g], 1, precision, TUPLE_BUDGET)
    return Coloring(1, colors[0], rounds[0])


def wlk(
    g: WeightedGraph,
    k: int,
    precision: int = DEFAULT_PRECISION,
    budget: int = TUPLE_BUDGET,
) -> Coloring:
    """k-WL coloring; ``k = 1`` is the feature-aware vertex refinement of ``wl1``."""
    colors, rounds = _run([g], k, precision, budget)
    return Coloring(k, colors[0], rounds[0])


def compare(
    g1: WeightedGraph,
    g2: WeightedGraph,
    k: int,
    precision: int = DEFAULT_PRECISION,
    budget: int = TUPLE_BUDGET,
) -> WlVerdict:
    if g1.n != g2.n:
        return WlVerdict(k, True, (0, 0), ((), ()))
    colors, rounds = _run([g1, g2], k, precision, budget)
    labels = tuple(Coloring(k, c, r).histogram() for c, r in zip(colors, rounds))
    return WlVerdict(k, labels[0] != labels[1], tuple(rounds), labels)
