"""Weighted graphs, multigraphs, base graphs and deterministic generators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal

import numpy as np

from .errors import DegenerateInput, InvalidArgument

MatrixKind = Literal["adjacency", "laplacian", "normalized_laplacian"]

_VIEW_ALIASES = {
    "adj": "adjacency",
    "adjacency": "adjacency",
    "lap": "laplacian",
    "laplacian": "laplacian",
    "nlap": "normalized_laplacian",
    "normalized_laplacian": "normalized_laplacian",
}


class WeightedGraph:
    """Symmetric weight matrix; diagonal entries are node features.

    Weights are copied and frozen on construction.
    """

    def __init__(self, weights):
        a = np.array(weights)
        if a.dtype.kind not in "iufO":
            a = a.astype(float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidArgument(f"weights must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise InvalidArgument("graph needs at least one vertex")
        if not np.array_equal(a, a.T):
            raise InvalidArgument("weights must be exactly symmetric")
        a.setflags(write=False)
        self._weights = a

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def n(self) -> int:
        return self._weights.shape[0]

    def is_integral(self) -> bool:
        a = self._weights
        if a.dtype.kind in "iu":
            return True
        if a.dtype.kind == "O":
            return all(isinstance(x, (int, np.integer)) for x in a.flat)
        return bool(np.all(np.isfinite(a)) and np.all(a == np.round(a)))

    def permuted(self, perm) -> "WeightedGraph":
        """Relabel so that new vertex ``i`` is old vertex ``perm[i]``."""
        perm = np.asarray(perm)
        return type(self)(self._weights[np.ix_(perm, perm)])

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightedGraph) and np.array_equal(self._weights, other._weights)

    def __hash__(self):
        return hash(self._weights.tobytes())

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"


class Multigraph(WeightedGraph):
    """Weighted graph with non-negative integer entries.

    Entries that overflow int64 are kept as Python ints (object dtype).
    """

    def __init__(self, weights):
        a = np.array(weights, dtype=object)
        for x in a.flat:
            if isinstance(x, (float, np.floating)):
                if not float(x).is_integer():
                    raise InvalidArgument("multigraph entries must be integers")
            elif not isinstance(x, (int, np.integer)):
                raise InvalidArgument("multigraph entries must be integers")
        ints = np.vectorize(int, otypes=[object])(a) if a.size else a
        if any(x < 0 for x in ints.flat):
            raise InvalidArgument("multigraph entries must be non-negative")
        big = max((abs(x) for x in ints.flat), default=0)
        super().__init__(ints.astype(np.int64) if big < 2**62 else ints)


@dataclass(frozen=True)
class BaseGraph:
    """Simple undirected graph with a frozen vertex order.

    Edges are stored once as ``(u, v)`` with ``u < v``, sorted; the CFI encoding
    orients each edge from ``u`` to ``v``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgument("n must be positive")
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidArgument(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidArgument(f"edge ({u}, {v}) out of range")
            norm.add((min(u, v), max(u, v)))
        if len(norm) != len(self.edges):
            raise InvalidArgument("duplicate edges")
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def incident(self, v: int) -> list[tuple[int, int]]:
        """Edges at ``v`` in the global (sorted) edge order."""
        return [e for e in self.edges if v in e]

    def neighbors(self, v: int) -> list[int]:
        return sorted(u if w == v else w for u, w in self.edges if v in (u, w))

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        nbrs = {v: self.neighbors(v) for v in range(self.n)}
        while stack:
            for w in nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_regular(self, d: int | None = None) -> bool:
        degs = set(self.degrees)
        return len(degs) == 1 and (d is None or degs == {d})

    def to_weighted(self) -> Multigraph:
        return Multigraph(self.adjacency())


def make_cycle(n: int) -> BaseGraph:
    if n < 3:
        raise InvalidArgument("a cycle needs at least 3 vertices")
    return BaseGraph(n, tuple((i, (i + 1) % n) for i in range(n)), name=f"c{n}")


def make_path(n: int) -> BaseGraph:
    if n < 1:
        raise InvalidArgument("a path needs at least 1 vertex")
    return BaseGraph(n, tuple((i, i + 1) for i in range(n - 1)), name=f"p{n}")


_PETERSEN = (
    [(i, (i + 1) % 5) for i in range(5)]
    + [(i, i + 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
)


def make_named(name: str) -> BaseGraph:
    """Fixed small 3-regular bases: ``k4``, ``petersen``, ``cube``."""
    key = name.lower()
    if key == "k4":
        edges = [(u, v) for u in range(4) for v in range(u + 1, 4)]
        return BaseGraph(4, tuple(edges), name="k4")
    if key == "petersen":
        return BaseGraph(10, tuple(_PETERSEN), name="petersen")
    if key == "cube":
        edges = [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]
        return BaseGraph(8, tuple(edges), name="cube")
    if key.startswith("c") and key[1:].isdigit():
        return make_cycle(int(key[1:]))
    raise InvalidArgument(f"unknown base graph {name!r}")


def erdos_renyi(n: int, p: float, seed: int) -> BaseGraph:
    """G(n, p) drawn from ``numpy.random.default_rng(seed)``; may be disconnected."""
    if n < 1 or not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"infeasible G(n, p) parameters n={n}, p={p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return BaseGraph(n, tuple(zip(iu[keep].tolist(), ju[keep].tolist())), name=f"er{n}_{seed}")


def random_cubic(n: int, seed: int, max_tries: int = 10_000) -> BaseGraph:
    """Connected simple 3-regular graph from the pairing model with rejection."""
    if n < 4 or n % 2:
        raise InvalidArgument("random_cubic needs an even n >= 4")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), 3)
    for _ in range(max_tries):
        perm = rng.permutation(points)
        pairs = perm.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        edges = {(int(min(a, b)), int(max(a, b))) for a, b in pairs}
        if len(edges) != len(pairs):
            continue
        g = BaseGraph(n, tuple(edges), name=f"cubic{n}_{seed}")
        if g.is_connected():
            return g
    raise InvalidArgument(f"no simple connected cubic graph found in {max_tries} tries")


def make_random(model: str, n: int, seed: int, p: float | None = None) -> BaseGraph:
    if model == "erdos_renyi":
        if p is None:
            raise InvalidArgument("erdos_renyi needs p")
        return erdos_renyi(n, p, seed)
    if model == "random_cubic":
        return random_cubic(n, seed)
    raise InvalidArgument(f"unknown random model {model!r}")


def matrix_view(g: WeightedGraph | BaseGraph, which: str = "adjacency") -> np.ndarray:
    """Adjacency ``A``, Laplacian ``D - A`` or normalized Laplacian ``I - D^-1/2 A D^-1/2``.

    The weighted degree is the off-diagonal row sum; diagonal node features
    stay on the diagonal of ``A`` and are subtracted in the Laplacian.
    """
    if isinstance(g, BaseGraph):
        g = g.to_weighted()
    kind = _VIEW_ALIASES.get(which)
    if kind is None:
        raise InvalidArgument(f"unknown matrix view {which!r}")
    a = np.asarray(g.weights, dtype=float)
    if kind == "adjacency":
        return a.copy()
    off = a - np.diag(np.diag(a))
    deg = off.sum(axis=1)
    if kind == "laplacian":
        return np.diag(deg) - a
    if np.any(deg <= 0):
        raise DegenerateInput("normalized Laplacian undefined with isolated vertices")
    inv_sqrt = 1.0 / np.sqrt(deg)
    return np.eye(g.n) - inv_sqrt[:, None] * a * inv_sqrt[None, :]


# --- serialization -------------------------------------------------------------


def _num(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    f = float(x)
    return int(f) if f.is_integer() else f


def graph_to_dict(g: WeightedGraph | BaseGraph) -> dict:
    if isinstance(g, BaseGraph):
        g = g.to_weighted()
    a = g.weights
    edges = [
        [u, v, _num(a[u, v])] for u in range(g.n) for v in range(u + 1, g.n) if a[u, v] != 0
    ]
    return {"n": g.n, "edges": edges, "node_weights": [_num(a[v, v]) for v in range(g.n)]}


def graph_from_dict(d: dict) -> WeightedGraph:
    try:
        n = int(d["n"])
        edges = d.get("edges", [])
        node_weights = d.get("node_weights") or [0] * n
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgument(f"malformed graph JSON: {exc}") from exc
    if len(node_weights) != n:
        raise InvalidArgument("node_weights length does not match n")
    return _build(n, [tuple(e) for e in edges], node_weights)


def _build(n: int, edges: Iterable[tuple], node_weights) -> WeightedGraph:
    vals = [w for *_, w in edges] + list(node_weights)
    integral = all(isinstance(x, int) or (isinstance(x, float) and x.is_integer()) for x in vals)
    a = np.zeros((n, n), dtype=object if integral else float)
    if integral:
        a[:] = 0
    for e in edges:
        if len(e) == 2:
            u, v, w = e[0], e[1], 1
        elif len(e) == 3:
            u, v, w = e
        else:
            raise InvalidArgument(f"bad edge record {e!r}")
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InvalidArgument(f"bad edge ({u}, {v})")
        a[u, v] = a[v, u] = int(w) if integral else float(w)
    for i, w in enumerate(node_weights):
        a[i, i] = int(w) if integral else float(w)
    if integral and all(x >= 0 for x in a.flat):
        return Multigraph(a)
    return WeightedGraph(a.astype(float))


def parse_edge_list(text: str) -> WeightedGraph:
    """Whitespace ``u v w`` lines (``w`` optional, default 1). ``#`` starts a comment."""
    edges = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InvalidArgument(f"bad edge-list line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        w = 1 if len(parts) == 2 else json.loads(parts[2])
        edges.append((u, v, w))
    if not edges:
        raise InvalidArgument("empty edge list")
    n = max(max(u, v) for u, v, _ in edges) + 1
    return _build(n, edges, [0] * n)


def load_graph(path: str | Path) -> WeightedGraph:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"{path}: {exc}") from exc
        return graph_from_dict(data)
    return parse_edge_list(text)


def save_graph(g: WeightedGraph | BaseGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(graph_to_dict(g)) + "\n")
