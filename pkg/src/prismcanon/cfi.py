"""CFI graphs and their orthogonal integer encodings.

A CFI graph replaces each base vertex ``v`` by a fiber of vertices ``(v, S)``
with ``S`` a subset of the edges at ``v`` of prescribed parity. The encoding
``[X | X' | I]`` has pairwise orthogonal integer columns on 3-regular bases,
which turns each CFI graph into a multigraph ``X diag(D) X^T`` whose exact
eigenpairs are the encoding's columns.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalError, InvalidArgument
from .graph import BaseGraph, Multigraph
from .spectral import EigDecomp, eigendecompose


@dataclass(frozen=True)
class CfiGraph:
    base: BaseGraph
    twist: frozenset[int]
    # (base vertex, frozenset of global edge indices)
    vertices: tuple[tuple[int, frozenset[int]], ...]
    adjacency: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def fibers(self) -> np.ndarray:
        return np.array([v for v, _ in self.vertices], dtype=np.int64)

    def label(self, i: int) -> str:
        v, S = self.vertices[i]
        if not S:
            return f"({v},{{}})"
        names = ",".join(f"{a}{b}" for a, b in (self.base.edges[e] for e in sorted(S)))
        return f"({v},{{{names}}})"

    def to_weighted(self) -> Multigraph:
        return Multigraph(self.adjacency)


def _twist_set(twist) -> frozenset[int]:
    if twist in ("even", 0, False, None):
        return frozenset()
    if twist in ("odd", 1, True):
        return frozenset({0})
    raise InvalidArgument(f"twist must be 'even' or 'odd', got {twist!r}")


def _fiber(base: BaseGraph, v: int, odd: bool) -> list[frozenset[int]]:
    """Subsets of the edges at ``v`` with the required parity, in binary order."""
    inc = [base.edges.index(e) for e in base.incident(v)]
    out = []
    for mask in range(1 << len(inc)):
        if (mask.bit_count() & 1) == odd:
            out.append(frozenset(inc[j] for j in range(len(inc)) if (mask >> j) & 1))
    return out


def build_cfi(base: BaseGraph, twist="even") -> CfiGraph:
    if not base.is_connected():
        raise InvalidArgument("CFI construction needs a connected base graph")
    U = _twist_set(twist)
    verts = [(v, S) for v in range(base.n) for S in _fiber(base, v, v in U)]
    edge_id = {e: i for i, e in enumerate(base.edges)}
    N = len(verts)
    A = np.zeros((N, N), dtype=np.int64)
    for i, (v, S) in enumerate(verts):
        for j in range(i + 1, N):
            u, T = verts[j]
            e = edge_id.get((min(u, v), max(u, v)))
            if e is not None and e not in (S ^ T):
                A[i, j] = A[j, i] = 1
    return CfiGraph(base, U, tuple(verts), A)


def vertex_basis(n: int) -> np.ndarray:
    """Integer matrix with an all-ones first column and orthogonal remaining columns."""
    W = np.zeros((n, n), dtype=np.int64)
    W[:, 0] = 1
    for i in range(1, n):
        W[i, i] = -i
        W[i, i + 1 :] = 1
    W[0, 1:] = 1
    return W


@dataclass(frozen=True)
class CfiEncoding:
    matrix: np.ndarray
    columns: tuple[tuple[str, int], ...]
    norms: tuple[int, ...]
    cfi: CfiGraph = field(repr=False)

    @property
    def ones_column(self) -> int:
        return self.columns.index(("I", 0))

    def column_names(self) -> list[str]:
        edges = self.cfi.base.edges
        out = []
        for block, i in self.columns:
            if block == "I":
                out.append(f"I:v{i}")
            else:
                a, b = edges[i]
                out.append(f"{block}:e{a}-{b}")
        return out

    def gram(self) -> np.ndarray:
        X = self.matrix.astype(object)
        return X.T.dot(X)

    def is_orthogonal(self) -> bool:
        G = self.gram()
        return bool(np.all(G[~np.eye(G.shape[0], dtype=bool)] == 0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertex"] + self.column_names())
        for i, row in enumerate(self.matrix):
            w.writerow([self.cfi.label(i)] + [int(x) for x in row])
        return buf.getvalue()


def integral_encoding(cfi: CfiGraph) -> CfiEncoding:
    base = cfi.base
    m = len(base.edges)
    X = np.zeros((cfi.n, m), dtype=np.int64)
    Xp = np.zeros((cfi.n, m), dtype=np.int64)
    W = vertex_basis(base.n)
    I = np.zeros((cfi.n, base.n), dtype=np.int64)
    for r, (v, S) in enumerate(cfi.vertices):
        for e, (a, b) in enumerate(base.edges):
            if v not in (a, b):
                continue
            x = 1 if e in S else -1
            X[r, e] = x
            Xp[r, e] = x if v == a else -x
        I[r] = W[v]
    M = np.hstack([X, Xp, I])
    cols = tuple([("X", e) for e in range(m)] + [("X'", e) for e in range(m)] + [("I", v) for v in range(base.n)])
    norms = tuple(int(x) for x in (M.astype(object) ** 2).sum(axis=0))
    return CfiEncoding(M, cols, norms, cfi)


@dataclass(frozen=True)
class CfiMultigraphPair:
    base: BaseGraph
    A0: Multigraph
    A1: Multigraph
    D: tuple[int, ...]
    norms: tuple[int, ...]
    encodings: tuple[CfiEncoding, CfiEncoding] = field(repr=False)

    @property
    def eigenvalues(self) -> tuple[int, ...]:
        """Exact eigenvalues ``D_i * N_i``, one per encoding column."""
        return tuple(d * nn for d, nn in zip(self.D, self.norms))

    def side(self, which: int) -> tuple[Multigraph, CfiEncoding]:
        if which not in (0, 1):
            raise InvalidArgument("side must be 0 or 1")
        return (self.A0, self.encodings[0]) if which == 0 else (self.A1, self.encodings[1])

    def exact_decomposition(self, which: int) -> EigDecomp:
        """Eigendecomposition built from the encoding columns, normalized."""
        _, enc = self.side(which)
        vals = np.array(self.eigenvalues, dtype=float)
        order = np.argsort(vals, kind="stable")
        U = enc.matrix[:, order] / np.sqrt(np.array(self.norms, dtype=float)[order])
        return EigDecomp(U, vals[order], np.ones(len(order), dtype=np.int64))

    def numeric_decomposition(self, which: int, tol: float = 1e-8) -> EigDecomp:
        A, _ = self.side(which)
        return eigendecompose(A.weights.astype(float), tol)

    def sidecar(self) -> dict:
        return {
            "base": self.base.name or None,
            "D": list(self.D),
            "norms": list(self.norms),
            "eigenvalues": list(self.eigenvalues),
            "columns": self.encodings[0].column_names(),
        }

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar())


def choose_weights(enc: CfiEncoding) -> tuple[int, ...]:
    """Distinct-eigenvalue diagonal with a dominant weight on the all-ones column."""
    ones = enc.ones_column
    norms = enc.norms
    peak = [int(np.abs(enc.matrix[:, i]).max()) ** 2 for i in range(len(norms))]
    D = [0] * len(norms)
    used: set[int] = set()
    nxt = 1
    for i in range(len(norms)):
        if i == ones:
            continue
        while nxt * norms[i] in used:
            nxt += 1
        D[i] = nxt
        used.add(nxt * norms[i])
        nxt += 1
    d1 = 1 + sum(D[i] * peak[i] for i in range(len(norms)) if i != ones)
    while d1 * norms[ones] in used:
        d1 += 1
    D[ones] = d1
    if len({d * nn for d, nn in zip(D, norms)}) != len(D):
        raise InternalError("weight selection produced a repeated eigenvalue")
    return tuple(D)


def _weighted_product(M: np.ndarray, D) -> np.ndarray:
    X = M.astype(object)
    return (X * np.array(D, dtype=object)).dot(X.T)


def build_multigraph_pair(base: BaseGraph) -> CfiMultigraphPair:
    if not base.is_regular(3):
        raise InvalidArgument("multigraph pair needs a 3-regular base graph")
    if base.n < 4 or not base.is_connected():
        raise InvalidArgument("multigraph pair needs a connected base with at least 4 vertices")
    enc0 = integral_encoding(build_cfi(base, "even"))
    enc1 = integral_encoding(build_cfi(base, "odd"))
    if enc0.norms != enc1.norms:
        raise InternalError("column norms differ between the two sides")
    D = choose_weights(enc0)
    A0 = _weighted_product(enc0.matrix, D)
    A1 = _weighted_product(enc1.matrix, D)
    for A in (A0, A1):
        if any(x < 0 for x in A.ravel()):
            raise InternalError("weighted product has a negative entry")
    return CfiMultigraphPair(base, Multigraph(A0), Multigraph(A1), D, enc0.norms, (enc0, enc1))


def check_pair(pair: CfiMultigraphPair) -> dict[str, bool]:
    """Exact integer checks of the pair's defining properties."""
    out = {}
    lam = np.array(pair.eigenvalues, dtype=object)
    for side in (0, 1):
        A, enc = pair.side(side)
        W = A.weights.astype(object)
        X = enc.matrix.astype(object)
        out[f"orthogonal_{side}"] = enc.is_orthogonal()
        out[f"symmetric_{side}"] = bool(np.all(W == W.T))
        out[f"nonnegative_{side}"] = bool(all(x >= 0 for x in W.ravel()))
        out[f"eigenpairs_{side}"] = bool(np.all(W.dot(X) == X * lam))
        out[f"reconstructs_{side}"] = bool(np.all(_weighted_product(enc.matrix, pair.D) == W))
    out["distinct_eigenvalues"] = len(set(pair.eigenvalues)) == len(pair.eigenvalues)
    return out


@dataclass(frozen=True)
class SpectrumReport:
    base: str
    expected: tuple[float, ...]
    observed: tuple[float, ...]
    matches: bool
    simple: bool
    max_error: float


def expected_cfi_spectrum(base: BaseGraph) -> np.ndarray:
    lam = np.linalg.eigvalsh(base.adjacency().astype(float))
    extra = len(base.edges)
    return np.sort(np.concatenate([2 * lam, np.full(extra, 2.0), np.full(extra, -2.0)]))


def verify_cfi_spectrum(base: BaseGraph, tol: float = 1e-6) -> SpectrumReport:
    if not base.is_regular(3):
        raise InvalidArgument("spectrum identity is stated for 3-regular bases")
    cfi = build_cfi(base, "even")
    observed = np.sort(np.linalg.eigvalsh(cfi.adjacency.astype(float)))
    expected = expected_cfi_spectrum(base)
    ok = observed.shape == expected.shape
    err = float(np.abs(observed - expected).max()) if ok else float("inf")
    d = eigendecompose(cfi.adjacency.astype(float))
    return SpectrumReport(
        base=base.name,
        expected=tuple(float(x) for x in expected),
        observed=tuple(float(x) for x in observed),
        matches=ok and err <= tol,
        simple=bool(np.all(d.mults == 1)),
        max_error=err,
    )
