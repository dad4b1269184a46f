"""Canonicalization for spectra with repeated eigenvalues.

Simple eigenvectors are handled exactly by sign solving. Each eigenspace of
dimension ``m >= 2`` is rotated into a canonical frame: pick ``m`` pivot
vertices in canonical order, then take the QR frame of their rows with a
positive ``R`` diagonal, so the pivot rows become lower triangular with a
positive diagonal. For ``m = 2`` this is the rotation that sends the first
pivot to the positive x-axis followed by the reflection fixed by the second
pivot; for ``m = 3`` it adds the Householder step.

When pivots are tied, every tied choice is tried (up to a budget) and the
lexicographically largest resulting row multiset wins. Beyond the budget the
tie is broken by vertex index and the certificate is marked heuristic.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .prism import (
    DEFAULT_PRECISION,
    CanonCertificate,
    Partition,
    _descending_order,
    canonicalize,
    quantize,
    refine,
    solve_signs,
)
from .spectral import EigDecomp, KSlice

PIVOT_BUDGET = 4096


def _ranks(keys: np.ndarray) -> np.ndarray:
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    return inverse.ravel().astype(np.int64)


def _lex_cmp(a: np.ndarray, b: np.ndarray) -> int:
    diff = np.flatnonzero(a != b)
    if diff.size == 0:
        return 0
    i = diff[0]
    return 1 if a[i] > b[i] else -1


def _frame(B: np.ndarray, pivots: list[int]) -> np.ndarray:
    """Rotate ``B`` so the pivot rows are lower triangular with positive diagonal."""
    Qm, R = np.linalg.qr(B[pivots].T)
    d = np.sign(np.diag(R))
    d[d == 0] = 1
    return B @ (Qm * d)


def _score(rank: np.ndarray, B: np.ndarray, precision: int) -> np.ndarray:
    keys = np.column_stack([rank, quantize(B, precision)])
    return keys[np.lexsort(keys.T[::-1])].ravel()


class _PivotSearch:
    def __init__(self, B, rank, precision, prefer_unique, budget):
        self.B = B
        self.rank = rank
        self.precision = precision
        self.m = B.shape[1]
        self.budget = budget
        self.leaves = 0
        self.exhausted = False
        sizes = np.bincount(rank)[rank]
        if prefer_unique:
            self.priority = np.column_stack([sizes > 1, rank])
        else:
            self.priority = rank[:, None]
        self.eps = 10.0 ** (-precision)

    def candidates(self, chosen: list[int]) -> np.ndarray:
        """Lowest-priority group of rows that still add a new direction."""
        B = self.B
        if chosen:
            Qc, _ = np.linalg.qr(B[chosen].T)
            resid = B - (B @ Qc) @ Qc.T
        else:
            resid = B
        ok = np.flatnonzero(np.linalg.norm(resid, axis=1) > self.eps)
        if ok.size == 0:
            return ok
        pr = self.priority[ok]
        best = pr[np.lexsort(pr.T[::-1])[0]]
        return ok[np.all(pr == best, axis=1)]

    def greedy(self) -> list[int]:
        chosen: list[int] = []
        for _ in range(self.m):
            cand = self.candidates(chosen)
            chosen.append(int(cand[0]))
        return chosen

    def search(self) -> tuple[np.ndarray, bool]:
        """Best frame over tied pivot choices; the flag is True if the budget ran out."""
        best: list = [None, None]

        def walk(chosen):
            if self.exhausted:
                return
            if len(chosen) == self.m:
                self.leaves += 1
                if self.leaves > self.budget:
                    self.exhausted = True
                    return
                Bf = _frame(self.B, chosen)
                sc = _score(self.rank, Bf, self.precision)
                if best[0] is None or _lex_cmp(sc, best[0]) > 0:
                    best[0], best[1] = sc, Bf
                return
            for v in self.candidates(chosen):
                walk(chosen + [int(v)])

        walk([])
        if self.exhausted:
            return _frame(self.B, self.greedy()), True
        return best[1], False


def _embed_kernel(kernel: gf2.BitMatrix, cols: np.ndarray, N: int) -> np.ndarray:
    arr = kernel.to_array()
    out = np.zeros((arr.shape[0], N), dtype=np.uint8)
    out[:, cols] = arr
    return out


def canonicalize_hybrid(
    d: EigDecomp,
    precision: int = DEFAULT_PRECISION,
    budget: int = PIVOT_BUDGET,
) -> CanonCertificate:
    if np.all(d.mults == 1):
        return canonicalize(d.as_slice(), precision)
    U = np.array(d.U, dtype=float)
    n, N = U.shape
    spaces = d.class_columns()

    # stage 1: norms of the projections onto each eigenspace
    sigma = np.column_stack([np.linalg.norm(U[:, c], axis=1) for c in spaces])
    rank = _ranks(quantize(sigma, precision))

    # stage 2a: exact sign solving on the simple eigenvectors
    simple = np.concatenate([c for c in spaces if len(c) == 1] or [np.empty(0, dtype=np.int64)])
    simple = simple.astype(np.int64)
    sign = np.zeros(N, dtype=np.uint8)
    kernel = np.zeros((0, N), dtype=np.uint8)
    info: dict = {}
    if simple.size:
        U1 = KSlice.from_matrix(U[:, simple])
        part = refine(Partition.from_colors(rank), U1, precision)
        sol = solve_signs(part, U1, precision)
        sign[simple] = sol.sign
        U[:, simple] *= np.where(sol.sign == 1, -1.0, 1.0)
        kernel = _embed_kernel(sol.kernel, simple, N)
        rank = _ranks(np.column_stack([part.colors, quantize(U[:, simple], precision)]))
        info.update(L=part.L, appended_rows=sol.appended_rows, relation_rank=sol.relation_rank)

    # stage 2b: frames for repeated eigenspaces, smallest multiplicity first
    heuristic = False
    multi = sorted((i for i, c in enumerate(spaces) if len(c) > 1), key=lambda i: (len(spaces[i]), i))
    for i in multi:
        cols = spaces[i]
        search = _PivotSearch(U[:, cols], rank, precision, len(cols) >= 4, budget)
        U[:, cols], exhausted = search.search()
        heuristic |= exhausted
        rank = _ranks(np.column_stack([rank, quantize(U[:, cols], precision)]))

    Qm = quantize(U, precision)
    order = _descending_order(Qm)
    info["heuristic_reason"] = "pivot budget exceeded" if heuristic else None
    return CanonCertificate(
        n=n,
        k=N,
        precision=precision,
        eigenvalues=quantize(d.expanded_lambdas(), precision),
        rows=Qm[order],
        order=order,
        sign=sign,
        kernel=kernel,
        heuristic=heuristic,
        values=U[order],
        info=info,
    )
