"""Cycles have repeated eigenvalues; the frame-based path still gives stable output."""

import numpy as np

from prismcanon import canonicalize_hybrid, certificates_equal, eigendecompose, make_cycle, matrix_view

rng = np.random.default_rng(1)
for n in (4, 6, 8):
    M = matrix_view(make_cycle(n), "nlap")
    d = eigendecompose(M)
    ref = canonicalize_hybrid(d)
    stable = 0
    for _ in range(20):
        p = rng.permutation(n)
        stable += certificates_equal(canonicalize_hybrid(eigendecompose(M[np.ix_(p, p)])), ref)
    print(f"C{n}: multiplicities {d.mults.tolist()}, stable under 20 relabelings: {stable}/20, heuristic: {ref.heuristic}")
