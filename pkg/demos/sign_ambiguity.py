"""Eigenvectors come with arbitrary signs. Canonicalization removes that freedom.

Run: python3 demos/sign_ambiguity.py
"""

import numpy as np

from prismcanon import canonicalize, certificates_equal, eigendecompose, erdos_renyi, matrix_view

g = erdos_renyi(10, 0.4, seed=7)
L = matrix_view(g, "laplacian")
d = eigendecompose(L)
print("eigenvalues:", np.round(d.lambdas, 3))
print("simple spectrum:", bool(np.all(d.mults == 1)))

# relabel the vertices and flip some eigenvector signs by hand
rng = np.random.default_rng(0)
perm = rng.permutation(10)
flips = rng.choice([-1.0, 1.0], 10)
U2 = d.U[perm] * flips
print("raw first rows agree?", np.allclose(d.U[0], U2[0]))

a = canonicalize(d.U)
b = canonicalize(U2)
print("canonical rows agree?", certificates_equal(a, b))
print("first canonical row:", np.round(a.matrix()[0], 4))
print("sign vector applied to the relabeled copy:", b.sign.tolist())
