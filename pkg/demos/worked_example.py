"""The four stages on a 4x4 matrix with two tied row classes."""

import numpy as np

from prismcanon import match, partition, refine, solve_signs

U = np.array(
    [
        [1, 1, 2, 1],
        [-1, 0, -1, -2],
        [-1, -1, -2, -1],
        [-1, 0, 1, 2],
    ],
    dtype=float,
)

part = partition(U)
print("classes by |row|:", [c.tolist() for c in part.classes])

part = refine(part, U)
print("after refinement:", [c.tolist() for c in part.classes])

sol = solve_signs(part, U)
print("sign vector (1 = flip):", sol.sign.tolist())
print("automorphism kernel rank:", sol.kernel.nrows)

cert = match(U, sol.sign)
print("canonical order:", cert.order.tolist())
print(cert.matrix())
