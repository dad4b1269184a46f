"""Two weighted graphs that WL cannot separate but certificates can.

Built from the even and odd CFI graphs over K4. Every eigenvalue of both
multigraphs is an exact, distinct integer.
"""

from prismcanon import build_multigraph_pair, check_pair, compare, iso_test, make_named

pair = build_multigraph_pair(make_named("k4"))
print("D weights:", pair.D)
print("eigenvalues:", sorted(pair.eigenvalues))
print("exact checks:", all(check_pair(pair).values()))

for k in (1, 2):
    v = compare(pair.A0, pair.A1, k)
    print(f"{k}-WL distinguishes the pair: {v.distinguishable} (rounds {v.rounds})")

r = iso_test(pair.A0, pair.A1)
print("certificate verdict:", r.verdict, "-", r.reason)
