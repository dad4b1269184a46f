"""The integer encoding of the CFI graphs over a triangle, and the cube's spectrum."""

from prismcanon import build_cfi, integral_encoding, make_cycle, make_named, verify_cfi_spectrum

for twist in ("even", "odd"):
    enc = integral_encoding(build_cfi(make_cycle(3), twist))
    print(f"--- {twist} ---")
    print(enc.to_csv(), end="")
    print("columns orthogonal:", enc.is_orthogonal(), "norms:", enc.norms)

# the triangle is 2-regular, so some columns overlap; on a cubic base they never do
print("K4 encoding orthogonal:", integral_encoding(build_cfi(make_named("k4"), "odd")).is_orthogonal())

r = verify_cfi_spectrum(make_named("cube"))
print("cube CFI spectrum matches 2*lambda(base) + (+-2)^(3n):", r.matches, f"(max error {r.max_error:.1e})")
print("CFI adjacency has a simple spectrum:", r.simple)
