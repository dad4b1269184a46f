"""Canonical forms for simple-spectrum eigenvector matrices.

Pipeline: ``partition`` (absolute-value signatures) -> ``refine`` (balanced
sign-parity splitting) -> ``solve_signs`` (GF(2) system for the column signs) ->
``match`` (lexicographic row sort). ``fast_sign`` is the shortcut used when the
absolute-value signature already separates every vertex.

All decisions are made on values quantized to ``precision`` decimal digits,
so float jitter below ``10**-precision`` cannot change the outcome.
"""

from __future__ import annotations

import json
from itertools import combinations
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .errors import InvalidArgument, NotApplicable
from .spectral import EigDecomp, KSlice

DEFAULT_PRECISION = 8


def quantize(x, precision: int) -> np.ndarray:
    return np.rint(np.asarray(x, dtype=float) * 10.0**precision).astype(np.int64)


def _as_slice(U) -> KSlice:
    if isinstance(U, KSlice):
        return U
    if isinstance(U, EigDecomp):
        return U.as_slice()
    return KSlice.from_matrix(U)


@dataclass(frozen=True)
class Partition:
    """Ordered vertex classes.

    ``colors[v]`` is the index of the class containing ``v``; class order is
    canonical (invariant under row permutations and column sign flips).
    """

    classes: tuple[np.ndarray, ...]
    colors: np.ndarray

    @property
    def L(self) -> int:
        return len(self.classes)

    @classmethod
    def from_colors(cls, colors) -> "Partition":
        colors = np.asarray(colors, dtype=np.int64)
        L = int(colors.max()) + 1 if colors.size else 0
        classes = tuple(np.flatnonzero(colors == c) for c in range(L))
        return cls(classes, colors)

    def supports(self, Q: np.ndarray) -> list[np.ndarray]:
        """Nonzero columns of each class, read from the quantized matrix."""
        return [np.flatnonzero(Q[c[0]] != 0) for c in self.classes]


def signatures(Uk, precision: int) -> np.ndarray:
    """Quantized absolute-value signature of every row."""
    return np.abs(quantize(_as_slice(Uk).Uk, precision))


def partition(Uk, precision: int = DEFAULT_PRECISION) -> Partition:
    sig = signatures(Uk, precision)
    # np.unique orders rows lexicographically, which fixes the class order
    _, inverse = np.unique(sig, axis=0, return_inverse=True)
    return Partition.from_colors(inverse.ravel())


def _first_imbalanced(coords: np.ndarray) -> np.ndarray | None:
    """Parity of the first functional whose 0/1 counts differ, or None if all agree.

    Functionals are subsets of the pivot coordinates, scanned by size and then
    lexicographically. A class passes every test exactly when its sign patterns
    are spread uniformly over their affine span.
    """
    size, r = coords.shape
    if size % (1 << min(r, 62)) == 0 and r < 31:
        _, counts = np.unique(coords, axis=0, return_counts=True)
        if len(counts) == 1 << r and np.all(counts == counts[0]):
            return None
    for w in range(1, r + 1):
        for S in combinations(range(r), w):
            parity = coords[:, list(S)].sum(axis=1) & 1
            if 2 * int(parity.sum()) != size:
                return parity
    return None


def _balanced_split(Q: np.ndarray, verts: np.ndarray) -> list[np.ndarray]:
    """Recursively split ``verts`` until every product of signs is balanced."""
    if len(verts) < 3:
        return [verts]
    K = np.flatnonzero(Q[verts[0]] != 0)
    if K.size == 0:
        return [verts]
    bits = (Q[np.ix_(verts, K)] < 0).astype(np.uint8)
    diffs = bits ^ bits[0]
    rref, r, pivots = gf2.row_reduce(gf2.BitMatrix.from_array(diffs))
    if r == 0:
        return [verts]
    parity = _first_imbalanced(diffs[:, pivots].astype(np.int64))
    if parity is None:
        return [verts]
    # the two sides have different sizes; order them by size, which is sign-invariant
    groups = sorted((verts[parity == 0], verts[parity == 1]), key=len)
    return _balanced_split(Q, groups[0]) + _balanced_split(Q, groups[1])


def refine(part: Partition, Uk, precision: int = DEFAULT_PRECISION) -> Partition:
    """Split classes until the sign patterns inside each one are balanced.

    A class is balanced when, for every product of columns over its
    independent sign-bit columns, the values ``+x`` and ``-x`` occur equally
    often. Then the class's sign patterns fill an affine subspace and its
    within-class product multisets ``{U_v * U_u : u in C}`` agree for all ``v``.
    Splits are ordered by sizes and scanned in column order, so the result
    does not depend on vertex labels or column signs.
    """
    Q = quantize(_as_slice(Uk).Uk, precision)
    out: list[np.ndarray] = []
    for verts in part.classes:
        out.extend(_balanced_split(Q, np.asarray(verts)))
    colors = np.empty(len(part.colors), dtype=np.int64)
    for c, verts in enumerate(out):
        colors[verts] = c
    return Partition(tuple(out), colors)


@dataclass
class SignSolution:
    """Output of ``solve_signs``.

    ``appended_rows`` counts the parity-check rows kept in the global system;
    ``relation_rank`` is the summed dimension of the per-class difference
    spaces (the relative sign relations between vertices of a class).
    """

    sign: np.ndarray
    kernel: gf2.BitMatrix
    appended_rows: int
    relation_rank: int
    system: gf2.BitMatrix
    rhs: int


def _class_anchor(Q: np.ndarray, verts: np.ndarray) -> int:
    """Vertex of the class whose quantized row is lexicographically smallest."""
    rows = Q[verts]
    return int(verts[np.lexsort(rows.T[::-1])[0]])


def solve_signs(part: Partition, Uk, precision: int = DEFAULT_PRECISION) -> SignSolution:
    """Assemble and solve the GF(2) system fixing one sign per column.

    For every class the sign patterns of its rows form an affine space
    ``a0 + W``; the rows of a parity check ``T`` of ``W`` give equations
    ``T s_K = T a0``. Only rows independent of those already collected are kept,
    and the lexicographically smallest solution is returned together with the
    kernel of the system (the sign automorphisms).
    """
    U = _as_slice(Uk).Uk
    k = U.shape[1]
    Q = quantize(U, precision)
    basis = gf2.EchelonBasis(k)
    E = gf2.BitMatrix(k)
    f = 0
    relation_rank = 0
    for verts, K in zip(part.classes, part.supports(Q)):
        if K.size == 0:
            continue
        width = K.size
        patterns = [gf2.vec_from_bits(Q[v, K] < 0) for v in verts]
        a0 = gf2.vec_from_bits(Q[_class_anchor(Q, verts), K] < 0)
        diffs = gf2.BitMatrix(width, sorted({a ^ a0 for a in patterns}))
        relation_rank += gf2.rank(diffs)
        T = gf2.parity_check(diffs)
        for r in T.rows:
            b = (r & a0).bit_count() & 1
            embedded = 0
            for j in range(width):
                if (r >> j) & 1:
                    embedded |= 1 << int(K[j])
            if basis.add(embedded):
                f |= b << E.nrows
                E.append(embedded)
    s0, kernel = gf2.solve(E, f)
    s = gf2.lexmin_coset(s0, kernel)
    return SignSolution(
        sign=gf2.bits_from_vec(s, k),
        kernel=kernel,
        appended_rows=E.nrows,
        relation_rank=relation_rank,
        system=E,
        rhs=f,
    )


@dataclass(eq=False)
class CanonCertificate:
    """Comparable canonical form of an eigenvector matrix.

    ``rows`` are the quantized canonical rows in non-increasing lexicographic
    order; ``order[i]`` is the original vertex placed at canonical row ``i``.
    Equality compares rows, eigenvalues and the automorphism kernel only.
    """

    n: int
    k: int
    precision: int
    eigenvalues: np.ndarray
    rows: np.ndarray
    order: np.ndarray
    sign: np.ndarray
    kernel: np.ndarray
    heuristic: bool = False
    values: np.ndarray | None = field(default=None, repr=False)
    info: dict = field(default_factory=dict, repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CanonCertificate):
            return NotImplemented
        if (self.n, self.k) != (other.n, other.k):
            return False
        return certificates_equal(self, other)

    __hash__ = None

    def matrix(self) -> np.ndarray:
        """Canonical rows as floats at the certificate precision."""
        return self.rows / 10.0**self.precision

    def to_dict(self) -> dict:
        scale = 10.0**self.precision
        return {
            "n": self.n,
            "k": self.k,
            "precision": self.precision,
            "eigenvalues": [int(x) / scale for x in self.eigenvalues],
            "rows": [[int(x) / scale for x in row] for row in self.rows],
            "order": [int(x) for x in self.order],
            "sign": [int(x) for x in self.sign],
            "automorphism_kernel": [[int(x) for x in row] for row in self.kernel],
            "heuristic": bool(self.heuristic),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "CanonCertificate":
        p = int(d["precision"])
        n, k = int(d["n"]), int(d["k"])
        kernel = np.array(d["automorphism_kernel"], dtype=np.uint8).reshape(-1, k)
        return cls(
            n=n,
            k=k,
            precision=p,
            eigenvalues=quantize(d["eigenvalues"], p),
            rows=quantize(d["rows"], p).reshape(n, k),
            order=np.array(d["order"], dtype=np.int64),
            sign=np.array(d["sign"], dtype=np.uint8),
            kernel=kernel,
            heuristic=bool(d.get("heuristic", False)),
        )


def certificates_equal(a: CanonCertificate, b: CanonCertificate) -> bool:
    if (a.n, a.k) != (b.n, b.k):
        raise InvalidArgument(f"certificate shapes differ: {(a.n, a.k)} vs {(b.n, b.k)}")
    if a.precision != b.precision:
        raise InvalidArgument("certificates were quantized at different precisions")
    return (
        np.array_equal(a.rows, b.rows)
        and np.array_equal(a.eigenvalues, b.eigenvalues)
        and np.array_equal(a.kernel, b.kernel)
    )


def _descending_order(Q: np.ndarray) -> np.ndarray:
    # lexsort is stable, so equal rows keep their original relative order
    return np.lexsort((-Q).T[::-1])


def match(
    Uk,
    sign,
    precision: int = DEFAULT_PRECISION,
    kernel: gf2.BitMatrix | None = None,
) -> CanonCertificate:
    """Apply the column signs and sort the rows into non-increasing order."""
    sl = _as_slice(Uk)
    U = sl.Uk
    n, k = U.shape
    sign = np.asarray(sign, dtype=np.uint8)
    if sign.shape != (k,):
        raise InvalidArgument(f"sign vector must have length {k}")
    V = U * np.where(sign == 1, -1.0, 1.0)
    Q = quantize(V, precision)
    order = _descending_order(Q)
    kern = kernel.to_array() if kernel is not None else np.zeros((0, k), dtype=np.uint8)
    return CanonCertificate(
        n=n,
        k=k,
        precision=precision,
        eigenvalues=quantize(sl.expanded_lambdas(), precision),
        rows=Q[order],
        order=order,
        sign=sign,
        kernel=kern,
        values=V[order],
    )


def canonicalize(Uk, precision: int = DEFAULT_PRECISION) -> CanonCertificate:
    """Canonical form of a simple-spectrum eigenvector slice (or a raw matrix)."""
    sl = _as_slice(Uk)
    if not sl.is_simple():
        raise InvalidArgument(
            "canonicalize needs a simple spectrum; use canonicalize_hybrid for repeated eigenvalues"
        )
    part = refine(partition(sl, precision), sl, precision)
    sol = solve_signs(part, sl, precision)
    cert = match(sl, sol.sign, precision, kernel=sol.kernel)
    cert.info.update(
        L=part.L,
        appended_rows=sol.appended_rows,
        relation_rank=sol.relation_rank,
        injective=part.L == sl.n,
    )
    return cert


def is_injective(Uk, precision: int = DEFAULT_PRECISION) -> bool:
    sig = signatures(Uk, precision)
    return len(np.unique(sig, axis=0)) == sig.shape[0]


def fast_sign(Uk, precision: int = DEFAULT_PRECISION) -> CanonCertificate:
    """Shortcut when every vertex has a distinct absolute-value signature.

    Each column is flipped so that its first nonzero entry, scanning vertices
    in signature order, is positive.
    """
    sl = _as_slice(Uk)
    sig = signatures(sl, precision)
    if len(np.unique(sig, axis=0)) != sig.shape[0]:
        raise NotApplicable("absolute-value signature is not injective")
    Q = quantize(sl.Uk, precision)
    pi = np.lexsort(sig.T[::-1])
    k = Q.shape[1]
    sign = np.zeros(k, dtype=np.uint8)
    free = []
    for j in range(k):
        nz = np.flatnonzero(Q[pi, j])
        if nz.size == 0:
            free.append(j)
            continue
        if Q[pi[nz[0]], j] < 0:
            sign[j] = 1
    kernel = gf2.BitMatrix(k, [1 << j for j in free])
    cert = match(sl, sign, precision, kernel=kernel)
    cert.info.update(L=sl.n, appended_rows=k - len(free), relation_rank=0, injective=True)
    return cert


def sign_automorphisms(Uk, precision: int = DEFAULT_PRECISION) -> np.ndarray:
    """Basis (rows, RREF) of the sign flips that map the row set to itself."""
    sl = _as_slice(Uk)
    part = refine(partition(sl, precision), sl, precision)
    return solve_signs(part, sl, precision).kernel.to_array()


def row_multiset_equal(A, B, atol: float) -> bool:
    """True iff the rows of ``A`` and ``B`` agree as multisets up to ``atol``."""
    from scipy.optimize import linear_sum_assignment

    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        return False
    if A.size == 0:
        return True
    cost = np.abs(A[:, None, :] - B[None, :, :]).max(axis=2)
    r, c = linear_sum_assignment(cost)
    return bool(cost[r, c].max() <= atol)
