import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from prismcanon.errors import InvalidArgument, NotApplicable
from prismcanon.graph import make_cycle, matrix_view
from prismcanon.prism import (
    CanonCertificate,
    Partition,
    canonicalize,
    certificates_equal,
    fast_sign,
    is_injective,
    match,
    partition,
    quantize,
    refine,
    row_multiset_equal,
    sign_automorphisms,
    solve_signs,
)
from prismcanon.spectral import KSlice, eigendecompose

from conftest import WORKED_CANON, WORKED_U, path_slices, simple_er_slices

P = 8


def transformed(U, rng):
    perm = rng.permutation(U.shape[0])
    signs = rng.choice([-1.0, 1.0], U.shape[1])
    return U[perm] * signs


def class_sets(part):
    return [set(c.tolist()) for c in part.classes]


def within_class_products(U, verts, v):
    q = quantize(U[v] * U[verts], P)
    return sorted(map(tuple, q))


# --- worked example ------------------------------------------------------------


def admissible_signs(U, classes):
    """Brute force: sign vectors giving every class a row that is >= 0 on its support."""
    k = U.shape[1]
    out = []
    for bits in itertools.product([0, 1], repeat=k):
        V = U * np.where(np.array(bits) == 1, -1.0, 1.0)
        ok = True
        for c in classes:
            K = np.flatnonzero(U[c[0]] != 0)
            if not any(np.all(V[v, K] >= 0) for v in c):
                ok = False
                break
        if ok:
            out.append(bits)
    return out


def test_worked_example_partition():
    part = partition(WORKED_U, P)
    assert class_sets(part) == [{1, 3}, {0, 2}]


def test_worked_example_refine_keeps_partition():
    part = partition(WORKED_U, P)
    assert class_sets(refine(part, WORKED_U, P)) == class_sets(part)


def test_worked_example_sign_oracle():
    part = refine(partition(WORKED_U, P), WORKED_U, P)
    oracle = admissible_signs(WORKED_U, part.classes)
    assert oracle == [(1, 1, 1, 1)]
    sol = solve_signs(part, WORKED_U, P)
    assert tuple(sol.sign) == (1, 1, 1, 1)
    assert sol.kernel.nrows == 0


def test_worked_example_match():
    cert = canonicalize(WORKED_U, P)
    assert np.array_equal(cert.rows, WORKED_CANON * 10**P)
    assert cert.order.tolist() == [2, 1, 3, 0]


# --- small fixtures ------------------------------------------------------------


def test_identity_partition_and_match():
    I = np.eye(3)
    assert len(partition(I, P).classes) == 3
    cert = match(I, np.zeros(3, dtype=np.uint8), P)
    # (1,0,0) > (0,1,0) > (0,0,1), so descending order keeps the identity
    assert np.array_equal(cert.rows, np.eye(3, dtype=np.int64) * 10**P)


def test_fast_sign_single_row():
    cert = fast_sign(np.array([[-2.0, 3.0]]), P)
    assert np.array_equal(cert.matrix(), [[2.0, 3.0]])


def test_fast_sign_refuses_worked_example():
    with pytest.raises(NotApplicable):
        fast_sign(WORKED_U, P)


def test_injective_signature_gives_singletons():
    U = np.array([[0.1, 0.2], [0.3, -0.4], [-0.5, 0.6]])
    assert partition(U, P).L == 3


def test_refine_splits_unbalanced_class():
    # three rows share |sig| (1,1); their sign patterns 00, 01, 10 cannot be balanced
    U = np.array([[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [2.0, 3.0]])
    part = partition(U, P)
    big = [c for c in part.classes if len(c) == 3][0]
    products = {v: within_class_products(U, big, v) for v in big}
    assert len(set(map(tuple, products.values()))) > 1
    ref = refine(part, U, P)
    assert sorted(len(c) for c in ref.classes) == [1, 1, 2]
    assert {2} in class_sets(ref)


def test_refine_leaves_discrete_partition_alone():
    U = np.array([[0.1, 0.2], [0.3, -0.4], [-0.5, 0.6]])
    part = partition(U, P)
    assert class_sets(refine(part, U, P)) == class_sets(part)


def test_refined_classes_have_equal_product_multisets():
    for d in simple_er_slices(15, seed=21) + path_slices():
        U = d.U
        part = refine(partition(U, P), U, P)
        for c in part.classes:
            ref = within_class_products(U, c, c[0])
            assert all(within_class_products(U, c, v) == ref for v in c)


def test_canonicalize_rejects_repeated_eigenvalues():
    d = eigendecompose(matrix_view(make_cycle(3), "nlap"))
    with pytest.raises(InvalidArgument):
        canonicalize(d, P)


def test_certificate_shape_mismatch():
    a = canonicalize(np.eye(2), P)
    b = canonicalize(np.eye(3), P)
    with pytest.raises(InvalidArgument):
        certificates_equal(a, b)
    assert a != b


def test_certificate_json_roundtrip():
    cert = canonicalize(WORKED_U, P)
    back = CanonCertificate.from_dict(cert.to_dict())
    assert certificates_equal(cert, back)
    assert back.order.tolist() == cert.order.tolist()


# --- invariance and orbit membership -------------------------------------------


FIXTURES = simple_er_slices(12, seed=2) + path_slices()


@pytest.mark.parametrize("idx", range(len(FIXTURES)))
def test_invariance_100_transforms(idx):
    U = FIXTURES[idx].U
    ref = canonicalize(U, P)
    rng = np.random.default_rng(idx)
    for _ in range(100):
        assert certificates_equal(canonicalize(transformed(U, rng), P), ref)


@pytest.mark.parametrize("idx", range(len(FIXTURES)))
def test_orbit_membership(idx):
    U = FIXTURES[idx].U
    cert = canonicalize(U, P)
    back = np.empty_like(cert.values)
    back[cert.order] = cert.values
    back *= np.where(cert.sign == 1, -1.0, 1.0)
    assert np.array_equal(quantize(back, P), quantize(U, P))


def test_solve_feasibility_on_fully_kept_classes():
    from prismcanon import gf2

    for d in FIXTURES + [KSlice.from_matrix(WORKED_U)]:
        U = d.Uk if isinstance(d, KSlice) else d.U
        part = refine(partition(U, P), U, P)
        Q = quantize(U, P)
        sol = solve_signs(part, U, P)
        V = Q * np.where(sol.sign == 1, -1, 1)
        seen = gf2.EchelonBasis(U.shape[1])
        for c, K in zip(part.classes, part.supports(Q)):
            if K.size == 0:
                continue
            a0 = gf2.vec_from_bits(Q[c[0], K] < 0)
            diffs = gf2.BitMatrix(K.size, [gf2.vec_from_bits(Q[v, K] < 0) ^ a0 for v in c])
            T = gf2.parity_check(diffs)
            embedded = [sum(1 << int(K[j]) for j in range(K.size) if (r >> j) & 1) for r in T.rows]
            kept = [seen.add(e) for e in embedded]
            if all(kept):
                assert any(np.all(V[v, K] >= 0) for v in c)


# --- sign automorphisms --------------------------------------------------------


def c6_simple_slice():
    d = eigendecompose(matrix_view(make_cycle(6), "adjacency"))
    cols = [i for i, m in zip(np.cumsum(d.mults) - 1, d.mults) if m == 1]
    return d.U[:, cols]


AUTOMORPHIC = [d.U for d in path_slices()] + [c6_simple_slice()]


@pytest.mark.parametrize("idx", range(len(AUTOMORPHIC)))
def test_sign_automorphisms_are_sound(idx):
    U = AUTOMORPHIC[idx]
    kernel = sign_automorphisms(U, P)
    assert kernel.shape[0] >= 1
    ref = canonicalize(U, P)
    for a in kernel:
        flipped = U * np.where(a == 1, -1.0, 1.0)
        q1 = quantize(flipped, P)
        q0 = quantize(U, P)
        assert sorted(map(tuple, q1)) == sorted(map(tuple, q0))
        assert certificates_equal(canonicalize(flipped, P), ref)


# --- fast path -----------------------------------------------------------------


def test_fast_sign_matches_canonicalize_on_injective():
    hits = 0
    for d in simple_er_slices(40, seed=5):
        if is_injective(d.U, P):
            hits += 1
            assert certificates_equal(fast_sign(d.U, P), canonicalize(d.U, P))
            assert np.array_equal(fast_sign(d.U, P).sign, canonicalize(d.U, P).sign)
    assert hits > 10


# --- property-based ------------------------------------------------------------


@st.composite
def tied_matrices(draw):
    """Small integer matrices with many rows sharing an absolute-value signature."""
    k = draw(st.integers(1, 5))
    base = draw(arrays(np.int64, (draw(st.integers(1, 3)), k), elements=st.integers(0, 3)))
    reps = draw(st.lists(st.integers(1, 4), min_size=base.shape[0], max_size=base.shape[0]))
    rows = np.repeat(base, reps, axis=0)
    signs = draw(arrays(np.int64, rows.shape, elements=st.sampled_from([-1, 1])))
    return (rows * signs).astype(float)


@settings(max_examples=300, deadline=None)
@given(tied_matrices(), st.integers(0, 2**32 - 1))
def test_invariance_on_tied_integer_matrices(U, seed):
    rng = np.random.default_rng(seed)
    ref = canonicalize(U, P)
    for _ in range(5):
        assert certificates_equal(canonicalize(transformed(U, rng), P), ref)


@settings(max_examples=200, deadline=None)
@given(tied_matrices())
def test_kernel_elements_preserve_rows(U):
    Q = quantize(U, P)
    for a in sign_automorphisms(U, P):
        flipped = Q * np.where(a == 1, -1, 1)
        assert sorted(map(tuple, flipped)) == sorted(map(tuple, Q))


def test_row_multiset_equal_tolerates_reordering():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert row_multiset_equal(A, A[::-1] + 1e-9, 1e-6)
    assert not row_multiset_equal(A, A + 1e-3, 1e-6)
