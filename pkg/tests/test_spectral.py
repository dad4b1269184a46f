import numpy as np
import pytest

from prismcanon.errors import InvalidArgument
from prismcanon.graph import erdos_renyi, make_cycle, matrix_view
from prismcanon.spectral import (
    EigDecomp,
    dump_decomp,
    eigendecompose,
    group_eigenvalues,
    integer_spectrum_matches,
    is_simple_spectrum,
    slice_k,
)

from conftest import simple_er_slices


def test_identity_is_one_class():
    d = eigendecompose(np.eye(4))
    assert d.lambdas.tolist() == [1.0] and d.mults.tolist() == [4]
    assert not is_simple_spectrum(d)


def test_p2_adjacency():
    d = eigendecompose(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(d.lambdas, [-1, 1]) and d.mults.tolist() == [1, 1]
    sl = slice_k(d, 1)
    assert sl.k == 1 and np.allclose(sl.lambdas, [-1])


def test_c3_normalized_laplacian():
    d = eigendecompose(matrix_view(make_cycle(3), "nlap"))
    assert np.allclose(d.lambdas, [0, 1.5]) and d.mults.tolist() == [1, 2]
    assert not is_simple_spectrum(d)
    with pytest.raises(InvalidArgument):
        slice_k(d, 2)
    assert slice_k(d, 3).k == 3


def test_full_slice_is_identity():
    d = eigendecompose(matrix_view(erdos_renyi(10, 0.4, 2), "adj"))
    sl = slice_k(d, d.n)
    assert np.array_equal(sl.Uk, d.U) and np.array_equal(sl.mults, d.mults)


def test_rejects_asymmetric_and_bad_tol():
    with pytest.raises(InvalidArgument):
        eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidArgument):
        eigendecompose(np.eye(2), tol=0)
    with pytest.raises(InvalidArgument):
        eigendecompose(np.ones((2, 3)))


def test_gap_chaining_merges_chains():
    lam, m = group_eigenvalues([0.0, 0.5e-8, 1.0e-8, 1.0], 0.6e-8)
    assert m.tolist() == [3, 1]
    assert np.isclose(lam[0], 0.5e-8)


def test_corpus_invariants():
    for d in simple_er_slices(30, seed=4):
        assert np.allclose(d.U.T @ d.U, np.eye(d.n), atol=1e-8)
        assert np.all(np.diff(d.lambdas) > d.tol)
        assert d.mults.sum() == d.n
        M = d.reconstruct()
        assert np.allclose(M, M.T)


def test_reconstruction_error():
    rng = np.random.default_rng(0)
    for seed in range(20):
        M = matrix_view(erdos_renyi(int(rng.integers(8, 30)), 0.3, seed), "lap")
        d = eigendecompose(M)
        assert np.abs(d.reconstruct() - M).max() < 1e-6


def test_grouping_stable_across_tolerances():
    for seed in range(30):
        M = matrix_view(erdos_renyi(20, 0.3, seed), "adj")
        mults = {tuple(eigendecompose(M, tol).mults) for tol in (1e-6, 1e-8, 1e-10)}
        assert len(mults) == 1


def test_relabel_gives_same_columns_up_to_sign_and_rows(rng):
    for d in simple_er_slices(10, seed=8):
        perm = rng.permutation(d.n)
        M = d.reconstruct()
        d2 = eigendecompose(M[np.ix_(perm, perm)])
        for j in range(d.n):
            a = np.sort(np.abs(d.U[:, j]))
            b = np.sort(np.abs(d2.U[:, j]))
            assert np.allclose(a, b, atol=1e-8)


def test_integer_spectrum_check():
    d = eigendecompose(np.diag([3.0, 5.0, 7.0]))
    assert integer_spectrum_matches(d, [7, 3, 5])
    assert not integer_spectrum_matches(d, [3, 5, 8])


def test_dump_has_expected_keys():
    import json

    d = eigendecompose(np.eye(2))
    data = json.loads(dump_decomp(d))
    assert set(data) == {"n", "tol", "eigenvalues", "multiplicities", "U"}
    assert isinstance(d, EigDecomp)
