import numpy as np
import pytest

from prismcanon.graph import erdos_renyi, make_path, matrix_view
from prismcanon.spectral import eigendecompose, is_simple_spectrum

# 4x4 worked example: two rows share |sig| (1,1,2,1), two share (1,0,1,2)
WORKED_U = np.array(
    [
        [1, 1, 2, 1],
        [-1, 0, -1, -2],
        [-1, -1, -2, -1],
        [-1, 0, 1, 2],
    ],
    dtype=float,
)
WORKED_CANON = np.array(
    [
        [1, 1, 2, 1],
        [1, 0, 1, 2],
        [1, 0, -1, -2],
        [-1, -1, -2, -1],
    ]
)

# C3 integral encodings, columns e01 e02 e12 | e01 e02 e12 | v0 v1 v2
C3_EVEN = np.array(
    [
        [-1, -1, 0, -1, -1, 0, 1, 1, 1],
        [1, 1, 0, 1, 1, 0, 1, 1, 1],
        [-1, 0, -1, 1, 0, -1, 1, -1, 1],
        [1, 0, 1, -1, 0, 1, 1, -1, 1],
        [0, -1, -1, 0, 1, 1, 1, 0, -2],
        [0, 1, 1, 0, -1, -1, 1, 0, -2],
    ]
)
C3_ODD = C3_EVEN.copy()
C3_ODD[0] = [1, -1, 0, 1, -1, 0, 1, 1, 1]
C3_ODD[1] = [-1, 1, 0, -1, 1, 0, 1, 1, 1]


def simple_er_slices(count, seed=0, n_range=(6, 18), p=0.35, view="laplacian"):
    """Eigendecompositions of ER graphs with simple spectra, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(*n_range))
        g = erdos_renyi(n, p, int(rng.integers(2**31)))
        d = eigendecompose(matrix_view(g, view))
        if is_simple_spectrum(d):
            out.append(d)
    return out


def path_slices(lengths=(4, 5, 6, 7, 9)):
    """Paths have simple spectra and a reflection automorphism."""
    return [eigendecompose(matrix_view(make_path(n), "adjacency")) for n in lengths]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
