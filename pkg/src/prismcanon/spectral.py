"""Symmetric eigendecomposition with tolerance-based eigenvalue grouping."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, NumericFailure

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class KSlice:
    """First ``k`` eigenvectors with their grouped eigenvalues.

    ``lambdas`` may be empty when the slice was built from a raw matrix with no
    spectrum attached.
    """

    Uk: np.ndarray
    lambdas: np.ndarray
    mults: np.ndarray

    @property
    def n(self) -> int:
        return self.Uk.shape[0]

    @property
    def k(self) -> int:
        return self.Uk.shape[1]

    def is_simple(self) -> bool:
        return bool(np.all(self.mults == 1))

    def expanded_lambdas(self) -> np.ndarray:
        if self.lambdas.size == 0:
            return self.lambdas
        return np.repeat(self.lambdas, self.mults)

    @classmethod
    def from_matrix(cls, U) -> "KSlice":
        """Treat ``U`` as a simple-spectrum slice with unknown eigenvalues."""
        U = np.array(U, dtype=float)
        if U.ndim != 2:
            raise InvalidArgument("expected a 2-d matrix")
        return cls(U, np.empty(0), np.ones(U.shape[1], dtype=np.int64))


@dataclass(frozen=True)
class EigDecomp:
    """``(U, lambdas, mults)``: eigenvectors in columns, ascending eigenvalue order."""

    U: np.ndarray
    lambdas: np.ndarray
    mults: np.ndarray
    tol: float = DEFAULT_TOL

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def expanded_lambdas(self) -> np.ndarray:
        return np.repeat(self.lambdas, self.mults)

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.expanded_lambdas()) @ self.U.T

    def as_slice(self) -> KSlice:
        return KSlice(self.U, self.lambdas, self.mults)

    def class_columns(self) -> list[np.ndarray]:
        """Column indices of each eigenspace, in eigenvalue order."""
        bounds = np.concatenate([[0], np.cumsum(self.mults)])
        return [np.arange(bounds[i], bounds[i + 1]) for i in range(len(self.mults))]


def group_eigenvalues(values, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Gap-chain sorted eigenvalues into classes; each class is reported by its mean."""
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        return np.empty(0), np.empty(0, dtype=np.int64)
    breaks = np.flatnonzero(np.diff(values) > tol) + 1
    groups = np.split(values, breaks)
    return np.array([g.mean() for g in groups]), np.array([len(g) for g in groups], dtype=np.int64)


def eigendecompose(M, tol: float = DEFAULT_TOL) -> EigDecomp:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgument(f"expected a square matrix, got {M.shape}")
    if not tol > 0:
        raise InvalidArgument("tol must be positive")
    if not np.array_equal(M, M.T):
        # exact symmetry is expected from graph views; tolerate round-off only
        if not np.allclose(M, M.T, rtol=0, atol=1e-12 * max(1.0, np.abs(M).max())):
            raise InvalidArgument("matrix is not symmetric")
        M = (M + M.T) / 2
    if not np.all(np.isfinite(M)):
        raise NumericFailure("matrix has non-finite entries")
    try:
        w, U = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure(str(exc)) from exc
    lambdas, mults = group_eigenvalues(w, tol)
    return EigDecomp(U, lambdas, mults, tol)


def is_simple_spectrum(d: EigDecomp | KSlice) -> bool:
    return bool(np.all(np.asarray(d.mults) == 1))


def slice_k(d: EigDecomp, k: int) -> KSlice:
    if not 1 <= k <= d.n:
        raise InvalidArgument(f"k must lie in [1, {d.n}], got {k}")
    bounds = np.cumsum(d.mults)
    if k not in bounds:
        raise InvalidArgument(
            f"k={k} splits an eigenvalue multiplicity class; class boundaries are {bounds.tolist()}"
        )
    r = int(np.searchsorted(bounds, k)) + 1
    return KSlice(d.U[:, :k], d.lambdas[:r], d.mults[:r])


def integer_spectrum_matches(d: EigDecomp, exact) -> bool:
    """Check float eigenvalues against an exact integer list after rounding."""
    got = np.rint(d.expanded_lambdas()).astype(object)
    want = sorted(int(x) for x in exact)
    if len(got) != len(want):
        return False
    if not np.allclose(d.expanded_lambdas(), np.array(want, dtype=float), rtol=1e-9, atol=1e-6):
        return False
    return [int(x) for x in got] == want


def decomp_to_dict(d: EigDecomp, digits: int = 12) -> dict:
    return {
        "n": d.n,
        "tol": d.tol,
        "eigenvalues": [round(float(x), digits) for x in d.lambdas],
        "multiplicities": [int(m) for m in d.mults],
        "U": [[round(float(x), digits) for x in row] for row in d.U],
    }


def dump_decomp(d: EigDecomp, digits: int = 12) -> str:
    return json.dumps(decomp_to_dict(d, digits))
