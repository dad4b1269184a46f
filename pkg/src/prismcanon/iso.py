"""Isomorphism decisions from certificates, plus the two measurement harnesses."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateInput
from .graph import WeightedGraph, erdos_renyi, matrix_view
from .hybrid import canonicalize_hybrid
from .prism import (
    DEFAULT_PRECISION,
    canonicalize,
    certificates_equal,
    is_injective,
    partition,
    refine,
    row_multiset_equal,
    solve_signs,
)
from .spectral import eigendecompose, is_simple_spectrum

ISOMORPHIC = "isomorphic"
NON_ISOMORPHIC = "non_isomorphic"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class IsoResult:
    verdict: str
    reason: str
    hint: str | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def iso_test(
    g1: WeightedGraph,
    g2: WeightedGraph,
    tol: float = 1e-8,
    precision: int = DEFAULT_PRECISION,
    view: str = "adjacency",
) -> IsoResult:
    if g1.n != g2.n:
        return IsoResult(NON_ISOMORPHIC, "vertex counts differ")
    d1 = eigendecompose(matrix_view(g1, view), tol)
    d2 = eigendecompose(matrix_view(g2, view), tol)
    l1, l2 = np.sort(d1.expanded_lambdas()), np.sort(d2.expanded_lambdas())
    scale = max(1.0, float(np.abs(l1).max()), float(np.abs(l2).max()))
    if not np.allclose(l1, l2, rtol=0, atol=tol * scale):
        return IsoResult(NON_ISOMORPHIC, "spectra differ")
    if not (is_simple_spectrum(d1) and is_simple_spectrum(d2)):
        same = certificates_equal(canonicalize_hybrid(d1, precision), canonicalize_hybrid(d2, precision))
        hint = "hybrid certificates agree" if same else "hybrid certificates differ"
        return IsoResult(INCONCLUSIVE, "spectrum has repeated eigenvalues", hint)
    c1 = canonicalize(d1.as_slice(), precision)
    c2 = canonicalize(d2.as_slice(), precision)
    if certificates_equal(c1, c2):
        return IsoResult(ISOMORPHIC, "certificates agree")
    return IsoResult(NON_ISOMORPHIC, "certificates differ")


def simple_er_graph(rng: np.random.Generator, nmin: int, nmax: int, p: float, view: str, tol: float):
    """Draw ER graphs until one has a simple spectrum in ``view``."""
    while True:
        n = int(rng.integers(nmin, nmax + 1))
        seed = int(rng.integers(2**31))
        g = erdos_renyi(n, p, seed).to_weighted()
        try:
            M = matrix_view(g, view)
        except DegenerateInput:
            continue
        if is_simple_spectrum(eigendecompose(M, tol)):
            return seed, g, M


@dataclass
class EquivarianceReport:
    graphs: int
    trials: int
    failures: int = 0
    max_deviation: float = 0.0
    diagnostics: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _deviation(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.abs(A - B).max()) if A.size else 0.0


def run_equivariance(
    graphs: int = 200,
    trials: int = 5,
    atol: float = 1e-6,
    seed: int = 0,
    nmin: int = 16,
    nmax: int = 32,
    p: float = 0.3,
    view: str = "laplacian",
    tol: float = 1e-8,
    precision: int = DEFAULT_PRECISION,
    hybrid: bool = False,
) -> EquivarianceReport:
    """Relabel, re-decompose and re-canonicalize; compare canonical rows at ``atol``.

    With ``hybrid`` the corpus is not filtered for simple spectra and the
    repeated-eigenvalue canonicalization is used instead.
    """
    rng = np.random.default_rng(seed)
    canon = canonicalize_hybrid if hybrid else (lambda d, p: canonicalize(d.as_slice(), p))
    report = EquivarianceReport(graphs, trials)
    for _ in range(graphs):
        if hybrid:
            n = int(rng.integers(nmin, nmax + 1))
            gseed = int(rng.integers(2**31))
            M = matrix_view(erdos_renyi(n, p, gseed).to_weighted(), "adjacency")
        else:
            gseed, _, M = simple_er_graph(rng, nmin, nmax, p, view, tol)
        ref = canon(eigendecompose(M, tol), precision)
        for t in range(trials):
            perm = rng.permutation(M.shape[0])
            c = canon(eigendecompose(M[np.ix_(perm, perm)], tol), precision)
            dev = _deviation(ref.values, c.values)
            if dev > atol and not row_multiset_equal(ref.values, c.values, atol):
                report.failures += 1
                report.diagnostics.append({"graph_seed": gseed, "trial": t, "deviation": dev})
            report.max_deviation = max(report.max_deviation, dev)
    return report


@dataclass(frozen=True)
class RBoundRecord:
    seed: int
    n: int
    L: int
    r: int
    appended_rows: int
    relation_rank: int
    fast_sign: bool
    one_block: bool


@dataclass
class RBoundStats:
    records: list[RBoundRecord]
    skipped: int

    @property
    def rs(self) -> np.ndarray:
        return np.array([x.r for x in self.records])

    @property
    def median_r(self) -> float:
        return float(np.median(self.rs)) if self.records else float("nan")

    @property
    def frac_r0(self) -> float:
        return float(np.mean(self.rs == 0)) if self.records else float("nan")

    @property
    def frac_r_le4(self) -> float:
        return float(np.mean(self.rs <= 4)) if self.records else float("nan")

    @property
    def frac_one_block(self) -> float:
        return float(np.mean([x.one_block for x in self.records])) if self.records else float("nan")

    @property
    def row_bound_violations(self) -> int:
        """Graphs whose appended-row count exceeds ``n - L``."""
        return sum(x.appended_rows > x.r for x in self.records)

    @property
    def relation_bound_violations(self) -> int:
        """Graphs whose summed per-class relation rank exceeds ``n - L``."""
        return sum(x.relation_rank > x.r for x in self.records)

    def summary(self) -> dict:
        return {
            "graphs": len(self.records),
            "skipped": self.skipped,
            "median_r": self.median_r,
            "frac_r0": self.frac_r0,
            "frac_r_le4": self.frac_r_le4,
            "frac_one_block": self.frac_one_block,
            "max_r": int(self.rs.max()) if self.records else None,
            "max_appended_rows": max((x.appended_rows for x in self.records), default=None),
            "row_bound_violations": self.row_bound_violations,
            "relation_bound_violations": self.relation_bound_violations,
        }


def collect_rbound(
    count: int = 500,
    n: int = 24,
    p: float = 0.3,
    seed: int = 0,
    tol: float = 1e-6,
    precision: int = DEFAULT_PRECISION,
    view: str = "normalized_laplacian",
) -> RBoundStats:
    """Class counts and GF(2) system sizes over an ER corpus, full spectrum.

    Graphs with isolated vertices (undefined normalized Laplacian) or repeated
    eigenvalues are skipped and counted.
    """
    records = []
    skipped = 0
    for s in range(seed, seed + count):
        g = erdos_renyi(n, p, s).to_weighted()
        try:
            d = eigendecompose(matrix_view(g, view), tol)
        except DegenerateInput:
            skipped += 1
            continue
        if not is_simple_spectrum(d):
            skipped += 1
            continue
        sl = d.as_slice()
        part = refine(partition(sl, precision), sl, precision)
        sol = solve_signs(part, sl, precision)
        sizes = [len(c) for c in part.classes]
        records.append(
            RBoundRecord(
                seed=s,
                n=n,
                L=part.L,
                r=n - part.L,
                appended_rows=sol.appended_rows,
                relation_rank=sol.relation_rank,
                fast_sign=is_injective(sl, precision),
                one_block=sum(x > 1 for x in sizes) == 1,
            )
        )
    return RBoundStats(records, skipped)
