"""Canonical forms of graph eigendecompositions, CFI counterexamples and WL refinement."""

from .cfi import (
    CfiEncoding,
    CfiGraph,
    CfiMultigraphPair,
    build_cfi,
    build_multigraph_pair,
    check_pair,
    integral_encoding,
    verify_cfi_spectrum,
)
from .errors import (
    DegenerateInput,
    InternalError,
    InvalidArgument,
    NotApplicable,
    NumericFailure,
    PrismError,
    ResourceLimit,
)
from .graph import (
    BaseGraph,
    Multigraph,
    WeightedGraph,
    erdos_renyi,
    load_graph,
    make_cycle,
    make_named,
    make_path,
    make_random,
    matrix_view,
    random_cubic,
    save_graph,
)
from .hybrid import canonicalize_hybrid
from .iso import collect_rbound, iso_test, run_equivariance
from .prism import (
    CanonCertificate,
    Partition,
    canonicalize,
    certificates_equal,
    fast_sign,
    match,
    partition,
    refine,
    solve_signs,
)
from .spectral import EigDecomp, KSlice, eigendecompose, is_simple_spectrum, slice_k
from .wl import Coloring, WlVerdict, compare, wl1, wlk

__all__ = [name for name in dir() if not name.startswith("_")]
