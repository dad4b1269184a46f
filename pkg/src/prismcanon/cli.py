"""``prismcanon`` command line.

Exit codes: 0 indistinguishable / isomorphic / done, 1 distinguishable /
non-isomorphic / check failed, 2 usage or input error, 3 refused (non-simple
spectrum under ``--strict``, ``--fast`` on a non-injective signature, or an
inconclusive isomorphism verdict).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import cfi as cfi_mod
from .errors import InvalidArgument, NotApplicable, PrismError, ResourceLimit
from .graph import BaseGraph, graph_to_dict, load_graph, make_named, matrix_view
from .hybrid import canonicalize_hybrid
from .iso import INCONCLUSIVE, ISOMORPHIC, collect_rbound, iso_test, run_equivariance
from .prism import DEFAULT_PRECISION, canonicalize, fast_sign
from .spectral import EigDecomp, KSlice, decomp_to_dict, eigendecompose, slice_k
from .wl import TUPLE_BUDGET, compare

EXIT_OK, EXIT_DIFFERENT, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3


class _Refused(Exception):
    pass


def default_precision() -> int:
    raw = os.environ.get("PRISM_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise InvalidArgument(f"PRISM_PRECISION must be an integer, got {raw!r}") from None


def _check_config(args) -> None:
    if getattr(args, "precision", None) is None:
        args.precision = default_precision()
    if not 4 <= args.precision <= 12:
        raise InvalidArgument("precision must lie in [4, 12]")
    if args.tol is None:
        args.tol = getattr(args, "default_tol", 1e-8)
    if args.tol <= 0:
        raise InvalidArgument("tol must be positive")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=False)


def load_matrix(path: str) -> np.ndarray:
    """A matrix given as a JSON list of rows, or as whitespace/comma separated text."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("U", data.get("matrix"))
        M = np.array(data, dtype=float)
    except (json.JSONDecodeError, TypeError, ValueError):
        rows = [line.replace(",", " ").split() for line in text.splitlines() if line.strip()]
        try:
            M = np.array([[float(x) for x in r] for r in rows], dtype=float)
        except ValueError as exc:
            raise InvalidArgument(f"{path}: not a numeric matrix") from exc
    if M.ndim != 2 or M.size == 0:
        raise InvalidArgument(f"{path}: expected a non-empty 2-d matrix")
    return M


def load_base(source: str) -> BaseGraph:
    """A named base graph or a graph file with 0/1 weights and no self-loops."""
    if not Path(source).exists():
        return make_named(source)
    g = load_graph(source)
    A = np.asarray(g.weights)
    if not all(x in (0, 1) for x in A.ravel()) or any(A[i, i] for i in range(g.n)):
        raise InvalidArgument("base graph must be simple (0/1 weights, no self-loops)")
    edges = tuple((u, v) for u in range(g.n) for v in range(u + 1, g.n) if A[u, v])
    return BaseGraph(g.n, edges, name=Path(source).stem)


# --- subcommands ---------------------------------------------------------------


def cmd_canon(args) -> int:
    p = args.precision
    if args.raw_matrix:
        sl = KSlice.from_matrix(load_matrix(args.graph))
        if args.k is not None:
            sl = KSlice.from_matrix(sl.Uk[:, : args.k])
        cert = fast_sign(sl, p) if args.fast else canonicalize(sl, p)
        _emit(cert.to_json(), args.out)
        return EXIT_OK
    g = load_graph(args.graph)
    d = eigendecompose(matrix_view(g, args.matrix), args.tol)
    if args.dump_eig:
        Path(args.dump_eig).write_text(json.dumps(decomp_to_dict(d)) + "\n")
    if args.k is not None:
        sl = slice_k(d, args.k)
    else:
        sl = d.as_slice()
    if sl.is_simple():
        cert = fast_sign(sl, p) if args.fast else canonicalize(sl, p)
    elif args.strict:
        raise _Refused("spectrum has repeated eigenvalues (--strict)")
    elif args.fast:
        raise _Refused("--fast needs a simple spectrum")
    else:
        cert = canonicalize_hybrid(EigDecomp(sl.Uk, sl.lambdas, sl.mults, d.tol), p)
    _emit(cert.to_json(), args.out)
    return EXIT_OK


def _cfi_gen(args) -> int:
    g = cfi_mod.build_cfi(load_base(args.base), args.twist)
    data = graph_to_dict(g.to_weighted())
    data["fibers"] = [int(v) for v in g.fibers]
    data["labels"] = [g.label(i) for i in range(g.n)]
    _emit(_dumps(data), args.out)
    return EXIT_OK


def _cfi_encode(args) -> int:
    enc = cfi_mod.integral_encoding(cfi_mod.build_cfi(load_base(args.base), args.twist))
    text = enc.to_csv().rstrip("\n")
    _emit(text, args.out)
    return EXIT_OK


def _cfi_pair(args) -> int:
    base = load_base(args.base)
    pair = cfi_mod.build_multigraph_pair(base)
    prefix = args.out or f"cfi_{base.name or 'base'}"
    paths = {
        "A0": f"{prefix}_A0.json",
        "A1": f"{prefix}_A1.json",
        "sidecar": f"{prefix}_sidecar.json",
    }
    Path(paths["A0"]).write_text(_dumps(graph_to_dict(pair.A0)) + "\n")
    Path(paths["A1"]).write_text(_dumps(graph_to_dict(pair.A1)) + "\n")
    Path(paths["sidecar"]).write_text(pair.sidecar_json() + "\n")
    sys.stdout.write(_dumps(paths) + "\n")
    return EXIT_OK


def _cfi_spectrum(args) -> int:
    r = cfi_mod.verify_cfi_spectrum(load_base(args.base))
    out = {
        "base": r.base,
        "matches": r.matches,
        "simple": r.simple,
        "max_error": r.max_error,
        "observed": [round(x, 9) for x in r.observed],
    }
    _emit(_dumps(out), args.out)
    return EXIT_OK if r.matches else EXIT_DIFFERENT


def cmd_cfi(args) -> int:
    if args.action in ("pair", "spectrum"):
        base = load_base(args.base)
        if not base.is_regular(3):
            raise InvalidArgument(f"cfi {args.action} needs a 3-regular base")
    return {"gen": _cfi_gen, "encode": _cfi_encode, "pair": _cfi_pair, "spectrum": _cfi_spectrum}[
        args.action
    ](args)


def cmd_wl(args) -> int:
    v = compare(load_graph(args.g1), load_graph(args.g2), args.k, args.precision, args.budget)
    verdict = v.to_dict()
    verdict["verdict"] = "distinguishable" if v.distinguishable else "indistinguishable"
    _emit(_dumps(verdict), args.out)
    return EXIT_DIFFERENT if v.distinguishable else EXIT_OK


def cmd_iso(args) -> int:
    r = iso_test(load_graph(args.g1), load_graph(args.g2), args.tol, args.precision, args.matrix)
    _emit(_dumps(r.to_dict()), args.out)
    if r.verdict == ISOMORPHIC:
        return EXIT_OK
    if r.verdict == INCONCLUSIVE:
        return EXIT_REFUSED
    return EXIT_DIFFERENT


def cmd_equivariance(args) -> int:
    rep = run_equivariance(
        graphs=args.graphs,
        trials=args.trials,
        atol=args.atol,
        seed=args.seed,
        tol=args.tol,
        precision=args.precision,
        hybrid=args.hybrid,
    )
    _emit(_dumps(rep.to_dict()), args.out)
    return EXIT_OK if rep.failures == 0 else EXIT_DIFFERENT


def cmd_stats(args) -> int:
    if args.corpus != "er":
        raise InvalidArgument("only the 'er' corpus is available")
    stats = collect_rbound(count=args.count, n=args.n, p=args.p, seed=args.seed, tol=args.tol, precision=args.precision)
    _emit(_dumps(stats.summary()), args.out)
    return EXIT_OK


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="decimal digits kept when quantizing (default 8, or $PRISM_PRECISION)")
    common.add_argument("--tol", type=float, default=None, help="eigenvalue grouping tolerance (default 1e-8; 1e-6 for stats)")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="prismcanon", description="Canonical forms of graph eigendecompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("canon", parents=[common], help="canonicalize a graph's eigenvectors")
    c.add_argument("graph", help="graph JSON / edge list, or a matrix file with --raw-matrix")
    c.add_argument("--matrix", default="adj", choices=["adj", "lap", "nlap"])
    c.add_argument("--k", type=int, help="keep the first k eigenvectors")
    c.add_argument("--raw-matrix", action="store_true", help="treat the file as the eigenvector matrix itself")
    c.add_argument("--fast", action="store_true", help="require the injective-signature shortcut")
    c.add_argument("--strict", action="store_true", help="refuse repeated eigenvalues")
    c.add_argument("--dump-eig", metavar="PATH", help="also write the eigendecomposition as JSON")
    c.set_defaults(func=cmd_canon)

    f = sub.add_parser("cfi", parents=[common], help="CFI graphs, encodings and multigraph pairs")
    f.add_argument("action", choices=["gen", "encode", "pair", "spectrum"])
    f.add_argument("--base", required=True, help="k4, petersen, cube, cN, or a graph file")
    f.add_argument("--twist", default="even", choices=["even", "odd"])
    f.set_defaults(func=cmd_cfi)

    w = sub.add_parser("wl", parents=[common], help="compare two graphs with k-WL")
    w.add_argument("--k", type=int, default=1)
    w.add_argument("--budget", type=int, default=TUPLE_BUDGET, help="maximum number of tuples")
    w.add_argument("g1")
    w.add_argument("g2")
    w.set_defaults(func=cmd_wl)

    i = sub.add_parser("iso", parents=[common], help="isomorphism test via certificates")
    i.add_argument("--matrix", default="adj", choices=["adj", "lap", "nlap"])
    i.add_argument("g1")
    i.add_argument("g2")
    i.set_defaults(func=cmd_iso)

    e = sub.add_parser("equivariance", parents=[common], help="relabel-and-redecompose experiment")
    e.add_argument("--graphs", type=int, default=200)
    e.add_argument("--trials", type=int, default=5)
    e.add_argument("--atol", type=float, default=1e-6)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--hybrid", action="store_true", help="unfiltered corpus, repeated-eigenvalue path")
    e.set_defaults(func=cmd_equivariance)

    s = sub.add_parser("stats", parents=[common], help="corpus statistics")
    s.add_argument("which", choices=["rbound"])
    s.add_argument("--corpus", default="er")
    s.add_argument("--count", type=int, default=500)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--n", type=int, default=24)
    s.add_argument("--p", type=float, default=0.3)
    s.set_defaults(func=cmd_stats, default_tol=1e-6)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_config(args)
        return args.func(args)
    except (_Refused, NotApplicable) as exc:
        print(f"prismcanon: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (PrismError, ValueError, OSError) as exc:
        if isinstance(exc, ResourceLimit):
            print(f"prismcanon: resource limit: {exc}", file=sys.stderr)
        else:
            print(f"prismcanon: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
