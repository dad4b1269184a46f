import numpy as np

from prismcanon.cfi import build_cfi, build_multigraph_pair
from prismcanon.graph import Multigraph, erdos_renyi, make_cycle, make_named
from prismcanon.iso import (
    INCONCLUSIVE,
    ISOMORPHIC,
    NON_ISOMORPHIC,
    collect_rbound,
    iso_test,
    run_equivariance,
)


def test_k4_pair_is_non_isomorphic():
    pair = build_multigraph_pair(make_named("k4"))
    r = iso_test(pair.A0, pair.A1)
    assert r.verdict == NON_ISOMORPHIC
    assert r.reason == "certificates differ"
    assert iso_test(pair.A1, pair.A0).verdict == NON_ISOMORPHIC


def test_relabeled_copy_is_isomorphic():
    pair = build_multigraph_pair(make_named("k4"))
    perm = np.random.default_rng(1).permutation(16)
    r = iso_test(pair.A0, pair.A0.permuted(perm))
    assert r.verdict == ISOMORPHIC


def test_er_relabeling():
    rng = np.random.default_rng(4)
    hits = 0
    for seed in range(20):
        g = erdos_renyi(14, 0.35, seed).to_weighted()
        r = iso_test(g, g.permuted(rng.permutation(14)), view="laplacian")
        assert r.verdict in (ISOMORPHIC, INCONCLUSIVE)
        hits += r.verdict == ISOMORPHIC
    assert hits > 10


def test_spectra_and_sizes_decide_early():
    assert iso_test(make_cycle(5).to_weighted(), make_cycle(6).to_weighted()).reason == "vertex counts differ"
    a = erdos_renyi(10, 0.3, 0).to_weighted()
    b = erdos_renyi(10, 0.6, 0).to_weighted()
    assert iso_test(a, b).verdict == NON_ISOMORPHIC


def test_repeated_spectrum_is_inconclusive_with_hint():
    c3 = build_cfi(make_cycle(3), "even")
    g = Multigraph(c3.adjacency)
    r = iso_test(g, g, view="normalized_laplacian")
    assert r.verdict == INCONCLUSIVE
    assert r.hint == "hybrid certificates agree"
    assert "hint" in r.to_dict()


def test_small_equivariance_run():
    rep = run_equivariance(graphs=10, trials=3, seed=5)
    assert rep.failures == 0 and rep.max_deviation < 1e-6
    assert run_equivariance(graphs=10, trials=3, seed=5).to_dict() == rep.to_dict()


def test_small_rbound_run():
    stats = collect_rbound(count=30, n=12, seed=2)
    s = stats.summary()
    assert s["graphs"] + s["skipped"] == 30
    assert stats.relation_bound_violations == 0
    for rec in stats.records:
        assert rec.r == rec.n - rec.L
        assert rec.fast_sign == (rec.r == 0)
