import pytest

from hypertile import lattice, plane, space, unfold, workbench

CUBE = frozenset({(0, 0, 0)})


def test_prefix_score_bounds():
    assert workbench.bn_prefix_score("EENWWS") == 1.0
    cross = plane.boundary_word([(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (1, 3)])
    s = workbench.bn_prefix_score(cross)
    assert 0 < s < 1
    assert workbench.bn_prefix_score("ENW") == 0.0


def test_score_one_exactly_when_bn(free_polyominoes):
    for p in free_polyominoes:
        w = plane.boundary_word(p)
        assert (workbench.bn_prefix_score(w) == 1.0) == (plane.bn_factorization(w) is not None)


def test_cube_search_finds_several_hexominoes(unfoldings3):
    rep = workbench.search_unfolding_tiler(CUBE, range(1000))
    assert rep.seeds_tried == 1000
    assert rep.overlap == rep.hole == rep.non_tiling == 0
    shapes = {lattice.canonical_key(c["cells"], "full") for c in rep.certificates}
    assert len(shapes) > 1 and shapes <= set(unfoldings3)
    for c in rep.certificates:
        assert plane.verify_certificate(frozenset(map(tuple, c["cells"])),
                                        plane.TilingCertificate.from_json(c["certificate"]))


def test_report_counts_and_determinism(dali):
    a = workbench.search_unfolding_tiler(dali, range(300))
    b = workbench.search_unfolding_tiler(dali, range(300))
    assert a.dumps() == b.dumps()
    assert a.overlap + a.hole + a.non_tiling + a.tiling == a.seeds_tried == 300
    scores = [c.score for c in a.nearly]
    assert scores == sorted(scores, reverse=True)
    assert all(len(c.cells) == 34 for c in a.nearly)


def test_budget_caps_seeds(dali):
    rep = workbench.search_unfolding_tiler(dali, range(100), budget=40)
    assert rep.seeds_tried == 40 and rep.exhausted


def test_ranked_puts_certificates_first(L):
    seed = workbench.L_WITNESS_SEEDS[0]
    rep = workbench.search_unfolding_tiler(L, [seed] + list(range(30)))
    ranked = rep.ranked()
    assert ranked[0].certified and ranked[0].seed == seed
    assert all(not c.certified for c in ranked[len(rep.certificates):])


def test_pinned_L_seeds_give_bn_34_ominoes(L):
    for seed in workbench.L_WITNESS_SEEDS:
        rep = workbench.search_unfolding_tiler(L, [seed], conway=False)
        assert rep.tiling == 1
        c = rep.certificates[0]
        assert c["method"] == "bn" and len(c["cells"]) == 34


def test_ddt_chain_dimension_three():
    chain = workbench.ddt_chain(3, budget=50)
    assert isinstance(chain, workbench.DdtCertificate) and chain.verify()
    assert len(chain.links[1].cells) == 6


def test_ddt_chain_dimension_four():
    chain = workbench.ddt_chain(4)
    assert chain.verify()
    assert chain.notes["seed"] == workbench.L_WITNESS_SEEDS[0]
    assert len(chain.links[0].cells) == 8 and len(chain.links[1].cells) == 34


def test_ddt_chain_rejects_unsupported():
    with pytest.raises(workbench.UnsupportedDimension, match="unsupported"):
        workbench.ddt_chain(5)


def test_ddt_chain_budget_failure_is_a_report():
    res = workbench.ddt_chain(4, seeds=range(5), budget=5)
    assert isinstance(res, workbench.DdtFailure)
    assert res.report.seeds_tried == 5


def test_designated_L(L):
    cand, slab = workbench.designated_L()
    assert cand == L
    assert space.verify_periodic_tiling(slab.prototile, slab.packing)[0]


def test_scan_small_bounds_sorted_and_verified(unfoldings4):
    table = workbench.scan_unfoldings_3d(1, 4, budget=500)
    assert list(table) == sorted(table) and len(table) == 261
    dali_id = unfold.unfolding_id(lattice.canonical_key(unfold.dali_cross(), "full"))
    assert table[dali_id] in ("tiles", "unknown")
