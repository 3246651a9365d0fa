import json
from itertools import combinations

import pytest

from hypertile import lattice, space, unfold
from hypertile.space import Placement3, PeriodicPlacementSet, VolumeError

CUBE = frozenset({(0, 0, 0)})
STD = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@pytest.fixture(scope="module")
def dali_build():
    return space.build_dali_packing()


@pytest.fixture(scope="module")
def slab():
    from conftest import L_CELLS
    return space.build_L_slab(L_CELLS)


def test_unit_cube_trivial_tiling():
    assert space.verify_periodic_tiling(CUBE, PeriodicPlacementSet(STD, [Placement3(0, (0, 0, 0))])) == (True, None)


def test_double_cover_reported():
    s = PeriodicPlacementSet(((2, 0, 0), (0, 1, 0), (0, 0, 1)), [Placement3(0, (0, 0, 0))] * 2)
    ok, diag = space.verify_periodic_tiling(CUBE, s)
    assert not ok and diag.startswith("double")


def test_volume_imbalance_rejected_before_cells():
    s = PeriodicPlacementSet(((2, 0, 0), (0, 1, 0), (0, 0, 1)), [Placement3(0, (0, 0, 0))])
    with pytest.raises(VolumeError):
        space.verify_periodic_tiling(CUBE, s)
    with pytest.raises(VolumeError):
        space.verify_periodic_tiling(CUBE, PeriodicPlacementSet(((1, 0, 0), (1, 0, 0), (0, 0, 1)), []))


def test_placement_rotation_is_proper():
    for i in range(24):
        assert lattice.determinant(Placement3(i, (0, 0, 0)).matrix()) == 1


def test_verdict_invariant_under_lattice_shift(dali_build, dali):
    s = dali_build.packing
    for v in s.basis:
        shifted = PeriodicPlacementSet(s.basis, [
            Placement3(p.rot, tuple(a + b for a, b in zip(p.t, v))) if k == 0 else p
            for k, p in enumerate(s.placements)])
        assert space.verify_periodic_tiling(dali, shifted)[0]
    nudged = PeriodicPlacementSet(s.basis, [Placement3(s.placements[0].rot, (9, 9, 9)), s.placements[1]])
    assert not space.verify_periodic_tiling(dali, nudged)[0]


def test_dali_unit(dali_build):
    unit = dali_build.unit_cells()
    assert len(unit) == 16
    assert {z + 1 for *_, z in unit} == {1, 2, 3}
    a, b = dali_build.unit
    assert not a & b
    # the two crosses are prone and opposing: one is the half-turn of the other
    assert lattice.congruent(a, b) and lattice.congruent(a, unfold.dali_cross())
    low = {(x, y) for x, y, z in unit if z == 0}
    high = {(x, y) for x, y, z in unit if z == 2}
    assert low == high and len(low) == 2


def test_dali_strip_and_layer(dali_build):
    strip = dali_build.cross_strip(5)
    flat = [c for copy in strip for c in copy]
    assert len(flat) == len(set(flat))
    assert set(space.heightmap(flat).values()) <= {2, 3}
    layer = dali_build.cross_layer(radius=2)
    flat = [c for copy in layer for c in copy]
    assert len(flat) == len(set(flat))


def test_dali_height_patterns(dali_build):
    two = dali_build.stacked_heightmap(2)
    three = dali_build.stacked_heightmap(3)
    four = dali_build.stacked_heightmap(4)
    assert space.find_pattern(two, (4, 3, 3, 3, 4), (2, 3, 3, 3, 2), shift=1)
    assert space.find_pattern(three, (5, 4, 4, 4, 5), (3, 4, 4, 4, 3), shift=-1)
    assert space.find_pattern(four, (6, 5, 5, 5, 6), (4, 5, 5, 5, 4), shift=1)
    # four layers on: same landscape exactly four higher
    eight = dali_build.stacked_heightmap(8, radius=8)
    inner = [(x, y) for x in range(-4, 5) for y in range(-4, 5)]
    assert all(eight[c] == four[c] + 4 for c in inner)
    assert dali_build.vertical_period == 4


def test_dali_packing_verifies_and_is_deterministic(dali_build, dali):
    assert space.verify_periodic_tiling(dali, dali_build.packing) == (True, None)
    assert len(dali_build.packing.placements) == 2
    assert space.build_dali_packing().packing == dali_build.packing


def test_L_slab(slab):
    assert space.verify_periodic_tiling(slab.prototile, slab.packing)[0]
    zs = {z for *_, z in slab.prototile}
    assert zs == {0, 1} and slab.thickness == 2
    assert slab.packing.basis[2] == (0, 0, 2)
    assert all(b[2] == 0 for b in slab.packing.basis[:2])
    copies = slab.nestled(5)
    assert len(copies) == 5
    assert all(not (a & b) for a, b in combinations(copies, 2))


def test_L_slab_rejects_bar():
    with pytest.raises(space.ConstructionError):
        space.build_L_slab([(0, 0, z) for z in range(8)])


def test_heightmap():
    assert space.heightmap([(0, 0, 0)]) == {(0, 0): 1}
    h = space.heightmap([(0, 0, 0), (0, 0, 4), (1, 0, 2)], region={(0, 0)})
    assert h == {(0, 0): 5}


@pytest.mark.parametrize("cells,copies,basis_max", [
    (CUBE, 1, 1),
    (frozenset((0, 0, z) for z in range(3)), 1, 3),
])
def test_search_trivial(cells, copies, basis_max):
    found = space.search_lattice_tiling(cells, copies, basis_max)
    assert found is not None and space.verify_periodic_tiling(cells, found)[0]


def test_search_bar_with_diagonal_basis_only():
    bar = frozenset((0, 0, z) for z in range(3))
    found = space.search_lattice_tiling(bar, 1, 3, allow_rotations=False)
    assert found.basis == ((1, 0, 0), (0, 1, 0), (0, 0, 3))


def test_search_finds_dali_within_construction_bounds(dali, dali_build):
    bound = max(abs(x) for v in lattice.Lattice(dali_build.packing.basis).hnf for x in v)
    found = space.search_lattice_tiling(dali, 2, bound)
    assert found is not None and space.verify_periodic_tiling(dali, found)[0]


def test_search_bounds_and_budget(dali):
    with pytest.raises(ValueError):
        space.search_lattice_tiling(dali, 65, 8)
    from hypertile.exactcover import SearchBudgetExceeded
    u = [(0, 0, 1), (0, 1, 1), (1, 1, 0), (1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 2), (2, 1, 1)]
    with pytest.raises(SearchBudgetExceeded):
        space.search_lattice_tiling(u, 2, 8, budget=50)


def test_hnf_enumeration():
    bases = list(space.hnf_bases_3d(4, 4))
    # number of index-4 sublattices of Z^3 is 35
    assert len(bases) == 35
    assert all(abs(lattice.determinant(b)) == 4 for b in bases)
    assert len(list(space.hnf_bases_2d(4))) == 7


def test_packing_json_round_trip(tmp_path, dali_build):
    path = tmp_path / "p.json"
    dali_build.packing.save(path)
    data = json.loads(path.read_text())
    assert set(data) == {"basis", "placements"}
    assert set(data["placements"][0]) == {"rot", "t"}
    assert PeriodicPlacementSet.load(path) == dali_build.packing
    data["placements"][0]["rot"] = 30
    with pytest.raises(ValueError):
        PeriodicPlacementSet.from_json(data)


def test_obj_export(tmp_path, dali_build, dali):
    path = tmp_path / "d.obj"
    space.write_obj(path, dali, dali_build.packing)
    lines = path.read_text().splitlines()
    assert sum(l.startswith("g ") for l in lines) == 2
    assert sum(l.startswith("f ") for l in lines) == 2 * 34
    n_verts = sum(l.startswith("v ") for l in lines)
    for l in lines:
        if l.startswith("f "):
            ids = [int(x) for x in l.split()[1:]]
            assert len(ids) == 4 and all(1 <= i <= n_verts for i in ids)


def test_reflections_rejected_unless_allowed():
    mirror = next(i for i, m in enumerate(lattice.proper_rotations(full=True)) if lattice.determinant(m) == -1)
    s = PeriodicPlacementSet(STD, [Placement3(mirror, (0, 0, 0), improper=True)])
    ok, diag = space.verify_periodic_tiling(CUBE, s)
    assert not ok and "reflection" in diag
    assert space.verify_periodic_tiling(CUBE, s, allow_reflections=True) == (True, None)
