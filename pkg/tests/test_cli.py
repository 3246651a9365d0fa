import json

import pytest

from hypertile import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def files(tmp_path):
    dali = tmp_path / "dali.pcube"
    dali.write_text("# dali cross\n0 0 0\n0 0 1\n0 0 2\n0 0 3\n1 0 2\n-1 0 2\n0 1 2\n0 -1 2\n")
    cross = tmp_path / "cross.pomino"
    cross.write_text("1 0\n0 1\n1 1\n2 1\n1 2\n1 3\n")
    u7 = tmp_path / "u.pomino"
    u7.write_text("0 0\n0 1\n0 2\n0 3\n0 4\n1 0\n1 4\n")
    return tmp_path, dali, cross, u7


def test_enumerate_json(capsys):
    code, out = run(capsys, "enumerate", "--dim", "3")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 11
    assert set(rows[0]) == {"canonical_cells", "tree_multiplicity", "id"}
    assert sum(r["tree_multiplicity"] for r in rows) == 384


def test_identify_and_count_trees(capsys, files):
    _, dali, *_ = files
    code, out = run(capsys, "identify", str(dali))
    info = json.loads(out)
    assert code == 0 and info["name"] == "dali-cross" and info["exposed_faces"] == 34
    code, out = run(capsys, "count-trees", "--polycube", str(dali))
    assert int(json.loads(out)["spanning_trees"]) >= 2 ** 34


def test_unfold_exit_codes(capsys, files):
    tmp, dali, *_ = files
    code, out = run(capsys, "unfold", "--polycube", str(dali), "--seed", "3")
    assert code == 2 and json.loads(out)["outcome"] == "overlap"
    code, out = run(capsys, "--seed", "3", "unfold", "--polycube", str(dali))
    assert code == 2
    for seed in range(100):
        code, out = run(capsys, "unfold", "--polycube", str(dali), "--seed", str(seed),
                        "--pomino", str(tmp / "lay.pomino"))
        if code == 0:
            assert json.loads(out)["squares"] == 34
            assert (tmp / "lay.pomino").exists() and (tmp / "lay.pomino.json").exists()
            break
    else:
        pytest.fail("no overlap-free seed below 100")


def test_tile2d_text_and_figures(capsys, files):
    tmp, _, cross, u7 = files
    code, out = run(capsys, "tile2d", "--polyomino", str(cross), "--format", "text",
                    "--svg", str(tmp / "c.svg"), "--figures", str(tmp / "figs"))
    assert code == 0
    fields = dict(line.split("\t", 1) for line in out.splitlines())
    assert fields["verdict"] == "tiles" and fields["method"] == "conway"
    assert (tmp / "c.svg").read_text().startswith("<svg")
    assert (tmp / "figs" / "tiling.png").stat().st_size > 0
    code, out = run(capsys, "tile2d", "--polyomino", str(u7), "--max-period", "4")
    assert code == 3 and json.loads(out)["verdict"] == "unknown"


def test_tile3d_round_trip_and_obj(capsys, files):
    tmp, dali, *_ = files
    pk = tmp / "dali.json"
    code, out = run(capsys, "tile3d", "dali", "--packing", str(pk), "--figures", str(tmp / "f"))
    assert code == 0 and json.loads(out)["verified"]
    assert len(list((tmp / "f").glob("dali_layers*.png"))) == 4
    code, out = run(capsys, "tile3d", "verify", "--polycube", str(dali), "--packing", str(pk))
    assert code == 0 and json.loads(out)["verified"]
    data = json.loads(pk.read_text())
    data["placements"][1]["t"] = [0, 0, 0]
    pk.write_text(json.dumps(data))
    code, out = run(capsys, "tile3d", "verify", "--polycube", str(dali), "--packing", str(pk))
    assert code == 2 and json.loads(out)["diagnostic"]
    code, _ = run(capsys, "tile3d", "search", "--polycube", str(dali), "--packing", str(tmp / "s.json"))
    assert code == 0
    code, out = run(capsys, "export-obj", "--polycube", str(dali), "--packing", str(tmp / "s.json"),
                    "--obj-out", str(tmp / "d.obj"))
    assert code == 0 and (tmp / "d.obj").read_text().count("\ng ") + (tmp / "d.obj").read_text().startswith("g ") >= 1


def test_tile3d_search_unknown(capsys, files):
    tmp, dali, *_ = files
    code, out = run(capsys, "tile3d", "search", "--polycube", str(dali), "--max-basis", "2")
    assert code == 3


def test_search_unfolding_and_report_file(capsys, files):
    tmp, dali, *_ = files
    out_path = tmp / "rep.json"
    code, _ = run(capsys, "search-unfolding", "--polycube", str(dali), "--seeds", "50", "--out", str(out_path))
    rep = json.loads(out_path.read_text())
    assert code == 3 and rep["seeds_tried"] == 50
    assert sum(rep["counts"].values()) == 50


def test_ddt_and_errors(capsys, files):
    tmp, *_ = files
    code, out = run(capsys, "ddt", "--dim", "5")
    assert code == 1 and "unsupported" in out
    code, _ = run(capsys, "tile3d", "verify", "--polycube", str(tmp / "missing.pcube"), "--packing", "x")
    assert code == 1
    code, _ = run(capsys, "no-such-command")
    assert code == 1


def test_export_svg(capsys, files):
    tmp, _, cross, _ = files
    code, out = run(capsys, "export-svg", "--polyomino", str(cross), "--svg-out", str(tmp / "x.svg"), "--copies", "4")
    assert code == 0 and (tmp / "x.svg").exists()
