"""Command-line front end.

Exit codes: 0 success or certificate, 2 verified negative (overlap, hole,
failed verification), 3 unknown or budget exhausted, 1 usage/internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import exactcover, lattice, plane, space, surface, unfold, workbench

OK, ERROR, NEGATIVE, UNKNOWN = 0, 1, 2, 3


class _Out:
    """Collects a result object and renders it as JSON or ``key<TAB>value`` text."""

    def __init__(self, args):
        self.args = args

    def emit(self, payload, text: str | None = None):
        if self.args.format == "json":
            body = json.dumps(payload, indent=1, sort_keys=True) + "\n"
        else:
            body = text if text is not None else _as_text(payload)
        if self.args.out:
            Path(self.args.out).write_text(body, encoding="utf-8")
        else:
            sys.stdout.write(body)


def _as_text(payload) -> str:
    if isinstance(payload, dict):
        lines = []
        for k in sorted(payload):
            v = payload[k]
            lines.append(f"{k}\t{json.dumps(v) if isinstance(v, (dict, list)) else v}")
        return "\n".join(lines) + "\n"
    if isinstance(payload, list):
        return "".join(json.dumps(x, sort_keys=True) + "\n" for x in payload)
    return f"{payload}\n"


def _figures(args) -> Path | None:
    if not args.figures:
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _read_polyform(path):
    """Polycube or polyomino file, told apart by the column count."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                dim = len(line.split())
                break
        else:
            raise lattice.LatticeError(f"{path}: no cells")
    return lattice.read_cells(path, dim)


# --------------------------------------------------------------------------
# subcommands

def cmd_enumerate(args, out):
    unfs = unfold.enumerate_unfoldings(args.dim, symmetry=args.symmetry)
    rows = [{"canonical_cells": [list(c) for c in u.cells], "tree_multiplicity": u.multiplicity, "id": u.id}
            for u in unfs.values()]
    text = f"count\t{len(rows)}\n" + "".join(f"{r['id']}\t{r['tree_multiplicity']}\n" for r in rows)
    out.emit(rows, text)
    return OK


def cmd_identify(args, out):
    cells = _read_polyform(args.polyform)
    dim = len(next(iter(cells)))
    key = lattice.canonical_key(cells, "full")
    info = {"cells": len(cells), "dim": dim, "id": unfold.unfolding_id(key),
            "canonical_cells": [list(c) for c in key]}
    if dim == 3:
        info["adjacency_pairs"] = len(lattice.adjacency_pairs(cells))
        info["exposed_faces"] = len(lattice.exposed_faces(cells))
        names = {lattice.canonical_key(unfold.dali_cross(), "full"): "dali-cross"}
        if len(cells) == 8:
            info["hypercube_unfolding"] = key in workbench.unfoldings(4)
            if unfold.l_footprint(cells) is not None:
                names[key] = "L"
        info["name"] = names.get(key)
    elif dim == 2 and len(cells) == 6:
        info["cube_unfolding"] = key in workbench.unfoldings(3)
    out.emit(info)
    return OK


def cmd_unfold(args, out):
    cells = lattice.read_pcube(args.polycube)
    g = surface.face_dual_graph(cells)
    if args.tree:
        tree = surface.parse_tree(g, Path(args.tree).read_text(encoding="utf-8"))
    else:
        tree = surface.sample_spanning_tree(g.n, g.edges, args.seed)
    lay = surface.unfold_surface(g, tree)
    if isinstance(lay, surface.Overlap):
        out.emit({"outcome": "overlap", "detail": lay.describe(g.faces), "seed": args.seed})
        return NEGATIVE
    poly = surface.layout_to_polyomino(lay)
    if isinstance(poly, surface.Holes):
        out.emit({"outcome": "hole", "enclosed": [list(c) for c in poly.cells], "seed": args.seed})
        return NEGATIVE
    result = {"outcome": "ok", "seed": args.seed, "squares": len(poly), "tree": surface.format_tree(g, tree)}
    if args.pomino:
        surface.write_layout(lay, args.pomino, str(args.pomino) + ".json")
        result["pomino"] = str(args.pomino)
    figs = _figures(args)
    if figs:
        from . import plotting
        result["figure"] = str(plotting.plot_layout(lay, figs / "layout.png"))
    out.emit(result)
    return OK


def cmd_tile2d(args, out):
    cells = lattice.read_pomino(args.polyomino)
    verdict, method, cert = plane.run_method(cells, args.method, args.max_period, args.budget)
    result = {"verdict": verdict, "method": method, "certificate": cert.to_json() if cert else None}
    if cert is not None:
        if args.svg:
            Path(args.svg).write_text(plane.render_tiling_svg(cells, cert, args.copies), encoding="utf-8")
            result["svg"] = args.svg
        figs = _figures(args)
        if figs:
            from . import plotting
            result["figure"] = str(plotting.plot_tiling_patch(cells, cert, figs / "tiling.png", args.copies))
    out.emit(result)
    return OK if verdict == "tiles" else UNKNOWN


def cmd_tile3d(args, out):
    if args.action == "verify":
        cells = lattice.read_pcube(args.polycube)
        packing = space.PeriodicPlacementSet.load(args.packing)
        try:
            ok, diag = space.verify_periodic_tiling(cells, packing)
        except space.VolumeError as exc:
            out.emit({"verified": False, "diagnostic": str(exc)})
            return NEGATIVE
        out.emit({"verified": ok, "diagnostic": diag})
        return OK if ok else NEGATIVE
    if args.action == "search":
        cells = lattice.read_pcube(args.polycube)
        try:
            found = space.search_lattice_tiling(cells, args.max_copies, args.max_basis,
                                                not args.no_rotations, budget=args.budget)
        except exactcover.SearchBudgetExceeded:
            out.emit({"verdict": "unknown", "reason": "budget exhausted"})
            return UNKNOWN
        if found is None:
            out.emit({"verdict": "unknown", "reason": "no lattice tiling within bounds"})
            return UNKNOWN
        if args.packing:
            found.save(args.packing)
        out.emit({"verdict": "tiles", "packing": found.to_json()})
        return OK
    if args.action == "dali":
        con = space.build_dali_packing()
        ok, _ = space.verify_periodic_tiling(unfold.dali_cross(), con.packing)
        result = {"verified": ok, "packing": con.packing.to_json(), "unit_offset": list(con.unit_offset),
                  "strip": list(con.strip), "spacing": list(con.spacing), "stacking": list(con.stacking),
                  "vertical_period_layers": con.vertical_period}
        if args.packing:
            con.packing.save(args.packing)
        figs = _figures(args)
        if figs:
            from . import plotting
            result["figures"] = [str(plotting.plot_heightmap(con.stacked_heightmap(k), figs / f"dali_layers{k}.png",
                                                             f"{k} cross-layers")) for k in (1, 2, 3, 4)]
        out.emit(result)
        return OK if ok else ERROR
    # lslab
    L, slab = workbench.designated_L()
    ok, _ = space.verify_periodic_tiling(slab.prototile, slab.packing)
    if args.packing:
        slab.packing.save(args.packing)
    out.emit({"verified": ok, "L": [list(c) for c in sorted(L)], "prototile": [list(c) for c in sorted(slab.prototile)],
              "packing": slab.packing.to_json(), "thickness": slab.thickness})
    return OK if ok else ERROR


def cmd_ddt(args, out):
    try:
        res = workbench.ddt_chain(args.dim, budget=args.budget or 10 ** 5)
    except workbench.UnsupportedDimension as exc:
        out.emit({"dim": args.dim, "error": str(exc)})
        return ERROR
    out.emit(res.to_json())
    return OK if isinstance(res, workbench.DdtCertificate) else UNKNOWN


def cmd_search(args, out):
    cells = lattice.read_pcube(args.polycube)
    seeds = range(args.seed, args.seed + args.seeds)
    rep = workbench.search_unfolding_tiler(cells, seeds, budget=args.budget)
    result = rep.to_json()
    figs = _figures(args)
    if figs and rep.ranked():
        from . import plotting
        best = rep.ranked()[0]
        result["figure"] = str(plotting.plot_polyomino(best.cells, figs / "best_candidate.png",
                                                       f"seed {best.seed} score {best.score:.3f}"))
    out.emit(result)
    if rep.certificates:
        return OK
    return UNKNOWN


def cmd_scan(args, out):
    table = workbench.scan_unfoldings_3d(args.max_copies, args.max_basis, args.budget)
    tiles = sum(v == "tiles" for v in table.values())
    text = f"tiles\t{tiles}\nunknown\t{len(table) - tiles}\n" + "".join(f"{k}\t{v}\n" for k, v in table.items())
    out.emit(table, text)
    return OK


def cmd_count_trees(args, out):
    cells = lattice.read_pcube(args.polycube)
    g = surface.face_dual_graph(cells)
    out.emit({"nodes": g.n, "edges": len(g.edges), "spanning_trees": str(surface.count_spanning_trees(g.n, g.edges))})
    return OK


def cmd_export_svg(args, out):
    cells = lattice.read_pomino(args.polyomino)
    verdict, method, cert = plane.run_method(cells, args.method, args.max_period, args.budget)
    if cert is None:
        out.emit({"verdict": verdict})
        return UNKNOWN
    svg = plane.render_tiling_svg(cells, cert, args.copies)
    Path(args.svg_out).write_text(svg, encoding="utf-8")
    out.emit({"verdict": verdict, "method": method, "svg": args.svg_out})
    return OK


def cmd_export_obj(args, out):
    cells = lattice.read_pcube(args.polycube)
    packing = space.PeriodicPlacementSet.load(args.packing)
    space.write_obj(args.obj_out, cells, packing)
    out.emit({"obj": args.obj_out, "copies": len(packing.placements)})
    return OK


# --------------------------------------------------------------------------

def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # repeated on every subcommand; the copies there must not clobber values
    # given before the subcommand name, hence SUPPRESS defaults
    def d(value):
        return argparse.SUPPRESS if suppress else value

    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--seed", type=int, default=d(0), help="first seed / sampling seed")
    g.add_argument("--budget", type=int, default=d(None), help="seeds or search nodes")
    g.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    g.add_argument("--format", choices=("json", "text"), default=d("json"))
    g.add_argument("--figures", default=d(None), help="directory for PNG figures")
    g.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return g


def build_parser() -> argparse.ArgumentParser:
    top, common = _global_flags(False), _global_flags(True)
    p = argparse.ArgumentParser(prog="hypertile", parents=[top], description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="distinct facet unfoldings of the d-cube")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--symmetry", choices=("full", "proper"), default="full")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("identify", parents=[common], help="canonical id and surface counts")
    s.add_argument("polyform")
    s.set_defaults(func=cmd_identify)

    s = sub.add_parser("unfold", parents=[common], help="edge-unfold a polycube surface")
    s.add_argument("--polycube", required=True)
    s.add_argument("--tree", help="tree file; default samples one from --seed")
    s.add_argument("--pomino", help="write the layout (.pomino plus .json sidecar)")
    s.set_defaults(func=cmd_unfold)

    s = sub.add_parser("tile2d", parents=[common], help="decide whether a polyomino tiles the plane")
    s.add_argument("--polyomino", required=True)
    s.add_argument("--method", choices=("bn", "conway", "torus", "auto"), default="auto")
    s.add_argument("--max-period", type=int, default=8)
    s.add_argument("--svg")
    s.add_argument("--copies", type=int, default=9)
    s.set_defaults(func=cmd_tile2d)

    s = sub.add_parser("tile3d", parents=[common], help="verify, search or build space tilings")
    s.add_argument("action", choices=("verify", "search", "dali", "lslab"))
    s.add_argument("--polycube")
    s.add_argument("--packing", help="packing JSON to read (verify) or write")
    s.add_argument("--max-copies", type=int, default=1)
    s.add_argument("--max-basis", type=int, default=8)
    s.add_argument("--no-rotations", action="store_true")
    s.set_defaults(func=cmd_tile3d)

    s = sub.add_parser("ddt", parents=[common], help="dimension-descending certificate chain")
    s.add_argument("--dim", type=int, required=True)
    s.set_defaults(func=cmd_ddt)

    s = sub.add_parser("search-unfolding", parents=[common], help="seeded search for plane-tiling unfoldings")
    s.add_argument("--polycube", required=True)
    s.add_argument("--seeds", type=int, default=1000, help="number of seeds starting at --seed")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("scan", parents=[common], help="lattice-tiling scan of the 261 unfoldings")
    s.add_argument("--max-copies", type=int, default=2)
    s.add_argument("--max-basis", type=int, default=8)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("count-trees", parents=[common], help="spanning trees of the surface dual graph")
    s.add_argument("--polycube", required=True)
    s.set_defaults(func=cmd_count_trees)

    s = sub.add_parser("export-svg", parents=[common], help="SVG patch of a plane tiling")
    s.add_argument("--polyomino", required=True)
    s.add_argument("--svg-out", required=True)
    s.add_argument("--method", choices=("bn", "conway", "torus", "auto"), default="auto")
    s.add_argument("--max-period", type=int, default=8)
    s.add_argument("--copies", type=int, default=9)
    s.set_defaults(func=cmd_export_svg)

    s = sub.add_parser("export-obj", parents=[common], help="OBJ mesh of a fundamental domain")
    s.add_argument("--polycube", required=True)
    s.add_argument("--packing", required=True)
    s.add_argument("--obj-out", required=True)
    s.set_defaults(func=cmd_export_obj)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args, _Out(args))
    except (lattice.LatticeError, plane.TilingError, surface.NonManifoldError, ValueError,
            OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
