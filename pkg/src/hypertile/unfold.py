"""Facet unfoldings of the d-cube.

Facets of the d-cube are labelled by signed axes ``(axis, sign)``.  A facet
unfolding is a spanning tree of the facet adjacency graph; it is realised by
rolling a d-dimensional die over the hyperplane ``x_d = 0``, one cell per
facet touching the floor.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import lattice

Facet = tuple[int, int]  # (axis, +1 | -1)
Edge = tuple[int, int]   # indices into FacetGraph.nodes

MIN_DIM, MAX_DIM = 2, 6


class UnfoldError(RuntimeError):
    pass


@dataclass(frozen=True)
class FacetGraph:
    dim: int
    nodes: tuple[Facet, ...]
    edges: tuple[Edge, ...]

    def degree(self, i: int) -> int:
        return sum(i in e for e in self.edges)


def facet_graph(d: int) -> FacetGraph:
    """Cocktail-party graph on the 2d facets; opposite facets are not adjacent."""
    if not MIN_DIM <= d <= MAX_DIM:
        raise ValueError(f"dimension {d} outside [{MIN_DIM}, {MAX_DIM}]")
    nodes = tuple((axis, sign) for axis in range(d) for sign in (-1, 1))
    edges = tuple(
        (i, j)
        for i in range(len(nodes))
        for j in range(i + 1, len(nodes))
        if nodes[i][0] != nodes[j][0]
    )
    return FacetGraph(d, nodes, edges)


def facet_label(f: Facet) -> str:
    return f"{'+' if f[1] > 0 else '-'}e{f[0] + 1}"


# --------------------------------------------------------------------------
# spanning trees

def spanning_trees(n_nodes: int, edges: Iterable[Edge], reverse: bool = False) -> Iterator[tuple[Edge, ...]]:
    """Every spanning tree exactly once, by include/exclude recursion over the
    edge list.

    An edge is included when it joins two components and excluded only when
    the remaining edges can still connect the graph.  Order is deterministic;
    ``reverse`` walks the edge list backwards.
    """
    edges = list(edges)
    if reverse:
        edges.reverse()
    m = len(edges)
    need = n_nodes - 1
    if n_nodes == 1:
        yield ()
        return

    def find(parent, x):
        while parent[x] != x:
            x = parent[x]
        return x

    def can_span(parent, start):
        p = list(parent)
        comps = len({find(p, x) for x in range(n_nodes)})
        for k in range(start, m):
            a, b = find(p, edges[k][0]), find(p, edges[k][1])
            if a != b:
                p[a] = b
                comps -= 1
                if comps == 1:
                    return True
        return comps == 1

    chosen: list[Edge] = []

    def rec(k, parent):
        if len(chosen) == need:
            yield tuple(chosen)
            return
        if m - k < need - len(chosen):
            return
        a, b = find(parent, edges[k][0]), find(parent, edges[k][1])
        if a != b:
            child = list(parent)
            child[a] = b
            chosen.append(edges[k])
            yield from rec(k + 1, child)
            chosen.pop()
        if can_span(parent, k + 1):
            yield from rec(k + 1, parent)

    yield from rec(0, list(range(n_nodes)))


def facet_trees(g: FacetGraph, reverse: bool = False) -> Iterator[tuple[Edge, ...]]:
    return spanning_trees(len(g.nodes), g.edges, reverse=reverse)


# --------------------------------------------------------------------------
# rolling

def _roll(frame: tuple[tuple[int, int], ...], axis: int, sign: int, d: int):
    """Quarter turn about the ridge shared with the floor facet.

    ``frame[j] = (world_axis, world_sign)`` is where body axis ``j`` points.
    World direction ``sign * e_axis`` goes to the floor normal -e_d and the
    floor normal goes to ``-sign * e_axis``.
    """
    down = d - 1
    out = []
    for wa, ws in frame:
        if wa == axis:
            out.append((down, -sign * ws))
        elif wa == down:
            out.append((axis, sign * ws))
        else:
            out.append((wa, ws))
    return tuple(out)


def unfold_tree(tree: Iterable[Edge], d: int, root: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Roll the d-cube along ``tree`` and return one cell per facet.

    Cells live in Z^(d-1) and are returned in facet-index order of
    ``facet_graph(d).nodes``.  The root facet (default -e_d) sits at the
    origin; a frame records the world axis and sign of every body axis.
    """
    g = facet_graph(d)
    nodes = g.nodes
    if root is None:
        root = nodes.index((d - 1, -1))
    adj: dict[int, list[int]] = {i: [] for i in range(len(nodes))}
    for a, b in tree:
        if nodes[a][0] == nodes[b][0]:
            raise UnfoldError(f"facets {facet_label(nodes[a])} and {facet_label(nodes[b])} are opposite")
        adj[a].append(b)
        adj[b].append(a)
    frame = tuple((j, 1) for j in range(d))
    ra, rs = nodes[root]
    if (ra, rs) != (d - 1, -1):
        # any proper signed permutation sending the root normal to -e_d
        frame = _roll(frame, ra, rs, d) if ra != d - 1 else tuple(
            (j, -1) if j in (0, d - 1) else (j, 1) for j in range(d))
    place = {root: ((0,) * (d - 1), frame)}
    stack = [root]
    while stack:
        f = stack.pop()
        cell, frame = place[f]
        for h in sorted(adj[f]):
            if h in place:
                continue
            ha, hs = nodes[h]
            wa, ws = frame[ha]
            sign = hs * ws
            if wa == d - 1:
                raise UnfoldError(f"facet {facet_label(nodes[h])} is not adjacent on the floor")
            new_cell = list(cell)
            new_cell[wa] += sign
            place[h] = (tuple(new_cell), _roll(frame, wa, sign, d))
            stack.append(h)
    if len(place) != len(nodes):
        raise UnfoldError("tree does not span the facet graph")
    cells = tuple(place[i][0] for i in range(len(nodes)))
    seen: dict[tuple[int, ...], int] = {}
    for i, c in enumerate(cells):
        if c in seen:
            raise UnfoldError(
                f"placement collision between facets {facet_label(nodes[seen[c]])} and {facet_label(nodes[i])}"
            )
        seen[c] = i
    return cells


# --------------------------------------------------------------------------
# enumeration

@dataclass
class Unfolding:
    cells: tuple[tuple[int, ...], ...]   # canonical, sorted
    multiplicity: int = 0
    example_tree: tuple[Edge, ...] = field(default=())

    @property
    def id(self) -> str:
        return unfolding_id(self.cells)


def unfolding_id(cells) -> str:
    return hashlib.sha256(lattice.format_cells(cells).encode("utf-8")).hexdigest()


def enumerate_unfoldings(d: int, symmetry: str = "full", reverse: bool = False,
                         trees: Iterable[tuple[Edge, ...]] | None = None) -> dict[tuple, Unfolding]:
    """Distinct facet unfoldings keyed by canonical cell tuple, with the number
    of spanning trees producing each one."""
    if not MIN_DIM <= d <= 5:
        raise ValueError(f"enumeration supports 2 <= d <= 5, got {d}")
    g = facet_graph(d)
    if trees is None:
        trees = facet_trees(g, reverse=reverse)
    raw_cache: dict[tuple, tuple] = {}
    out: dict[tuple, Unfolding] = {}
    for t in trees:
        raw = lattice.normalize(unfold_tree(t, d))
        key = raw_cache.get(raw)
        if key is None:
            key = lattice.canonical_key(raw, symmetry)
            raw_cache[raw] = key
        u = out.get(key)
        if u is None:
            u = out[key] = Unfolding(key, 0, t)
        u.multiplicity += 1
    return dict(sorted(out.items()))


def merge(parts: Iterable[dict[tuple, Unfolding]]) -> dict[tuple, Unfolding]:
    """Union of partial enumerations (for sharded runs)."""
    total: dict[tuple, Unfolding] = {}
    for part in parts:
        for key, u in part.items():
            if key in total:
                total[key].multiplicity += u.multiplicity
                total[key].example_tree = min(total[key].example_tree, u.example_tree)
            else:
                total[key] = Unfolding(u.cells, u.multiplicity, u.example_tree)
    return dict(sorted(total.items()))


def multiplicity_counter(unfs: dict[tuple, Unfolding]) -> Counter:
    return Counter({k: u.multiplicity for k, u in unfs.items()})


# --------------------------------------------------------------------------
# named unfoldings

def dali_cross() -> frozenset:
    tower = [(0, 0, z) for z in range(4)]
    arms = [(1, 0, 2), (-1, 0, 2), (0, 1, 2), (0, -1, 2)]
    return frozenset(tower + arms)


def straight_arms(cells) -> tuple[int, int] | None:
    """Arm lengths ``(a, b)`` if ``cells`` is two orthogonal straight arms
    sharing one corner cell, else ``None``."""
    cells = set(cells)
    for corner in sorted(cells):
        arms = []
        for axis in range(3):
            for step in (-1, 1):
                n = 1
                c = list(corner)
                while True:
                    c[axis] += step
                    if tuple(c) not in cells:
                        break
                    n += 1
                if n > 1:
                    arms.append((axis, n))
        if len(arms) == 2 and arms[0][0] != arms[1][0]:
            a, b = arms[0][1], arms[1][1]
            if a + b - 1 == len(cells):
                return a, b
    return None


def find_L_candidates(unfoldings: dict[tuple, Unfolding] | None = None, strict: bool = False) -> list[frozenset]:
    """Hypercube unfoldings shaped like an L.

    ``strict`` asks for two straight orthogonal arms sharing a corner.  No
    octocube unfolding has that shape (a rolled die repeats a facet after four
    steps), so the default reading is an L whose arms are two-cube-thick slabs:
    the polycube is two cubes thick along one axis, and its footprint along
    that axis is an L of two straight arms meeting at a corner.
    """
    if unfoldings is None:
        unfoldings = enumerate_unfoldings(4)
    out = []
    for key in unfoldings:
        cells = frozenset(key)
        if strict:
            if straight_arms(cells) is not None:
                out.append(cells)
        elif l_footprint(cells) is not None:
            out.append(cells)
    return out


def l_footprint(cells) -> tuple[int, tuple[int, int]] | None:
    """``(thin_axis, arm_lengths)`` when the polycube is two cubes thick along
    ``thin_axis`` and its projection along it is a two-armed L."""
    lo, hi = lattice.bounding_box(cells)
    for axis in range(3):
        if hi[axis] - lo[axis] != 1:
            continue
        proj = {tuple(x for i, x in enumerate(c) if i != axis) for c in cells}
        flat = {(a, b, 0) for a, b in proj}
        arms = straight_arms(flat)
        if arms is not None and min(arms) > 1:
            return axis, arms
    return None
