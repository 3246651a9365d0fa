"""Surface dual graphs of polycubes and their edge-unfoldings.

Faces are ``(cell, direction letter)`` pairs as produced by
:func:`lattice.exposed_faces`; node ``i`` of a :class:`FaceDualGraph` is the
``i``-th face in that order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from . import lattice
from .lattice import DIR_NAMES, DIRECTIONS, VEC_TO_DIR

Face = tuple[tuple[int, int, int], str]


class NonManifoldError(ValueError):
    pass


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _neg(v):
    return (-v[0], -v[1], -v[2])


def tangent_dirs(direction: str) -> list[str]:
    """The four directions orthogonal to ``direction``, in direction-index order."""
    n = DIRECTIONS[direction]
    return [t for t in DIR_NAMES if not any(a and b for a, b in zip(DIRECTIONS[t], n))]


def surface_edge_rule(cells, face: Face, edge_dir: str) -> Face:
    """The other exposed face sharing the edge of ``face`` on side ``edge_dir``.

    Concave fold when the diagonal cell is occupied, coplanar continuation when
    the side cell is, otherwise a convex fold around the same cube.
    """
    cell, d = face
    n, t = DIRECTIONS[d], DIRECTIONS[edge_dir]
    side = _add(cell, t)
    diag = _add(side, n)
    if diag in cells:
        if side not in cells:
            raise NonManifoldError(f"edge pinch between {cell} and {diag}")
        return (diag, VEC_TO_DIR[_neg(t)])
    if side in cells:
        return (side, d)
    return (cell, edge_dir)


def fold_kind(cells, face: Face, edge_dir: str) -> str:
    cell, d = face
    side = _add(cell, DIRECTIONS[edge_dir])
    if _add(side, DIRECTIONS[d]) in cells:
        return "concave"
    return "flat" if side in cells else "convex"


def check_manifold(cells) -> None:
    """Raise :class:`NonManifoldError` on an edge or vertex pinch."""
    cells = set(cells)
    for c in cells:
        for a in range(3):
            for b in range(a + 1, 3):
                for sa in (-1, 1):
                    for sb in (-1, 1):
                        da = [0, 0, 0]
                        da[a] = sa
                        db = [0, 0, 0]
                        db[b] = sb
                        diag = _add(_add(c, da), db)
                        if diag in cells and _add(c, da) not in cells and _add(c, db) not in cells:
                            raise NonManifoldError(f"edge pinch between {c} and {diag}")
    vertices = {_add(c, (i, j, k)) for c in cells for i in (0, 1) for j in (0, 1) for k in (0, 1)}
    for v in sorted(vertices):
        block = [(v[0] - 1 + i, v[1] - 1 + j, v[2] - 1 + k) for i in (0, 1) for j in (0, 1) for k in (0, 1)]
        full = [b for b in block if b in cells]
        empty = [b for b in block if b not in cells]
        if not full or not empty:
            continue
        if not lattice.is_connected(full) or not lattice.is_connected(empty):
            raise NonManifoldError(f"vertex pinch at {v}")


@dataclass(frozen=True)
class FaceDualGraph:
    cells: frozenset
    faces: tuple[Face, ...]
    edges: tuple[tuple[int, int], ...]
    # (node, edge_dir) -> neighbor node
    across: dict

    @property
    def n(self) -> int:
        return len(self.faces)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def adjacency(self) -> dict[int, list[int]]:
        adj = {i: [] for i in range(self.n)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_connected(self) -> bool:
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == self.n


def face_dual_graph(cells) -> FaceDualGraph:
    cells = lattice.validate(cells)
    check_manifold(cells)
    faces = tuple(lattice.exposed_faces(cells))
    index = {f: i for i, f in enumerate(faces)}
    across = {}
    edges = set()
    for i, f in enumerate(faces):
        for t in tangent_dirs(f[1]):
            j = index[surface_edge_rule(cells, f, t)]
            across[(i, t)] = j
            edges.add((min(i, j), max(i, j)))
    return FaceDualGraph(cells, faces, tuple(sorted(edges)), across)


# --------------------------------------------------------------------------
# spanning trees

def laplacian(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    lap = [[0] * n for _ in range(n)]
    for a, b in edges:
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    return lap


def bareiss_determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def count_spanning_trees(n: int, edges: Iterable[tuple[int, int]]) -> int:
    """Kirchhoff count: determinant of the reduced Laplacian."""
    if n <= 1:
        return 1
    lap = laplacian(n, edges)
    return bareiss_determinant([row[1:] for row in lap[1:]])


def brute_force_tree_count(n: int, edges: Sequence[tuple[int, int]]) -> int:
    """Count spanning trees by testing every (n-1)-subset of edges."""
    total = 0
    for subset in combinations(edges, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for a, b in subset:
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        total += ok
    return total


class LCG:
    """64-bit LCG, top 32 bits out; ``below(k)`` is ``next() % k``."""

    MUL = 6364136223846793005
    INC = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.state * self.MUL + self.INC) & self.MASK
        return self.state >> 32

    def below(self, k: int) -> int:
        return self.next() % k


def sample_spanning_tree(n: int, edges: Iterable[tuple[int, int]], seed: int) -> tuple[tuple[int, int], ...]:
    """Uniform spanning tree via Wilson's loop-erased random walk.

    Node 0 is the root; walks start from the remaining nodes in index order
    and step to a neighbor chosen from the sorted adjacency list.
    """
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    for v in adj.values():
        v.sort()
    rng = LCG(seed)
    in_tree = [False] * n
    in_tree[0] = True
    nxt = [-1] * n
    for start in range(1, n):
        u = start
        while not in_tree[u]:
            nbrs = adj[u]
            nxt[u] = nbrs[rng.below(len(nbrs))]
            u = nxt[u]
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u]
    return tuple(sorted((min(i, nxt[i]), max(i, nxt[i])) for i in range(1, n)))


def is_spanning_tree(n: int, tree: Iterable[tuple[int, int]]) -> bool:
    tree = list(tree)
    if len(tree) != n - 1:
        return False
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in tree:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


# --------------------------------------------------------------------------
# unrolling
#
# Geometry uses doubled coordinates so cube corners, face centers and edge
# midpoints are all integral.  A placement is an affine map x -> R x + s that
# carries a face into the plane z = const with its outward normal to +z.

@dataclass(frozen=True)
class Square:
    pos: tuple[int, int]
    rotation: int   # quarter turns taking the face's first tangent to east
    flipped: bool   # True if the face would land outward-normal down


@dataclass
class PlanarLayout:
    cells: frozenset
    faces: tuple[Face, ...]
    squares: tuple[Square, ...]

    def positions(self) -> frozenset:
        return frozenset(s.pos for s in self.squares)


@dataclass
class Overlap:
    face_a: int
    face_b: int
    pos: tuple[int, int]

    def describe(self, faces) -> str:
        return f"faces {faces[self.face_a]} and {faces[self.face_b]} overlap at {self.pos}"


@dataclass
class Holes:
    cells: tuple[tuple[int, int], ...]


def _rot_mat_to(n, t):
    """Proper rotation sending n -> +z and t -> +x."""
    for m in lattice.proper_rotations():
        if lattice.mat_vec(m, n) == (0, 0, 1) and lattice.mat_vec(m, t) == (1, 0, 0):
            return m
    raise AssertionError("unreachable")


def _hinge(parent_dir: str, child_dir: str, edge_point):
    """Affine map (R, s) in doubled coords rotating the child face about the
    shared edge so its normal matches the parent's."""
    n, m = DIRECTIONS[parent_dir], DIRECTIONS[child_dir]
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    if n == m:
        return ident, (0, 0, 0)
    # rotation about axis a = m x n by 90 degrees takes m to n
    rot = next(r for r in lattice.proper_rotations()
               if lattice.mat_vec(r, m) == n and lattice.mat_vec(r, _cross(m, n)) == _cross(m, n))
    rp = lattice.mat_vec(rot, edge_point)
    return rot, tuple(e - r for e, r in zip(edge_point, rp))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _compose(outer, inner):
    (r1, s1), (r2, s2) = outer, inner
    r = lattice.mat_mul(r1, r2)
    s = tuple(a + b for a, b in zip(lattice.mat_vec(r1, s2), s1))
    return r, s


def _apply(aff, p):
    r, s = aff
    return tuple(a + b for a, b in zip(lattice.mat_vec(r, p), s))


def _center2(face: Face):
    c, d = face
    n = DIRECTIONS[d]
    return tuple(2 * x + 1 + k for x, k in zip(c, n))


def _edge_point2(face: Face, edge_dir: str):
    c, d = face
    n, t = DIRECTIONS[d], DIRECTIONS[edge_dir]
    return tuple(2 * x + 1 + a + b for x, a, b in zip(c, n, t))


def unfold_surface(g: FaceDualGraph, tree: Iterable[tuple[int, int]]) -> PlanarLayout | Overlap:
    """Unroll the faces of ``g`` along a spanning tree.

    Depth-first from node 0, children visited in direction-index order of the
    edge they hang from.  Returns the first collision as an :class:`Overlap`.
    """
    tree_set = {(min(a, b), max(a, b)) for a, b in tree}
    if not is_spanning_tree(g.n, tree_set):
        raise ValueError("not a spanning tree of the dual graph")
    faces = g.faces
    root = faces[0]
    n0 = DIRECTIONS[root[1]]
    t0 = DIRECTIONS[tangent_dirs(root[1])[0]]
    r0 = _rot_mat_to(n0, t0)
    c0 = lattice.mat_vec(r0, _center2(root))
    # root center lands on doubled (1, 1, 1): square (0, 0)
    aff0 = (r0, (1 - c0[0], 1 - c0[1], 1 - c0[2]))
    placed: dict[int, tuple] = {0: aff0}
    owner: dict[tuple[int, int], int] = {}
    squares: dict[int, Square] = {}

    def record(i, aff):
        c = _apply(aff, _center2(faces[i]))
        pos = ((c[0] - 1) // 2, (c[1] - 1) // 2)
        if pos in owner:
            return Overlap(owner[pos], i, pos)
        owner[pos] = i
        n = lattice.mat_vec(aff[0], DIRECTIONS[faces[i][1]])
        t = lattice.mat_vec(aff[0], DIRECTIONS[tangent_dirs(faces[i][1])[0]])
        quarter = {(1, 0, 0): 0, (0, 1, 0): 1, (-1, 0, 0): 2, (0, -1, 0): 3}[t]
        squares[i] = Square(pos, quarter, n != (0, 0, 1))
        return None

    record(0, aff0)
    # preorder DFS; entries are (child, parent, edge side on the parent)
    stack = _children(g, 0, tree_set, placed)[::-1]
    while stack:
        j, i, t = stack.pop()
        hinge = _hinge(faces[i][1], faces[j][1], _edge_point2(faces[i], t))
        placed[j] = _compose(placed[i], hinge)
        bad = record(j, placed[j])
        if bad is not None:
            return bad
        stack.extend(_children(g, j, tree_set, placed)[::-1])
    return PlanarLayout(g.cells, faces, tuple(squares[i] for i in range(g.n)))


def _children(g, i, tree_set, placed):
    out = []
    for t in tangent_dirs(g.faces[i][1]):
        j = g.across[(i, t)]
        if j not in placed and (min(i, j), max(i, j)) in tree_set:
            out.append((j, i, t))
    return out


def layout_to_polyomino(layout: PlanarLayout | Iterable[tuple[int, int]]):
    """Occupied squares, or :class:`Holes` listing enclosed empty cells.

    The complement is flood-filled 4-connectedly from outside the bounding
    box, so an empty cell reachable only through a corner counts as enclosed.
    """
    cells = layout.positions() if isinstance(layout, PlanarLayout) else frozenset(layout)
    enclosed = enclosed_cells(cells)
    if enclosed:
        return Holes(tuple(sorted(enclosed)))
    return cells


def enclosed_cells(cells) -> set[tuple[int, int]]:
    cells = set(cells)
    xs = [c[0] for c in cells]
    ys = [c[1] for c in cells]
    x0, x1, y0, y1 = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
    outside = {(x0, y0)}
    stack = [(x0, y0)]
    while stack:
        x, y = stack.pop()
        for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if x0 <= nx <= x1 and y0 <= ny <= y1 and (nx, ny) not in cells and (nx, ny) not in outside:
                outside.add((nx, ny))
                stack.append((nx, ny))
    return {(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)} - cells - outside


# --------------------------------------------------------------------------
# files

def cube_indices(cells) -> dict:
    return {c: i for i, c in enumerate(sorted(cells))}


def face_id(face: Face, index: dict) -> str:
    return f"{index[face[0]]}:{face[1]}"


def format_tree(g: FaceDualGraph, tree: Iterable[tuple[int, int]]) -> str:
    index = cube_indices(g.cells)
    lines = [f"{face_id(g.faces[a], index)} {face_id(g.faces[b], index)}" for a, b in sorted(tree)]
    return "\n".join(lines) + "\n"


def parse_tree(g: FaceDualGraph, text: str) -> tuple[tuple[int, int], ...]:
    order = sorted(g.cells)
    node = {f: i for i, f in enumerate(g.faces)}
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        ends = []
        for token in line.split():
            cube, _, d = token.partition(":")
            try:
                face = (order[int(cube)], d)
            except (ValueError, IndexError):
                raise ValueError(f"line {lineno}: bad face id {token}") from None
            if face not in node:
                raise ValueError(f"line {lineno}: {token} is not an exposed face")
            ends.append(node[face])
        if len(ends) != 2:
            raise ValueError(f"line {lineno}: expected two faces")
        a, b = ends
        out.append((min(a, b), max(a, b)))
    return tuple(sorted(out))


def layout_sidecar(layout: PlanarLayout) -> dict:
    index = cube_indices(layout.cells)
    return {
        "squares": [
            {"x": s.pos[0], "y": s.pos[1], "cube": index[f[0]], "face": f[1], "rotation": s.rotation}
            for f, s in sorted(zip(layout.faces, layout.squares), key=lambda fs: fs[1].pos)
        ]
    }


def write_layout(layout: PlanarLayout, pomino_path, sidecar_path) -> None:
    lattice.write_cells(pomino_path, layout.positions(), comment="edge-unfolding layout")
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        json.dump(layout_sidecar(layout), fh, indent=1)
        fh.write("\n")

