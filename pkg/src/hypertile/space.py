"""Periodic tilings of 3-space by a single polycube.

A :class:`PeriodicPlacementSet` is a lattice basis plus the placed copies of
one fundamental domain.  :func:`verify_periodic_tiling` reduces every placed
cell modulo the lattice and demands an exact cover of the quotient torus.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator

from . import exactcover, lattice, unfold

Cell3 = tuple[int, int, int]
ROTATIONS = lattice.proper_rotations()
FULL_GROUP = lattice.proper_rotations(full=True)


class VolumeError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Placement3:
    rot: int          # index into proper_rotations() (or the 48-group if improper)
    t: Cell3
    improper: bool = False

    def matrix(self):
        return (FULL_GROUP if self.improper else ROTATIONS)[self.rot]

    def apply(self, cells) -> frozenset:
        m = self.matrix()
        return frozenset(
            tuple(a + b for a, b in zip(lattice.mat_vec(m, c), self.t)) for c in cells
        )


@dataclass
class PeriodicPlacementSet:
    basis: tuple[Cell3, Cell3, Cell3]
    placements: list[Placement3]

    @property
    def det(self) -> int:
        return lattice.determinant(self.basis)

    def copies(self, prototile) -> list[frozenset]:
        return [pl.apply(prototile) for pl in self.placements]

    def to_json(self) -> dict:
        return {
            "basis": [list(v) for v in self.basis],
            "placements": [{"rot": p.rot, "t": list(p.t)} for p in self.placements],
        }

    @classmethod
    def from_json(cls, d: dict) -> "PeriodicPlacementSet":
        basis = tuple(tuple(int(x) for x in v) for v in d["basis"])
        if len(basis) != 3 or any(len(v) != 3 for v in basis):
            raise ValueError("basis must be three 3-vectors")
        pls = []
        for p in d["placements"]:
            rot = int(p["rot"])
            if not 0 <= rot < len(ROTATIONS):
                raise ValueError(f"rotation index {rot} outside 0..23")
            pls.append(Placement3(rot, tuple(int(x) for x in p["t"])))
        return cls(basis, pls)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "PeriodicPlacementSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def verify_periodic_tiling(prototile, s: PeriodicPlacementSet,
                           allow_reflections: bool = False) -> tuple[bool, str | None]:
    """Exact-cover check of the quotient torus Z^3 / basis.

    Raises :class:`VolumeError` when ``|placements| * |prototile| != |det|``.
    Otherwise returns ``(ok, diagnostic)``; the diagnostic names the first
    doubly covered or uncovered residue.
    """
    prototile = lattice.validate(prototile)
    d = abs(s.det)
    if d == 0:
        raise VolumeError("basis is degenerate")
    if len(s.placements) * len(prototile) != d:
        raise VolumeError(
            f"{len(s.placements)} copies x {len(prototile)} cells != |det| = {d}"
        )
    if not allow_reflections:
        for pl in s.placements:
            if lattice.determinant(pl.matrix()) != 1:
                return False, f"placement {pl} uses a reflection"
    defect = lattice.cover_defect(s.basis, s.copies(prototile))
    if defect is None:
        return True, None
    kind, residue = defect
    return False, f"{kind} residue {residue}"


def placement_for(prototile, target) -> Placement3:
    """Proper placement carrying ``prototile`` onto the cell set ``target``."""
    target = frozenset(target)
    anchor = min(target)
    for i, m in enumerate(ROTATIONS):
        moved = frozenset(lattice.mat_vec(m, c) for c in prototile)
        t = tuple(a - b for a, b in zip(anchor, min(moved)))
        if lattice.translate(moved, t) == target:
            return Placement3(i, t)
    raise ConstructionError("target is not a proper copy of the prototile")


# --------------------------------------------------------------------------
# height maps

def heightmap(cells: Iterable[Cell3], region=None) -> dict[tuple[int, int], int]:
    """Top visible z-layer per column; layers are numbered from 1 (z = 0)."""
    h: dict[tuple[int, int], int] = {}
    for x, y, z in cells:
        if region is not None and (x, y) not in region:
            continue
        if z + 1 > h.get((x, y), -(1 << 60)):
            h[(x, y)] = z + 1
    return h


def find_pattern(h, column, neighbor, shift: int = 1):
    """First ``(x, y, side)`` where ``h`` reads ``column`` up the y axis at x
    and ``neighbor`` at ``x + side`` starting ``shift`` rows higher."""
    n = len(column)
    for x, y in sorted(h):
        if all(h.get((x, y + k)) == column[k] for k in range(n)):
            for side in (1, -1):
                if all(h.get((x + side, y + shift + k)) == neighbor[k] for k in range(len(neighbor))):
                    return x, y, side
    return None


# --------------------------------------------------------------------------
# Dali cross construction

TWO_LAYER = ((4, 3, 3, 3, 4), (2, 3, 3, 3, 2))
THREE_LAYER = ((5, 4, 4, 4, 5), (3, 4, 4, 4, 3))
FOUR_LAYER = ((6, 5, 5, 5, 6), (4, 5, 5, 5, 4))


def prone_cross() -> frozenset:
    """Dali cross lying on its side: tower along +y in z-layer 2, the two
    remaining arms directly below and above the third tower cube."""
    return frozenset([(0, y, 1) for y in range(4)] + [(1, 2, 1), (-1, 2, 1), (0, 2, 0), (0, 2, 2)])


@dataclass
class DaliConstruction:
    unit: tuple[frozenset, frozenset]
    unit_offset: tuple[int, int]
    strip: Cell3
    spacing: Cell3
    stacking: Cell3
    packing: PeriodicPlacementSet
    vertical_period: int = 0
    # pattern witnesses (x, y, side) recorded during the search
    witnesses: dict = field(default_factory=dict)

    def unit_cells(self) -> frozenset:
        return self.unit[0] | self.unit[1]

    def cross_strip(self, copies: int = 4) -> list[frozenset]:
        return [lattice.translate(c, _scale(self.strip, k)) for k in range(copies) for c in self.unit]

    def cross_layer(self, radius: int = 6, layer: int = 0) -> list[frozenset]:
        base = _scale(self.stacking, layer)
        out = []
        for i in range(-radius, radius + 1):
            for j in range(-radius, radius + 1):
                off = _vadd(_vadd(_scale(self.strip, i), _scale(self.spacing, j)), base)
                out.extend(lattice.translate(c, off) for c in self.unit)
        return out

    def stacked(self, layers: int, radius: int = 6) -> list[frozenset]:
        out = []
        for k in range(layers):
            out.extend(self.cross_layer(radius, k))
        return out

    def stacked_heightmap(self, layers: int, window: int = 8, radius: int = 6) -> dict:
        region = {(x, y) for x in range(-window, window + 1) for y in range(-window, window + 1)}
        cells = (c for copy in self.stacked(layers, radius) for c in copy)
        return heightmap(cells, region)


def _scale(v, k):
    return tuple(k * x for x in v)


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def hnf_bases_2d(index: int) -> Iterator[tuple[tuple[int, int], tuple[int, int]]]:
    for a in range(1, index + 1):
        if index % a:
            continue
        c = index // a
        for b in range(c):
            yield (a, b), (0, c)


def build_dali_packing(offset_range: int = 4) -> DaliConstruction:
    """Stage the Dali-cross packing and return it with its intermediates.

    A 2-cross unit is a prone cross plus its half-turn about z shifted by an
    in-plane offset.  Cross-layers repeat the unit on an in-plane lattice of
    index 16, and successive layers are shifted by a stacking vector with
    z-component 1.  Candidates are tried in order (most face contacts between
    the two crosses, offset, in-plane lattice, stacking shift); the first one
    whose 3-torus is exactly covered and whose stacked height maps show the
    two-, three- and four-layer patterns is returned.
    """
    proto = unfold.dali_cross()
    a = prone_cross()
    b = frozenset((-x, -y, z) for x, y, z in a)
    units = []
    for dx in range(-offset_range, offset_range + 1):
        for dy in range(-offset_range, offset_range + 1):
            q = lattice.translate(b, (dx, dy, 0))
            if q & a:
                continue
            contacts = sum(n in q for c in a for n in lattice.neighbors(c))
            units.append((-contacts, (dx, dy), q))
    units.sort(key=lambda u: (u[0], u[1]))
    for _, off, q in units:
        unit = (a, q)
        by_layer = {z: [c[:2] for c in a | q if c[2] == z] for z in (0, 1, 2)}
        for v1, v2 in hnf_bases_2d(16):
            plane = lattice.Lattice([v1, v2], 2)
            if any(len({plane.reduce(c) for c in cs}) != len(cs) for cs in by_layer.values()):
                continue
            for sx, sy in plane.residues():
                strip, spacing, stack = (*v1, 0), (*v2, 0), (sx, sy, 1)
                basis = (strip, spacing, stack)
                packing = PeriodicPlacementSet(basis, [placement_for(proto, a), placement_for(proto, q)])
                if lattice.cover_defect(basis, unit) is not None:
                    continue
                con = DaliConstruction(unit, off, *_short_basis(v1, v2), stack, packing)
                if _dali_patterns(con):
                    con.vertical_period = _vertical_period(plane, stack)
                    return con
    raise ConstructionError("no Dali-cross packing found; the search space is too small")


def _short_basis(v1, v2):
    """Strip and spacing vectors: a reduced basis of the in-plane lattice,
    strip first (the shorter one, preferring the y direction)."""
    u, v = v1, v2
    while True:
        if u[0] ** 2 + u[1] ** 2 > v[0] ** 2 + v[1] ** 2:
            u, v = v, u
        k = round((u[0] * v[0] + u[1] * v[1]) / (u[0] ** 2 + u[1] ** 2))
        if k == 0:
            break
        v = (v[0] - k * u[0], v[1] - k * u[1])
    if abs(u[1]) < abs(v[1]) and u[0] ** 2 + u[1] ** 2 == v[0] ** 2 + v[1] ** 2:
        u, v = v, u
    return (*u, 0), (*v, 0)


def _dali_patterns(con: DaliConstruction) -> bool:
    w = {}
    w[2] = find_pattern(con.stacked_heightmap(2), *TWO_LAYER, shift=1)
    w[3] = find_pattern(con.stacked_heightmap(3), *THREE_LAYER, shift=-1)
    w[4] = find_pattern(con.stacked_heightmap(4), *FOUR_LAYER, shift=1)
    con.witnesses = w
    return all(v is not None for v in w.values())


def _vertical_period(plane: lattice.Lattice, stack) -> int:
    for k in range(1, 65):
        if (k * stack[0], k * stack[1]) in plane:
            return k
    return 0


# --------------------------------------------------------------------------
# L slab

@dataclass
class LSlab:
    prototile: frozenset     # the L in slab orientation (z in {0, 1})
    packing: PeriodicPlacementSet
    nest: Cell3              # lattice vector along which copies nestle
    thickness: int = 2

    def nestled(self, copies: int = 5) -> list[frozenset]:
        base = self.packing.copies(self.prototile)
        return [lattice.translate(c, _scale(self.nest, k)) for k in range(copies) for c in base]


def build_L_slab(L, offset_range: int = 4, max_copies: int = 2) -> LSlab:
    """Tile a two-cube-thick slab with nestled copies of the L, then stack.

    The L is turned so its thin axis is z.  Fundamental domains with 1, then
    up to ``max_copies`` copies (rotations keeping the slab, offsets within
    ``offset_range``) are tried over every in-plane lattice of the right
    index; the slab stacking vector is (0, 0, 2).
    """
    L = lattice.validate(L)
    foot = unfold.l_footprint(L)
    if foot is None:
        raise ConstructionError("polycube is not an L candidate")
    axis, _ = foot
    to_z = next(m for m in ROTATIONS if lattice.mat_vec(m, _unit(axis)) in ((0, 0, 1), (0, 0, -1)))
    proto = lattice.normalize(lattice.transform(L, to_z))
    proto = frozenset(proto)
    keeps = [i for i, m in enumerate(ROTATIONS) if abs(m[2][2]) == 1]
    area = len(proto) // 2
    for k in range(1, max_copies + 1):
        for combo in _slab_combos(proto, keeps, k, offset_range):
            copies = [pl.apply(proto) for pl in combo]
            flat = [c for cp in copies for c in cp]
            if len(set(flat)) != len(flat):
                continue
            for v1, v2 in hnf_bases_2d(area * k):
                basis = ((*v1, 0), (*v2, 0), (0, 0, 2))
                if lattice.cover_defect(basis, copies) is None:
                    packing = PeriodicPlacementSet(basis, list(combo))
                    return LSlab(proto, packing, _nest_vector(proto, copies, basis))
    raise ConstructionError("no two-thick slab packing for this candidate")


def _unit(axis):
    v = [0, 0, 0]
    v[axis] = 1
    return tuple(v)


def _slab_combos(proto, keeps, k, r):
    """Placement tuples: the first copy fixed, the rest rotated within the
    slab and shifted in-plane."""
    first = Placement3(0, (0, 0, 0))
    if k == 1:
        yield (first,)
        return
    others = []
    for i in keeps:
        moved = Placement3(i, (0, 0, 0)).apply(proto)
        dz = -min(c[2] for c in moved)
        for dx, dy in product(range(-r, r + 1), repeat=2):
            others.append(Placement3(i, (dx, dy, dz)))
    for rest in product(others, repeat=k - 1):
        yield (first, *rest)


def _nest_vector(proto, copies, basis):
    """Shortest-contact lattice vector: the in-plane lattice vector giving the
    most face contacts between a copy and its translate."""
    best = None
    r = 4
    for i in range(-r, r + 1):
        for j in range(-r, r + 1):
            if (i, j) == (0, 0):
                continue
            v = _vadd(_scale(basis[0], i), _scale(basis[1], j))
            moved = lattice.translate(copies[0], v)
            if moved & copies[0]:
                continue
            contacts = sum(n in moved for c in copies[0] for n in lattice.neighbors(c))
            key = (-contacts, abs(v[0]) + abs(v[1]), v)
            if best is None or key < best[0]:
                best = (key, v)
    return best[1]


# --------------------------------------------------------------------------
# generic lattice search

def hnf_bases_3d(index: int, max_entry: int) -> Iterator[tuple[Cell3, Cell3, Cell3]]:
    """Upper-triangular Hermite bases ``(a,b,c),(0,d,e),(0,0,f)`` of the given
    index with pivots at most ``max_entry``."""
    for a in range(1, min(index, max_entry) + 1):
        if index % a:
            continue
        for d in range(1, min(index // a, max_entry) + 1):
            if (index // a) % d:
                continue
            f = index // (a * d)
            if f > max_entry:
                continue
            for b in range(d):
                for c in range(f):
                    for e in range(f):
                        yield (a, b, c), (0, d, e), (0, 0, f)


def search_lattice_tiling(p, max_copies: int = 1, max_basis: int = 8, allow_rotations: bool = True,
                          budget: int | None = None) -> PeriodicPlacementSet | None:
    """Exact-cover search for a periodic tiling with up to ``max_copies``
    copies per fundamental domain.

    Copy counts are tried in increasing order and, for each, Hermite bases in
    generation order; the first cover found is returned.  ``budget`` bounds
    the total exact-cover nodes; :class:`exactcover.SearchBudgetExceeded`
    propagates when it runs out.
    """
    p = lattice.validate(p)
    if max_copies * len(p) > 512:
        raise ValueError("search bounds exceeded (max_copies * |p| <= 512)")
    base = tuple(sorted(p))
    rots = range(len(ROTATIONS)) if allow_rotations else (0,)
    shapes = []
    seen = set()
    for i in rots:
        moved = lattice.normalize(Placement3(i, (0, 0, 0)).apply(base))
        if moved not in seen:
            seen.add(moved)
            shapes.append((i, moved))
    remaining = [budget] if budget is not None else None
    for k in range(1, max_copies + 1):
        for basis in hnf_bases_3d(k * len(p), max_basis):
            found = _lattice_cover(base, shapes, basis, remaining)
            if found is not None:
                return PeriodicPlacementSet(basis, found)
    return None


def _reducer(basis):
    """Fast residue map for a 3D upper-triangular Hermite basis."""
    (a, b, c), (_, d, e), (_, _, f) = lattice.Lattice(basis).hnf

    def reduce(x, y, z):
        q = x // a
        x, y, z = x - q * a, y - q * b, z - q * c
        q = y // d
        return x, y - q * d, (z - q * e) % f
    return reduce


def _lattice_cover(base, shapes, basis, remaining):
    reduce = _reducer(basis)
    residues = lattice.Lattice(basis).residues()
    column = {r: i for i, r in enumerate(residues)}
    rows, meta, seen = [], [], set()
    for i, shape in shapes:
        # injectivity modulo the lattice is translation invariant
        if len({reduce(*c) for c in shape}) != len(shape):
            continue
        # placement of the original prototile whose image is ``shape`` + t
        moved = Placement3(i, (0, 0, 0)).apply(base)
        lo = tuple(min(c[k] for c in moved) for k in range(3))
        for tx, ty, tz in residues:
            cols = frozenset(column[reduce(x + tx, y + ty, z + tz)] for x, y, z in shape)
            if cols in seen:
                continue
            seen.add(cols)
            rows.append(sorted(cols))
            meta.append(Placement3(i, (tx - lo[0], ty - lo[1], tz - lo[2])))
    if not rows:
        return None
    budget = None
    if remaining is not None:
        budget = remaining[0]
        if budget <= 0:
            raise exactcover.SearchBudgetExceeded("lattice search budget exhausted")
    stats = {"nodes": 0}
    try:
        sol = exactcover.first(len(column), rows, budget=budget, stats=stats)
    finally:
        if remaining is not None:
            remaining[0] -= stats["nodes"]
    if sol is None:
        return None
    return [meta[r] for r in sol]


# --------------------------------------------------------------------------
# export

def write_obj(path, prototile, s: PeriodicPlacementSet) -> None:
    """Wavefront OBJ of one fundamental domain, one group per copy; only the
    exposed faces of each copy are emitted."""
    verts: dict[tuple[int, int, int], int] = {}
    lines = ["# fundamental domain"]
    faces_out = []
    for idx, copy in enumerate(s.copies(prototile)):
        faces_out.append(f"g copy{idx}")
        for cell, d in lattice.exposed_faces(copy):
            quad = _face_quad(cell, lattice.DIRECTIONS[d])
            ids = []
            for v in quad:
                if v not in verts:
                    verts[v] = len(verts) + 1
                ids.append(verts[v])
            faces_out.append("f " + " ".join(str(i) for i in ids))
    lines += [f"v {x} {y} {z}" for (x, y, z), _ in sorted(verts.items(), key=lambda kv: kv[1])]
    lines += faces_out
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _face_quad(cell, n) -> list[Cell3]:
    axis = next(i for i in range(3) if n[i])
    u, v = [i for i in range(3) if i != axis]
    base = list(cell)
    if n[axis] > 0:
        base[axis] += 1
    corners = []
    for du, dv in ((0, 0), (1, 0), (1, 1), (0, 1)):
        c = list(base)
        c[u] += du
        c[v] += dv
        corners.append(tuple(c))
    # counterclockwise seen from outside
    if (n[axis] > 0) != ((v - u) % 3 == 1):
        corners.reverse()
    return corners
