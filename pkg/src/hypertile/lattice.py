"""Integer-lattice primitives: cells, signed-permutation symmetries, polyforms.

A polyform (polycube or polyomino) is a ``frozenset`` of integer tuples.  All
helpers here are dimension-generic unless their name says otherwise, which lets
the tesseract unfolder reuse them in Z^2, Z^3 and Z^4.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Sequence

Cell = tuple[int, ...]
Polyform = frozenset  # frozenset[Cell]

# Axis-direction table for surface faces.  Index order is the tie-breaker used
# everywhere a deterministic face order is needed.
DIRECTIONS: dict[str, Cell] = {
    "F": (0, -1, 0),
    "L": (-1, 0, 0),
    "K": (0, 1, 0),
    "R": (1, 0, 0),
    "B": (0, 0, -1),
    "T": (0, 0, 1),
}
DIR_NAMES = tuple(DIRECTIONS)
DIR_INDEX = {name: i for i, name in enumerate(DIR_NAMES)}
VEC_TO_DIR = {v: k for k, v in DIRECTIONS.items()}


class LatticeError(ValueError):
    pass


# --------------------------------------------------------------------------
# symmetry groups

def _det(m: Sequence[Sequence[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * _det(minor)
    return total


@lru_cache(maxsize=None)
def signed_permutations(dim: int, proper: bool = True) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All dim x dim signed permutation matrices, identity first.

    With ``proper=True`` only determinant +1 matrices are returned.
    """
    out = []
    for perm in permutations(range(dim)):
        for signs in product((1, -1), repeat=dim):
            m = tuple(
                tuple(signs[r] if c == perm[r] else 0 for c in range(dim))
                for r in range(dim)
            )
            if proper and _det(m) != 1:
                continue
            out.append(m)
    ident = tuple(tuple(int(r == c) for c in range(dim)) for r in range(dim))
    out.remove(ident)
    return (ident, *out)


def proper_rotations(full: bool = False) -> list[tuple[tuple[int, ...], ...]]:
    """The 24 rotation matrices of the cube (48 with reflections if ``full``).

    The order of this list is stable; packing files index into it.
    """
    return list(signed_permutations(3, proper=not full))


def mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def mat_vec(m, v) -> Cell:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in m)


def determinant(m) -> int:
    return _det([list(r) for r in m])


# --------------------------------------------------------------------------
# polyforms

def polyform(cells: Iterable[Sequence[int]]) -> frozenset:
    out = frozenset(tuple(int(x) for x in c) for c in cells)
    if not out:
        raise LatticeError("empty polyform")
    dims = {len(c) for c in out}
    if len(dims) != 1:
        raise LatticeError(f"mixed cell dimensions {sorted(dims)}")
    return out


def neighbors(cell: Cell) -> list[Cell]:
    out = []
    for axis in range(len(cell)):
        for step in (-1, 1):
            c = list(cell)
            c[axis] += step
            out.append(tuple(c))
    return out


def is_connected(cells: Iterable[Cell]) -> bool:
    cells = set(cells)
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        for n in neighbors(stack.pop()):
            if n in cells and n not in seen:
                seen.add(n)
                stack.append(n)
    return len(seen) == len(cells)


def validate(cells: Iterable[Cell]) -> frozenset:
    """Return ``cells`` as a polyform, raising if empty or disconnected."""
    p = polyform(cells)
    if not is_connected(p):
        raise LatticeError("polyform is not face-connected")
    return p


def translate(cells: Iterable[Cell], offset: Sequence[int]) -> frozenset:
    return frozenset(tuple(a + b for a, b in zip(c, offset)) for c in cells)


def normalize(cells: Iterable[Cell]) -> tuple[Cell, ...]:
    """Translate so the minimum corner is the origin; return sorted cells."""
    cells = list(cells)
    dim = len(cells[0])
    lo = [min(c[i] for c in cells) for i in range(dim)]
    return tuple(sorted(tuple(c[i] - lo[i] for i in range(dim)) for c in cells))


def transform(cells: Iterable[Cell], m) -> frozenset:
    return frozenset(mat_vec(m, c) for c in cells)


@lru_cache(maxsize=None)
def _perm_form(dim: int, proper: bool) -> tuple[tuple[tuple[int, int], ...], ...]:
    # row r of a signed permutation has one entry: (column, sign)
    return tuple(
        tuple(next((c, row[c]) for c in range(dim) if row[c]) for row in m)
        for m in signed_permutations(dim, proper)
    )


def images(cells: Iterable[Cell], symmetry: str = "proper") -> list[tuple[Cell, ...]]:
    """Normalized images of ``cells`` under every group element."""
    cells = list(cells)
    dim = len(cells[0])
    out = []
    for rows in _perm_form(dim, _proper(symmetry)):
        moved = [tuple(s * c[k] for k, s in rows) for c in cells]
        lo = [min(m[i] for m in moved) for i in range(dim)]
        out.append(tuple(sorted(tuple(m[i] - lo[i] for i in range(dim)) for m in moved)))
    return out


def _proper(symmetry: str) -> bool:
    if symmetry not in ("proper", "full"):
        raise LatticeError(f"unknown symmetry {symmetry!r}")
    return symmetry == "proper"


def canonical_form(cells: Iterable[Cell], symmetry: str = "proper") -> frozenset:
    """Lexicographically least normalized image under the symmetry group."""
    return frozenset(canonical_key(cells, symmetry))


def canonical_key(cells: Iterable[Cell], symmetry: str = "proper") -> tuple[Cell, ...]:
    """Sorted cell tuple of the canonical form; hashable and ordered."""
    return min(images(cells, symmetry))


def congruent(a: Iterable[Cell], b: Iterable[Cell], symmetry: str = "proper") -> bool:
    a, b = list(a), list(b)
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        return False
    return canonical_key(a, symmetry) == canonical_key(b, symmetry)


def polyforms(n: int, dim: int = 2, symmetry: str = "full") -> list[tuple[Cell, ...]]:
    """Canonical keys of every polyform with ``n`` cells, grown one cell at a
    time from the monomino."""
    if n < 1:
        raise LatticeError("polyform size must be positive")
    level = {(tuple([0] * dim),)}
    for _ in range(n - 1):
        nxt = set()
        for key in level:
            cells = set(key)
            for c in key:
                for nb in neighbors(c):
                    if nb not in cells:
                        nxt.add(canonical_key(cells | {nb}, symmetry))
        level = nxt
    return sorted(level)


def adjacency_pairs(cells: Iterable[Cell]) -> set[tuple[Cell, Cell]]:
    """Unordered face-adjacent pairs, each stored as ``(smaller, larger)``."""
    cells = set(cells)
    pairs = set()
    for c in cells:
        for n in neighbors(c):
            if n in cells:
                pairs.add((min(c, n), max(c, n)))
    return pairs


def exposed_faces(cells: Iterable[Cell]) -> list[tuple[Cell, str]]:
    """Surface faces ``(cell, direction letter)`` of a polycube, sorted by
    cell then direction index."""
    cells = set(cells)
    out = []
    for c in sorted(cells):
        for name in DIR_NAMES:
            d = DIRECTIONS[name]
            if (c[0] + d[0], c[1] + d[1], c[2] + d[2]) not in cells:
                out.append((c, name))
    return out


def bounding_box(cells: Iterable[Cell]) -> tuple[Cell, Cell]:
    cells = list(cells)
    dim = len(cells[0])
    lo = tuple(min(c[i] for c in cells) for i in range(dim))
    hi = tuple(max(c[i] for c in cells) for i in range(dim))
    return lo, hi


# --------------------------------------------------------------------------
# integer lattices

def hermite_normal_form(vectors: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns an upper-triangular list of basis rows with positive pivots and
    entries above each pivot reduced into ``[0, pivot)``.  Zero rows dropped.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    for col in range(dim):
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            pivot = live[0]
            nxt = [pivot]
            for r in live[1:]:
                q = r[col] // pivot[col]
                r = [a - q * b for a, b in zip(r, pivot)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        if live:
            pivot = live[0]
            if pivot[col] < 0:
                pivot = [-a for a in pivot]
            basis.append(pivot)
        rows = rest
    for i, row in enumerate(basis):
        col = next(c for c in range(dim) if row[c])
        for j in range(i):
            q = basis[j][col] // row[col]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], row)]
    return basis


class Lattice:
    """Full-rank sublattice of Z^dim with canonical residue reduction."""

    def __init__(self, vectors: Sequence[Sequence[int]], dim: int | None = None):
        vectors = [tuple(int(x) for x in v) for v in vectors]
        self.dim = dim if dim is not None else len(vectors[0])
        self.hnf = hermite_normal_form(vectors, self.dim)
        if len(self.hnf) != self.dim:
            raise LatticeError("lattice vectors do not span full rank")
        self.index = 1
        for i, row in enumerate(self.hnf):
            self.index *= row[i]

    def reduce(self, v: Sequence[int]) -> Cell:
        v = list(v)
        for i, row in enumerate(self.hnf):
            q = v[i] // row[i]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def residues(self) -> list[Cell]:
        """All canonical residues (the box prod [0, pivot_i))."""
        return [tuple(c) for c in product(*(range(row[i]) for i, row in enumerate(self.hnf)))]


# --------------------------------------------------------------------------
# text files

def read_cells(path, dim: int) -> frozenset:
    cells = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != dim:
                raise LatticeError(f"{path}:{lineno}: expected {dim} integers")
            cells.append(tuple(int(p) for p in parts))
    return validate(cells)


def format_cells(cells: Iterable[Cell]) -> str:
    return "".join(" ".join(str(x) for x in c) + "\n" for c in sorted(cells))


def write_cells(path, cells: Iterable[Cell], comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(format_cells(cells))


def read_pcube(path) -> frozenset:
    return read_cells(path, 3)


def read_pomino(path) -> frozenset:
    return read_cells(path, 2)


def cover_defect(basis: Sequence[Sequence[int]], copies: Iterable[Iterable[Cell]]):
    """Check that ``copies`` cover Z^dim / basis exactly once.

    Returns ``None`` for an exact cover, else ``(kind, residue)`` with kind
    ``"double"`` or ``"uncovered"``.
    """
    lat = Lattice(basis)
    seen: set[Cell] = set()
    total = 0
    for copy in copies:
        for c in copy:
            total += 1
            r = lat.reduce(c)
            if r in seen:
                return ("double", r)
            seen.add(r)
    if total != lat.index:
        missing = next((r for r in lat.residues() if r not in seen), None)
        return ("uncovered", missing)
    return None
