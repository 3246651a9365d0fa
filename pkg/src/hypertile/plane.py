"""Deciding and certifying plane tilings by a single polyomino.

Three producers share one certificate type:

* ``translation-BN``: boundary word factors as X Y Z X^ Y^ Z^ (Beauquier-Nivat),
  exact for translation-only tilings;
* ``conway-halfturn``: A B C D E F with D = A^ and B, C, E, F centrosymmetric
  (palindromic step words), sufficient for a tiling by translations and
  half-turns;
* ``torus-explicit``: an exact cover of a rectangular torus found by search.

Here ``u^`` is ``u`` reversed with every step replaced by its opposite.
:func:`verify_certificate` rebuilds the tiling from the certificate alone and
checks an exact cover of the period torus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import ceil, isqrt
from typing import Iterable, Sequence

from . import exactcover, lattice
from .surface import enclosed_cells

STEPS = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}
OPPOSITE = {"E": "W", "W": "E", "N": "S", "S": "N"}
LEFT = {"E": "N", "N": "W", "W": "S", "S": "E"}
RIGHT = {v: k for k, v in LEFT.items()}

KINDS = ("translation-BN", "conway-halfturn", "torus-explicit")


class TilingError(ValueError):
    pass


@dataclass(frozen=True)
class TilingCertificate:
    kind: str
    splits: tuple[int, ...] = ()
    periods: tuple[tuple[int, int], ...] = ()
    # (quarter turns, translation) per placed copy; torus certificates only
    placements: tuple[tuple[int, tuple[int, int]], ...] = ()

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.splits:
            out["splits"] = list(self.splits)
        if self.periods:
            out["periods"] = [list(v) for v in self.periods]
        if self.placements:
            out["placements"] = [{"rot": r, "t": list(t)} for r, t in self.placements]
        return out

    @classmethod
    def from_json(cls, d: dict) -> "TilingCertificate":
        return cls(
            d["kind"],
            tuple(d.get("splits", ())),
            tuple(tuple(v) for v in d.get("periods", ())),
            tuple((p["rot"], tuple(p["t"])) for p in d.get("placements", ())),
        )


# --------------------------------------------------------------------------
# boundary words

def boundary_word(cells: Iterable[tuple[int, int]]) -> str:
    """Counterclockwise boundary word from the least boundary vertex.

    The first step is always ``E`` along the bottom of the least cell.
    """
    cells = lattice.validate(cells)
    if enclosed_cells(cells):
        raise TilingError("polyomino has a hole")
    start = min(cells)
    v, d = start, "E"
    word = []
    while True:
        word.append(d)
        v = (v[0] + STEPS[d][0], v[1] + STEPS[d][1])
        if v == start:
            break
        left = _ahead(v, d, LEFT[d])
        right = _ahead(v, d, RIGHT[d])
        if left not in cells:
            d = LEFT[d]
        elif right in cells:
            d = RIGHT[d]
        if len(word) > 4 * len(cells) + 4:
            raise TilingError("boundary trace did not close")
    w = "".join(word)
    if len(w) != perimeter(cells):
        raise TilingError("boundary is not a simple curve")
    return w


def _ahead(v, d, side):
    sx = STEPS[d][0] + STEPS[side][0]
    sy = STEPS[d][1] + STEPS[side][1]
    return (v[0] + (sx - 1) // 2, v[1] + (sy - 1) // 2)


def perimeter(cells) -> int:
    cells = set(cells)
    return sum((c[0] + dx, c[1] + dy) not in cells for c in cells for dx, dy in STEPS.values())


def hat(u: str) -> str:
    return "".join(OPPOSITE[c] for c in reversed(u))


def vertices(word: str, origin=(0, 0)) -> list[tuple[int, int]]:
    """Vertex positions after 0..len(word) steps."""
    out = [origin]
    x, y = origin
    for c in word:
        x += STEPS[c][0]
        y += STEPS[c][1]
        out.append((x, y))
    return out


@lru_cache(maxsize=16)
def _table(word: str) -> "_HatTable":
    return _HatTable(word)


class _HatTable:
    """Constant-time tests on a cyclic word: ``w[i:i+L] == hat(w[j:j+L])``
    and ``w[i:i+L]`` is a palindrome."""

    def __init__(self, w: str):
        self.n = len(w)
        self.w = w
        self.run = self._runs(lambda a, b: a == OPPOSITE[b])
        self.pal = self._runs(lambda a, b: a == b)
        self._two: dict = {}
        self._pre = [[k for k in range(self.n + 1) if self.centro(j, k)] for j in range(self.n)]

    def _runs(self, same):
        # run[S][i]: length of the streak same(w[i+k], w[S-i-k]) for k = 0, 1, ...
        w, n = self.w, self.n
        out = []
        for s in range(n):
            r = [0] * (2 * n + 1)
            for i in range(2 * n - 1, -1, -1):
                if same(w[i % n], w[(s - i) % n]):
                    r[i] = r[i + 1] + 1
            out.append([min(x, n) for x in r[:n]])
        return out

    def match(self, i: int, j: int, length: int) -> bool:
        if length == 0:
            return True
        n = self.n
        return self.run[(i + j + length - 1) % n][i % n] >= length

    def centro(self, i: int, length: int) -> bool:
        # a lattice path is fixed by the half-turn about its midpoint exactly
        # when its step word is a palindrome
        if length == 0:
            return True
        return self.pal[(2 * i + length - 1) % self.n][i % self.n] >= length

    def two_centro(self, i: int, length: int) -> int | None:
        """Split offset ``k`` with both parts centrosymmetric, else None."""
        key = (i % self.n, length)
        if key not in self._two:
            self._two[key] = next(
                (k for k in self._prefixes(i % self.n) if k <= length and self.centro(i + k, length - k)),
                None,
            )
        return self._two[key]

    def _prefixes(self, i: int) -> list[int]:
        # lengths k (ascending, 0 first) with w[i:i+k] a palindrome
        return self._pre[i]


# --------------------------------------------------------------------------
# Beauquier-Nivat

def bn_factorization(word: str) -> TilingCertificate | None:
    """Exact test for a translation tiling: w = X Y Z X^ Y^ Z^ up to rotation."""
    n = len(word)
    if n % 2:
        return None
    h = n // 2
    tab = _table(word)
    for s in range(h):
        for a in range(1, h + 1):
            if not tab.match(s, s + h, a):
                continue
            for b in range(0, h - a + 1):
                c = h - a - b
                if (b == 0) + (c == 0) > 1:
                    continue
                if tab.match(s + a, s + a + h, b) and tab.match(s + a + b, s + a + b + h, c):
                    splits = tuple(x % n for x in (s, s + a, s + a + b, s + h, s + h + a, s + h + a + b))
                    return TilingCertificate("translation-BN", splits)
    return None


def _bn_structure(word: str, splits: Sequence[int]):
    n = len(word)
    if n % 2 or len(splits) != 6:
        return None
    p = [x % n for x in splits]
    lens = [(p[(k + 1) % 6] - p[k]) % n for k in range(6)]
    if sum(lens) != n or any(lens[k] != lens[k + 3] for k in range(3)):
        return None
    rot = word[p[0]:] + word[:p[0]]
    segs, at = [], 0
    for ln in lens:
        segs.append(rot[at:at + ln])
        at += ln
    if any(segs[k + 3] != hat(segs[k]) for k in range(3)):
        return None
    pts = vertices(rot)
    cum = [0]
    for ln in lens:
        cum.append(cum[-1] + ln)
    P = [pts[c] for c in cum]
    # X^ walked backwards is X shifted by P4 - P0; likewise for Y and Z
    vecs = [_sub(P[4], P[0]), _sub(P[5], P[1]), _sub(P[6], P[2])]
    return p, vecs


# --------------------------------------------------------------------------
# Conway criterion

def conway_criterion(word: str) -> TilingCertificate | None:
    """Search for A B C D E F with D = A^ and B, C, E, F centrosymmetric.

    At most three of the six arcs may be empty.  A ``None`` result is
    inconclusive.  Candidates whose induced lattice is degenerate are skipped.
    """
    n = len(word)
    tab = _table(word)
    for p0 in range(n):
        for a, p3 in _hat_pairs(tab, p0):
            q = (p3 - p0 - a) % n
            if q > n - 2 * a:
                continue
            p3 = p0 + a + q
            kb = tab.two_centro(p0 + a, q)
            if kb is None:
                continue
            r = n - 2 * a - q
            ke = tab.two_centro(p3 + a, r)
            if ke is None:
                continue
            lens = (a, kb, q - kb, a, ke, r - ke)
            if sum(x == 0 for x in lens) > 3:
                continue
            cuts = [p0]
            for ln in lens[:-1]:
                cuts.append(cuts[-1] + ln)
            splits = tuple(x % n for x in cuts)
            if _conway_structure(word, splits, lens) is not None:
                return TilingCertificate("conway-halfturn", splits)
    return None


def _hat_pairs(tab: "_HatTable", p0: int):
    """``(a, p3)`` with ``w[p0:p0+a]`` matched by the hat of ``w[p3:p3+a]``,
    ordered by ``a`` then ``p3`` offset; ``a = 0`` pairs with every ``p3``."""
    n = tab.n
    out = [(0, (p0 + q) % n) for q in range(n + 1)]
    # for a fixed diagonal sum S = p0 + p3 + a - 1 every length up to the
    # streak run[S][p0] matches
    more = []
    for S in range(n):
        top = min(tab.run[S][p0], n // 2)
        for a in range(1, top + 1):
            more.append((a, (S - p0 - a + 1 - p0) % n, (S - p0 - a + 1) % n))
    more.sort()
    out += [(a, p3) for a, _, p3 in more]
    return out


def _conway_structure(word: str, splits: Sequence[int], lens: Sequence[int] | None = None):
    n = len(word)
    if len(splits) != 6:
        return None
    p = [x % n for x in splits]
    if lens is None:
        lens = [(p[(k + 1) % 6] - p[k]) % n for k in range(6)]
        if sum(lens) != n:
            # a full wrap is only possible when every other arc is empty
            return None
    rot = word[p[0]:] + word[:p[0]]
    segs, at = [], 0
    for ln in lens:
        segs.append(rot[at:at + ln])
        at += ln
    A, B, C, D, E, F = segs
    if D != hat(A) or any(s != s[::-1] for s in (B, C, E, F)):
        return None
    pts = vertices(rot)
    cum = [0]
    for ln in lens:
        cum.append(cum[-1] + ln)
    P = [pts[c] for c in cum]
    t_a = _sub(P[4], P[0])
    # doubled midpoints of B, C, E, F
    mids = [_add(P[1], P[2]), _add(P[2], P[3]), _add(P[4], P[5]), _add(P[5], P[6])]
    gens = [t_a] + [_sub(mids[0], m) for m in mids[1:]] + [_sub(mids[1], mids[2]), _sub(mids[1], mids[3])]
    try:
        lat = lattice.Lattice(gens, 2)
    except lattice.LatticeError:
        return None
    return p, lat, mids[0]


# --------------------------------------------------------------------------
# torus oracle

def rotate_cells(cells, quarter: int):
    out = []
    for x, y in cells:
        for _ in range(quarter % 4):
            x, y = -y, x
        out.append((x, y))
    return frozenset(out)


def torus_tiling(cells, max_period: int = 8, allow_rotations: bool = False,
                 budget: int | None = None, sheared: bool = True) -> TilingCertificate | None:
    """Exhaustive exact-cover search for a periodic tiling.

    Period lattices are taken in Hermite form ``(a, b), (0, c)`` with
    ``a, c <= max_period`` and ``0 <= b < c`` (``b = 0`` only when
    ``sheared`` is false), in lexicographic ``(a, c, b)`` order.  ``budget``
    caps exact-cover nodes per torus.
    """
    cells = lattice.validate(cells)
    if len(cells) > 40 or max_period > 10:
        raise TilingError("torus oracle bounds exceeded (area <= 40, max_period <= 10)")
    base = lattice.normalize(cells)
    orients = []
    seen = set()
    for q in (range(4) if allow_rotations else (0,)):
        shape = lattice.normalize(rotate_cells(base, q))
        if shape not in seen:
            seen.add(shape)
            orients.append((q, shape))
    k = len(cells)
    for a in range(1, max_period + 1):
        for c in range(1, max_period + 1):
            if (a * c) % k:
                continue
            for b in range(c if sheared else 1):
                basis = ((a, b), (0, c))
                found = _torus_cover(orients, basis, budget)
                if found is not None:
                    return TilingCertificate("torus-explicit", (), basis, tuple(found))
    return None


def _torus_cover(orients, basis, budget):
    lat = lattice.Lattice(basis, 2)
    column = {r: i for i, r in enumerate(lat.residues())}
    rows, meta, seen = [], [], set()
    for q, shape in orients:
        for t in lat.residues():
            cols = frozenset(column[lat.reduce((x + t[0], y + t[1]))] for x, y in shape)
            if len(cols) != len(shape) or cols in seen:
                continue
            seen.add(cols)
            rows.append(sorted(cols))
            meta.append((q, t))
    sol = exactcover.first(len(column), rows, budget=budget)
    if sol is None:
        return None
    return [meta[r] for r in sol]


# --------------------------------------------------------------------------
# verification

def tile_motifs(cells, cert: TilingCertificate):
    """Re-derive ``(basis, copies)`` for one period of the tiling.

    ``copies`` lists the cell sets of the tiles in a fundamental domain.
    Raises :class:`TilingError` if the certificate is structurally invalid.
    """
    cells = lattice.validate(cells)
    if cert.kind == "torus-explicit":
        base = lattice.normalize(cells)
        copies = [lattice.translate(lattice.normalize(rotate_cells(base, q)), t) for q, t in cert.placements]
        return [tuple(v) for v in cert.periods], copies
    word = boundary_word(cells)
    start = min(cells)
    if cert.kind == "translation-BN":
        got = _bn_structure(word, cert.splits)
        if got is None:
            raise TilingError("splits do not give a Beauquier-Nivat factorization")
        _, vecs = got
        return vecs, [cells]
    if cert.kind == "conway-halfturn":
        got = _conway_structure(word, cert.splits)
        if got is None:
            raise TilingError("splits do not satisfy the Conway criterion")
        p, lat, mid = got
        # vertices were measured from the rotated start; shift back to cells
        origin = vertices(word, start)[p[0]]
        mx, my = mid[0] + 2 * origin[0], mid[1] + 2 * origin[1]
        turned = frozenset((mx - 1 - x, my - 1 - y) for x, y in cells)
        return [tuple(r) for r in lat.hnf], [cells, turned]
    raise TilingError(f"unknown certificate kind {cert.kind!r}")


def verify_certificate(cells, cert: TilingCertificate) -> bool:
    try:
        basis, copies = tile_motifs(cells, cert)
        if len(basis) < 2:
            return False
        return lattice.cover_defect(basis, copies) is None
    except (TilingError, lattice.LatticeError):
        return False


def decide(cells, max_period: int = 8, budget: int | None = None) -> tuple[str, str | None, TilingCertificate | None]:
    """``(verdict, method, certificate)``; the strongest verified certificate in
    the order BN, Conway, torus with rotations.  Never reports non-tiling."""
    cells = lattice.validate(cells)
    word = boundary_word(cells)
    for method, make in (("bn", lambda: bn_factorization(word)),
                         ("conway", lambda: conway_criterion(word)),
                         ("torus", lambda: _torus_or_none(cells, max_period, budget))):
        cert = make()
        if cert is not None and verify_certificate(cells, cert):
            return "tiles", method, cert
    return "unknown", None, None


def _torus_or_none(cells, max_period, budget):
    if len(cells) > 40:
        return None
    try:
        return torus_tiling(cells, max_period, allow_rotations=True, budget=budget)
    except exactcover.SearchBudgetExceeded:
        return None


def run_method(cells, method: str, max_period: int = 8, budget: int | None = None):
    """Single-method verdict used by the CLI."""
    if method == "auto":
        return decide(cells, max_period, budget)
    cells = lattice.validate(cells)
    if method == "bn":
        cert = bn_factorization(boundary_word(cells))
    elif method == "conway":
        cert = conway_criterion(boundary_word(cells))
    elif method == "torus":
        cert = _torus_or_none(cells, max_period, budget)
    else:
        raise TilingError(f"unknown method {method!r}")
    if cert is not None and verify_certificate(cells, cert):
        return "tiles", method, cert
    return "unknown", method, None


# --------------------------------------------------------------------------
# patches and SVG

def _reduced_basis(basis):
    """Gauss-reduced basis of the 2D lattice spanned by ``basis``."""
    lat = lattice.Lattice(basis, 2)
    u, v = [tuple(r) for r in lat.hnf]
    while True:
        if _dot(u, u) > _dot(v, v):
            u, v = v, u
        k = round(_dot(u, v) / _dot(u, u))
        if k == 0:
            return u, v
        v = (v[0] - k * u[0], v[1] - k * u[1])


@dataclass
class Patch:
    tiles: list[frozenset] = field(default_factory=list)
    colors: list[int] = field(default_factory=list)


def tiling_patch(cells, cert: TilingCertificate, copies: int) -> Patch:
    """The first ``copies`` tiles of the tiling, lattice points taken in a
    ``rows x cols`` block of the reduced basis."""
    basis, motifs = tile_motifs(cells, cert)
    if lattice.cover_defect(basis, motifs) is not None:
        raise TilingError("certificate does not verify")
    u, v = _reduced_basis(basis)
    per = len(motifs)
    points = ceil(copies / per)
    cols = max(1, isqrt(points - 1) + 1) if points > 1 else 1
    rows = ceil(points / cols)
    patch = Patch()
    for j in range(rows):
        for i in range(cols):
            off = (i * u[0] + j * v[0], i * u[1] + j * v[1])
            for k, m in enumerate(motifs):
                if len(patch.tiles) == copies:
                    return patch
                patch.tiles.append(lattice.translate(m, off))
                patch.colors.append(k * 4 + (i % 2) * 2 + (j % 2))
    return patch


PALETTE = ("#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5")
UNIT = 20


def render_tiling_svg(cells, cert: TilingCertificate, copies: int = 9) -> str:
    if not verify_certificate(cells, cert):
        raise TilingError("refusing to render an invalid certificate")
    patch = tiling_patch(cells, cert, copies)
    allc = [c for t in patch.tiles for c in t]
    x0 = min(c[0] for c in allc)
    x1 = max(c[0] for c in allc) + 1
    y0 = min(c[1] for c in allc)
    y1 = max(c[1] for c in allc) + 1
    W, H = (x1 - x0) * UNIT, (y1 - y0) * UNIT
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">'
    ]
    for idx, (tile, color) in enumerate(zip(patch.tiles, patch.colors)):
        fill = PALETTE[color % len(PALETTE)]
        out.append(f'<g id="tile{idx}" fill="{fill}" stroke="none">')
        for x, y in sorted(tile):
            px, py = (x - x0) * UNIT, (y1 - 1 - y) * UNIT
            out.append(f'<rect x="{px}" y="{py}" width="{UNIT}" height="{UNIT}"/>')
        out.append("</g>")
        out.append(f'<path d="{_outline_path(tile, x0, y1)}" fill="none" stroke="#000" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _outline_path(tile, x0, y1):
    segs = []
    for x, y in sorted(tile):
        for (dx, dy), (ax, ay, bx, by) in (
            ((0, -1), (0, 0, 1, 0)), ((1, 0), (1, 0, 1, 1)),
            ((0, 1), (0, 1, 1, 1)), ((-1, 0), (0, 0, 0, 1)),
        ):
            if (x + dx, y + dy) not in tile:
                segs.append(
                    f"M{(x + ax - x0) * UNIT} {(y1 - y - ay) * UNIT}L{(x + bx - x0) * UNIT} {(y1 - y - by) * UNIT}"
                )
    return "".join(segs)


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]
