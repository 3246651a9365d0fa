"""Algorithm X over a dict-of-sets column index.

Columns are integers ``0..n_columns-1``; rows are lists of column indices.
Column choice is minimum-remaining-values with ties broken by the lowest
column index, and candidate rows are tried in ascending row index, so the
first solution returned is deterministic.
"""

from __future__ import annotations

from typing import Iterator, Sequence


class SearchBudgetExceeded(RuntimeError):
    pass


def solve(n_columns: int, rows: Sequence[Sequence[int]], *, budget: int | None = None,
          primary: int | None = None, stats: dict | None = None) -> Iterator[list[int]]:
    """Yield exact covers as sorted lists of row indices.

    ``primary`` limits the columns that must be covered to ``0..primary-1``;
    the rest are secondary (covered at most once).  ``budget`` caps the number
    of search nodes and raises :class:`SearchBudgetExceeded` when hit.  When
    given, ``stats["nodes"]`` is kept up to date with the nodes visited.
    """
    if primary is None:
        primary = n_columns
    cols: dict[int, set[int]] = {c: set() for c in range(n_columns)}
    for r, row in enumerate(rows):
        for c in row:
            cols[c].add(r)
    state = _State(cols, rows, set(range(primary)), budget, stats)
    for sol in state.search([]):
        yield sorted(sol)


class _State:
    def __init__(self, cols, rows, live, budget, stats=None):
        self.stats = stats if stats is not None else {}
        self.stats.setdefault("nodes", 0)
        self.cols = cols
        self.rows = rows
        self.live = live
        self.budget = budget
        self.nodes = 0

    def search(self, partial):
        self.nodes += 1
        self.stats["nodes"] += 1
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(f"exact-cover budget of {self.budget} nodes exhausted")
        if not self.live:
            yield list(partial)
            return
        cols = self.cols
        best = min(self.live, key=lambda c: (len(cols[c]), c))
        for r in sorted(cols[best]):
            partial.append(r)
            removed = self.select(r)
            yield from self.search(partial)
            self.deselect(r, removed)
            partial.pop()

    def select(self, r):
        cols, rows = self.cols, self.rows
        removed = []
        for c in rows[r]:
            for other in cols[c]:
                for c2 in rows[other]:
                    if c2 != c:
                        cols[c2].discard(other)
            removed.append((c, cols.pop(c), c in self.live))
            self.live.discard(c)
        return removed

    def deselect(self, r, removed):
        cols, rows = self.cols, self.rows
        for c, block, was_live in reversed(removed):
            cols[c] = block
            if was_live:
                self.live.add(c)
            for other in block:
                for c2 in rows[other]:
                    if c2 != c:
                        cols[c2].add(other)


def first(n_columns: int, rows: Sequence[Sequence[int]], **kw) -> list[int] | None:
    for sol in solve(n_columns, rows, **kw):
        return sol
    return None
