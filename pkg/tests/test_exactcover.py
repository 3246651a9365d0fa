from itertools import combinations

import pytest

from hypertile import exactcover


def _brute(n, rows):
    out = []
    for k in range(len(rows) + 1):
        for combo in combinations(range(len(rows)), k):
            cols = [c for r in combo for c in rows[r]]
            if sorted(cols) == list(range(n)):
                out.append(list(combo))
    return sorted(out)


def test_knuth_example_has_single_cover():
    # columns A..G = 0..6
    rows = [[2, 4, 5], [0, 3, 6], [1, 2, 5], [0, 3], [1, 6], [3, 4, 6]]
    assert list(exactcover.solve(7, rows)) == [[0, 3, 4]]


@pytest.mark.parametrize("seed", range(5))
def test_matches_brute_force(seed):
    import random
    rng = random.Random(seed)
    n = 6
    rows = [sorted(rng.sample(range(n), rng.randint(1, 3))) for _ in range(10)]
    assert sorted(exactcover.solve(n, rows)) == _brute(n, rows)


def test_secondary_columns_covered_at_most_once():
    rows = [[0, 2], [1, 2], [1]]
    assert sorted(exactcover.solve(3, rows, primary=2)) == [[0, 2]]


def test_budget_and_stats():
    rows = [[i] for i in range(30)]
    stats = {}
    assert exactcover.first(30, rows, stats=stats) == list(range(30))
    assert stats["nodes"] == 31
    with pytest.raises(exactcover.SearchBudgetExceeded):
        exactcover.first(30, rows, budget=10)


def test_no_cover():
    assert exactcover.first(3, [[0, 1], [1, 2]]) is None
