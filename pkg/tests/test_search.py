import random

import pytest
from hypothesis import given, strategies as st

from sdmmpre.degree_table import GaspExponents, SchemeParams, build_gasp_exponents, check_table_conditions, count_servers
from sdmmpre.errors import EmptySet, SearchTooLarge
from sdmmpre.fileio import read_csv
from sdmmpre.formulas import lower_bounds, n_pre_closed_form, n_small_pre
from sdmmpre.search import (
    LEDGER_FIELDS,
    SearchSpace,
    append_ledger,
    exhaustive_search,
    progression_difference,
    same_difference_progressions,
    sumset,
    sumset_min_check,
)


def test_smallest_search():
    res = exhaustive_search(SearchSpace(1, 1, 1, D=3))
    assert res.best_N_pre == 2 == lower_bounds(1, 1, 1).best
    assert check_table_conditions(res.witness).ok
    assert count_servers(res.witness) == 2


def test_sandwich_222():
    res = exhaustive_search(SearchSpace(2, 2, 2, D=8))
    assert lower_bounds(2, 2, 2).best == 8 == n_small_pre(2, 2, 2)
    assert res.best_N_pre == 8 and res.bound_gap == 0
    assert count_servers(res.witness) == 8


@pytest.mark.parametrize("K,L,T", [(1, 2, 1), (2, 1, 2), (1, 1, 3), (2, 2, 1), (1, 3, 2)])
def test_search_never_beats_bound_nor_loses_to_gasp(K, L, T):
    space = SearchSpace(K, L, T)
    res = exhaustive_search(space)
    assert lower_bounds(K, L, T).best <= res.best_N_pre
    for r in range(1, min(K, T) + 1):
        assert res.best_N_pre <= n_pre_closed_form(SchemeParams(K, L, T, r))
    assert count_servers(res.witness) == res.best_N_pre


def test_literal_ordering_mode():
    a = exhaustive_search(SearchSpace(1, 2, 1, split_roles=False))
    b = exhaustive_search(SearchSpace(1, 2, 1, split_roles=True))
    assert b.tables_examined > a.tables_examined
    assert b.best_N_pre <= a.best_N_pre
    w = a.witness
    assert max(w.alpha_I) < min(w.alpha_R) and max(w.beta_I) < min(w.beta_R)


def test_parallel_matches_serial():
    s = SearchSpace(2, 1, 2)
    a, b = exhaustive_search(s), exhaustive_search(s, workers=2)
    assert (a.best_N_pre, a.witness, a.valid_tables) == (b.best_N_pre, b.witness, b.valid_tables)


def test_search_refused():
    with pytest.raises(SearchTooLarge) as exc:
        exhaustive_search(SearchSpace(4, 4, 4), limit=1000)
    assert exc.value.estimate > 1000


def test_space_D_check():
    with pytest.raises(ValueError):
        SearchSpace(2, 2, 2, D=3)
    top = max(build_gasp_exponents(SchemeParams(2, 2, 2)).alpha)
    assert SearchSpace(2, 2, 2).D >= top


def test_ledger(tmp_path):
    path = tmp_path / "ledger.csv"
    for s in (SearchSpace(1, 1, 1, D=3), SearchSpace(1, 1, 2)):
        append_ledger(path, s, exhaustive_search(s))
    header, rows = read_csv(path.read_text())
    assert header == LEDGER_FIELDS and len(rows) == 2
    assert rows[0][:6] == ["1", "1", "1", "3", "1", "2"]


# sumsets

def test_sumset_examples():
    A, B = {0, 1, 2}, {0, 2, 4}
    assert len(sumset(A, B)) == 7 and not sumset_min_check(A, B)
    assert not same_difference_progressions(A, B)
    A, B = {0, 3, 6}, {1, 4}
    assert len(sumset(A, B)) == 4 and sumset_min_check(A, B)
    assert progression_difference(A) == progression_difference(B) == 3
    with pytest.raises(EmptySet):
        sumset(set(), {1})


def test_singletons():
    assert sumset_min_check({5}, {1, 7, 20})
    assert progression_difference({4}) == 0


def _gaps(S):
    xs = sorted(S)
    return {b - a for a, b in zip(xs, xs[1:])}


def test_minimal_sumsets_are_progressions():
    rng = random.Random(1)
    hits = 0
    for _ in range(10**4):
        A = set(rng.sample(range(21), rng.randint(2, 6)))
        B = set(rng.sample(range(21), rng.randint(2, 6)))
        minimal = len({a + b for a in A for b in B}) == len(A) + len(B) - 1
        ga, gb = _gaps(A), _gaps(B)
        assert minimal == (len(ga) == 1 and ga == gb)
        assert same_difference_progressions(A, B) == (len(ga) == 1 and ga == gb)
        assert sumset_min_check(A, B) == minimal
        hits += minimal
    assert hits > 0


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 6),
       st.integers(2, 6), st.integers(2, 6))
def test_progressions_are_minimal(a, b, d, n, m):
    A = {a + d * i for i in range(n)}
    B = {b + d * i for i in range(m)}
    assert sumset_min_check(A, B)


@given(st.sets(st.integers(0, 30), min_size=1, max_size=7), st.sets(st.integers(0, 30), min_size=1, max_size=7))
def test_sumset_lower_bound(A, B):
    assert len(sumset(A, B)) >= len(A) + len(B) - 1


def test_gasp_tables_are_candidates():
    exps = [build_gasp_exponents(SchemeParams(2, 2, 2, r)) for r in (1, 2)]
    assert all(isinstance(e, GaspExponents) for e in exps)
    res = exhaustive_search(SearchSpace(2, 2, 2, D=max(max(e.alpha + e.beta) for e in exps)))
    assert res.best_N_pre <= min(count_servers(e) for e in exps)
