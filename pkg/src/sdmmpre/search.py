"""Brute-force search for the best degree table with precomputation, and
the sumset helpers behind the lower bounds.

Only feasible for tiny K, L, T; the point is to have an oracle that is
completely independent of the GASP construction and its closed forms.
"""

from __future__ import annotations

import csv
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb

from .degree_table import GaspExponents, SchemeParams, build_gasp_exponents, check_table_conditions
from .errors import EmptySet, SearchTooLarge
from .formulas import lower_bounds

SEARCH_LIMIT = 10**8


@dataclass(frozen=True)
class SearchSpace:
    """All exponent vectors with entries in [0, D] and smallest entry 0.

    Shifting every alpha (or every beta) by a constant shifts the whole
    table, so fixing the minimum at 0 loses nothing.  With ``split_roles``
    any K of the K+T alpha values may carry data; otherwise the data
    exponents are the K smallest.
    """

    K: int
    L: int
    T: int
    D: int | None = None
    split_roles: bool = True

    def __post_init__(self):
        small = build_gasp_exponents(SchemeParams(self.K, self.L, self.T, 1))
        top = max(small.alpha + small.beta)
        if self.D is None:
            object.__setattr__(self, "D", top + 2)
        elif self.D < top:
            raise ValueError(f"D={self.D} is below the GASP maximum exponent {top}")

    def side_count(self, n_data: int) -> int:
        n = n_data + self.T
        return comb(self.D, n - 1) * (comb(n, n_data) if self.split_roles else 1)

    def estimate(self) -> int:
        return self.side_count(self.K) * self.side_count(self.L)


@dataclass(frozen=True)
class SearchResult:
    best_N_pre: int
    witness: GaspExponents
    tables_examined: int
    valid_tables: int
    bound: int

    @property
    def bound_gap(self) -> int:
        return self.best_N_pre - self.bound


def _side_candidates(n_data: int, T: int, D: int, split_roles: bool):
    """(data, random) exponent tuples in a fixed lexicographic order."""
    out = []
    for rest in itertools.combinations(range(1, D + 1), n_data + T - 1):
        values = (0,) + rest
        if split_roles:
            for data_idx in itertools.combinations(range(n_data + T), n_data):
                data = tuple(values[i] for i in data_idx)
                rand = tuple(v for i, v in enumerate(values) if i not in data_idx)
                out.append((data, rand))
        else:
            out.append((values[:n_data], values[n_data:]))
    return out


def _best_in_shard(args):
    alphas, betas, offset = args
    best = None
    valid = 0
    for ai, (aI, aR) in enumerate(alphas):
        for bi, (bI, bR) in enumerate(betas):
            red = {a + b for a in aI for b in bI}
            if len(red) != len(aI) * len(bI):
                continue
            side = {a + b for a in aI for b in bR} | {a + b for a in aR for b in bI}
            if red & side or red & {a + b for a in aR for b in bR}:
                continue
            valid += 1
            n = len(red) + len(side)
            key = (n, offset + ai, bi)
            if best is None or key < best:
                best = key
    return best, valid


def exhaustive_search(space: SearchSpace, workers: int = 1, limit: int = SEARCH_LIMIT) -> SearchResult:
    est = space.estimate()
    if est > limit:
        raise SearchTooLarge(est, limit)
    alphas = _side_candidates(space.K, space.T, space.D, space.split_roles)
    betas = _side_candidates(space.L, space.T, space.D, space.split_roles)
    n_shards = max(1, workers) * 4
    step = -(-len(alphas) // n_shards)
    shards = [(alphas[i:i + step], betas, i) for i in range(0, len(alphas), step)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_best_in_shard, shards))
    else:
        results = [_best_in_shard(s) for s in shards]
    found = [b for b, _ in results if b is not None]
    valid = sum(v for _, v in results)
    n, ai, bi = min(found)
    (aI, aR), (bI, bR) = alphas[ai], betas[bi]
    witness = GaspExponents(aI, aR, bI, bR)
    assert check_table_conditions(witness).ok
    bound = lower_bounds(space.K, space.L, space.T).best
    return SearchResult(n, witness, len(alphas) * len(betas), valid, bound)


LEDGER_FIELDS = ["K", "L", "T", "D", "split_roles", "best_N_pre", "bound", "gap", "tables_examined"]


def append_ledger(path, space: SearchSpace, result: SearchResult):
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if new:
            w.writerow(LEDGER_FIELDS)
        w.writerow([
            space.K, space.L, space.T, space.D, int(space.split_roles),
            result.best_N_pre, result.bound, result.bound_gap, result.tables_examined,
        ])


def sumset(A, B) -> set[int]:
    if not A or not B:
        raise EmptySet("sumset needs two non-empty sets")
    return {a + b for a in A for b in B}


def progression_difference(S):
    """Common difference if the sorted set is an arithmetic progression, else None.

    A singleton is a progression of every difference; 0 is returned for it.
    """
    xs = sorted(set(S))
    if len(xs) < 2:
        return 0
    d = xs[1] - xs[0]
    return d if all(b - a == d for a, b in zip(xs, xs[1:])) else None


def same_difference_progressions(A, B) -> bool:
    da, db = progression_difference(A), progression_difference(B)
    return da is not None and db is not None and da == db


def sumset_min_check(A, B) -> bool:
    """True when |A+B| hits the minimum |A|+|B|-1.

    For |A|, |B| >= 2 this must coincide with A and B being arithmetic
    progressions of one common difference; a disagreement raises.
    """
    A, B = set(A), set(B)
    minimal = len(sumset(A, B)) == len(A) + len(B) - 1
    if len(A) >= 2 and len(B) >= 2:
        ap = same_difference_progressions(A, B)
        if ap != minimal:
            raise AssertionError(f"sumset characterization fails for {sorted(A)}, {sorted(B)}")
    return minimal
