"""Exhaustive degree-table searches on a grid of tiny parameters.

Each finished search appends one row to the ledger CSV; spaces above the
limit are skipped with a note.  Compares the optimum with the best bound and
with the best GASP_r count.
"""

import argparse
import itertools
import os
import time

from sdmmpre.degree_table import SchemeParams
from sdmmpre.errors import SearchTooLarge
from sdmmpre.formulas import n_pre_closed_form
from sdmmpre.search import SearchSpace, append_ledger, exhaustive_search

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max", type=int, default=2, help="largest K, L and T")
    ap.add_argument("--ledger", default="results/search_ledger.csv")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--limit", type=int, default=10**7)
    args = ap.parse_args()

    os.makedirs(os.path.dirname(args.ledger) or ".", exist_ok=True)
    print("K L T  best  bound  gasp  seconds")
    rng = range(1, args.max + 1)
    for K, L, T in itertools.product(rng, rng, rng):
        space = SearchSpace(K, L, T)
        t0 = time.perf_counter()
        try:
            res = exhaustive_search(space, workers=args.workers, limit=args.limit)
        except SearchTooLarge as exc:
            print(f"{K} {L} {T}  skipped: {exc}")
            continue
        gasp = min(n_pre_closed_form(SchemeParams(K, L, T, r)) for r in range(1, min(K, T) + 1))
        append_ledger(args.ledger, space, res)
        print(f"{K} {L} {T}  {res.best_N_pre:4}  {res.bound:5}  {gasp:4}  {time.perf_counter() - t0:.2f}")
