"""Where does GASP_small meet the best lower bound?

Prints the gap n_small_pre_symmetric - best bound for min(K, L) and T, and
lists points inside the claimed-optimal region (K = 1, L = 1 or T <= 2)
where the gap is nonzero.
"""

import argparse

from sdmmpre.formulas import optimality_check, optimality_claimed

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-KL", type=int, default=8)
    ap.add_argument("--max-T", type=int, default=12)
    args = ap.parse_args()
    Ts = range(1, args.max_T + 1)
    print("gap for K = L = m (rows) and T (columns)")
    print("m\\T " + " ".join(f"{T:3}" for T in Ts))
    for m in range(1, args.max_KL + 1):
        print(f"{m:3} " + " ".join(f"{optimality_check(m, m, T).gap:3}" for T in Ts))
    misses = [
        (K, L, T, optimality_check(K, L, T).gap)
        for K in range(1, args.max_KL + 1) for L in range(1, args.max_KL + 1) for T in Ts
        if optimality_claimed(K, L, T) and not optimality_check(K, L, T).achieving
    ]
    print(f"\nclaimed optimal but not achieving: {len(misses)}")
    for K, L, T, g in misses[:12]:
        print(f"  K={K} L={L} T={T} gap={g}")
