"""Compare the rank condition with exhaustive mutual information.

Scans K = L = 1, T = 2 instances over a tiny field with arbitrary random
exponents and every 3-subset of nonzero points, and counts how often the
two audits disagree.  The rank condition is sufficient for security; this
shows it is not necessary.
"""

import argparse
import itertools

from sdmmpre.audit import exhaustive_mi_audit, rank_audit
from sdmmpre.degree_table import GaspExponents
from sdmmpre.field import PrimeField
from sdmmpre.protocol import make_instance

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--max-exp", type=int, default=4)
    args = ap.parse_args()
    F = PrimeField(args.q)
    counts = {(True, True): 0, (True, False): 0, (False, True): 0, (False, False): 0}
    examples = []
    for aR in itertools.combinations(range(1, args.max_exp + 1), 2):
        for bR in itertools.combinations(range(1, args.max_exp), 2):
            e = GaspExponents((0,), aR, (0,), bR)
            for pts in itertools.combinations(range(1, args.q), 3):
                si = make_instance(F, e, pts)
                key = (rank_audit(si).passed, exhaustive_mi_audit(si).passed)
                counts[key] += 1
                if key == (False, True) and len(examples) < 5:
                    examples.append((aR, bR, pts))
    print(f"q={args.q}")
    print(f"rank pass, no leak : {counts[True, True]}")
    print(f"rank pass, leak    : {counts[True, False]}")
    print(f"rank fail, no leak : {counts[False, True]}")
    print(f"rank fail, leak    : {counts[False, False]}")
    for ex in examples:
        print("  secure despite rank failure: alpha_R=%s beta_R=%s points=%s" % ex)
