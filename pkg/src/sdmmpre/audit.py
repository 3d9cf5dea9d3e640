"""T-security audits.

``rank_audit`` checks the algebraic sufficient condition: for every
T-subset of evaluation points the T x T power matrices on alpha_R and on
beta_R are invertible, so the random blocks mask the data one-to-one.
``exhaustive_mi_audit`` is the ground-truth oracle for tiny fields: it
enumerates every secret and every mask and tests exact independence of
the colluders' view from (A, B).
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import AuditTooLarge
from .field import generalized_vandermonde, native_residues, nonsingular_batch

EXHAUSTIVE_LIMIT = 10**5
RANDOM_SUBSETS = 10**4


@dataclass
class SubsetAudit:
    total_subsets: int
    audited: int
    exhaustive: bool
    failures: list = field(default_factory=list)  # (subset, check name)

    @property
    def sampling_fraction(self) -> float:
        return self.audited / self.total_subsets if self.total_subsets else 1.0


def _subset_chunks(n, t, seed, exhaustive_limit, samples, chunk):
    total = comb(n, t)
    if total <= exhaustive_limit:
        it = itertools.combinations(range(n), t)
        while True:
            block = list(itertools.islice(it, chunk))
            if not block:
                return
            yield np.array(block, dtype=np.int64).reshape(len(block), t)
    else:
        rng = np.random.default_rng(seed)
        picks = np.sort(np.argsort(rng.random((samples, n)), axis=1)[:, :t], axis=1)
        picks = np.unique(picks, axis=0)
        for i in range(0, len(picks), chunk):
            yield picks[i:i + chunk]


def subset_rank_check(
    field_, points, exponent_sets: dict, T: int, seed=0,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT, samples: int = RANDOM_SUBSETS, chunk: int = 20000,
) -> SubsetAudit:
    """Check every (or a random sample of) T-subset of ``points`` against each
    named exponent list."""
    n = len(points)
    if T == 0:
        return SubsetAudit(1, 1, True)
    if n < T:
        return SubsetAudit(0, 0, True)
    total = comb(n, T)
    exhaustive = total <= exhaustive_limit
    powers = {
        name: native_residues(generalized_vandermonde(field_, exps, points), field_.q)
        for name, exps in exponent_sets.items()
    }
    audited = 0
    failures = []
    for idx in _subset_chunks(n, T, seed, exhaustive_limit, samples, chunk):
        audited += len(idx)
        for name, P in powers.items():
            ok = nonsingular_batch(P[idx], field_.q)
            for s in np.flatnonzero(~ok):
                failures.append((tuple(int(i) for i in idx[s]), name))
    return SubsetAudit(total, audited, exhaustive, failures)


class AuditMode(enum.Enum):
    RANK = "RankCheck"
    EXHAUSTIVE_MI = "ExhaustiveMI"


@dataclass
class LeakageReport:
    mode: AuditMode
    subset_size: int
    total_subsets: int
    audited: int
    exhaustive: bool
    violating_subsets: list  # RANK: (subset, check); MI: (subset, bits)
    max_mutual_information_bits: float | None = None
    checks: tuple = ()

    @property
    def passed(self) -> bool:
        if self.violating_subsets:
            return False
        return self.mode is AuditMode.RANK or self.max_mutual_information_bits == 0

    @property
    def sampling_fraction(self) -> float:
        return self.audited / self.total_subsets if self.total_subsets else 1.0

    def to_text(self) -> str:
        lines = [
            f"mode: {self.mode.value}",
            f"subset size: {self.subset_size}",
            f"subsets audited: {self.audited} of {self.total_subsets}"
            + ("" if self.exhaustive else f" (random sample, fraction {self.sampling_fraction:.4g})"),
        ]
        if self.mode is AuditMode.EXHAUSTIVE_MI:
            lines.append(f"max mutual information: {self.max_mutual_information_bits:.6g} bits")
        lines.append(f"violations: {len(self.violating_subsets)}")
        for v in self.violating_subsets[:20]:
            lines.append(f"  {v[0]} {v[1]}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        """One summary row per check plus one row per violating subset."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["subset", "check", "result"])
        bad = defaultdict(list)
        for subset, what in self.violating_subsets:
            key = what if self.mode is AuditMode.RANK else "mutual_information"
            bad[key].append(subset)
        for check in self.checks:
            w.writerow([f"all({self.audited})", check, "fail" if bad[check] else "pass"])
        for check in self.checks:
            for subset in bad[check]:
                w.writerow([" ".join(map(str, subset)), check, "fail"])
        return buf.getvalue()


def rank_audit(si, seed=0, exhaustive_limit: int = EXHAUSTIVE_LIMIT, samples: int = RANDOM_SUBSETS) -> LeakageReport:
    e = si.exponents
    sets = {"alpha_R": e.alpha_R, "beta_R": e.beta_R}
    res = subset_rank_check(si.field, si.points, sets, e.T, seed, exhaustive_limit, samples)
    return LeakageReport(
        AuditMode.RANK, e.T, res.total_subsets, res.audited, res.exhaustive,
        res.failures, checks=tuple(sets),
    )


def _mutual_information_bits(joint: dict, n_secrets: int, n_masks: int) -> tuple[bool, float]:
    """Exact independence test plus MI in bits, uniform prior on secrets.

    ``joint[secret]`` is a Counter of views over all ``n_masks`` mask draws.
    """
    marginal = Counter()
    for c in joint.values():
        marginal.update(c)
    first = next(iter(joint.values()))
    independent = all(c == first for c in joint.values())
    if independent:
        return True, 0.0
    total = n_secrets * n_masks
    mi = 0.0
    for c in joint.values():
        for v, k in c.items():
            p_v_given_s = Fraction(k, n_masks)
            p_v = Fraction(marginal[v], total)
            mi += float(Fraction(k, total)) * math.log2(p_v_given_s / p_v)
    return False, mi


def exhaustive_mi_audit(si, subset_size: int | None = None, *, zero_masks: bool = False, limit: int = 10**8) -> LeakageReport:
    """Enumerate all scalar A, B, R, S for a K = L = 1 instance and measure
    I(view; A, B) for every subset of servers of the given size (default T).

    ``zero_masks`` forces R = S = 0, the deliberately broken encoder.
    """
    e = si.exponents
    q = si.field.q
    if e.K != 1 or e.L != 1:
        raise AuditTooLarge("exhaustive audit supports K = L = 1 (scalar blocks) only")
    T = e.T
    size = q ** (2 + 2 * T)
    if size > limit:
        raise AuditTooLarge(f"{size} enumerations exceed the limit {limit}")
    s = T if subset_size is None else subset_size
    pts = [p.value for p in si.points]
    n = len(pts)
    a_pow = [pow(x, e.alpha_I[0], q) for x in pts]
    b_pow = [pow(x, e.beta_I[0], q) for x in pts]
    ar_pow = [[pow(x, a, q) for a in e.alpha_R] for x in pts]
    br_pow = [[pow(x, b, q) for b in e.beta_R] for x in pts]
    masks = [(0,) * T] if zero_masks else list(itertools.product(range(q), repeat=T))
    n_masks = len(masks) ** 2

    # f-shares depend only on (A, R) and g-shares only on (B, S).
    f_shares = {
        (A, R): [(A * a_pow[i] + sum(r * w for r, w in zip(R, ar_pow[i]))) % q for i in range(n)]
        for A in range(q) for R in masks
    }
    g_shares = {
        (B, S): [(B * b_pow[i] + sum(s_ * w for s_, w in zip(S, br_pow[i]))) % q for i in range(n)]
        for B in range(q) for S in masks
    }

    subsets = list(itertools.combinations(range(n), s))
    violating = []
    max_mi = 0.0
    for sub in subsets:
        joint = {}
        for A in range(q):
            for B in range(q):
                c = Counter()
                for R in masks:
                    fv = tuple(f_shares[A, R][i] for i in sub)
                    for S in masks:
                        c[fv, tuple(g_shares[B, S][i] for i in sub)] += 1
                joint[A, B] = c
        indep, mi = _mutual_information_bits(joint, q * q, n_masks)
        if not indep:
            violating.append((sub, mi))
            max_mi = max(max_mi, mi)
    return LeakageReport(
        AuditMode.EXHAUSTIVE_MI, s, len(subsets), len(subsets), True, violating,
        max_mutual_information_bits=max_mi, checks=("mutual_information",),
    )
