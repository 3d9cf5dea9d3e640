"""GASP_r exponent construction, degree tables and server counting.

The four exponent lists are the supports of the information and random
parts of the two encoding polynomials.  Counting is done by direct
enumeration of pairwise sums; the closed forms live in ``formulas``.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidChainLength


@dataclass(frozen=True)
class SchemeParams:
    K: int
    L: int
    T: int
    r: int = 1

    def __post_init__(self):
        for name in ("K", "L", "T"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not 1 <= self.r <= min(self.K, self.T):
            raise InvalidChainLength(
                f"chain length r={self.r} must lie in [1, min(K, T)] = [1, {min(self.K, self.T)}]"
            )

    def transposed(self) -> SchemeParams:
        return SchemeParams(self.L, self.K, self.T, self.r)


def _strictly_increasing(xs):
    return all(a < b for a, b in zip(xs, xs[1:]))


@dataclass(frozen=True)
class GaspExponents:
    """Exponents (alpha_I | alpha_R) of f and (beta_I | beta_R) of g.

    Empty random parts (T = 0) are accepted so tests can switch masking off.
    """

    alpha_I: tuple[int, ...]
    alpha_R: tuple[int, ...]
    beta_I: tuple[int, ...]
    beta_R: tuple[int, ...]

    def __post_init__(self):
        for name in ("alpha_I", "alpha_R", "beta_I", "beta_R"):
            vals = tuple(int(v) for v in getattr(self, name))
            object.__setattr__(self, name, vals)
            if not _strictly_increasing(vals):
                raise ValueError(f"{name} must be strictly increasing: {vals}")
            if any(v < 0 for v in vals):
                raise ValueError(f"{name} must be nonnegative: {vals}")
        if not self.alpha_I or not self.beta_I:
            raise ValueError("alpha_I and beta_I must be non-empty")
        if len(self.alpha_R) != len(self.beta_R):
            raise ValueError("alpha_R and beta_R must have the same length T")
        if len(set(self.alpha)) != len(self.alpha):
            raise ValueError("alpha_I and alpha_R overlap")
        if len(set(self.beta)) != len(self.beta):
            raise ValueError("beta_I and beta_R overlap")

    @property
    def K(self):
        return len(self.alpha_I)

    @property
    def L(self):
        return len(self.beta_I)

    @property
    def T(self):
        return len(self.alpha_R)

    @property
    def alpha(self):
        return self.alpha_I + self.alpha_R

    @property
    def beta(self):
        return self.beta_I + self.beta_R


def build_gasp_exponents(params: SchemeParams) -> GaspExponents:
    K, L, T, r = params.K, params.L, params.T, params.r
    if not 1 <= r <= min(K, T):
        raise InvalidChainLength(f"r={r} outside [1, {min(K, T)}]")
    alpha_R = []
    u = 0
    while len(alpha_R) < T:
        for j in range(r):
            if len(alpha_R) == T:
                break
            alpha_R.append(K * L + u * K + j)
        u += 1
    return GaspExponents(
        alpha_I=tuple(range(K)),
        alpha_R=tuple(alpha_R),
        beta_I=tuple(K * l for l in range(L)),
        beta_R=tuple(K * L + t for t in range(T)),
    )


def _sums(xs, ys):
    return {x + y for x in xs for y in ys}


@dataclass(frozen=True)
class SupportDecomposition:
    A_set: tuple[int, ...]  # alpha_I + beta_I
    B_set: tuple[int, ...]  # alpha_I + beta_R
    C_set: tuple[int, ...]  # alpha_R + beta_I
    D_set: tuple[int, ...]  # alpha_R + beta_R

    @property
    def full(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.A_set) | set(self.B_set) | set(self.C_set) | set(self.D_set)))

    @property
    def without_corner(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.A_set) | set(self.B_set) | set(self.C_set)))


def support_decomposition(exponents: GaspExponents) -> SupportDecomposition:
    e = exponents
    return SupportDecomposition(
        A_set=tuple(sorted(_sums(e.alpha_I, e.beta_I))),
        B_set=tuple(sorted(_sums(e.alpha_I, e.beta_R))),
        C_set=tuple(sorted(_sums(e.alpha_R, e.beta_I))),
        D_set=tuple(sorted(_sums(e.alpha_R, e.beta_R))),
    )


def count_servers(exponents: GaspExponents, precompute: bool = True) -> int:
    """Number of servers: distinct table entries, minus the random corner
    when the user precomputes ``f_R * g_R``."""
    e = exponents
    s = _sums(e.alpha_I, e.beta_I) | _sums(e.alpha_I, e.beta_R) | _sums(e.alpha_R, e.beta_I)
    if not precompute:
        s |= _sums(e.alpha_R, e.beta_R)
    return len(s)


@dataclass(frozen=True)
class ConditionReport:
    red_unique: bool
    random_distinct: bool
    violations: tuple = field(default=())  # ((i, j), value, reason)

    @property
    def ok(self) -> bool:
        return self.red_unique and self.random_distinct


def check_table_conditions(exponents: GaspExponents) -> ConditionReport:
    """Check (i) every red-block value appears exactly once in the whole
    table and (ii) alpha_R and beta_R are each pairwise distinct.

    Works for arbitrary exponent assignments, not only GASP ones.
    """
    e = exponents
    alpha, beta = e.alpha, e.beta
    counts = Counter(a + b for a in alpha for b in beta)
    violations = []
    for i in range(e.K):
        for j in range(e.L):
            v = alpha[i] + beta[j]
            if counts[v] != 1:
                violations.append(((i, j), v, "red value repeated"))
    red_unique = not violations
    random_distinct = True
    if len(set(e.alpha_R)) != len(e.alpha_R):
        random_distinct = False
        violations.append((None, None, "alpha_R not distinct"))
    if len(set(e.beta_R)) != len(e.beta_R):
        random_distinct = False
        violations.append((None, None, "beta_R not distinct"))
    return ConditionReport(red_unique, random_distinct, tuple(violations))


def symmetrize_count(params: SchemeParams) -> int:
    """min of the precomputation count over (K, L) and the transposed (L, K)."""
    counts = []
    for K, L in ((params.K, params.L), (params.L, params.K)):
        try:
            p = SchemeParams(K, L, params.T, params.r)
        except InvalidChainLength:
            continue
        counts.append(count_servers(build_gasp_exponents(p), precompute=True))
    if not counts:
        raise InvalidChainLength(f"r={params.r} is invalid in both orientations")
    return min(counts)


class DegreeTable:
    """The (K+T) x (L+T) table of exponent sums alpha_i + beta_j."""

    def __init__(self, exponents: GaspExponents):
        self.exponents = exponents
        self.alpha = exponents.alpha
        self.beta = exponents.beta
        self.cells = [[a + b for b in self.beta] for a in self.alpha]

    def cell(self, i: int, j: int) -> int:
        return self.cells[i][j]

    def block(self, name: str) -> list[list[int]]:
        K, L = self.exponents.K, self.exponents.L
        rows = slice(0, K) if name in ("red", "B") else slice(K, None)
        cols = slice(0, L) if name in ("red", "C") else slice(L, None)
        if name not in ("red", "B", "C", "corner"):
            raise ValueError(f"unknown block {name!r}")
        return [r[cols] for r in self.cells[rows]]

    def distinct(self, precompute: bool = True) -> int:
        return count_servers(self.exponents, precompute)

    def to_text(self) -> str:
        width = max(len(str(v)) for row in self.cells for v in row + [max(self.alpha)]) + 1
        K, L = self.exponents.K, self.exponents.L
        head = " " * width + "|" + "".join(f"{b:>{width}}" + ("|" if j == L - 1 else "") for j, b in enumerate(self.beta))
        lines = [head, "-" * len(head)]
        for i, (a, row) in enumerate(zip(self.alpha, self.cells)):
            cells = "".join(f"{v:>{width}}" + ("|" if j == L - 1 else "") for j, v in enumerate(row))
            lines.append(f"{a:>{width}}|" + cells)
            if i == K - 1 and self.exponents.T:
                lines.append("-" * len(head))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha"] + list(self.beta))
        for a, row in zip(self.alpha, self.cells):
            w.writerow([a] + row)
        return buf.getvalue()


def gasp_sweep(K_range: Sequence[int], L_range: Sequence[int], T_range: Sequence[int]):
    """Yield every admissible SchemeParams in the given ranges."""
    for K in K_range:
        for L in L_range:
            for T in T_range:
                for r in range(1, min(K, T) + 1):
                    yield SchemeParams(K, L, T, r)
