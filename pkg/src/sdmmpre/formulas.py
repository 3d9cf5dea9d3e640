"""Closed-form server counts, lower bounds, collusion tolerance and
asymptotic complexity exponents for GASP codes with precomputation.

All real-valued quantities are returned as ``fractions.Fraction`` so
comparisons in tests are exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .degree_table import SchemeParams, build_gasp_exponents, count_servers
from .errors import InvalidFraction


@dataclass(frozen=True)
class GasprDecomposition:
    U: int
    r0: int
    V: int
    K0: int
    W: int


def decompose(params: SchemeParams) -> GasprDecomposition:
    K, L, T, r = params.K, params.L, params.T, params.r
    U, r0 = divmod(T, r)
    V, K0 = divmod(K + T - 1, K)
    return GasprDecomposition(U=U, r0=r0, V=V, K0=K0, W=L + U - 1)


def n_pre_closed_form(params: SchemeParams) -> int:
    d = decompose(params)
    K, L, r = params.K, params.L, params.r
    base = K * L + d.V * K
    if d.V < d.W:
        return base + max(r, d.K0) + r * (d.W - (d.V + 1)) + d.r0
    if d.V == d.W:
        return base + max(d.r0, d.K0)
    return base + d.K0


def n_small_pre(K: int, L: int, T: int) -> int:
    # Python's // floors toward -inf, which the T = 1 case needs.
    return K * L + K + L + 2 * T - 4 - (T - 2) // K


def n_small_pre_symmetric(K: int, L: int, T: int) -> int:
    return K * L + K + L + 2 * T - 4 - (T - 2) // min(K, L)


def n_big_pre(K: int, L: int, T: int) -> int:
    if L == 1:
        return 2 * K + T - 1
    low_T = K * L + L * T + K - T
    high_T = 2 * K * L - K + T
    if T == K:
        assert low_T == high_T, (K, L, T)
    return low_T if T <= K else high_T


def n_big_pre_symmetric(K: int, L: int, T: int):
    """Symmetrized GASP_big count, or ``None`` where the case split has a gap
    (2 <= m and m < T < M)."""
    m, M = min(K, L), max(K, L)
    if m == 1:
        return 2 * M + T - 1
    if T <= m:
        return K * L + m * T + M - T
    if M <= T:
        return 2 * K * L - M + T
    return None


class Comparison(enum.Enum):
    SMALL_WINS = "SmallWins"
    BIG_WINS = "BigWins"
    TIE = "Tie"
    UNDETERMINED = "Undetermined"


def compare_small_big(K: int, L: int, T: int) -> Comparison:
    m, M = min(K, L), max(K, L)
    if m == 1 or T == 1:
        return Comparison.TIE
    if 2 <= T <= m:
        return Comparison.TIE if m == T == 2 else Comparison.SMALL_WINS
    if Fraction(M * m * m - 2, m - 1) < T:
        return Comparison.BIG_WINS
    return Comparison.UNDETERMINED


@dataclass(frozen=True)
class BoundsReport:
    bound1: int
    bound2: int | None
    bound3_by_m: tuple[int, ...]  # index 0 is m = 1
    best: int


def lower_bounds(K: int, L: int, T: int) -> BoundsReport:
    b1 = K * L + max(K, L) + T - 1
    b2 = K * L + max(K, L) + T if min(K, L, T) >= 2 else None
    mn = min(K, L, T)
    b3 = tuple(K * L + K + L + T + m - 2 - m * mn for m in range(1, T + 1))
    best = max([b1] + ([b2] if b2 is not None else []) + list(b3))
    return BoundsReport(b1, b2, b3, best)


@dataclass(frozen=True)
class Optimality:
    n_pre: int
    bound: int

    @property
    def gap(self) -> int:
        return self.n_pre - self.bound

    @property
    def achieving(self) -> bool:
        return self.gap == 0

    def __str__(self):
        return "BoundAchieving" if self.achieving else f"Gap({self.gap})"


def optimality_check(K: int, L: int, T: int) -> Optimality:
    return Optimality(n_small_pre_symmetric(K, L, T), lower_bounds(K, L, T).best)


def optimality_claimed(K: int, L: int, T: int) -> bool:
    """Parameters where GASP_small is claimed to meet the bounds."""
    return K == 1 or L == 1 or T <= 2


def optimality_provable(K: int, L: int, T: int) -> bool:
    """Parameters where the gap arithmetic actually closes.

    Narrower than ``optimality_claimed``: at T = 2 with min(K, L) >= 3 the
    symmetric GASP_small count exceeds every bound by one.
    """
    return min(K, L, T) == 1 or min(K, L) == T == 2


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float.

    Floats go through ``repr`` so 0.6 becomes 3/5, not the binary double.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class CollusionResult:
    feasible: bool
    threshold: Fraction | None  # real-valued N solving the fixed-fraction equation
    n_required: int | None  # ceiling of threshold

    def __str__(self):
        if not self.feasible:
            return "infeasible"
        return f"feasible N={self.n_required} (threshold {self.threshold})"


def collusion_tolerance(K: int, L: int, delta, precompute: bool) -> CollusionResult:
    """Servers needed by GASP_big when a fraction ``delta`` of them collude."""
    d = as_fraction(delta)
    if not 0 <= d < 1:
        raise InvalidFraction(f"collusion fraction must lie in [0, 1), got {delta}")
    if precompute:
        n = Fraction(2 * K * L - max(K, L)) / (1 - d)
    else:
        if d >= Fraction(1, 2):
            return CollusionResult(False, None, None)
        n = Fraction(2 * K * L - 1) / (1 - 2 * d)
    if n <= 0:
        return CollusionResult(False, None, None)
    return CollusionResult(True, n, math.ceil(n))


@dataclass(frozen=True)
class ComplexityParams:
    omega: Fraction
    epsilon: Fraction = Fraction(0)
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("omega", "epsilon", "delta"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.omega < 2:
            raise ValueError(f"omega must be >= 2, got {self.omega}")
        if not 0 <= self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class ComplexityResult:
    exponent: Fraction
    optimal_epsilon: Fraction
    optimal_exponent: Fraction


def complexity_exponent(cp: ComplexityParams, precompute: bool) -> ComplexityResult:
    """Exponent of n in the total time of GASP_big with K = L = n**epsilon.

    The server term eps + w - eps*w falls in eps while the encoding term
    rises, so the optimum sits where the two meet.
    """
    w, eps, delta = cp.omega, cp.epsilon, cp.delta
    upper = Fraction(1) if precompute else Fraction(1, 2)
    if not 0 <= delta < upper:
        raise InvalidFraction(f"delta must lie in [0, {upper}) for this mode, got {delta}")
    slope = 2 if precompute else 3
    server = eps + w - eps * w
    exponent = max(server, 2 + slope * eps)
    opt_eps = (w - 2) / (w + slope - 1)
    opt_exp = 2 + slope * opt_eps
    return ComplexityResult(exponent, opt_eps, opt_exp)


def monotonicity_violations(K: int, L: int, r: int, T_max: int):
    """(T, N(T), N(T+1)) triples where the precomputation count drops as T grows."""
    out = []
    prev = None
    for T in range(r, T_max + 1):
        n = count_servers(build_gasp_exponents(SchemeParams(K, L, T, r)), precompute=True)
        if prev is not None and n < prev[1]:
            out.append((prev[0], prev[1], n))
        prev = (T, n)
    return out
