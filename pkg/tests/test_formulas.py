from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sdmmpre import formulas as fm
from sdmmpre.degree_table import SchemeParams, build_gasp_exponents, count_servers, gasp_sweep
from sdmmpre.errors import InvalidFraction


def enum_pre(K, L, T, r):
    return count_servers(build_gasp_exponents(SchemeParams(K, L, T, r)), True)


def sym_enum(K, L, T, big):
    """Best count over both orientations, straight from enumeration."""
    out = []
    for k, l in ((K, L), (L, K)):
        out.append(enum_pre(k, l, T, min(k, T) if big else 1))
    return min(out)


kl = st.integers(1, 8)
tt = st.integers(1, 16)


# closed form

def test_closed_form_examples():
    assert fm.n_pre_closed_form(SchemeParams(4, 4, 4, 1)) == 28
    assert fm.n_pre_closed_form(SchemeParams(4, 4, 4, 2)) == 29
    assert fm.n_pre_closed_form(SchemeParams(4, 4, 11, 4)) == 39
    assert fm.n_pre_closed_form(SchemeParams(4, 4, 11, 1)) == 40
    for r in (1, 2, 3):
        assert fm.n_pre_closed_form(SchemeParams(3, 3, 5, r)) == 20


def test_k4_t4_decomposition():
    d = fm.decompose(SchemeParams(4, 4, 4, 1))
    assert (d.U, d.r0, d.V, d.K0, d.W) == (4, 0, 1, 3, 7)


@given(kl, kl, tt, st.integers(0, 50))
def test_closed_form_matches_enumeration(K, L, T, rr):
    p = SchemeParams(K, L, T, 1 + rr % min(K, T))
    d = fm.decompose(p)
    assert d.U * p.r + d.r0 == T and 0 <= d.r0 < p.r
    assert d.V * K + d.K0 == K + T - 1 and 0 <= d.K0 < K
    assert fm.n_pre_closed_form(p) == enum_pre(K, L, T, p.r)


# specialised formulas

def test_small_examples():
    assert fm.n_small_pre(4, 4, 4) == 28
    assert fm.n_small_pre(4, 4, 11) == 40
    assert fm.n_small_pre(1, 1, 1) == 2


def test_big_examples():
    assert fm.n_big_pre(4, 4, 11) == 39
    assert fm.n_big_pre(4, 4, 4) == 32 == fm.n_pre_closed_form(SchemeParams(4, 4, 4, 4))
    assert fm.n_big_pre(3, 1, 5) == 10


def test_big_symmetric_gap():
    assert fm.n_big_pre_symmetric(2, 5, 3) is None
    assert fm.n_big_pre_symmetric(2, 5, 2) is not None
    assert fm.n_big_pre_symmetric(2, 5, 5) is not None


@given(kl, kl, tt)
def test_specialised_formulas_match_enumeration(K, L, T):
    assert fm.n_small_pre(K, L, T) == enum_pre(K, L, T, 1)
    assert fm.n_big_pre(K, L, T) == enum_pre(K, L, T, min(K, T))
    assert fm.n_small_pre_symmetric(K, L, T) == sym_enum(K, L, T, big=False)
    big = fm.n_big_pre_symmetric(K, L, T)
    if big is not None:
        assert big == sym_enum(K, L, T, big=True)


# comparison

def test_compare_examples():
    C = fm.Comparison
    assert fm.compare_small_big(4, 4, 21) is C.BIG_WINS
    assert fm.compare_small_big(4, 4, 20) is C.UNDETERMINED
    assert fm.compare_small_big(4, 4, 3) is C.SMALL_WINS
    assert fm.compare_small_big(2, 2, 2) is C.TIE
    assert fm.compare_small_big(1, 7, 9) is C.TIE


@given(kl, kl, st.integers(1, 40))
def test_compare_agrees_with_direct(K, L, T):
    v = fm.compare_small_big(K, L, T)
    if v is fm.Comparison.UNDETERMINED:
        return
    small, big = sym_enum(K, L, T, False), sym_enum(K, L, T, True)
    expected = {-1: fm.Comparison.SMALL_WINS, 0: fm.Comparison.TIE, 1: fm.Comparison.BIG_WINS}
    assert v is expected[(small > big) - (small < big)]


# bounds

def test_bounds_examples():
    for T in range(1, 16):
        assert fm.lower_bounds(4, 4, T).bound1 == 19 + T
    b = fm.lower_bounds(3, 3, 5)
    assert (b.bound1, b.bound2, b.bound3_by_m[0], b.best) == (16, 17, 16, 17)
    b = fm.lower_bounds(1, 1, 1)
    assert (b.bound1, b.bound2, b.bound3_by_m, b.best) == (2, None, (2,), 2)


def test_optimality_examples():
    assert fm.optimality_check(1, 5, 7).achieving
    assert fm.optimality_check(2, 2, 2).achieving
    # claimed for T <= 2 but the count is 24 against a best bound of 23
    o = fm.optimality_check(4, 4, 2)
    assert (o.n_pre, o.bound, str(o)) == (24, 23, "Gap(1)")
    o = fm.optimality_check(3, 3, 5)
    assert o.gap == 3 and str(o) == "Gap(3)"
    assert str(fm.optimality_check(1, 1, 1)) == "BoundAchieving"


@given(kl, kl, tt)
def test_bound3_vs_bound1(K, L, T):
    b = fm.lower_bounds(K, L, T)
    assert b.bound3_by_m[0] - b.bound1 == max(0, min(K, L) - T)
    assert len(b.bound3_by_m) == T


def test_bounds_never_exceed_gasp():
    for p in gasp_sweep(range(1, 9), range(1, 9), range(1, 17)):
        assert fm.lower_bounds(p.K, p.L, p.T).best <= fm.n_pre_closed_form(p), p


def test_optimality_exact_region():
    exceptions = set()
    for K in range(1, 9):
        for L in range(1, 9):
            for T in range(1, 17):
                o = fm.optimality_check(K, L, T)
                assert o.gap >= 0
                assert o.achieving == fm.optimality_provable(K, L, T), (K, L, T)
                if fm.optimality_claimed(K, L, T) and not o.achieving:
                    exceptions.add((min(K, L), T))
    assert exceptions == {(m, 2) for m in range(3, 9)}


# collusion

def test_collusion_examples():
    assert not fm.collusion_tolerance(2, 2, 0.6, precompute=False).feasible
    assert fm.collusion_tolerance(2, 2, "0.6", precompute=True).feasible
    assert fm.collusion_tolerance(2, 2, 0, precompute=True).n_required == 6
    r = fm.collusion_tolerance(2, 2, Fraction(1, 2), precompute=True)
    assert r.threshold == 12 and r.n_required == 12
    r = fm.collusion_tolerance(2, 2, "0.25", precompute=False)
    assert r.threshold == 14 and str(r).startswith("feasible")


@pytest.mark.parametrize("delta", [1, 1.5, -0.1])
def test_collusion_bad_fraction(delta):
    with pytest.raises(InvalidFraction):
        fm.collusion_tolerance(2, 2, delta, True)


@given(st.integers(1, 10), st.integers(1, 10), st.fractions(0, Fraction(99, 100)))
def test_collusion_threshold_is_fixed_point(K, L, d):
    # N = 2KL - M + T with T = dN, and N = 2KL + 2T - 1 without precomputation
    r = fm.collusion_tolerance(K, L, d, True)
    assert r.threshold == 2 * K * L - max(K, L) + d * r.threshold
    r = fm.collusion_tolerance(K, L, d, False)
    if d < Fraction(1, 2):
        assert r.threshold == 2 * K * L - 1 + 2 * d * r.threshold
    else:
        assert not r.feasible


# complexity

def test_complexity_examples():
    nopre = fm.complexity_exponent(fm.ComplexityParams(3), precompute=False)
    pre = fm.complexity_exponent(fm.ComplexityParams(3), precompute=True)
    assert nopre.optimal_exponent == Fraction(13, 5) and nopre.optimal_epsilon == Fraction(1, 5)
    assert pre.optimal_exponent == Fraction(5, 2) and pre.optimal_epsilon == Fraction(1, 4)
    for mode in (True, False):
        r = fm.complexity_exponent(fm.ComplexityParams(2), mode)
        assert r.optimal_exponent == 2 and r.optimal_epsilon == 0


def test_complexity_bad_delta():
    with pytest.raises(InvalidFraction):
        fm.complexity_exponent(fm.ComplexityParams(3, 0, "0.5"), precompute=False)
    fm.complexity_exponent(fm.ComplexityParams(3, 0, "0.5"), precompute=True)
    with pytest.raises(ValueError):
        fm.ComplexityParams("1.5")


@given(st.fractions(2, 4, max_denominator=50))
def test_optimum_is_grid_minimum(w):
    for pre in (True, False):
        r = fm.complexity_exponent(fm.ComplexityParams(w), pre)
        closed = (4 * w - 2) / (w + 1) if pre else 5 - Fraction(12) / (w + 2)
        assert r.optimal_exponent == closed
        at_opt = fm.complexity_exponent(fm.ComplexityParams(w, r.optimal_epsilon), pre)
        assert at_opt.exponent == r.optimal_exponent
        grid = [fm.complexity_exponent(fm.ComplexityParams(w, Fraction(i, 200)), pre).exponent for i in range(201)]
        assert min(grid) >= r.optimal_exponent


def test_precompute_never_worse():
    for i in range(0, 21):
        w = 2 + Fraction(i, 20)
        a = fm.complexity_exponent(fm.ComplexityParams(w), True).optimal_exponent
        b = fm.complexity_exponent(fm.ComplexityParams(w), False).optimal_exponent
        assert a <= b


def test_as_fraction():
    assert fm.as_fraction(0.6) == Fraction(3, 5)
    assert fm.as_fraction("2.5") == Fraction(5, 2)


def test_monotonicity_observed():
    for K in range(1, 7):
        for L in range(1, 7):
            for r in range(1, K + 1):
                assert fm.monotonicity_violations(K, L, r, 16) == []


def test_intermediate_r_never_strictly_best():
    # observed over the sweep, not a guarantee
    for K in range(3, 9):
        for L in range(1, 9):
            for T in range(3, 17):
                m = min(K, T)
                ends = min(fm.n_pre_closed_form(SchemeParams(K, L, T, r)) for r in (1, m))
                mid = min(fm.n_pre_closed_form(SchemeParams(K, L, T, r)) for r in range(2, m) or [1])
                assert mid >= ends, (K, L, T)
