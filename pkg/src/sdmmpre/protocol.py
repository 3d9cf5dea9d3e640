"""End-to-end secure distributed matrix multiplication with precomputation.

Flow: partition A into K row blocks and B into L column blocks, encode them
as f = f_I + f_R and g = g_I + g_R, hand each server (f(a_i), g(a_i)),
subtract the precomputed f_R*g_R evaluations from the answers, interpolate
the remaining support and read off the A_k B_l blocks.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .audit import SubsetAudit, subset_rank_check
from .degree_table import (
    GaspExponents,
    SchemeParams,
    build_gasp_exponents,
    check_table_conditions,
    support_decomposition,
)
from .errors import DimensionMismatch, FieldMismatch, PartitionError, PointSelectionFailed
from .field import (
    FieldElement,
    FieldMatrix,
    PrimeField,
    SparsePoly,
    gen_vandermonde_solve,
    generalized_vandermonde,
    is_nonsingular,
    poly_eval_many,
    poly_mul,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionedMatrices:
    field: PrimeField
    A_blocks: tuple[FieldMatrix, ...]
    B_blocks: tuple[FieldMatrix, ...]

    @property
    def K(self):
        return len(self.A_blocks)

    @property
    def L(self):
        return len(self.B_blocks)

    @property
    def a_shape(self):
        return self.A_blocks[0].shape

    @property
    def b_shape(self):
        return self.B_blocks[0].shape

    def assemble_A(self) -> FieldMatrix:
        return FieldMatrix.vstack(self.A_blocks)

    def assemble_B(self) -> FieldMatrix:
        return FieldMatrix.hstack(self.B_blocks)


def partition(A: FieldMatrix, B: FieldMatrix, K: int, L: int) -> PartitionedMatrices:
    if A.field != B.field:
        raise PartitionError(f"A is over {A.field} but B is over {B.field}")
    if A.cols != B.rows:
        raise PartitionError(f"inner dimensions differ: {A.shape} x {B.shape}")
    if K < 1 or A.rows % K:
        raise PartitionError(f"K={K} does not divide the {A.rows} rows of A")
    if L < 1 or B.cols % L:
        raise PartitionError(f"L={L} does not divide the {B.cols} columns of B")
    h, w = A.rows // K, B.cols // L
    a_blocks = tuple(FieldMatrix._wrap(A.field, A.data[k * h:(k + 1) * h]) for k in range(K))
    b_blocks = tuple(FieldMatrix._wrap(B.field, B.data[:, l * w:(l + 1) * w]) for l in range(L))
    return PartitionedMatrices(A.field, a_blocks, b_blocks)


@dataclass(frozen=True)
class EncodingState:
    exponents: GaspExponents
    R_blocks: tuple[FieldMatrix, ...]
    S_blocks: tuple[FieldMatrix, ...]
    f: SparsePoly
    g: SparsePoly

    @property
    def f_R(self) -> SparsePoly:
        e = self.exponents
        return SparsePoly(dict(zip(e.alpha_R, self.R_blocks)), self.f.field, self.f.shape)

    @property
    def g_R(self) -> SparsePoly:
        e = self.exponents
        return SparsePoly(dict(zip(e.beta_R, self.S_blocks)), self.g.field, self.g.shape)


def _random_nonzero(field, shape, rng):
    while True:
        m = FieldMatrix.random(field, *shape, rng)
        if not m.is_zero():
            return m


def encode(
    pm: PartitionedMatrices,
    exponents: GaspExponents,
    rng_seed=None,
    *,
    zero_masks: bool = False,
    max_resample: int = 16,
) -> EncodingState:
    """Build f and g.  Random blocks are drawn uniformly, never all-zero, and
    redrawn when the product polynomial loses part of its expected support
    through cancellation.  ``zero_masks`` is a test hook that sets every
    random block to zero (insecure on purpose).
    """
    if (pm.K, pm.L) != (exponents.K, exponents.L):
        raise DimensionMismatch(f"exponents are for K={exponents.K}, L={exponents.L}; data has K={pm.K}, L={pm.L}")
    rng = np.random.default_rng(rng_seed)
    fld = pm.field
    T = exponents.T
    expected = set(support_decomposition(exponents).full)
    data_nonzero = not any(b.is_zero() for b in pm.A_blocks + pm.B_blocks)
    for attempt in range(max_resample):
        if zero_masks:
            R = tuple(FieldMatrix.zeros(fld, *pm.a_shape) for _ in range(T))
            S = tuple(FieldMatrix.zeros(fld, *pm.b_shape) for _ in range(T))
        else:
            R = tuple(_random_nonzero(fld, pm.a_shape, rng) for _ in range(T))
            S = tuple(_random_nonzero(fld, pm.b_shape, rng) for _ in range(T))
        f = SparsePoly(
            {**dict(zip(exponents.alpha_I, pm.A_blocks)), **dict(zip(exponents.alpha_R, R))},
            fld, pm.a_shape,
        )
        g = SparsePoly(
            {**dict(zip(exponents.beta_I, pm.B_blocks)), **dict(zip(exponents.beta_R, S))},
            fld, pm.b_shape,
        )
        es = EncodingState(exponents, R, S, f, g)
        if zero_masks or not data_nonzero:
            return es
        if set(poly_mul(f, g).support()) == expected:
            return es
        log.debug("support cancellation on attempt %d, resampling", attempt)
    log.warning("product support still collapsed after %d draws; keeping last draw", max_resample)
    return es


@dataclass(frozen=True)
class SchemeInstance:
    field: PrimeField
    exponents: GaspExponents
    points: tuple[FieldElement, ...]
    decoding_plan: tuple[int, ...]
    red_positions: dict  # exponent -> (k, l)
    precompute: bool = True
    security: SubsetAudit | None = dc_field(default=None, compare=False)

    @property
    def n_servers(self) -> int:
        return len(self.points)


def make_instance(field: PrimeField, exponents: GaspExponents, points, precompute: bool = True) -> SchemeInstance:
    """Assemble an instance from given points without any admissibility checks."""
    rep = check_table_conditions(exponents)
    if not rep.red_unique:
        raise ValueError(f"red block values are not unique: {rep.violations[:3]}")
    dec = support_decomposition(exponents)
    plan = dec.without_corner if precompute else dec.full
    red = {
        a + b: (k, l)
        for k, a in enumerate(exponents.alpha_I)
        for l, b in enumerate(exponents.beta_I)
    }
    pts = tuple(p if isinstance(p, FieldElement) else field(p) for p in points)
    return SchemeInstance(field, exponents, pts, plan, red, precompute)


def security_exponents(exponents: GaspExponents) -> dict:
    return {"alpha_R": exponents.alpha_R, "beta_R": exponents.beta_R}


def choose_points(
    field: PrimeField,
    exponents: GaspExponents,
    rng_seed=None,
    max_attempts: int = 8,
    *,
    precompute: bool = True,
    exhaustive_limit: int = 10**5,
    samples: int = 10**4,
) -> SchemeInstance:
    """Sample distinct nonzero evaluation points that make the scheme
    decodable and T-secure, verifying both conditions constructively."""
    dec = support_decomposition(exponents)
    plan = dec.without_corner if precompute else dec.full
    n = len(plan)
    if field.q - 1 < n:
        raise PointSelectionFailed(f"GF({field.q}) has only {field.q - 1} nonzero points, {n} needed")
    rng = random.Random(rng_seed)
    for attempt in range(max_attempts):
        pts = rng.sample(range(1, field.q), n)
        if not is_nonsingular(generalized_vandermonde(field, plan, pts), field.q):
            log.debug("attempt %d: decoding matrix singular", attempt)
            continue
        audit = subset_rank_check(
            field, pts, security_exponents(exponents), exponents.T,
            seed=rng.randrange(2**32), exhaustive_limit=exhaustive_limit, samples=samples,
        )
        if audit.failures:
            log.debug("attempt %d: %d insecure subsets", attempt, len(audit.failures))
            continue
        inst = make_instance(field, exponents, pts, precompute)
        return SchemeInstance(**{**inst.__dict__, "security": audit})
    raise PointSelectionFailed(f"no admissible points in GF({field.q}) after {max_attempts} attempts")


@dataclass(frozen=True)
class PrecomputeBundle:
    fRgR: SparsePoly
    evaluations: tuple[FieldMatrix, ...]


def precompute(es: EncodingState, si: SchemeInstance) -> PrecomputeBundle:
    """Offline phase: depends only on the random blocks and the points."""
    fRgR = poly_mul(es.f_R, es.g_R)
    return PrecomputeBundle(fRgR, tuple(poly_eval_many(fRgR, si.points)))


def server_views(es: EncodingState, si: SchemeInstance) -> list[tuple[FieldMatrix, FieldMatrix]]:
    """What server i receives: the pair (f(a_i), g(a_i))."""
    fs = poly_eval_many(es.f, si.points)
    gs = poly_eval_many(es.g, si.points)
    return list(zip(fs, gs))


def server_compute(es: EncodingState, si: SchemeInstance, workers: int = 1) -> list[FieldMatrix]:
    views = server_views(es, si)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda v: v[0] @ v[1], views))
    return [F @ G for F, G in views]


def decode(answers, bundle: PrecomputeBundle | None, si: SchemeInstance) -> FieldMatrix:
    if len(answers) != si.n_servers:
        raise DimensionMismatch(f"expected {si.n_servers} answers, got {len(answers)}")
    if si.precompute:
        if bundle is None:
            raise ValueError("a precomputation instance needs its PrecomputeBundle")
        vals = [h - c for h, c in zip(answers, bundle.evaluations)]
    else:
        vals = list(answers)
    coeffs = gen_vandermonde_solve(si.decoding_plan, si.points, vals)
    K, L = si.exponents.K, si.exponents.L
    grid = [[None] * L for _ in range(K)]
    for e, (k, l) in si.red_positions.items():
        grid[k][l] = coeffs[e]
    return FieldMatrix.vstack([FieldMatrix.hstack(row) for row in grid])


def transcript(pm: PartitionedMatrices, si: SchemeInstance, bundle: PrecomputeBundle | None = None) -> dict:
    """Communication and storage sizes in field symbols."""
    (ar, ac), (br, bc) = pm.a_shape, pm.b_shape
    up = ar * ac + br * bc
    down = ar * bc
    out = {
        "N_pre" if si.precompute else "N": si.n_servers,
        "upload_per_server": up,
        "download_per_server": down,
        "upload_total": up * si.n_servers,
        "download_total": down * si.n_servers,
    }
    if bundle is not None:
        out["precompute_terms"] = len(bundle.fRgR)
        out["precompute_symbols"] = len(bundle.evaluations) * down
    return out


def multiply(
    A: FieldMatrix,
    B: FieldMatrix,
    params: SchemeParams,
    seed=0,
    *,
    precompute_mode: bool = True,
    max_attempts: int = 8,
    workers: int = 1,
):
    """Run the whole protocol once; returns (A@B, transcript dict, instance)."""
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    pm = partition(A, B, params.K, params.L)
    exps = build_gasp_exponents(params)
    ss = np.random.SeedSequence(seed)
    enc_seed, pt_seed = ss.spawn(2)
    si = choose_points(
        A.field, exps, int(pt_seed.generate_state(1)[0]), max_attempts, precompute=precompute_mode
    )
    es = encode(pm, exps, enc_seed)
    bundle = precompute(es, si) if precompute_mode else None
    answers = server_compute(es, si, workers)
    return decode(answers, bundle, si), transcript(pm, si, bundle), si
