"""Prime-field arithmetic, matrix-coefficient sparse polynomials and
generalized Vandermonde solving.

Field elements are plain Python ints under the hood; matrices are numpy
object arrays so products never overflow before reduction.  Everything
here is immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FieldMismatch,
    InvalidModulus,
    SingularSystem,
)

MERSENNE_61 = 2**61 - 1

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or isinstance(self.q, bool):
            raise InvalidModulus(f"modulus must be an integer, got {self.q!r}")
        object.__setattr__(self, "q", int(self.q))
        if self.q >= 2**64:
            raise InvalidModulus("modulus must fit in 64 bits")
        if not is_prime(self.q):
            raise InvalidModulus(f"{self.q} is not prime")

    def __call__(self, value) -> FieldElement:
        return FieldElement(int(value) % self.q, self)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def __repr__(self):
        return f"GF({self.q})"


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.field.q)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value + v, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value - v, self.field)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(v - self.value, self.field)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value * v, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.field.q), self.field)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise DivisionByZero(f"0 has no inverse in {self.field}")
        return FieldElement(pow(self.value, -1, self.field.q), self.field)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * FieldElement(v, self.field).inverse()

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.q})"


def _check_same(a: FieldElement, b: FieldElement):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a + b


def ff_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a - b


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a * b


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


class FieldMatrix:
    """Dense matrix over a prime field.

    ``data`` is a read-only numpy object array of canonical residues.
    """

    __slots__ = ("field", "data")
    __hash__ = None

    def __init__(self, field: PrimeField, data):
        arr = np.array(data, dtype=object)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(f"need a non-empty 2-D array, got shape {arr.shape}")
        arr = np.vectorize(lambda x: int(x) % field.q, otypes=[object])(arr)
        arr.flags.writeable = False
        self.field = field
        self.data = arr

    @classmethod
    def _wrap(cls, field: PrimeField, arr: np.ndarray) -> FieldMatrix:
        # arr must already be reduced and of dtype object.
        m = cls.__new__(cls)
        arr = np.array(arr, dtype=object)
        arr.flags.writeable = False
        m.field = field
        m.data = arr
        return m

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls._wrap(field, np.zeros((rows, cols), dtype=np.int64).astype(object))

    @classmethod
    def identity(cls, field, n):
        return cls._wrap(field, np.eye(n, dtype=np.int64).astype(object))

    @classmethod
    def random(cls, field, rows, cols, rng: np.random.Generator):
        vals = rng.integers(0, field.q, size=(rows, cols), dtype=np.uint64)
        return cls._wrap(field, vals.astype(object))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @property
    def entries(self) -> list[FieldElement]:
        return [FieldElement(v, self.field) for v in self.data.ravel()]

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def is_zero(self) -> bool:
        return not any(self.data.ravel())

    def _check(self, other: FieldMatrix):
        if not isinstance(other, FieldMatrix):
            raise TypeError(f"expected FieldMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return FieldMatrix._wrap(self.field, (self.data + other.data) % self.field.q)

    def __sub__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return FieldMatrix._wrap(self.field, (self.data - other.data) % self.field.q)

    def __neg__(self):
        return FieldMatrix._wrap(self.field, (-self.data) % self.field.q)

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        return FieldMatrix._wrap(self.field, (self.data @ other.data) % self.field.q)

    def scale(self, c) -> FieldMatrix:
        if isinstance(c, FieldElement):
            if c.field != self.field:
                raise FieldMismatch(f"{self.field} vs {c.field}")
            c = c.value
        return FieldMatrix._wrap(self.field, (self.data * int(c)) % self.field.q)

    def __mul__(self, c):
        if isinstance(c, (FieldElement, int, np.integer)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self.data == other.data))
        )

    def __repr__(self):
        return f"FieldMatrix({self.field}, {self.tolist()})"

    @staticmethod
    def vstack(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
        return FieldMatrix._wrap(blocks[0].field, np.vstack([b.data for b in blocks]))

    @staticmethod
    def hstack(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
        return FieldMatrix._wrap(blocks[0].field, np.hstack([b.data for b in blocks]))


class SparsePoly:
    """Polynomial in one variable whose coefficients are FieldMatrix blocks.

    Zero coefficients are never stored, so ``support()`` is exactly the set
    of exponents with a nonzero coefficient.  An empty polynomial still
    needs ``field`` and ``shape``.
    """

    __slots__ = ("terms", "field", "shape")

    def __init__(self, terms: Mapping[int, FieldMatrix], field=None, shape=None):
        items = sorted(terms.items())
        for e, c in items:
            if not isinstance(e, (int, np.integer)) or e < 0:
                raise ValueError(f"exponent must be a nonnegative int, got {e!r}")
            if field is None:
                field, shape = c.field, c.shape
            if c.field != field:
                raise FieldMismatch(f"coefficient at {e} lives in {c.field}, expected {field}")
            if c.shape != tuple(shape):
                raise DimensionMismatch(f"coefficient at {e} has shape {c.shape}, expected {shape}")
        if field is None:
            raise ValueError("an empty SparsePoly needs explicit field and shape")
        self.field = field
        self.shape = tuple(shape)
        self.terms = {int(e): c for e, c in items if not c.is_zero()}

    def support(self) -> tuple[int, ...]:
        return tuple(self.terms)

    def coeff(self, e: int) -> FieldMatrix:
        c = self.terms.get(e)
        return c if c is not None else FieldMatrix.zeros(self.field, *self.shape)

    def __add__(self, other: SparsePoly) -> SparsePoly:
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if other.shape != self.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return SparsePoly(out, self.field, self.shape)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and self.terms.keys() == other.terms.keys()
            and all(self.terms[e] == other.terms[e] for e in self.terms)
        )

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SparsePoly(support={list(self.terms)}, shape={self.shape}, field={self.field})"


def _as_element(field: PrimeField, a) -> int:
    if isinstance(a, FieldElement):
        if a.field != field:
            raise FieldMismatch(f"point in {a.field}, polynomial over {field}")
        return a.value
    if isinstance(a, (int, np.integer)):
        return int(a) % field.q
    raise TypeError(f"cannot use {a!r} as a field element")


def poly_eval(p: SparsePoly, a) -> FieldMatrix:
    """Evaluate ``p`` at a single point, returning a coefficient-shaped matrix."""
    x = _as_element(p.field, a)
    q = p.field.q
    acc = np.zeros(p.shape, dtype=np.int64).astype(object)
    for e, c in p.terms.items():
        acc = acc + c.data * pow(x, e, q)
    return FieldMatrix._wrap(p.field, acc % q)


def poly_eval_many(p: SparsePoly, points: Sequence) -> list[FieldMatrix]:
    """Evaluate ``p`` at every point in one tensor contraction."""
    q = p.field.q
    xs = [_as_element(p.field, a) for a in points]
    if not p.terms:
        return [FieldMatrix.zeros(p.field, *p.shape) for _ in xs]
    exps = list(p.terms)
    powers = np.array([[pow(x, e, q) for e in exps] for x in xs], dtype=object)
    coeffs = np.stack([p.terms[e].data for e in exps])
    vals = np.tensordot(powers, coeffs, axes=(1, 0)) % q
    return [FieldMatrix._wrap(p.field, v) for v in vals]


def poly_mul(p: SparsePoly, g: SparsePoly) -> SparsePoly:
    if p.field != g.field:
        raise FieldMismatch(f"{p.field} vs {g.field}")
    if p.shape[1] != g.shape[0]:
        raise DimensionMismatch(f"cannot multiply {p.shape} by {g.shape} coefficients")
    q = p.field.q
    acc: dict[int, np.ndarray] = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in g.terms.items():
            prod = c1.data @ c2.data
            e = e1 + e2
            acc[e] = acc[e] + prod if e in acc else prod
    terms = {e: FieldMatrix._wrap(p.field, v % q) for e, v in acc.items()}
    return SparsePoly(terms, p.field, (p.shape[0], g.shape[1]))


def generalized_vandermonde(field: PrimeField, exponents: Sequence[int], points: Sequence) -> np.ndarray:
    """Object array ``M[i][j] = points[i] ** exponents[j]``."""
    q = field.q
    xs = [_as_element(field, a) for a in points]
    return np.array([[pow(x, e, q) for e in exponents] for x in xs], dtype=object).reshape(
        len(xs), len(exponents)
    )


def _solve_mod(M: np.ndarray, V: np.ndarray, q: int) -> np.ndarray:
    """Gauss-Jordan with first-nonzero pivoting; returns X with M X = V."""
    n = M.shape[0]
    aug = np.concatenate([M, V], axis=1).astype(object) % q
    for k in range(n):
        nz = [i for i in range(k, n) if aug[i, k] != 0]
        if not nz:
            raise SingularSystem(f"no pivot in column {k}")
        p = nz[0]
        if p != k:
            aug[[k, p]] = aug[[p, k]]
        aug[k] = (aug[k] * pow(int(aug[k, k]), -1, q)) % q
        col = aug[:, k].copy()
        col[k] = 0
        aug = (aug - col[:, None] * aug[k][None, :]) % q
    return aug[:, n:]


def gen_vandermonde_solve(exponents: Sequence[int], points: Sequence[FieldElement], values: Sequence):
    """Interpolate a sparse polynomial with known support from its samples.

    Returns a dict mapping every exponent to its recovered coefficient.
    ``values`` may be FieldMatrix blocks or FieldElements; the output uses
    the same kind.
    """
    n = len(exponents)
    if len(points) != n or len(values) != n:
        raise DimensionMismatch(
            f"{n} unknowns need exactly {n} samples, got {len(points)} points and {len(values)} values"
        )
    if n == 0:
        return {}
    if any(b <= a for a, b in zip(exponents, exponents[1:])) or exponents[0] < 0:
        raise ValueError("exponents must be sorted, distinct and nonnegative")
    field = points[0].field
    for a in points:
        if not isinstance(a, FieldElement) or a.field != field:
            raise FieldMismatch("all points must be elements of one field")
    xs = [a.value for a in points]
    if len(set(xs)) != n:
        raise SingularSystem("evaluation points are not distinct")
    if 0 in xs:
        raise SingularSystem("evaluation points must be nonzero")

    scalar = isinstance(values[0], FieldElement)
    if scalar:
        vals = [FieldMatrix._wrap(field, np.array([[v.value]], dtype=object)) for v in values]
    else:
        vals = list(values)
    shape = vals[0].shape
    for v in vals:
        if v.field != field:
            raise FieldMismatch(f"value in {v.field}, points in {field}")
        if v.shape != shape:
            raise DimensionMismatch(f"value shapes differ: {v.shape} vs {shape}")

    M = generalized_vandermonde(field, exponents, points)
    V = np.stack([v.data.ravel() for v in vals])
    X = _solve_mod(M, V, field.q)
    out = {}
    for e, row in zip(exponents, X):
        if scalar:
            out[e] = FieldElement(int(row[0]), field)
        else:
            out[e] = FieldMatrix._wrap(field, row.reshape(shape))
    return out


def is_nonsingular(mat, q: int) -> bool:
    """Exact rank test of one square matrix over GF(q)."""
    rows = [[int(v) % q for v in r] for r in mat]
    n = len(rows)
    for k in range(n):
        p = next((i for i in range(k, n) if rows[i][k]), None)
        if p is None:
            return False
        rows[k], rows[p] = rows[p], rows[k]
        inv = pow(rows[k][k], -1, q)
        for i in range(k + 1, n):
            f = rows[i][k] * inv % q
            if f:
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[k])]
    return True


_M61 = np.uint64(MERSENNE_61)
_LO31 = np.uint64(2**31 - 1)
_LO30 = np.uint64(2**30 - 1)


def _reduce_m61(s):
    s = (s & _M61) + (s >> np.uint64(61))
    return np.where(s >= _M61, s - _M61, s)


def _mulmod_m61(a, b):
    """Exact a*b mod 2**61-1 on uint64 arrays with entries < 2**61."""
    a1, a0 = a >> np.uint64(31), a & _LO31
    b1, b0 = b >> np.uint64(31), b & _LO31
    mid = a1 * b0 + a0 * b1  # < 2**62
    # 2**62 = 2 and 2**61 = 1 modulo the prime
    s = (a1 * b1 << np.uint64(1)) + (mid >> np.uint64(30)) + ((mid & _LO30) << np.uint64(31)) + a0 * b0
    return _reduce_m61(s)


def _eliminate_step(piv, rest, below, row, q):
    if q == MERSENNE_61:
        x = _mulmod_m61(piv, rest)
        y = _mulmod_m61(below, row)
        return _reduce_m61(x + (_M61 - y))
    return (piv * rest - below * row) % q


def native_residues(arr, q: int) -> np.ndarray:
    """Reduced copy of ``arr`` in the fastest exact dtype for modulus q."""
    if q == MERSENNE_61:
        return arr if arr.dtype == np.uint64 else (arr % q).astype(np.uint64)
    if q < 2**31:
        return arr if arr.dtype == np.int64 else (arr % q).astype(np.int64)
    return arr.astype(object) % q


def nonsingular_batch(mats: np.ndarray, q: int) -> np.ndarray:
    """Vectorized nonsingularity test for a stack of square matrices.

    Runs division-free elimination without pivoting across the whole stack;
    a matrix whose diagonal pivots all stay nonzero is nonsingular.  The
    rare matrices that hit a zero pivot are re-checked one by one.
    """
    mats = np.asarray(mats)
    S, n, _ = mats.shape
    if S == 0:
        return np.zeros(0, dtype=bool)
    M = native_residues(mats, q).copy()
    unresolved = np.zeros(S, dtype=bool)
    for k in range(n):
        piv = M[:, k, k]
        unresolved |= (piv == 0).astype(bool)
        if k == n - 1:
            break
        M[:, k + 1:, k + 1:] = _eliminate_step(
            piv[:, None, None], M[:, k + 1:, k + 1:],
            M[:, k + 1:, k][:, :, None], M[:, k, k + 1:][:, None, :], q,
        )
    result = ~unresolved
    for s in np.flatnonzero(unresolved):
        result[s] = is_nonsingular(mats[s], q)
    return result


def to_elements(field: PrimeField, values: Iterable[int]) -> list[FieldElement]:
    return [field(v) for v in values]
