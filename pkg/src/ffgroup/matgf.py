"""Dense square matrices over a finite field.

Entries are field encodings in an ``int64`` numpy array. Matrices act on
column vectors from the left, and the companion matrix is stored exactly as
displayed in the usual textbook form: ones on the subdiagonal and the negated
coefficients ``-a_0 .. -a_{n-1}`` down the last column.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import (
    DegreeZero,
    DimensionMismatch,
    MixedFields,
    SingularMatrix,
    ZeroPolynomial,
)
from .ntheory import order_by_stripping
from .poly import Poly

BRUTE_ORDER_LIMIT = 2**16


class Mat:
    __slots__ = ("ctx", "a", "_key")

    def __init__(self, ctx, entries):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"matrix must be square, got shape {a.shape}")
        if a.size and (a.min() < 0 or a.max() >= ctx.q):
            raise ValueError(f"entries outside GF({ctx.descriptor})")
        a.setflags(write=False)
        self.ctx = ctx
        self.a = a
        self._key = None

    @classmethod
    def _wrap(cls, ctx, a: np.ndarray) -> Mat:
        m = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.setflags(write=False)
        m.ctx, m.a, m._key = ctx, a, None
        return m

    @classmethod
    def identity(cls, ctx, n: int) -> Mat:
        return cls._wrap(ctx, np.eye(n, dtype=np.int64))

    @classmethod
    def scalar(cls, ctx, n: int, value: int) -> Mat:
        return cls._wrap(ctx, np.eye(n, dtype=np.int64) * value)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def __getitem__(self, ij) -> int:
        return int(self.a[ij])

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.a.tobytes()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.ctx is other.ctx and self.a.shape == other.a.shape and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def __repr__(self):
        return f"Mat({self.tolist()} over GF({self.ctx.descriptor}))"

    def _check(self, other: Mat) -> None:
        if other.ctx is not self.ctx:
            raise MixedFields(f"{self.ctx!r} vs {other.ctx!r}")
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")

    def __matmul__(self, other: Mat) -> Mat:
        self._check(other)
        return Mat._wrap(self.ctx, field_matmul(self.ctx, self.a, other.a))

    __mul__ = __matmul__

    def __add__(self, other: Mat) -> Mat:
        self._check(other)
        return Mat._wrap(self.ctx, self.ctx.vadd(self.a, other.a))

    def __sub__(self, other: Mat) -> Mat:
        self._check(other)
        return Mat._wrap(self.ctx, self.ctx.vsub(self.a, other.a))

    def __pow__(self, e: int) -> Mat:
        return mat_pow(self, e)

    def is_identity(self) -> bool:
        return np.array_equal(self.a, np.eye(self.n, dtype=np.int64))

    def transpose(self) -> Mat:
        return Mat._wrap(self.ctx, self.a.T)

    def apply_entrywise(self, fn) -> Mat:
        return Mat._wrap(self.ctx, np.vectorize(fn, otypes=[np.int64])(self.a))

    def inv(self) -> Mat:
        return mat_inv(self)

    def det(self) -> int:
        return mat_det(self)

    def rank(self) -> int:
        return mat_rank(self)

    def to_text(self) -> str:
        """n lines of n space-separated element encodings."""
        return "\n".join(" ".join(str(int(x)) for x in row) for row in self.a)


def field_matmul(ctx, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product of encoded arrays ``x`` (r x m) and ``y`` (m x c) over ``ctx``."""
    if ctx.k == 1:
        return (x @ y) % ctx.p
    out = np.zeros((x.shape[0], y.shape[1]), dtype=np.int64)
    for j in range(x.shape[1]):
        out = ctx.vadd(out, ctx.vmul(x[:, j : j + 1], y[j : j + 1, :]))
    return out


def mat_pow(A: Mat, e: int) -> Mat:
    if e < 0:
        A, e = mat_inv(A), -e
    result = Mat.identity(A.ctx, A.n)
    base = A
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def _eliminate(ctx, a: np.ndarray, ncols: int | None = None, reduced: bool = False):
    """Row-reduce a copy of ``a`` in its first ``ncols`` columns.

    First nonzero entry in the column is the pivot. Returns the reduced array,
    the pivot columns, and the determinant factor accumulated from the row
    operations (swap sign times pivot values), which is the determinant when
    ``a`` is square and of full rank.
    """
    a = np.array(a, dtype=np.int64)
    rows = a.shape[0]
    ncols = a.shape[1] if ncols is None else ncols
    pivots = []
    det = 1
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
            det = ctx.neg(det)
        piv = int(a[r, c])
        det = ctx.mul(det, piv)
        a[r] = ctx.vmul(a[r], ctx.inv(piv))
        targets = range(rows) if reduced else range(r + 1, rows)
        for t in targets:
            if t != r and a[t, c]:
                a[t] = ctx.vsub(a[t], ctx.vmul(a[r], int(a[t, c])))
        pivots.append(c)
        r += 1
    return a, pivots, det


def mat_rank(A: Mat) -> int:
    return len(_eliminate(A.ctx, A.a)[1])


def batch_matmul(ctx, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Stacked products ``x[i] @ y[i]`` (numpy broadcasting rules) over ``ctx``."""
    if ctx.k == 1:
        return np.matmul(x, y) % ctx.p
    out = None
    for j in range(x.shape[-1]):
        term = ctx.vmul(x[..., :, j : j + 1], y[..., j : j + 1, :])
        out = term if out is None else ctx.vadd(out, term)
    return out


def batch_rank(ctx, a: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices ``a`` with shape (N, rows, cols)."""
    a = np.array(a, dtype=np.int64)
    count, rows, cols = a.shape
    inv = np.zeros(ctx.q, dtype=np.int64)
    inv[1:] = [ctx.inv(x) for x in range(1, ctx.q)]
    rank = np.zeros(count, dtype=np.int64)
    idx = np.arange(count)
    row_ids = np.arange(rows)
    for c in range(cols):
        cand = (a[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        m, r = idx[has], rank[has]
        i = cand[has].argmax(axis=1)
        piv_rows = a[m, i]
        a[m, i] = a[m, r]
        piv_rows = ctx.vmul(piv_rows, inv[piv_rows[:, c]][:, None])
        a[m, r] = piv_rows
        below = row_ids[None, :] > r[:, None]
        factor = np.where(below, a[m, :, c], 0)
        a[m] = ctx.vsub(a[m], ctx.vmul(factor[:, :, None], piv_rows[:, None, :]))
        rank[has] += 1
    return rank


def mat_det(A: Mat) -> int:
    _, pivots, det = _eliminate(A.ctx, A.a)
    return det if len(pivots) == A.n else 0


def mat_inv(A: Mat) -> Mat:
    n, ctx = A.n, A.ctx
    aug = np.concatenate([A.a, np.eye(n, dtype=np.int64)], axis=1)
    red, pivots, _ = _eliminate(ctx, aug, ncols=n, reduced=True)
    if len(pivots) < n:
        raise SingularMatrix("matrix is not invertible")
    return Mat._wrap(ctx, red[:, n:])


def companion(f: Poly) -> Mat:
    """Companion matrix of f, after normalising f to be monic."""
    if f.is_zero():
        raise ZeroPolynomial("companion matrix of the zero polynomial")
    n = f.degree
    if n < 1:
        raise DegreeZero("companion matrix needs degree >= 1")
    ctx = f.ctx
    f = f.monic()
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        a[i + 1, i] = 1
    for i in range(n):
        a[i, n - 1] = ctx.neg(f.coeffs[i])
    return Mat._wrap(ctx, a)


def characteristic_poly(A: Mat) -> Poly:
    """det(X I - A) via reduction to upper Hessenberg form."""
    ctx, n = A.ctx, A.n
    h = [[int(x) for x in row] for row in A.a]
    add, sub, mul = ctx.add, ctx.sub, ctx.mul
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv_p = ctx.inv(h[j + 1][j])
        for i in range(j + 2, n):
            if not h[i][j]:
                continue
            u = mul(h[i][j], inv_p)
            # row_i -= u * row_{j+1}; then col_{j+1} += u * col_i keeps similarity
            h[i] = [sub(x, mul(u, y)) for x, y in zip(h[i], h[j + 1])]
            for row in h:
                row[j + 1] = add(row[j + 1], mul(u, row[i]))
    X = Poly(ctx, [0, 1])
    polys = [Poly(ctx, [1])]
    for m in range(n):
        pm = (X - Poly(ctx, [h[m][m]])) * polys[m]
        prod = 1
        for i in range(1, m + 1):
            prod = mul(prod, h[m - i + 1][m - i])
            coef = mul(h[m - i][m], prod)
            if coef:
                pm = pm - polys[m - i].scale(coef)
        polys.append(pm)
    return polys[n]


def minimal_poly(A: Mat) -> Poly:
    """Least-degree monic relation among I, A, A^2, ... (Krylov on vec(A^i))."""
    ctx, n = A.ctx, A.n
    basis: list[tuple[int, list[int], list[int]]] = []  # (pivot, reduced vec, combination)
    power = Mat.identity(ctx, n)
    for m in range(n + 1):
        vec = [int(x) for x in power.a.ravel()]
        comb = [0] * m + [1]
        for piv, bvec, bcomb in basis:
            c = vec[piv]
            if c:
                vec = [ctx.sub(x, ctx.mul(c, y)) for x, y in zip(vec, bvec)]
                comb = [ctx.sub(comb[i] if i < len(comb) else 0, ctx.mul(c, bcomb[i] if i < len(bcomb) else 0))
                        for i in range(max(len(comb), len(bcomb)))]
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            return Poly(ctx, comb)
        inv_p = ctx.inv(vec[piv])
        basis.append((piv, [ctx.mul(inv_p, x) for x in vec], [ctx.mul(inv_p, x) for x in comb]))
        power = power @ A
    raise AssertionError("Cayley-Hamilton violated")  # unreachable


def min_char_poly(A: Mat) -> tuple[Poly, Poly]:
    return minimal_poly(A), characteristic_poly(A)


def gl_exponent(n: int, q: int, p: int) -> int:
    """Exponent of GL_n(q): every element order divides it."""
    unipotent = 1
    while unipotent < n:
        unipotent *= p
    semisimple = 1
    for i in range(1, n + 1):
        semisimple = math.lcm(semisimple, q**i - 1)
    return unipotent * semisimple


def matrix_order(A: Mat) -> int:
    if mat_det(A) == 0:
        raise SingularMatrix("order of a singular matrix")
    ctx = A.ctx
    return order_by_stripping(gl_exponent(A.n, ctx.q, ctx.p), lambda m: mat_pow(A, m).is_identity())


def matrix_order_brute(A: Mat, limit: int = BRUTE_ORDER_LIMIT) -> int | None:
    """Order by successive multiplication, or None past ``limit`` steps."""
    if mat_det(A) == 0:
        raise SingularMatrix("order of a singular matrix")
    power = A
    for m in range(1, limit + 1):
        if power.is_identity():
            return m
        power = power @ A
    return None


def fixed_point_count(A: Mat) -> int:
    """Number of v in F_q^n with Av = v, zero vector included."""
    return A.ctx.q ** (A.n - mat_rank(A - Mat.identity(A.ctx, A.n)))


def parse_matrices(ctx, text: str, n: int | None = None) -> list[Mat]:
    """Parse the generator-file format: blank-line separated blocks, ``#`` comments.

    Raises ValueError with a line number on malformed input.
    """
    blocks: list[list[tuple[int, list[int]]]] = [[]]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if raw.strip() == "" and blocks[-1]:
                blocks.append([])
            continue
        try:
            row = [int(t) for t in re.split(r"[\s,]+", line)]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer entry in {raw!r}") from None
        blocks[-1].append((lineno, row))
    mats = []
    for block in blocks:
        if not block:
            continue
        size = len(block)
        first = block[0][0]
        if n is not None and size != n:
            raise ValueError(f"line {first}: block has {size} rows, expected {n}")
        for lineno, row in block:
            if len(row) != size:
                raise ValueError(f"line {lineno}: expected {size} entries, got {len(row)}")
            for x in row:
                if not 0 <= x < ctx.q:
                    raise ValueError(f"line {lineno}: entry {x} outside GF({ctx.descriptor})")
        mats.append(Mat(ctx, [row for _, row in block]))
    return mats
