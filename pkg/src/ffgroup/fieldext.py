"""Field-extension subgroups of GL_{ad}(q).

W = K^a with K = F_{q^d} is viewed as an F_q-space through the ordered basis
``alpha^j e_i`` (index ``i*d + j``), where alpha is a root of a chosen monic
irreducible of degree d over F_q (by default the first primitive one). With
this power basis the matrix of multiplication by alpha on K is exactly the
companion matrix of alpha's minimal polynomial.

K itself is the flattened field GF(p^{kd}); F_q sits inside it through
:func:`ffgroup.gf.subfield_embedding`.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import config
from .errors import BudgetExceeded, DimensionMismatch, FrameMismatch, SingularMatrix
from .gf import make_field, subfield_embedding
from .matgf import Mat, batch_matmul, batch_rank, companion, mat_det, mat_pow
from .permgrp import gl_order
from .poly import Poly, enumerate_primitive, is_irreducible


class ExtensionFrame:
    def __init__(self, base, d: int, a: int = 1, modulus: Poly | None = None, budget: int | None = None):
        if d < 1 or a < 1:
            raise ValueError("d and a must be >= 1")
        budget = config.point_budget() if budget is None else budget
        if base.q ** (a * d) > budget:
            raise BudgetExceeded(f"(q^d)^a = {base.q}^{a * d} exceeds point budget {budget}")
        if modulus is None:
            modulus = enumerate_primitive(base, d, budget=budget)[0]
        if modulus.ctx is not base or modulus.degree != d or not modulus.is_monic():
            raise FrameMismatch("modulus must be a monic degree-d polynomial over the base field")
        if not is_irreducible(modulus):
            raise FrameMismatch(f"{modulus.pretty()} is reducible")
        self.base = base
        self.d = d
        self.a = a
        self.n = a * d
        self.modulus = modulus
        self.ext = make_field(base.p, base.k * d, budget=budget)
        K = self.ext
        self.embedding = subfield_embedding(base, K)
        image = [self.embedding[c] for c in modulus.coeffs]
        self.alpha = next(x for x in range(K.q) if Poly(K, image)(x) == 0)
        self.alpha_powers = [K.pow(self.alpha, j) for j in range(d)]
        # coordinates of every element of K in the basis 1, alpha, ..., alpha^(d-1)
        coords = np.zeros((K.q, d), dtype=np.int64)
        hit = np.zeros(K.q, dtype=bool)
        for combo in itertools.product(range(base.q), repeat=d):
            x = 0
            for c, ap in zip(combo, self.alpha_powers):
                x = K.add(x, K.mul(self.embedding[c], ap))
            coords[x] = combo
            hit[x] = True
        if not hit.all():
            raise FrameMismatch("powers of alpha are not an F-basis of K")
        self.coords = coords

    def describe(self) -> dict:
        return {
            "q": str(self.base.q),
            "d": str(self.d),
            "a": str(self.a),
            "modulus": self.modulus.to_text(),
        }

    def scalar(self, value: int) -> Mat:
        """The a x a scalar matrix value*I over K."""
        return Mat.scalar(self.ext, self.a, value)

    def _block(self, lam: int) -> np.ndarray:
        # d x d matrix of x -> lam * x on K
        K = self.ext
        return np.stack([self.coords[K.mul(lam, ap)] for ap in self.alpha_powers], axis=1)


def embed_linear(frame: ExtensionFrame, M: Mat) -> Mat:
    """Matrix over F_q of the K-linear map v -> M v on K^a."""
    if M.ctx is not frame.ext or M.n != frame.a:
        raise FrameMismatch(f"expected an {frame.a}x{frame.a} matrix over {frame.ext!r}")
    if mat_det(M) == 0:
        raise SingularMatrix("embed_linear needs an invertible matrix")
    d, a = frame.d, frame.a
    out = np.zeros((a * d, a * d), dtype=np.int64)
    for i in range(a):
        for i2 in range(a):
            out[i * d : (i + 1) * d, i2 * d : (i2 + 1) * d] = frame._block(M[i, i2])
    return Mat(frame.base, out)


def frobenius_matrix(frame: ExtensionFrame) -> Mat:
    """Matrix of the componentwise q-power map on K^a."""
    K, q, d = frame.ext, frame.base.q, frame.d
    block = np.stack([frame.coords[K.pow(ap, q)] for ap in frame.alpha_powers], axis=1)
    out = np.zeros((frame.n, frame.n), dtype=np.int64)
    for i in range(frame.a):
        out[i * d : (i + 1) * d, i * d : (i + 1) * d] = block
    return Mat(frame.base, out)


def singer_generator(ctx, n: int, budget: int | None = None) -> tuple[Poly, Mat]:
    """First primitive polynomial of degree n and its companion matrix."""
    f = enumerate_primitive(ctx, n, budget=budget)[0]
    return f, companion(f)


class StandardExtSubgroup:
    """The field-extension subgroup E = N_G(<z>), z = embedded multiplication by alpha."""

    def __init__(self, frame: ExtensionFrame):
        self.frame = frame
        self.z = embed_linear(frame, frame.scalar(frame.alpha))
        self.frob = frobenius_matrix(frame)
        powers, cur = [], Mat.identity(frame.base, frame.n)
        while True:
            powers.append(cur)
            cur = cur @ self.z
            if cur.is_identity():
                break
        self.z_powers = powers
        self._z_keys = frozenset(m.key() for m in powers)
        self._elements = None

    @property
    def z_order(self) -> int:
        return len(self.z_powers)

    def order(self) -> int:
        return ext_subgroup_order(self)

    def element_batches(self, limit: int = 10**6, chunk: int = 1 << 16):
        """All of E as stacked (m, n, n) arrays over F_q.

        Elements are embed_linear(M) * frob^j over M in GL_a(K), 0 <= j < d;
        GL_a(K) comes from filtering all a x a matrices over K by rank.
        """
        frame = self.frame
        K, a, d, n = frame.ext, frame.a, frame.d, frame.n
        total = K.q ** (a * a)
        if total > limit:
            raise BudgetExceeded(f"|K|^(a^2) = {K.q}^{a * a} exceeds enumeration limit {limit}")
        blocks = np.stack([frame._block(lam) for lam in range(K.q)])
        frobs = [mat_pow(self.frob, j).a for j in range(d)]
        weights = K.q ** np.arange(a * a - 1, -1, -1, dtype=np.int64)
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            ms = (idx[:, None] // weights[None, :] % K.q).reshape(-1, a, a)
            ms = ms[batch_rank(K, ms) == a]
            lin = blocks[ms].transpose(0, 1, 3, 2, 4).reshape(-1, n, n)
            for fj in frobs:
                yield batch_matmul(frame.base, lin, fj)

    def elements(self, limit: int = 10**6) -> list[Mat]:
        """All of E as matrices (cached)."""
        if self._elements is None:
            base = self.frame.base
            self._elements = [Mat(base, x) for batch in self.element_batches(limit) for x in batch]
        return self._elements

    def element_keys(self) -> frozenset:
        return frozenset(m.key() for m in self.elements())


def gl_brute(K, a: int, limit: int = 10**6):
    """GL_a(K) by filtering all a x a matrices for nonzero determinant."""
    if K.q ** (a * a) > limit:
        raise BudgetExceeded(f"|K|^(a^2) = {K.q}^{a * a} exceeds enumeration limit {limit}")
    for entries in itertools.product(range(K.q), repeat=a * a):
        M = Mat(K, np.array(entries, dtype=np.int64).reshape(a, a))
        if mat_det(M):
            yield M


def in_standard_ext_subgroup(E: StandardExtSubgroup, M: Mat) -> bool:
    """True iff M normalises <z>, i.e. M z M^-1 is a power of z."""
    if M.ctx is not E.frame.base or M.n != E.frame.n:
        raise DimensionMismatch("matrix does not match the subgroup's ambient GL")
    if mat_det(M) == 0:
        raise SingularMatrix("membership test needs an invertible matrix")
    return (M @ E.z @ M.inv()).key() in E._z_keys


def ext_subgroup_order(E: StandardExtSubgroup) -> int:
    frame = E.frame
    return frame.d * gl_order(frame.a, frame.base.q**frame.d)
