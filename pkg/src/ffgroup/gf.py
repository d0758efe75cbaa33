"""Arithmetic in GF(p) and GF(p^k).

Elements are encoded as integers: the coefficient vector ``rep`` (low degree
first, in the power basis of the defining modulus) read as base-p digits.
``FieldCtx`` does all arithmetic on these encodings, both for Python ints and,
via the ``v*`` methods, elementwise on numpy arrays. ``FieldElem`` is a thin
operator-overloading wrapper for interactive and test use.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import (
    BudgetExceeded,
    DivisionByZero,
    InvalidSubfield,
    MixedFields,
    NonPrimeCharacteristic,
    ZeroElement,
)
from .ntheory import factor_integer, is_prime, order_by_stripping


def _fp_polymulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    # mod is monic; result has length deg(mod)
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for top in range(len(prod) - 1, k - 1, -1):
        c = prod[top]
        if c:
            for j in range(k + 1):
                prod[top - k + j] = (prod[top - k + j] - c * mod[j]) % p
    prod = prod[:k]
    return prod + [0] * (k - len(prod))


class FieldCtx:
    """The finite field GF(p^k). Build instances with :func:`make_field`."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | None):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._weights = [p**i for i in range(k)]
        if k > 1:
            self._build_log_tables()

    def __repr__(self) -> str:
        return f"GF({self.descriptor})"

    @property
    def descriptor(self) -> str:
        return f"{self.p}^{self.k}"

    # element encoding

    def digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def from_digits(self, digits) -> int:
        if len(digits) > self.k:
            raise ValueError(f"too many digits for {self!r}")
        value = 0
        for i, d in enumerate(digits):
            value += (int(d) % self.p) * self._weights[i]
        return value

    def elem(self, value: int) -> FieldElem:
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element encoding of {self!r}")
        return FieldElem(self, int(value))

    def __call__(self, value: int) -> FieldElem:
        return self.elem(value)

    def elements(self) -> range:
        return range(self.q)

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F."""
        return n % self.p

    def _build_log_tables(self) -> None:
        mod = list(self.modulus)
        q, p = self.q, self.p
        order_fac = factor_integer(q - 1)

        def slow_pow(x: int, e: int) -> list[int]:
            base, acc = self.digits(x), [1] + [0] * (self.k - 1)
            while e:
                if e & 1:
                    acc = _fp_polymulmod(acc, base, mod, p)
                base = _fp_polymulmod(base, base, mod, p)
                e >>= 1
            return acc

        one = [1] + [0] * (self.k - 1)
        for g in range(2, q):
            if all(slow_pow(g, (q - 1) // r) != one for r in order_fac):
                break
        self.generator = g
        exp = [0] * (2 * (q - 1))
        log = [-1] * q
        gd, cur = self.digits(g), one
        for i in range(q - 1):
            v = self.from_digits(cur)
            exp[i] = exp[i + q - 1] = v
            log[v] = i
            cur = _fp_polymulmod(cur, gd, mod, p)
        self._exp, self._log = exp, log
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)

    # scalar arithmetic

    def add(self, x: int, y: int) -> int:
        p = self.p
        if self.k == 1:
            return (x + y) % p
        if p == 2:
            return x ^ y
        out, w = 0, 1
        while x or y:
            out += ((x % p + y % p) % p) * w
            x //= p
            y //= p
            w *= p
        return out

    def neg(self, x: int) -> int:
        p = self.p
        if self.k == 1:
            return -x % p
        if p == 2:
            return x
        out, w = 0, 1
        while x:
            out += (-(x % p) % p) * w
            x //= p
            w *= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.k == 1:
            return x * y % self.p
        if x == 0 or y == 0:
            return 0
        return self._exp[self._log[x] + self._log[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZero(f"inverse of zero in {self!r}")
        if self.k == 1:
            return pow(x, -1, self.p)
        return self._exp[(self.q - 1 - self._log[x]) % (self.q - 1)]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        if x == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(x, e, self.p)
        return self._exp[self._log[x] * e % (self.q - 1)]

    def pow_generic(self, x: int, e: int) -> int:
        """Square-and-multiply through :meth:`mul`; independent of the log tables."""
        if e < 0:
            x, e = self.inv(x), -e
        acc = 1
        while e:
            if e & 1:
                acc = self.mul(acc, x)
            x = self.mul(x, x)
            e >>= 1
        return acc

    def frobenius(self, x: int, subfield_order: int) -> int:
        """x -> x^q0, the generator of Gal(F / F_q0)."""
        j = _log_exact(subfield_order, self.p)
        if j is None or j < 1 or self.k % j:
            raise InvalidSubfield(f"{subfield_order} is not the order of a subfield of {self!r}")
        return self.pow(x, subfield_order)

    def order(self, x: int) -> int:
        if x == 0:
            raise ZeroElement("zero has no multiplicative order")
        return order_by_stripping(self.q - 1, lambda m: self.pow(x, m) == 1)

    def is_primitive(self, x: int) -> bool:
        return self.order(x) == self.q - 1

    # elementwise arithmetic on numpy arrays of encodings

    def vadd(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        p = self.p
        if self.k == 1:
            return (x + y) % p
        if p == 2:
            return np.bitwise_xor(x, y)
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        for w in self._weights:
            out += ((x // w % p + y // w % p) % p) * w
        return out

    def vneg(self, x: np.ndarray) -> np.ndarray:
        p = self.p
        if self.k == 1:
            return -x % p
        if p == 2:
            return x.copy()
        out = np.zeros_like(x)
        for w in self._weights:
            out += (-(x // w % p) % p) * w
        return out

    def vsub(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.vadd(x, self.vneg(y))

    def vmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return x * y % self.p
        x, y = np.broadcast_arrays(x, y)
        s = self._log_np[x] + self._log_np[y]
        return np.where((x == 0) | (y == 0), 0, self._exp_np[np.maximum(s, 0)])


def _log_exact(value: int, base: int) -> int | None:
    j = 0
    while value > 1 and value % base == 0:
        value //= base
        j += 1
    return j if value == 1 else None


@dataclass(frozen=True)
class FieldElem:
    """An element of a :class:`FieldCtx` carrying its integer encoding."""

    ctx: FieldCtx
    value: int

    @property
    def rep(self) -> list[int]:
        return self.ctx.digits(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise MixedFields(f"{self.ctx!r} vs {other.ctx!r}")
            return other.value
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        y = self._other(other)
        return NotImplemented if y is NotImplemented else FieldElem(self.ctx, self.ctx.add(self.value, y))

    __radd__ = __add__

    def __sub__(self, other):
        y = self._other(other)
        return NotImplemented if y is NotImplemented else FieldElem(self.ctx, self.ctx.sub(self.value, y))

    def __rsub__(self, other):
        y = self._other(other)
        return NotImplemented if y is NotImplemented else FieldElem(self.ctx, self.ctx.sub(y, self.value))

    def __mul__(self, other):
        y = self._other(other)
        return NotImplemented if y is NotImplemented else FieldElem(self.ctx, self.ctx.mul(self.value, y))

    __rmul__ = __mul__

    def __truediv__(self, other):
        y = self._other(other)
        return NotImplemented if y is NotImplemented else FieldElem(self.ctx, self.ctx.div(self.value, y))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx is other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@GF({self.ctx.descriptor})"

    def inv(self) -> FieldElem:
        return FieldElem(self.ctx, self.ctx.inv(self.value))

    def frobenius(self, subfield_order: int) -> FieldElem:
        return FieldElem(self.ctx, self.ctx.frobenius(self.value, subfield_order))

    def order(self) -> int:
        return self.ctx.order(self.value)

    def is_primitive(self) -> bool:
        return self.ctx.is_primitive(self.value)


def make_field(p: int, k: int = 1, budget: int | None = None) -> FieldCtx:
    """Canonical GF(p^k).

    The modulus is the first monic irreducible of degree k in ascending order
    of ``a_0 + a_1 p + ... + a_{k-1} p^{k-1}``. Contexts are cached, so equal
    arguments give the identical object.
    """
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    budget = config.point_budget() if budget is None else budget
    if p**k > budget:
        raise BudgetExceeded(f"field order {p}^{k} exceeds budget {budget}")
    return _make_field(p, k)


@functools.lru_cache(maxsize=None)
def _make_field(p: int, k: int) -> FieldCtx:
    if k == 1:
        return FieldCtx(p, 1, None)
    from .poly import Poly, is_irreducible

    base = _make_field(p, 1)
    for code in range(p**k):
        coeffs = [(code // p**i) % p for i in range(k)] + [1]
        if is_irreducible(Poly(base, coeffs)):
            return FieldCtx(p, k, tuple(coeffs))
    raise AssertionError("no irreducible polynomial found")  # unreachable: one always exists


def field_for_order(q: int, budget: int | None = None) -> FieldCtx:
    from .ntheory import prime_power

    pk = prime_power(q)
    if pk is None:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return make_field(*pk, budget=budget)


def parse_field_descriptor(text: str, budget: int | None = None) -> FieldCtx:
    """Parse ``"p^k"`` or a plain prime power such as ``"9"``."""
    text = text.strip()
    if "^" in text:
        p, k = (int(t) for t in text.split("^", 1))
        return make_field(p, k, budget=budget)
    return field_for_order(int(text), budget=budget)


def subfield_embedding(sub: FieldCtx, ext: FieldCtx) -> list[int]:
    """Map each encoding of ``sub`` to its image in ``ext`` (same characteristic).

    The generator of ``sub`` is sent to the smallest-encoded root of sub's
    modulus in ``ext``; the image is the fixed set of the sub.q-power map.
    """
    if sub.p != ext.p or ext.k % sub.k:
        raise InvalidSubfield(f"{sub!r} does not embed in {ext!r}")
    if sub.k == 1:
        return list(range(sub.q))
    mod = sub.modulus
    for beta in range(ext.q):
        acc = 0
        for c in reversed(mod):
            acc = ext.add(ext.mul(acc, beta), c)
        if acc == 0:
            break
    else:
        raise AssertionError("modulus has no root in extension")
    powers = [1]
    for _ in range(sub.k - 1):
        powers.append(ext.mul(powers[-1], beta))
    table = []
    for x in range(sub.q):
        acc = 0
        for c, bp in zip(sub.digits(x), powers):
            acc = ext.add(acc, ext.mul(c, bp))
        table.append(acc)
    return table
