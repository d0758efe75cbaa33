"""Univariate polynomials over a :class:`~ffgroup.gf.FieldCtx`.

Coefficients are field encodings stored low degree first; the zero polynomial
has no coefficients. Polynomials are ordered by the base-q integer of their
coefficient vector, which is also the order used by the enumerators.
"""

from __future__ import annotations

import re
from functools import total_ordering

from . import config
from .errors import (
    BudgetExceeded,
    ConstantPolynomial,
    DivisionByZero,
    MixedFields,
    NotMonic,
    ZeroConstantTerm,
)
from .ntheory import factor_integer, order_by_stripping

__all__ = [
    "Poly",
    "poly_gcd",
    "is_irreducible",
    "is_primitive_poly",
    "enumerate_primitive",
    "enumerate_nonzero_const",
    "enumerate_monic",
    "factor_integer",
    "parse_poly",
    "x_power_minus_one",
]


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


@total_ordering
class Poly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        coeffs = [int(c) for c in coeffs]
        for c in coeffs:
            if not 0 <= c < ctx.q:
                raise ValueError(f"coefficient {c} outside GF({ctx.descriptor})")
        self.ctx = ctx
        self.coeffs = _trim(coeffs)

    @classmethod
    def monomial(cls, ctx, degree: int, coeff: int = 1) -> Poly:
        return cls(ctx, [0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.lead == 1

    def key(self) -> int:
        """Base-q integer of the coefficient vector, read low to high."""
        q = self.ctx.q
        return sum(c * q**i for i, c in enumerate(self.coeffs))

    def _check(self, other: Poly) -> None:
        if other.ctx is not self.ctx:
            raise MixedFields(f"{self.ctx!r} vs {other.ctx!r}")

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __lt__(self, other: Poly):
        self._check(other)
        return self.key() < other.key()

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        F = self.ctx
        a, b = list(self.coeffs), list(other.coeffs)
        if len(a) < len(b):
            a, b = b, a
        for i, c in enumerate(b):
            a[i] = F.add(a[i], c)
        return Poly(F, a)

    def __neg__(self) -> Poly:
        return Poly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        self._check(other)
        F = self.ctx
        if self.is_zero() or other.is_zero():
            return Poly(F, [])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scale(self, c: int) -> Poly:
        return Poly(self.ctx, [self.ctx.mul(c, x) for x in self.coeffs])

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        F = self.ctx
        rem = list(self.coeffs)
        dv = other.degree
        inv_lead = F.inv(other.lead)
        quot = [0] * max(len(rem) - dv, 0)
        for top in range(len(rem) - 1, dv - 1, -1):
            c = rem[top]
            if c == 0:
                continue
            factor = F.mul(c, inv_lead)
            quot[top - dv] = factor
            for j, b in enumerate(other.coeffs):
                rem[top - dv + j] = F.sub(rem[top - dv + j], F.mul(factor, b))
        return Poly(F, quot), Poly(F, rem[:dv])

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(self.ctx.inv(self.lead))

    def powmod(self, e: int, mod: Poly) -> Poly:
        result = Poly(self.ctx, [1]) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def __call__(self, x: int) -> int:
        F = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def to_text(self) -> str:
        """Bit-exact text form: comma-separated encodings, low degree first."""
        return ",".join(str(c) for c in self.coeffs)

    def pretty(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return "+".join(terms)

    def __repr__(self):
        return f"Poly({self.pretty()} over GF({self.ctx.descriptor}))"

    __str__ = pretty


_TERM = re.compile(r"^(?:(\d+)\*?)?(X(?:\^(\d+))?)?$")


def parse_poly(ctx, text: str) -> Poly:
    """Parse either the comma text form ``"1,1,1"`` or the pretty form ``"X^2+X+1"``."""
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    if "X" not in text and "x" not in text and "+" not in text and "-" not in text:
        return Poly(ctx, [int(t) for t in text.split(",")])
    text = text.replace("x", "X")
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
        m = _TERM.match(body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse term {body!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if not 0 <= c < ctx.q:
            raise ValueError(f"coefficient {c} outside GF({ctx.descriptor})")
        if m.group(2) is None:
            deg = 0
        else:
            deg = int(m.group(3)) if m.group(3) else 1
        if sign == "-":
            c = ctx.neg(c)
        coeffs[deg] = ctx.add(coeffs.get(deg, 0), c)
    top = max(coeffs)
    return Poly(ctx, [coeffs.get(i, 0) for i in range(top + 1)])


def poly_gcd(u: Poly, v: Poly) -> Poly:
    """Monic gcd (zero only if both inputs are zero)."""
    u._check(v)
    while not v.is_zero():
        u, v = v, u % v
    return u.monic()


def _x(ctx) -> Poly:
    return Poly(ctx, [0, 1])


class _Residues:
    """Arithmetic in F[X]/(f) on plain coefficient lists of length deg f."""

    def __init__(self, f: Poly):
        self.F = f.ctx
        self.n = f.degree
        inv = self.F.inv(f.lead)
        # X^n = sum red[j] X^j
        self.red = [self.F.neg(self.F.mul(inv, c)) for c in f.coeffs[:-1]]
        self.prime = self.F.k == 1

    def mul(self, a: list[int], b: list[int]) -> list[int]:
        n, F = self.n, self.F
        prod = [0] * (2 * n - 1)
        if self.prime:
            p = F.p
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        prod[i + j] += x * y
            prod = [c % p for c in prod]
            for top in range(2 * n - 2, n - 1, -1):
                c = prod[top]
                if c:
                    for j, r in enumerate(self.red):
                        prod[top - n + j] = (prod[top - n + j] + c * r) % p
        else:
            add, mul = F.add, F.mul
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            prod[i + j] = add(prod[i + j], mul(x, y))
            for top in range(2 * n - 2, n - 1, -1):
                c = prod[top]
                if c:
                    for j, r in enumerate(self.red):
                        prod[top - n + j] = add(prod[top - n + j], mul(c, r))
        return prod[:n]

    def one(self) -> list[int]:
        return [1] + [0] * (self.n - 1)

    def x(self) -> list[int]:
        if self.n == 1:
            return [self.red[0]]
        return [0, 1] + [0] * (self.n - 2)

    def pow(self, a: list[int], e: int) -> list[int]:
        result, base = self.one(), a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: X^(q^n) = X mod f and gcd(X^(q^(n/r)) - X, f) = 1 for primes r | n."""
    n = f.degree
    if n < 1:
        raise ConstantPolynomial("irreducibility of a constant is undefined")
    if n == 1:
        return True
    if f.constant == 0:
        return False
    q = f.ctx.q
    R = _Residues(f)
    x = R.x()
    # frob[i] = X^(q^i) mod f
    frob = [x]
    for _ in range(n):
        frob.append(R.pow(frob[-1], q))
    if frob[n] != x:
        return False
    xp = _x(f.ctx)
    for r in factor_integer(n):
        if poly_gcd(Poly(f.ctx, frob[n // r]) - xp, f).degree != 0:
            return False
    return True


def _check_primitive_input(f: Poly) -> None:
    if f.degree < 1:
        raise ConstantPolynomial("primitivity needs degree >= 1")
    if not f.is_monic():
        raise NotMonic(f"{f.pretty()} is not monic")
    if f.constant == 0:
        raise ZeroConstantTerm(f"{f.pretty()} has zero constant term")


def x_order(f: Poly) -> int:
    """Multiplicative order of X in F_q[X]/(f) for irreducible f with f(0) != 0."""
    n, q = f.degree, f.ctx.q
    R = _Residues(f)
    x, one = R.x(), R.one()
    return order_by_stripping(q**n - 1, lambda m: R.pow(x, m) == one)


def is_primitive_poly(f: Poly) -> bool:
    _check_primitive_input(f)
    if not is_irreducible(f):
        return False
    return x_order(f) == f.ctx.q ** f.degree - 1


def _check_budget(ctx, n: int, budget: int | None) -> None:
    if n < 1:
        raise ValueError("degree must be >= 1")
    budget = config.point_budget() if budget is None else budget
    if ctx.q**n > budget:
        raise BudgetExceeded(f"q^n = {ctx.q}^{n} exceeds point budget {budget}")


def enumerate_monic(ctx, n: int, budget: int | None = None):
    """All monic degree-n polynomials in ascending key order."""
    _check_budget(ctx, n, budget)
    q = ctx.q
    for code in range(q**n):
        yield Poly(ctx, [(code // q**i) % q for i in range(n)] + [1])


def enumerate_nonzero_const(ctx, n: int, budget: int | None = None) -> list[Poly]:
    return [f for f in enumerate_monic(ctx, n, budget) if f.constant != 0]


def enumerate_primitive(ctx, n: int, budget: int | None = None) -> list[Poly]:
    return [f for f in enumerate_nonzero_const(ctx, n, budget) if is_primitive_poly(f)]


def x_power_minus_one(ctx, n: int) -> Poly:
    """X^n - 1, the second generator in Degos' conjecture."""
    return Poly(ctx, [ctx.neg(1)] + [0] * (n - 1) + [1])
