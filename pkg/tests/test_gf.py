import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffgroup.errors import DivisionByZero, InvalidSubfield, MixedFields, NonPrimeCharacteristic, ZeroElement
from ffgroup.errors import BudgetExceeded
from ffgroup.gf import field_for_order, make_field, parse_field_descriptor, subfield_embedding
from ffgroup.ntheory import euler_phi, factor_integer

from conftest import PRIME_POWERS_64


def test_canonical_moduli():
    assert make_field(2, 1).modulus is None
    assert make_field(2, 2).modulus == (1, 1, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(2, 3) is make_field(2, 3)


def test_bad_constructions():
    with pytest.raises(NonPrimeCharacteristic):
        make_field(6)
    with pytest.raises(NonPrimeCharacteristic):
        field_for_order(12)
    with pytest.raises(BudgetExceeded):
        make_field(2, 13)


def test_small_examples():
    F5 = make_field(5)
    assert F5.add(3, 4) == 2
    assert F5.pow(2, 4) == 1
    assert F5.order(2) == 4
    assert F5.is_primitive(2)
    F4 = make_field(2, 2)
    t = 2  # encoding of t
    assert F4.mul(t, t) == 3  # t + 1
    assert F4.inv(t) == 3
    assert F4.frobenius(t, 2) == 3
    assert F4.frobenius(F4.frobenius(t, 2), 2) == t
    F9 = make_field(3, 2)
    assert F9.order(3) == 4
    assert not F9.is_primitive(3)
    assert not F9.is_primitive(1)


def test_elem_wrapper():
    F4 = make_field(2, 2)
    t = F4(2)
    assert t * t == t + 1
    assert t.inv() == t + 1
    assert t.rep == [0, 1]
    assert (t**3).value == 1
    with pytest.raises(DivisionByZero):
        t / F4(0)
    with pytest.raises(MixedFields):
        t + make_field(3, 2)(1)
    with pytest.raises(ZeroElement):
        F4(0).order()
    with pytest.raises(InvalidSubfield):
        t.frobenius(8)


@pytest.mark.parametrize("q", PRIME_POWERS_64)
def test_field_axioms_exhaustive(q):
    F = field_for_order(q)
    x, y, z = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij")
    add, mul = F.vadd, F.vmul
    assert np.array_equal(add(add(x, y), z), add(x, add(y, z)))
    assert np.array_equal(mul(mul(x, y), z), mul(x, mul(y, z)))
    assert np.array_equal(mul(x, add(y, z)), add(mul(x, y), mul(x, z)))
    assert np.array_equal(add(x, y), add(y, x))
    assert np.array_equal(mul(x, y), mul(y, x))
    # vector ops agree with scalar ops
    for a in range(q):
        for b in range(q):
            assert F.mul(a, b) == mul(x[a, b, 0], y[a, b, 0])
            assert F.add(a, b) == add(x[a, b, 0], y[a, b, 0])
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0


@pytest.mark.parametrize("q", PRIME_POWERS_64)
def test_frobenius_is_automorphism(q):
    F = field_for_order(q)
    for j in range(1, F.k + 1):
        if F.k % j:
            continue
        q0 = F.p**j
        fr = [F.frobenius(x, q0) for x in range(q)]
        assert sorted(fr) == list(range(q))
        for x in range(q):
            for y in range(q):
                assert fr[F.add(x, y)] == F.add(fr[x], fr[y])
                assert fr[F.mul(x, y)] == F.mul(fr[x], fr[y])
        for x in range(q):
            v = x
            for _ in range(F.k // j):
                v = F.frobenius(v, q0)
            assert v == x


@pytest.mark.parametrize("q", PRIME_POWERS_64)
def test_primitive_count_and_orders(q):
    F = field_for_order(q)
    orders = [F.order(x) for x in range(1, q)]
    assert all((q - 1) % o == 0 for o in orders)
    assert sum(F.is_primitive(x) for x in range(1, q)) == euler_phi(q - 1)
    # order by stripping matches successive powers
    for x in range(1, min(q, 20)):
        m, v = 1, x
        while v != 1:
            v, m = F.mul(v, x), m + 1
        assert F.order(x) == m


def test_descriptor_parsing():
    assert parse_field_descriptor("3^2").q == 9
    assert parse_field_descriptor("9") is make_field(3, 2)
    with pytest.raises(NonPrimeCharacteristic):
        parse_field_descriptor("4^2")


@pytest.mark.parametrize("sub,ext", [((2, 1), (2, 4)), ((2, 2), (2, 4)), ((3, 1), (3, 2)), ((2, 2), (2, 6)), ((2, 3), (2, 6))])
def test_subfield_embedding_is_homomorphism(sub, ext):
    S, E = make_field(*sub), make_field(*ext)
    emb = subfield_embedding(S, E)
    assert len(set(emb)) == S.q
    for x in range(S.q):
        assert E.frobenius(emb[x], S.q) == emb[x]
        for y in range(S.q):
            assert emb[S.add(x, y)] == E.add(emb[x], emb[y])
            assert emb[S.mul(x, y)] == E.mul(emb[x], emb[y])


def test_subfield_embedding_rejects():
    with pytest.raises(InvalidSubfield):
        subfield_embedding(make_field(2, 2), make_field(2, 3))


def test_factor_integer():
    assert factor_integer(15) == {3: 1, 5: 1}
    assert factor_integer(63) == {3: 2, 7: 1}
    assert factor_integer(1) == {}


@given(st.integers(min_value=1, max_value=10**7))
def test_factor_integer_product(m):
    prod = 1
    for p, e in factor_integer(m).items():
        assert factor_integer(p) == {p: 1}
        prod *= p**e
    assert prod == m


@given(st.sampled_from([4, 8, 9, 16, 25, 27, 32, 49]), st.integers(0, 10**6), st.data())
def test_pow_matches_repeated_multiplication(q, e, data):
    F = field_for_order(q)
    x = data.draw(st.integers(1, q - 1))
    assert F.pow(x, e) == F.pow(x, e % (q - 1))
    small = e % 50
    acc = 1
    for _ in range(small):
        acc = F.mul(acc, x)
    assert F.pow(x, small) == acc
