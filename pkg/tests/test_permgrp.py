import itertools
import random

import numpy as np
import pytest

from ffgroup.errors import BudgetExceeded, EmptyGeneratorList, SingularMatrix
from ffgroup.fieldext import singer_generator
from ffgroup.gf import field_for_order, make_field
from ffgroup.matgf import Mat, companion, mat_det
from ffgroup.permgrp import (
    Overflow,
    Perm,
    closure_oracle,
    enumerate_gl,
    gl_bsgs,
    gl_generators,
    gl_order,
    group_order,
    matrix_to_perm,
    matrix_to_projective_perm,
    perm_to_matrix,
    point_to_vector,
    schreier_sims,
    singer_group_order,
    vector_to_point,
)
from ffgroup.poly import enumerate_nonzero_const, enumerate_primitive, parse_poly

F2 = make_field(2)


def random_invertible(ctx, n, rng):
    while True:
        m = Mat(ctx, rng.integers(0, ctx.q, (n, n)))
        if mat_det(m):
            return m


def brute_gl_count(q, n):
    F = field_for_order(q)
    return sum(
        1 for e in itertools.product(range(q), repeat=n * n) if mat_det(Mat(F, np.array(e).reshape(n, n)))
    )


def test_point_encoding():
    F = make_field(3)
    assert point_to_vector(F, 3, 5) == [2, 1, 0]
    assert vector_to_point(F, [2, 1, 0]) == 5


def test_matrix_to_perm_examples():
    assert matrix_to_perm(Mat.identity(F2, 3)).is_identity()
    p = matrix_to_perm(companion(parse_poly(F2, "X^2+X+1")))
    assert len(p.cycles()) == 1 and len(p.cycles()[0]) == 3
    with pytest.raises(SingularMatrix):
        matrix_to_perm(Mat(F2, [[1, 1], [1, 1]]))
    with pytest.raises(BudgetExceeded):
        matrix_to_perm(Mat.identity(F2, 13))


def test_faithful_and_inverse_map():
    F = make_field(3)
    mats = list(enumerate_gl(F, 2))
    perms = [matrix_to_perm(m) for m in mats]
    assert len({p.key() for p in perms}) == len(mats) == 48
    assert all(perm_to_matrix(p, F, 2) == m for p, m in zip(perms, mats))


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (4, 2), (5, 2), (2, 5), (9, 2), (3, 3), (8, 2)])
def test_homomorphism(q, n):
    F = field_for_order(q)
    rng = np.random.default_rng(q + 10 * n)
    for _ in range(200):
        a, b = random_invertible(F, n, rng), random_invertible(F, n, rng)
        assert matrix_to_perm(a @ b) == matrix_to_perm(a) * matrix_to_perm(b)


def test_group_order_examples():
    assert group_order([Perm([1, 2, 0])]) == 3
    cf = matrix_to_perm(companion(parse_poly(F2, "X^2+X+1")))
    cg = matrix_to_perm(companion(parse_poly(F2, "X^2+1")))
    assert group_order([cf, cg]) == 6
    gens = [matrix_to_perm(m) for m in gl_generators(F2, 3)]
    assert group_order(gens) == 168
    with pytest.raises(EmptyGeneratorList):
        group_order([])


def test_closure_examples():
    ident = Perm.identity(5)
    assert closure_oracle([ident], 10) == [ident]
    cf = matrix_to_perm(companion(parse_poly(F2, "X^2+X+1")))
    cg = matrix_to_perm(companion(parse_poly(F2, "X^2+1")))
    assert len(closure_oracle([cf, cg], 100)) == 6
    gl23 = [matrix_to_perm(m) for m in gl_generators(make_field(3), 2)]
    assert isinstance(closure_oracle(gl23, 10), Overflow)


def test_gl_order_examples():
    assert gl_order(2, 2) == 6
    assert gl_order(2, 3) == 48
    assert all(gl_order(1, q) == q - 1 for q in (2, 3, 4, 5, 7, 8, 9))


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (4, 2)])
def test_gl_order_brute(q, n):
    assert gl_order(n, q) == brute_gl_count(q, n)


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3), (4, 2), (5, 2), (2, 4), (2, 5), (3, 3), (4, 3), (9, 2)])
def test_standard_generators_give_gl(q, n):
    F = field_for_order(q)
    bsgs = gl_bsgs(F, n)
    assert bsgs.order() == gl_order(n, q)
    assert all(bsgs.contains(matrix_to_perm(m)) for m in gl_generators(F, n))


def test_enumerate_gl_distinct():
    F = make_field(2)
    mats = list(enumerate_gl(F, 3))
    assert len(mats) == 168 == len({m.key() for m in mats})
    assert all(mat_det(m) for m in mats)


def _random_subgroup_cases():
    rng = np.random.default_rng(11)
    cases = []
    for q, n in [(2, 2), (2, 3), (3, 2), (4, 2), (5, 2), (2, 4), (3, 3), (7, 2)]:
        F = field_for_order(q)
        for _ in range(6):
            cases.append([random_invertible(F, n, rng) for _ in range(int(rng.integers(1, 3)))])
    return cases


def test_group_order_matches_closure():
    checked = 0
    for mats in _random_subgroup_cases():
        perms = [matrix_to_perm(m) for m in mats]
        order = group_order(perms)
        closure = closure_oracle(perms, 5000)
        if isinstance(closure, Overflow):
            assert order > 5000
            continue
        assert order == len(closure)
        bsgs = schreier_sims(perms)
        assert all(bsgs.contains(g) for g in closure)
        checked += 1
    assert checked >= 20


def test_bsgs_elements_and_membership():
    F = make_field(3)
    s = singer_generator(F, 2)[1]
    t = Mat(F, [[1, 1], [0, 1]])
    bsgs = schreier_sims([matrix_to_perm(s), matrix_to_perm(t)])
    elements = list(bsgs.elements())
    assert len({e.key() for e in elements}) == bsgs.order() == 48
    outside = schreier_sims([matrix_to_perm(s)])
    assert not outside.contains(matrix_to_perm(t))
    levels = bsgs._levels
    for i, lv in enumerate(levels):
        for g in lv.gens:
            assert all(g[levels[j].base] == levels[j].base for j in range(i))


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (2, 4), (5, 2)])
def test_generator_order_invariance(q, n):
    F = field_for_order(q)
    rng = np.random.default_rng(5)
    gens = [matrix_to_perm(random_invertible(F, n, rng)) for _ in range(3)]
    gens.append(matrix_to_perm(companion(enumerate_nonzero_const(F, n)[0])))
    expected = group_order(gens)
    shuffler = random.Random(20)
    for _ in range(20):
        shuffler.shuffle(gens)
        assert group_order(gens) == expected


def test_bound_early_exit_is_exact():
    F = make_field(3)
    gens = [matrix_to_perm(m) for m in gl_generators(F, 3)]
    assert group_order(gens, bound=gl_order(3, 3)) == gl_order(3, 3)
    with pytest.raises(ValueError):
        group_order(gens, bound=100)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (4, 2), (5, 2), (7, 2), (9, 2), (2, 4), (3, 3), (4, 3)])
def test_projective_order_matches_full_action(q, n):
    F = field_for_order(q)
    f = enumerate_primitive(F, n)[0]
    cf = companion(f)
    full_f = matrix_to_perm(cf)
    for g in enumerate_nonzero_const(F, n)[:40]:
        cg = companion(g)
        assert singer_group_order([cf, cg]) == group_order([full_f, matrix_to_perm(cg)])


def test_projective_perm_shape():
    F = make_field(5)
    p = matrix_to_projective_perm(Mat.scalar(F, 3, 2))
    assert p.degree == (5**3 - 1) // 4 and p.is_identity()
