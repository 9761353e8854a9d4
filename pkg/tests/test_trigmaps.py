"""Trigonal maps: Plucker geometry, the chord matrix, rationality, normal forms."""

import random

import pytest

from conftest import constructions
from ex37 import EX37_D, EX37_N
from trigonal.curves import Mobius
from trigonal.errors import DegeneratePair, NotRational
from trigonal.fields import make_extension, prime_field
from trigonal.polyring import BinaryForm
from trigonal.subgroups import TractableSubgroup, enumerate_tractable
from trigonal.trigmaps import (
    TrigonalMap,
    alternate_map,
    build_M,
    kernel_basis,
    plucker_form,
    plucker_of_pair,
    rationality_discriminant,
    trigonal_map_for,
    verify_trigonal,
    _pencil_roots,
)


def test_plucker_examples():
    F37 = prime_field(37)
    uv = BinaryForm.from_ints(F37, 2, [0, 1, 0])
    assert plucker_of_pair(uv) == (0, 0, 1, 0, 0, 0)
    q = BinaryForm.from_ints(F37, 2, [2, -3, 1])  # u^2 - 3uv + 2v^2
    v = plucker_of_pair(q)
    assert v == (4, 6, 7, 1, 37 - 3, 2)
    assert plucker_form(F37, v) == 0


def test_plucker_always_on_quadric():
    rng = random.Random(31)
    E = make_extension(101, 2)
    for _ in range(50):
        a, b, c = (E.random(rng) for _ in range(3))
        disc = E.sub(E.sqr(b), E.mul(E.from_int(4), E.mul(a, c)))
        if disc == E.zero:
            continue
        v = plucker_of_pair(BinaryForm(E, 2, (c, b, a)))
        assert plucker_form(E, v) == E.zero


def test_plucker_degenerate_pair_rejected():
    F37 = prime_field(37)
    with pytest.raises(DegeneratePair):
        plucker_of_pair(BinaryForm.from_ints(F37, 2, [1, 2, 1]))  # (u + v)^2


def test_build_M_worked_example(ex37_curve, ex37_subgroup, F37):
    M = build_M(ex37_subgroup, ex37_curve)
    assert len(M) == 4
    alpha, beta = kernel_basis(M, F37)
    # kernel vectors really annihilate M
    for row in M:
        for v in (alpha, beta):
            assert sum(r * x for r, x in zip(row, v)) % 37 == 0
    # the solved pencil roots land on the Plucker quadric (lines meeting all four chords)
    for mu, lam in _pencil_roots(F37, alpha, beta):
        pt = tuple(F37.add(F37.mul(mu, a), F37.mul(lam, b)) for a, b in zip(alpha, beta))
        assert plucker_form(F37, pt) == 0
        for row in M:
            assert sum(r * x for r, x in zip(row, pt)) % 37 == 0


def test_build_M_order_invariant(ex37_curve, ex37_subgroup, F37):
    # permuting the quadratics leaves the kernel unchanged
    quads = list(ex37_subgroup.quads)
    perm = TractableSubgroup(tuple(quads[::-1]), True)
    M1 = build_M(ex37_subgroup, ex37_curve)
    M2 = build_M(perm, ex37_curve)
    assert M1 == M2  # both reduced to RREF


def test_rationality_discriminant_worked_example(ex37_curve, ex37_subgroup, F37):
    alpha, beta = kernel_basis(build_M(ex37_subgroup, ex37_curve), F37)
    d = rationality_discriminant(F37, alpha, beta)
    assert F37.is_square(d)


def test_discriminant_basis_change_invariance(ex37_curve, ex37_subgroup, F37):
    alpha, beta = kernel_basis(build_M(ex37_subgroup, ex37_curve), F37)
    rng = random.Random(33)
    d0 = rationality_discriminant(F37, alpha, beta)
    for _ in range(10):
        a, b, c, d = (F37.random(rng) for _ in range(4))
        if F37.sub(F37.mul(a, d), F37.mul(b, c)) == 0:
            continue
        a2 = tuple(F37.add(F37.mul(a, x), F37.mul(b, y)) for x, y in zip(alpha, beta))
        b2 = tuple(F37.add(F37.mul(c, x), F37.mul(d, y)) for x, y in zip(alpha, beta))
        d2 = rationality_discriminant(F37, a2, b2)
        assert F37.is_square(d2) == F37.is_square(d0)


def test_discriminant_perfect_square_case(F37):
    # alpha with sum alpha_i alpha_{i+3} = 0 makes the discriminant a visible square
    alpha = (1, 0, 0, 0, 5, 7)  # 2*(a0 a3 + a1 a4 + a2 a5) = 0
    beta = (2, 3, 4, 5, 6, 7)
    d = rationality_discriminant(F37, alpha, beta)
    s = sum(alpha[i] * beta[(i + 3) % 6] for i in range(6)) % 37
    assert d == s * s % 37
    assert F37.is_square(d)


def test_ex37_map_is_produced_and_verifies(ex37_map, ex37_subgroup):
    assert ex37_map.coeffs() == (EX37_N[0], EX37_N[1], EX37_D[0], EX37_D[1])
    assert verify_trigonal(ex37_map, ex37_subgroup)


def test_reference_nd_passes_verification(ex37_curve, ex37_subgroup, F37):
    g = TrigonalMap(
        F37, EX37_N[0], EX37_N[1], EX37_D[0], EX37_D[1],
        ex37_curve, ex37_subgroup, Mobius.identity(F37), ex37_curve,
    )
    assert verify_trigonal(g, ex37_subgroup)


def test_wrong_map_fails_verification(ex37_map, ex37_subgroup, F37):
    bad = TrigonalMap(
        F37, ex37_map.n1, F37.add(ex37_map.n0, F37.one), ex37_map.d1, ex37_map.d0,
        ex37_map.curve, ex37_subgroup, Mobius.identity(F37), ex37_map.curve,
    )
    assert not verify_trigonal(bad, ex37_subgroup)


def test_both_pencil_roots_give_maps(ex37_map, ex37_subgroup):
    other = alternate_map(ex37_map)
    assert other is not None
    assert other.coeffs() != ex37_map.coeffs()
    assert verify_trigonal(other, ex37_subgroup)


def test_both_roots_on_random_constructions():
    rng = random.Random(34)
    for H, S, g, fib in constructions(101, 10, rng):
        assert verify_trigonal(g, S)
        other = alternate_map(g)
        if other is not None:
            assert verify_trigonal(other, S)


def test_not_rational_raised_on_nonsquare_disc():
    rng = random.Random(35)
    from trigonal.survey import random_curve

    hits = 0
    while hits < 5:
        H = random_curve(101, rng)
        F101 = H.field
        for S in enumerate_tractable(H):
            from trigonal.errors import DegenerateConfiguration

            try:
                alpha, beta = kernel_basis(build_M(S, H), F101)
            except DegenerateConfiguration:
                continue
            d = rationality_discriminant(F101, alpha, beta)
            if not F101.is_square(d):
                with pytest.raises(NotRational):
                    trigonal_map_for(S, H)
                hits += 1


def test_verify_symmetric_under_pair_swap(ex37_map, ex37_subgroup):
    # the condition g(W') = g(W'') does not depend on which root is called W'
    # (the root-free criterion never orders the roots; permuting quadratics
    # and rescaling them must not change the verdict)
    F37 = ex37_map.field
    quads = [q.scale(q.field.from_int(3)) for q in ex37_subgroup.quads]
    S2 = TractableSubgroup(tuple(quads[::-1]), True)
    assert verify_trigonal(ex37_map, S2)


def test_map_shape_invariants():
    rng = random.Random(36)
    for H, S, g, fib in constructions(101, 8, rng):
        # N monic cubic with no x^2 term; D monic quadratic; coprime
        assert g.N.degree == 3 and g.N.lc == g.field.one and g.N[2] == g.field.zero
        assert g.D.degree == 2 and g.D.lc == g.field.one
        from trigonal.polyring import gcd

        assert gcd(g.N, g.D).degree == 0
