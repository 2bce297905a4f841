from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liaison.ideal import (Ideal, codimension, degree_slice_basis, groebner_basis, hilbert_series,
                           ideal_quotient, intersect, normal_form, saturate)
from liaison.ring import Ring, RingError, random_form

from _strategies import SMALL, ideals, monomial_lists, slice_dim, sympy_groebner, to_sympy

R2 = Ring(2)
R4 = Ring(4)


def strs(polys):
    return sorted(str(g) for g in polys)


# -- ring ------------------------------------------------------------------

def test_ring_rejects_bad_input():
    with pytest.raises(RingError):
        Ring(4, 32002)
    with pytest.raises(RingError):
        Ring(1)


def test_parse_str_round_trip():
    f = R4.parse("3*x0^2*x1 - x1^3 + x2*x3*x0")
    assert R4.parse(str(f)) == f
    assert f.degree == 3 and f.is_homogeneous()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 3), st.integers(0, 3))
def test_ring_axioms(seed, da, db):
    rng = np.random.default_rng(seed)
    a, b, c = random_form(R4, da, rng), random_form(R4, db, rng), random_form(R4, db, rng)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    assert (a * b).degree == da + db


# -- Groebner bases --------------------------------------------------------

def test_groebner_examples():
    I = Ideal.parse(R2, ["x0^2", "x0*x1 + x1^2"])
    assert strs(I.groebner) == ["x0*x1 + x1^2", "x0^2", "x1^3"]
    assert strs(Ideal.parse(R2, ["x0"]).groebner) == ["x0"]
    assert strs(Ideal.parse(R2, ["x0", "x0"]).groebner) == ["x0"]
    assert groebner_basis(Ideal(R2, [])).groebner == ()


def test_groebner_against_sympy():
    ring = Ring(3, 101)
    I = Ideal.parse(ring, ["x0^2 + 3*x1*x2", "x1^2 - x0*x2", "x0*x1*x2 + x2^3"])
    oracle = sympy_groebner(I)
    ours = sorted(str(to_sympy(g).monic()) for g in I.groebner)
    assert ours == sorted(str(to_sympy_from(oracle, e, ring).monic()) for e in oracle.exprs)


def to_sympy_from(oracle, expr, ring):
    import sympy
    return sympy.Poly(expr, *oracle.gens, modulus=ring.characteristic)


@settings(max_examples=25, deadline=None)
@given(ideals(SMALL))
def test_groebner_matches_sympy(I):
    oracle = sympy_groebner(I)
    ours = sorted(str(to_sympy(g).monic()) for g in I.groebner)
    theirs = sorted(str(to_sympy_from(oracle, e, SMALL).monic()) for e in oracle.exprs)
    assert ours == theirs


@settings(max_examples=25, deadline=None)
@given(ideals(SMALL), st.randoms(use_true_random=False))
def test_groebner_order_independent(I, rnd):
    gens = list(I.generators)
    rnd.shuffle(gens)
    J = Ideal(SMALL, gens)
    assert [str(g) for g in I.groebner] == [str(g) for g in J.groebner]


@settings(max_examples=25, deadline=None)
@given(ideals(SMALL), st.integers(0, 2**32))
def test_membership_matches_sympy(I, seed):
    rng = np.random.default_rng(seed)
    g = I.generators[0]
    inside = g * random_form(SMALL, 1, rng)
    outside = random_form(SMALL, g.degree + 1, rng)
    oracle = sympy_groebner(I)
    for f in (inside, outside, inside + outside):
        assert I.contains(f) == oracle.contains(to_sympy(f).as_expr())
        assert normal_form(f, I).is_zero() == I.contains(f)


def test_normal_form_examples():
    I = Ideal.parse(R2, ["x0"])
    assert normal_form(R2.parse("x0^2"), I).is_zero()
    assert normal_form(R2.parse("x1"), I) == R2.parse("x1")
    assert normal_form(R2.parse("x1^3"), Ideal.parse(R2, ["x0^2", "x0*x1 + x1^2"])).is_zero()


# -- quotient, saturation, intersection ------------------------------------

def test_quotient_examples():
    assert ideal_quotient(Ideal.parse(R4, ["x0"]), Ideal.parse(R4, ["x0"])).is_unit()
    assert ideal_quotient(Ideal.parse(R4, ["x0*x1"]), Ideal.parse(R4, ["x1"])) == Ideal.parse(R4, ["x0"])
    ci = Ideal.parse(R4, ["x0*x2", "x1*x3"])
    skew = Ideal.parse(R4, ["x0*x2", "x0*x3", "x1*x2", "x1*x3"])
    residual = intersect(Ideal.parse(R4, ["x0", "x3"]), Ideal.parse(R4, ["x1", "x2"]))
    assert ideal_quotient(ci, skew) == residual


def test_saturate_examples():
    assert saturate(Ideal.parse(R4, ["x0^2"]), Ideal.parse(R4, ["x0"])).is_unit()
    I = Ideal.parse(R4, ["x0*x1", "x0*x2"])
    assert saturate(I, Ideal.parse(R4, ["x1", "x2"])) == Ideal.parse(R4, ["x0"])
    assert saturate(I, Ideal.unit(R4)) == I


def test_intersect_examples():
    skew = intersect(Ideal.parse(R4, ["x0", "x1"]), Ideal.parse(R4, ["x2", "x3"]))
    assert skew == Ideal.parse(R4, ["x0*x2", "x0*x3", "x1*x2", "x1*x3"])
    assert intersect(skew, Ideal.unit(R4)) == skew
    assert intersect(Ideal.parse(R4, ["x0"]), Ideal.parse(R4, ["x1"])) == Ideal.parse(R4, ["x0*x1"])


def mono_ideal(ring, exps):
    return Ideal(ring, [ring.monomial(e) for e in exps])


def brute_intersect(a, b):
    return [tuple(max(x, y) for x, y in zip(u, v)) for u, v in product(a, b)]


def brute_quotient_by_mono(a, m):
    return [tuple(max(x - y, 0) for x, y in zip(u, m)) for u in a]


@settings(max_examples=30, deadline=None)
@given(monomial_lists(3), monomial_lists(3))
def test_monomial_intersect_and_quotient(a, b):
    ring = SMALL
    I, J = mono_ideal(ring, a), mono_ideal(ring, b)
    assert intersect(I, J) == mono_ideal(ring, brute_intersect(a, b))
    # I : J is the intersection of the I : m over the generators m of J
    expected = mono_ideal(ring, brute_quotient_by_mono(a, b[0]))
    for m in b[1:]:
        expected = intersect(expected, mono_ideal(ring, brute_quotient_by_mono(a, m)))
    Q = ideal_quotient(I, J)
    assert Q == expected
    assert ideal_quotient(intersect(I, J), J).contains_ideal(Q)


@settings(max_examples=20, deadline=None)
@given(ideals(SMALL), ideals(SMALL, max_gens=2))
def test_quotient_monotone(I, J):
    Q = ideal_quotient(I, J)
    assert Q.contains_ideal(I)
    assert ideal_quotient(I, Ideal.unit(SMALL)) == I
    for g in Q.generators:
        assert all(I.contains(g * h) for h in J.generators)


# -- Hilbert data ----------------------------------------------------------

def test_hilbert_examples():
    rng = np.random.default_rng(5)
    ci = Ideal(R4, [random_form(R4, d, rng) for d in (2, 2, 3)])
    assert hilbert_series(ci) == ([1, 3, 4, 3, 1], 1)
    assert hilbert_series(Ideal(R4, R4.gens())) == ([1], 0)
    assert hilbert_series(Ideal(R4, [])) == ([1], 4)


@pytest.mark.parametrize("degrees", [d for c in (1, 2, 3) for d in product(range(1, 5), repeat=c)
                                     if list(d) == sorted(d)])
def test_complete_intersection_hvector(degrees):
    rng = np.random.default_rng(sum(degrees) * 7 + len(degrees))
    I = Ideal(R4, [random_form(R4, d, rng) for d in degrees])
    expected = np.array([1])
    for d in degrees:
        expected = np.polymul(expected, np.ones(d, dtype=int))
    assert hilbert_series(I) == ([int(x) for x in expected], 4 - len(degrees))


@settings(max_examples=20, deadline=None)
@given(ideals(SMALL), st.integers(0, 4))
def test_hilbert_function_matches_linear_algebra(I, d):
    n_mons = len(SMALL.monomials_of_degree(d))
    assert I.hilbert_function(d) == n_mons - slice_dim(I, d)
    assert len(degree_slice_basis(I, d)) == slice_dim(I, d)


def test_codimension_examples():
    assert codimension(Ideal.parse(R4, ["x0", "x1"])) == 2
    assert codimension(Ideal.parse(R4, ["x0*x2", "x0*x3", "x1*x2", "x1*x3"])) == 2
    assert codimension(Ideal.unit(R4)) == 4


def test_degree_slice_basis_examples():
    skew = Ideal.parse(R4, ["x0*x2", "x0*x3", "x1*x2", "x1*x3"])
    assert len(degree_slice_basis(skew, 2)) == 4
    basis = degree_slice_basis(Ideal.parse(R2, ["x0"]), 3, canonical=True)
    assert strs(basis) == ["x0*x1^2", "x0^2*x1", "x0^3"]
    assert degree_slice_basis(skew, 1) == []
