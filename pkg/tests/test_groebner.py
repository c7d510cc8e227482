import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P, ZOO_RELATIONS, zoo
from nca.errors import OutOfWindowError
from nca.freealg import NcPoly, make_algebra, parse
from nca.groebner import (
    RewriteRule,
    TruncatedGB,
    complete,
    hilbert_function,
    normal_form,
    realize,
    realize_algebra,
)
from nca.linalg import rank


def ideal_dim_oracle(A, j):
    """dim A_j = #words of degree j - rank span{u r v}, by brute force."""
    n = A.ngens
    all_words = [w for k in range(j + 1) for w in itertools.product(range(n), repeat=k)
                 if A.word_degree(w) == j]
    col = {w: i for i, w in enumerate(all_words)}
    rows = []
    for r in A.relations:
        d = r.degree(A.degrees)
        for a in range(0, j - d + 1):
            us = [u for k in range(a + 1) for u in itertools.product(range(n), repeat=k)
                  if A.word_degree(u) == a]
            vs = [v for k in range(j - d - a + 1) for v in itertools.product(range(n), repeat=k)
                  if A.word_degree(v) == j - d - a]
            for u in us:
                for v in vs:
                    row = np.zeros(len(all_words), dtype=np.int64)
                    for w, c in (NcPoly.word(u, A.p) * r * NcPoly.word(v, A.p)).terms.items():
                        row[col[w]] = c
                    rows.append(row)
    rk = rank(np.array(rows), A.p) if rows else 0
    return len(all_words) - rk


def test_normal_form_examples():
    A = make_algebra(["x", "y"], ["x*y - y*x"])
    gb = TruncatedGB(A, 6, [RewriteRule((1, 0), parse("x*y", A))])
    assert normal_form(parse("y*x", A), gb) == parse("x*y", A)
    C = make_algebra(["x"], ["x^3"])
    gb = TruncatedGB(C, 6, [RewriteRule((0, 0, 0), NcPoly.zero(P))])
    assert not normal_form(parse("x^3", C), gb)
    w = parse("x^2", C)
    assert normal_form(w, gb) == w


def test_normal_form_out_of_window():
    A = zoo("CUSP")
    gb = complete(A, 3)
    with pytest.raises(OutOfWindowError):
        gb.normal_form(parse("x^4", A))


def test_complete_examples():
    A = zoo("POLY2")
    gb = complete(A, 6)
    assert [(r.lead, r.tail) for r in gb.rules] == [((1, 0), parse("x*y", A))]
    C = zoo("CUSP")
    gb = complete(C, 6)
    assert [(r.lead, r.tail) for r in gb.rules] == [((0, 0, 0), NcPoly.zero(P))]
    B = make_algebra(["x", "y"], ["x^2", "x*y + y*x"], order=["y", "x"])
    gb = complete(B, 5)
    assert {r.lead: r.tail for r in gb.rules} == {(0, 0): NcPoly.zero(P), (0, 1): parse("-y*x", B)}
    assert gb.diamond_check() == []
    # x.x.y reduces to 0 both ways
    assert not gb.normal_form(parse("x*x*y", B))


def test_completion_adds_rules():
    # x^2 -> y*x overlaps itself on x^3, giving x*y*x -> y*y*x
    A = make_algebra(["x", "y"], ["x^2 - y*x"], order=["y", "x"])
    gb = complete(A, 6)
    leads = {r.lead: r.tail for r in gb.rules}
    assert leads[(0, 1, 0)] == parse("y*y*x", A)
    assert gb.diamond_check() == []
    assert realize(gb).hilbert() == [ideal_dim_oracle(A, j) for j in range(7)]


@pytest.mark.parametrize("name", sorted(ZOO_RELATIONS))
def test_zoo_diamond(name):
    gb = complete(zoo(name), 12)
    assert gb.diamond_check() == []


def test_hilbert_examples():
    free = realize(complete(make_algebra(["x", "y"], []), 4))
    assert free.dim(2) == 4
    poly = realize(complete(zoo("POLY2"), 12))
    assert poly.basis[2] == [(0, 0), (0, 1), (1, 1)]
    assert hilbert_function(poly) == [j + 1 for j in range(13)]
    assert hilbert_function(realize(complete(zoo("DUAL"), 6))) == [1, 1, 0, 0, 0, 0, 0]
    assert hilbert_function(realize(complete(zoo("CUSP"), 6))) == [1, 1, 1, 0, 0, 0, 0]


@pytest.mark.parametrize("name", sorted(ZOO_RELATIONS))
def test_hilbert_matches_ideal_span(name):
    A = zoo(name)
    real = realize(complete(A, 6))
    assert real.hilbert() == [ideal_dim_oracle(A, j) for j in range(7)]


def test_weighted_generators():
    A = make_algebra(["x", "y"], ["x*y - y*x"], degrees=[1, 2])
    real = realize(complete(A, 8))
    # commutative ring with generators in degrees 1, 2
    assert real.hilbert() == [j // 2 + 1 for j in range(9)]
    assert real.hilbert() == [ideal_dim_oracle(A, j) for j in range(9)]


def test_left_and_right_multiplication_commute():
    real = realize(complete(zoo("JORDAN"), 7))
    for g in range(2):
        for h in range(2):
            for j in range(6):
                a = real.left[g][j + 1] @ real.right[h][j] % P
                b = real.right[h][j + 1] @ real.left[g][j] % P
                assert np.array_equal(a, b)


random_relations = st.lists(
    st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(1, 6)), min_size=1, max_size=4),
    min_size=1,
    max_size=2,
)


@settings(max_examples=25, deadline=None)
@given(random_relations)
def test_random_quadratic_algebras(rels):
    polys = [NcPoly({(a, b): c for a, b, c in terms}, P) for terms in rels]
    polys = [f for f in polys if f]
    A = make_algebra(["x", "y"], polys)
    gb = complete(A, 5)
    assert gb.diamond_check() == []
    real = realize(gb)
    assert real.hilbert() == [ideal_dim_oracle(A, j) for j in range(6)]
    # multiplication in the realised algebra is associative
    x, y = parse("x", A), parse("y", A)
    for a, b, c in itertools.product([x, y], repeat=3):
        lhs = gb.normal_form(gb.normal_form(a * b) * c)
        rhs = gb.normal_form(a * gb.normal_form(b * c))
        assert lhs == rhs


@pytest.mark.parametrize("name", sorted(ZOO_RELATIONS))
def test_left_mult_matches_normal_form(name):
    A = zoo(name)
    real = realize_algebra(A, 8)
    for g in range(A.ngens):
        for h in range(A.ngens):
            gh = NcPoly.word((g, h), P)
            for j in range(0, 7):
                composed = real.left[g][j + 1] @ real.left[h][j] % P
                assert np.array_equal(composed, real.left_mult(gh, j))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.lists(st.integers(0, 1), min_size=4, max_size=4), st.integers(1, P - 1)),
                max_size=6))
def test_normal_form_idempotent(terms):
    A = zoo("JORDAN")
    gb = complete(A, 6)
    f = NcPoly({tuple(w): c for w, c in terms}, P)
    nf = gb.normal_form(f)
    assert gb.normal_form(nf) == nf
    assert all(len(w) == 4 for w in nf.terms)
    assert all(gb.is_normal(w) for w in nf.terms)
