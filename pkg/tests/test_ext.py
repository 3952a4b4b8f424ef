from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dkoszul.algebra import Quiver, build_truncated_algebra, check_associative, check_standardly_graded
from dkoszul.ext import (build_ext_even_algebra, build_ext_even_module, build_ext_odd_module, ext_basis,
                         simple_resolutions, yoneda_product)
from dkoszul.gmod import graded_iso, projective_module, shift, simple_module, trivial_module
from dkoszul.resolve import minimal_resolution

from conftest import F, builtin, example


def test_ext_basis_examples():
    A = example(10)
    P = projective_module(A, [("1", 0)])
    rp = minimal_resolution(P, 3)
    assert len(ext_basis(rp, 0)) == 1 and all(not ext_basis(rp, i) for i in (1, 2, 3))
    rs = minimal_resolution(simple_module(A, "1"), 3)
    b3 = ext_basis(rs, 3)
    assert sorted(s for e in b3 for s in e.internal_degrees) == [4, 5]
    rk = minimal_resolution(trivial_module(builtin("trunc-poly-3")), 2)
    assert [e.internal_degrees for e in ext_basis(rk, 2)] == [{3}]


def test_unit_law():
    A = example(12)
    M = simple_module(A, "1")
    res = minimal_resolution(M, 4)
    sims = simple_resolutions(A, 0)
    for i in range(4):
        for f in ext_basis(res, i):
            (k, (v, s)), = f.support
            for u in range(A.r):
                e = ext_basis(sims[u], 0)[0]
                got = yoneda_product(e, f)
                if u == v:
                    assert got.coeffs == f.coeffs
                else:
                    assert got.is_zero


def test_truncated_polynomial_products():
    A = builtin("trunc-poly-3", 16)
    sims = simple_resolutions(A, 4)
    (xi,) = ext_basis(sims[0], 1)
    (eta,) = ext_basis(sims[0], 2)
    eta2 = yoneda_product(eta, eta)
    assert eta2.i == 4 and [int(c) for c in eta2.coeffs] == [1]
    assert yoneda_product(xi, xi).is_zero
    # xi eta^n spans the odd part
    assert not yoneda_product(eta, xi).is_zero


def test_square_zero_ext_of_k_x_mod_x2():
    # over k[x]/(x^2) every Ext^1 class squares to a nonzero class
    A = builtin("trunc-poly-2", 12)
    (xi,) = ext_basis(simple_resolutions(A, 2)[0], 1)
    assert not yoneda_product(xi, xi).is_zero


def test_even_algebra_truncated_polynomial():
    A = builtin("trunc-poly-3", 16)
    b = build_ext_even_algebra(A, 3)
    E = b.algebra
    assert E.dims == [1, 1, 1, 1]
    assert not b.flagged and check_standardly_graded(E).ok
    for i, j in itertools.product(range(4), repeat=2):
        if i + j <= 3:
            assert E.mult(i, j)[0, 0, 0] != 0


def test_even_algebra_semisimple():
    A = build_truncated_algebra(Quiver(("a", "b"), ()), 2, 4, F)
    E = build_ext_even_algebra(A, 2).algebra
    assert E.dims[0] == 2 and all(d == 0 for d in E.dims[1:])


def test_even_algebra_two_loops():
    A = builtin("two-loops-J3", 14)
    b = build_ext_even_algebra(A, 2)
    triv = minimal_resolution(trivial_module(A), 4)
    assert b.algebra.dims == [len(triv.generators(2 * n)) for n in range(3)] == [1, 8, 64]
    assert check_associative(b.algebra) is None and not b.flagged


def test_example_even_algebra_flagged_or_standard():
    b = build_ext_even_algebra(example(16), 2)
    # the flag and the report always agree, and a flagged algebra is refused downstream
    assert b.flagged == (not b.report.ok)
    if b.flagged:
        from dkoszul.errors import AlgebraError
        with pytest.raises(AlgebraError):
            minimal_resolution(trivial_module(b.algebra), 2)


def test_even_and_odd_modules_truncated_polynomial():
    A = builtin("trunc-poly-3", 16)
    b = build_ext_even_algebra(A, 3)
    k = trivial_module(A)
    Eev = build_ext_even_module(b, k)
    Eod = build_ext_odd_module(b, k)
    assert [Eev.dim(n) for n in range(4)] == [1, 1, 1, 1]
    assert [Eod.dim(n) for n in range(4)] == [1, 1, 1, 1]
    # E^ev(k) is the even algebra as a module over itself: free of rank one
    T = minimal_resolution(Eev, 2)
    assert T.generators(0) == [(0, 0)] and T.generators(1) == []
    assert Eev.check_relations() is None and Eod.check_relations() is None


def test_projective_ext_modules():
    A = builtin("two-loops-J3", 14)
    b = build_ext_even_algebra(A, 2)
    P = projective_module(A, [(0, 0)])
    Eev = build_ext_even_module(b, P)
    Eod = build_ext_odd_module(b, P)
    assert Eev.dim(0) == 1 and all(Eev.dim(n) == 0 for n in range(1, 3))
    assert all(Eod.dim(n) == 0 for n in range(3))


@pytest.mark.parametrize("name", ["trunc-poly-3", "two-loops-J3", "three-cycle-J3", "kronecker-J3"])
def test_odd_matches_even_of_syzygy(name):
    A = builtin(name, 16)
    b = build_ext_even_algebra(A, 2)
    k = trivial_module(A)
    res = minimal_resolution(k, 5)
    Eod = build_ext_odd_module(b, k, res)
    Om = shift(res.syzygy(1), -1)
    Eev = build_ext_even_module(b, Om)
    assert [Eod.dim_vector(n) for n in range(3)] == [Eev.dim_vector(n) for n in range(3)]
    got = graded_iso(Eod, Eev)
    assert got.reason == "found" and got.iso.is_isomorphism()


@pytest.mark.parametrize("name", ["trunc-poly-3", "two-loops-J3", "kronecker-J3"])
def test_odd_internal_degrees(name):
    A = builtin(name, 16)
    res = minimal_resolution(trivial_module(A), 5)
    for n in range(3):
        assert {s for _, s in res.generators(2 * n + 1)} <= {3 * n + 1}


@given(st.sampled_from(["trunc-poly-2", "trunc-poly-3", "kronecker-J3", "three-cycle-J3", "cubic-loop"]),
       st.data())
@settings(max_examples=20, deadline=None)
def test_yoneda_associative(name, data):
    A = builtin(name, 16)
    sims = simple_resolutions(A, 4)
    M = simple_module(A, data.draw(st.integers(0, A.r - 1)))
    res = minimal_resolution(M, 4)
    i = data.draw(st.integers(0, 1))
    m1 = data.draw(st.integers(0, 2))
    m2 = data.draw(st.integers(0, 4 - i - m1))
    fs = ext_basis(res, i)
    if not fs:
        return
    f = data.draw(st.sampled_from(fs))
    g_u = data.draw(st.integers(0, A.r - 1))
    h_u = data.draw(st.integers(0, A.r - 1))
    gs, hs = ext_basis(sims[g_u], m1), ext_basis(sims[h_u], m2)
    if not gs or not hs:
        return
    g, h = data.draw(st.sampled_from(gs)), data.draw(st.sampled_from(hs))
    left = yoneda_product(yoneda_product(h, g), f)
    right = yoneda_product(h, yoneda_product(g, f))
    assert left.coeffs == right.coeffs


@given(st.sampled_from(["trunc-poly-3", "two-loops-J3", "kronecker-J3", "cubic-loop"]), st.data())
@settings(max_examples=12, deadline=None)
def test_even_module_dimension_identity(name, data):
    A = builtin(name, 16)
    b = build_ext_even_algebra(A, 2)
    v = data.draw(st.integers(0, A.r - 1))
    M = simple_module(A, v)
    res = minimal_resolution(M, 5)
    Eev = build_ext_even_module(b, M, res)
    Eod = build_ext_odd_module(b, M, res)
    for n in range(3):
        assert Eev.dim(n) == len(res.generators(2 * n))
        assert Eod.dim(n) == len(res.generators(2 * n + 1))
