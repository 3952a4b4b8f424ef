from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from dkoszul.gmod import projective_module, shift, simple_module, trivial_module
from dkoszul.koszul import (Delta, classify_from_table, delta, ext_concentration_table, is_d_koszul,
                            is_d_koszul_algebra, is_generalized_d_koszul, is_koszul_module)
from dkoszul.resolve import minimal_resolution

from conftest import builtin, example


def test_delta_values():
    assert delta(0, 3) == 0
    assert delta(2, 3) == 3 and delta(3, 3) == 4 and delta(4, 3) == 6
    with pytest.raises(ValueError):
        delta(1, 1)


def test_Delta_values():
    assert Delta(2, 3) == {3}
    assert Delta(3, 3) == {4, 5}
    for n in range(4):
        assert Delta(2 * n + 1, 2) == {2 * n + 1}


@given(st.integers(0, 40), st.integers(2, 7))
def test_template_coherence(i, d):
    assert delta(i, d) in Delta(i, d)
    assert max(Delta(i, d)) < min(Delta(i + 1, d))


def test_truncated_polynomial_is_3_koszul():
    c = is_d_koszul(trivial_module(builtin("trunc-poly-3")), 3, 5)
    assert c.holds and c.H == 5 and c.field == "prime:32003"


def test_example_s1_not_3_koszul():
    A = example(10)
    c = is_d_koszul(simple_module(A, "1"), 3, 3)
    assert not c.holds
    i, v, s = c.witness
    assert (i, A.vertex_names[v], s) == (3, "3", 5)
    assert c.to_dict()["witness"] == {"i": 3, "vertex": "3", "degree": 5}


def test_example_s1_generalized():
    A = example(12)
    c = is_generalized_d_koszul(simple_module(A, "1"), 3, 4)
    assert c.holds
    degs = {i: sorted(s for _, s in g) for i, g in c.generators.items()}
    assert degs == {0: [0], 1: [1, 1], 2: [3, 3], 3: [4, 5], 4: [6, 6]}


def test_example_s1_generalized_to_h8():
    A = example(16)
    assert is_generalized_d_koszul(simple_module(A, "1"), 3, 8).holds


def test_example_s3_is_projective():
    A = example(10)
    S3 = simple_module(A, "3")
    assert minimal_resolution(S3, 3).generators(1) == []
    assert is_d_koszul(S3, 3, 6).holds


def test_projective_is_d_koszul():
    A = example(10)
    assert is_d_koszul(projective_module(A, [("1", 0), ("2", 0)]), 3, 6).holds


def test_shifted_simple_fails_at_zero():
    c = is_generalized_d_koszul(shift(simple_module(example(10), "1"), 1), 3, 4)
    assert not c.holds and c.witness[0] == 0 and c.witness[2] == 1


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_truncated_polynomials_are_koszul_algebras(d):
    assert is_d_koszul_algebra(builtin(f"trunc-poly-{d}", 8 * d), d, 8).holds


@pytest.mark.parametrize("name", ["two-loops-J3", "three-cycle-J3", "kronecker-J3"])
def test_truncated_quivers(name):
    assert is_d_koszul_algebra(builtin(name, 14), 3, 6).holds


def test_example_algebra_not_3_koszul():
    c = is_d_koszul_algebra(example(10), 3, 4)
    assert not c.holds and c.witness[0] == 3


def test_linear_classifier():
    A = builtin("kxy", 10)
    c = is_koszul_module(trivial_module(A), 4)
    assert c.holds
    assert [len(c.generators[i]) for i in range(4)] == [1, 2, 1, 0]
    c3 = is_koszul_module(trivial_module(builtin("trunc-poly-3")), 2)
    assert not c3.holds and c3.witness[0] == 2 and c3.witness[2] == 3


def test_semisimple_trivial_is_koszul():
    from dkoszul.algebra import Quiver, build_truncated_algebra
    from conftest import F
    A = build_truncated_algebra(Quiver(("a", "b"), ()), 2, 3, F)
    assert is_koszul_module(trivial_module(A), 3).holds


def test_concentration_tables():
    A = example(10)
    tab = ext_concentration_table(simple_module(A, "1"), 3)
    assert tab == {(0, 0): 1, (1, 1): 2, (2, 3): 2, (3, 4): 1, (3, 5): 1}
    tk = ext_concentration_table(trivial_module(builtin("trunc-poly-3")), 6)
    assert tk == {(i, delta(i, 3)): 1 for i in range(7)}
    tp = ext_concentration_table(projective_module(A, [("1", 2)]), 3)
    assert tp == {(0, 2): 1}


def test_nonminimal_table_refused():
    A = builtin("trunc-poly-3")
    res = minimal_resolution(trivial_module(A), 3, redundant=True)
    with pytest.raises(ValueError):
        ext_concentration_table(res, 3)


def test_monotone_failure():
    A = example(16)
    S1 = simple_module(A, "1")
    first = is_d_koszul(S1, 3, 3)
    for H in (4, 6, 8):
        c = is_d_koszul(S1, 3, H)
        assert not c.holds and c.witness == first.witness


MODS = [("cubic-loop", 3), ("trunc-poly-3", 3), ("two-loops-J3", 3), ("kronecker-J3", 3), ("kxy", 2),
        ("trunc-poly-2", 2)]


@given(st.sampled_from(MODS), st.data())
@settings(max_examples=30, deadline=None)
def test_two_classifier_routes_agree(inst, data):
    name, d = inst
    A = builtin(name, 14)
    v = data.draw(st.integers(0, A.r - 1))
    M = simple_module(A, v) if data.draw(st.booleans()) else trivial_module(A)
    H = 5
    res = minimal_resolution(M, H)
    tab = ext_concentration_table(res, H)
    for template, cls in ((lambda i: frozenset({delta(i, d)}), is_d_koszul),
                          (lambda i: Delta(i, d), is_generalized_d_koszul)):
        cert = cls(M, d, H, res=res)
        bad = classify_from_table(tab, H, template)
        assert cert.holds == (bad is None)
        if bad is not None:
            assert (cert.witness[0], cert.witness[2]) == bad
    if d == 2:
        assert is_generalized_d_koszul(M, 2, H, res=res).holds == is_koszul_module(M, H, res=res).holds
