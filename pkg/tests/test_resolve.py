from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dkoszul import gmod, resolve
from dkoszul.errors import BudgetError
from dkoszul.gmod import (GradedMap, direct_sum, identity_map, projective_module, quotient, radical_power, shift,
                          simple_module, support_floor, top, trivial_module)
from dkoszul.resolve import (check_exact, check_minimal, hom_complex_cohomology, horseshoe, lift_chain_map,
                             minimal_resolution, minimize)
from dkoszul.koszul import ext_concentration_table

from conftest import builtin, example
from oracles import EXAMPLE, monomial_betti, oracle_for_builtin


def names(A, gens):
    return Counter((A.vertex_names[v], s) for v, s in gens)


def test_example_s1_resolution():
    A = example()
    res = minimal_resolution(simple_module(A, "1"), 4)
    assert names(A, res.generators(0)) == Counter({("1", 0): 1})
    assert names(A, res.generators(1)) == Counter({("1", 1): 1, ("2", 1): 1})
    assert names(A, res.generators(2)) == Counter({("1", 3): 1, ("3", 3): 1})
    # gamma.beta.h1 lies in the kernel at degree 5 and is not in J * Q^3: it lands at vertex 3
    assert names(A, res.generators(3)) == Counter({("1", 4): 1, ("3", 5): 1})
    assert names(A, res.generators(4)) == Counter({("1", 6): 1, ("3", 6): 1})
    assert check_exact(res) is None and check_minimal(res) is None


def test_example_matches_anick_oracle():
    A = example(14)
    for v in EXAMPLE[0]:
        res = minimal_resolution(simple_module(A, v), 7)
        orc = monomial_betti(*EXAMPLE, v, 7, 30)
        assert {i: names(A, res.generators(i)) for i in range(8)} == orc


@pytest.mark.parametrize("name", ["trunc-poly-2", "trunc-poly-3", "trunc-poly-4", "trunc-poly-5",
                                  "two-loops-J3", "three-cycle-J3", "kronecker-J3"])
def test_builtin_simples_match_anick_oracle(name):
    V, arrows, rels = oracle_for_builtin(name)
    A = builtin(name, 16)
    for v in V:
        res = minimal_resolution(simple_module(A, v), 6)
        assert {i: names(A, res.generators(i)) for i in range(7)} == monomial_betti(V, arrows, rels, v, 6, 40)


def test_truncated_polynomial_degrees():
    A = builtin("trunc-poly-3")
    res = minimal_resolution(trivial_module(A), 5)
    assert [res.generator_degrees(i) for i in range(6)] == [[0], [1], [3], [4], [6], [7]]
    assert all(len(res.generators(i)) == 1 for i in range(6))


def test_projective_resolves_in_one_step():
    A = example()
    res = minimal_resolution(projective_module(A, [("1", 0), ("2", 2)]), 3)
    assert len(res.generators(0)) == 2
    assert all(res.generators(i) == [] for i in (1, 2, 3))
    assert res.terminated()


def test_syzygies():
    A = example(10)
    res = minimal_resolution(simple_module(A, "1"), 4)
    assert res.syzygy(0) is res.module
    O1 = res.syzygy(1)
    J, _ = radical_power(projective_module(A, [("1", 0)]), 1)
    assert [O1.dim_vector(n) for n in range(4)] == [J.dim_vector(n) for n in range(4)]
    assert gmod.top_dims(O1) == {1: (1, 1, 0)}
    assert gmod.graded_iso(res.syzygy(4), shift(res.syzygy(2), 3)).reason == "found"


def test_kxy_koszul_complex():
    A = builtin("kxy", 10)
    res = minimal_resolution(trivial_module(A), 4)
    assert [len(res.generators(i)) for i in range(5)] == [1, 2, 1, 0, 0]
    assert [res.generator_degrees(i) for i in range(3)] == [[0], [1], [2]]


def test_budget_error_on_incomplete_algebra():
    A = builtin("kxy", 3)
    res = minimal_resolution(shift(trivial_module(A), 0), 2)
    with pytest.raises(BudgetError):
        res.syzygy(3).dim(20)


def _squares_commute(cm, f, res_M, res_N, depth, span=4):
    F = res_M.field
    A = res_M.algebra
    for j in range(depth + 1):
        Pj = res_M.free[j]
        if not Pj.gens:
            continue
        for n in range(Pj.lo, Pj.lo + span):
            for w in range(A.r):
                if Pj.dim(n, w) == 0:
                    continue
                lhs = F.matmul(res_N.diff_block(j, n, w), cm.block(j, n, w))
                if j == 0:
                    rhs = F.matmul(f.block(n, w), res_M.diff_block(0, n, w))
                else:
                    rhs = F.matmul(cm.block(j - 1, n, w), res_M.diff_block(j, n, w))
                if np.any(lhs != rhs):
                    return False
    return True


def test_lift_identity_and_zero():
    A = example(10)
    M = simple_module(A, "1")
    res = minimal_resolution(M, 3)
    cm = lift_chain_map(identity_map(M), res, res, 3)
    for j in range(4):
        Pj = res.free[j]
        for n in range(Pj.lo, Pj.lo + 3):
            for w in range(A.r):
                blk = cm.block(j, n, w)
                assert np.array_equal(blk, A.field.eye(blk.shape[0]))
    zero = GradedMap(M, M, {})
    cz = lift_chain_map(zero, res, res, 2)
    assert all(not np.any(X) for imgs in cz.images for X in imgs.values())


def test_lift_inclusion_of_radical():
    A = example(10)
    M = direct_sum(simple_module(A, "1"), projective_module(A, [("1", 0)]))
    J, inc = radical_power(M, 1)
    rJ, rM = minimal_resolution(J, 2), minimal_resolution(M, 2)
    cm = lift_chain_map(inc, rJ, rM, 2)
    assert _squares_commute(cm, inc, rJ, rM, 2)
    assert all(g.is_homomorphism() for g in cm.graded_maps())


def _radical_sequence(M):
    JM, iota = radical_power(M, 1)
    C, pi = top(M)
    return JM, iota, C, pi


def test_horseshoe_example():
    A = example(12)
    M = direct_sum(simple_module(A, "1"), projective_module(A, [("1", 0)]))
    JM, iota, C, pi = _radical_sequence(M)
    rA, rC = minimal_resolution(JM, 4), minimal_resolution(C, 4)
    hs = horseshoe(iota, pi, rA, rC, 4)
    assert check_exact(hs) is None
    for i in range(5):
        assert Counter(hs.generators(i)) == Counter(rA.generators(i)) + Counter(rC.generators(i))


def test_horseshoe_zero_left_term():
    A = example(10)
    M = simple_module(A, "1")
    Z = gmod.zero_module(A)
    iota = GradedMap(Z, M, {})
    rZ, rM = minimal_resolution(Z, 3), minimal_resolution(M, 3)
    hs = horseshoe(iota, identity_map(M), rZ, rM, 3)
    assert [hs.generators(i) for i in range(4)] == [rM.generators(i) for i in range(4)]


def test_horseshoe_projective_quotient_splits():
    A = example(10)
    S = simple_module(A, "2")
    P = projective_module(A, [("1", 0)])
    B = direct_sum(S, P)
    # 0 -> S -> S + P -> P -> 0
    F = A.field
    iota = GradedMap(S, B, {(n, w): np.concatenate([F.eye(S.dim(n, w)), F.zeros(P.dim(n, w), S.dim(n, w))])
                            for n in B.degrees() for w in range(A.r)})
    pi = GradedMap(B, P, {(n, w): np.concatenate([F.zeros(P.dim(n, w), S.dim(n, w)), F.eye(P.dim(n, w))], axis=1)
                          for n in B.degrees() for w in range(A.r)})
    rS, rP = minimal_resolution(S, 3), minimal_resolution(P, 3)
    hs = horseshoe(iota, pi, rS, rP, 3)
    assert check_exact(hs) is None
    for i in range(1, 4):
        assert hs.generators(i) == rS.generators(i)
    m = minimize(hs)
    rB = minimal_resolution(B, 3)
    assert [Counter(m.generators(i)) for i in range(3)] == [Counter(rB.generators(i)) for i in range(3)]


def test_redundant_resolution_cohomology():
    A = builtin("trunc-poly-3")
    k = trivial_module(A)
    red = minimal_resolution(k, 5, redundant=True)
    assert check_exact(red) is None and check_minimal(red) is not None
    h = hom_complex_cohomology(red, 4)
    tab = ext_concentration_table(minimal_resolution(k, 5), 5)
    for i in range(5):
        assert {j: c for (ii, j), c in tab.items() if ii == i} == h[i]
    m = minimize(red)
    assert [m.generators(i) for i in range(5)] == [minimal_resolution(k, 5).generators(i) for i in range(5)]


# ---------------------------------------------------------------------------
# property tests

NAMES = ["cubic-loop", "trunc-poly-3", "three-cycle-J3", "kronecker-J3", "two-loops-J3"]


@st.composite
def instances_modules(draw):
    name = draw(st.sampled_from(NAMES))
    A = builtin(name, 12)
    gens = draw(st.lists(st.tuples(st.integers(0, A.r - 1), st.integers(0, 1)), min_size=1, max_size=2))
    P = projective_module(A, gens)
    k = draw(st.integers(1, 2))
    _, inc = radical_power(P, k)
    M, _ = quotient(P, {key: (B, None) for key, B in inc.blocks.items()})
    if draw(st.booleans()):
        M = direct_sum(M, simple_module(A, draw(st.integers(0, A.r - 1))))
    return name, A, M


@given(instances_modules())
@settings(max_examples=25, deadline=None)
def test_resolutions_exact_and_minimal(data):
    _, A, M = data
    res = minimal_resolution(M, 4)
    assert check_exact(res) is None
    assert check_minimal(res) is None


@given(instances_modules())
@settings(max_examples=20, deadline=None)
def test_support_floor_bound(data):
    # modules supported in degrees >= 0 have Q^i supported no lower than P^i of the trivial module
    _, A, M = data
    res = minimal_resolution(M, 4)
    triv = minimal_resolution(trivial_module(A), 4)
    for i in range(5):
        if res.generators(i):
            assert min(s for _, s in res.generators(i)) >= min(s for _, s in triv.generators(i))


@given(instances_modules())
@settings(max_examples=20, deadline=None)
def test_minimized_horseshoe_matches_minimal(data):
    _, A, M = data
    H = 4
    JM, iota, C, pi = _radical_sequence(M)
    hs = horseshoe(iota, pi, minimal_resolution(JM, H), minimal_resolution(C, H), H)
    assert check_exact(hs) is None
    res = minimal_resolution(M, H)
    m = minimize(hs)
    assert check_exact(m) is None
    for i in range(H):
        assert Counter(m.generators(i)) == Counter(res.generators(i))
    coh = hom_complex_cohomology(hs, H - 1)
    tab = ext_concentration_table(res, H)
    for i in range(H):
        assert coh[i] == {j: c for (ii, j), c in tab.items() if ii == i}
