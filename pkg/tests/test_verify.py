from __future__ import annotations

import json

import pytest

from dkoszul.algebra import Quiver, build_truncated_algebra
from dkoszul.gmod import projective_module, radical_power, shift, simple_module, trivial_module
from dkoszul.resolve import minimal_resolution
from dkoszul.verify import (budget_for, run_claim, verify_corollary, verify_exact_sequences, verify_gmmz,
                            verify_lemma_2_5, verify_main_theorem, verify_theorem_2_6)

from conftest import F, builtin, example


def omega1_shifted(A):
    return shift(minimal_resolution(trivial_module(A), 1).syzygy(1), -1)


def ok(rep):
    assert rep.status == "pass", json.dumps(rep.to_dict(), default=str)[:2000]
    assert rep.exit_code == 0
    return rep


def test_budget_formulas():
    b = budget_for(3)
    assert (b.effort, b.H, b.H_E) == (2, 8, 3)
    assert b.D == 12 + 3 + 1
    assert budget_for(3, degbound=9).D == 9
    with pytest.raises(ValueError):
        budget_for(3, effort=0)


def test_lemma_truncated_polynomial():
    A = builtin("trunc-poly-3", 16)
    rep = ok(verify_lemma_2_5(A, trivial_module(A), 3, 6))
    names = [s.name for s in rep.subclaims]
    assert "odd/even isomorphism" in names
    assert sum(1 for n in names if n.startswith("Omega^")) == 5


def test_lemma_shifted_syzygy_degrees():
    A = builtin("trunc-poly-3", 16)
    res = minimal_resolution(omega1_shifted(A), 4)
    assert [res.generator_degrees(i) for i in range(5)] == [[0], [2], [3], [5], [6]]


def test_lemma_projective():
    A = builtin("two-loops-J3", 14)
    rep = ok(verify_lemma_2_5(A, projective_module(A, [(0, 0)]), 3, 4))
    assert rep.subclaims[0].evidence["Eod(M)"] == [0, 0]


def test_lemma_two_loops():
    A = builtin("two-loops-J3", 14)
    ok(verify_lemma_2_5(A, trivial_module(A), 3, 4))


def test_lemma_gated_on_example():
    A = example(16)
    rep = verify_lemma_2_5(A, simple_module(A, "1"), 3, 4)
    assert rep.status == "precondition-failed" and rep.exit_code == 2
    assert rep.precondition["certificate"]["witness"]["i"] == 3


@pytest.mark.parametrize("N", ["k", "omega"])
def test_theorem_two_loops(N):
    A = builtin("two-loops-J3", 14)
    M = trivial_module(A) if N == "k" else omega1_shifted(A)
    rep = ok(verify_theorem_2_6(A, M, 3, 6, radical_range=3))
    chain = [s for s in rep.subclaims if s.name.startswith("Ext chain")]
    assert len(chain) == 3


def test_theorem_projective():
    # J P is a syzygy of top(P), not projective, so the chain is constant but not zero
    A = builtin("trunc-poly-3", 16)
    rep = ok(verify_theorem_2_6(A, projective_module(A, [(0, 0)]), 3, 6))
    for s in rep.subclaims:
        if s.name.startswith("Ext chain"):
            assert list(s.evidence.values())[0] == [1, 1]
    # over a radical-square-zero algebra J P is semisimple and the chain vanishes past n = 1
    B = builtin("trunc-poly-2", 16)
    rep = ok(verify_theorem_2_6(B, projective_module(B, [(0, 0)]), 2, 6))


def test_theorem_truncated_polynomial():
    A = builtin("trunc-poly-3", 16)
    rep = ok(verify_theorem_2_6(A, trivial_module(A), 3, 6))
    J, _ = radical_power(trivial_module(A), 1)
    assert J.is_zero()
    rep2 = ok(verify_theorem_2_6(A, omega1_shifted(A), 3, 6))
    assert rep2.subclaims[0].passed


def test_exact_sequences():
    A = builtin("trunc-poly-3", 16)
    rep = ok(verify_exact_sequences(A, trivial_module(A), 3, 6))
    for s in rep.subclaims:
        if s.name.startswith("radical sequence"):
            assert s.evidence["dim Ext^2n-1(JN)_nd"] == 0
    # for N = A the radical term carries everything: 1 = 1 + 0 at every n >= 1
    rep = ok(verify_exact_sequences(A, projective_module(A, [(0, 0)]), 3, 6))
    s1 = next(s for s in rep.subclaims if s.name == "radical sequence n=1")
    assert (s1.evidence["dim Ext^2n(N/JN)_nd"], s1.evidence["dim Ext^2n-1(JN)_nd"]) == (1, 1)
    B = builtin("two-loops-J3", 14)
    rep = ok(verify_exact_sequences(B, omega1_shifted(B), 3, 6))
    s1 = next(s for s in rep.subclaims if s.name == "radical sequence n=1")
    assert s1.evidence["dim Ext^2n(N/JN)_nd"] == s1.evidence["dim Ext^2n(N)_nd"] == 16
    rep = ok(verify_exact_sequences(B, projective_module(B, [(0, 0)]), 3, 6))
    s1 = next(s for s in rep.subclaims if s.name == "radical sequence n=1")
    assert s1.evidence["dim Ext^2n-1(JN)_nd"] == 8


def test_gmmz():
    A = builtin("trunc-poly-3", 16)
    ok(verify_gmmz(A, trivial_module(A), 3, 3))
    S = build_truncated_algebra(Quiver(("a", "b"), ()), 2, 6, F)
    ok(verify_gmmz(S, trivial_module(S), 2, 2))


def test_main_theorem():
    A = builtin("two-loops-J3", 14)
    ok(verify_main_theorem(A, omega1_shifted(A), 3, 2))
    ok(verify_main_theorem(A, trivial_module(A), 3, 2))


def test_main_theorem_on_non_koszul_algebra_is_gated():
    A = example(16)
    rep = verify_main_theorem(A, simple_module(A, "1"), 3, 2)
    assert rep.status == "precondition-failed"
    assert rep.precondition["hypothesis"] == "algebra is d-Koszul"


def test_corollary():
    A = builtin("trunc-poly-3", 16)
    rep = ok(verify_corollary(A, trivial_module(A), 3, 3))
    cross = rep.subclaims[-1]
    assert cross.evidence["Eod(M)"] == cross.evidence["Eev((Omega M)[-1])"] == [1, 1, 1, 1]
    B = builtin("two-loops-J3", 14)
    ok(verify_corollary(B, projective_module(B, [(0, 0)]), 3, 2))


def test_run_claim_all_and_reproducible():
    A = builtin("kronecker-J3", 20)
    b = budget_for(3)
    reps = run_claim("all", A, trivial_module(A), 3, b, "kronecker-J3")
    assert [r.claim for r in reps] == ["lemma-2-5", "theorem-2-6", "exact-sequences", "gmmz", "main-theorem",
                                       "corollary"]
    assert all(r.status == "pass" for r in reps)
    again = run_claim("all", A, trivial_module(A), 3, b, "kronecker-J3")
    assert [json.dumps(r.to_dict(), sort_keys=True, default=str) for r in reps] == \
        [json.dumps(r.to_dict(), sort_keys=True, default=str) for r in again]
    with pytest.raises(ValueError):
        run_claim("theorem-9", A, trivial_module(A), 3, b)


def test_failing_subclaim_is_reported_as_defect():
    from dkoszul.verify import SubClaim, VerificationReport
    rep = VerificationReport("x", "y", {}, "prime:7", [SubClaim("s", False)]).finish()
    assert rep.status == "fail" and rep.exit_code == 1 and "engine defect" in rep.notes[-1]
