"""Executable checks of the structural results on concrete (algebra, module, d) instances.

Each ``verify_*`` function first checks the hypotheses of the statement it
tests.  If a hypothesis fails the report says "precondition-failed" and
carries the failing certificate; it never reports a pass in that case.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .algebra import GradedAlgebra
from .errors import AlgebraError, BudgetError
from .ext import build_ext_even_algebra, build_ext_even_module, build_ext_odd_module
from .gmod import INF, GradedModule, graded_iso, radical_power, shift, top, trivial_module
from .koszul import (KoszulCertificate, delta, ext_concentration_table, is_d_koszul,
                     is_generalized_d_koszul, is_koszul_module)
from .resolve import minimal_resolution

CLAIMS = ("lemma-2-5", "theorem-2-6", "exact-sequences", "gmmz", "main-theorem", "corollary")

STATUS_EXIT = {"pass": 0, "fail": 1, "precondition-failed": 2, "budget": 2}


@dataclass
class SubClaim:
    name: str
    passed: bool
    evidence: dict = dc_field(default_factory=dict)
    witness: Optional[object] = None

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": "pass" if self.passed else "fail",
                "evidence": self.evidence, "witness": self.witness}


@dataclass
class VerificationReport:
    claim: str
    instance: str
    bounds: dict
    field: str
    subclaims: list = dc_field(default_factory=list)
    status: str = "pass"
    precondition: Optional[dict] = None
    notes: list = dc_field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT[self.status]

    def finish(self) -> "VerificationReport":
        if self.status == "pass" and not all(s.passed for s in self.subclaims):
            self.status = "fail"
            self.notes.append("hypotheses hold but a subclaim failed: treat as an engine defect")
        return self

    def to_dict(self) -> dict:
        return {"claim": self.claim, "instance": self.instance, "verdict": self.status,
                "bounds": self.bounds, "field": self.field,
                "precondition": self.precondition,
                "subclaims": [s.to_dict() for s in self.subclaims], "notes": list(self.notes)}


def _bounds(**kw) -> dict:
    return {k: (None if v == INF else v) for k, v in kw.items()}


def _start(claim, A: GradedAlgebra, name: str, **bounds) -> VerificationReport:
    return VerificationReport(claim, name, _bounds(D=A.D, **bounds), str(A.field))


def _gate(rep: VerificationReport, label: str, cert: KoszulCertificate) -> bool:
    if cert.holds:
        return True
    rep.status = "precondition-failed"
    rep.precondition = {"hypothesis": label, "certificate": cert.to_dict()}
    return False


def _budget(rep: VerificationReport, err: BudgetError) -> VerificationReport:
    rep.status = "budget"
    rep.notes.append(f"budget exhausted: {err}")
    return rep


def _ext_dim(table: dict, i: int, j: int) -> int:
    return table.get((i, j), 0)


def _table(M: GradedModule, H: int) -> dict:
    if H < 0:
        return {}
    return ext_concentration_table(minimal_resolution(M, H), H)


def _grade_dims(M: GradedModule, top_grade: int) -> list:
    return [M.dim(n) if n <= M.ceiling else None for n in range(top_grade + 1)]


# ---------------------------------------------------------------------------


def verify_lemma_2_5(A: GradedAlgebra, M: GradedModule, d: int, H: int, name: str = "") -> VerificationReport:
    """Odd Ext of M against even Ext of its syzygy, and the shifted syzygies."""
    H_E = max((H - 1) // 2, 0)
    rep = _start("lemma-2-5", A, name or M.name, H=H, H_E=H_E)
    try:
        res = minimal_resolution(M, H)
        if not _gate(rep, "M is d-Koszul", is_d_koszul(M, d, H, res)):
            return rep
        # E^od(M) against E^ev(Omega M)
        bundle = build_ext_even_algebra(A, H_E)
        Om = res.syzygy(1)
        odd = build_ext_odd_module(bundle, M, res)
        even = build_ext_even_module(bundle, Om)
        od, ev = _grade_dims(odd, H_E), _grade_dims(even, H_E)
        rep.subclaims.append(SubClaim("odd/even grade dimensions", od == ev, {"Eod(M)": od, "Eev(Omega M)": ev},
                                      None if od == ev else next(n for n in range(H_E + 1) if od[n] != ev[n])))
        if od == ev:
            if bundle.flagged:
                rep.subclaims.append(SubClaim("odd/even isomorphism", False, {"reason": bundle.flag_message}))
            else:
                iso = graded_iso(odd, even)
                rep.subclaims.append(SubClaim("odd/even isomorphism", iso.iso is not None, {"search": iso.reason}))
        # shifted syzygies
        for i in range(0, max(H - 1, 0)):
            Oi = shift(res.syzygy(i), -delta(i, d))
            cert = is_generalized_d_koszul(Oi, d, H - i)
            rep.subclaims.append(SubClaim(f"Omega^{i}[-{delta(i, d)}] generalized", cert.holds,
                                          {"certificate": cert.to_dict()}, cert.to_dict()["witness"]))
    except BudgetError as e:
        return _budget(rep, e)
    return rep.finish()


def _gate_radical(rep, A, N, d, H) -> bool:
    return _gate(rep, "algebra is d-Koszul", is_d_koszul(trivial_module(A), d, H)) and \
        _gate(rep, "N is generalized d-Koszul", is_generalized_d_koszul(N, d, H))


def verify_theorem_2_6(A: GradedAlgebra, N: GradedModule, d: int, H: int, name: str = "",
                       radical_range: Optional[int] = None) -> VerificationReport:
    """Radical layers of a generalized d-Koszul module, and the Ext dimension chain."""
    rep = _start("theorem-2-6", A, name or N.name, H=H)
    try:
        if not _gate_radical(rep, A, N, d, H):
            return rep
        top_i = radical_range if radical_range is not None else d
        for i in range(1, top_i + 1):
            Ji, _ = radical_power(N, i)
            cert = is_generalized_d_koszul(shift(Ji, -i), d, H)
            rep.subclaims.append(SubClaim(f"J^{i}N[-{i}] generalized", cert.holds,
                                          {"certificate": cert.to_dict()}, cert.to_dict()["witness"]))
        tables = {i: _table(radical_power(N, i)[0], H) for i in range(1, d)}
        for n in range(1, H // 2 + 1):
            dims = [_ext_dim(tables[i], 2 * n - 1, n * d) for i in range(1, d)]
            ok = len(set(dims)) <= 1
            rep.subclaims.append(SubClaim(f"Ext chain n={n}", ok,
                                          {f"dim Ext^{2 * n - 1}(J^iN)_{n * d}, i=1..{d - 1}": dims}))
    except BudgetError as e:
        return _budget(rep, e)
    return rep.finish()


def verify_exact_sequences(A: GradedAlgebra, N: GradedModule, d: int, H: int, name: str = "") -> VerificationReport:
    """Dimension identities forced by the long exact sequences of the radical filtration."""
    rep = _start("exact-sequences", A, name or N.name, H=H)
    try:
        if not _gate_radical(rep, A, N, d, H):
            return rep
        JN, _ = radical_power(N, 1)
        Jd1, _ = radical_power(N, d - 1)
        Jd, _ = radical_power(N, d)
        topN, _ = top(N)
        layer, _ = top(Jd1)
        tN, tJ, tTop = _table(N, H), _table(JN, H), _table(topN, H)
        tJd1, tJd, tLayer = _table(Jd1, H), _table(Jd, H), _table(layer, H)
        for n in range(0, H // 2 + 1):
            j = n * d
            left = _ext_dim(tTop, 2 * n, j)
            a, b = _ext_dim(tJ, 2 * n - 1, j), _ext_dim(tN, 2 * n, j)
            van = (_ext_dim(tN, 2 * n - 1, j), _ext_dim(tJ, 2 * n, j))
            rep.subclaims.append(SubClaim(
                f"radical sequence n={n}", left == a + b and van == (0, 0),
                {"dim Ext^2n(N/JN)_nd": left, "dim Ext^2n-1(JN)_nd": a, "dim Ext^2n(N)_nd": b,
                 "vanishing Ext^2n-1(N)_nd, Ext^2n(JN)_nd": list(van)}))
        for n in range(0, (H - 1) // 2 + 1):
            j = (n + 1) * d
            ev = _ext_dim(tJd, 2 * n, j)
            od = _ext_dim(tLayer, 2 * n + 1, j)
            om = _ext_dim(tJ, 2 * n + 1, j)
            om2 = _ext_dim(tJd1, 2 * n + 1, j)
            rep.subclaims.append(SubClaim(
                f"layer sequence n={n}", od == ev + om and om == om2,
                {"dim Ext^2n(J^dN)": ev, "dim Ext^2n+1(J^(d-1)N/J^dN)": od,
                 "dim Ext^2n+1(JN)": om, "dim Ext^2n+1(J^(d-1)N)": om2, "internal degree": j}))
    except BudgetError as e:
        return _budget(rep, e)
    return rep.finish()


def _even_checks(rep: VerificationReport, bundle, H_E: int) -> bool:
    ok = not bundle.flagged
    rep.subclaims.append(SubClaim("Eev(A) standardly graded", ok,
                                  {"grade dims": list(bundle.algebra.dims)},
                                  None if ok else bundle.flag_message))
    return ok


def _koszul_sub(rep: VerificationReport, label: str, X: GradedModule, H_E: int) -> KoszulCertificate:
    cert = is_koszul_module(X, H_E)
    rep.subclaims.append(SubClaim(label, cert.holds, {"certificate": cert.to_dict()}, cert.to_dict()["witness"]))
    return cert


def verify_gmmz(A: GradedAlgebra, M: GradedModule, d: int, H_E: int, name: str = "") -> VerificationReport:
    """Even Ext algebra Koszul, and the even Ext module of a d-Koszul module Koszul over it."""
    rep = _start("gmmz", A, name or M.name, H_E=H_E, H=2 * H_E)
    try:
        depth = 2 * H_E
        res = minimal_resolution(M, depth)
        if not (_gate(rep, "algebra is d-Koszul", is_d_koszul(trivial_module(A), d, depth))
                and _gate(rep, "M is d-Koszul", is_d_koszul(M, d, depth, res))):
            return rep
        bundle = build_ext_even_algebra(A, H_E)
        if _even_checks(rep, bundle, H_E):
            _koszul_sub(rep, "Eev(A) Koszul algebra", trivial_module(bundle.algebra), H_E)
            _koszul_sub(rep, "Eev(M) Koszul module", build_ext_even_module(bundle, M, res), H_E)
    except BudgetError as e:
        return _budget(rep, e)
    return rep.finish()


def verify_main_theorem(A: GradedAlgebra, M: GradedModule, d: int, H_E: int, name: str = "") -> VerificationReport:
    """Even Ext module of a generalized d-Koszul module is Koszul."""
    rep = _start("main-theorem", A, name or M.name, H_E=H_E, H=2 * H_E + 1)
    try:
        depth = 2 * H_E + 1
        res = minimal_resolution(M, depth)
        if not (_gate(rep, "algebra is d-Koszul", is_d_koszul(trivial_module(A), d, depth))
                and _gate(rep, "M is generalized d-Koszul", is_generalized_d_koszul(M, d, depth, res))):
            return rep
        bundle = build_ext_even_algebra(A, H_E)
        if _even_checks(rep, bundle, H_E):
            _koszul_sub(rep, "Eev(M) Koszul module", build_ext_even_module(bundle, M, res), H_E)
    except BudgetError as e:
        return _budget(rep, e)
    return rep.finish()


def verify_corollary(A: GradedAlgebra, M: GradedModule, d: int, H_E: int, name: str = "") -> VerificationReport:
    """Odd Ext module of a d-Koszul module is Koszul, directly and via the first syzygy."""
    rep = _start("corollary", A, name or M.name, H_E=H_E, H=2 * H_E + 1)
    try:
        depth = 2 * H_E + 1
        res = minimal_resolution(M, depth)
        if not (_gate(rep, "algebra is d-Koszul", is_d_koszul(trivial_module(A), d, depth))
                and _gate(rep, "M is d-Koszul", is_d_koszul(M, d, depth, res))):
            return rep
        bundle = build_ext_even_algebra(A, H_E)
        if _even_checks(rep, bundle, H_E):
            odd = build_ext_odd_module(bundle, M, res)
            _koszul_sub(rep, "Eod(M) Koszul module", odd, H_E)
            Om = shift(res.syzygy(1), -1)
            even = build_ext_even_module(bundle, Om)
            _koszul_sub(rep, "Eev((Omega M)[-1]) Koszul module", even, H_E)
            od, ev = _grade_dims(odd, H_E), _grade_dims(even, H_E)
            rep.subclaims.append(SubClaim("cross-route grade dimensions", od == ev,
                                          {"Eod(M)": od, "Eev((Omega M)[-1])": ev}))
    except BudgetError as e:
        return _budget(rep, e)
    return rep.finish()


# ---------------------------------------------------------------------------
# budgets


@dataclass(frozen=True)
class Budget:
    effort: int
    H: int
    H_E: int
    D: int

    def formulas(self) -> str:
        return ("H = 2*effort + 4; H_E = effort + 1; "
                "D = delta(max(H, 2*H_E + 1), d) + d + 1")


def budget_for(d: int, effort: int = 2, degbound: Optional[int] = None) -> Budget:
    if effort < 1:
        raise ValueError("effort must be at least 1")
    H = 2 * effort + 4
    H_E = effort + 1
    D = delta(max(H, 2 * H_E + 1), d) + d + 1
    if degbound is not None:
        D = degbound
    return Budget(effort, H, H_E, D)


RUNNERS = {
    "lemma-2-5": lambda A, M, d, b, name: verify_lemma_2_5(A, M, d, b.H, name),
    "theorem-2-6": lambda A, M, d, b, name: verify_theorem_2_6(A, M, d, b.H, name),
    "exact-sequences": lambda A, M, d, b, name: verify_exact_sequences(A, M, d, b.H, name),
    "gmmz": lambda A, M, d, b, name: verify_gmmz(A, M, d, b.H_E, name),
    "main-theorem": lambda A, M, d, b, name: verify_main_theorem(A, M, d, b.H_E, name),
    "corollary": lambda A, M, d, b, name: verify_corollary(A, M, d, b.H_E, name),
}


def run_claim(claim: str, A: GradedAlgebra, M: GradedModule, d: int, budget: Budget, name: str = "") -> list:
    claims = CLAIMS if claim == "all" else (claim,)
    out = []
    for c in claims:
        if c not in RUNNERS:
            raise ValueError(f"unknown claim {c!r}")
        try:
            rep = RUNNERS[c](A, M, d, budget, name)
        except AlgebraError as e:
            rep = VerificationReport(c, name or M.name, _bounds(D=A.D, H=budget.H, H_E=budget.H_E), str(A.field),
                                     status="precondition-failed", notes=[str(e)])
        rep.bounds["effort"] = budget.effort
        rep.notes.append(f"budget formulas: {budget.formulas()}")
        out.append(rep)
    return out
