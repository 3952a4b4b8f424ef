"""Ext groups against the top A_0, Yoneda products, and even/odd Ext structures.

Conventions.  A_0 is resolved one simple at a time: ``Ext^m(S(u), A_0)`` has
a basis dual to the generators of Q^m in the minimal resolution of S(u), and
the basis element of a generator sitting at vertex x is a class from S(u) to
S(x).  As an element of the Ext algebra it has source u and target x, so the
product ``g * f`` ("g after f") is nonzero only when ``src g = tgt f``.

Products are computed by lifting the cocycle of f to a chain map into the
resolution of its target simple and reading off top coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import GradedAlgebra, StandardGradingReport, build_from_structure_constants, check_standardly_graded
from .errors import BudgetError
from .gmod import INF, GradedModule, simple_module
from .resolve import ChainMap, Resolution, lift_generators, minimal_resolution


@dataclass(frozen=True)
class ExtElement:
    """Element of Ext^i(M, A_0): coefficients on the generators of Q^i (dual basis)."""

    res: Resolution
    i: int
    coeffs: tuple  # one scalar per generator of Q^i

    @property
    def support(self) -> list:
        gens = self.res.free[self.i].gens
        return [(k, gens[k]) for k, c in enumerate(self.coeffs) if c != 0]

    @property
    def internal_degrees(self) -> set:
        return {s for _, (v, s) in self.support}

    @property
    def is_zero(self) -> bool:
        return not any(c != 0 for c in self.coeffs)

    def vector(self) -> np.ndarray:
        return self.res.field.asarray(np.array(list(self.coeffs), dtype=object)).reshape(-1)


def ext_basis(res: Resolution, i: int) -> list[ExtElement]:
    """Dual basis of the generators of Q^i, in generator order."""
    res.extend(i)
    n = len(res.free[i].gens)
    F = res.field
    zero, one = F.scalar(0), F.scalar(1)
    return [ExtElement(res, i, tuple(one if k == g else zero for k in range(n))) for g in range(n)]


# ---------------------------------------------------------------------------
# resolutions of the simples


def simple_resolutions(A: GradedAlgebra, depth: int) -> list[Resolution]:
    """Minimal resolutions of every simple, cached on the algebra and extended on demand."""
    cache = getattr(A, "_simple_resolutions", None)
    if cache is None:
        cache = [minimal_resolution(simple_module(A, v), 0) for v in range(A.r)]
        A._simple_resolutions = cache
    for r in cache:
        r.extend(depth)
    return cache


def lift_basis_element(res: Resolution, i: int, gamma: int, depth: int) -> tuple[ChainMap, int]:
    """Chain map Q^{i+k} -> P_u^k[s] lifting the dual of generator gamma (at vertex u, degree s)."""
    A, F = res.algebra, res.field
    res.extend(i + depth)
    u, s = res.free[i].gens[gamma]
    target = simple_resolutions(A, depth)[u]
    run = res.free[i].run(s, u)
    F0 = F.zeros(1, run.count)
    F0[0, gamma - run.start] = F.scalar(1)
    return lift_generators(res, target, i, {(s, u): F0}, depth, qshift=s), u


def read_products(cm: ChainMap, m: int) -> np.ndarray:
    """Matrix (generators of P_u^m) x (generators of Q^{i+m}) of Yoneda products g * f."""
    F = cm.source.field
    Qh = cm.source.free[cm.offset + m]
    Pu = cm.target.free[m]
    out = F.zeros(len(Pu.gens), len(Qh.gens))
    imgs = cm.images[m]
    for run in Qh.runs:
        X = imgs.get((run.s, run.v))
        if X is None or X.shape[0] == 0:
            continue
        gidx, rows = Pu.top_rows(run.s - cm.qshift, run.v)
        if len(rows):
            out[np.ix_(list(gidx), range(run.start, run.start + run.count))] = X[rows]
    return out


def yoneda_product(g: ExtElement, f: ExtElement) -> ExtElement:
    """g * f for g in Ext^m(S(u), A_0) (a simple's resolution) and f in Ext^i(M, A_0)."""
    F = f.res.field
    A = f.res.algebra
    m = g.i
    sims = simple_resolutions(A, m)
    try:
        u = sims.index(g.res)
    except ValueError:
        raise ValueError("left factor must come from the resolution of a simple module") from None
    f.res.extend(f.i + m)
    total = F.zeros(1, len(f.res.free[f.i + m].gens))
    gv = g.vector().reshape(1, -1)
    for k, (v, s) in f.support:
        if v != u:
            continue
        cm, _ = lift_basis_element(f.res, f.i, k, m)
        total = F.reduce(total + f.coeffs[k] * F.matmul(gv, read_products(cm, m)))
    return ExtElement(f.res, f.i + m, tuple(total[0].tolist()))


# ---------------------------------------------------------------------------
# even Ext algebra and even / odd Ext modules


@dataclass
class ExtAlgebraBundle:
    base: GradedAlgebra
    H_E: int
    algebra: GradedAlgebra
    report: StandardGradingReport
    simple_res: list
    # grade n basis: list of (u, generator index in res_S[u]^{2n})
    basis_index: list
    internal_ceiling: object

    @property
    def flagged(self) -> bool:
        return not self.report.ok

    @property
    def flag_message(self) -> str:
        return "" if self.report.ok else f"not standardly graded up to {self.H_E}: {self.report.message}"


def _grade_basis(sims: list, i: int) -> list:
    return [(u, k) for u, r in enumerate(sims) for k in range(len(r.free[i].gens))]


def build_ext_even_algebra(A: GradedAlgebra, H_E: int) -> ExtAlgebraBundle:
    """E^ev(A) with grade n = Ext^{2n}(A_0, A_0), products for grade sums up to H_E."""
    F = A.field
    sims = simple_resolutions(A, 2 * H_E)
    bases = [_grade_basis(sims, 2 * n) for n in range(H_E + 1)]
    dims = [len(b) for b in bases]
    pos = [{uk: p for p, uk in enumerate(b)} for b in bases]
    blocks, labels = [], []
    for n, b in enumerate(bases):
        row, lab = [], []
        for u, k in b:
            x, s = sims[u].free[2 * n].gens[k]
            row.append((u, x))
            lab.append(("ext", 2 * n, A.vertex_names[u], A.vertex_names[x], s, k))
        blocks.append(row)
        labels.append(lab)
    mult = {(i, j): F.zeros(dims[i] * dims[j], dims[i + j]).reshape(dims[i], dims[j], dims[i + j])
            for i in range(H_E + 1) for j in range(H_E + 1 - i)}
    for n1 in range(H_E + 1):
        for col, (w, k) in enumerate(bases[n1]):
            depth = 2 * (H_E - n1)
            cm, u = lift_basis_element(sims[w], 2 * n1, k, depth)
            for n2 in range(H_E - n1 + 1):
                Mx = read_products(cm, 2 * n2)
                T = mult[(n2, n1)]
                for k2 in range(Mx.shape[0]):
                    row = pos[n2][(u, k2)]
                    for h in np.flatnonzero(Mx[k2]):
                        T[row, col, pos[n1 + n2][(w, int(h))]] = Mx[k2, h]
    E = build_from_structure_constants(F, A.r, dims, mult, H_E, blocks=blocks, labels=labels,
                                       vertex_names=A.vertex_names, name=f"Eev({A.name or 'A'})",
                                       require_generated=False)
    # vanishing grades imply nothing about later ones unless every resolution stopped
    E.complete = all(r.terminated() for r in sims)
    E.top_degree = max([n for n, d in enumerate(dims) if d] or [0]) if E.complete else H_E
    report = check_standardly_graded(E)
    if not report.ok:
        E.not_standard = f"not standardly graded up to {H_E}: {report.message}"
    ceiling = min(min(r.ceilings[: 2 * H_E + 1]) for r in sims)
    return ExtAlgebraBundle(A, H_E, E, report, sims, bases, ceiling)


def _ext_module(bundle: ExtAlgebraBundle, res: Resolution, parity: int, name: str) -> GradedModule:
    A, E = bundle.base, bundle.algebra
    F = A.field
    H_E = bundle.H_E
    sims = bundle.simple_res
    top_grade = H_E
    res.extend(2 * top_grade + parity)
    # grade n -> per vertex ordered generator lists
    layout = []
    for n in range(top_grade + 1):
        per = [[] for _ in range(A.r)]
        for g, (v, s) in enumerate(res.free[2 * n + parity].gens):
            per[v].append(g)
        layout.append(per)
    dims = [tuple(len(p) for p in per) for per in layout]
    action = {}
    grade1 = bundle.basis_index[1] if H_E >= 1 else []
    for n in range(top_grade):
        i = 2 * n + parity
        mats = {a: F.zeros(dims[n + 1][E.basis[1][a].tgt], dims[n][E.basis[1][a].src]) for a in range(len(grade1))}
        for u in range(A.r):
            for colpos, g in enumerate(layout[n][u]):
                cm, _ = lift_basis_element(res, i, g, 2)
                Mx = read_products(cm, 2)
                for a, (ua, k2) in enumerate(grade1):
                    if ua != u:
                        continue
                    x = E.basis[1][a].tgt
                    for rowpos, h in enumerate(layout[n + 1][x]):
                        mats[a][rowpos, colpos] = Mx[k2, h]
        for a, m in mats.items():
            action[(n, a)] = m
    ceiling = top_grade
    if res.terminated() and all(sum(d) == 0 for d in dims[-1:]):
        ceiling = INF
    return GradedModule(E, 0, dims, action, ceiling, name=name)


def build_ext_even_module(bundle: ExtAlgebraBundle, M: GradedModule, res: Optional[Resolution] = None) -> GradedModule:
    """E^ev(M): grade n = Ext^{2n}(M, A_0) with the grade-1 action of E^ev(A)."""
    res = res or minimal_resolution(M, 2 * bundle.H_E)
    return _ext_module(bundle, res, 0, f"Eev({M.name})")


def build_ext_odd_module(bundle: ExtAlgebraBundle, M: GradedModule, res: Optional[Resolution] = None) -> GradedModule:
    """E^od(M): grade n = Ext^{2n+1}(M, A_0) with the grade-1 action of E^ev(A)."""
    res = res or minimal_resolution(M, 2 * bundle.H_E + 1)
    return _ext_module(bundle, res, 1, f"Eod({M.name})")
