"""Minimal graded projective resolutions, chain-map lifting, horseshoe and minimisation.

A resolution stores, for each homological position i, the free module ``free[i]``
and the images of its generators: ``images[i][(s, v)]`` is a matrix whose
columns are the images of the (s, v) generators, written in the (s, v) block
of the target (the module for i = 0, ``free[i - 1]`` otherwise).

``ceilings[i]`` is the internal degree up to which the generators of
``free[i]`` are known to be complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import AlgebraError, BudgetError, ModuleError
from .gmod import (INF, FreeModule, GradedMap, GradedModule, _span, hom_from_free,
                   submodule, support_floor)
from .scalar import Solver

__all__ = ["Resolution", "minimal_resolution", "syzygy", "lift_chain_map", "lift_generators",
           "horseshoe", "minimize", "support_floor", "check_exact", "check_minimal",
           "hom_complex_cohomology", "ChainMap"]


class Resolution:
    def __init__(self, module: GradedModule, free: list, images: list, ceilings: list,
                 minimal: bool = True, degbound=None, redundant: bool = False):
        self.module = module
        self.algebra = module.algebra
        self.field = module.field
        self.free: list[FreeModule] = free
        self.images: list[dict] = images
        self.ceilings: list = ceilings
        self.minimal = minimal
        self.degbound = degbound
        self.redundant = redundant
        self.kernels: list[dict] = []
        self._kernel_window: list = []
        self._diff: dict = {}
        self._solvers: dict = {}
        self._shifted: dict = {}

    # -- shape ----------------------------------------------------------------

    @property
    def H(self) -> int:
        return len(self.free) - 1

    def generators(self, i: int) -> list:
        if i > self.H:
            raise BudgetError(f"resolution computed only to homological degree {self.H}", degree=i)
        return list(self.free[i].gens)

    def generator_degrees(self, i: int) -> list:
        return sorted({s for _, s in self.generators(i)})

    def ceiling(self, i: int):
        return self.ceilings[i]

    def target(self, i: int):
        return self.module if i == 0 else self.free[i - 1]

    def terminated(self) -> bool:
        """True when some free module is zero with exact data, so all later ones vanish."""
        for i, Q in enumerate(self.free):
            if not Q.gens and self.ceilings[i] == INF:
                return True
        return False

    # -- differentials ----------------------------------------------------------

    def diff_block(self, i: int, n: int, w: int) -> np.ndarray:
        key = (i, n, w)
        got = self._diff.get(key)
        if got is None:
            got = hom_from_free(self.free[i], self.target(i), self.images[i], n, w)
            self._diff[key] = got
        return got

    def solver(self, i: int, n: int, w: int) -> Solver:
        key = (i, n, w)
        got = self._solvers.get(key)
        if got is None:
            got = Solver(self.field, self.diff_block(i, n, w))
            self._solvers[key] = got
        return got

    def shifted(self, i: int, q: int) -> FreeModule:
        if q == 0:
            return self.free[i]
        key = (i, q)
        got = self._shifted.get(key)
        if got is None:
            got = self.free[i].shift(q)
            self._shifted[key] = got
        return got

    def projective(self, i: int) -> GradedModule:
        A = self.algebra
        Q = self.free[i]
        label = " + ".join(f"P({A.vertex_names[v]})[{s}]" for v, s in Q.gens) or "0"
        return Q.to_module(name=label)

    def differential(self, i: int) -> GradedMap:
        src = self.projective(i)
        tgt = self.module if i == 0 else self.projective(i - 1)
        blocks = {}
        for n in src.degrees():
            if not self.free[i].known(n) or not tgt.known(n):
                break
            for w in range(self.algebra.r):
                blocks[(n, w)] = self.diff_block(i, n, w)
        return GradedMap(src, tgt, blocks)

    # -- kernels and extension ---------------------------------------------------

    def _kernel(self, i: int) -> dict:
        """Bases (B, keys) of ker d_i, computed on demand."""
        while len(self.kernels) <= i:
            j = len(self.kernels)
            Q = self.free[j]
            c = self.ceilings[j]
            cap = min(c, Q.ceiling)
            hi = Q.hi if cap == INF else min(Q.hi, int(cap))
            K = {}
            for n in range(Q.lo, hi + 1):
                for w in range(self.algebra.r):
                    if Q.dim(n, w) == 0:
                        continue
                    B, free = self.field.nullspace(self.diff_block(j, n, w))
                    if B.shape[1]:
                        K[(n, w)] = (B, np.array(free, dtype=np.int64))
            self.kernels.append(K)
            self._kernel_window.append((Q.lo, hi, cap))
        return self.kernels[i]

    def extend(self, H: int) -> "Resolution":
        while self.H < H:
            i = self.H + 1
            K = self._kernel(i - 1)
            lo, hi, cap = self._kernel_window[i - 1]
            gens, imgs = _cover(self.free[i - 1], K, lo, hi, self.redundant)
            Q = FreeModule(self.algebra, gens)
            self.free.append(Q)
            self.images.append(imgs)
            self.ceilings.append(cap)
        return self

    def syzygy(self, i: int) -> GradedModule:
        if i == 0:
            return self.module
        if i > self.H + 1:
            raise BudgetError(f"syzygy {i} needs the resolution to degree {i - 1}", degree=i)
        K = self._kernel(i - 1)
        lo, hi, cap = self._kernel_window[i - 1]
        A = self.algebra
        if not K:
            return GradedModule(A, 0, [], {}, cap, name=f"Omega^{i}")
        return submodule(self.free[i - 1], K, lo, hi, cap, name=f"Omega^{i}({self.module.name})")

    def summary(self) -> list:
        return [(i, list(self.free[i].gens), self.ceilings[i]) for i in range(self.H + 1)]

    def __repr__(self):
        return f"Resolution(H={self.H}, gens={[len(q) for q in self.free]})"


def _cover(T, K: dict, lo: int, hi: int, redundant: bool = False) -> tuple[list, dict]:
    """Generators of the submodule K of T (minimal unless redundant), in (degree, vertex) order."""
    A, F = T.algebra, T.field
    gens, imgs = [], {}
    for n in range(lo, hi + 1):
        for w in range(A.r):
            got = K.get((n, w))
            if got is None:
                continue
            B, keys = got
            cols = []
            for a, el in enumerate(A.basis[1]) if n - 1 >= lo else []:
                if el.tgt != w:
                    continue
                src = K.get((n - 1, el.src))
                if src is None:
                    continue
                cols.append(T.apply(1, a, n - 1, src[0]))
            chosen = list(range(B.shape[1]))
            extra = []
            if cols:
                Y = np.concatenate(cols, axis=1)
                coords = Y[keys]
                if np.any(coords):
                    R, piv = F.rref(coords.T.copy())
                    pset = set(piv)
                    chosen = [j for j in range(B.shape[1]) if j not in pset]
                    if redundant and piv:
                        extra.append(F.matmul(B, R[0].reshape(-1, 1)))
            mats = [B[:, chosen]] + extra
            X = np.concatenate(mats, axis=1)
            if X.shape[1]:
                imgs[(n, w)] = X
                gens.extend([(w, n)] * X.shape[1])
    return gens, imgs


def minimal_resolution(M: GradedModule, H: int, degbound: Optional[int] = None,
                       redundant: bool = False) -> Resolution:
    """Minimal graded projective resolution of M to homological degree H.

    With ``redundant`` each step also adds one superfluous generator wherever
    the radical of the kernel is nonzero, giving a non-minimal resolution.
    """
    if H < 0:
        raise ValueError("homological bound must be non-negative")
    A, F = M.algebra, M.field
    if A.not_standard:
        raise AlgebraError(f"refusing to resolve over {A.name or 'the algebra'}: {A.not_standard}")
    c0 = M.ceiling if degbound is None else min(M.ceiling, degbound)
    hi = M.hi if c0 == INF else min(M.hi, int(c0))
    K = {(n, w): (F.eye(M.dim(n, w)), np.arange(M.dim(n, w)))
         for n in range(M.lo, hi + 1) for w in range(A.r) if M.dim(n, w)}
    gens, imgs = _cover(M, K, M.lo, hi, redundant)
    res = Resolution(M, [FreeModule(A, gens)], [imgs], [c0], minimal=not redundant,
                     degbound=degbound, redundant=redundant)
    return res.extend(H)


def syzygy(res: Resolution, i: int) -> GradedModule:
    return res.syzygy(i)


# ---------------------------------------------------------------------------
# checks


def check_exact(res: Resolution) -> Optional[tuple]:
    """First (i, degree, vertex) where exactness fails, or None."""
    F, A = res.field, res.algebra
    M = res.module
    Q0 = res.free[0]
    c = res.ceilings[0]
    hi = M.hi if c == INF else min(M.hi, int(c))
    for n in range(M.lo, hi + 1):
        for w in range(A.r):
            d = M.dim(n, w)
            if d and F.rank(res.diff_block(0, n, w)) != d:
                return (0, n, w)
    for i in range(1, res.H + 1):
        Q, P = res.free[i], res.free[i - 1]
        cap = min(res.ceilings[i], P.ceiling)
        top = max(Q.hi, P.hi) if cap == INF else int(cap)
        for n in range(P.lo, top + 1):
            for w in range(A.r):
                if P.dim(n, w) == 0:
                    continue
                dprev = res.diff_block(i - 1, n, w)
                dcur = res.diff_block(i, n, w)
                if dcur.shape[1] and np.any(F.matmul(dprev, dcur)):
                    return (i, n, w)
                ker = P.dim(n, w) - F.rank(dprev)
                if F.rank(dcur) != ker:
                    return (i, n, w)
    return None


def check_minimal(res: Resolution) -> Optional[tuple]:
    """First (i, degree, vertex) whose differential has a nonzero top coefficient, or None."""
    for i in range(1, res.H + 1):
        P = res.free[i - 1]
        for (s, v), X in sorted(res.images[i].items()):
            _, rows = P.top_rows(s, v)
            if len(rows) and np.any(X[rows]):
                return (i, s, v)
    return None


# ---------------------------------------------------------------------------
# chain maps


@dataclass
class ChainMap:
    """Maps f_j: P^{offset + j} -> Q^j (shifted by ``qshift`` internal degrees)."""

    source: Resolution
    target: Resolution
    offset: int
    qshift: int
    images: list  # images[j][(s, v)] in the (s, v) block of Q^j[qshift]

    def block(self, j: int, n: int, w: int) -> np.ndarray:
        P = self.source.free[self.offset + j]
        Qs = self.target.shifted(j, self.qshift)
        return hom_from_free(P, Qs, self.images[j], n, w)

    def graded_maps(self) -> list:
        out = []
        for j in range(len(self.images)):
            src = self.source.projective(self.offset + j)
            tgt = self.target.shifted(j, self.qshift).to_module()
            blocks = {}
            for n in src.degrees():
                if not tgt.known(n):
                    break
                for w in range(src.r):
                    blocks[(n, w)] = self.block(j, n, w)
            out.append(GradedMap(src, tgt, blocks))
        return out


def lift_generators(P: Resolution, Q: Resolution, offset: int, F0: dict, depth: int,
                    qshift: int = 0) -> ChainMap:
    """Extend f_0: P^offset -> Q^0[qshift] (given on generators) to a chain map of the given depth."""
    F = P.field
    P.extend(offset + depth)
    Q.extend(depth)
    maps = [F0]
    for j in range(1, depth + 1):
        Pj, Pprev = P.free[offset + j], P.free[offset + j - 1]
        Qprev = Q.shifted(j - 1, qshift)
        cap = min(P.ceilings[offset + j], Q.ceilings[j] + qshift if Q.ceilings[j] != INF else INF)
        imgs = {}
        for run in Pj.runs:
            s, v = run.s, run.v
            if s > cap:
                raise BudgetError(f"chain map lift needs internal degree {s} beyond the known range {cap}",
                                  degree=s)
            d = P.images[offset + j][(s, v)]
            y = F.matmul(hom_from_free(Pprev, Qprev, maps[j - 1], s, v), d)
            if s - qshift < Q.free[j].lo or Q.free[j].dim(s - qshift, v) == 0:
                if np.any(y):
                    raise ModuleError(f"chain map lift inconsistent at position {j}, degree {s}")
                imgs[(s, v)] = F.zeros(0, run.count)
                continue
            x = Q.solver(j, s - qshift, v).solve(y)
            if x is None:
                raise ModuleError(f"chain map lift inconsistent at position {j}, degree {s}")
            imgs[(s, v)] = x
        maps.append(imgs)
    return ChainMap(P, Q, offset, qshift, maps)


def lift_chain_map(f: GradedMap, res_M: Resolution, res_N: Resolution, depth: int) -> ChainMap:
    """Lift a module map f: M -> N to a chain map between the resolutions."""
    F = res_M.field
    Q0 = res_M.free[0]
    F0 = {}
    for run in Q0.runs:
        s, v = run.s, run.v
        y = F.matmul(f.block(s, v), res_M.images[0][(s, v)])
        if res_N.free[0].dim(s, v) == 0:
            if np.any(y):
                raise ModuleError(f"map does not lift at degree {s}")
            F0[(s, v)] = F.zeros(0, run.count)
            continue
        x = res_N.solver(0, s, v).solve(y)
        if x is None:
            raise ModuleError(f"map does not lift at degree {s}")
        F0[(s, v)] = x
    return lift_generators(res_M, res_N, 0, F0, depth)


# ---------------------------------------------------------------------------
# horseshoe


class _Assembled:
    """Coordinate bookkeeping for Q_B = Q_A + Q_C with generators merged by (degree, vertex)."""

    def __init__(self, A, QA: FreeModule, QC: FreeModule):
        tagged = [((s, v), 0, k) for k, (v, s) in enumerate(QA.gens)] + \
                 [((s, v), 1, k) for k, (v, s) in enumerate(QC.gens)]
        tagged.sort(key=lambda t: (t[0], t[1], t[2]))
        self.origin = [(t[1], t[2]) for t in tagged]
        self.QB = FreeModule(A, [(sv[1], sv[0]) for sv, _, _ in tagged])
        self.QA, self.QC = QA, QC

    def embed(self, n: int, w: int, xa: Optional[np.ndarray], xc: Optional[np.ndarray], ncols: int):
        QB, F = self.QB, self.QB.field
        out = F.zeros(QB.dim(n, w), ncols)
        for g, (tag, k) in enumerate(self.origin):
            src, x = (self.QA, xa) if tag == 0 else (self.QC, xc)
            if x is None:
                continue
            sb = QB.segment(n, w, g)
            if sb.stop == sb.start:
                continue
            out[sb] = x[src.segment(n, w, k)]
        return out


def horseshoe(iota: GradedMap, pi: GradedMap, res_A: Resolution, res_C: Resolution, H: int) -> Resolution:
    """Resolution of B from 0 -> A -> B -> C -> 0 (given by iota, pi) and resolutions of A and C."""
    Am, B, Cm = iota.source, iota.target, pi.target
    alg, F = B.algebra, B.field
    res_A.extend(H)
    res_C.extend(H)
    c_all = min(B.ceiling, min(res_A.ceilings[: H + 1]), min(res_C.ceilings[: H + 1]))
    # exactness of the sequence, degree by degree
    for n in range(min(Am.lo, B.lo, Cm.lo), max(Am.hi, B.hi, Cm.hi) + 1):
        if n > c_all:
            break
        for w in range(alg.r):
            i_m, p_m = iota.block(n, w), pi.block(n, w)
            if np.any(F.matmul(p_m, i_m)) or F.rank(i_m) != Am.dim(n, w) or \
                    F.rank(p_m) != Cm.dim(n, w) or Am.dim(n, w) + Cm.dim(n, w) != B.dim(n, w):
                raise ModuleError(f"sequence not exact at degree {n}, vertex {w}")
    free, images, ceilings = [], [], []
    # lambda: lifts of the C-cover through pi
    lam = {}
    for run in res_C.free[0].runs:
        s, v = run.s, run.v
        x = Solver(F, pi.block(s, v)).solve(res_C.images[0][(s, v)])
        if x is None:
            raise ModuleError("projection is not surjective")
        lam[(s, v)] = x
    sigma_prev = None
    asm_prev = None
    for i in range(H + 1):
        QA, QC = res_A.free[i], res_C.free[i]
        asm = _Assembled(alg, QA, QC)
        QB = asm.QB
        imgs: dict = {}
        sigma: dict = {}
        for run in QB.runs:
            s, v = run.s, run.v
            cols = []
            ra, rc = QA.run(s, v), QC.run(s, v)
            if ra is not None:
                X = res_A.images[i][(s, v)]
                if i == 0:
                    cols.append(F.matmul(iota.block(s, v), X))
                else:
                    cols.append(asm_prev.embed(s, v, X, None, X.shape[1]))
            if rc is not None:
                Y = res_C.images[i][(s, v)]
                if i == 0:
                    cols.append(lam[(s, v)])
                else:
                    # sigma_i solves the correction that makes d_B square to zero
                    if i == 1:
                        rhs = F.reduce(-F.matmul(hom_from_free(res_C.free[0], B, lam, s, v), Y))
                        M0 = F.matmul(iota.block(s, v), res_A.diff_block(0, s, v))
                        x = Solver(F, M0).solve(rhs) if M0.shape[0] else F.zeros(M0.shape[1], Y.shape[1])
                    else:
                        rhs = F.reduce(-F.matmul(hom_from_free(res_C.free[i - 1], res_A.free[i - 2],
                                                               sigma_prev, s, v), Y))
                        if res_A.free[i - 2].dim(s, v) == 0:
                            x = F.zeros(res_A.free[i - 1].dim(s, v), Y.shape[1])
                        else:
                            x = res_A.solver(i - 1, s, v).solve(rhs)
                    if x is None:
                        raise ModuleError(f"horseshoe correction unsolvable at position {i}, degree {s}")
                    sigma[(s, v)] = x
                    cols.append(asm_prev.embed(s, v, x, Y, Y.shape[1]))
            imgs[(s, v)] = np.concatenate(cols, axis=1)
        free.append(QB)
        images.append(imgs)
        ceilings.append(min(c_all, res_A.ceilings[i], res_C.ceilings[i]))
        sigma_prev, asm_prev = sigma, asm
    return Resolution(B, free, images, ceilings, minimal=False)


# ---------------------------------------------------------------------------
# minimisation


def _drop_generators(Q: FreeModule, drop: set) -> tuple[FreeModule, callable]:
    """Q without the generators in drop, and a function restricting (n, w)-block vectors."""
    Q2 = FreeModule(Q.algebra, [g for k, g in enumerate(Q.gens) if k not in drop])

    def restrict(n: int, w: int, X: np.ndarray) -> np.ndarray:
        if X.shape[0] == 0:
            return X
        keep = np.ones(X.shape[0], dtype=bool)
        for g in drop:
            keep[Q.segment(n, w, g)] = False
        return X[keep]

    return Q2, restrict


def _cancel_block(F, free: list, images: list, i: int, s: int, v: int) -> bool:
    """Split off every contractible pair whose top coefficients sit at (i, s, v)."""
    Qi, P = free[i], free[i - 1]
    rows_g, rows = P.top_rows(s, v)
    X0 = images[i].get((s, v))
    if X0 is None or not len(rows):
        return False
    T = X0[rows]
    _, pc = F.rref(T)
    if not pc:
        return False
    _, pr = F.rref(T.T.copy())
    run = Qi.run(s, v)
    B = [run.start + c for c in pc]
    Bp = [rows_g[r] for r in pr]
    Tinv = F.solve(T[np.ix_(pr, pc)], F.eye(len(pc)))
    DB = X0[:, pc]  # d of the cancelled generators, block (s, v)
    new_i = {}
    P2, restrict_P = _drop_generators(P, set(Bp))
    for run2 in Qi.runs:
        s2, v2 = run2.s, run2.v
        X = images[i][(s2, v2)]
        m = s2 - s
        b_idx = P.algebra.block(m, v, v2) if m >= 0 else []
        if len(b_idx):
            nb = len(b_idx)
            Beta = np.stack([X[P.segment(s2, v2, g)] for g in Bp])  # (|B'|, nb, ncols)
            if np.any(Beta):
                # y = Tinv . beta: components of phi^{-1} delta(c) on the cancelled generators
                Y = F.matmul(Tinv, Beta.reshape(len(Bp), -1)).reshape(len(B), nb, X.shape[1])
                corr = F.zeros(X.shape[0], X.shape[1])
                for bpos, b in enumerate(b_idx):
                    if not np.any(Y[:, bpos]):
                        continue
                    G = P.apply(m, int(b), s, DB)
                    corr = F.reduce(corr + F.matmul(G, Y[:, bpos]))
                X = F.reduce(X - corr)
        keep = [k for k in range(run2.count) if run2.start + k not in B]
        X = restrict_P(s2, v2, X)[:, keep]
        if X.shape[1]:
            new_i[(s2, v2)] = X
    Qi2, restrict_Q = _drop_generators(Qi, set(B))
    free[i - 1], free[i] = P2, Qi2
    images[i] = new_i
    run_p = P.run(s, v)
    Xp = np.delete(images[i - 1][(s, v)], [g - run_p.start for g in Bp], axis=1)
    if Xp.shape[1]:
        images[i - 1][(s, v)] = Xp
    else:
        del images[i - 1][(s, v)]
    if i + 1 < len(free):
        images[i + 1] = {key: restrict_Q(key[0], key[1], X) for key, X in images[i + 1].items()}
    return True


def minimize(res: Resolution) -> Resolution:
    """Split off contractible summands until every differential has zero top coefficients.

    Pairs are cancelled a whole (position, degree, vertex) block at a time: with
    d = [[phi, delta], [gamma, eps]] and phi invertible, the reduced differential
    is eps - gamma phi^{-1} delta.
    """
    F = res.field
    free = list(res.free)
    images = [dict(d) for d in res.images]
    changed = True
    while changed:
        changed = False
        for i in range(1, len(free)):
            for (s, v) in sorted(images[i]):
                if (s, v) in images[i] and _cancel_block(F, free, images, i, s, v):
                    changed = True
    return Resolution(res.module, free, images, list(res.ceilings), minimal=True)


# ---------------------------------------------------------------------------
# cohomology of Hom(resolution, top)


def hom_complex_cohomology(res: Resolution, upto: Optional[int] = None) -> dict:
    """dim H^i(Hom(Q, A_0)) by internal degree, for any (not necessarily minimal) resolution.

    Hom(A e_v [s], A_0) is one-dimensional, so the cochains at (i, s, v) are
    indexed by the generators of Q^i at (s, v) and the coboundary is the
    matrix of top coefficients of the differential.
    """
    F = res.field
    top_i = res.H - 1 if upto is None else upto
    out: dict = {}
    for i in range(top_i + 1):
        Q = res.free[i]
        per = {}
        for run in Q.runs:
            s, v = run.s, run.v
            c_i = run.count
            # delta_i: C^i -> C^{i+1}, rows indexed by Q^{i+1} gens at (s, v)
            rank_out = 0
            nxt = res.images[i + 1].get((s, v)) if i + 1 <= res.H else None
            if nxt is not None:
                rank_out = F.rank(nxt[Q.top_rows(s, v)[1]])
            rank_in = 0
            if i >= 1:
                X = res.images[i].get((s, v))
                if X is not None:
                    rank_in = F.rank(X[res.free[i - 1].top_rows(s, v)[1]])
            h = c_i - rank_out - rank_in
            if h:
                per[s] = per.get(s, 0) + h
        out[i] = per
    return out
