"""Graded modules, graded maps and graded free (projective) modules.

A :class:`GradedModule` stores, for each internal degree ``n`` in a window
``[lo, hi]`` and each vertex ``w``, the dimension of ``e_w M_n`` together with
the action of every degree-1 basis element ``a`` as a matrix from the
``(n, src a)`` block to the ``(n + 1, tgt a)`` block.  Higher-degree elements
act through the algebra's factorisation ``A_k = A_1 A_{k-1}``.

``ceiling`` is the largest degree for which the data is known; components in
``(hi, ceiling]`` are zero and anything above ``ceiling`` is unknown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import GradedAlgebra
from .errors import BudgetError, ModuleError
from .scalar import Field, Solver

INF = math.inf


class GradedModule:
    def __init__(self, algebra: GradedAlgebra, lo: int, dims: Sequence[Sequence[int]],
                 action: Optional[dict] = None, ceiling=INF, name: str = ""):
        self.algebra = algebra
        self.field: Field = algebra.field
        r = algebra.r
        dims = [tuple(int(x) for x in d) for d in dims]
        for d in dims:
            if len(d) != r:
                raise ModuleError(f"dimension vector {d} does not have one entry per vertex ({r})")
        action = dict(action or {})
        # strip empty degrees at the bottom (and at the top when exact)
        while dims and sum(dims[0]) == 0:
            dims.pop(0)
            lo += 1
        if ceiling == INF:
            while dims and sum(dims[-1]) == 0:
                dims.pop()
        if not dims:
            lo = 0
        self.lo = lo
        self.dims = dims
        self.ceiling = ceiling
        self.name = name
        self._act: dict = {}
        A1 = algebra.basis[1] if algebra.D >= 1 else []
        self.action = {}
        for n in range(self.lo, self.hi):
            for a, el in enumerate(A1):
                shape = (self.dim(n + 1, el.tgt), self.dim(n, el.src))
                m = action.get((n, a))
                if m is None:
                    m = self.field.zeros(*shape)
                elif m.shape != shape:
                    raise ModuleError(f"action of arrow {a} at degree {n} has shape {m.shape}, expected {shape}")
                self.action[(n, a)] = m
        if self.hi > self.lo and algebra.D < 1:
            raise BudgetError("algebra truncated below degree 1", degree=1)

    # -- basic data ---------------------------------------------------------

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    @property
    def r(self) -> int:
        return self.algebra.r

    def known(self, n: int) -> bool:
        return n <= self.ceiling

    def dim(self, n: int, w: Optional[int] = None) -> int:
        if n > self.ceiling:
            raise BudgetError(f"module data exhausted above degree {self.ceiling}", degree=n)
        if n < self.lo or n > self.hi:
            return 0
        if w is None:
            return sum(self.dims[n - self.lo])
        return self.dims[n - self.lo][w]

    def dim_vector(self, n: int) -> tuple:
        return tuple(self.dim(n, w) for w in range(self.r))

    def dims_table(self) -> dict:
        return {n: self.dims[n - self.lo] for n in range(self.lo, self.hi + 1)}

    def total_dims(self) -> list:
        return [sum(d) for d in self.dims]

    def is_zero(self) -> bool:
        return not self.dims and self.ceiling == INF

    @property
    def exact(self) -> bool:
        return self.ceiling == INF

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    # -- action -------------------------------------------------------------

    def act1(self, a: int, n: int) -> np.ndarray:
        el = self.algebra.basis[1][a]
        m = self.action.get((n, a))
        if m is None:
            return self.field.zeros(self.dim(n + 1, el.tgt), self.dim(n, el.src))
        return m

    def act(self, k: int, b: int, n: int) -> np.ndarray:
        """Matrix of the degree-k basis element b from block (n, src b) to (n + k, tgt b)."""
        key = (k, b, n)
        got = self._act.get(key)
        if got is not None:
            return got
        A, F = self.algebra, self.field
        el = A.basis[k][b]
        rows, cols = self.dim(n + k, el.tgt), self.dim(n, el.src)
        if k == 0:
            got = F.eye(cols)
        elif k == 1:
            got = self.act1(b, n)
        elif rows == 0 or cols == 0:
            got = F.zeros(rows, cols)
        else:
            fct = A.factorization(k)[b]
            got = F.zeros(rows, cols)
            for a, x in zip(*np.nonzero(fct)):
                term = F.matmul(self.act1(int(a), n + k - 1), self.act(k - 1, int(x), n))
                got = F.reduce(got + fct[a, x] * term)
        self._act[key] = got
        return got

    def apply(self, k: int, b: int, n: int, X: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.act(k, b, n), X)

    def check_relations(self) -> Optional[tuple]:
        """First (degree k, module degree n) where the A_1-action fails to factor through A_k."""
        A, F = self.algebra, self.field
        for k in range(2, len(self.dims)):
            if not A.known(k) or A.dim(k) == 0 and not A.complete:
                continue
            d1, dp = A.dim(1), A.dim(k - 1)
            T = A.mult(1, k - 1).reshape(d1 * dp, A.dim(k)) if A.dim(k) else F.zeros(d1 * dp, 0)
            rel = F.kernel_basis(T.T.copy()) if T.shape[1] else F.eye(d1 * dp)
            if rel.shape[1] == 0:
                continue
            for n in range(self.lo, self.hi - k + 1):
                for w in range(self.r):
                    for col in rel.T:
                        acc = None
                        for idx in np.flatnonzero(col):
                            a, x = divmod(int(idx), dp)
                            ea, ex = A.basis[1][a], A.basis[k - 1][x]
                            if ex.src != w or ea.src != ex.tgt:
                                continue
                            term = F.matmul(self.act1(a, n + k - 1), self.act(k - 1, x, n))
                            if acc is None:
                                acc = {}
                            acc[ea.tgt] = term * col[idx] if ea.tgt not in acc else acc[ea.tgt] + term * col[idx]
                        if acc and any(np.any(F.reduce(m)) for m in acc.values()):
                            return (k, n)
        return None

    def __repr__(self):
        return f"GradedModule({self.name or '?'}, lo={self.lo}, dims={self.dims}, ceiling={self.ceiling})"


@dataclass
class GradedMap:
    """Degree-preserving module map given by blocks ``(n, w) -> matrix``."""

    source: object
    target: object
    blocks: dict

    def block(self, n: int, w: int) -> np.ndarray:
        m = self.blocks.get((n, w))
        if m is None:
            F = self.source.field
            return F.zeros(self.target.dim(n, w), self.source.dim(n, w))
        return m

    def is_homomorphism(self) -> bool:
        M, N = self.source, self.target
        F = M.field
        A = M.algebra
        for n in range(M.lo, M.hi + 1):
            if not N.known(n + 1) or not M.known(n + 1):
                break
            for a, el in enumerate(A.basis[1]):
                lhs = F.matmul(self.block(n + 1, el.tgt), M.apply(1, a, n, F.eye(M.dim(n, el.src))))
                rhs = F.matmul(N.apply(1, a, n, F.eye(N.dim(n, el.src))), self.block(n, el.src))
                if np.any(lhs != rhs):
                    return False
        return True

    def is_isomorphism(self) -> bool:
        M, N = self.source, self.target
        F = M.field
        lo, hi = min(M.lo, N.lo), max(M.hi, N.hi)
        for n in range(lo, hi + 1):
            if not (M.known(n) and N.known(n)):
                break
            for w in range(M.r):
                m = self.block(n, w)
                if m.shape[0] != m.shape[1] or F.rank(m) != m.shape[0]:
                    return False
        return self.is_homomorphism()

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        F = self.source.field
        keys = set(self.blocks) | set(other.blocks)
        return GradedMap(other.source, self.target,
                         {k: F.matmul(self.block(*k), other.block(*k)) for k in keys})


def identity_map(M: GradedModule) -> GradedMap:
    F = M.field
    return GradedMap(M, M, {(n, w): F.eye(M.dim(n, w)) for n in M.degrees() for w in range(M.r)})


# ---------------------------------------------------------------------------
# graded free modules


@dataclass(frozen=True)
class _Run:
    start: int
    count: int
    v: int
    s: int


class FreeModule:
    """Direct sum of shifted indecomposable projectives ``A e_v [s]``.

    Generators are ``(vertex, degree)`` pairs sorted by ``(degree, vertex)``.
    The coordinates of the ``(n, w)`` block are ``(g, b)`` pairs, generator-major,
    with ``b`` running over the basis of ``e_w A_{n - s_g} e_{v_g}``.
    """

    def __init__(self, algebra: GradedAlgebra, gens: Iterable[tuple]):
        self.algebra = algebra
        self.field = algebra.field
        self.gens = [(int(v), int(s)) for v, s in gens]
        keys = [(s, v) for v, s in self.gens]
        if keys != sorted(keys):
            raise ModuleError("free module generators must be sorted by (degree, vertex)")
        runs = []
        for i, (v, s) in enumerate(self.gens):
            if runs and runs[-1].v == v and runs[-1].s == s:
                runs[-1] = _Run(runs[-1].start, runs[-1].count + 1, v, s)
            else:
                runs.append(_Run(i, 1, v, s))
        self.runs = runs
        self._run_at = {(r.s, r.v): r for r in runs}
        if not self.gens:
            self.lo, self.hi, self.ceiling = 0, -1, INF
        else:
            self.lo = min(s for _, s in self.gens)
            if algebra.complete:
                self.ceiling = INF
                self.hi = max(s for _, s in self.gens) + algebra.top_degree
            else:
                self.ceiling = self.lo + algebra.D
                self.hi = self.ceiling
        self._layouts: dict = {}

    @property
    def r(self):
        return self.algebra.r

    def __len__(self):
        return len(self.gens)

    def known(self, n: int) -> bool:
        return n <= self.ceiling

    def layout(self, n: int, w: int):
        key = (n, w)
        got = self._layouts.get(key)
        if got is not None:
            return got
        if n > self.ceiling:
            raise BudgetError(f"free module data exhausted above degree {self.ceiling}", degree=n)
        A = self.algebra
        segs = []
        off = 0
        for run in self.runs:
            m = n - run.s
            if m < 0 or (A.complete and m > A.top_degree):
                idx = np.zeros(0, dtype=np.int64)
            else:
                idx = A.block(m, run.v, w)
            segs.append((run, idx, off))
            off += run.count * len(idx)
        got = (segs, off)
        self._layouts[key] = got
        return got

    def dim(self, n: int, w: Optional[int] = None) -> int:
        if w is None:
            return sum(self.dim(n, x) for x in range(self.r))
        if n < self.lo:
            return 0
        return self.layout(n, w)[1]

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def apply(self, k: int, c: int, n: int, X: np.ndarray) -> np.ndarray:
        """Left-multiply the vectors X (columns, block (n, src c)) by basis element c of A_k."""
        A, F = self.algebra, self.field
        el = A.basis[k][c]
        ncols = X.shape[1]
        lay_in, din = self.layout(n, el.src) if n >= self.lo else ([], 0)
        if X.shape[0] != din:
            raise ModuleError(f"vector block has {X.shape[0]} rows, expected {din}")
        if n + k > self.ceiling:
            raise BudgetError(f"free module data exhausted above degree {self.ceiling}", degree=n + k)
        lay_out, dout = self.layout(n + k, el.tgt) if n + k >= self.lo else ([], 0)
        Y = F.zeros(dout, ncols)
        if din == 0 or dout == 0 or ncols == 0:
            return Y
        for (run, idx_in, off_in), (_, idx_out, off_out) in zip(lay_in, lay_out):
            si, so = len(idx_in), len(idx_out)
            if si == 0 or so == 0:
                continue
            L = A.left_mult(k, c, n - run.s, run.v)
            cnt = run.count
            Xr = X[off_in: off_in + cnt * si].reshape(cnt, si, ncols).transpose(1, 0, 2).reshape(si, cnt * ncols)
            Z = F.matmul(L, Xr).reshape(so, cnt, ncols).transpose(1, 0, 2).reshape(cnt * so, ncols)
            Y[off_out: off_out + cnt * so] = Z
        return Y

    def segment(self, n: int, w: int, g: int) -> slice:
        """Coordinates of generator g inside the (n, w) block."""
        segs, _ = self.layout(n, w)
        for run, idx, off in segs:
            if run.start <= g < run.start + run.count:
                L = len(idx)
                o = off + (g - run.start) * L
                return slice(o, o + L)
        raise IndexError(g)

    def run(self, s: int, v: int) -> Optional[_Run]:
        return self._run_at.get((s, v))

    def top_rows(self, n: int, w: int) -> tuple[range, np.ndarray]:
        """Generators of degree n at vertex w, and their top coordinates in block (n, w)."""
        run = self._run_at.get((n, w))
        if run is None:
            return range(0), np.zeros(0, dtype=np.int64)
        segs, _ = self.layout(n, w)
        for r_, idx, off in segs:
            if r_ is run:
                return range(run.start, run.start + run.count), off + np.arange(run.count)
        raise AssertionError("run missing from layout")

    def generator_vectors(self, s: int, v: int) -> np.ndarray:
        F = self.field
        d = self.dim(s, v)
        run = self._run_at.get((s, v))
        if run is None:
            return F.zeros(d, 0)
        _, rows = self.top_rows(s, v)
        out = F.zeros(d, run.count)
        out[rows, np.arange(run.count)] = F.scalar(1)
        return out

    def shift(self, j: int) -> "FreeModule":
        return FreeModule(self.algebra, [(v, s + j) for v, s in self.gens])

    def degree_counts(self) -> dict:
        out: dict = {}
        for v, s in self.gens:
            out[(v, s)] = out.get((v, s), 0) + 1
        return out

    def to_module(self, name: str = "") -> GradedModule:
        A, F = self.algebra, self.field
        if not self.gens:
            return GradedModule(A, 0, [], {}, INF, name=name)
        hi = self.hi
        dims = [tuple(self.dim(n, w) for w in range(A.r)) for n in range(self.lo, hi + 1)]
        action = {}
        for n in range(self.lo, hi):
            for a, el in enumerate(A.basis[1]):
                action[(n, a)] = self.apply(1, a, n, F.eye(self.dim(n, el.src)))
        return GradedModule(A, self.lo, dims, action, self.ceiling, name=name)


def hom_from_free(Q: FreeModule, target, images: dict, n: int, w: int) -> np.ndarray:
    """Matrix, on block (n, w), of the map Q -> target sending each generator to its image.

    ``images[(s, v)]`` holds the images of the (s, v) generators as columns in the
    target's (s, v) block.
    """
    A, F = Q.algebra, Q.field
    rows = target.dim(n, w)
    segs, total = Q.layout(n, w) if n >= Q.lo else ([], 0)
    out = F.zeros(rows, total)
    if rows == 0 or total == 0:
        return out
    for run, idx, off in segs:
        if len(idx) == 0:
            continue
        X = images.get((run.s, run.v))
        if X is None:
            continue
        m = n - run.s
        cols = [target.apply(m, int(b), run.s, X) for b in idx]
        stacked = np.stack(cols, axis=2)  # rows x count x len(idx)
        out[:, off: off + run.count * len(idx)] = stacked.reshape(rows, run.count * len(idx))
    return out


# ---------------------------------------------------------------------------
# constructors


def zero_module(A: GradedAlgebra) -> GradedModule:
    return GradedModule(A, 0, [], {}, INF, name="0")


def trivial_module(A: GradedAlgebra) -> GradedModule:
    return GradedModule(A, 0, [tuple(1 for _ in range(A.r))], {}, INF, name="trivial")


def simple_module(A: GradedAlgebra, v) -> GradedModule:
    if isinstance(v, str):
        if v not in A.vertex_names:
            raise ModuleError(f"unknown vertex {v!r}")
        v = A.vertex_names.index(v)
    if not 0 <= v < A.r:
        raise ModuleError(f"unknown vertex {v!r}")
    return GradedModule(A, 0, [tuple(int(w == v) for w in range(A.r))], {}, INF,
                        name=f"S({A.vertex_names[v]})")


def _vertex(A: GradedAlgebra, v) -> int:
    if isinstance(v, str):
        if v not in A.vertex_names:
            raise ModuleError(f"unknown vertex {v!r}")
        return A.vertex_names.index(v)
    return int(v)


def free_module(A: GradedAlgebra, generators: Iterable[tuple]) -> FreeModule:
    gens = sorted(((_vertex(A, v), int(s)) for v, s in generators), key=lambda g: (g[1], g[0]))
    return FreeModule(A, gens)


def projective_module(A: GradedAlgebra, generators: Iterable[tuple]) -> GradedModule:
    """Direct sum of the shifted projectives A e_v [s] for the (vertex, degree) pairs."""
    Q = free_module(A, generators)
    label = " + ".join(f"P({A.vertex_names[v]})[{s}]" for v, s in Q.gens) or "0"
    return Q.to_module(name=label)


def shift(M: GradedModule, n: int) -> GradedModule:
    """M[n], with M[n]_i = M_{i-n}."""
    action = {(k + n, a): m for (k, a), m in M.action.items()}
    ceiling = M.ceiling + n if M.ceiling != INF else INF
    return GradedModule(M.algebra, M.lo + n, M.dims, action, ceiling, name=f"{M.name}[{n}]")


def direct_sum(M: GradedModule, N: GradedModule) -> GradedModule:
    A, F = M.algebra, M.field
    if M.is_zero():
        return N
    if N.is_zero():
        return M
    lo = min(M.lo, N.lo)
    ceiling = min(M.ceiling, N.ceiling)
    hi = max(M.hi, N.hi)
    if ceiling != INF:
        hi = min(hi, int(ceiling))
    dims = [tuple(M.dim(n, w) + N.dim(n, w) for w in range(A.r)) for n in range(lo, hi + 1)]
    action = {}
    for n in range(lo, hi):
        for a, el in enumerate(A.basis[1]):
            m1, m2 = M.act1(a, n), N.act1(a, n)
            blk = F.zeros(m1.shape[0] + m2.shape[0], m1.shape[1] + m2.shape[1])
            blk[: m1.shape[0], : m1.shape[1]] = m1
            blk[m1.shape[0]:, m1.shape[1]:] = m2
            action[(n, a)] = blk
    return GradedModule(A, lo, dims, action, ceiling, name=f"{M.name}+{N.name}")


# ---------------------------------------------------------------------------
# submodules and quotients


def submodule(ambient, bases: dict, lo: int, hi: int, ceiling, name: str = "", check: bool = True) -> GradedModule:
    """Submodule spanned by ``bases[(n, w)] = (B, keys)`` where ``B[keys]`` is the identity."""
    A, F = ambient.algebra, ambient.field
    r = A.r

    def get(n, w):
        got = bases.get((n, w))
        if got is None:
            return F.zeros(ambient.dim(n, w) if lo <= n <= hi else 0, 0), np.zeros(0, dtype=np.int64)
        return got

    dims = [tuple(get(n, w)[0].shape[1] for w in range(r)) for n in range(lo, hi + 1)]
    action = {}
    for n in range(lo, hi):
        for a, el in enumerate(A.basis[1]):
            B, _ = get(n, el.src)
            B2, keys2 = get(n + 1, el.tgt)
            if B.shape[1] == 0 or B2.shape[1] == 0:
                if check and B.shape[1] and np.any(ambient.apply(1, a, n, B)):
                    raise ModuleError(f"subspace not closed under arrow {a} at degree {n}")
                continue
            Y = ambient.apply(1, a, n, B)
            coords = Y[keys2]
            if check and np.any(F.matmul(B2, coords) != Y):
                raise ModuleError(f"subspace not closed under arrow {a} at degree {n}")
            action[(n, a)] = coords
    return GradedModule(A, lo, dims, action, ceiling, name=name)


def _span(F: Field, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Echelon basis (columns) of the span of the given columns, with its key rows."""
    if vecs.shape[1] == 0 or not np.any(vecs):
        return F.zeros(vecs.shape[0], 0), np.zeros(0, dtype=np.int64)
    R, piv = F.rref(vecs.T.copy())
    return R[: len(piv)].T.copy(), np.array(piv, dtype=np.int64)


def _ambient_window(M):
    hi = M.hi
    return M.lo, hi


def radical_submodule(M: GradedModule, bases: Optional[dict] = None) -> dict:
    """Bases of J.S for the submodule S given by ``bases`` (all of M if None)."""
    A, F = M.algebra, M.field
    out = {}
    for n in range(M.lo + 1, M.hi + 1):
        for w in range(A.r):
            cols = []
            for a, el in enumerate(A.basis[1]):
                if el.tgt != w:
                    continue
                if bases is None:
                    src = F.eye(M.dim(n - 1, el.src))
                else:
                    src = bases.get((n - 1, el.src), (F.zeros(M.dim(n - 1, el.src), 0), None))[0]
                if src.shape[1]:
                    cols.append(M.apply(1, a, n - 1, src))
            if cols:
                B, keys = _span(F, np.concatenate(cols, axis=1))
                if B.shape[1]:
                    out[(n, w)] = (B, keys)
    return out


def inclusion_map(sub: GradedModule, M: GradedModule, bases: dict) -> GradedMap:
    return GradedMap(sub, M, {k: B for k, (B, _) in bases.items()})


def radical_power(M: GradedModule, i: int) -> tuple[GradedModule, GradedMap]:
    """J^i M with its inclusion into M."""
    if i < 0:
        raise ModuleError("radical power must be non-negative")
    F = M.field
    bases = None
    for _ in range(i):
        bases = radical_submodule(M, bases)
    if bases is None:
        bases = {(n, w): (F.eye(M.dim(n, w)), np.arange(M.dim(n, w)))
                 for n in M.degrees() for w in range(M.r) if M.dim(n, w)}
    sub = submodule(M, bases, M.lo, M.hi, M.ceiling, name=f"J^{i}{M.name}")
    return sub, inclusion_map(sub, M, bases)


def quotient(M: GradedModule, bases: dict, name: str = "") -> tuple[GradedModule, GradedMap]:
    """M / S for the submodule S spanned by ``bases``; returns the projection too."""
    A, F = M.algebra, M.field
    proj, sect = {}, {}
    dims = []
    for n in M.degrees():
        row = []
        for w in range(A.r):
            d = M.dim(n, w)
            B = bases.get((n, w), (F.zeros(d, 0), None))[0]
            Bs, keys = _span(F, B)
            pset = set(int(k) for k in keys)
            nonpiv = [k for k in range(d) if k not in pset]
            P = F.zeros(len(nonpiv), d)
            if nonpiv:
                P[np.arange(len(nonpiv)), nonpiv] = F.scalar(1)
                if len(keys):
                    # rows of Bs.T are the rref rows of the subspace
                    P[:, keys] = F.reduce(-Bs.T[:, nonpiv].T)
            S = F.zeros(d, len(nonpiv))
            if nonpiv:
                S[nonpiv, np.arange(len(nonpiv))] = F.scalar(1)
            proj[(n, w)] = P
            sect[(n, w)] = S
            row.append(len(nonpiv))
        dims.append(tuple(row))
    action = {}
    for n in range(M.lo, M.hi):
        for a, el in enumerate(A.basis[1]):
            action[(n, a)] = F.matmul(proj[(n + 1, el.tgt)], M.apply(1, a, n, sect[(n, el.src)]))
    Q = GradedModule(A, M.lo, dims, action, M.ceiling, name=name or f"{M.name}/S")
    return Q, GradedMap(M, Q, proj)


def top(M: GradedModule) -> tuple[GradedModule, GradedMap]:
    """M / JM (zero action) with the projection."""
    return quotient(M, radical_submodule(M), name=f"top({M.name})")


def top_dims(M: GradedModule) -> dict:
    T, _ = top(M)
    return {n: T.dim_vector(n) for n in T.degrees() if T.dim(n)}


def generated_in_degrees(M: GradedModule, I: Iterable[int]) -> tuple[bool, Optional[int]]:
    """Whether M = A (sum_{j in I} M_j); on failure returns the least offending degree."""
    I = set(I)
    for n, dv in sorted(top_dims(M).items()):
        if sum(dv) and n not in I:
            return False, n
    return True, None


def kernel_of(f: GradedMap) -> tuple[GradedModule, GradedMap]:
    M = f.source
    F = M.field
    bases = {}
    for n in M.degrees():
        for w in range(M.r):
            if M.dim(n, w) == 0:
                continue
            K, free = F.nullspace(f.block(n, w))
            if K.shape[1]:
                bases[(n, w)] = (K, np.array(free, dtype=np.int64))
    sub = submodule(M, bases, M.lo, M.hi, min(M.ceiling, f.target.ceiling), name=f"ker")
    return sub, inclusion_map(sub, M, bases)


def support_floor(M) -> float:
    """Least degree with a nonzero component (inf for the zero module)."""
    for n in M.degrees():
        if M.dim(n):
            return n
    return INF


# ---------------------------------------------------------------------------
# graded isomorphism


@dataclass
class IsoResult:
    iso: Optional[GradedMap]
    reason: str  # "found", "dimension", "top", "not-found"


def graded_iso(M: GradedModule, N: GradedModule, attempts: int = 8, seed: int = 0) -> IsoResult:
    """Search for a graded isomorphism M -> N (a semi-decision procedure)."""
    from .resolve import minimal_resolution  # local: resolve builds on this module

    A, F = M.algebra, M.field
    if N.algebra is not A:
        raise ModuleError("modules over different algebras")
    ceiling = min(M.ceiling, N.ceiling)
    lo, hi = min(M.lo, N.lo), max(M.hi, N.hi)
    if ceiling != INF:
        hi = min(hi, int(ceiling))
    for n in range(lo, hi + 1):
        if M.dim_vector(n) != N.dim_vector(n):
            return IsoResult(None, "dimension")
    if top_dims(M) != top_dims(N):
        return IsoResult(None, "top")
    if M.is_zero() or all(M.dim(n) == 0 for n in range(lo, hi + 1)):
        return IsoResult(GradedMap(M, N, {}), "found")
    res = minimal_resolution(M, 1)
    Q0 = res.free[0]
    # unknowns: image of each generator in N's block
    var_off = []
    total = 0
    for v, s in Q0.gens:
        var_off.append(total)
        total += N.dim(s, v)
    eqs = []
    if len(res.free) > 1:
        Q1 = res.free[1]
        for run in Q1.runs:
            rel = res.images[1][(run.s, run.v)]
            n, w = run.s, run.v
            segs, _ = Q0.layout(n, w)
            for col in range(rel.shape[1]):
                rho = rel[:, col]
                E = F.zeros(N.dim(n, w), total)
                for r0, idx, off in segs:
                    for gi in range(r0.count):
                        g = r0.start + gi
                        seg = rho[off + gi * len(idx): off + (gi + 1) * len(idx)]
                        for bpos in np.flatnonzero(seg):
                            b = int(idx[bpos])
                            m = n - r0.s
                            blk = N.act(m, b, r0.s)
                            sl = slice(var_off[g], var_off[g] + N.dim(r0.s, r0.v))
                            E[:, sl] = F.reduce(E[:, sl] + seg[bpos] * blk)
                eqs.append(E)
    system = np.concatenate(eqs, axis=0) if eqs else F.zeros(0, total)
    H, _ = F.nullspace(system) if system.shape[0] else (F.eye(total), None)
    if H.shape[1] == 0:
        return IsoResult(None, "not-found")
    # top of N, to test the induced map on generators
    _, projN = top(N)
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        coeff = F.random(rng, H.shape[1], 1)
        u = F.matmul(H, coeff)[:, 0]
        ok = True
        for run in Q0.runs:
            P = projN.block(run.s, run.v)
            cols = [u[var_off[g]: var_off[g] + N.dim(run.s, run.v)] for g in range(run.start, run.start + run.count)]
            T = F.matmul(P, np.stack(cols, axis=1))
            if T.shape[0] != T.shape[1] or F.rank(T) != T.shape[0]:
                ok = False
                break
        if not ok:
            continue
        images = {}
        for run in Q0.runs:
            images[(run.s, run.v)] = np.stack(
                [u[var_off[g]: var_off[g] + N.dim(run.s, run.v)] for g in range(run.start, run.start + run.count)], axis=1)
        blocks = {}
        for n in range(M.lo, hi + 1):
            for w in range(A.r):
                if M.dim(n, w) == 0:
                    continue
                cover = hom_from_free(Q0, M, res.images[0], n, w)
                sec = Solver(F, cover).solve(F.eye(M.dim(n, w)))
                blocks[(n, w)] = F.matmul(hom_from_free(Q0, N, images, n, w), sec)
        f = GradedMap(M, N, blocks)
        if f.is_isomorphism():
            return IsoResult(f, "found")
    return IsoResult(None, "not-found")
