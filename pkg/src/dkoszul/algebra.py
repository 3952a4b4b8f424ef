"""Truncated standardly graded algebras.

Algebras are stored degree by degree up to a bound ``D``: a basis per degree
(each element lives in one ``e_tgt A e_src`` block) and dense multiplication
tensors ``mult[i, j][a, b, :] = a * b``.  The product ``a * b`` means "``a``
after ``b``"; for paths written in application order it is the concatenation
``path(b) + path(a)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import AlgebraError, BudgetError
from .scalar import Field, Solver


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # (name, source, target)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple((str(a), str(s), str(t)) for a, s, t in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex name")
        names = [a for a, _, _ in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate arrow name")
        vs = set(self.vertices)
        for a, s, t in self.arrows:
            if s not in vs or t not in vs:
                raise AlgebraError(f"arrow {a} has an undeclared endpoint")

    def vertex_index(self, name) -> int:
        try:
            return self.vertices.index(str(name))
        except ValueError:
            raise AlgebraError(f"unknown vertex {name!r}") from None

    def arrow_index(self, name) -> int:
        for i, (a, _, _) in enumerate(self.arrows):
            if a == name:
                return i
        raise AlgebraError(f"unknown arrow {name!r}")

    def arrow_ends(self, i: int) -> tuple[int, int]:
        _, s, t = self.arrows[i]
        return self.vertex_index(s), self.vertex_index(t)


@dataclass(frozen=True)
class PathAlgebraPresentation:
    """Quiver with homogeneous relations; each relation is ``((coef, (arrow, ...)), ...)``
    with arrows listed in application order (first applied first)."""

    quiver: Quiver
    relations: tuple = ()
    field: Field = dc_field(default_factory=Field)

    def __post_init__(self):
        rels = tuple(tuple((c, tuple(p)) for c, p in rel) for rel in self.relations)
        object.__setattr__(self, "relations", rels)
        for rel in rels:
            self._check_relation(rel)

    def _check_relation(self, rel):
        if not rel:
            raise AlgebraError("empty relation")
        lengths = {len(p) for _, p in rel}
        if len(lengths) != 1:
            raise AlgebraError("inhomogeneous relation: paths of lengths " + str(sorted(lengths)))
        if lengths.pop() < 2:
            raise AlgebraError("relations must have length >= 2")
        ends = set()
        for _, p in rel:
            idx = [self.quiver.arrow_index(a) for a in p]
            for x, y in zip(idx, idx[1:]):
                if self.quiver.arrow_ends(x)[1] != self.quiver.arrow_ends(y)[0]:
                    raise AlgebraError(f"non-composable path {' '.join(p)}")
            ends.add((self.quiver.arrow_ends(idx[0])[0], self.quiver.arrow_ends(idx[-1])[1]))
        if len(ends) != 1:
            raise AlgebraError("non-parallel paths in one relation")


@dataclass(frozen=True)
class BasisElement:
    src: int
    tgt: int
    label: object


class GradedAlgebra:
    """Truncated graded algebra given by per-degree bases and product tensors."""

    def __init__(self, field: Field, vertex_names: Sequence[str], basis: Sequence[Sequence[BasisElement]],
                 mult: dict, name: str = ""):
        self.field = field
        self.vertex_names = tuple(str(v) for v in vertex_names)
        self.r = len(self.vertex_names)
        self.basis = [list(b) for b in basis]
        self.D = len(self.basis) - 1
        self.dims = [len(b) for b in self.basis]
        self._mult = dict(mult)
        self.name = name
        # set when the algebra is known to violate A_i A_j = A_{i+j}; resolutions refuse it
        self.not_standard = ""
        zero = [n for n in range(1, self.D + 1) if self.dims[n] == 0]
        # generated in degree 1, so one vanishing degree kills everything above it
        self.complete = bool(zero)
        self.top_degree = (zero[0] - 1) if zero else self.D
        self._blocks: dict = {}
        self._left: dict = {}
        self._factor: dict = {}

    def __repr__(self):
        return f"GradedAlgebra({self.name or 'unnamed'}, r={self.r}, D={self.D}, dims={self.dims})"

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        if n <= self.D:
            return self.dims[n]
        if self.complete:
            return 0
        raise BudgetError(f"algebra degree {n} exceeds truncation D={self.D}", degree=n)

    def known(self, n: int) -> bool:
        return self.complete or n <= self.D

    def element(self, n: int, i: int) -> BasisElement:
        return self.basis[n][i]

    def block(self, n: int, v: int, w: int) -> np.ndarray:
        """Indices of degree-n basis elements in ``e_w A_n e_v``."""
        key = (n, v, w)
        got = self._blocks.get(key)
        if got is None:
            if self.dim(n) == 0:
                got = np.zeros(0, dtype=np.int64)
            else:
                got = np.array([i for i, b in enumerate(self.basis[n]) if b.src == v and b.tgt == w],
                               dtype=np.int64)
            self._blocks[key] = got
        return got

    def mult(self, i: int, j: int) -> np.ndarray:
        """Tensor of shape (dim A_i, dim A_j, dim A_{i+j})."""
        got = self._mult.get((i, j))
        if got is not None:
            return got
        di, dj, dk = self.dim(i), self.dim(j), self.dim(i + j)
        if di == 0 or dj == 0 or dk == 0:
            t = self.field.zeros(di * dj, dk).reshape(di, dj, dk)
            self._mult[(i, j)] = t
            return t
        raise BudgetError(f"no product table for degrees ({i},{j})", degree=i + j)

    def product(self, i: int, a: np.ndarray, j: int, b: np.ndarray) -> np.ndarray:
        """Product of coordinate vectors a in A_i and b in A_j."""
        F = self.field
        T = self.mult(i, j)
        if T.size == 0:
            return F.zeros(1, self.dim(i + j))[0]
        ab = F.matmul(F.matmul(a.reshape(1, -1), T.reshape(T.shape[0], -1)).reshape(T.shape[1], T.shape[2]).T,
                      b.reshape(-1, 1))
        return ab.reshape(-1)

    def left_mult(self, k: int, c: int, m: int, v: int) -> np.ndarray:
        """Matrix of ``x -> c * x`` from e_{src c} A_m e_v to e_{tgt c} A_{m+k} e_v."""
        key = (k, c, m, v)
        got = self._left.get(key)
        if got is None:
            el = self.basis[k][c]
            cols = self.block(m, v, el.src)
            rows = self.block(m + k, v, el.tgt)
            if len(cols) == 0 or len(rows) == 0:
                got = self.field.zeros(len(rows), len(cols))
            elif k == 0:
                got = self.field.eye(len(cols))
            else:
                T = self.mult(k, m)
                got = T[c][np.ix_(cols, rows)].T.copy()
            self._left[key] = got
        return got

    def factorization(self, n: int) -> np.ndarray:
        """Tensor Fct of shape (dim A_n, dim A_1, dim A_{n-1}) with b = sum Fct[b,a,x] a*x."""
        got = self._factor.get(n)
        if got is not None:
            return got
        F = self.field
        dn, d1, dp = self.dim(n), self.dim(1), self.dim(n - 1)
        if dn == 0:
            got = F.zeros(0, d1 * dp).reshape(0, d1, dp)
        else:
            T = self.mult(1, n - 1).reshape(d1 * dp, dn).T
            x = Solver(F, T).solve(F.eye(dn))
            if x is None:
                raise AlgebraError(f"condition (iii) fails at (1,{n - 1}): A_1 A_{n - 1} != A_{n}")
            got = x.T.reshape(dn, d1, dp)
        self._factor[n] = got
        return got

    def fingerprint(self) -> str:
        import hashlib
        h = hashlib.sha256()
        h.update(str(self.field).encode())
        h.update(repr(self.vertex_names).encode())
        h.update(repr([[(b.src, b.tgt) for b in bs] for bs in self.basis]).encode())
        h.update(repr(self.complete).encode())
        for key in sorted(self._mult):
            T = self._mult[key]
            h.update(repr((key, T.shape)).encode())
            h.update(T.tobytes() if T.dtype != object else repr(T.tolist()).encode())
        return h.hexdigest()


# ---------------------------------------------------------------------------
# construction from a quiver presentation


def _paths_by_length(q: Quiver, n: int, prev: list) -> list:
    ends = [q.arrow_ends(i) for i in range(len(q.arrows))]
    out = []
    for p in prev:
        last = ends[p[-1]][1]
        for a, (s, _) in enumerate(ends):
            if s == last:
                out.append(p + (a,))
    return sorted(out)


def build_path_algebra(p: PathAlgebraPresentation, D: int, name: str = "") -> GradedAlgebra:
    """kQ/I truncated at degree D, with I generated by the (homogeneous) relations."""
    if D < 0:
        raise AlgebraError("degree bound D must be non-negative")
    q, F = p.quiver, p.field
    r = len(q.vertices)
    ends = [q.arrow_ends(i) for i in range(len(q.arrows))]

    def psrc(path):
        return ends[path[0]][0]

    def ptgt(path):
        return ends[path[-1]][1]

    rel_vectors: dict[int, list] = {}
    for rel in p.relations:
        L = len(rel[0][1])
        rel_vectors.setdefault(L, []).append([(F.scalar(c), tuple(q.arrow_index(a) for a in path)) for c, path in rel])

    basis = [[BasisElement(v, v, ("e", q.vertices[v])) for v in range(r)]]
    normal: list = [[(v,) for v in range(r)]]   # degree 0 placeholder
    reduce_maps: list = [None]
    path_index: list = [None]
    paths = [(a,) for a in range(len(q.arrows))]
    ideal_rows = None  # rref basis of I_{n-1}, over paths of length n-1
    prev_paths: list = []
    stopped = False
    for n in range(1, D + 1):
        if n > 1:
            paths = _paths_by_length(q, n, prev_paths) if not stopped else []
        if stopped or not paths:
            stopped = True
            basis.append([])
            normal.append([])
            reduce_maps.append(F.zeros(0, 0))
            path_index.append({})
            continue
        idx = {pp: i for i, pp in enumerate(paths)}
        vecs = []
        if ideal_rows is not None and ideal_rows.shape[0]:
            # extend I_{n-1} by one arrow on either side
            for row in ideal_rows:
                nz = np.flatnonzero(row)
                for a in range(len(q.arrows)):
                    after = F.zeros(1, len(paths))[0]
                    before = F.zeros(1, len(paths))[0]
                    hit_a = hit_b = False
                    for k in nz:
                        pp = prev_paths[k]
                        if ends[a][0] == ptgt(pp):
                            after[idx[pp + (a,)]] += row[k]
                            hit_a = True
                        if ends[a][1] == psrc(pp):
                            before[idx[(a,) + pp]] += row[k]
                            hit_b = True
                    if hit_a:
                        vecs.append(F.reduce(after))
                    if hit_b:
                        vecs.append(F.reduce(before))
        for rel in rel_vectors.get(n, []):
            v = F.zeros(1, len(paths))[0]
            for c, pp in rel:
                v[idx[pp]] += c
            vecs.append(F.reduce(v))
        if vecs:
            R, piv = F.rref(np.array(vecs, dtype=F.dtype).reshape(len(vecs), len(paths)))
            R = R[: len(piv)]
        else:
            R, piv = F.zeros(0, len(paths)), []
        pset = set(piv)
        nonpiv = [k for k in range(len(paths)) if k not in pset]
        red = F.zeros(len(paths), len(nonpiv))
        if nonpiv:
            red[nonpiv, np.arange(len(nonpiv))] = F.scalar(1)
            if piv:
                red[piv, :] = F.reduce(-R[:, nonpiv])
        basis.append([BasisElement(psrc(paths[k]), ptgt(paths[k]), tuple(q.arrows[a][0] for a in paths[k]))
                      for k in nonpiv])
        normal.append([paths[k] for k in nonpiv])
        reduce_maps.append(red)
        path_index.append(idx)
        ideal_rows = R
        prev_paths = paths
        if not nonpiv:
            stopped = True

    dims = [len(b) for b in basis]
    mult = {}
    for i in range(D + 1):
        for j in range(D + 1 - i):
            di, dj, dk = dims[i], dims[j], dims[i + j]
            T = F.zeros(di * dj, dk).reshape(di, dj, dk) if F.is_prime else _obj_zeros3(F, di, dj, dk)
            if di and dj and dk:
                for a, ea in enumerate(basis[i]):
                    for b, eb in enumerate(basis[j]):
                        if ea.src != eb.tgt:
                            continue
                        if i == 0:
                            T[a, b, b] = F.scalar(1)
                        elif j == 0:
                            T[a, b, a] = F.scalar(1)
                        else:
                            cat = normal[j][b] + normal[i][a]
                            T[a, b, :] = reduce_maps[i + j][path_index[i + j][cat]]
            mult[(i, j)] = T
    return GradedAlgebra(F, q.vertices, basis, mult, name=name)


def _obj_zeros3(F: Field, a, b, c):
    return F.zeros(a * b, c).reshape(a, b, c)


def build_truncated_algebra(q: Quiver, d: int, D: int, field: Optional[Field] = None, name: str = "") -> GradedAlgebra:
    """kQ / J^d: every path of length d is a relation."""
    if d < 2:
        raise AlgebraError("truncation exponent d must be >= 2")
    field = field or Field()
    ends = [q.arrow_ends(i) for i in range(len(q.arrows))]
    rels = []
    paths = [(a,) for a in range(len(q.arrows))]
    for _ in range(d - 1):
        paths = [p + (a,) for p in paths for a in range(len(q.arrows)) if ends[a][0] == ends[p[-1]][1]]
    for p in paths:
        rels.append(((1, tuple(q.arrows[a][0] for a in p)),))
    return build_path_algebra(PathAlgebraPresentation(q, tuple(rels), field), D, name=name)


# ---------------------------------------------------------------------------
# construction from structure constants and validation


@dataclass
class StandardGradingReport:
    conditions: dict  # "i" / "ii" / "iii" -> bool
    witness: Optional[tuple] = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())


def _idempotent_failure(A: GradedAlgebra) -> Optional[str]:
    F = A.field
    one = F.scalar(1)
    if A.dims[0] != A.r:
        return f"A_0 has dimension {A.dims[0]}, expected r={A.r}"
    for v, e in enumerate(A.basis[0]):
        if e.src != v or e.tgt != v:
            return f"degree-0 basis element {v} is not the idempotent of vertex {v}"
    for n in range(A.D + 1):
        T = A.mult(0, n)
        U = A.mult(n, 0)
        for b, el in enumerate(A.basis[n]):
            for v in range(A.r):
                left = T[v, b]
                right = U[b, v]
                want_l = F.zeros(1, A.dims[n])[0]
                want_r = F.zeros(1, A.dims[n])[0]
                if el.tgt == v:
                    want_l[b] = one
                if el.src == v:
                    want_r[b] = one
                if np.any(left != want_l) or np.any(right != want_r):
                    return f"idempotent e_{v} does not act as a unit on basis element {b} of degree {n}"
    return None


def check_standardly_graded(A: GradedAlgebra) -> StandardGradingReport:
    """Conditions (i) A_0 = k^r, (ii) finite dimensions, (iii) A_i A_j = A_{i+j} for i+j <= D."""
    F = A.field
    cond = {"i": True, "ii": True, "iii": True}
    msg = _idempotent_failure(A)
    witness = None
    if msg:
        cond["i"] = False
    if any(d < 0 for d in A.dims):
        cond["ii"] = False
    for total in range(2, A.D + 1):
        if not cond["iii"]:
            break
        for i in range(1, total):
            j = total - i
            dk = A.dims[total]
            if dk == 0:
                continue
            T = A.mult(i, j).reshape(-1, dk)
            if F.rank(T) < dk:
                cond["iii"] = False
                witness = (i, j)
                msg = msg or f"condition (iii) fails at ({i},{j})"
                break
    return StandardGradingReport(cond, witness, msg or "")


def check_associative(A: GradedAlgebra) -> Optional[tuple]:
    """First degree triple (i,j,k) where (ab)c != a(bc), or None."""
    F = A.field
    D = A.D
    for total in range(0, D + 1):
        for i in range(total + 1):
            for j in range(total - i + 1):
                k = total - i - j
                di, dj, dk, dt = A.dims[i], A.dims[j], A.dims[k], A.dims[total]
                if 0 in (di, dj, dk, dt):
                    continue
                ij = A.mult(i, j)
                left = F.matmul(ij.reshape(di * dj, -1), A.mult(i + j, k).reshape(A.dims[i + j], dk * dt))
                jk = A.mult(j, k)
                outer = A.mult(i, j + k).transpose(1, 0, 2).reshape(A.dims[j + k], di * dt)
                right = F.matmul(jk.reshape(dj * dk, -1), outer).reshape(dj, dk, di, dt).transpose(2, 0, 1, 3)
                if np.any(left.reshape(di, dj, dk, dt) != right):
                    return (i, j, k)
    return None


def build_from_structure_constants(field: Field, r: int, dims: Sequence[int], mult: dict, D: int,
                                   blocks: Optional[Sequence[Sequence[tuple]]] = None,
                                   labels: Optional[Sequence[Sequence]] = None,
                                   vertex_names: Optional[Sequence[str]] = None,
                                   name: str = "", require_generated: bool = True) -> GradedAlgebra:
    """Validated algebra from product tensors ``mult[(i, j)]`` of shape (dims[i], dims[j], dims[i+j]).

    ``blocks[n][a] = (src, tgt)``; if omitted, blocks are read off the degree-0 products.
    With ``require_generated=False`` a failure of A_i A_j = A_{i+j} is left for the
    caller to inspect through :func:`check_standardly_graded`.
    """
    if len(dims) != D + 1:
        raise AlgebraError(f"need {D + 1} degree dimensions, got {len(dims)}")
    if dims[0] != r:
        raise AlgebraError(f"A_0 must have dimension r={r}, got {dims[0]}")
    tables = {}
    for i in range(D + 1):
        for j in range(D + 1 - i):
            T = mult.get((i, j))
            shape = (dims[i], dims[j], dims[i + j])
            if T is None:
                raise AlgebraError(f"missing product table ({i},{j})")
            T = field.asarray(np.asarray(T)).reshape(shape) if T.size else field.zeros(shape[0] * shape[1], shape[2]).reshape(shape)
            tables[(i, j)] = T
    if blocks is None:
        blocks = []
        for n in range(D + 1):
            row = []
            for a in range(dims[n]):
                tgt = [v for v in range(r) if np.any(tables[(0, n)][v, a])]
                src = [v for v in range(r) if np.any(tables[(n, 0)][a, v])]
                if len(tgt) != 1 or len(src) != 1:
                    raise AlgebraError(f"basis element {a} of degree {n} is not in a single vertex block")
                row.append((src[0], tgt[0]))
            blocks.append(row)
    basis = []
    for n in range(D + 1):
        lab = labels[n] if labels is not None else [f"b{n}.{a}" for a in range(dims[n])]
        basis.append([BasisElement(int(s), int(t), lab[a]) for a, (s, t) in enumerate(blocks[n])])
    names = vertex_names or [str(v + 1) for v in range(r)]
    A = GradedAlgebra(field, names, basis, tables, name=name)
    msg = _idempotent_failure(A)
    if msg:
        raise AlgebraError(msg)
    bad = check_associative(A)
    if bad:
        raise AlgebraError(f"multiplication is not associative at degrees {bad}")
    rep = check_standardly_graded(A)
    if require_generated and not rep.ok:
        raise AlgebraError(rep.message)
    return A
