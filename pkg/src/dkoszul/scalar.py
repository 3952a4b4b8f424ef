"""Exact scalar arithmetic and deterministic linear algebra.

Matrices are plain 2-D numpy arrays paired with a :class:`Field`: residues in
``int64`` for a prime field, ``Fraction`` objects for the rationals.  All
routines are pure and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

DEFAULT_PRIME = 32003


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """A prime field F_p or the rationals."""

    kind: str = "prime"
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.kind == "prime":
            if not _is_prime(self.p) or self.p >= 2**31:
                raise ValueError(f"p must be a prime below 2**31, got {self.p}")
        elif self.kind == "rational":
            object.__setattr__(self, "p", 0)
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text in ("rational", "Q", "QQ"):
            return cls("rational")
        if text.startswith("prime:"):
            return cls("prime", int(text.split(":", 1)[1]))
        raise ValueError(f"bad field descriptor {text!r}")

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    @property
    def dtype(self):
        return np.int64 if self.is_prime else object

    def __str__(self) -> str:
        return f"prime:{self.p}" if self.is_prime else "rational"

    # scalars -------------------------------------------------------------

    def scalar(self, x):
        if self.is_prime:
            if isinstance(x, Fraction):
                return (x.numerator % self.p) * pow(x.denominator % self.p, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime:
            return pow(int(x), -1, self.p)
        return Fraction(1) / x

    def neg(self, x):
        return (-x) % self.p if self.is_prime else -x

    # arrays --------------------------------------------------------------

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.is_prime:
            return np.zeros((rows, cols), dtype=np.int64)
        out = np.empty((rows, cols), dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.scalar(1)
        return out

    def array(self, rows: Sequence[Sequence], shape: Optional[tuple] = None) -> np.ndarray:
        """Build a matrix from nested Python numbers (ints or Fractions)."""
        if shape is not None and shape[0] * shape[1] == 0:
            return self.zeros(*shape)
        data = [[self.scalar(x) for x in row] for row in rows]
        if not data:
            return self.zeros(0, 0)
        out = self.zeros(len(data), len(data[0]))
        for i, row in enumerate(data):
            out[i, :] = row
        return out

    def asarray(self, a) -> np.ndarray:
        """Coerce an integer/Fraction array into this field's representation."""
        a = np.asarray(a)
        if self.is_prime:
            if a.dtype == object:
                return np.vectorize(self.scalar, otypes=[np.int64])(a) if a.size else a.astype(np.int64)
            return np.mod(a.astype(np.int64), self.p)
        out = np.empty(a.shape, dtype=object)
        flat = out.reshape(-1)
        for i, x in enumerate(a.reshape(-1)):
            flat[i] = Fraction(x)
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return np.mod(a, self.p) if self.is_prime else a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        if a.size == 0 or b.size == 0:
            return self.zeros(a.shape[0], b.shape[1])
        if not self.is_prime:
            return a.dot(b)
        # float64 BLAS is exact while every partial sum stays below 2**53
        inner = a.shape[1]
        fstep = (2**53) // ((self.p - 1) ** 2 + 1)
        if inner <= fstep:
            prod = a.astype(np.float64) @ b.astype(np.float64)
            return np.mod(prod, self.p).astype(np.int64)
        # otherwise keep integer partial sums inside int64
        step = max(1, (2**63 - 1) // ((self.p - 1) ** 2 + 1))
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, inner, step):
            out = np.mod(out + np.mod(a[:, s:s + step] @ b[s:s + step], self.p), self.p)
        return out

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def scale(self, a, c):
        return self.reduce(a * c)

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a)

    def random(self, rng: np.random.Generator, rows: int, cols: int, low: int = -3, high: int = 4) -> np.ndarray:
        if self.is_prime:
            return rng.integers(0, self.p, size=(rows, cols)).astype(np.int64)
        return self.asarray(rng.integers(low, high, size=(rows, cols)))

    # linear algebra ------------------------------------------------------

    def rref(self, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form and pivot columns."""
        R = m.copy()
        rows, cols = R.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(R[r:, c])
            if nz.size == 0:
                continue
            pr = r + int(nz[0])
            if pr != r:
                R[[r, pr]] = R[[pr, r]]
            piv = R[r, c]
            if piv != 1:
                R[r, c:] = self.reduce(R[r, c:] * self.inv(piv))
            col = R[:, c].copy()
            col[r] = 0
            others = np.flatnonzero(col)
            if others.size:
                upd = R[others, c:] - np.multiply.outer(col[others], R[r, c:])
                R[others, c:] = self.reduce(upd)
            pivots.append(c)
            r += 1
        return R, pivots

    def rank(self, m: np.ndarray) -> int:
        if m.size == 0:
            return 0
        return len(self.rref(m)[1])

    def nullspace(self, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
        """Canonical kernel basis (as columns) and the free columns it is indexed by."""
        cols = m.shape[1]
        if m.shape[0] == 0 or not np.any(m):
            return self.eye(cols), list(range(cols))
        R, piv = self.rref(m)
        pset = set(piv)
        free = [c for c in range(cols) if c not in pset]
        K = self.zeros(cols, len(free))
        if free:
            rk = len(piv)
            K[piv, :] = self.reduce(-R[:rk][:, free])
            K[free, np.arange(len(free))] = self.scalar(1)
        return K, free

    def kernel_basis(self, m: np.ndarray) -> np.ndarray:
        return self.nullspace(m)[0]

    def solve(self, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
        """Canonical solution of ``a @ x = b`` (free variables zero), or None."""
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"row mismatch: a has {a.shape[0]} rows, b has {b.shape[0]}")
        return Solver(self, a).solve(b)

    def image_basis(self, vecs: np.ndarray) -> np.ndarray:
        """Column-space basis: rows of rref(vecs.T), returned as columns."""
        if vecs.shape[1] == 0:
            return self.zeros(vecs.shape[0], 0)
        R, piv = self.rref(vecs.T.copy())
        return R[: len(piv)].T.copy()


class Solver:
    """Reusable solver for a fixed coefficient matrix (same answers as ``Field.solve``)."""

    def __init__(self, field: Field, a: np.ndarray):
        self.field = field
        self.shape = a.shape
        rows, cols = a.shape
        aug = np.concatenate([a, field.eye(rows)], axis=1) if rows else field.zeros(0, cols)
        R, piv = field.rref(aug)
        self.pivots = [p for p in piv if p < cols]
        self.rank = len(self.pivots)
        self.transform = R[:, cols:] if rows else field.zeros(0, 0)

    def solve(self, b: np.ndarray) -> Optional[np.ndarray]:
        F = self.field
        rows, cols = self.shape
        if b.shape[0] != rows:
            raise ValueError(f"row mismatch: a has {rows} rows, b has {b.shape[0]}")
        x = F.zeros(cols, b.shape[1])
        if rows == 0 or b.shape[1] == 0:
            return x
        y = F.matmul(self.transform, b)
        if np.any(y[self.rank:]):
            return None
        x[self.pivots] = y[: self.rank]
        return x


def rref(field: Field, m: np.ndarray):
    R, piv = field.rref(m)
    return R, piv, len(piv)


def kernel_basis(field: Field, m: np.ndarray) -> np.ndarray:
    return field.kernel_basis(m)


def solve(field: Field, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    return field.solve(a, b)
