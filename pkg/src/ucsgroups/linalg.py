"""Dense linear algebra over finite fields and over the integers.

Matrices over a field are numpy int64 arrays of element codes paired with a
``FieldCtx``; the ``Mat`` and ``Subspace`` classes wrap them for the public
API.  Vectors are rows and act on the right (``v -> v @ g``).  Integer
matrices are lists of lists of Python ints so nothing overflows.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import AmbientMismatch, CtxMismatch, NotSquare, Singular
from .finfield import FieldCtx

# ---------------------------------------------------------------------------
# array-level routines


def asarray(ctx: FieldCtx, a) -> np.ndarray:
    """Coerce nested lists or arrays to reduced int64 codes."""
    if isinstance(a, Mat):
        return a.a
    arr = np.array(a, dtype=np.int64)
    if ctx.k == 1:
        return np.mod(arr, ctx.p)
    return arr


def rref_full(ctx: FieldCtx, A) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns."""
    R = np.array(asarray(ctx, A), dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        if R[r, c] != 1:
            R[r] = ctx.mul(R[r], ctx.inv(R[r, c]))
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            R[rows] = ctx.sub(R[rows], ctx.mul(col[rows, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, r, pivots


def rref(ctx: FieldCtx, A) -> tuple[np.ndarray, int]:
    R, r, _ = rref_full(ctx, A)
    return R, r


def rank(ctx: FieldCtx, A) -> int:
    A = asarray(ctx, A)
    if A.size == 0:
        return 0
    return rref_full(ctx, A)[1]


def nullspace(ctx: FieldCtx, A) -> np.ndarray:
    """Basis (as rows) of {v : v @ A.T = 0}."""
    A = asarray(ctx, A)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, r, piv = rref_full(ctx, A)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, pc in enumerate(piv):
            out[t, pc] = ctx.neg(R[i, f])
    return out


def left_nullspace(ctx: FieldCtx, A) -> np.ndarray:
    """Basis of {v : v @ A = 0}."""
    return nullspace(ctx, asarray(ctx, A).T)


def inverse(ctx: FieldCtx, A) -> np.ndarray:
    A = asarray(ctx, A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise NotSquare("inverse of a non-square matrix")
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, r, piv = rref_full(ctx, aug)
    if piv[:n] != list(range(n)) or r < n:
        raise Singular("matrix is singular")
    return R[:, n:]


def det(ctx: FieldCtx, A) -> int:
    R = np.array(asarray(ctx, A), dtype=np.int64, copy=True)
    n = R.shape[0]
    if R.shape != (n, n):
        raise NotSquare("determinant of a non-square matrix")
    d = 1
    for c in range(n):
        nz = np.flatnonzero(R[c:, c])
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            R[[c, i]] = R[[i, c]]
            d = int(ctx.neg(d))
        d = int(ctx.mul(d, R[c, c]))
        inv = ctx.inv(R[c, c])
        below = R[c + 1 :, c]
        rows = np.flatnonzero(below) + c + 1
        if rows.size:
            f = ctx.mul(R[rows, c], inv)
            R[rows] = ctx.sub(R[rows], ctx.mul(f[:, None], R[c][None, :]))
    return d


def solve_left(ctx: FieldCtx, A, b) -> np.ndarray | None:
    """Some x with x @ A = b, or None."""
    A = asarray(ctx, A)
    b = asarray(ctx, b).reshape(1, -1)
    m = A.shape[0]
    aug = np.concatenate([A.T, b.T], axis=1)
    R, r, piv = rref_full(ctx, aug)
    if m in piv:
        return None
    x = np.zeros(m, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, m]
    return x


def batch_rank(ctx: FieldCtx, A) -> np.ndarray:
    """Ranks of a stack of matrices of shape (B, m, n)."""
    A = np.array(asarray(ctx, A), dtype=np.int64, copy=True)
    B, m, n = A.shape
    rk = np.zeros(B, dtype=np.int64)
    rows = np.arange(m)
    for c in range(n):
        mask = (A[:, :, c] != 0) & (rows[None, :] >= rk[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        piv = mask[b].argmax(axis=1)
        r = rk[b]
        top = A[b, r].copy()
        A[b, r] = A[b, piv]
        A[b, piv] = top
        prow = ctx.mul(A[b, r], ctx.inv(A[b, r, c])[:, None])
        A[b, r] = prow
        f = A[b, :, c].copy()
        f[np.arange(b.size), r] = 0
        A[b] = ctx.sub(A[b], ctx.mul(f[:, :, None], prow[:, None, :]))
        rk[b] += 1
    return rk


def batch_inverse(ctx: FieldCtx, A) -> np.ndarray:
    """Inverses of a stack (B, n, n) of invertible matrices (Gauss-Jordan per column)."""
    A = np.array(asarray(ctx, A), dtype=np.int64, copy=True)
    B, n, _ = A.shape
    aug = np.concatenate([A, np.broadcast_to(np.eye(n, dtype=np.int64), (B, n, n))], axis=2)
    idx = np.arange(B)
    for c in range(n):
        cand = aug[:, c:, c] != 0
        if not cand.any(axis=1).all():
            raise Singular("singular matrix in batch")
        piv = c + cand.argmax(axis=1)
        top = aug[idx, c].copy()
        aug[idx, c] = aug[idx, piv]
        aug[idx, piv] = top
        prow = ctx.mul(aug[:, c], ctx.inv(aug[:, c, c])[:, None])
        aug[:, c] = prow
        f = aug[:, :, c].copy()
        f[:, c] = 0
        aug = ctx.sub(aug, ctx.mul(f[:, :, None], prow[:, None, :]))
    return aug[:, :, n:]


def matpow(ctx: FieldCtx, A, e: int) -> np.ndarray:
    A = asarray(ctx, A)
    if e < 0:
        A = inverse(ctx, A)
        e = -e
    result = np.eye(A.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            result = ctx.matmul(result, A)
        A = ctx.matmul(A, A)
        e >>= 1
    return result


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


# ---------------------------------------------------------------------------
# wrappers


class Mat:
    """A matrix over a finite field."""

    __slots__ = ("ctx", "a")

    def __init__(self, ctx: FieldCtx, entries):
        self.ctx = ctx
        self.a = asarray(ctx, entries)
        if self.a.ndim != 2:
            self.a = self.a.reshape(len(self.a), -1)

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Mat":
        return cls(ctx, identity(n))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def _check(self, other: "Mat") -> None:
        if other.ctx != self.ctx:
            raise CtxMismatch("matrices over different fields")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ctx, self.ctx.matmul(self.a, other.a))

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ctx, self.ctx.add(self.a, other.a))

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.ctx, self.ctx.sub(self.a, other.a))

    def __neg__(self) -> "Mat":
        return Mat(self.ctx, self.ctx.neg(self.a))

    def scale(self, c: int) -> "Mat":
        return Mat(self.ctx, self.ctx.mul(self.a, int(c)))

    def __pow__(self, e: int) -> "Mat":
        return Mat(self.ctx, matpow(self.ctx, self.a, e))

    @property
    def T(self) -> "Mat":
        return Mat(self.ctx, self.a.T.copy())

    def inv(self) -> "Mat":
        return Mat(self.ctx, inverse(self.ctx, self.a))

    def det(self) -> int:
        return det(self.ctx, self.a)

    def rank(self) -> int:
        return rank(self.ctx, self.a)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Mat) and self.ctx == other.ctx and np.array_equal(self.a, other.a)

    def __hash__(self) -> int:
        return hash((self.ctx, self.a.shape, self.a.tobytes()))

    def __repr__(self) -> str:
        return f"Mat({self.a.tolist()})"

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def to_json(self) -> list:
        return [[self.ctx.elem_to_json(x) for x in row] for row in self.a.tolist()]

    @classmethod
    def from_json(cls, ctx: FieldCtx, data: list) -> "Mat":
        return cls(ctx, [[ctx.elem_from_json(x) for x in row] for row in data])


class Subspace:
    """A subspace of F^n stored by its reduced row echelon basis."""

    __slots__ = ("ctx", "n", "basis", "pivots")

    def __init__(self, ctx: FieldCtx, n: int, vectors=None):
        self.ctx = ctx
        self.n = int(n)
        if vectors is None or len(vectors) == 0:
            self.basis = np.zeros((0, self.n), dtype=np.int64)
            self.pivots: list[int] = []
            return
        V = asarray(ctx, vectors).reshape(-1, self.n)
        R, r, piv = rref_full(ctx, V)
        self.basis = R[:r]
        self.pivots = piv

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "Subspace":
        return cls(ctx, n)

    @classmethod
    def full(cls, ctx: FieldCtx, n: int) -> "Subspace":
        return cls(ctx, n, identity(n))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def codim(self) -> int:
        return self.n - self.dim

    def _check(self, other: "Subspace") -> None:
        if other.ctx != self.ctx:
            raise CtxMismatch("subspaces over different fields")
        if other.n != self.n:
            raise AmbientMismatch(f"ambient dimensions {self.n} and {other.n}")

    def reduce(self, v) -> np.ndarray:
        """Canonical representative of v (or each row of v) modulo self."""
        v = np.array(asarray(self.ctx, v), dtype=np.int64, copy=True)
        single = v.ndim == 1
        v = v.reshape(-1, self.n)
        for i, c in enumerate(self.pivots):
            f = v[:, c].copy()
            if f.any():
                v = self.ctx.sub(v, self.ctx.mul(f[:, None], self.basis[i][None, :]))
        return v[0] if single else v

    def contains(self, v) -> bool:
        v = asarray(self.ctx, v)
        if v.shape[-1] != self.n:
            raise AmbientMismatch("vector length does not match the ambient space")
        return not self.reduce(v).any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ctx, self.n, np.concatenate([self.basis, other.basis]))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ctx, self.n)
        M = np.concatenate([self.basis, other.basis])
        K = left_nullspace(self.ctx, M)
        if K.shape[0] == 0:
            return Subspace.zero(self.ctx, self.n)
        return Subspace(self.ctx, self.n, self.ctx.matmul(K[:, : self.dim], self.basis))

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersection(other)

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return self.dim == 0 or not other.reduce(self.basis).any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.n == other.n
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.ctx, self.n, self.basis.tobytes()))

    def key(self) -> bytes:
        return self.basis.tobytes()

    def nonpivots(self) -> list[int]:
        piv = set(self.pivots)
        return [c for c in range(self.n) if c not in piv]

    def annihilator(self) -> np.ndarray:
        """Matrix P (n x codim) with v in self iff v @ P = 0."""
        if self.dim == 0:
            return identity(self.n)
        return nullspace(self.ctx, self.basis).T.copy()

    def image(self, g) -> "Subspace":
        g = asarray(self.ctx, g)
        if self.dim == 0:
            return Subspace.zero(self.ctx, g.shape[1])
        return Subspace(self.ctx, g.shape[1], self.ctx.matmul(self.basis, g))

    def is_invariant(self, g) -> bool:
        if self.dim == 0:
            return True
        return not self.reduce(self.ctx.matmul(self.basis, asarray(self.ctx, g))).any()

    def quotient_action(self, g) -> np.ndarray:
        """Matrix of g on F^n / self in the basis of non-pivot unit vectors."""
        g = asarray(self.ctx, g)
        comp = self.nonpivots()
        images = self.reduce(g[comp])
        return images[:, comp]

    def __repr__(self) -> str:
        return f"Subspace(n={self.n}, dim={self.dim}, basis={self.basis.tolist()})"

    def to_json(self) -> list:
        return [[self.ctx.elem_to_json(x) for x in row] for row in self.basis.tolist()]

    @classmethod
    def from_json(cls, ctx: FieldCtx, n: int, data: list) -> "Subspace":
        return cls(ctx, n, [[ctx.elem_from_json(x) for x in row] for row in data])


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a + b


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    return a.intersection(b)


# ---------------------------------------------------------------------------
# integer matrices


IntMat = list  # list of rows of Python ints


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [[int(x) for x in row] for row in m]
    n = len(A)
    if any(len(row) != n for row in A):
        raise NotSquare("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def smith_normal_form(m: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix.

    The list has min(rows, cols) entries, all non-negative; zeros (if any)
    come last.
    """
    A = [[int(x) for x in row] for row in m]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    size = min(rows, cols)
    out: list[int] = []
    for t in range(size):
        while True:
            cands = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
            if not cands:
                return out + [0] * (size - t)
            _, i, j = min(cands)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            piv = A[t][t]
            for i in range(t + 1, rows):
                q = A[i][t] // piv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
            for j in range(t + 1, cols):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
            if any(A[i][t] for i in range(t + 1, rows)) or any(A[t][j] for j in range(t + 1, cols)):
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % piv), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        out.append(abs(A[t][t]))
    return out


def circulant(n: int, support: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Sum of coef * C^exp, where C is the shift with C[i][i+1 mod n] = 1."""
    M = [[0] * n for _ in range(n)]
    for e, c in support:
        for i in range(n):
            M[i][(i + e) % n] += int(c)
    return M


def int_identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]
