"""Quadratic and bilinear forms.

On ext^2 F_p^4 with coordinates (z12, z13, z14, z23, z24, z34) the
quadratic form is Q(a) = a1 a6 - a2 a5 + a3 a4; ext^2 g scales it by
det(g).
"""

from __future__ import annotations

import numpy as np

from .errors import EvenCharacteristic, NotSymmetric, Singular
from .finfield import FieldCtx, field_make
from .linalg import Subspace, asarray, det, identity, nullspace

KLEIN_GRAM = np.array(
    [
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, -1, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
    ],
    dtype=np.int64,
)


def q_value(alpha, p: int) -> int:
    a = [int(x) for x in alpha]
    return (a[0] * a[5] - a[1] * a[4] + a[2] * a[3]) % p


def klein_gram(p: int) -> np.ndarray:
    """Gram matrix of the polarization B(x, y) = Q(x+y) - Q(x) - Q(y)."""
    return np.mod(KLEIN_GRAM, p)


def polar(x, y, p: int) -> int:
    return int(np.asarray(x) @ klein_gram(p) @ np.asarray(y)) % p


def perp(U: Subspace) -> Subspace:
    """Orthogonal complement of U in ext^2 F_p^4 for the polarized form."""
    ctx = U.ctx
    if U.dim == 0:
        return Subspace.full(ctx, U.n)
    G = klein_gram(ctx.p)
    return Subspace(ctx, U.n, nullspace(ctx, ctx.matmul(U.basis, G)))


def is_degenerate(U: Subspace) -> bool:
    """True if the restricted polar form has a nonzero radical."""
    if U.dim == 0:
        return False
    return U.intersection(perp(U)).dim > 0


def _diagonalize(ctx: FieldCtx, A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P with P A P^T diagonal (odd characteristic)."""
    n = A.shape[0]
    P = identity(n)
    M = A.copy()
    for i in range(n):
        if M[i, i] == 0:
            j = next((j for j in range(i + 1, n) if M[j, j] != 0), None)
            if j is not None:
                P[[i, j]] = P[[j, i]]
                M[[i, j]] = M[[j, i]]
                M[:, [i, j]] = M[:, [j, i]]
            else:
                j = next((j for j in range(i + 1, n) if M[i, j] != 0), None)
                if j is None:
                    continue
                # replace e_i by e_i + e_j, whose norm is 2 M_ij != 0
                E = identity(n)
                E[i, j] = 1
                P = ctx.matmul(E, P)
                M = ctx.matmul(ctx.matmul(E, M), E.T)
        inv = ctx.inv(M[i, i])
        E = identity(n)
        for j in range(i + 1, n):
            if M[j, i]:
                E[j, i] = ctx.neg(ctx.mul(M[j, i], inv))
        P = ctx.matmul(E, P)
        M = ctx.matmul(ctx.matmul(E, M), E.T)
    return P, M


def _represent(ctx: FieldCtx, a: int, b: int, c: int) -> tuple[int, int]:
    """(x, y) with a x^2 + b y^2 = c, for nonzero a, b, c."""
    for x in range(ctx.q):
        rest = int(ctx.sub(c, ctx.mul(a, ctx.mul(x, x))))
        y2 = int(ctx.div(rest, b))
        if ctx.is_square(y2):
            return x, ctx.sqrt(y2)
    raise AssertionError("binary forms over finite fields are universal")


def congruence_to_scalar(A, ctx: FieldCtx | None = None) -> tuple[np.ndarray, int]:
    """(g, lam) with g A g^T = lam I for a nonsingular symmetric A.

    lam is det(A) for odd size; for even size lam = 1 and det(A) must be a
    square.
    """
    if ctx is None:
        ctx = field_make(3)
    A = asarray(ctx, A)
    n = A.shape[0]
    if ctx.p == 2:
        raise EvenCharacteristic("forms in characteristic 2")
    if not np.array_equal(A, A.T):
        raise NotSymmetric("matrix is not symmetric")
    dA = det(ctx, A)
    if dA == 0:
        raise Singular("form is degenerate")
    lam = dA if n % 2 else 1
    P, D = _diagonalize(ctx, A)
    d = [int(D[i, i]) for i in range(n)]
    g = P
    for i in range(n - 1):
        if d[i] == lam:
            continue
        x, y = _represent(ctx, d[i], d[i + 1], lam)
        T = identity(n)
        T[i, i], T[i, i + 1] = x, y
        T[i + 1, i] = ctx.neg(ctx.mul(d[i + 1], y))
        T[i + 1, i + 1] = ctx.mul(d[i], x)
        g = ctx.matmul(T, g)
        d[i + 1] = int(ctx.mul(ctx.mul(d[i], d[i + 1]), lam))
        d[i] = lam
    if d[-1] != lam:
        s = ctx.sqrt(int(ctx.div(lam, d[-1])))
        S = identity(n)
        S[n - 1, n - 1] = s
        g = ctx.matmul(S, g)
    check = ctx.matmul(ctx.matmul(g, A), g.T)
    if not np.array_equal(check, ctx.mul(identity(n), lam)):
        raise AssertionError("congruence failed")
    return g, lam
