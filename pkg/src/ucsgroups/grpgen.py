"""Generator sets for the concrete matrix groups used by the drivers.

Every constructor checks the defining form or relation of its output
(orthogonality, similitude, monomiality, presentations) before returning.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np

from .errors import (
    CharacteristicFive,
    CongruenceFailed,
    EvenCharacteristic,
    OrderMismatch,
    QNotInL,
    RootOfUnityMissing,
)
from .finfield import (
    FieldCtx,
    absolute_trace,
    element_of_order,
    elem_order,
    factorint,
    field_make,
    min_poly_over_prime,
    ord_mod,
    primitive_element,
)
from .forms import congruence_to_scalar
from .linalg import Subspace, det, identity, inverse, matpow
from .rep import MatModule

GSP_J = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=np.int64)

# Gram matrix of the trace form on sl_2 in the basis (E, F, H)
_SL2_GRAM = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 2]], dtype=np.int64)


def _prime_ctx(p: int) -> FieldCtx:
    return field_make(p, 1)


def least_alpha(p: int) -> int:
    """Least residue alpha with F_p^x generated by -alpha."""
    ctx = _prime_ctx(p)
    for a in range(1, p):
        if elem_order(ctx, (-a) % p) == p - 1:
            return a
    raise AssertionError("F_p^x is cyclic")


def _gl_mats(r: int, ctx: FieldCtx) -> list[np.ndarray]:
    """diag(w, 1, ..., 1), I + E_12 and the cyclic shift generate GL_r(q)."""
    if r == 1:
        return [np.array([[primitive_element(ctx)]], dtype=np.int64)]
    d = identity(r)
    d[0, 0] = primitive_element(ctx)
    t = identity(r)
    t[0, 1] = 1
    c = np.zeros((r, r), dtype=np.int64)
    for i in range(r):
        c[i, (i + 1) % r] = 1
    out = [d, t, c]
    if ctx.q == 2:
        out = out[1:]  # diag(1, ...) is trivial
    return out


def gl_gens(r: int, ctx: FieldCtx) -> MatModule:
    if r < 1:
        raise ValueError("r must be positive")
    return MatModule(ctx, r, _gl_mats(r, ctx))


def sl_gens(r: int, ctx: FieldCtx) -> MatModule:
    """Transvections I + E_ij (i != j) generate SL_r(q) over prime fields; add
    w-multiples of one transvection for extension fields."""
    mats = []
    for i in range(r):
        for j in range(r):
            if i != j:
                t = identity(r)
                t[i, j] = 1
                mats.append(t)
    if ctx.k > 1 and r > 1:
        t = identity(r)
        t[0, 1] = primitive_element(ctx)
        mats.append(t)
    if not mats:
        mats = [identity(r)]
    return MatModule(ctx, r, mats)


# ---------------------------------------------------------------------------
# similitudes of the alternating form J


def similitude_factor(ctx: FieldCtx, g, J=GSP_J) -> int | None:
    """alpha with g^T J g = alpha J, or None."""
    J = np.mod(J, ctx.p)
    lhs = ctx.matmul(ctx.matmul(np.asarray(g).T, J), g)
    nz = np.flatnonzero(J)
    a = int(ctx.div(lhs.flat[nz[0]], J.flat[nz[0]]))
    if a and np.array_equal(lhs, ctx.mul(J, a)):
        return a
    return None


def gsp4_gens(p: int) -> MatModule:
    """GSp_4(p) for the form J with hyperbolic pairs (x1, x2), (x3, x4)."""
    if p == 2:
        raise EvenCharacteristic("gsp4_gens needs odd p")
    ctx = _prime_ctx(p)
    w = primitive_element(ctx)
    mats = []
    for off in (0, 2):
        for blk in ([[1, 1], [0, 1]], [[1, 0], [1, 1]]):
            g = identity(4)
            g[off : off + 2, off : off + 2] = blk
            mats.append(g)
    # symplectic transvection x -> x + (x J v^T) v with v = x1 + x3
    v = np.array([[1, 0, 1, 0]], dtype=np.int64)
    mats.append(np.mod(identity(4) + (GSP_J @ v.T) @ v, p))
    swap = np.zeros((4, 4), dtype=np.int64)
    swap[0, 2] = swap[1, 3] = swap[2, 0] = swap[3, 1] = 1
    mats.append(swap)
    mats.append(np.diag([1, w, 1, w]).astype(np.int64))
    for g in mats:
        if similitude_factor(ctx, g) is None:
            raise AssertionError("generator is not a similitude of J")
    return MatModule(ctx, 4, mats)


# ---------------------------------------------------------------------------
# SO_3 via the adjoint action of GL_2 on sl_2


def _adjoint(ctx: FieldCtx, h: np.ndarray) -> np.ndarray:
    """Matrix of X -> h^-1 X h on sl_2 in the basis (E, F, H)."""
    hi = inverse(ctx, h)
    basis = [
        np.array([[0, 1], [0, 0]], dtype=np.int64),
        np.array([[0, 0], [1, 0]], dtype=np.int64),
        np.array([[1, 0], [0, ctx.neg(1)]], dtype=np.int64),
    ]
    rows = []
    for X in basis:
        Y = ctx.matmul(ctx.matmul(hi, X), h)
        rows.append([Y[0, 1], Y[1, 0], Y[0, 0]])
    return np.array(rows, dtype=np.int64)


def so3_gens(ctx: FieldCtx) -> MatModule:
    """SO_3(q) for the identity form, as the rescaled adjoint image of GL_2(q)."""
    if ctx.p == 2:
        raise EvenCharacteristic("so3_gens needs odd characteristic")
    S = np.mod(_SL2_GRAM, ctx.p)
    g0, _ = congruence_to_scalar(S, ctx)
    g0i = inverse(ctx, g0)
    mats = []
    for h in _gl_mats(2, ctx):
        M = ctx.matmul(ctx.matmul(g0, _adjoint(ctx, h)), g0i)
        mats.append(M)
    I3 = identity(3)
    for M in mats:
        if not np.array_equal(ctx.matmul(M, M.T), I3) or det(ctx, M) != 1:
            raise AssertionError("adjoint image is not in SO_3")
    return MatModule(ctx, 3, mats)


def cyclic_basis_permutation() -> np.ndarray:
    """P with P @ lex = (e2^e3, e3^e1, e1^e2) for d = 3, as a signed permutation."""
    # lex order: e1^e2, e1^e3, e2^e3
    return np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=np.int64)


def to_dual_order(ctx: FieldCtx, m: np.ndarray) -> np.ndarray:
    """Rewrite a lex-basis ext^2 matrix (d = 3) in the basis (e2^e3, e3^e1, e1^e2)."""
    P = np.mod(cyclic_basis_permutation(), ctx.p)
    return ctx.matmul(ctx.matmul(P, m), inverse(ctx, P))


# ---------------------------------------------------------------------------
# Gamma L_2(p^2) inside GL_4(p)


class _Quad:
    """F_{p^2} = F_p(beta) with beta^2 = -alpha; elements are pairs (u, v) = u + v beta."""

    def __init__(self, p: int, alpha: int):
        self.p, self.alpha = p, alpha

    def mul(self, x, y):
        p, a = self.p, self.alpha
        return ((x[0] * y[0] - a * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def order(self, x) -> int:
        n = self.p**2 - 1
        for r, e in factorint(n).items():
            for _ in range(e):
                y, k = (1, 0), n // r
                base = x
                while k:
                    if k & 1:
                        y = self.mul(y, base)
                    base = self.mul(base, base)
                    k >>= 1
                if y == (1, 0):
                    n //= r
                else:
                    break
        return n

    def primitive(self):
        for u in range(self.p):
            for v in range(1, self.p):
                if self.order((u, v)) == self.p**2 - 1:
                    return (u, v)
        raise AssertionError("no primitive element")

    def block(self, x) -> np.ndarray:
        """Right multiplication by x on the F_p-basis (1, beta)."""
        u, v = x
        return np.array([[u, v], [(-self.alpha * v) % self.p, u]], dtype=np.int64)


def gammal2sq_gens(p: int) -> MatModule:
    """Gamma L_2(p^2) on F_p^4 with x1, x2, x3, x4 = (1,0), (beta,0), (0,1), (0,beta)."""
    if p == 2:
        raise EvenCharacteristic("gammal2sq_gens needs odd p")
    ctx = _prime_ctx(p)
    F = _Quad(p, least_alpha(p))
    one, zero = (1, 0), (0, 0)
    w = F.primitive()
    mats2 = [[[w, zero], [zero, one]], [[one, one], [zero, one]], [[zero, one], [one, zero]]]
    mats = []
    for A in mats2:
        M = np.zeros((4, 4), dtype=np.int64)
        for i in range(2):
            for j in range(2):
                M[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = F.block(A[i][j])
        mats.append(M)
    frob = np.diag([1, p - 1, 1, p - 1]).astype(np.int64)
    mats.append(frob)
    if not np.array_equal(ctx.matmul(frob, frob), identity(4)):
        raise AssertionError("Frobenius is not an involution")
    return MatModule(ctx, 4, mats)


def gl2_wr_c2_gens(p: int) -> MatModule:
    """Stabilizer of the decomposition <x1,x2> + <x3,x4>."""
    ctx = _prime_ctx(p)
    mats = []
    for A in _gl_mats(2, ctx):
        M = identity(4)
        M[:2, :2] = A
        mats.append(M)
    swap = np.zeros((4, 4), dtype=np.int64)
    swap[:2, 2:] = identity(2)
    swap[2:, :2] = identity(2)
    mats.append(swap)
    return MatModule(ctx, 4, mats)


def tensor_pattern(A, B, p: int) -> np.ndarray:
    """The 4x4 matrix of A (x) B for x1..x4 = -u1v1, u2v1, u2v2, u1v2."""
    a11, a12, a21, a22 = (int(x) for x in np.asarray(A).ravel())
    b11, b12, b21, b22 = (int(x) for x in np.asarray(B).ravel())
    M = [
        [a11 * b11, -a12 * b11, -a12 * b12, -a11 * b12],
        [-a21 * b11, a22 * b11, a22 * b12, a21 * b12],
        [-a21 * b21, a22 * b21, a22 * b22, a21 * b22],
        [-a11 * b21, a12 * b21, a12 * b22, a11 * b22],
    ]
    return np.mod(np.array(M, dtype=np.int64), p)


def gl2_central_prod_gens(p: int) -> MatModule:
    ctx = _prime_ctx(p)
    I2 = identity(2)
    mats = [tensor_pattern(A, I2, p) for A in _gl_mats(2, ctx)]
    mats += [tensor_pattern(I2, B, p) for B in _gl_mats(2, ctx)]
    return MatModule(ctx, 4, mats)


# ---------------------------------------------------------------------------
# AGL_1(5) on the deleted permutation module

AGL15_A = np.array([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, -1, -1, -1]], dtype=np.int64)
AGL15_B = np.array([[0, 1, 0, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 0, 1, 0]], dtype=np.int64)


def agl1_5_gens(ctx: FieldCtx) -> MatModule:
    if ctx.p == 5:
        raise CharacteristicFive("AGL_1(5) module needs characteristic other than 5")
    a = np.mod(AGL15_A, ctx.p)
    b = np.mod(AGL15_B, ctx.p)
    return MatModule(ctx, 4, [a, b])


def agl1_5_conjugation_power(ctx: FieldCtx) -> int:
    """The k with b^-1 a b = a^k."""
    a, b = agl1_5_gens(ctx).gens
    conj = ctx.matmul(ctx.matmul(inverse(ctx, b), a), b)
    for k in range(1, 5):
        if np.array_equal(conj, matpow(ctx, a, k)):
            return k
    raise AssertionError("b does not normalize <a>")


# ---------------------------------------------------------------------------
# cyclic groups from minimal polynomials


def companion(poly) -> np.ndarray:
    """Companion matrix (row convention): e_i -> e_{i+1}, last row = -coefficients."""
    poly = [int(c) for c in poly]
    d = len(poly) - 1
    C = np.zeros((d, d), dtype=np.int64)
    for i in range(d - 1):
        C[i, i + 1] = 1
    C[d - 1] = [-c for c in poly[:d]]
    return C


def cyclic_companion(r: int, d: int, ctx: FieldCtx) -> MatModule:
    """Companion matrix of the minimal polynomial of an order-r element of F_{q^d}."""
    if ctx.k != 1:
        raise NotImplementedError("cyclic_companion is implemented over prime fields")
    q = ctx.q
    if ord_mod(q, r) != d:
        raise OrderMismatch(f"ord_{r}({q}) = {ord_mod(q, r)} != {d}")
    E = field_make(ctx.p, d)
    x = element_of_order(E, r)
    poly = min_poly_over_prime(E, x)
    C = np.mod(companion(poly), ctx.p)
    if not np.array_equal(matpow(ctx, C, r), identity(d)):
        raise AssertionError("companion matrix has wrong order")
    return MatModule(ctx, d, [C])


def frob55_gens(ctx: FieldCtx) -> MatModule:
    """<g, n | g^5 = n^11 = 1, g^-1 n g = n^3> acting on F_q^5."""
    if (ctx.q - 1) % 11:
        raise CongruenceFailed(f"q = {ctx.q} is not 1 mod 11")
    z = element_of_order(ctx, 11)
    n = np.diag([int(ctx.pow(z, e)) for e in (1, 3, 9, 5, 4)]).astype(np.int64)
    g = np.zeros((5, 5), dtype=np.int64)
    for i in range(5):
        g[i, (i - 1) % 5] = 1
    gi = inverse(ctx, g)
    if not (
        np.array_equal(matpow(ctx, g, 5), identity(5))
        and np.array_equal(matpow(ctx, n, 11), identity(5))
        and np.array_equal(ctx.matmul(ctx.matmul(gi, n), g), matpow(ctx, n, 3))
    ):
        raise AssertionError("order-55 relations fail")
    return MatModule(ctx, 5, [n, g])


# ---------------------------------------------------------------------------
# subgroups of A Gamma L_1(F_t) in the Fourier basis


def _prime_power(t: int) -> tuple[int, int]:
    f = factorint(t)
    if len(f) != 1:
        raise ValueError(f"{t} is not a prime power")
    (r, m), = f.items()
    return r, m


def _subgroup(E: FieldCtx, gens) -> list[int]:
    S = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gens:
                y = int(E.mul(s, g))
                if y not in S:
                    S.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(S)


def agammal_sub_gens(t: int, L, ctx: FieldCtx, coset: int = 1) -> MatModule:
    """Monomial generators of G_L on W(coset * L) = <f_a : a in coset * L>.

    The basis f_a is ordered by increasing field code of a; (sigma, lam, mu)
    sends f_a to zeta^(-T(b mu)) f_b with b = (a sigma) lam^-1.
    """
    r, m = _prime_power(t)
    E = field_make(r, m)
    q = ctx.q
    if q % r == 0:
        raise ValueError("t and q must be coprime")
    if (q - 1) % r:
        raise RootOfUnityMissing(f"F_{q} has no element of order {r}")
    Lgens = [int(x) % t if m == 1 else int(x) for x in L]
    Lset = _subgroup(E, Lgens)
    if (q % r) not in Lset:
        raise QNotInL(f"q mod {r} is not in L")
    zeta = element_of_order(ctx, r)
    zpow = [int(ctx.pow(zeta, i)) for i in range(r)]
    idx_elems = sorted(int(E.mul(coset, a)) for a in Lset)
    pos = {a: i for i, a in enumerate(idx_elems)}
    n = len(idx_elems)

    def element(sigma: int, lam: int, mu: int) -> np.ndarray:
        M = np.zeros((n, n), dtype=np.int64)
        li = int(E.inv(lam))
        for a in idx_elems:
            b = int(E.mul(E.pow(a, r**sigma), li))
            tr = absolute_trace(E, int(E.mul(b, mu)))
            M[pos[a], pos[b]] = zpow[(-tr) % r]
        return M

    mats = [element(0, 1, r**j) for j in range(m)]  # F_r-basis x^j has code r^j
    mats += [element(0, g, 0) for g in Lgens if g != 1]
    gamma = primitive_element(E)
    Lfull = set(Lset)
    for s in range(1, m):
        if int(E.pow(gamma, r**s - 1)) in Lfull:
            mats.append(element(s, 1, 0))
            break
    for M in mats:
        if not ((np.count_nonzero(M, axis=0) == 1).all() and (np.count_nonzero(M, axis=1) == 1).all()):
            raise AssertionError("generator is not monomial")
    return MatModule(ctx, n, mats)


def fourier_element(t: int, L, ctx: FieldCtx, sigma: int, lam: int, mu: int, coset: int = 1) -> np.ndarray:
    """Matrix of a single (sigma, lam, mu) on W(coset * L); used for checks."""
    r, m = _prime_power(t)
    E = field_make(r, m)
    Lset = _subgroup(E, [int(x) for x in L])
    zeta = element_of_order(ctx, r)
    idx_elems = sorted(int(E.mul(coset, a)) for a in Lset)
    pos = {a: i for i, a in enumerate(idx_elems)}
    M = np.zeros((len(idx_elems),) * 2, dtype=np.int64)
    li = int(E.inv(lam))
    for a in idx_elems:
        b = int(E.mul(E.pow(a, r**sigma), li))
        tr = absolute_trace(E, int(E.mul(b, mu)))
        M[pos[a], pos[b]] = int(ctx.pow(zeta, (-tr) % r))
    return M


# ---------------------------------------------------------------------------
# A_4: 3 + 1 + 1 assemblies


def _a4_perm_gens() -> list[np.ndarray]:
    s = np.zeros((4, 4), dtype=np.int64)  # (1 2 3)
    for i, j in ((0, 1), (1, 2), (2, 0), (3, 3)):
        s[i, j] = 1
    u = np.zeros((4, 4), dtype=np.int64)  # (1 2)(3 4)
    for i, j in ((0, 1), (1, 0), (2, 3), (3, 2)):
        u[i, j] = 1
    return [s, u]


def a4_v3(ctx: FieldCtx) -> MatModule:
    """The sum-zero part of the permutation module of A_4."""
    if ctx.p in (2, 3):
        raise ValueError("A_4 modules need characteristic prime to 6")
    perm = MatModule(ctx, 4, _a4_perm_gens())
    sub = Subspace(ctx, 4, [[1, 0, 0, ctx.p - 1], [0, 1, 0, ctx.p - 1], [0, 0, 1, ctx.p - 1]])
    return perm.restrict(sub)


def a4_linear_characters(ctx: FieldCtx) -> list[MatModule]:
    """1-dim modules: (1 2 3) -> w^k, (1 2)(3 4) -> 1, with w a cube root of unity."""
    ws = [1]
    if (ctx.q - 1) % 3 == 0:
        w = element_of_order(ctx, 3)
        ws += [w, int(ctx.mul(w, w))]
    return [MatModule(ctx, 1, [[[x]], [[1]]]) for x in ws]


def a4_modules_311(ctx: FieldCtx) -> list[tuple[tuple[int, int], MatModule]]:
    """V3 + chi_i + chi_j for every multiset {i, j} of linear characters."""
    V = a4_v3(ctx)
    chars = a4_linear_characters(ctx)
    out = []
    for i, j in combinations_with_replacement(range(len(chars)), 2):
        out.append(((i, j), V.direct_sum(chars[i]).direct_sum(chars[j])))
    return out


FAMILIES = {
    "GL": "gl_gens(r, q)",
    "SL": "sl_gens(r, q)",
    "GSp4": "gsp4_gens(p)",
    "SO3": "so3_gens(q)",
    "GammaL2sq": "gammal2sq_gens(p)",
    "GL2WrC2": "gl2_wr_c2_gens(p)",
    "GL2CentralProd": "gl2_central_prod_gens(p)",
    "AGL1_5": "agl1_5_gens(q)",
    "AGammaL_Sub": "agammal_sub_gens(t, L, q)",
    "Singer": "singer_gens(d, q)",
    "CyclicCompanion": "cyclic_companion(r, d, q)",
    "Frob55": "frob55_gens(q)",
}


def singer_gens(d: int, ctx: FieldCtx) -> MatModule:
    """Companion matrix of the minimal polynomial of a primitive element of F_{q^d}."""
    if ctx.k != 1:
        raise NotImplementedError("singer_gens is implemented over prime fields")
    E = field_make(ctx.p, d)
    poly = min_poly_over_prime(E, primitive_element(E))
    return MatModule(ctx, d, [np.mod(companion(poly), ctx.p)])


def _field_from_q(q: int) -> FieldCtx:
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, k), = f.items()
    return field_make(p, k)


def construct(family: str, params: dict) -> MatModule:
    """Dispatch a family tag with integer parameters (q may be a prime power)."""
    P = {k: v for k, v in params.items()}
    if family == "GL":
        return gl_gens(int(P["r"]), _field_from_q(int(P["q"])))
    if family == "SL":
        return sl_gens(int(P["r"]), _field_from_q(int(P["q"])))
    if family == "GSp4":
        return gsp4_gens(int(P["p"]))
    if family == "SO3":
        return so3_gens(_field_from_q(int(P["q"])))
    if family == "GammaL2sq":
        return gammal2sq_gens(int(P["p"]))
    if family == "GL2WrC2":
        return gl2_wr_c2_gens(int(P["p"]))
    if family == "GL2CentralProd":
        return gl2_central_prod_gens(int(P["p"]))
    if family == "AGL1_5":
        return agl1_5_gens(_field_from_q(int(P["q"])))
    if family == "AGammaL_Sub":
        L = P.get("L")
        t = int(P["t"])
        if L is None:
            r, m = _prime_power(t)
            L = [primitive_element(field_make(r, m))]
        return agammal_sub_gens(t, [int(x) for x in L], _field_from_q(int(P["q"])), int(P.get("coset", 1)))
    if family == "Singer":
        return singer_gens(int(P["d"]), _field_from_q(int(P["q"])))
    if family == "CyclicCompanion":
        return cyclic_companion(int(P["r"]), int(P["d"]), _field_from_q(int(P["q"])))
    if family == "Frob55":
        return frob55_gens(_field_from_q(int(P["q"])))
    raise ValueError(f"unknown family {family!r}")
