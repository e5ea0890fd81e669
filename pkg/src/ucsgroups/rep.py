"""Matrix modules over finite fields.

A module is a list of generator matrices acting on row vectors.  The
exterior square uses the lex basis e_i ^ e_j (i < j), so the entry of
ext^2 g at row (i, j), column (k, l) is g_ik g_jl - g_il g_jk.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import CtxMismatch, GenCountMismatch, ZeroDim
from .finfield import FieldCtx, field_make
from .linalg import Mat, Subspace, asarray, batch_rank, identity, inverse, left_nullspace, nullspace, rank

LINE_CAP = 10**6


def _ext_indices(d: int) -> tuple[np.ndarray, ...]:
    prs = list(combinations(range(d), 2))
    I, J, K, L = [], [], [], []
    for i, j in prs:
        for k, l in prs:
            I.append(i)
            J.append(j)
            K.append(k)
            L.append(l)
    return tuple(np.array(x, dtype=np.int64) for x in (I, J, K, L))


def exterior_square_matrix(ctx: FieldCtx, g) -> np.ndarray:
    """ext^2 of a matrix, or of a stack of matrices (leading axes kept)."""
    g = asarray(ctx, g)
    d = g.shape[-1]
    m = d * (d - 1) // 2
    I, J, K, L = _ext_indices(d)
    a = ctx.mul(g[..., I, K], g[..., J, L])
    b = ctx.mul(g[..., I, L], g[..., J, K])
    return ctx.sub(a, b).reshape(g.shape[:-2] + (m, m))


def exterior_square_int(g: np.ndarray) -> np.ndarray:
    """Integer version on a stack (B, d, d); the caller reduces mod p."""
    d = g.shape[-1]
    m = d * (d - 1) // 2
    I, J, K, L = _ext_indices(d)
    return (g[..., I, K] * g[..., J, L] - g[..., I, L] * g[..., J, K]).reshape(g.shape[:-2] + (m, m))


class MatModule:
    """A module F^dim with the group generated by ``gens`` acting on the right."""

    def __init__(self, ctx: FieldCtx, dim: int, gens: Sequence):
        self.ctx = ctx
        self.dim = int(dim)
        self.gens = [asarray(ctx, g).reshape(self.dim, self.dim) for g in gens]

    @classmethod
    def from_gens(cls, ctx: FieldCtx, gens: Sequence) -> "MatModule":
        gens = [asarray(ctx, g) for g in gens]
        return cls(ctx, gens[0].shape[0], gens)

    def __repr__(self) -> str:
        return f"MatModule(q={self.ctx.q}, dim={self.dim}, ngens={len(self.gens)})"

    def exterior_square(self) -> "MatModule":
        m = self.dim * (self.dim - 1) // 2
        return MatModule(self.ctx, m, [exterior_square_matrix(self.ctx, g) for g in self.gens])

    def quotient(self, sub: Subspace) -> "MatModule":
        return MatModule(self.ctx, sub.codim, [sub.quotient_action(g) for g in self.gens])

    def restrict(self, sub: Subspace) -> "MatModule":
        """Action on an invariant subspace, in the coordinates of its basis."""
        B = sub.basis
        mats = []
        for g in self.gens:
            img = self.ctx.matmul(B, g)
            coords = np.zeros((sub.dim, sub.dim), dtype=np.int64)
            for i, row in enumerate(img):
                # rows of B are in RREF, so coordinates are read at the pivots
                coords[i] = row[sub.pivots]
            mats.append(coords)
        return MatModule(self.ctx, sub.dim, mats)

    def dual(self) -> "MatModule":
        return MatModule(self.ctx, self.dim, [inverse(self.ctx, g).T.copy() for g in self.gens])

    def conjugate(self, x) -> "MatModule":
        """The module with generators x^-1 g x."""
        x = asarray(self.ctx, x)
        xi = inverse(self.ctx, x)
        return MatModule(self.ctx, self.dim, [self.ctx.matmul(self.ctx.matmul(xi, g), x) for g in self.gens])

    def direct_sum(self, other: "MatModule") -> "MatModule":
        if other.ctx != self.ctx:
            raise CtxMismatch("modules over different fields")
        if len(other.gens) != len(self.gens):
            raise GenCountMismatch("modules with different generator counts")
        n = self.dim + other.dim
        mats = []
        for g, h in zip(self.gens, other.gens):
            M = np.zeros((n, n), dtype=np.int64)
            M[: self.dim, : self.dim] = g
            M[self.dim :, self.dim :] = h
            mats.append(M)
        return MatModule(self.ctx, n, mats)

    def to_json(self) -> dict:
        return {
            "field": self.ctx.to_json(),
            "dim": self.dim,
            "generators": [Mat(self.ctx, g).to_json() for g in self.gens],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MatModule":
        f = data["field"]
        ctx = field_make(int(f["p"]), int(f["k"]))
        if list(ctx.modulus) != [int(c) for c in f["modulus"]]:
            from .finfield import FieldCtx as _F

            ctx = _F(int(f["p"]), int(f["k"]), f["modulus"])
        return cls(ctx, int(data["dim"]), [Mat.from_json(ctx, g).a for g in data["generators"]])


def exterior_square_module(m: MatModule) -> MatModule:
    return m.exterior_square()


def spin(m: MatModule, vectors) -> Subspace:
    """Smallest invariant subspace containing the given vectors."""
    S = Subspace(m.ctx, m.dim, vectors)
    new = S.basis
    while new.shape[0]:
        imgs = np.concatenate([m.ctx.matmul(new, g) for g in m.gens]) if m.gens else new[:0]
        red = S.reduce(imgs) if S.dim else imgs
        red = red[red.any(axis=1)]
        if not red.shape[0]:
            break
        T = S + Subspace(m.ctx, m.dim, red)
        new = Subspace(m.ctx, m.dim, red).basis
        S = T
    return S


# ---------------------------------------------------------------------------
# irreducibility


@dataclass
class IrreducibilityResult:
    verdict: str  # "irreducible" | "reducible" | "inconclusive"
    witness: Subspace | None = None
    method: str = "exhaustive"

    @property
    def irreducible(self) -> bool:
        return self.verdict == "irreducible"

    def __bool__(self) -> bool:
        return self.irreducible


def n_lines(q: int, d: int) -> int:
    return (q**d - 1) // (q - 1)


def _line_codes(q: int, d: int) -> np.ndarray:
    """Codes sum(v_i q^i) of vectors whose first nonzero entry is 1, sorted."""
    parts = []
    for i in range(d):
        t = np.arange(q ** (d - 1 - i), dtype=np.int64)
        parts.append(q**i + q ** (i + 1) * t)
    return np.sort(np.concatenate(parts))


def normalize_rows(ctx: FieldCtx, V: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    nz = V != 0
    lead = nz.argmax(axis=1)
    piv = V[np.arange(V.shape[0]), lead]
    piv = np.where(piv == 0, 1, piv)
    return ctx.mul(V, ctx.inv(piv)[:, None])


def line_orbits(m: MatModule) -> tuple[np.ndarray, np.ndarray]:
    """Line codes and orbit labels of the projective action."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    ctx, d = m.ctx, m.dim
    q = ctx.q
    codes = _line_codes(q, d)
    L = codes.size
    w = q ** np.arange(d, dtype=np.int64)
    rows, cols = [], []
    step = 1 << 16
    for s in range(0, L, step):
        block = codes[s : s + step]
        V = (block[:, None] // w) % q
        for g in m.gens:
            img = normalize_rows(ctx, ctx.matmul(V, g))
            idx = np.searchsorted(codes, img @ w)
            rows.append(np.arange(s, s + block.size))
            cols.append(idx)
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(L, L))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return codes, labels


def is_irreducible(m: MatModule, seed: int = 0, line_cap: int = LINE_CAP) -> IrreducibilityResult:
    """Exact verdict by spinning one line per orbit when there are few lines.

    Otherwise a seeded randomized test: a proper spin of a random vector
    certifies reducibility, and the kernel criterion below certifies
    irreducibility; failing both gives "inconclusive".
    """
    if m.dim == 0:
        raise ZeroDim("irreducibility of the zero module")
    if m.dim == 1:
        return IrreducibilityResult("irreducible")
    q = m.ctx.q
    if n_lines(q, m.dim) <= line_cap:
        codes, labels = line_orbits(m)
        _, first = np.unique(labels, return_index=True)
        w = q ** np.arange(m.dim, dtype=np.int64)
        for i in first:
            v = (codes[i] // w) % q
            S = spin(m, v[None])
            if S.dim < m.dim:
                return IrreducibilityResult("reducible", S)
        return IrreducibilityResult("irreducible")
    return _randomized_irreducible(m, seed)


def _random_algebra_element(m: MatModule, rng: np.random.Generator) -> np.ndarray:
    ctx, d = m.ctx, m.dim
    x = np.zeros((d, d), dtype=np.int64)
    for _ in range(3):
        w = identity(d)
        for _ in range(int(rng.integers(1, 5))):
            w = ctx.matmul(w, m.gens[int(rng.integers(len(m.gens)))])
        c = int(rng.integers(1, ctx.q))
        x = ctx.add(x, ctx.mul(w, c))
    return x


def _eigenvalue(ctx: FieldCtx, x: np.ndarray, v: np.ndarray) -> int | None:
    """A root in F_q of the minimal polynomial of v under x, if any."""
    d = x.shape[0]
    krylov = [v]
    while True:
        nxt = ctx.matmul(krylov[-1][None], x)[0]
        stack = np.vstack([np.array(krylov), nxt])
        if rank(ctx, stack) == len(krylov):
            coeffs = left_nullspace(ctx, stack)[0]
            break
        krylov.append(nxt)
        if len(krylov) > d:
            return None
    if ctx.q > 1 << 20:
        return None
    lam = ctx.elements()
    val = np.zeros_like(lam)
    for c in coeffs[::-1]:
        val = ctx.add(ctx.mul(val, lam), c)
    roots = lam[val == 0]
    return int(roots[0]) if roots.size else None


def _randomized_irreducible(m: MatModule, seed: int, tries: int = 32) -> IrreducibilityResult:
    ctx, d = m.ctx, m.dim
    rng = np.random.default_rng(seed)
    dual = MatModule(ctx, d, [g.T.copy() for g in m.gens])
    for _ in range(tries):
        v = rng.integers(0, ctx.q, d)
        if not v.any():
            continue
        S = spin(m, v[None])
        if S.dim < d:
            return IrreducibilityResult("reducible", S, "randomized")
        x = _random_algebra_element(m, rng)
        lam = _eigenvalue(ctx, x, v)
        if lam is None:
            continue
        theta = ctx.sub(x, ctx.mul(identity(d), lam))
        K = left_nullspace(ctx, theta)
        kd = K.shape[0]
        if kd == 0 or n_lines(ctx.q, kd) > 10**4:
            continue
        codes = _line_codes(ctx.q, kd)
        w = ctx.q ** np.arange(kd, dtype=np.int64)
        for cde in codes:
            coeff = (cde // w) % ctx.q
            u = ctx.matmul(coeff[None], K)
            S = spin(m, u)
            if S.dim < d:
                return IrreducibilityResult("reducible", S, "randomized")
        # every vector of ker(theta) spins to V; one vector of ker(theta^T)
        # must spin to V under the transposed action
        KT = nullspace(ctx, theta)
        if KT.shape[0] and spin(dual, KT[:1]).dim == d:
            return IrreducibilityResult("irreducible", None, "kernel-criterion")
    return IrreducibilityResult("inconclusive", None, "randomized")


# ---------------------------------------------------------------------------
# homomorphisms


def hom_space(m1: MatModule, m2: MatModule) -> list[np.ndarray]:
    """Basis of {X : g_i X = X h_i for all i} (matrices dim1 x dim2)."""
    if m1.ctx != m2.ctx:
        raise CtxMismatch("modules over different fields")
    if len(m1.gens) != len(m2.gens):
        raise GenCountMismatch("modules with different generator counts")
    ctx = m1.ctx
    d1, d2 = m1.dim, m2.dim
    blocks = []
    I1, I2 = identity(d1), identity(d2)
    for g, h in zip(m1.gens, m2.gens):
        blocks.append(ctx.sub(np.kron(g, I2), np.kron(I1, h.T)))
    if not blocks:
        return [row.reshape(d1, d2) for row in identity(d1 * d2)]
    sol = nullspace(ctx, np.concatenate(blocks))
    return [row.reshape(d1, d2) for row in sol]


def _combos(ctx: FieldCtx, basis: list[np.ndarray], seed: int, sample: int):
    """Yield (coefficient rows, combined matrices) in chunks.

    Exhaustive over projective coefficient vectors when there are at most
    LINE_CAP of them, else a seeded random sample.
    """
    h = len(basis)
    q = ctx.q
    X = np.stack(basis)
    w = q ** np.arange(h, dtype=np.int64)
    if n_lines(q, h) <= LINE_CAP:
        codes = _line_codes(q, h)
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        codes = rng.integers(1, q**h if q**h < 2**62 else 2**62, sample)
        exhaustive = False
    step = 4096
    for s in range(0, codes.size, step):
        C = (codes[s : s + step, None] // w) % q
        # sum_i c_i X_i
        M = np.zeros((C.shape[0],) + X.shape[1:], dtype=np.int64)
        for i in range(h):
            M = ctx.add(M, ctx.mul(C[:, i, None, None], X[i][None]))
        yield C, M, exhaustive


@dataclass
class IsoResult:
    verdict: str  # "yes" | "no" | "inconclusive"
    iso: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.verdict == "yes"


def modules_isomorphic(m1: MatModule, m2: MatModule, seed: int = 0) -> IsoResult:
    if m1.dim != m2.dim:
        return IsoResult("no")
    H = hom_space(m1, m2)
    if not H:
        return IsoResult("no")
    exhaustive = True
    for C, M, exhaustive in _combos(m1.ctx, H, seed, 4096):
        rk = batch_rank(m1.ctx, M)
        hit = np.flatnonzero(rk == m1.dim)
        if hit.size:
            return IsoResult("yes", M[hit[0]])
    return IsoResult("no" if exhaustive else "inconclusive")


@dataclass
class EsqResult:
    verdict: str  # "esq" | "not_esq" | "inconclusive"
    kernel: Subspace | None = None
    intertwiner: np.ndarray | None = None
    hom_dim: int = 0

    @property
    def is_esq(self) -> bool:
        return self.verdict == "esq"

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "hom_dim": self.hom_dim}
        if self.kernel is not None:
            out["kernel_basis"] = self.kernel.to_json()
            out["intertwiner"] = Mat(self.kernel.ctx, self.intertwiner).to_json()
        return out


def esq_witness(m: MatModule, seed: int = 0, sample: int = 20000) -> EsqResult:
    """Search for a surjective module map ext^2 V -> V.

    A surjection X exhibits ext^2 V / ker X as isomorphic to V.
    """
    ctx, d = m.ctx, m.dim
    if d * (d - 1) // 2 < d:
        # ext^2 V is too small to map onto V (d <= 2)
        return EsqResult("not_esq")
    E = m.exterior_square()
    H = hom_space(E, m)
    if not H:
        return EsqResult("not_esq", hom_dim=0)
    exhaustive = True
    for C, M, exhaustive in _combos(ctx, H, seed, sample):
        rk = batch_rank(ctx, M)
        hit = np.flatnonzero(rk == d)
        if hit.size:
            X = M[hit[0]]
            K = Subspace(ctx, E.dim, left_nullspace(ctx, X))
            return EsqResult("esq", K, X, len(H))
    return EsqResult("not_esq" if exhaustive else "inconclusive", hom_dim=len(H))


def verify_esq_witness(m: MatModule, res: EsqResult) -> bool:
    """Independent check of a witness: invariance, intertwining, rank."""
    ctx = m.ctx
    E = m.exterior_square()
    X = res.intertwiner
    if X is None or rank(ctx, X) != m.dim:
        return False
    for g, h in zip(E.gens, m.gens):
        if not np.array_equal(ctx.matmul(g, X), ctx.matmul(X, h)):
            return False
        if not res.kernel.is_invariant(g):
            return False
    return res.kernel.dim == E.dim - m.dim


def group_contains_scalar(m: MatModule, elements: np.ndarray) -> bool:
    """True if some listed element is a non-identity scalar matrix."""
    d = m.dim
    for e in elements:
        if (e == np.diag(np.diag(e))).all() and (np.diag(e) == e[0, 0]).all() and e[0, 0] != 1:
            return True
    return False
