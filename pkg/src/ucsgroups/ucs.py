"""UCS certification and the r <= 4 drivers.

A quotient G = H_{p,r}/N with N inside the Frattini subgroup is UCS iff the
stabilizer of N in GL_r(p), acting through the induced Frattini action, is
irreducible both on V = F_p^r and on Phi/N.  Sweep mode computes the exact
stabilizer; witness mode checks a supplied subgroup and can only ever
confirm the UCS property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    EvenCharacteristic,
    NotInvariant,
    NotIso,
    WitnessDoesNotStabilize,
    WrongResidue,
)
from .finfield import FieldCtx, field_make
from .forms import congruence_to_scalar, is_degenerate, klein_gram, perp, q_value
from .grpgen import (
    cyclic_companion,
    gammal2sq_gens,
    gl2_central_prod_gens,
    gl2_wr_c2_gens,
    gl_gens,
    gsp4_gens,
    least_alpha,
)
from .linalg import Subspace, batch_inverse, batch_rank, identity, left_nullspace, rank
from .matgroup import greedy_generators
from .pclass2 import Quotient, frattini_dim, pairs, relators_to_subspace
from .rep import MatModule, exterior_square_int, exterior_square_matrix, hom_space, is_irreducible
from .sweep import (
    DEFAULT_BUDGET,
    GLEnumerator,
    StabilizerResult,
    act_frattini,
    action_matrix,
    gl_order,
    memo_sweep,
    with_generators,
)

__all__ = [
    "q_value",
    "perp",
    "is_degenerate",
    "klein_gram",
    "congruence_to_scalar",
    "catalog_r4",
    "certify_ucs",
    "classify_r4_exponent_p",
    "verify_p2_r4_list",
    "construct_exponent_p2",
    "thm72_family",
    "NAMED_GROUPS",
    "prefetch_r4_sweeps",
    "named_quotient",
]

UCS_INDICES = (0, 2, 4, 6, 11, 14, 16, 18)


# ---------------------------------------------------------------------------
# the 19 orbit representatives on subspaces of ext^2 F_p^4


def zvec(p: int, terms: dict[tuple[int, int], int]) -> list[int]:
    """Vector in the lex basis z12, z13, z14, z23, z24, z34 (1-based pairs)."""
    idx = {pr: t for t, pr in enumerate(pairs(4))}
    v = [0] * 6
    for (j, k), c in terms.items():
        v[idx[(j - 1, k - 1)]] = c % p
    return v


def _catalog_vectors(p: int, a: int, printed: bool = False) -> list[list[dict]]:
    # With -a the form on U_12 is a c^2 - d^2, which splits when a is a square
    # (p = 3 mod 4) and puts U_12 in the orbit of U_8. With +a it is anisotropic
    # for every odd p, matching U_6 and U_18.
    s12 = -a if printed else a
    return [
        [],
        [{(1, 3): 1}, {(1, 4): 1}, {(2, 3): 1}, {(2, 4): 1}, {(3, 4): 1}],
        [{(1, 2): 1, (3, 4): -1}, {(1, 3): 1}, {(1, 4): 1}, {(2, 3): 1}, {(2, 4): 1}],
        [{(1, 2): 1}, {(1, 4): 1}, {(2, 4): 1}, {(3, 4): 1}],
        [{(1, 3): 1}, {(1, 4): 1}, {(2, 3): 1}, {(2, 4): 1}],
        [{(1, 2): 1}, {(2, 4): 1}, {(3, 4): 1}, {(2, 3): 1, (1, 4): -1}],
        [{(1, 2): 1}, {(3, 4): 1}, {(2, 3): 1, (1, 4): -1}, {(1, 3): a, (2, 4): 1}],
        [{(1, 4): 1}, {(2, 4): 1}, {(3, 4): 1}],
        [{(1, 3): 1}, {(1, 4): 1}, {(2, 4): 1}],
        [{(2, 3): 1}, {(2, 4): 1}, {(3, 4): 1}],
        [{(1, 3): 1}, {(1, 4): 1}, {(3, 4): 1, (1, 2): -1}],
        [{(1, 4): 1}, {(2, 3): 1}, {(2, 4): 1, (1, 3): -1}],
        [{(1, 4): 1}, {(2, 4): 1, (1, 3): s12}, {(1, 2): 1, (3, 4): -1}],
    ]


@dataclass
class OrbitRepCatalog:
    p: int
    alpha: int
    reps: list[Subspace]

    def __getitem__(self, i: int) -> Subspace:
        return self.reps[i]

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def dims(self) -> list[int]:
        return [U.dim for U in self.reps]

    def degenerate(self) -> list[int]:
        return [i for i, U in enumerate(self.reps) if is_degenerate(U)]

    def to_json(self) -> dict:
        return {"p": self.p, "alpha": self.alpha, "reps": [U.basis.tolist() for U in self.reps]}


def catalog_r4(p: int, printed: bool = False) -> OrbitRepCatalog:
    """U_0..U_12 from their generator lists and U_{i+12} = U_i^perp.

    ``printed=True`` keeps the sign -alpha in U_12, which duplicates the
    orbit of U_8 whenever alpha is a square mod p.
    """
    if p == 2:
        raise EvenCharacteristic("the orbit catalogue is for odd p")
    ctx = field_make(p)
    a = least_alpha(p)
    reps = [Subspace(ctx, 6, [zvec(p, t) for t in terms]) for terms in _catalog_vectors(p, a, printed)]
    reps += [perp(reps[i]) for i in range(1, 7)]
    return OrbitRepCatalog(p, a, reps)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def exponent_p_subspace(U: Subspace, r: int = 4) -> Subspace:
    """N = H^p + U in Frattini coordinates."""
    ctx = U.ctx
    D = frattini_dim(r)
    rows = [list(identity(D)[i]) for i in range(r)]
    for v in U.basis:
        rows.append([0] * r + list(v))
    return Subspace(ctx, D, rows)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class UcsCertificate:
    p: int
    r: int
    n: Subspace = field(repr=False)
    mode: str  # "sweep" | "witness"
    stab_order: int | None
    irreducible_on_V: bool | None
    irreducible_on_PhiModN: bool | None
    conclusion: str  # "UCS" | "NotUCS" | "PositiveOnly" | "Inconclusive"
    generators: list[np.ndarray] = field(default_factory=list, repr=False)
    seed: int = 0

    @property
    def ucs(self) -> bool | None:
        if self.conclusion == "UCS":
            return True
        if self.conclusion == "NotUCS":
            return False
        return None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "n_basis": self.n.basis.tolist(),
            "mode": self.mode,
            "stab_order": self.stab_order,
            "irreducible_on_V": self.irreducible_on_V,
            "irreducible_on_PhiModN": self.irreducible_on_PhiModN,
            "conclusion": self.conclusion,
            "ucs": self.ucs,
            "generators": [g.tolist() for g in self.generators],
            "seed": self.seed,
        }


def _verdict(res) -> bool | None:
    return {"irreducible": True, "reducible": False}.get(res.verdict)


def _irreducibility(p: int, r: int, n: Subspace, gens, seed: int) -> tuple[bool | None, bool | None]:
    ctx = field_make(p)
    gens = list(gens) or [identity(r)]
    on_v = _verdict(is_irreducible(MatModule(ctx, r, gens), seed))
    if n.codim == 0:
        return on_v, False
    phi = MatModule(ctx, n.n, [action_matrix("frattini", g, p) for g in gens]).quotient(n)
    return on_v, _verdict(is_irreducible(phi, seed))


def _as_frattini_subspace(p: int, r: int, n) -> Subspace:
    if isinstance(n, Subspace):
        return n
    return Subspace(field_make(p), frattini_dim(r), n)


def certify_ucs(
    p: int,
    r: int,
    n,
    mode: str = "sweep",
    gens=None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
    stabilizer: StabilizerResult | None = None,
) -> UcsCertificate:
    """Decide (sweep) or confirm (witness) that H_{p,r}/N is UCS."""
    n = _as_frattini_subspace(p, r, n)
    if mode == "sweep":
        res = stabilizer or memo_sweep(r, p, [("frattini", n)], budget, seed, workers, progress)[0]
        res = with_generators(res, p)
        on_v, on_q = _irreducibility(p, r, n, res.gens, seed)
        if on_v is None or on_q is None:
            concl = "Inconclusive"
        else:
            concl = "UCS" if on_v and on_q else "NotUCS"
        return UcsCertificate(p, r, n, "sweep", res.order, on_v, on_q, concl, list(res.gens), seed)
    if mode != "witness":
        raise ValueError(f"unknown mode {mode!r}")
    gens = [np.mod(np.asarray(g, dtype=np.int64), p) for g in (gens or [])]
    for g in gens:
        if not n.is_invariant(action_matrix("frattini", g, p)):
            raise WitnessDoesNotStabilize("a witness generator moves N")
    on_v, on_q = _irreducibility(p, r, n, gens, seed)
    concl = "UCS" if on_v and on_q else "PositiveOnly"
    return UcsCertificate(p, r, n, "witness", None, on_v, on_q, concl, gens, seed)


# ---------------------------------------------------------------------------
# r = 4, exponent p


def witness_generators(p: int, i: int) -> list[np.ndarray] | None:
    """Known subgroups of the stabilizer of U_i (non-degenerate rows only)."""
    ctx = field_make(p)
    table = {
        0: lambda: gl_gens(4, ctx),
        2: lambda: gsp4_gens(p),
        14: lambda: gsp4_gens(p),
        4: lambda: gl2_wr_c2_gens(p),
        16: lambda: gl2_wr_c2_gens(p),
        6: lambda: gammal2sq_gens(p),
        18: lambda: gammal2sq_gens(p),
        11: lambda: gl2_central_prod_gens(p),
    }
    return table[i]().gens if i in table else None


@dataclass
class ClassifyR4:
    p: int
    alpha: int
    rows: list[dict]
    checksum: int | None
    expected_checksum: int | None

    @property
    def ucs_indices(self) -> list[int]:
        return [row["index"] for row in self.rows if row["ucs"]]

    @property
    def dichotomy_holds(self) -> bool:
        return all(row["ucs"] is None or row["ucs"] == (not row["degenerate"]) for row in self.rows)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "alpha": self.alpha,
            "rows": self.rows,
            "checksum": self.checksum,
            "expected_checksum": self.expected_checksum,
            "dichotomy_holds": self.dichotomy_holds,
        }


def classify_r4_exponent_p(
    p: int,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
    printed: bool = False,
) -> ClassifyR4:
    """UCS verdict for every G_i = H_{p,4}/(H^p U_i), i = 0..18."""
    cat = catalog_r4(p, printed)
    ns = [exponent_p_subspace(U) for U in cat.reps]
    rows = []
    try:
        # for odd p the Frattini action is diag(g, ext^2 g) and the y-block is
        # always kept, so Stab(H^p U) = Stab(U) under the cheaper 6-dim action
        results = memo_sweep(4, p, [("exterior", U) for U in cat.reps], budget, seed, workers, progress)
    except BudgetExceeded:
        results = None
    for i, (U, n) in enumerate(zip(cat.reps, ns)):
        row = {"index": i, "dim": U.dim, "degenerate": is_degenerate(U)}
        if results is not None:
            cert = certify_ucs(p, 4, n, "sweep", seed=seed, stabilizer=results[i])
        else:
            gens = witness_generators(p, i)
            cert = certify_ucs(p, 4, n, "witness", gens=gens, seed=seed) if gens is not None else None
        row["mode"] = cert.mode if cert else "none"
        row["stab_order"] = cert.stab_order if cert else None
        row["ucs"] = cert.ucs if cert else None
        row["conclusion"] = cert.conclusion if cert else "NotCertified"
        rows.append(row)
    checksum = expected = None
    if results is not None:
        total = gl_order(4, p)
        checksum = sum(total // results[i].order for i in range(1, 19))
        expected = sum(gaussian_binomial(6, k, p) for k in range(1, 6))
    return ClassifyR4(p, cat.alpha, rows, checksum, expected)


# ---------------------------------------------------------------------------
# orbit equivalence of Frattini subspaces


def orbit_equivalent(r: int, p: int, n1: Subspace, n2: Subspace, batch: int = 1 << 14) -> np.ndarray | None:
    """Some g in GL_r(p) with n1 . A(g) = n2 under the Frattini action, or None."""
    if n1.dim != n2.dim:
        return None
    if n1 == n2:
        return identity(r)
    B1 = n1.basis.astype(np.int64)
    P2 = n2.annihilator().astype(np.int64)
    enum = GLEnumerator(r, p)
    for i in range(len(enum)):
        G = enum.chunk(i)
        for s in range(0, G.shape[0], batch):
            Gs = G[s : s + batch]
            A = act_frattini(Gs, p) % p
            imgs = np.einsum("kd,bde->bke", B1, A) % p
            hit = ~((imgs @ P2) % p).any(axis=(1, 2))
            if hit.any():
                return Gs[np.flatnonzero(hit)[0]]
    return None


# ---------------------------------------------------------------------------
# p = 2, r = 4


P2_R4_LIST = [
    ["y1", "y2", "y3", "y4", "z1*z3", "z2", "z3*z4", "z5", "z6"],
    ["y1", "y2*y3", "y3*z4", "y4", "z1*z3", "z2", "z3*z4", "z5", "z6"],
    ["y1*z1", "y2*z1", "y3", "y4", "z1*z2*z3", "z2*z3*z5", "z3*z4", "z6"],
    ["y1*z1", "y2*z2", "y3*z2", "y4*z1", "z1*z5", "z2*z3*z5", "z3*z4", "z6"],
    ["z1", "z2", "z3", "z4", "z5", "z6"],
    ["y1*z3", "y2", "y3", "y4", "z1*z5", "z6"],
    ["y1*z2", "y2*z5", "y3", "y4", "z1*z6", "z2*z5*z6"],
    ["y1*z2*z4", "y2*y4*z3", "y3*y4*z4", "y4*z1", "z1*z6", "z2*z5*z6"],
    ["y1*z3", "y2*z4", "y3*z4", "y4*z3", "z1*z6", "z2*z5*z6"],
]


@dataclass
class P2Verification:
    rows: list[dict]
    inequivalent_pairs: list[tuple[int, int]]
    equivalent_pairs: list[tuple[int, int]]

    @property
    def all_ucs(self) -> bool:
        return all(row["ucs"] for row in self.rows)

    @property
    def pairwise_inequivalent(self) -> bool:
        return not self.equivalent_pairs

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "all_ucs": self.all_ucs,
            "pairwise_inequivalent": self.pairwise_inequivalent,
            "equivalent_pairs": [list(x) for x in self.equivalent_pairs],
        }


def p2_r4_subspaces() -> list[Subspace]:
    return [relators_to_subspace(2, 4, rel) for rel in P2_R4_LIST]


def verify_p2_r4_list(seed: int = 0, workers: int = 1, progress: bool = False) -> P2Verification:
    ns = p2_r4_subspaces()
    results = memo_sweep(4, 2, [("frattini", n) for n in ns], seed=seed, workers=workers, progress=progress)
    rows = []
    for i, (n, res) in enumerate(zip(ns, results), start=1):
        cert = certify_ucs(2, 4, n, "sweep", seed=seed, stabilizer=res)
        q = Quotient(2, 4, n)
        rows.append(
            {
                "index": i,
                "dim": n.dim,
                "order": q.order,
                "exponent": q.exponent,
                "abelian": q.is_abelian,
                "stab_order": cert.stab_order,
                "ucs": cert.ucs,
            }
        )
    ineq, eq = [], []
    for i, j in combinations(range(len(ns)), 2):
        # different dimensions or stabilizer orders already separate the orbits
        if ns[i].dim != ns[j].dim or results[i].order != results[j].order:
            ineq.append((i + 1, j + 1))
            continue
        g = orbit_equivalent(4, 2, ns[i], ns[j])
        (eq if g is not None else ineq).append((i + 1, j + 1))
    return P2Verification(rows, ineq, eq)


# ---------------------------------------------------------------------------
# exponent p^2 constructions


def construct_exponent_p2(p: int, K: MatModule, M: Subspace, iso) -> Quotient:
    """N = {(v, iso(v))} + (0 + M) for a K-isomorphism V -> ext^2 V / M."""
    if p == 2:
        raise EvenCharacteristic("construct_exponent_p2 needs odd p")
    ctx = K.ctx
    r = K.dim
    m = r * (r - 1) // 2
    E = K.exterior_square()
    for e in E.gens:
        if not M.is_invariant(e):
            raise NotInvariant("M is not invariant under the exterior square action")
    X = np.mod(np.asarray(iso, dtype=np.int64), p).reshape(r, m)
    stacked = np.concatenate([X, M.basis]) if M.dim else X
    if rank(ctx, stacked) != r + M.dim or r + M.dim != m:
        raise NotIso("iso does not induce a bijection onto ext^2 V / M")
    for g, e in zip(K.gens, E.gens):
        diff = ctx.sub(ctx.matmul(g, X), ctx.matmul(X, e))
        if (M.reduce(diff) if M.dim else diff).any():
            raise NotIso("iso does not intertwine modulo M")
    D = frattini_dim(r)
    rows = np.zeros((r + M.dim, D), dtype=np.int64)
    rows[:r, :r] = identity(r)
    rows[:r, r:] = X
    if M.dim:
        rows[r:, r:] = M.basis
    return Quotient(p, r, Subspace(ctx, D, rows))


def g4_subspace(p: int) -> Subspace:
    return relators_to_subspace(p, 3, ["x1^p [x2,x3]^-1", "x2^p [x3,x1]^-1", "x3^p [x1,x2]^-1"])


G1_EXPSQUARE_RELATORS = [
    "x1^p [x1,x3][x4,x1][x2,x3]^2[x4,x2]^2[x4,x3]^2",
    "x2^p [x2,x1][x3,x1]^2[x4,x1]^2[x3,x2][x3,x4]^2",
    "x3^p [x2,x1]^2[x1,x4]^2[x2,x3][x2,x4]^2[x3,x4]",
    "x4^p [x1,x2]^2[x1,x3]^2[x1,x4][x3,x2]^2[x4,x2]",
    "[x1,x2][x1,x4][x3,x4]",
    "[x1,x3][x2,x3][x2,x4]",
]


def expsquare_g1_subspace(p: int) -> Subspace:
    return relators_to_subspace(p, 4, G1_EXPSQUARE_RELATORS)


# small named quotients: name -> (p, r, relators); "p" in a relator is this p
NAMED_GROUPS: dict[str, tuple[int, int, list[str]]] = {
    "Q8": (2, 2, ["x1^2 [x2,x1]", "x2^2 [x2,x1]"]),
    "D8": (2, 2, ["x1^2", "x2^2 [x1,x2]"]),
    "C4^2": (2, 2, ["[x1,x2]"]),
    "G1_2": (2, 3, ["x1^2[x1,x2][x1,x3][x2,x3]", "x2^2[x1,x2][x1,x3]", "x3^2[x1,x2]"]),
    "G2": (3, 2, ["x1^p", "x2^p"]),
    "G3": (3, 3, ["x1^p", "x2^p", "x3^p"]),
    "G4": (3, 3, ["x1^p [x2,x3]^-1", "x2^p [x3,x1]^-1", "x3^p [x1,x2]^-1"]),
    "C4^4": (2, 4, ["[x1,x2]", "[x1,x3]", "[x1,x4]", "[x2,x3]", "[x2,x4]", "[x3,x4]"]),
    "G1_exp": (3, 4, G1_EXPSQUARE_RELATORS),
}


def named_quotient(name: str, p: int | None = None) -> Quotient:
    """Quotient for a NAMED_GROUPS entry; p overrides the default prime where that makes sense."""
    p0, r, rels = NAMED_GROUPS[name]
    return Quotient.from_relators(p or p0, r, rels)


@dataclass
class Thm72Result:
    p: int
    classes: list[dict]
    n_candidates: int
    fixed_space: Subspace = field(repr=False)
    representatives: list[Subspace] = field(default_factory=list, repr=False)
    certificates: list[UcsCertificate] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {"p": self.p, "n_candidates": self.n_candidates, "classes": self.classes}


def _lift_quotient(C: Subspace, X: np.ndarray) -> np.ndarray:
    """Rows of X (coordinates on the non-pivot unit vectors of C) as vectors of the ambient."""
    out = np.zeros(X.shape[:-1] + (C.n,), dtype=np.int64)
    out[..., C.nonpivots()] = X
    return out


def _thm72_setup(p: int) -> tuple[np.ndarray, np.ndarray, Subspace]:
    """(a, a^a, C) with a of order 5 in GL_4(p) and C the fixed space of a^a."""
    if p % 5 not in (2, 3):
        raise WrongResidue(f"p = {p} is not +-2 mod 5")
    ctx = field_make(p)
    a = cyclic_companion(5, 4, ctx).gens[0]
    A2 = exterior_square_matrix(ctx, a)
    C = Subspace(ctx, 6, left_nullspace(ctx, ctx.sub(A2, identity(6))))
    return a, A2, C


def prefetch_r4_sweeps(
    p: int = 3,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
    extra: Sequence[tuple[str, Subspace]] = (),
) -> None:
    """Run one GL_4(p) pass covering classify_r4_exponent_p, the printed G1,
    thm72_family and any ``extra`` (action, subspace) targets, so later calls
    hit the sweep memo."""
    targets = [("exterior", U) for U in catalog_r4(p).reps] + list(extra)
    targets.append(("frattini", expsquare_g1_subspace(p)))
    if p % 5 in (2, 3):
        targets.append(("exterior", _thm72_setup(p)[2]))
    memo_sweep(4, p, targets, budget, seed, workers, progress)


def thm72_family(
    p: int,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
) -> Thm72Result:
    """Isomorphism classes of the groups H_{p,4}/N_phi for an order-5 automorphism.

    The candidates N_phi = {(v, phi(v))} + C are indexed by the invertible
    <a>-maps phi: V -> ext^2 V / C, C the fixed space of a^a.  Two candidates
    give isomorphic groups iff some g in GL_4(p) maps one onto the other; such
    g stabilize C, so the search runs over the stabilizer of C only.
    """
    ctx = field_make(p)
    a, A2, C = _thm72_setup(p)
    Abar = C.quotient_action(A2)
    H = hom_space(MatModule(ctx, 4, [a]), MatModule(ctx, C.codim, [Abar]))
    h = len(H)
    codes = np.arange(1, p**h, dtype=np.int64)
    coef = (codes[:, None] // p ** np.arange(h)) % p
    Xs = np.mod(np.einsum("nh,hij->nij", coef, np.stack(H)), p)
    Xs = Xs[batch_rank(ctx, Xs) == 4]
    n_cand = Xs.shape[0]
    weights = p ** np.arange(16, dtype=np.int64)
    keys = Xs.reshape(n_cand, 16) @ weights
    index = {int(k): i for i, k in enumerate(keys)}

    sc = memo_sweep(4, p, [("exterior", C)], budget, seed, workers, progress)[0]
    G = sc.elements
    Ginv = batch_inverse(ctx, G)
    E2 = np.mod(exterior_square_int(G), p)
    comp, piv = C.nonpivots(), C.pivots
    Gbar = E2[:, comp][:, :, comp]
    if piv:
        Gbar = np.mod(Gbar - E2[:, comp][:, :, piv] @ C.basis[:, comp], p)
    # psi = g^-1 phi gbar is the image of N_phi under g
    parent = list(range(n_cand))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    stab_members: list[list[int]] = [[] for _ in range(n_cand)]
    for s in range(0, G.shape[0], 512):
        Psi = np.mod(np.einsum("gij,njk,gkl->gnil", Ginv[s : s + 512], Xs, Gbar[s : s + 512]), p)
        pk = Psi.reshape(Psi.shape[0], n_cand, 16) @ weights
        for gi, row in enumerate(pk):
            for ni, k in enumerate(row):
                j = index.get(int(k))
                if j is None:
                    continue
                if j == ni:
                    stab_members[ni].append(s + gi)
                else:
                    ra, rb = find(ni), find(j)
                    if ra != rb:
                        parent[ra] = rb
    classes: dict[int, list[int]] = {}
    for i in range(n_cand):
        classes.setdefault(find(i), []).append(i)

    def n_of(i: int) -> Subspace:
        rows = np.zeros((4 + C.dim, 10), dtype=np.int64)
        rows[:4, :4] = identity(4)
        rows[:4, 4:] = _lift_quotient(C, Xs[i])
        rows[4:, 4:] = C.basis
        return Subspace(ctx, 10, rows)

    g1 = expsquare_g1_subspace(p)
    out, reps, certs = [], [], []
    for members in sorted(classes.values(), key=lambda m: (len(m), m[0])):
        i = members[0]
        elems = G[stab_members[i]]
        stab = StabilizerResult(len(elems), elems, complete=True)
        stab.gens = greedy_generators(ctx, elems, len(elems))
        n = n_of(i)
        cert = certify_ucs(p, 4, n, "sweep", seed=seed, stabilizer=stab)
        q = Quotient(p, 4, n)
        contains_g1 = any(n_of(j) == g1 for j in members)
        out.append(
            {
                "size": len(members),
                "stab_order": stab.order,
                "ucs": cert.ucs,
                "order": q.order,
                "exponent": q.exponent,
                "contains_printed_g1": contains_g1,
            }
        )
        reps.append(n)
        certs.append(cert)
    return Thm72Result(p, out, n_cand, C, reps, certs)
