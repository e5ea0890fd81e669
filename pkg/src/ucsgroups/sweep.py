"""Exhaustive stabilizer sweeps over GL_r(p).

GL_r(p) is enumerated once, partitioned by first row: for every
(r-1) x r bottom block the cofactors along the first row are precomputed,
so a matrix with first row v is invertible iff v . cof != 0 (mod p).

A subspace U (basis B, annihilator P) is stabilized by an action matrix A
iff B A P = 0.  Flattening A turns this into one dot product per
(basis vector, annihilator column) pair, so many targets are tested with a
single float matrix product per batch.  Entries stay far below 2^53, so
the float arithmetic is exact.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from itertools import permutations
from math import prod
from typing import Callable, Sequence, Union

import numpy as np

from .errors import BudgetExceeded
from .finfield import FieldCtx, field_make
from .linalg import Subspace
from .matgroup import greedy_generators
from .pclass2 import frattini_dim, pairs
from .rep import exterior_square_int

DEFAULT_BUDGET = 30_000_000
_BATCH = 1 << 16
_MIX = np.uint64(0x9E3779B97F4A7C15)

ActionKind = Union[str, Callable[[np.ndarray, int], np.ndarray]]


def gl_order(r: int, q: int) -> int:
    return prod(q**r - q**i for i in range(r))


# ---------------------------------------------------------------------------
# actions on stacks of matrices (B, r, r) -> (B, n, n), integer entries


def act_natural(G: np.ndarray, p: int) -> np.ndarray:
    return G


def act_exterior(G: np.ndarray, p: int) -> np.ndarray:
    return np.mod(exterior_square_int(G), p)


def act_block(G: np.ndarray, p: int) -> np.ndarray:
    """diag(g, ext^2 g)."""
    B, r, _ = G.shape
    D = frattini_dim(r)
    A = np.zeros((B, D, D), dtype=np.int64)
    A[:, :r, :r] = G
    A[:, r:, r:] = act_exterior(G, p)
    return A


def act_frattini(G: np.ndarray, p: int) -> np.ndarray:
    """Induced action on Phi(H_{p,r}); for p = 2 the y-rows carry z-terms."""
    A = act_block(G, p)
    if p == 2:
        r = G.shape[1]
        for i in range(r):
            for t, (j, k) in enumerate(pairs(r)):
                A[:, i, r + t] = (G[:, i, j] * G[:, i, k]) % 2
    return A


ACTIONS: dict[str, Callable[[np.ndarray, int], np.ndarray]] = {
    "natural": act_natural,
    "exterior": act_exterior,
    "natural+exterior": act_block,
    "frattini": act_frattini,
}


def action_dim(kind: ActionKind, r: int) -> int:
    if kind == "natural":
        return r
    if kind == "exterior":
        return r * (r - 1) // 2
    if kind in ("natural+exterior", "frattini"):
        return frattini_dim(r)
    return int(kind(np.eye(r, dtype=np.int64)[None], 2).shape[-1])


def action_matrix(kind: ActionKind, g: np.ndarray, p: int) -> np.ndarray:
    fn = ACTIONS[kind] if isinstance(kind, str) else kind
    return np.mod(fn(np.asarray(g, dtype=np.int64)[None], p)[0], p)


# ---------------------------------------------------------------------------
# enumeration


def _leibniz_det(M: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack (B, n, n) by the permutation expansion."""
    B, n, _ = M.shape
    if n == 0:
        return np.ones(B, dtype=np.int64)
    total = np.zeros(B, dtype=np.int64)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = np.ones(B, dtype=np.int64)
        for i, j in enumerate(perm):
            term = term * M[:, i, j] % p
        total = (total - term) % p if inv % 2 else (total + term) % p
    return total


class GLEnumerator:
    """Partition of GL_r(p) by first row."""

    def __init__(self, r: int, p: int):
        self.r, self.p = r, p
        nb = p ** (r * (r - 1))
        codes = np.arange(nb, dtype=np.int64)
        w = p ** np.arange(r * (r - 1), dtype=np.int64)
        self.bottoms = ((codes[:, None] // w) % p).reshape(nb, r - 1, r).astype(np.int8)
        cof = np.zeros((nb, r), dtype=np.int64)
        b64 = self.bottoms.astype(np.int64)
        for j in range(r):
            minor = np.delete(b64, j, axis=2)
            cof[:, j] = (-1) ** j * _leibniz_det(minor, p)
        self.cof = np.mod(cof, p).astype(np.float64)
        # transposed float copy of the bottom rows: column b is bottom block b
        self.bottoms_t = np.ascontiguousarray(b64.reshape(nb, -1).T).astype(np.float32)
        vcodes = np.arange(1, p**r, dtype=np.int64)
        self.first_rows = (vcodes[:, None] // p ** np.arange(r)) % p

    def __len__(self) -> int:
        return self.first_rows.shape[0]

    def chunk_t(self, i: int) -> np.ndarray:
        """Invertible matrices with the i-th first row as columns of (r*r, N)."""
        v = self.first_rows[i]
        ok = np.flatnonzero(np.mod(self.cof @ v, self.p) != 0)
        XT = np.empty((self.r * self.r, ok.size), dtype=np.float32)
        XT[: self.r] = v[:, None]
        XT[self.r :] = self.bottoms_t[:, ok]
        return XT

    def chunk(self, i: int) -> np.ndarray:
        """Invertible matrices with the i-th first row, shape (N, r, r)."""
        XT = self.chunk_t(i)
        return XT.T.astype(np.int64).reshape(-1, self.r, self.r)


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class StabilizerResult:
    order: int
    sample: np.ndarray = field(repr=False)
    complete: bool = False
    gens: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def elements(self) -> np.ndarray:
        if not self.complete:
            raise ValueError("only a sample of the stabilizer was kept")
        return self.sample


class _Keeper:
    """Deterministic pseudo-random sample: the elements with smallest hash key."""

    def __init__(self, p: int, r: int, keep: int, seed: int):
        self.p, self.r, self.keep = p, r, keep
        self.salt = np.uint64((seed * 0x5851F42D4C957F2D + 1) % 2**64)
        self.w = (p ** np.arange(r * r, dtype=np.int64)).astype(np.uint64)
        self.keys = np.zeros(0, dtype=np.uint64)
        self.elems = np.zeros((0, r, r), dtype=np.int8)
        self.count = 0

    def add(self, E: np.ndarray) -> None:
        if not E.shape[0]:
            return
        self.count += E.shape[0]
        codes = E.reshape(E.shape[0], -1).astype(np.uint64) @ self.w
        with np.errstate(over="ignore"):
            keys = (codes ^ self.salt) * _MIX
            keys ^= keys >> np.uint64(29)
        self.keys = np.concatenate([self.keys, keys])
        self.elems = np.concatenate([self.elems, E.astype(np.int8)])
        if self.keys.size > 2 * self.keep:
            self._trim()

    def _trim(self) -> None:
        if self.keys.size > self.keep:
            idx = np.argpartition(self.keys, self.keep)[: self.keep]
            self.keys, self.elems = self.keys[idx], self.elems[idx]

    def result(self) -> StabilizerResult:
        self._trim()
        order = np.argsort(self.keys, kind="stable")
        sample = self.elems[order].astype(np.int64)
        return StabilizerResult(self.count, sample, complete=self.count == sample.shape[0])


def _target_matrix(sub: Subspace, p: int) -> np.ndarray:
    """K with vec(A) @ K = vec(B A P) for the basis B and annihilator P of sub."""
    n = sub.n
    if sub.dim in (0, n):
        return np.zeros((n * n, 0), dtype=np.int64)
    Bm = sub.basis
    P = sub.annihilator()
    return np.einsum("ui,jc->ijuc", Bm, P).reshape(n * n, -1) % p


def _features(kind: ActionKind, r: int, p: int):
    """Entries of the action matrix that can be nonzero, as rows of a (F, B) array.

    Returns (flat positions i*n + j, function of the transposed stack
    XT with XT[i*r + j] = g_ij).  Values are unreduced integers.
    """
    if not isinstance(kind, str):
        n = action_dim(kind, r)

        def custom(XT):
            G = np.rint(XT.T).astype(np.int64).reshape(-1, r, r)
            return np.mod(kind(G, p), p).reshape(G.shape[0], n * n).T.astype(XT.dtype)

        return np.arange(n * n), custom
    from .rep import _ext_indices

    I, J, K, L = _ext_indices(r)
    ia, ib, ic, id_ = I * r + K, J * r + L, I * r + L, J * r + K
    m = r * (r - 1) // 2
    if kind == "natural":
        return np.arange(r * r), lambda XT: XT
    if kind == "exterior":
        return np.arange(m * m), lambda XT: XT[ia] * XT[ib] - XT[ic] * XT[id_]
    D = frattini_dim(r)
    nat = np.array([i * D + j for i in range(r) for j in range(r)])
    ext = np.array([(r + s) * D + (r + t) for s in range(m) for t in range(m)])
    pos = [nat, ext]
    extra_a, extra_b = [], []
    if kind == "frattini" and p == 2:
        extra = []
        for i in range(r):
            for t, (j, k) in enumerate(pairs(r)):
                extra.append(i * D + r + t)
                extra_a.append(i * r + j)
                extra_b.append(i * r + k)
        pos.append(np.array(extra))
    ea, eb = np.array(extra_a, dtype=np.int64), np.array(extra_b, dtype=np.int64)

    def block(XT):
        parts = [XT, XT[ia] * XT[ib] - XT[ic] * XT[id_]]
        if ea.size:
            parts.append(XT[ea] * XT[eb])
        return np.concatenate(parts)

    return np.concatenate(pos), block


def sweep_stabilizers(
    r: int,
    p: int,
    targets: Sequence[tuple[ActionKind, Subspace]],
    budget: int = DEFAULT_BUDGET,
    keep: int = 1 << 17,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
) -> list[StabilizerResult]:
    """Stabilizer in GL_r(p) of each (action, subspace) target, in one pass."""
    total = gl_order(r, p)
    if total > budget:
        raise BudgetExceeded(f"|GL_{r}({p})| = {total} exceeds the budget {budget}")
    if workers > 1:
        return _sweep_parallel(r, p, targets, keep, seed, workers, progress)
    enum = GLEnumerator(r, p)
    keepers = [_Keeper(p, r, keep, seed) for _ in targets]
    _sweep_rows(enum, range(len(enum)), targets, keepers, progress)
    return [k.result() for k in keepers]


def _prepare(targets, r, p):
    groups: dict = {}
    for t, (kind, sub) in enumerate(targets):
        groups.setdefault(kind if isinstance(kind, str) else id(kind), (kind, []))[1].append((t, sub))
    prepared = []
    for kind, items in groups.values():
        pos, fn = _features(kind, r, p)
        mats = [_target_matrix(sub, p)[pos] for _, sub in items]
        bounds = np.cumsum([0] + [m.shape[1] for m in mats])
        K = np.concatenate(mats, axis=1)
        n = items[0][1].n
        # exact when every partial sum stays below the float mantissa
        dtype = np.float32 if len(pos) * (p - 1) ** 3 * max(1, n) < 2**24 else np.float64
        prepared.append((fn, [t for t, _ in items], np.ascontiguousarray(K.T).astype(dtype), bounds, dtype))
    return prepared


def _sweep_rows(enum: GLEnumerator, rows, targets, keepers, progress: bool) -> None:
    p, r = enum.p, enum.r
    prepared = _prepare(targets, r, p)
    rows = list(rows)
    for step, i in enumerate(rows):
        XT_all = enum.chunk_t(i)
        N = XT_all.shape[1]
        for s in range(0, N, _BATCH):
            XT = XT_all[:, s : s + _BATCH]
            Gb = None
            for fn, tids, KT, bounds, dtype in prepared:
                if KT.shape[0]:
                    R = np.mod(KT @ fn(XT.astype(dtype, copy=False)), p) != 0
                for t, lo, hi in zip(tids, bounds[:-1], bounds[1:]):
                    if hi == lo:
                        mask = slice(None)
                    else:
                        mask = ~R[lo:hi].any(axis=0)
                        if not mask.any():
                            continue
                    if Gb is None:
                        Gb = XT.T.astype(np.int64).reshape(-1, r, r)
                    keepers[t].add(Gb[mask])
        if progress and (step % 8 == 0 or step == len(rows) - 1):
            print(f"  sweep GL_{r}({p}): first row {step + 1}/{len(rows)}", file=sys.stderr)


_PAR_STATE: dict = {}


def _par_worker(rows):
    r, p, targets, keep, seed = _PAR_STATE["args"]
    enum = _PAR_STATE.setdefault("enum", GLEnumerator(r, p))
    keepers = [_Keeper(p, r, keep, seed) for _ in targets]
    _sweep_rows(enum, rows, targets, keepers, False)
    return [(k.count, k.keys, k.elems) for k in keepers]


def _sweep_parallel(r, p, targets, keep, seed, workers, progress):
    import multiprocessing as mp

    _PAR_STATE.clear()
    _PAR_STATE["args"] = (r, p, targets, keep, seed)
    n_rows = p**r - 1
    parts = [list(range(i, n_rows, workers * 4)) for i in range(workers * 4)]
    ctx = mp.get_context("fork")
    with ctx.Pool(workers) as pool:
        outs = pool.map(_par_worker, parts)
    keepers = [_Keeper(p, r, keep, seed) for _ in targets]
    for out in outs:
        for k, (count, keys, elems) in zip(keepers, out):
            k.count += count
            k.keys = np.concatenate([k.keys, keys])
            k.elems = np.concatenate([k.elems, elems])
            k._trim()
    if progress:
        print(f"  sweep GL_{r}({p}): done with {workers} workers", file=sys.stderr)
    return [k.result() for k in keepers]


def stabilizer_sweep(
    r: int,
    ctx: FieldCtx | int,
    action: ActionKind,
    target: Subspace,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
) -> StabilizerResult:
    """Exact order of GL_r(p)_U plus a verified generating set."""
    p = ctx if isinstance(ctx, int) else ctx.p
    res = sweep_stabilizers(r, p, [(action, target)], budget, seed=seed, workers=workers, progress=progress)[0]
    res.gens = greedy_generators(field_make(p), res.sample, res.order)
    return res


def with_generators(res: StabilizerResult, p: int) -> StabilizerResult:
    if not res.gens and res.order > 1:
        res.gens = greedy_generators(field_make(p), res.sample, res.order)
    return res


def stabilizes(kind: ActionKind, g: np.ndarray, sub: Subspace, p: int) -> bool:
    return sub.is_invariant(action_matrix(kind, g, p))


# ---------------------------------------------------------------------------
# per-process memo so several drivers can share one pass over GL_r(p)

_MEMO: dict = {}


def _memo_key(r: int, p: int, kind, sub: Subspace, seed: int):
    if not isinstance(kind, str):
        return None
    return (r, p, kind, sub.n, sub.key(), seed)


def memo_sweep(
    r: int,
    p: int,
    targets: Sequence[tuple[ActionKind, Subspace]],
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    workers: int = 1,
    progress: bool = False,
) -> list[StabilizerResult]:
    """sweep_stabilizers with results remembered per (r, p, action, subspace, seed).

    Targets not seen before are computed together in a single pass.
    """
    keys = [_memo_key(r, p, kind, sub, seed) for kind, sub in targets]
    todo: list[int] = []
    pending: set = set()
    for t, key in enumerate(keys):
        if key is None or (key not in _MEMO and key not in pending):
            todo.append(t)
            pending.add(key if key is not None else ("anon", t))
    out: dict[int, StabilizerResult] = {}
    if todo:
        res = sweep_stabilizers(r, p, [targets[t] for t in todo], budget, seed=seed, workers=workers, progress=progress)
        for t, rr in zip(todo, res):
            if keys[t] is None:
                out[t] = rr
            else:
                _MEMO[keys[t]] = rr
    return [out[t] if keys[t] is None else _MEMO[keys[t]] for t in range(len(targets))]


def clear_memo() -> None:
    _MEMO.clear()
