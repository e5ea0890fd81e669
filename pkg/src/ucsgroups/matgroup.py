"""Matrix groups given by generators: closure, order and generator selection.

Closure enumeration (breadth-first over products) is the reference order
computation.  Groups too large to enumerate fall back to Schreier-Sims on
the faithful permutation action on nonzero vectors (via sympy).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import BudgetExceeded
from .finfield import FieldCtx
from .linalg import asarray

CLOSURE_CAP = 10**7


def encode(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    """Injective int64 codes for a stack of square matrices (small q^(d^2))."""
    mats = np.asarray(mats, dtype=np.int64)
    d2 = mats.shape[-1] * mats.shape[-2]
    if ctx.q ** d2 >= 2**63:
        raise ValueError("matrices too large for integer codes")
    w = ctx.q ** np.arange(d2, dtype=np.int64)
    return mats.reshape(mats.shape[:-2] + (d2,)) @ w


def decode(ctx: FieldCtx, codes: np.ndarray, d: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    w = ctx.q ** np.arange(d * d, dtype=np.int64)
    return ((codes[..., None] // w) % ctx.q).reshape(codes.shape + (d, d))


def _keys(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    """Sortable keys: int64 codes when they fit, else raw row bytes."""
    mats = np.asarray(mats, dtype=np.int64)
    d2 = mats.shape[-1] * mats.shape[-2]
    if ctx.q**d2 < 2**63:
        return encode(ctx, mats)
    flat = np.ascontiguousarray(mats.reshape(mats.shape[:-2] + (d2,)).astype(np.int32))
    return flat.view(np.dtype((np.void, 4 * d2))).reshape(mats.shape[:-2])


def closure(ctx: FieldCtx, gens: Sequence, cap: int = CLOSURE_CAP) -> np.ndarray:
    """All elements (as a (N, d, d) array) of the group generated by gens."""
    gens = [asarray(ctx, g) for g in gens]
    d = gens[0].shape[0] if gens else 0
    ident = np.eye(d, dtype=np.int64)[None]
    seen = np.sort(_keys(ctx, ident))
    frontier = ident
    out = [ident]
    while frontier.shape[0]:
        imgs = np.concatenate([ctx.matmul(frontier, g) for g in gens])
        codes = _keys(ctx, imgs)
        codes, first = np.unique(codes, return_index=True)
        fresh = ~np.isin(codes, seen, assume_unique=True)
        frontier = imgs[first[fresh]]
        seen = np.union1d(seen, codes[fresh])
        if seen.size > cap:
            raise BudgetExceeded(f"closure exceeds {cap} elements")
        out.append(frontier)
    return np.concatenate(out)


def closure_order(ctx: FieldCtx, gens: Sequence, cap: int = CLOSURE_CAP) -> int:
    return int(closure(ctx, gens, cap).shape[0])


def _vector_permutation(ctx: FieldCtx, g: np.ndarray) -> list[int]:
    d = g.shape[0]
    codes = np.arange(1, ctx.q**d, dtype=np.int64)
    vecs = (codes[:, None] // ctx.q ** np.arange(d)) % ctx.q
    imgs = ctx.matmul(vecs, g)
    return list((imgs @ ctx.q ** np.arange(d) - 1).tolist())


def perm_group(ctx: FieldCtx, gens: Sequence):
    """sympy PermutationGroup of the action on nonzero row vectors."""
    from sympy.combinatorics import Permutation, PermutationGroup

    gens = [asarray(ctx, g) for g in gens]
    return PermutationGroup([Permutation(_vector_permutation(ctx, g)) for g in gens])


def group_order(ctx: FieldCtx, gens: Sequence, cap: int = 10**6) -> int:
    """Order by closure when small, else by Schreier-Sims."""
    gens = [asarray(ctx, g) for g in gens]
    if not gens:
        return 1
    try:
        return closure_order(ctx, gens, cap)
    except BudgetExceeded:
        return int(perm_group(ctx, gens).order())


def greedy_generators(ctx: FieldCtx, elements: np.ndarray, order: int) -> list[np.ndarray]:
    """Pick elements, in the given order, until they generate a group of the given order."""
    elements = np.asarray(elements, dtype=np.int64)
    d = elements.shape[-1]
    gens: list[np.ndarray] = []
    if order == 1:
        return gens
    if order <= 10**6:
        members = np.sort(_keys(ctx, np.eye(d, dtype=np.int64)[None]))
        for e in elements:
            if np.isin(_keys(ctx, e[None]), members).all():
                continue
            gens.append(e)
            members = np.sort(_keys(ctx, closure(ctx, gens)))
            if members.size == order:
                return gens
    else:
        from sympy.combinatorics import Permutation, PermutationGroup

        G = None
        for e in elements:
            perm = Permutation(_vector_permutation(ctx, e))
            if G is not None and G.contains(perm):
                continue
            gens.append(e)
            G = PermutationGroup(([*G.generators] if G is not None else []) + [perm])
            if G.order() == order:
                return gens
    raise BudgetExceeded("sampled elements do not generate a group of the expected order")
