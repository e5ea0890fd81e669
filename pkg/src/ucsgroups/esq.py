"""Exterior self-quotient checks in dimension 5.

A minimal irreducible ESQ subgroup of GL_5(q) is either cyclic of order 11
(when ord_11(q) = 5) or the order-55 Frobenius group. The scan below builds
whichever of those the congruences allow and verifies each witness. For
q in {7, 13} it also runs the A_4 exclusion over all faithful 5-dim modules.
"""

from __future__ import annotations

import numpy as np

from .finfield import FieldCtx, element_of_order, factorint, field_make, min_poly_over_prime, ord_mod
from .grpgen import _field_from_q, a4_modules_311, companion, cyclic_companion, frob55_gens
from .rep import MatModule, esq_witness, is_irreducible, verify_esq_witness

__all__ = ["order11_module", "esq_row", "esq_scan_dim5", "A4_FIELDS"]

A4_FIELDS = (7, 13)


def order11_module(ctx: FieldCtx) -> MatModule | None:
    """Cyclic group of order 11 acting irreducibly on F_q^5, if we can build it.

    Over F_p this is cyclic_companion. Over F_{p^k} the companion matrix of a
    quintic over F_p still works when ord_11(p) = 5; the case ord_11(p) = 10
    would need arithmetic over an intermediate field and is not constructed.
    """
    if ctx.k == 1:
        return cyclic_companion(11, 5, ctx)
    if ord_mod(ctx.p, 11) != 5:
        return None
    E = field_make(ctx.p, 5)
    C = np.mod(companion(min_poly_over_prime(E, element_of_order(E, 11))), ctx.p)
    return MatModule(ctx, 5, [C])


def esq_row(m: MatModule, seed: int = 0) -> dict:
    res = esq_witness(m, seed)
    irr = is_irreducible(m, seed)
    row = {
        "dim": m.dim,
        "esq": res.verdict,
        "hom_dim": res.hom_dim,
        "irreducible": irr.verdict,
        "witness_verified": bool(res.is_esq and verify_esq_witness(m, res)),
    }
    if res.is_esq:
        row["witness"] = res.to_json()
    return row


def esq_scan_dim5(q: int, seed: int = 0) -> dict:
    """Report which dimension-5 ESQ constructions exist over F_q."""
    ctx = _field_from_q(q)
    (p, _), = factorint(q).items()
    out: dict = {"q": q, "p": p}
    ord11 = ord_mod(q, 11) if p != 11 else None
    out["ord11"] = ord11

    row11: dict = {"predicted": ord11 == 5}
    if ord11 == 5:
        m = order11_module(ctx)
        row11["constructed"] = m is not None
        if m is not None:
            row11.update(esq_row(m, seed))
    out["order11"] = row11

    row55: dict = {"predicted": ord11 == 1}
    if ord11 == 1:
        row55["constructed"] = True
        row55.update(esq_row(frob55_gens(ctx), seed))
    out["order55"] = row55

    if q in A4_FIELDS:
        mods = []
        for (i, j), m in a4_modules_311(ctx):
            res = esq_witness(m, seed)
            mods.append({"characters": [i, j], "esq": res.verdict, "hom_dim": res.hom_dim})
        out["a4"] = {"modules": mods, "none_esq": all(r["esq"] == "not_esq" for r in mods)}
    return out
