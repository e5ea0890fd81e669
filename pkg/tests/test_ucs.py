from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucsgroups.aut import aut_oracle
from ucsgroups.errors import NotInvariant, NotIso, WitnessDoesNotStabilize
from ucsgroups.finfield import field_make
from ucsgroups.forms import is_degenerate, klein_gram, perp, q_value
from ucsgroups.grpgen import agl1_5_gens, gl_gens, gsp4_gens, so3_gens
from ucsgroups.linalg import Subspace
from ucsgroups.pclass2 import Quotient, relators_to_subspace
from ucsgroups.sweep import memo_sweep
from ucsgroups.ucs import (
    P2_R4_LIST,
    catalog_r4,
    certify_ucs,
    construct_exponent_p2,
    exponent_p_subspace,
    expsquare_g1_subspace,
    gaussian_binomial,
    named_quotient,
    witness_generators,
    zvec,
)

DEGENERATE = [1, 3, 5, 7, 8, 9, 10, 12, 13, 15, 17]


def _gaussian_brute(n, k, q):
    # count k-dim subspaces of F_q^n by counting ordered bases
    num = den = 1
    for i in range(k):
        num *= q**n - q**i
        den *= q**k - q**i
    return num // den


def _zeros_of_q(U):
    p = U.ctx.p
    return sum(q_value(np.mod(np.array(c) @ U.basis, p), p) == 0 for c in product(range(p), repeat=U.dim))


def test_q_value_and_gram():
    assert q_value([1, 0, 0, 0, 0, 1], 5) == 1
    G = klein_gram(5)
    rng = np.random.default_rng(1)
    for _ in range(200):
        x, y = rng.integers(0, 5, 6), rng.integers(0, 5, 6)
        assert int(x @ G @ y) % 5 == (q_value(x + y, 5) - q_value(x, 5) - q_value(y, 5)) % 5


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.data())
def test_perp_involution(p, data):
    F = field_make(p)
    vecs = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=6, max_size=6), max_size=6))
    U = Subspace(F, 6, vecs)
    W = perp(U)
    assert U.dim + W.dim == 6
    assert perp(W) == U
    assert is_degenerate(U) == (U.intersection(W).dim > 0)


def test_perp_full_is_zero():
    F = field_make(3)
    assert perp(Subspace.full(F, 6)).dim == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_catalog(p):
    cat = catalog_r4(p)
    assert cat.dims == [0, 5, 5, 4, 4, 4, 4, 3, 3, 3, 3, 3, 3, 1, 1, 2, 2, 2, 2]
    assert cat.degenerate() == DEGENERATE
    for i in range(1, 7):
        assert cat[i + 12] == perp(cat[i])
    assert cat[14] == Subspace(field_make(p), 6, [zvec(p, {(1, 2): 1, (3, 4): 1})])


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_u12_sign(p):
    # one-dim radical; Q vanishes only on the radical iff the rank-2 part is anisotropic
    fixed, printed = catalog_r4(p)[12], catalog_r4(p, printed=True)[12]
    for U in (fixed, printed):
        assert U.intersection(perp(U)).dim == 1
    assert _zeros_of_q(fixed) == p
    alpha_square = pow(catalog_r4(p).alpha, (p - 1) // 2, p) == 1
    assert (_zeros_of_q(printed) > p) == alpha_square


def test_gaussian_binomial():
    for n, k, q in [(6, 1, 3), (6, 2, 3), (6, 3, 3), (4, 2, 5)]:
        assert gaussian_binomial(n, k, q) == _gaussian_brute(n, k, q)
    assert sum(gaussian_binomial(6, k, 3) for k in range(1, 6)) == 56630


def test_certify_small_sweeps():
    q8 = certify_ucs(2, 2, named_quotient("Q8").n)
    assert (q8.conclusion, q8.stab_order, q8.mode) == ("UCS", 6, "sweep")
    g4 = certify_ucs(3, 3, named_quotient("G4").n)
    assert (g4.conclusion, g4.stab_order) == ("UCS", 24)
    d8 = certify_ucs(2, 2, named_quotient("D8").n)
    assert d8.conclusion == "NotUCS"


@pytest.mark.parametrize("name", ["Q8", "D8", "C4^2", "G2", "G1_2"])
def test_sweep_agrees_with_aut_oracle(name):
    q = named_quotient(name)
    assert certify_ucs(q.p, q.r, q.n).ucs == aut_oracle(q).ucs


def test_witness_mode_is_one_sided():
    # a subgroup that is reducible on V can only give PositiveOnly, never NotUCS
    p = 5
    cat = catalog_r4(p)
    for i in (2, 4, 6, 11, 14, 16, 18):
        gens = witness_generators(p, i)
        cert = certify_ucs(p, 4, exponent_p_subspace(cat[i]), "witness", gens=gens)
        assert cert.conclusion == "UCS"
    sub = [g for g in gsp4_gens(p).gens[:2]]
    cert = certify_ucs(p, 4, exponent_p_subspace(cat[2]), "witness", gens=sub)
    assert cert.conclusion == "PositiveOnly"


def test_witness_must_stabilize():
    F = field_make(5)
    with pytest.raises(WitnessDoesNotStabilize):
        certify_ucs(5, 4, exponent_p_subspace(catalog_r4(5)[2]), "witness", gens=gl_gens(4, F).gens)


def test_p2_list_parsing():
    ns = [relators_to_subspace(2, 4, rel) for rel in P2_R4_LIST]
    assert [n.dim for n in ns] == [9, 9, 8, 8, 6, 6, 6, 6, 6]
    assert Quotient(2, 4, ns[4]).is_abelian
    assert Quotient(2, 4, ns[3]).order == 2**6


def _split_n(n, r):
    """(X, M) with n = span{(e_i, X_i)} + (0 + M)."""
    B = n.basis
    return B[:r, r:], Subspace(n.ctx, B.shape[1] - r, B[r:, r:])


def test_construct_round_trip_agl15():
    p = 3
    n = expsquare_g1_subspace(p)
    X, M = _split_n(n, 4)
    assert M.dim == 2
    K = agl1_5_gens(field_make(p))
    q = construct_exponent_p2(p, K, M, X)
    assert q.n == n
    assert (q.order, q.exponent) == (3**8, 9)
    assert q.derived_dim == 4


def test_construct_errors():
    F = field_make(3)
    K = so3_gens(F)
    with pytest.raises(NotIso):
        construct_exponent_p2(3, K, Subspace.zero(F, 3), np.zeros((3, 3), dtype=np.int64))
    with pytest.raises(NotInvariant):
        construct_exponent_p2(3, K, Subspace(F, 3, [[1, 0, 0]]), np.eye(3, dtype=np.int64))


def test_printed_u12_collides_with_u8(r4_p3):
    # with the printed sign at p = 3 the stabilizer matches U8, not the UCS value
    cat, printed = catalog_r4(3), catalog_r4(3, printed=True)
    orders = [res.order for res in memo_sweep(4, 3, [("exterior", printed[12]), ("exterior", cat[8]), ("exterior", cat[12])])]
    assert orders == [2592, 2592, 10368]
