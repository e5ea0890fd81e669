"""One test per acceptance criterion, exact equality throughout."""

import io
from pathlib import Path

import numpy as np
import pytest

from ucsgroups import cli
from ucsgroups.aut import aut_oracle
from ucsgroups.esq import esq_scan_dim5
from ucsgroups.finfield import field_make
from ucsgroups.forms import q_value
from ucsgroups.grpgen import (
    agammal_sub_gens,
    cyclic_companion,
    frob55_gens,
    gammal2sq_gens,
    gl2_central_prod_gens,
    gl2_wr_c2_gens,
    gl_gens,
    gsp4_gens,
    so3_gens,
    to_dual_order,
)
from ucsgroups.linalg import Subspace, det
from ucsgroups.pclass2 import (
    Class2Element,
    Quotient,
    frattini_dim,
    induced_frattini_action,
    mul,
    pth_power,
    relators_to_subspace,
)
from ucsgroups.rep import MatModule, esq_witness, exterior_square_matrix, modules_isomorphic, verify_esq_witness
from ucsgroups.sweep import gl_order
from ucsgroups.ucs import (
    NAMED_GROUPS,
    UCS_INDICES,
    catalog_r4,
    certify_ucs,
    classify_r4_exponent_p,
    construct_exponent_p2,
    exponent_p_subspace,
    expsquare_g1_subspace,
    g4_subspace,
    gaussian_binomial,
    named_quotient,
    orbit_equivalent,
    thm72_family,
    verify_p2_r4_list,
)
from ucsgroups.ypj import delta, delta2_formula, inverse_pair_check

GOLDEN = Path(__file__).parent / "golden"


def _random_element(rng, p, r):
    D = frattini_dim(r)
    v = rng.integers(0, p, r + D)
    return Class2Element(p, tuple(int(x) for x in v[:r]), tuple(int(x) for x in v[r : 2 * r]), tuple(int(x) for x in v[2 * r :]))


def _random_gl(rng, r, p):
    F = field_make(p)
    while True:
        g = rng.integers(0, p, (r, r))
        if det(F, g):
            return g


# 1
def test_c01_table1_golden():
    buf = io.StringIO()
    assert cli.dispatch(["table1", "--pmax", "13"], out=buf) == 0
    assert buf.getvalue() == (GOLDEN / "table1.txt").read_text()


# 2
def test_c02_delta_identities():
    assert all(delta(n, 2) == delta2_formula(n) for n in range(3, 31))
    assert all(abs(delta(n, n - 1)) == 1 for n in range(5, 26) if n % 6 in (1, 5))
    zeros = [(n, j) for n in range(6, 31, 6) for j in range(5, n, 6)]
    assert zeros and all(delta(n, j) == 0 for n, j in zeros)


# 3
def test_c03_y_invariance():
    assert all(inverse_pair_check(p) for p in (5, 7, 11, 13))
    primes = [p for p in range(3, 32) if all(p % d for d in range(2, p))]
    assert all(delta(p, j) % p == (-1) ** p % p for p in primes for j in range(2, p))


# 4
def test_c04_small_classifications():
    q8 = certify_ucs(2, 2, named_quotient("Q8").n)
    assert (q8.conclusion, q8.stab_order) == ("UCS", 6)
    g1 = certify_ucs(2, 3, named_quotient("G1_2").n)
    assert (g1.conclusion, g1.stab_order) == ("UCS", 21)
    g2 = certify_ucs(3, 2, named_quotient("G2").n)
    assert g2.conclusion == "UCS"
    g3 = certify_ucs(3, 3, named_quotient("G3").n)
    g4 = certify_ucs(3, 3, g4_subspace(3))
    assert g3.conclusion == g4.conclusion == "UCS"
    assert g4.stab_order == 24
    assert Quotient(3, 3, g4_subspace(3)).order == Quotient(3, 3, named_quotient("G3").n).order == 729
    for name in ("Q8", "C4^2", "G2"):
        assert aut_oracle(named_quotient(name)).n_characteristic == 3
    assert aut_oracle(named_quotient("D8")).n_characteristic > 3


# 5
def test_c05_p2_list():
    res = verify_p2_r4_list()
    assert len(res.rows) == 9
    assert res.all_ucs
    assert res.pairwise_inequivalent
    assert len(res.inequivalent_pairs) == 36


# 6
def test_c06_classify_p3(r4_p3):
    res = classify_r4_exponent_p(3)
    assert res.ucs_indices == list(UCS_INDICES)
    assert [i for i, row in enumerate(res.rows) if row["conclusion"] == "NotUCS"] == [
        i for i in range(19) if i not in UCS_INDICES
    ]
    assert all(row["ucs"] == (not row["degenerate"]) for row in res.rows)
    stab = [row["stab_order"] for row in res.rows]
    assert stab[2] == 103680
    assert stab[4] == stab[16] == 4608
    assert stab[6] == stab[18] == 11520
    assert stab[11] == 1152
    assert res.checksum == sum(gaussian_binomial(6, k, 3) for k in range(1, 6)) == 56630
    assert res.checksum == sum(gl_order(4, 3) // s for s in stab[1:])


# 7
def test_c07_esq_instances():
    F3 = field_make(3)
    so = so3_gens(F3)
    res = esq_witness(so)
    assert res.is_esq and res.kernel.dim == 0 and verify_esq_witness(so, res)
    for g in so.gens:
        assert np.array_equal(to_dual_order(F3, exterior_square_matrix(F3, g)), g)
    for m in (cyclic_companion(11, 5, F3), frob55_gens(field_make(23)), agammal_sub_gens(8, [2], F3)):
        res = esq_witness(m)
        assert res.is_esq and verify_esq_witness(m, res)
    assert agammal_sub_gens(8, [2], F3).dim == 7
    for q in (3, 5, 7):
        F = field_make(q)
        for lam in range(2, q):
            scal = MatModule(F, 3, [np.eye(3, dtype=np.int64) * lam] + list(gl_gens(3, F).gens))
            assert esq_witness(scal).verdict == "not_esq"
        assert esq_witness(gl_gens(2, F)).verdict == "not_esq"
        assert esq_witness(MatModule(F, 2, [np.eye(2, dtype=np.int64)])).verdict == "not_esq"


# 8
def test_c08_a4_exclusion():
    for q in (7, 13):
        rep = esq_scan_dim5(q)
        assert len(rep["a4"]["modules"]) == 6
        assert rep["a4"]["none_esq"]


# 9
def test_c09_expsquare_family(r4_p3):
    n = expsquare_g1_subspace(3)
    q = Quotient(3, 4, n)
    assert (q.order, q.exponent) == (3**8, 9)
    cert = certify_ucs(3, 4, n)
    assert (cert.conclusion, cert.stab_order) == ("UCS", 20)
    res = thm72_family(3)
    assert res.n_candidates == 80
    assert len(res.classes) == 2
    assert sorted((c["size"], c["stab_order"]) for c in res.classes) == [(16, 20), (64, 5)]
    assert all(c["ucs"] for c in res.classes)


# 10
def test_c10_so3_construction():
    F3 = field_make(3)
    K = so3_gens(F3)
    iso = modules_isomorphic(K, K.exterior_square())
    assert iso.verdict == "yes"
    q = construct_exponent_p2(3, K, Subspace.zero(F3, 3), iso.iso)
    assert (q.order, q.exponent) == (3**6, 9)
    assert certify_ucs(3, 3, q.n).conclusion == "UCS"
    assert orbit_equivalent(3, 3, q.n, g4_subspace(3)) is not None


# 11
def test_c11_engine_properties():
    rng = np.random.default_rng(11)
    for p, r in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (5, 3)]:
        for _ in range(10_000):
            x, y, z = (_random_element(rng, p, r) for _ in range(3))
            assert mul(mul(x, y), z) == mul(x, mul(y, z))
    for p, r in [(3, 3), (5, 3), (3, 4)]:
        for _ in range(300):
            x, y = _random_element(rng, p, r), _random_element(rng, p, r)
            assert pth_power(mul(x, y)) == mul(pth_power(x), pth_power(y))
    for p, r in [(2, 3), (3, 3), (2, 4), (5, 3)]:
        F = field_make(p)
        for _ in range(100):
            g, h = _random_gl(rng, r, p), _random_gl(rng, r, p)
            lhs = induced_frattini_action(F.matmul(g, h), p)
            rhs = F.matmul(induced_frattini_action(g, p), induced_frattini_action(h, p))
            assert np.array_equal(lhs, rhs)
    for p, d in [(5, 3), (3, 4), (7, 4)]:
        F = field_make(p)
        for _ in range(200):
            g, h = _random_gl(rng, d, p), _random_gl(rng, d, p)
            lhs = exterior_square_matrix(F, F.matmul(g, h))
            rhs = F.matmul(exterior_square_matrix(F, g), exterior_square_matrix(F, h))
            assert np.array_equal(lhs, rhs)
    for p in (3, 5, 7):
        F = field_make(p)
        for _ in range(1000 // 3 + 1):
            g = _random_gl(rng, 4, p)
            w = rng.integers(0, p, 6)
            img = F.matmul(w[None], exterior_square_matrix(F, g))[0]
            assert q_value(img, p) == det(F, g) * q_value(w, p) % p


# 12
@pytest.mark.parametrize("p", [5, 7])
def test_c12_witness_mode(p):
    cat = catalog_r4(p)
    for i, mod in [(2, gsp4_gens(p)), (6, gammal2sq_gens(p)), (4, gl2_wr_c2_gens(p)), (11, gl2_central_prod_gens(p))]:
        cert = certify_ucs(p, 4, exponent_p_subspace(cat[i]), "witness", gens=mod.gens)
        assert cert.conclusion == "UCS", i
        assert cert.mode == "witness"
