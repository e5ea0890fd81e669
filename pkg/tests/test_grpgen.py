import numpy as np
import pytest

from ucsgroups.errors import CharacteristicFive, CongruenceFailed, EvenCharacteristic, OrderMismatch
from ucsgroups.finfield import field_make
from ucsgroups.forms import congruence_to_scalar
from ucsgroups.grpgen import (
    GSP_J,
    a4_modules_311,
    agammal_sub_gens,
    agl1_5_conjugation_power,
    agl1_5_gens,
    construct,
    cyclic_companion,
    frob55_gens,
    gammal2sq_gens,
    gl2_central_prod_gens,
    gl2_wr_c2_gens,
    gl_gens,
    gsp4_gens,
    least_alpha,
    similitude_factor,
    so3_gens,
    tensor_pattern,
)
from ucsgroups.linalg import det, identity, matpow
from ucsgroups.matgroup import closure_order, group_order
from ucsgroups.rep import is_irreducible
from ucsgroups.sweep import act_exterior
from ucsgroups.ucs import catalog_r4


@pytest.mark.parametrize("r,q,order", [(2, 2, 6), (3, 3, 11232), (4, 2, 20160), (2, 9, 5760), (1, 7, 6)])
def test_gl_orders(r, q, order):
    F = field_make(*((3, 2) if q == 9 else (q, 1)))
    assert closure_order(F, gl_gens(r, F).gens) == order


def test_least_alpha():
    assert [least_alpha(p) for p in (3, 5, 7, 11)] == [1, 2, 2, 3]


def test_gsp4():
    F = field_make(3)
    m = gsp4_gens(3)
    assert all(similitude_factor(F, g) for g in m.gens)
    assert similitude_factor(F, identity(4)) == 1
    assert closure_order(F, m.gens) == 103680
    with pytest.raises(EvenCharacteristic):
        gsp4_gens(2)


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
def test_so3(q):
    F = field_make(q)
    m = so3_gens(F)
    for g in m.gens:
        assert np.array_equal(F.matmul(g, g.T), identity(3))
        assert det(F, g) == 1
    assert group_order(F, m.gens) == q * (q * q - 1)
    with pytest.raises(EvenCharacteristic):
        so3_gens(field_make(2))


def test_so3_irreducible_q3():
    assert is_irreducible(so3_gens(field_make(3))).irreducible


def test_gammal2sq():
    F = field_make(3)
    m = gammal2sq_gens(3)
    assert closure_order(F, m.gens) == 11520
    U6 = catalog_r4(3)[6]
    assert all(U6.is_invariant(act_exterior(g[None], 3)[0] % 3) for g in m.gens)
    frob = m.gens[-1]
    assert np.array_equal(F.matmul(frob, frob), identity(4))


def test_wreath_and_central_product():
    F = field_make(3)
    assert closure_order(F, gl2_wr_c2_gens(3).gens) == 4608
    assert closure_order(F, gl2_central_prod_gens(3).gens) == 1152
    lam = 2
    A, B = np.eye(2, dtype=np.int64) * lam, np.eye(2, dtype=np.int64) * pow(lam, -1, 3)
    assert np.array_equal(tensor_pattern(A, B, 3), identity(4))


def test_agl1_5():
    F = field_make(3)
    a, b = agl1_5_gens(F).gens
    assert np.array_equal(matpow(F, a, 5), identity(4))
    assert np.array_equal(matpow(F, b, 4), identity(4))
    for p in (2, 3, 7):
        assert agl1_5_conjugation_power(field_make(p)) == 2
    assert closure_order(F, [a, b]) == 20
    assert is_irreducible(agl1_5_gens(F)).irreducible
    with pytest.raises(CharacteristicFive):
        agl1_5_gens(field_make(5))


def test_cyclic_companion():
    F = field_make(3)
    c = cyclic_companion(11, 5, F).gens[0]
    assert np.array_equal(matpow(F, c, 11), identity(5))
    assert not np.array_equal(c, identity(5))
    c5 = cyclic_companion(5, 4, F).gens[0]
    assert c5[-1].tolist() == [2, 2, 2, 2]  # t^4 + t^3 + t^2 + t + 1
    with pytest.raises(OrderMismatch):
        cyclic_companion(11, 4, F)


def test_frob55():
    F = field_make(23)
    n, g = frob55_gens(F).gens
    assert closure_order(F, [n, g]) == 55
    assert is_irreducible(frob55_gens(F)).irreducible
    assert sorted(x * x % 11 for x in range(1, 11)) == sorted([1, 3, 9, 5, 4] * 2)
    with pytest.raises(CongruenceFailed):
        frob55_gens(field_make(7))


def test_agammal_sub():
    m = agammal_sub_gens(11, [3], field_make(23))
    assert m.dim == 5
    assert closure_order(m.ctx, m.gens) == 55
    m8 = agammal_sub_gens(8, [2], field_make(3))
    assert m8.dim == 7
    assert closure_order(m8.ctx, m8.gens) == 168
    for g in m8.gens:
        assert ((g != 0).sum(axis=0) == 1).all() and ((g != 0).sum(axis=1) == 1).all()


def test_a4_modules():
    for q in (7, 13):
        mods = a4_modules_311(field_make(q))
        assert len(mods) == 6
        assert all(m.dim == 5 and closure_order(m.ctx, m.gens) == 12 for _, m in mods)


def test_congruence_to_scalar():
    F3 = field_make(3)
    g, lam = congruence_to_scalar(identity(3), F3)
    assert lam == 1
    A = np.diag([1, 1, 2])
    g, lam = congruence_to_scalar(A, F3)
    assert np.array_equal(F3.matmul(F3.matmul(g, A), g.T), F3.mul(identity(3), lam))
    rng = np.random.default_rng(0)
    for p in (5, 7):
        F = field_make(p)
        done = 0
        while done < 200:
            S = rng.integers(0, p, (3, 3))
            S = np.mod(S + S.T, p)
            if det(F, S) == 0:
                continue
            g, lam = congruence_to_scalar(S, F)
            assert np.array_equal(F.matmul(F.matmul(g, S), g.T), F.mul(identity(3), lam))
            done += 1


def test_construct_dispatch():
    assert construct("GL", {"r": 2, "q": 4}).ctx.q == 4
    assert construct("Frob55", {"q": 23}).dim == 5
    with pytest.raises(ValueError):
        construct("Nope", {})


def test_gsp_form_is_alternating():
    assert np.array_equal(GSP_J.T, -GSP_J)
