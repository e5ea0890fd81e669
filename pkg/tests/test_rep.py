import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucsgroups.finfield import field_make
from ucsgroups.grpgen import cyclic_companion, gl_gens, so3_gens, to_dual_order
from ucsgroups.linalg import Subspace, det, identity, inverse
from ucsgroups.rep import (
    MatModule,
    esq_witness,
    exterior_square_matrix,
    hom_space,
    is_irreducible,
    modules_isomorphic,
    spin,
    verify_esq_witness,
)
from ucsgroups.sweep import memo_sweep, stabilizer_sweep
from ucsgroups.ucs import catalog_r4


def wedge(u, v, p):
    d = len(u)
    return np.array([(u[i] * v[j] - u[j] * v[i]) % p for i in range(d) for j in range(i + 1, d)])


def random_gl(rng, d, p):
    F = field_make(p)
    while True:
        g = rng.integers(0, p, (d, d))
        if det(F, g):
            return g


def test_exterior_square_examples():
    F = field_make(7)
    assert np.array_equal(exterior_square_matrix(F, identity(4)), identity(6))
    D = np.diag([2, 3, 5, 6])
    assert np.diag(exterior_square_matrix(F, D)).tolist() == [6, 10 % 7, 12 % 7, 15 % 7, 18 % 7, 30 % 7]


def test_exterior_square_d3_is_cofactor():
    F = field_make(5)
    rng = np.random.default_rng(5)
    for _ in range(100):
        g = random_gl(rng, 3, 5)
        lhs = to_dual_order(F, exterior_square_matrix(F, g))
        rhs = F.mul(det(F, g), inverse(F, g).T)
        assert np.array_equal(lhs, rhs)


def test_exterior_square_gl2_is_det():
    F = field_make(5)
    for g in gl_gens(2, F).gens:
        assert exterior_square_matrix(F, g).tolist() == [[det(F, g)]]


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(2, 5), st.integers(0, 2**31))
def test_wedge_defining_property(p, d, seed):
    F = field_make(p)
    rng = np.random.default_rng(seed)
    g = random_gl(rng, d, p)
    u, v = rng.integers(0, p, d), rng.integers(0, p, d)
    lhs = F.matmul(wedge(u, v, p)[None], exterior_square_matrix(F, g))[0]
    assert np.array_equal(lhs, wedge(F.matmul(u[None], g)[0], F.matmul(v[None], g)[0], p))


def test_spin():
    F = field_make(3)
    gl = gl_gens(3, F)
    assert spin(gl, [0, 0, 0]).dim == 0
    for v in ([1, 0, 0], [1, 2, 1], [0, 0, 2]):
        assert spin(gl, v).dim == 3
    c11 = cyclic_companion(11, 5, F)
    assert spin(c11, [1, 2, 0, 0, 1]).dim == 5


def test_irreducibility():
    F = field_make(3)
    assert is_irreducible(MatModule(F, 1, [np.array([[2]])])).irreducible
    assert is_irreducible(gl_gens(2, F)).irreducible
    s = gl_gens(2, F).direct_sum(gl_gens(2, F))
    res = is_irreducible(s)
    assert res.verdict == "reducible"
    assert all(res.witness.is_invariant(g) for g in s.gens)
    assert is_irreducible(so3_gens(F)).irreducible


def test_hom_space():
    F3, F5 = field_make(3), field_make(5)
    assert len(hom_space(gl_gens(2, F3), gl_gens(2, F3))) == 1
    gl3 = gl_gens(3, F5)
    assert len(hom_space(gl3, gl3.exterior_square())) == 0
    triv = MatModule(F3, 1, [np.array([[1]])])
    assert len(hom_space(triv, triv)) == 1


def test_modules_isomorphic():
    F3 = field_make(3)
    m = gl_gens(3, F3)
    assert modules_isomorphic(m, m).verdict == "yes"
    assert modules_isomorphic(m, gl_gens(2, F3).direct_sum(gl_gens(2, F3))).verdict == "no"
    so = so3_gens(F3)
    dual = MatModule(F3, 3, [to_dual_order(F3, exterior_square_matrix(F3, g)) for g in so.gens])
    res = modules_isomorphic(so, dual)
    assert res.verdict == "yes"
    for g, h in zip(so.gens, dual.gens):
        assert np.array_equal(F3.matmul(g, res.iso), F3.matmul(res.iso, h))


def test_esq_invariant_under_conjugation():
    F = field_make(3)
    rng = np.random.default_rng(3)
    for m in (so3_gens(F), cyclic_companion(11, 5, F), gl_gens(3, F)):
        x = random_gl(rng, m.dim, 3)
        a, b = esq_witness(m), esq_witness(m.conjugate(x))
        assert a.verdict == b.verdict
        if b.is_esq:
            assert verify_esq_witness(m.conjugate(x), b)


def test_esq_subgroup_heredity():
    F = field_make(3)
    so = so3_gens(F)
    assert esq_witness(so).is_esq
    for g in so.gens:
        assert esq_witness(MatModule(F, 3, [g])).verdict in ("esq", "inconclusive")


def test_gl3_not_esq():
    # ext^2 of the natural GL_3 module is the dual twisted by det, never V
    assert esq_witness(gl_gens(3, field_make(5))).verdict == "not_esq"


def test_stabilizer_sweep_trivial_targets():
    F = field_make(3)
    assert stabilizer_sweep(3, F, "natural", Subspace.full(F, 3)).order == 11232
    assert stabilizer_sweep(3, F, "natural", Subspace.zero(F, 3)).order == 11232
    res = stabilizer_sweep(2, 3, "natural", Subspace(F, 2, [[1, 0]]))
    assert res.order == 12


def test_stabilizer_sweep_u6(r4_p3):
    U6 = catalog_r4(3)[6]
    assert memo_sweep(4, 3, [("exterior", U6)])[0].order == 11520
