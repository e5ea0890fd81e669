import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucsgroups.aut import FiniteClass2Group, aut_oracle
from ucsgroups.errors import RelatorNotInFrattini, Singular
from ucsgroups.finfield import field_make
from ucsgroups.linalg import det
from ucsgroups.pclass2 import (
    Class2Element,
    Quotient,
    commutator,
    frattini_action_formula,
    frattini_dim,
    induced_frattini_action,
    inverse,
    mul,
    power,
    pth_power,
    relators_to_subspace,
)
from ucsgroups.rep import exterior_square_matrix
from ucsgroups.ucs import named_quotient

CONFIGS = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (5, 3)]


@st.composite
def elements(draw, p, r):
    D = frattini_dim(r)
    a = tuple(draw(st.integers(0, p - 1)) for _ in range(r))
    rest = [draw(st.integers(0, p - 1)) for _ in range(D)]
    return Class2Element(p, a, tuple(rest[:r]), tuple(rest[r:]))


@st.composite
def config_and_elements(draw, n):
    p, r = draw(st.sampled_from(CONFIGS))
    return p, r, [draw(elements(p, r)) for _ in range(n)]


@settings(max_examples=200, deadline=None)
@given(config_and_elements(3))
def test_associative(data):
    _, _, (x, y, z) = data
    assert mul(mul(x, y), z) == mul(x, mul(y, z))


@settings(max_examples=100, deadline=None)
@given(config_and_elements(1))
def test_inverse_and_identity(data):
    p, r, (x,) = data
    e = Class2Element.identity(p, r)
    assert mul(x, inverse(x)) == e
    assert mul(e, x) == x == mul(x, e)
    # exponent divides p^2
    assert power(x, p * p) == e


@settings(max_examples=100, deadline=None)
@given(config_and_elements(3))
def test_class_two(data):
    p, r, (x, y, z) = data
    e = Class2Element.identity(p, r)
    assert commutator(commutator(x, y), z) == e
    assert pth_power(pth_power(x)) == e


@settings(max_examples=100, deadline=None)
@given(config_and_elements(2))
def test_pth_power_rule(data):
    p, r, (x, y) = data
    lhs = pth_power(mul(x, y))
    rhs = mul(pth_power(x), pth_power(y))
    if p == 2:
        rhs = mul(rhs, commutator(y, x))
    assert lhs == rhs


def test_collection_examples():
    p, r = 3, 3
    x1, x2 = Class2Element.generator(p, r, 0), Class2Element.generator(p, r, 1)
    c = commutator(x1, x2)
    assert c.a == (0, 0, 0) and c.c == (0, 0, 0) and c.d == (1, 0, 0)
    y = power(x2, p)
    assert y.c == (0, 1, 0) and not any(y.d) and not any(y.a)
    assert pth_power(Class2Element.identity(p, r)) == Class2Element.identity(p, r)
    for v in ([1, 2, 0], [2, 2, 1]):
        assert not any(pth_power(Class2Element.lift(p, v)).a)


def test_p2_square_of_product():
    x1, x2 = Class2Element.generator(2, 2, 0), Class2Element.generator(2, 2, 1)
    diff = mul(pth_power(mul(x1, x2)), inverse(mul(pth_power(x1), pth_power(x2))))
    assert diff.frattini_vector() == (0, 0, 1)


def test_order_of_small_free_groups():
    # closure of the generators inside the enumerated group has the expected size
    for p, r in [(2, 2), (3, 2), (2, 3)]:
        q = Quotient(p, r, [])
        G = FiniteClass2Group(q, max_order=p ** (2 * r + r * (r - 1) // 2))
        assert G.size == p ** (2 * r + r * (r - 1) // 2)


def test_frattini_action_examples():
    assert np.array_equal(induced_frattini_action(np.eye(3, dtype=np.int64), 3), np.eye(6, dtype=np.int64))
    swap = np.array([[0, 1], [1, 0]])
    assert induced_frattini_action(swap, 2)[:2, 2].tolist() == [0, 0]
    g = np.array([[1, 1], [0, 1]])  # x1 -> x1 x2
    assert induced_frattini_action(g, 2)[0].tolist() == [1, 1, 1]
    with pytest.raises(Singular):
        induced_frattini_action(np.zeros((2, 2), dtype=np.int64), 3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (5, 3)]), st.integers(0, 2**31))
def test_frattini_action_two_routes(pr, seed):
    p, r = pr
    F = field_make(p)
    rng = np.random.default_rng(seed)
    while True:
        g = rng.integers(0, p, (r, r))
        if det(F, g):
            break
    A = induced_frattini_action(g, p)
    assert np.array_equal(A, frattini_action_formula(g, p))
    if p > 2:
        assert np.array_equal(A[:r, :r], g) and not A[:r, r:].any() and not A[r:, :r].any()
        assert np.array_equal(A[r:, r:], exterior_square_matrix(F, g))


def test_relators_to_subspace():
    q8 = relators_to_subspace(2, 2, ["x1^2 [x2,x1]", "x2^2 [x2,x1]"])
    assert (q8.n, q8.dim) == (3, 2)
    assert relators_to_subspace(3, 3, []).dim == 0
    g4 = relators_to_subspace(3, 3, ["x1^p [x2,x3]^-1", "x2^p [x3,x1]^-1", "x3^p [x1,x2]^-1"])
    assert g4.dim == 3
    yblock = relators_to_subspace(3, 3, ["x1^p", "x2^p", "x3^p"])
    assert g4.intersection(yblock).dim == 0
    with pytest.raises(RelatorNotInFrattini):
        relators_to_subspace(3, 2, ["x1"])


def test_reversed_commutator_negates():
    a = relators_to_subspace(5, 2, ["x1^p [x1,x2]"])
    b = relators_to_subspace(5, 2, ["x1^p [x2,x1]^-1"])
    assert a == b


def test_quotient_stats():
    g2 = named_quotient("G2").stats()
    assert (g2["order"], g2["exponent"], g2["is_abelian"]) == (27, 3, False)
    g4 = named_quotient("G4").stats()
    assert (g4["order"], g4["exponent"]) == (729, 9)
    full = Quotient(3, 3, np.eye(6, dtype=np.int64)).stats()
    assert (full["order"], full["exponent"], full["is_abelian"]) == (27, 3, True)


def test_aut_oracle():
    assert aut_oracle(named_quotient("Q8")).n_characteristic == 3
    assert aut_oracle(named_quotient("C4^2")).n_characteristic == 3
    assert aut_oracle(named_quotient("D8")).n_characteristic > 3
    assert aut_oracle(named_quotient("G2")).n_characteristic == 3
    res = aut_oracle(named_quotient("G1_2"))
    assert res.group_order == 64 and res.n_characteristic == 3
