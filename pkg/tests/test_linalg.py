from itertools import combinations, product
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucsgroups.errors import Singular
from ucsgroups.finfield import field_make
from ucsgroups.linalg import (
    Subspace,
    batch_inverse,
    batch_rank,
    circulant,
    det,
    det_int,
    int_identity,
    inverse,
    nullspace,
    rank,
    rref,
    smith_normal_form,
)


def _span_size(A, p):
    vecs = {tuple(np.mod(np.array(c) @ A, p)) for c in product(range(p), repeat=A.shape[0])}
    return len(vecs)


def _determinantal_divisors(M):
    """Invariant factors from gcds of k x k minors (slow but independent)."""
    rows, cols = len(M), len(M[0])
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det_int([[M[i][j] for j in cs] for i in rs]))
        if g == 0:
            out += [0] * (min(rows, cols) - k + 1)
            break
        out.append(g // prev)
        prev = g
    return out


def test_rref_examples():
    F = field_make(3)
    R, r = rref(F, [[0, 0], [0, 0]])
    assert r == 0
    R, r = rref(F, [[2, 1], [1, 2]])
    assert r == 1 and R[0].tolist() == [1, 2]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_matches_span_count(p, m, n, data):
    F = field_make(p)
    A = np.array(data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=m, max_size=m)))
    r = rank(F, A)
    assert p**r == _span_size(A, p)
    R, r2 = rref(F, A)
    assert r2 == r
    assert np.array_equal(rref(F, R)[0], R)
    N = nullspace(F, A)
    assert N.shape[0] == n - r
    assert not np.mod(N @ A.T, p).any()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(2, 5), st.data())
def test_inverse_and_det(p, n, data):
    F = field_make(p)
    A = np.array(data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n)))
    d = det(F, A)
    assert d == det_int(A.tolist()) % p
    if d:
        assert np.array_equal(F.matmul(A, inverse(F, A)), np.eye(n, dtype=np.int64))
    else:
        with pytest.raises(Singular):
            inverse(F, A)


def test_batch_routines():
    F = field_make(5)
    rng = np.random.default_rng(0)
    A = rng.integers(0, 5, (200, 4, 4))
    ranks = batch_rank(F, A)
    assert ranks.tolist() == [rank(F, a) for a in A]
    inv = A[ranks == 4]
    B = batch_inverse(F, inv)
    for a, b in zip(inv, B):
        assert np.array_equal(F.matmul(a, b), np.eye(4, dtype=np.int64))


def test_subspace_ops():
    F = field_make(3)
    U = Subspace(F, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    W = Subspace(F, 4, [[0, 1, 0, 0], [0, 0, 1, 0]])
    assert (U + W).dim == 3
    assert U.intersection(W) == Subspace(F, 4, [[0, 1, 0, 0]])
    assert [1, 1, 0, 0] in U and [0, 0, 0, 1] not in U
    assert Subspace.zero(F, 4).dim == 0 and Subspace.full(F, 4).dim == 4
    assert Subspace(F, 4, [[2, 2, 0, 0], [1, 1, 0, 0]]).dim == 1


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_dimension_formula(data):
    F = field_make(3)
    gen = st.lists(st.lists(st.integers(0, 2), min_size=5, max_size=5), min_size=0, max_size=4)
    U, W = Subspace(F, 5, data.draw(gen)), Subspace(F, 5, data.draw(gen))
    assert (U + W).dim + U.intersection(W).dim == U.dim + W.dim


def test_smith_examples():
    assert smith_normal_form([[2, 4], [6, 8]]) == [2, 4]
    assert smith_normal_form([[0, 0], [0, 0]]) == [0, 0]
    assert smith_normal_form(int_identity(3)) == [1, 1, 1]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_matches_determinantal_divisors(m, n, data):
    M = data.draw(st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m))
    assert smith_normal_form(M) == _determinantal_divisors(M)


def test_circulant():
    assert circulant(4, [(0, 1)]) == int_identity(4)
    C = circulant(3, [(1, 1)])
    assert C == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert det_int([[1, 2], [3, 4]]) == -2
