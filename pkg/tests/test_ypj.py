from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucsgroups.errors import BadJ, NonPrime
from ucsgroups.ypj import (
    cyclotomic_det,
    delta,
    delta2_formula,
    fibonacci,
    inverse_pair_check,
    table1,
    table1_text,
    ypj_matrix,
    ypj_report,
)

GOLDEN = Path(__file__).parent / "golden" / "table1.txt"
PRIMES = [3, 5, 7, 11, 13, 17, 19]


def _root_product(n, j):
    """Float evaluation of prod_k (1 - w^k - w^(jk)) over n-th roots of unity."""
    w = np.exp(2j * np.pi * np.arange(n) / n)
    return int(round(np.prod(1 - w - w**j).real))


@pytest.mark.parametrize(
    "p,j,divs",
    [(7, 3, (2, 2, 2)), (13, 12, ()), (5, 2, (11,)), (3, 2, (2, 2)), (7, 2, (29,))],
)
def test_examples(p, j, divs):
    rep = ypj_report(p, j)
    assert rep.divisors == divs
    assert rep.order == abs(rep.det)


def test_table_golden():
    assert table1_text(13) == GOLDEN.read_text()


def test_table_grouping():
    rows = table1(7)
    assert [r["j"] for r in rows if r["p"] == 7] == [[2, 4], [3, 5], [6]]
    for r in rows:
        reps = {ypj_report(r["p"], j).divisors for j in r["j"]}
        assert reps == {tuple(r["divisors"])}


@pytest.mark.parametrize("p", PRIMES[1:])
def test_last_j_is_trivial(p):
    # j = p - 1 gives the trivial group once p > 3 (p = 3 has j = 2 = p - 1)
    assert ypj_report(p, p - 1).order == 1


@pytest.mark.parametrize("p", PRIMES)
def test_det_two_routes(p):
    for j in range(2, p):
        d = delta(p, j)
        assert d == cyclotomic_det(p, j) == _root_product(p, j)


@pytest.mark.parametrize("p", PRIMES)
def test_det_mod_p(p):
    # fixed point of the cyclic shift gives det = -1 mod p
    for j in range(2, p):
        assert delta(p, j) % p == p - 1


@pytest.mark.parametrize("p", PRIMES)
def test_inverse_pairs(p):
    assert inverse_pair_check(p)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 24))
def test_delta2_closed_form(n):
    assert delta(n, 2) == delta2_formula(n)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 14), st.data())
def test_delta_composite(n, data):
    j = data.draw(st.integers(2, n - 1))
    assert delta(n, j) == _root_product(n, j)


def test_delta_zero_cases():
    # 1 - x - x^5 vanishes at a primitive sixth root of unity
    assert delta(6, 5) == 0
    assert delta(6, 2) == delta2_formula(6)


def test_fibonacci():
    assert [fibonacci(n) for n in range(8)] == [0, 1, 1, 2, 3, 5, 8, 13]


def test_matrix_shape():
    M = ypj_matrix(5, 2)
    assert M[0] == [1, -1, -1, 0, 0]
    assert all(sum(row) == -1 for row in M)


def test_errors():
    with pytest.raises(NonPrime):
        ypj_report(9, 2)
    with pytest.raises(BadJ):
        ypj_report(7, 1)
    with pytest.raises(BadJ):
        ypj_report(7, 7)
    with pytest.raises(BadJ):
        delta(2, 1)
