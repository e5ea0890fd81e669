"""The abelian groups Y_{p,j} = Z^p / (I - C - C^j) and related determinants.

C is the p x p cyclic shift. Y_{p,j} is finite for prime p and 1 < j < p,
its order is |det(I - C - C^j)|, and its structure comes from the Smith
normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import groupby

from .errors import BadJ, NonPrime
from .finfield import is_prime
from .linalg import circulant, det_int, smith_normal_form

__all__ = [
    "YpjReport",
    "ypj_matrix",
    "ypj_report",
    "table1",
    "table1_text",
    "delta",
    "fibonacci",
    "delta2_formula",
    "inverse_pair_check",
    "cyclotomic_det",
]


@dataclass(frozen=True)
class YpjReport:
    p: int
    j: int
    divisors: tuple[int, ...]
    order: int
    det: int

    def to_json(self) -> dict:
        return {"p": self.p, "j": self.j, "divisors": list(self.divisors), "order": self.order, "det": self.det}


def ypj_matrix(n: int, j: int) -> list[list[int]]:
    """I - C_n - C_n^j as an integer matrix."""
    return circulant(n, [(0, 1), (1, -1), (j, -1)])


@lru_cache(maxsize=None)
def ypj_report(p: int, j: int) -> YpjReport:
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if not 1 < j < p:
        raise BadJ(f"need 1 < j < p, got j={j}, p={p}")
    M = ypj_matrix(p, j)
    divs = tuple(d for d in smith_normal_form(M) if d != 1)
    order = 1
    for d in divs:
        order *= d
    return YpjReport(p, j, divs, order, det_int(M))


def _fmt_divisors(divs: tuple[int, ...]) -> str:
    if not divs:
        return "-"
    parts = []
    for d, grp in groupby(divs):
        k = len(list(grp))
        parts.append(f"{d}^{k}" if k > 1 else str(d))
    return " x ".join(parts)


def table1(pmax: int) -> list[dict]:
    """Rows (p, js, divisors), grouping the j with equal divisor lists.

    Within each p the groups are ordered by their smallest j.
    """
    rows = []
    for p in range(3, pmax + 1):
        if not is_prime(p):
            continue
        groups: dict[tuple[int, ...], list[int]] = {}
        for j in range(2, p):
            groups.setdefault(ypj_report(p, j).divisors, []).append(j)
        for divs, js in sorted(groups.items(), key=lambda kv: kv[1][0]):
            rows.append({"p": p, "j": js, "divisors": list(divs), "order": ypj_report(p, js[0]).order})
    return rows


def table1_text(pmax: int) -> str:
    rows = table1(pmax)
    lines = [f"{'p':>3}  {'j':<10}  divisors"]
    for row in rows:
        js = ",".join(str(j) for j in row["j"])
        lines.append(f"{row['p']:>3}  {js:<10}  {_fmt_divisors(tuple(row['divisors']))}")
    return "\n".join(lines) + "\n"


def delta(n: int, j: int) -> int:
    """det(I - C_n - C_n^j); n need not be prime and the value may be 0."""
    if n < 3 or not 1 < j < n:
        raise BadJ(f"need n >= 3 and 1 < j < n, got n={n}, j={j}")
    return det_int(ypj_matrix(n, j))


def fibonacci(n: int) -> int:
    """F_n with F_1 = F_2 = 1 (and F_0 = 0)."""
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def delta2_formula(n: int) -> int:
    return 1 + (-1) ** n - fibonacci(n - 1) - fibonacci(n + 1)


def inverse_pair_check(p: int) -> bool:
    """Y_{p,j} and Y_{p,k} have equal divisors whenever jk = 1 mod p."""
    ok = True
    for j in range(2, p):
        k = pow(j, -1, p)
        if 1 < k < p:
            ok &= ypj_report(p, j).divisors == ypj_report(p, k).divisors
    return ok


def cyclotomic_det(p: int, j: int) -> int:
    """prod_k (1 - xi^k - xi^{jk}) over all p-th roots of unity xi^k.

    Computed exactly as Res(x^p - 1, 1 - x - x^j), which equals that product
    because x^p - 1 is monic with exactly those roots.
    """
    from sympy import Poly, resultant, symbols

    x = symbols("x")
    f = Poly(x**p - 1, x)
    g = Poly(1 - x - x**j, x)
    return int(resultant(f, g))

