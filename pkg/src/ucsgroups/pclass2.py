"""The free p-class-2 group H_{p,r} of exponent dividing p^2 and its quotients.

Every element of H = H_{p,r} has a unique normal form

    x_1^{a_1} ... x_r^{a_r} * prod y_i^{c_i} * prod_{j<k} z_{jk}^{d_{jk}}

with 0 <= a_i, c_i, d_jk < p, where y_i = x_i^p and z_jk = [x_j, x_k] =
x_j^-1 x_k^-1 x_j x_k.  The Frattini subgroup Phi(H) is elementary abelian
with basis (y_1..y_r, z_12, z_13, ..., z_{r-1,r}); a Frattini vector is a
coordinate row in that order.  Quotients H/N with N <= Phi(H) are given by
the subspace of Frattini vectors spanned by N.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import RankMismatch, RelatorNotInFrattini, RelatorSyntax, Singular
from .finfield import field_make
from .linalg import Subspace, det, identity


def pairs(r: int) -> list[tuple[int, int]]:
    """Lex-ordered index pairs (j, k), j < k, zero-based."""
    return list(combinations(range(r), 2))


def frattini_dim(r: int) -> int:
    return r + r * (r - 1) // 2


@dataclass(frozen=True)
class Class2Element:
    """An element of H_{p,r} in normal form."""

    p: int
    a: tuple[int, ...]
    c: tuple[int, ...]
    d: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.a)

    @classmethod
    def identity(cls, p: int, r: int) -> "Class2Element":
        z = (0,) * r
        return cls(p, z, z, (0,) * (r * (r - 1) // 2))

    @classmethod
    def generator(cls, p: int, r: int, i: int) -> "Class2Element":
        e = cls.identity(p, r)
        a = list(e.a)
        a[i] = 1
        return cls(p, tuple(a), e.c, e.d)

    @classmethod
    def frattini(cls, p: int, r: int, vec: Sequence[int]) -> "Class2Element":
        vec = [int(v) % p for v in vec]
        return cls(p, (0,) * r, tuple(vec[:r]), tuple(vec[r:]))

    @classmethod
    def lift(cls, p: int, a: Sequence[int]) -> "Class2Element":
        """The normal-form word x_1^{a_1} ... x_r^{a_r}."""
        r = len(a)
        e = cls.identity(p, r)
        return cls(p, tuple(int(x) % p for x in a), e.c, e.d)

    def frattini_vector(self) -> tuple[int, ...]:
        return self.c + self.d

    def is_frattini(self) -> bool:
        return not any(self.a)

    def __mul__(self, other: "Class2Element") -> "Class2Element":
        return mul(self, other)

    def __pow__(self, n: int) -> "Class2Element":
        return power(self, n)

    def inverse(self) -> "Class2Element":
        return inverse(self)


def mul(x: Class2Element, y: Class2Element) -> Class2Element:
    """Collected product: move each x_j^{a'_j} left past x_k^{a_k} (k > j)."""
    if x.p != y.p or x.r != y.r:
        raise RankMismatch("elements of different groups")
    p, r = x.p, x.r
    a = []
    c = []
    for i in range(r):
        s = x.a[i] + y.a[i]
        a.append(s % p)
        c.append((x.c[i] + y.c[i] + (1 if s >= p else 0)) % p)
    d = []
    for t, (j, k) in enumerate(pairs(r)):
        d.append((x.d[t] + y.d[t] - x.a[k] * y.a[j]) % p)
    return Class2Element(p, tuple(a), tuple(c), tuple(d))


def inverse(x: Class2Element) -> Class2Element:
    p, r = x.p, x.r
    y0 = Class2Element.lift(p, [(-v) % p for v in x.a])
    central = mul(x, y0)  # lies in Phi(H), which is central
    neg = Class2Element(p, (0,) * r, tuple((-v) % p for v in central.c), tuple((-v) % p for v in central.d))
    return mul(y0, neg)


def power(x: Class2Element, n: int) -> Class2Element:
    if n < 0:
        x = inverse(x)
        n = -n
    result = Class2Element.identity(x.p, x.r)
    base = x
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def pth_power(x: Class2Element) -> Class2Element:
    return power(x, x.p)


def commutator(x: Class2Element, y: Class2Element) -> Class2Element:
    return mul(mul(inverse(x), inverse(y)), mul(x, y))


# ---------------------------------------------------------------------------
# relator words

_TOKEN = re.compile(r"\s*(?:(?P<gen>[xyz])(?P<idx>\d+)|(?P<sym>[\[\]\(\),\^\*])|(?P<num>-?\d+|-?p)|(?P<one>1))")


def _tokenize(s: str) -> list[str]:
    out = []
    pos = 0
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise RelatorSyntax(f"cannot parse {s[pos:]!r}")
        out.append(m.group(0).strip())
        pos = m.end()
    return [t for t in out if t]


class _Parser:
    def __init__(self, p: int, r: int, text: str):
        self.p, self.r = p, r
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expect: str | None = None) -> str:
        t = self.peek()
        if t is None or (expect is not None and t != expect):
            raise RelatorSyntax(f"expected {expect!r}, got {t!r}")
        self.i += 1
        return t

    def word(self) -> Class2Element:
        w = Class2Element.identity(self.p, self.r)
        while self.peek() not in (None, ",", "]", ")"):
            if self.peek() == "*":
                self.take()
                continue
            w = mul(w, self.factor())
        return w

    def factor(self) -> Class2Element:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.take()
            if e in ("p", "-p"):
                n = self.p if e == "p" else -self.p
            else:
                try:
                    n = int(e)
                except ValueError:
                    raise RelatorSyntax(f"bad exponent {e!r}") from None
            base = power(base, n)
        return base

    def atom(self) -> Class2Element:
        t = self.take()
        if t == "[":
            u = self.word()
            self.take(",")
            v = self.word()
            self.take("]")
            return commutator(u, v)
        if t == "(":
            u = self.word()
            self.take(")")
            return u
        if t == "1":
            return Class2Element.identity(self.p, self.r)
        m = re.fullmatch(r"([xyz])(\d+)", t)
        if not m:
            raise RelatorSyntax(f"unexpected token {t!r}")
        kind, idx = m.group(1), int(m.group(2)) - 1
        if kind in "xy":
            if not 0 <= idx < self.r:
                raise RelatorSyntax(f"generator index out of range in {t!r}")
            g = Class2Element.generator(self.p, self.r, idx)
            return pth_power(g) if kind == "y" else g
        prs = pairs(self.r)
        if not 0 <= idx < len(prs):
            raise RelatorSyntax(f"commutator index out of range in {t!r}")
        j, k = prs[idx]
        return commutator(Class2Element.generator(self.p, self.r, j), Class2Element.generator(self.p, self.r, k))


def parse_word(p: int, r: int, text: str) -> Class2Element:
    """Evaluate a word such as ``x1^p [x2,x3]^-1`` in H_{p,r}.

    Juxtaposition (or ``*``) is multiplication, ``[u,v]`` is the commutator,
    ``^n`` / ``^p`` / ``^-1`` are powers, ``yi`` abbreviates ``xi^p`` and
    ``zt`` is the t-th commutator [x_j, x_k] in lex order.
    """
    ps = _Parser(p, r, text)
    w = ps.word()
    if ps.peek() is not None:
        raise RelatorSyntax(f"trailing input {ps.toks[ps.i:]}")
    return w


def relators_to_subspace(p: int, r: int, relators: Iterable[str]) -> Subspace:
    F = field_make(p)
    vecs = []
    for text in relators:
        w = parse_word(p, r, text)
        if not w.is_frattini():
            raise RelatorNotInFrattini(f"{text!r} does not lie in the Frattini subgroup")
        vecs.append(w.frattini_vector())
    return Subspace(F, frattini_dim(r), vecs)


# ---------------------------------------------------------------------------
# induced action on the Frattini subgroup


def induced_frattini_action(g, p: int) -> np.ndarray:
    """Matrix of the automorphism x_i -> lift(row i of g) on Phi(H).

    Computed from the collection engine: the y-rows are the p-th powers of
    the lifted images and the z-rows their commutators.
    """
    F = field_make(p)
    g = np.mod(np.asarray(g, dtype=np.int64), p)
    r = g.shape[0]
    if g.shape != (r, r):
        raise RankMismatch("generator image matrix must be square")
    if det(F, g) == 0:
        raise Singular("matrix is not invertible")
    lifts = [Class2Element.lift(p, row) for row in g]
    rows = [pth_power(u).frattini_vector() for u in lifts]
    for j, k in pairs(r):
        rows.append(commutator(lifts[j], lifts[k]).frattini_vector())
    return np.array(rows, dtype=np.int64)


def frattini_action_formula(g, p: int) -> np.ndarray:
    """Closed form of ``induced_frattini_action`` (used as a cross-check).

    For odd p it is diag(g, ext^2 g); for p = 2 the y-row of x_i also picks
    up z_jk with coefficient g_ij g_ik.
    """
    g = np.mod(np.asarray(g, dtype=np.int64), p)
    r = g.shape[0]
    prs = pairs(r)
    D = frattini_dim(r)
    A = np.zeros((D, D), dtype=np.int64)
    A[:r, :r] = g
    for s, (i, j) in enumerate(prs):
        for t, (k, l) in enumerate(prs):
            A[r + s, r + t] = g[i, k] * g[j, l] - g[i, l] * g[j, k]
    if p == 2:
        for i in range(r):
            for t, (j, k) in enumerate(prs):
                A[i, r + t] = g[i, j] * g[i, k]
    return np.mod(A, p)


# ---------------------------------------------------------------------------
# quotients


class Quotient:
    """The group H_{p,r} / N for a subspace N of the Frattini vectors."""

    def __init__(self, p: int, r: int, n: Subspace | Sequence[Sequence[int]]):
        self.p = int(p)
        self.r = int(r)
        self.ctx = field_make(self.p)
        D = frattini_dim(self.r)
        if not isinstance(n, Subspace):
            n = Subspace(self.ctx, D, n)
        if n.n != D:
            raise RankMismatch(f"N must live in dimension {D}")
        self.n = n

    @classmethod
    def from_relators(cls, p: int, r: int, relators: Iterable[str]) -> "Quotient":
        return cls(p, r, relators_to_subspace(p, r, relators))

    @property
    def D(self) -> int:
        return frattini_dim(self.r)

    @property
    def log_order(self) -> int:
        return self.r + self.D - self.n.dim

    @property
    def order(self) -> int:
        return self.p**self.log_order

    @property
    def frattini_dim(self) -> int:
        return self.D - self.n.dim

    @property
    def derived_dim(self) -> int:
        zblock = Subspace(self.ctx, self.D, identity(self.D)[self.r :])
        return (zblock + self.n).dim - self.n.dim

    @property
    def is_abelian(self) -> bool:
        return self.derived_dim == 0

    @property
    def exponent(self) -> int:
        p, r = self.p, self.r
        cands = [Class2Element.generator(p, r, i) for i in range(r)]
        cands += [mul(cands[j], cands[k]) for j, k in pairs(r)]
        for x in cands:
            if not self.n.contains(pth_power(x).frattini_vector()):
                return p * p
        return p

    def stats(self) -> dict:
        return {
            "order": self.order,
            "log_order": self.log_order,
            "exponent": self.exponent,
            "derived_dim": self.derived_dim,
            "frattini_dim": self.frattini_dim,
            "is_abelian": self.is_abelian,
        }

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "n_basis": self.n.basis.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "Quotient":
        return cls(int(data["p"]), int(data["r"]), data["n_basis"])


def quotient_stats(q: Quotient) -> dict:
    return q.stats()
