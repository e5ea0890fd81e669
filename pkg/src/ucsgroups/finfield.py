"""Finite fields F_{p^k} in a power basis.

An element is stored as an integer code ``sum(c_i * p**i)`` where ``c_i`` are
its coordinates in the basis ``1, x, ..., x^(k-1)`` modulo the defining
polynomial.  Codes ``0..p-1`` are the prime subfield, so prime-field
integers and their codes coincide.  All arithmetic methods on ``FieldCtx``
accept numpy integer arrays (or Python ints) and broadcast.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, DegreeZero, NonPrime, NotCoprime, ZeroElement

FIELD_BUDGET = 2**31
_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorint(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (inputs here stay below 2^62)."""
    out: dict[int, int] = {}
    m = n
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


# Polynomials over F_p as lists, constant term first, no trailing zeros.

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _ptrim(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _ptrim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    b = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, b, p), m, p)
        b = _pmod(_pmul(b, b, p), m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _ptrim([x % p for x in a])
    b = _ptrim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def is_irreducible_poly(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (constant term first)."""
    f = list(f)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p**k, f, p), x, p):
        return False
    for r in factorint(k):
        h = _psub(_ppowmod(x, p ** (k // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def conway_like_modulus(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree k.

    Candidates are ordered by the integer ``sum(c_i p^i)`` of their lower
    coefficients, so the highest non-leading coefficient is the most
    significant one (x^2+1 for F_9, x^4+x+1 for F_16).
    """
    if k == 1:
        return (0, 1)
    for n in range(p**k):
        coeffs = [(n // p**i) % p for i in range(k)]
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if is_irreducible_poly(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


class FieldCtx:
    """Arithmetic context for F_{p^k}.

    ``modulus`` is the monic defining polynomial, constant term first.
    """

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        self.p = int(p)
        self.k = int(k)
        self.modulus = tuple(int(c) % p for c in modulus)
        self.q = self.p**self.k
        self._pows = np.array([self.p**i for i in range(self.k)], dtype=np.int64)
        # x^(k+i) expressed in the power basis, for i = 0..k-2
        red = []
        if self.k > 1:
            xk = [(-c) % p for c in self.modulus[:-1]]
            cur = xk
            for _ in range(self.k - 1):
                red.append(cur)
                top = cur[-1]
                cur = [((cur[i - 1] if i else 0) + top * xk[i]) % p for i in range(self.k)]
        self._red = np.array(red, dtype=np.int64).reshape(-1, self.k)
        self._tables = None
        if self.k > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()

    # identity and display

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    @property
    def char(self) -> int:
        return self.p

    # code <-> digits

    def to_digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pows) % self.p

    def from_digits(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.int64)
        return (d % self.p) @ self._pows

    def from_int(self, n) -> np.ndarray:
        """Image of integers in the prime subfield."""
        return np.mod(np.asarray(n, dtype=np.int64), self.p)

    # vectorised arithmetic

    def _build_tables(self) -> None:
        q = self.q
        codes = np.arange(q, dtype=np.int64)
        d = self.to_digits(codes)
        add = self.from_digits(d[:, None, :] + d[None, :, :])
        mul = self._mul_digits(d[:, None, :], d[None, :, :])
        neg = self.from_digits(-d)
        inv = np.zeros(q, dtype=np.int64)
        rows, cols = np.nonzero(mul == 1)
        inv[rows] = cols
        self._tables = (add, mul, neg, inv)

    def _mul_digits(self, a, b) -> np.ndarray:
        p, k = self.p, self.k
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        shape = np.broadcast_shapes(a.shape, b.shape)
        conv = np.zeros(shape[:-1] + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            conv[..., i : i + k] = (conv[..., i : i + k] + a[..., i : i + 1] * b) % p
        out = conv[..., :k].copy()
        for t in range(k, 2 * k - 1):
            out = (out + conv[..., t : t + 1] * self._red[t - k]) % p
        return self.from_digits(out)

    def add(self, a, b):
        if self.k == 1:
            return np.mod(np.add(a, b, dtype=np.int64), self.p)
        if self._tables is not None:
            return self._tables[0][a, b]
        return self.from_digits(self.to_digits(a) + self.to_digits(b))

    def neg(self, a):
        if self.k == 1:
            return np.mod(np.negative(np.asarray(a, dtype=np.int64)), self.p)
        if self._tables is not None:
            return self._tables[2][a]
        return self.from_digits(-self.to_digits(a))

    def sub(self, a, b):
        if self.k == 1:
            return np.mod(np.subtract(a, b, dtype=np.int64), self.p)
        if self._tables is not None:
            return self._tables[0][a, self._tables[2][b]]
        return self.from_digits(self.to_digits(a) - self.to_digits(b))

    def mul(self, a, b):
        if self.k == 1:
            return np.mod(np.multiply(a, b, dtype=np.int64), self.p)
        if self._tables is not None:
            return self._tables[1][a, b]
        return self._mul_digits(self.to_digits(a), self.to_digits(b))

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            a = self.inv(a)
            e = -e
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroElement("inverse of zero")
        if self._tables is not None:
            return self._tables[3][a]
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def scalar(self, c: int) -> int:
        """Image of an integer in the field (as a code)."""
        return int(c) % self.p

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product with numpy.matmul broadcasting over leading axes."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        p = self.p
        if self.k == 1:
            inner = A.shape[-1]
            if inner * (p - 1) ** 2 < 2**53 and A.size and B.size:
                return np.mod(np.matmul(A.astype(np.float64), B.astype(np.float64)), p).astype(np.int64)
            if inner * (p - 1) ** 2 < 2**63:
                return np.mod(np.matmul(A, B), p)
            out = None
            for t in range(inner):
                term = np.mod(A[..., :, t : t + 1] * B[..., t : t + 1, :], p)
                out = term if out is None else np.mod(out + term, p)
            return out
        prods = self.mul(A[..., :, :, None], B[..., None, :, :])
        digits = self.to_digits(prods).sum(axis=-3)
        return self.from_digits(digits)

    # scalar helpers

    def elem(self, x) -> "FieldElem":
        if isinstance(x, FieldElem):
            return x
        if isinstance(x, (list, tuple)):
            return FieldElem(self, int(self.from_digits(list(x) + [0] * (self.k - len(x)))))
        return FieldElem(self, int(x) % self.q if self.k > 1 else int(x) % self.p)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def is_square(self, a: int) -> bool:
        a = int(a)
        if a == 0 or self.p == 2:
            return True
        return int(self.pow(a, (self.q - 1) // 2)) == 1

    def sqrt(self, a: int) -> int:
        """A square root of ``a`` (Tonelli-Shanks); raises if none exists."""
        from .errors import NotSquare

        a = int(a)
        if a == 0:
            return 0
        q = self.q
        if self.p == 2:
            return int(self.pow(a, q // 2))
        if not self.is_square(a):
            raise NotSquare(f"{a} is not a square in F_{q}")
        s, t = 0, q - 1
        while t % 2 == 0:
            s += 1
            t //= 2
        z = next(c for c in range(2, q) if not self.is_square(c))
        m = s
        c = int(self.pow(z, t))
        x = int(self.pow(a, (t + 1) // 2))
        b = int(self.pow(a, t))
        while b != 1:
            i, bb = 0, b
            while bb != 1:
                bb = int(self.mul(bb, bb))
                i += 1
            f = int(self.pow(c, 2 ** (m - i - 1)))
            x = int(self.mul(x, f))
            c = int(self.mul(f, f))
            b = int(self.mul(b, c))
            m = i
        return x

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    def elem_to_json(self, code: int):
        if self.k == 1:
            return int(code)
        return [int(c) for c in self.to_digits(int(code))]

    def elem_from_json(self, v) -> int:
        if isinstance(v, list):
            return int(self.from_digits(list(v) + [0] * (self.k - len(v))))
        return int(v) % self.p if self.k == 1 else int(v) % self.q


class FieldElem:
    """A single field element with operator overloading."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        self.ctx = ctx
        self.code = int(code)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.ctx.to_digits(self.code))

    def _other(self, o) -> int:
        if isinstance(o, FieldElem):
            if o.ctx != self.ctx:
                from .errors import CtxMismatch

                raise CtxMismatch("elements of different fields")
            return o.code
        return self.ctx.scalar(o)

    def __add__(self, o):
        return FieldElem(self.ctx, self.ctx.add(self.code, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElem(self.ctx, self.ctx.sub(self.code, self._other(o)))

    def __rsub__(self, o):
        return FieldElem(self.ctx, self.ctx.sub(self._other(o), self.code))

    def __mul__(self, o):
        return FieldElem(self.ctx, self.ctx.mul(self.code, self._other(o)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __truediv__(self, o):
        return FieldElem(self.ctx, self.ctx.div(self.code, self._other(o)))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.code, int(e)))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.code))

    def __eq__(self, o) -> bool:
        if isinstance(o, FieldElem):
            return self.ctx == o.ctx and self.code == o.code
        if isinstance(o, int):
            return self.code == self.ctx.scalar(o)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx, self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        if self.ctx.k == 1:
            return f"{self.code}"
        terms = [f"{c}*x^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> FieldCtx:
    """The field F_{p^k} with the least monic irreducible modulus."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if k < 1:
        raise DegreeZero("extension degree must be at least 1")
    if p**k > FIELD_BUDGET:
        raise BudgetExceeded(f"p^k = {p**k} exceeds {FIELD_BUDGET}")
    return FieldCtx(p, k, conway_like_modulus(p, k))


def _code(x) -> int:
    return x.code if isinstance(x, FieldElem) else int(x)


def elem_order(ctx: FieldCtx, x) -> int:
    """Multiplicative order of a nonzero element, by powering."""
    c = _code(x)
    if c == 0:
        raise ZeroElement("zero has no multiplicative order")
    n = ctx.q - 1
    for r, e in factorint(n).items():
        for _ in range(e):
            if int(ctx.pow(c, n // r)) == 1:
                n //= r
            else:
                break
    return n


def ord_mod(q: int, r: int) -> int:
    """Least d >= 1 with q^d = 1 mod r."""
    from math import gcd

    if r < 1 or gcd(q, r) != 1:
        raise NotCoprime(f"gcd({q}, {r}) != 1")
    if r == 1:
        return 1
    d, x = 1, q % r
    while x != 1:
        x = x * q % r
        d += 1
    return d


def frobenius(ctx: FieldCtx, x, i: int = 1) -> FieldElem:
    return FieldElem(ctx, ctx.pow(_code(x), ctx.p ** (i % ctx.k)))


def absolute_trace(ctx: FieldCtx, x) -> int:
    """Trace to the prime field, returned as an integer residue."""
    c = _code(x)
    total = 0
    y = c
    for _ in range(ctx.k):
        total = int(ctx.add(total, y))
        y = int(ctx.pow(y, ctx.p))
    return total


def min_poly_over_prime(ctx: FieldCtx, x) -> tuple[int, ...]:
    """Minimal polynomial over F_p as coefficients, constant term first."""
    c = _code(x)
    conj = [c]
    y = int(ctx.pow(c, ctx.p))
    while y != c:
        conj.append(y)
        y = int(ctx.pow(y, ctx.p))
    poly = [1]
    for r in conj:
        # multiply by (t - r)
        nxt = [0] * (len(poly) + 1)
        for i, a in enumerate(poly):
            nxt[i + 1] = int(ctx.add(nxt[i + 1], a))
            nxt[i] = int(ctx.sub(nxt[i], ctx.mul(a, r)))
        poly = nxt
    if any(a >= ctx.p for a in poly):
        raise AssertionError("minimal polynomial not over the prime field")
    return tuple(poly)


def element_of_order(ctx: FieldCtx, r: int) -> int:
    """The least element code of multiplicative order exactly r."""
    if (ctx.q - 1) % r:
        raise ValueError(f"F_{ctx.q} has no element of order {r}")
    e = (ctx.q - 1) // r
    for y in range(1, ctx.q):
        z = int(ctx.pow(y, e))
        if elem_order(ctx, z) == r:
            return _least_of_order(ctx, r, z)
    raise AssertionError("unreachable")


def _least_of_order(ctx: FieldCtx, r: int, found: int) -> int:
    # the elements of order r are the generators of the unique cyclic subgroup
    # of order r; return the least code among them
    from math import gcd

    best = found
    for i in range(1, r):
        if gcd(i, r) == 1:
            best = min(best, int(ctx.pow(found, i)))
    return best


def primitive_element(ctx: FieldCtx) -> int:
    return element_of_order(ctx, ctx.q - 1)


def elements_as_json(ctx: FieldCtx, codes: Iterable[int]) -> list:
    return [ctx.elem_to_json(c) for c in codes]
