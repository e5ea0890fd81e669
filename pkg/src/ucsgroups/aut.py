"""Brute-force automorphism and characteristic-subgroup oracle.

Works on the full multiplication table of a small quotient H_{p,r}/N and
uses nothing about the Frattini action: an automorphism is a generating
tuple of images satisfying every relator, found by backtracking with the
usual orbit pruning, and characteristic subgroups are joins of subgroups
generated by Aut-orbits of elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import BudgetExceeded
from .pclass2 import Quotient, pairs


class FiniteClass2Group:
    """Multiplication table of H_{p,r}/N with elements indexed 0..|G|-1.

    Index 0 is the identity and index ``p**i`` is the image of x_{i+1}.
    """

    def __init__(self, q: Quotient, max_order: int = 729):
        if q.order > max_order:
            raise BudgetExceeded(f"group order {q.order} exceeds {max_order}")
        p, r, D = q.p, q.r, q.D
        self.p, self.r, self.D = p, r, D
        self.quotient = q
        comp = q.n.nonpivots()
        m = len(comp)
        N = p ** (r + m)
        self.size = N
        idx = np.arange(N, dtype=np.int64)
        digits = (idx[:, None] // p ** np.arange(r + m)) % p
        A = digits[:, :r]
        Fv = np.zeros((N, D), dtype=np.int64)
        Fv[:, comp] = digits[:, r:]
        self.a = A
        self.fv = Fv
        self._comp = comp
        self._weights = p ** np.arange(r + m, dtype=np.int64)

        s = A[:, None, :] + A[None, :, :]
        prod_a = s % p
        cy = Fv[:, None, :r] + Fv[None, :, :r] + (s >= p)
        dz = Fv[:, None, r:] + Fv[None, :, r:]
        for t, (j, k) in enumerate(pairs(r)):
            dz[:, :, t] -= A[:, None, k] * A[None, :, j]
        frat = np.concatenate([cy, dz], axis=2).reshape(N * N, D) % p
        frat = q.n.reduce(frat) if q.n.dim else frat
        self.mul = self._encode(prod_a.reshape(N * N, r), frat).reshape(N, N)

        self.inv = np.argmin(self.mul, axis=1)  # identity has index 0
        pw = np.zeros(N, dtype=np.int64)
        cur = idx.copy()
        for _ in range(p - 1):
            cur = self.mul[cur, idx]
        pw[:] = cur
        self.pow_p = pw
        self.gens = [p**i for i in range(r)]

    def _encode(self, a: np.ndarray, frat: np.ndarray) -> np.ndarray:
        digits = np.concatenate([a, frat[:, self._comp]], axis=1)
        return digits @ self._weights

    def power(self, g: int, e: int) -> int:
        out = 0
        for _ in range(e % (self.p * self.p)):
            out = int(self.mul[out, g])
        return out

    def comm(self, g: int, h: int) -> int:
        return int(self.mul[self.mul[self.inv[g], self.inv[h]], self.mul[g, h]])

    def closure(self, mask: np.ndarray) -> np.ndarray:
        """Subgroup generated by the elements flagged in mask."""
        S = mask.copy()
        S[0] = True
        while True:
            el = np.flatnonzero(S)
            new = np.zeros_like(S)
            new[self.mul[np.ix_(el, el)].ravel()] = True
            if not (new & ~S).any():
                return S
            S |= new

    # homomorphisms given by generator images

    def _frattini_images(self, t: list[int]) -> tuple[list[int], list[int]]:
        P = [int(self.pow_p[x]) for x in t]
        C = [self.comm(t[j], t[k]) for j, k in pairs(len(t))]
        return P, C

    def relator_image(self, vec, P: list[int], C: list[int]) -> int:
        out = 0
        for coef, g in zip(vec, list(P) + list(C)):
            for _ in range(int(coef) % self.p):
                out = int(self.mul[out, g])
        return out

    def hom_map(self, t: list[int]) -> np.ndarray:
        """Images of all elements under x_i -> t_i."""
        p = self.p
        P, C = self._frattini_images(t)
        img = np.zeros(self.size, dtype=np.int64)
        powers = []
        for x in list(t) + P + C:
            row = [0]
            for _ in range(p - 1):
                row.append(int(self.mul[row[-1], x]))
            powers.append(np.array(row, dtype=np.int64))
        for i in range(self.r):
            img = self.mul[img, powers[i][self.a[:, i]]]
        for s in range(self.D):
            img = self.mul[img, powers[self.r + s][self.fv[:, s]]]
        return img


@dataclass
class AutOracleResult:
    group_order: int
    aut_order: int
    n_characteristic: int
    characteristic_orders: list[int]
    n_orbits: int
    generators: list[np.ndarray] = field(repr=False, default_factory=list)

    @property
    def ucs(self) -> bool:
        return self.n_characteristic == 3

    def to_json(self) -> dict:
        return {
            "group_order": self.group_order,
            "aut_order": self.aut_order,
            "n_characteristic": self.n_characteristic,
            "characteristic_orders": self.characteristic_orders,
            "n_orbits": self.n_orbits,
            "ucs": self.ucs,
        }


class _Search:
    def __init__(self, G: FiniteClass2Group, budget: int):
        self.G = G
        self.budget = budget
        self.steps = 0
        p, r = G.p, G.r
        self.acode = G.a @ (p ** np.arange(r))
        rel = G.quotient.n.basis
        prs = pairs(r)
        # the last generator index each relator involves
        self.rel_by_level: list[list[np.ndarray]] = [[] for _ in range(r)]
        for v in rel:
            support = [i for i in range(r) if v[i]]
            support += [x for t, (j, k) in enumerate(prs) if v[r + t] for x in (j, k)]
            self.rel_by_level[max(support) if support else 0].append(v)

    def candidates(self, prefix: list[int]) -> np.ndarray:
        G = self.G
        p, r = G.p, G.r
        span = {0}
        for x in prefix:
            ax = G.a[x]
            span = {
                int((((np.array(self._digits(s)) + c * ax) % p) @ (p ** np.arange(r))))
                for s in span
                for c in range(p)
            }
        return np.flatnonzero(~np.isin(self.acode, list(span)))

    def _digits(self, code: int) -> list[int]:
        p = self.G.p
        return [(code // p**i) % p for i in range(self.G.r)]

    def level_ok(self, t: list[int]) -> bool:
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f"automorphism search exceeded {self.budget} steps")
        level = len(t) - 1
        if not self.rel_by_level[level]:
            return True
        G = self.G
        P = [int(G.pow_p[x]) for x in t] + [0] * (G.r - len(t))
        C = []
        for j, k in pairs(G.r):
            C.append(G.comm(t[j], t[k]) if k < len(t) else 0)
        return all(G.relator_image(v, P, C) == 0 for v in self.rel_by_level[level])

    def extend(self, prefix: list[int]) -> list[int] | None:
        if len(prefix) == self.G.r:
            return prefix
        for c in self.candidates(prefix):
            t = prefix + [int(c)]
            if self.level_ok(t):
                res = self.extend(t)
                if res is not None:
                    return res
        return None


def _orbit(start: int, perms: list[np.ndarray], size: int) -> np.ndarray:
    seen = np.zeros(size, dtype=bool)
    seen[start] = True
    frontier = np.array([start])
    while frontier.size:
        nxt = np.concatenate([pm[frontier] for pm in perms]) if perms else np.array([], dtype=np.int64)
        nxt = np.unique(nxt[~seen[nxt]]) if nxt.size else nxt
        seen[nxt] = True
        frontier = nxt
    return seen


def automorphism_group(G: FiniteClass2Group, budget: int = 10**7) -> tuple[int, list[np.ndarray]]:
    """Order of Aut(G) and generators as permutations of element indices."""
    search = _Search(G, budget)
    base = G.gens
    perms: list[np.ndarray] = []
    sizes = []
    for level in reversed(range(G.r)):
        prefix = base[:level]
        orbit = _orbit(base[level], perms, G.size)
        failed = np.zeros(G.size, dtype=bool)
        for c in search.candidates(prefix):
            c = int(c)
            if orbit[c] or failed[c]:
                continue
            t = prefix + [c]
            res = search.extend(t) if search.level_ok(t) else None
            if res is None:
                failed |= _orbit(c, perms, G.size)
            else:
                perms.append(G.hom_map(res))
                orbit = _orbit(base[level], perms, G.size)
        sizes.append(int(orbit.sum()))
    return prod(sizes), perms


def characteristic_subgroups(G: FiniteClass2Group, perms: list[np.ndarray]) -> list[np.ndarray]:
    """All subgroups invariant under the group generated by perms."""
    covered = np.zeros(G.size, dtype=bool)
    orbit_closures = []
    for x in range(G.size):
        if covered[x]:
            continue
        orb = _orbit(x, perms, G.size)
        covered |= orb
        orbit_closures.append(G.closure(orb))
    found = {G.closure(np.zeros(G.size, dtype=bool)).tobytes(): G.closure(np.zeros(G.size, dtype=bool))}
    for S in orbit_closures:
        found.setdefault(S.tobytes(), S)
    changed = True
    while changed:
        changed = False
        items = list(found.values())
        for i, S in enumerate(items):
            for T in items[i + 1 :]:
                J = G.closure(S | T)
                if J.tobytes() not in found:
                    found[J.tobytes()] = J
                    changed = True
    return sorted(found.values(), key=lambda s: (int(s.sum()), s.tobytes()))


def count_orbits(G: FiniteClass2Group, perms: list[np.ndarray]) -> int:
    covered = np.zeros(G.size, dtype=bool)
    n = 0
    for x in range(G.size):
        if not covered[x]:
            covered |= _orbit(x, perms, G.size)
            n += 1
    return n


def aut_oracle(q: Quotient, budget: int = 10**7, max_order: int = 729) -> AutOracleResult:
    """Count characteristic subgroups of H/N by brute force."""
    G = FiniteClass2Group(q, max_order=max_order)
    order, perms = automorphism_group(G, budget)
    chars = characteristic_subgroups(G, perms)
    return AutOracleResult(
        group_order=G.size,
        aut_order=order,
        n_characteristic=len(chars),
        characteristic_orders=[int(s.sum()) for s in chars],
        n_orbits=count_orbits(G, perms),
        generators=perms,
    )


def all_subgroups(G: FiniteClass2Group, limit: int = 100_000) -> list[np.ndarray]:
    """Every subgroup, by joining cyclic subgroups (small groups only)."""
    cyclic = {}
    for g in range(G.size):
        m = np.zeros(G.size, dtype=bool)
        m[g] = True
        S = G.closure(m)
        cyclic.setdefault(S.tobytes(), S)
    found = dict(cyclic)
    frontier = list(cyclic.values())
    cyc = list(cyclic.values())
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyc:
                if (C & ~S).any():
                    J = G.closure(S | C)
                    key = J.tobytes()
                    if key not in found:
                        found[key] = J
                        nxt.append(J)
                        if len(found) > limit:
                            raise BudgetExceeded("too many subgroups")
        frontier = nxt
    return list(found.values())
