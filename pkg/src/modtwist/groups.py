"""
Finite groups given by a Cayley table on indices 0..n-1, with 0 the identity.

These stand in for Galois groups of a fixed finite extension M/Q: the
absolute Galois groups of Q, F, Q(p), F(p) all become subgroups of one
``FiniteGroup``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import ContractError, GroupTableError
from .fp_linalg import legendre_class

MAX_ORDER = 10_000


@dataclass(frozen=True)
class Violation:
    """First failure found by a checker; ``witness`` holds the offending data."""

    reason: str
    witness: tuple = ()

    def __str__(self):
        return f"{self.reason} at {self.witness}" if self.witness else self.reason


class FiniteGroup:
    def __init__(self, table, labels=None):
        rows = [tuple(int(x) for x in row) for row in table]
        n = len(rows)
        if n == 0:
            raise GroupTableError("empty Cayley table")
        if n > MAX_ORDER:
            raise GroupTableError(f"group order {n} exceeds the cap {MAX_ORDER}")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise GroupTableError(f"row {i} has length {len(row)}, expected {n}")
            if any(x < 0 or x >= n for x in row):
                raise GroupTableError(f"row {i} has an entry outside 0..{n - 1}")
        self.n = n
        self.table = tuple(rows)
        self.labels = tuple(labels) if labels is not None else None
        self._verify()

    def _verify(self):
        n, T = self.n, self.table
        ident = tuple(range(n))
        if T[0] != ident or tuple(T[i][0] for i in range(n)) != ident:
            raise GroupTableError("element 0 is not a two-sided identity")
        arr = np.asarray(T, dtype=np.int64)
        for i in range(n):
            if len(set(T[i])) != n:
                raise GroupTableError(f"row {i} is not a permutation")
            if len(np.unique(arr[:, i])) != n:
                raise GroupTableError(f"column {i} is not a permutation")
        # Light's test: associativity against a generating set suffices
        for s in self._magma_generators():
            left = arr[arr[:, s], :]
            right = arr[:, arr[s, :]]
            bad = np.argwhere(left != right)
            if len(bad):
                x, y = (int(t) for t in bad[0])
                raise GroupTableError(f"not associative: ({x}*{s})*{y} != {x}*({s}*{y})")
        inv = [0] * n
        for x in range(n):
            y = T[x].index(0)
            if T[y][x] != 0:
                raise GroupTableError(f"element {x} has no two-sided inverse")
            inv[x] = y
        self.inverse = tuple(inv)

    def _magma_generators(self):
        gens, reached = [], {0}
        T = self.table
        for x in range(1, self.n):
            if x in reached:
                continue
            gens.append(x)
            frontier = list(reached | set(gens))
            reached = set(frontier)
            while frontier:
                nxt = []
                for a in frontier:
                    for g in gens:
                        b = T[a][g]
                        if b not in reached:
                            reached.add(b)
                            nxt.append(b)
                frontier = nxt
        return gens

    @classmethod
    def from_perm_gens(cls, gens: Sequence[Sequence[int]]):
        """
        Permutation group generated by one-line permutations of {0..m-1}.
        Elements are indexed in breadth-first discovery order from the
        identity; the product is composition with the right factor applied
        first, ``(x*y)[i] = x[y[i]]``.
        """
        gens = [tuple(int(x) for x in g) for g in gens]
        m = len(gens[0]) if gens else 0
        for g in gens:
            if len(g) != m or sorted(g) != list(range(m)):
                raise GroupTableError(f"{list(g)} is not a permutation of 0..{m - 1}")
        e = tuple(range(m))
        elems, index = [e], {e: 0}
        queue = deque([e])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = tuple(x[i] for i in g)
                if y not in index:
                    if len(elems) >= MAX_ORDER:
                        raise GroupTableError(f"generated group exceeds the cap {MAX_ORDER}")
                    index[y] = len(elems)
                    elems.append(y)
                    queue.append(y)
        table = [[index[tuple(x[i] for i in y)] for y in elems] for x in elems]
        return cls(table, labels=elems)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        out = 0
        for _ in range(k):
            out = self.table[out][a]
        return out

    def conj(self, t: int, s: int) -> int:
        """t s t^-1"""
        return self.table[self.table[t][s]][self.inverse[t]]

    def element_order(self, g: int) -> int:
        return element_order(self, g)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.n)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    @cached_property
    def generators(self) -> tuple:
        return self.whole.generators

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"FiniteGroup(order={self.n})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)


def build_group(data: Mapping) -> FiniteGroup:
    """Build from ``{"cayley": [[...]]}`` or ``{"perm_gens": [[...], ...]}``."""
    if "cayley" in data and "perm_gens" in data:
        raise GroupTableError("give either 'cayley' or 'perm_gens', not both")
    if "cayley" in data:
        return FiniteGroup(data["cayley"])
    if "perm_gens" in data:
        return FiniteGroup.from_perm_gens(data["perm_gens"])
    raise GroupTableError("group description needs 'cayley' or 'perm_gens'")


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple
    _set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        object.__setattr__(self, "_set", frozenset(self.members))

    def __contains__(self, x):
        return x in self._set

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def order(self):
        return len(self.members)

    @cached_property
    def generators(self) -> tuple:
        """Greedy generating set: scan members in index order, keep any not yet generated."""
        gens: list = []
        span = {0}
        for x in self.members:
            if x not in span:
                gens.append(x)
                span = set(_closure(self.parent, gens))
        return tuple(gens)

    def is_normal(self) -> bool:
        G = self.parent
        return all(G.conj(g, h) in self for g in G.generators for h in self.generators)

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(self._set & other._set))

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self._set <= other._set


def _closure(G: FiniteGroup, gens: Iterable[int]) -> list:
    gens = list(gens)
    seen, out = {0}, [0]
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = G.table[a][g]
            if b not in seen:
                seen.add(b)
                out.append(b)
                queue.append(b)
    return out


def subgroup_closure(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = list(gens)
    for g in gens:
        if not 0 <= g < G.n:
            raise ContractError(f"element index {g} out of range for a group of order {G.n}")
    return Subgroup(G, tuple(_closure(G, gens)))


def coset_reps(G: FiniteGroup, H: Subgroup) -> list:
    """One representative per left coset xH, smallest index first (0 represents H)."""
    covered: set = set()
    reps = []
    for x in range(G.n):
        if x in covered:
            continue
        reps.append(x)
        covered.update(G.table[x][h] for h in H.members)
    return reps


def coset_power(G: FiniteGroup, H: Subgroup, t: int) -> int:
    """Least k >= 1 with t^k in H."""
    k, y = 1, t
    while y not in H:
        y = G.table[y][t]
        k += 1
    return k


def cyclic_quotient_data(G: FiniteGroup, H: Subgroup):
    """
    ``(tau, d)`` when H is normal in G with G/H cyclic of order d, where tau
    is the smallest index whose coset generates the quotient; otherwise None.
    """
    if not H.is_normal():
        return None
    d = G.n // H.order
    for t in range(G.n):
        if coset_power(G, H, t) == d:
            return t, d
    return None


def element_order(G: FiniteGroup, g: int) -> int:
    k, y = 1, g
    while y != 0:
        y = G.table[y][g]
        k += 1
    return k


def verify_character(G: FiniteGroup, chi: Mapping[int, int], domain: Optional[Subgroup] = None,
                     p: Optional[int] = None) -> Optional[Violation]:
    """
    Check that ``chi`` is multiplicative on ``domain`` (default all of G).

    With ``p`` given the values are residues in F_p^x; otherwise they are
    signs +-1 and the kernel must have index 1 or 2.
    """
    dom = domain.members if domain is not None else range(G.n)
    for x in dom:
        if x not in chi:
            return Violation("character undefined", (x,))
        v = chi[x]
        if p is None:
            if v not in (1, -1):
                return Violation("sign character takes a value other than +-1", (x,))
        elif v % p == 0:
            return Violation("character takes the value 0", (x,))
    mod = p if p is not None else None
    for x in dom:
        for y in dom:
            lhs = chi[G.table[x][y]]
            rhs = chi[x] * chi[y]
            if mod is not None:
                lhs, rhs = lhs % mod, rhs % mod
            if lhs != rhs:
                return Violation("not multiplicative", (x, y))
    return None


def sign_of_residue_char(G: FiniteGroup, eps_p: Mapping[int, int], p: int) -> dict:
    """Project an F_p^x-valued character to F_p^x / squares, written as +-1."""
    return {x: legendre_class(eps_p[x], p).sign for x in range(G.n)}


def kernel(G: FiniteGroup, chi: Mapping[int, int]) -> Subgroup:
    return Subgroup(G, tuple(x for x in range(G.n) if chi[x] == 1))


# Small named groups used by tests, fixtures and the corpus generator.

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """Elements (a, b) are indexed as a * |B| + b."""
    nb = B.n
    idx = lambda a, b: a * nb + b
    return FiniteGroup([[idx(A.table[x // nb][y // nb], B.table[x % nb][y % nb])
                         for y in range(A.n * nb)] for x in range(A.n * nb)])


def symmetric_group(m: int) -> FiniteGroup:
    cycle = tuple(list(range(1, m)) + [0])
    swap = tuple([1, 0] + list(range(2, m)))
    return FiniteGroup.from_perm_gens([cycle, swap])


def dihedral_group(m: int) -> FiniteGroup:
    """Symmetries of the m-gon, order 2m."""
    rot = tuple((i + 1) % m for i in range(m))
    ref = tuple((-i) % m for i in range(m))
    return FiniteGroup.from_perm_gens([rot, ref])


def quaternion_group() -> FiniteGroup:
    # left-regular permutations of the 8 units +-1, +-i, +-j, +-k
    units = ["1", "i", "j", "k"]
    mult = {("1", u): (1, u) for u in units}
    mult.update({(u, "1"): (1, u) for u in units})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for s in (1, -1) for u in units]
    index = {e: i for i, e in enumerate(elems)}

    def prod(x, y):
        s, u = mult[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    table = [[index[prod(x, y)] for y in elems] for x in elems]
    return FiniteGroup(table)
