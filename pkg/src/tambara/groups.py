"""Finite groups as multiplication tables.

Elements are integer indices into a square multiplication table.  Symmetric
groups are materialized with Lehmer-code (lexicographic rank) indexing of
permutations, so that permutation values are reproducible across runs:
index 0 is the identity, and ``perm_from_index``/``perm_index`` give the
bijection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    IndexOutOfRange,
    InputError,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotSubgroup,
    ResourceBound,
)

DEFAULT_SYM_DEGREE_CAP = 4


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    mult: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, a: int) -> int:
        """g a g^-1"""
        return self.mul(self.mul(g, a), self.inv(g))

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            n += 1
        return n

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def validate_group(table) -> FiniteGroup:
    """Check all group axioms on a raw multiplication table and wrap it."""
    n = len(table)
    rows = []
    for row in table:
        row = tuple(int(v) for v in row)
        if len(row) != n:
            raise IndexOutOfRange(len(row), n)
        for v in row:
            if not 0 <= v < n:
                raise IndexOutOfRange(v, n)
        rows.append(row)
    mult = tuple(rows)
    if n == 0:
        raise NoIdentity("empty table has no identity")

    identity = None
    for e in range(n):
        if all(mult[e][a] == a and mult[a][e] == a for a in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no two-sided identity element")

    for a in range(n):
        for b in range(n):
            ab = mult[a][b]
            for c in range(n):
                if mult[ab][c] != mult[a][mult[b][c]]:
                    raise NotAssociative(a, b, c)

    inverse = []
    for a in range(n):
        found = None
        for b in range(n):
            if mult[a][b] == identity and mult[b][a] == identity:
                found = b
                break
        if found is None:
            raise NoInverse(a)
        inverse.append(found)

    return FiniteGroup(order=n, mult=mult, identity=identity, inverse=tuple(inverse))


def trivial_group() -> FiniteGroup:
    return validate_group([[0]])


def cyclic_group(n: int) -> FiniteGroup:
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return validate_group(table)


# permutation indexing ------------------------------------------------------

def perm_index(perm: tuple[int, ...]) -> int:
    """Lexicographic rank of a permutation of {0..n-1} via its Lehmer code."""
    n = len(perm)
    idx = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if perm[j] < perm[i])
        idx += smaller * math.factorial(n - 1 - i)
    return idx


def perm_from_index(n: int, idx: int) -> tuple[int, ...]:
    pool = list(range(n))
    out = []
    for i in range(n):
        f = math.factorial(n - 1 - i)
        q, idx = divmod(idx, f)
        out.append(pool.pop(q))
    return tuple(out)


def compose_perms(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a*b)(i) = a(b(i))"""
    return tuple(a[b[i]] for i in range(len(a)))


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> FiniteGroup:
    order = math.factorial(n)
    perms = [perm_from_index(n, i) for i in range(order)]
    table = [
        [perm_index(compose_perms(perms[a], perms[b])) for b in range(order)]
        for a in range(order)
    ]
    return validate_group(table)


def s3() -> FiniteGroup:
    return symmetric_group(3)


# subgroups -----------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        G = self.parent
        elems = self.elements
        if tuple(sorted(set(elems))) != elems:
            raise NotSubgroup(f"elements {elems} not strictly sorted")
        eset = set(elems)
        if G.identity not in eset:
            raise NotSubgroup("missing identity")
        for a in elems:
            if G.inv(a) not in eset:
                raise NotSubgroup(f"not closed under inverse at {a}")
            for b in elems:
                if G.mul(a, b) not in eset:
                    raise NotSubgroup(f"not closed under product at ({a},{b})")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._eset()

    def _eset(self):
        return set(self.elements)

    def index_of(self, g: int) -> int:
        return self.elements.index(g)

    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone group; element i is self.elements[i]."""
        pos = {g: i for i, g in enumerate(self.elements)}
        table = [
            [pos[self.parent.mul(a, b)] for b in self.elements] for a in self.elements
        ]
        return validate_group(table)

    def conjugate(self, g: int) -> "Subgroup":
        G = self.parent
        return Subgroup(G, tuple(sorted(G.conj(g, a) for a in self.elements)))

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return set(other.elements) <= set(self.elements)

    def __repr__(self):
        return f"Subgroup{self.elements}"


def full_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, (G.identity,))


def closure(G: FiniteGroup, gens) -> tuple[int, ...]:
    seen = {G.identity}
    frontier = [G.identity]
    gens = list(gens)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
            z = G.mul(x, G.inv(g))
            if z not in seen:
                seen.add(z)
                frontier.append(z)
    return tuple(sorted(seen))


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Complete subgroup list via cyclic extension, sorted by element tuple."""
    found = {closure(G, ())}
    frontier = list(found)
    while frontier:
        elems = frontier.pop()
        eset = set(elems)
        for g in G.elements():
            if g in eset:
                continue
            new = closure(G, elems + (g,))
            if new not in found:
                found.add(new)
                frontier.append(new)
    return [Subgroup(G, elems) for elems in sorted(found, key=lambda t: (len(t), t))]


@dataclass(frozen=True)
class SubgroupConjClass:
    representative: Subgroup
    members: tuple[Subgroup, ...]


def conj_classes(G: FiniteGroup) -> list[SubgroupConjClass]:
    subs = all_subgroups(G)
    seen: set[tuple[int, ...]] = set()
    classes = []
    for S in subs:
        if S.elements in seen:
            continue
        members = sorted(
            {S.conjugate(g).elements for g in G.elements()}
        )
        seen.update(members)
        rep = min(members)
        classes.append(
            SubgroupConjClass(
                representative=Subgroup(G, rep),
                members=tuple(Subgroup(G, m) for m in members),
            )
        )
    classes.sort(key=lambda c: (len(c.representative.elements), c.representative.elements))
    return classes


def conjugator(G: FiniteGroup, S: Subgroup, target: Subgroup) -> int | None:
    """Least g with g S g^-1 = target, or None."""
    tgt = set(target.elements)
    for g in G.elements():
        if {G.conj(g, a) for a in S.elements} == tgt:
            return g
    return None


# homomorphisms -------------------------------------------------------------

@dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    values: tuple[int, ...]

    def __post_init__(self):
        src, tgt = self.source, self.target
        if self.values[src.identity] != tgt.identity:
            raise InputError("homomorphism does not preserve identity")
        for a in src.elements():
            for b in src.elements():
                if self.values[src.mul(a, b)] != tgt.mul(self.values[a], self.values[b]):
                    raise InputError(f"homomorphism equation fails at ({a},{b})")

    def __call__(self, a: int) -> int:
        return self.values[a]


def generating_set(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    have = closure(G, gens)
    for g in G.elements():
        if g not in have:
            gens.append(g)
            have = closure(G, gens)
            if len(have) == G.order:
                break
    return gens


def all_homs(H: FiniteGroup, K: FiniteGroup) -> list[GroupHom]:
    """All homomorphisms H -> K, in deterministic order."""
    gens = generating_set(H)
    if not gens:
        return [GroupHom(H, K, tuple(K.identity for _ in H.elements()))]
    homs = []
    for images in itertools.product(K.elements(), repeat=len(gens)):
        values = _extend_hom(H, K, gens, images)
        if values is not None:
            homs.append(GroupHom(H, K, values))
    homs.sort(key=lambda h: h.values)
    return homs


def _extend_hom(H, K, gens, images):
    values = [None] * H.order
    values[H.identity] = K.identity
    frontier = [H.identity]
    gen_img = dict(zip(gens, images))
    while frontier:
        a = frontier.pop()
        for g, img in gen_img.items():
            b = H.mul(a, g)
            v = K.mul(values[a], img)
            if values[b] is None:
                values[b] = v
                frontier.append(b)
            elif values[b] != v:
                return None
    if any(v is None for v in values):
        return None
    # BFS consistency only covers products with generators
    for a in range(H.order):
        for b in range(H.order):
            if values[H.mul(a, b)] != K.mul(values[a], values[b]):
                return None
    return tuple(values)


def homs_to_sym(H: Subgroup, n: int, cap: int = DEFAULT_SYM_DEGREE_CAP) -> list[GroupHom]:
    """All homomorphisms from H (as a standalone group) into Sigma_n."""
    if n > cap:
        raise ResourceBound(f"symmetric group degree {n}", cap)
    return all_homs(H.as_group(), symmetric_group(n))
