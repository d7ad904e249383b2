"""Finite G-sets, equivariant maps, and the dependent-product construction.

A G-set is an action table: row g gives the permutation x -> g.x.  All
operations here are pure and return freshly built immutable values, with
deterministic carrier orderings so that downstream canonical forms are
reproducible.
"""

from __future__ import annotations

import itertools
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import (
    GroupMismatch,
    InputError,
    NotComposable,
    NotSubgroup,
    ResourceBound,
    ShapeError,
    TargetMismatch,
)
from .groups import FiniteGroup, Subgroup, conj_classes

DEFAULT_SECTION_CAP = 10**6

_VALIDATE = True


@contextmanager
def trusted_construction():
    """Skip construction-time validation for derived objects in hot loops.

    Only for values produced by the library's own constructions, whose
    correctness is covered by tests; user-facing entry points keep the
    checks on.
    """
    global _VALIDATE
    prev = _VALIDATE
    _VALIDATE = False
    try:
        yield
    finally:
        _VALIDATE = prev


@dataclass(frozen=True)
class GSet:
    group: FiniteGroup
    size: int
    action: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not _VALIDATE:
            return
        G = self.group
        if len(self.action) != G.order:
            raise InputError("action table must have one row per group element")
        for row in self.action:
            if len(row) != self.size or sorted(row) != list(range(self.size)):
                raise InputError("each action row must be a permutation of the carrier")
        ident = self.action[G.identity]
        if ident != tuple(range(self.size)):
            raise InputError("identity must act as the identity permutation")
        for g in G.elements():
            for h in G.elements():
                gh = G.mul(g, h)
                for x in range(self.size):
                    if self.action[gh][x] != self.action[g][self.action[h][x]]:
                        raise InputError(
                            f"action not compatible with multiplication at ({g},{h},{x})"
                        )

    def act(self, g: int, x: int) -> int:
        return self.action[g][x]

    def points(self) -> range:
        return range(self.size)

    def stabilizer(self, x: int) -> Subgroup:
        G = self.group
        return Subgroup(G, tuple(sorted(g for g in G.elements() if self.act(g, x) == x)))

    def __repr__(self):
        return f"GSet(|G|={self.group.order}, size={self.size})"


def make_gset(G: FiniteGroup, perms) -> GSet:
    rows = tuple(tuple(int(v) for v in row) for row in perms)
    size = len(rows[0]) if rows else 0
    return GSet(group=G, size=size, action=rows)


def gset_from_action(G: FiniteGroup, points, act) -> tuple[GSet, list]:
    """Build a GSet from an abstract action on a list of points.

    Points must be hashable; the carrier keeps the given order.  Returns the
    GSet and the point list (index -> point).
    """
    idx = {p: i for i, p in enumerate(points)}
    rows = tuple(
        tuple(idx[act(g, p)] for p in points) for g in G.elements()
    )
    return GSet(group=G, size=len(points), action=rows), list(points)


def empty_gset(G: FiniteGroup) -> GSet:
    return GSet(group=G, size=0, action=tuple(() for _ in G.elements()))


def point_gset(G: FiniteGroup) -> GSet:
    return GSet(group=G, size=1, action=tuple((0,) for _ in G.elements()))


def trivial_gset(G: FiniteGroup, n: int) -> GSet:
    row = tuple(range(n))
    return GSet(group=G, size=n, action=tuple(row for _ in G.elements()))


@dataclass(frozen=True)
class GMap:
    source: GSet
    target: GSet
    values: tuple[int, ...]

    def __post_init__(self):
        if not _VALIDATE:
            return
        if self.source.group is not self.target.group and self.source.group != self.target.group:
            raise GroupMismatch("source and target over different groups")
        if len(self.values) != self.source.size:
            raise InputError("value table length must match source size")
        for v in self.values:
            if not 0 <= v < self.target.size:
                raise InputError(f"value {v} outside target carrier")
        G = self.source.group
        for g in G.elements():
            for x in self.source.points():
                if self.values[self.source.act(g, x)] != self.target.act(g, self.values[x]):
                    raise InputError(f"map not equivariant at (g={g}, x={x})")

    def __call__(self, x: int) -> int:
        return self.values[x]

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and len(set(self.values)) == self.source.size


def identity_map(X: GSet) -> GMap:
    return GMap(X, X, tuple(X.points()))


def compose(g: GMap, f: GMap) -> GMap:
    """g after f."""
    if f.target != g.source:
        raise NotComposable("inner target does not match outer source")
    return GMap(f.source, g.target, tuple(g(f(x)) for x in f.source.points()))


def inverse_map(f: GMap) -> GMap:
    if not f.is_bijective():
        raise InputError("map is not bijective")
    inv = [0] * f.target.size
    for x, y in enumerate(f.values):
        inv[y] = x
    return GMap(f.target, f.source, tuple(inv))


# orbits --------------------------------------------------------------------

def orbit_decompose(X: GSet) -> list[tuple[tuple[int, ...], Subgroup, int]]:
    """Partition into orbits: (sorted points, stabilizer of representative, rep).

    The representative is the least point of the orbit; orbits come in order
    of their representatives.
    """
    G = X.group
    seen = set()
    out = []
    for x in X.points():
        if x in seen:
            continue
        orb = sorted({X.act(g, x) for g in G.elements()})
        seen.update(orb)
        out.append((tuple(orb), X.stabilizer(x), x))
    return out


def make_orbit(G: FiniteGroup, H: Subgroup) -> GSet:
    """The coset G-set G/H; point i is the coset of the i-th smallest rep."""
    if H.parent != G:
        raise NotSubgroup("subgroup belongs to a different group")
    hset = set(H.elements)
    reps = []
    covered = set()
    for g in G.elements():
        if g in covered:
            continue
        coset = {G.mul(g, h) for h in hset}
        covered |= coset
        reps.append(min(coset))
    reps.sort()
    rep_of = {}
    for i, r in enumerate(reps):
        for h in hset:
            rep_of[G.mul(r, h)] = i
    rows = tuple(
        tuple(rep_of[G.mul(g, r)] for r in reps) for g in G.elements()
    )
    return GSet(group=G, size=len(reps), action=rows)


def coset_reps(G: FiniteGroup, H: Subgroup) -> list[int]:
    """Least-element representatives of the left cosets gH, sorted."""
    hset = set(H.elements)
    reps = []
    covered = set()
    for g in G.elements():
        if g in covered:
            continue
        coset = {G.mul(g, h) for h in hset}
        covered |= coset
        reps.append(min(coset))
    return sorted(reps)


# limits / colimits ---------------------------------------------------------

@dataclass(frozen=True)
class Pullback:
    apex: GSet
    to_left: GMap
    to_right: GMap
    pairs: tuple[tuple[int, int], ...]


def pullback(f: GMap, g: GMap) -> Pullback:
    """Pullback of f : X -> Z and g : Y -> Z; carrier is lexicographic pairs."""
    if f.target != g.target:
        raise TargetMismatch("pullback legs must share a target")
    X, Y = f.source, g.source
    G = X.group
    pairs = tuple(
        (x, y) for x in X.points() for y in Y.points() if f(x) == g(y)
    )
    idx = {p: i for i, p in enumerate(pairs)}
    rows = tuple(
        tuple(idx[(X.act(h, x), Y.act(h, y))] for (x, y) in pairs)
        for h in G.elements()
    )
    P = GSet(group=G, size=len(pairs), action=rows)
    p1 = GMap(P, X, tuple(x for (x, _) in pairs))
    p2 = GMap(P, Y, tuple(y for (_, y) in pairs))
    return Pullback(apex=P, to_left=p1, to_right=p2, pairs=pairs)


@dataclass(frozen=True)
class Coproduct:
    total: GSet
    incl_left: GMap
    incl_right: GMap


def coproduct(X: GSet, Y: GSet) -> Coproduct:
    if X.group != Y.group:
        raise GroupMismatch("coproduct needs a common group")
    G = X.group
    rows = tuple(
        tuple(X.act(g, i) for i in X.points())
        + tuple(X.size + Y.act(g, j) for j in Y.points())
        for g in G.elements()
    )
    total = GSet(group=G, size=X.size + Y.size, action=rows)
    i1 = GMap(X, total, tuple(range(X.size)))
    i2 = GMap(Y, total, tuple(range(X.size, X.size + Y.size)))
    return Coproduct(total=total, incl_left=i1, incl_right=i2)


def disjoint_union(pieces: list[GSet], G: FiniteGroup) -> tuple[GSet, list[GMap]]:
    """n-ary coproduct with inclusion maps; pieces keep their order."""
    offsets = []
    total = 0
    for X in pieces:
        if X.group != G:
            raise GroupMismatch("all pieces must share the group")
        offsets.append(total)
        total += X.size
    rows = tuple(
        tuple(
            itertools.chain.from_iterable(
                (off + X.act(g, x) for x in X.points())
                for off, X in zip(offsets, pieces)
            )
        )
        for g in G.elements()
    )
    U = GSet(group=G, size=total, action=rows)
    incls = [
        GMap(X, U, tuple(range(off, off + X.size)))
        for off, X in zip(offsets, pieces)
    ]
    return U, incls


def copair(maps: list[GMap], union: GSet, incls: list[GMap]) -> GMap:
    """The map out of a disjoint union induced by maps on the pieces."""
    target = maps[0].target
    values = [0] * union.size
    for f, incl in zip(maps, incls):
        for x in f.source.points():
            values[incl(x)] = f(x)
    return GMap(union, target, tuple(values))


# dependent products --------------------------------------------------------

@dataclass(frozen=True)
class ExponentialDiagram:
    """The square-plus-row shape: sections of i over fibers of j.

        Y x_Z Pi --proj--> Pi
           |e                |p
           X ----i---> Y --j--> Z
    """

    i: GMap
    j: GMap
    pi: GSet
    pullback_obj: GSet
    p: GMap
    e: GMap
    proj: GMap
    pi_points: tuple[tuple[int, tuple[int, ...]], ...]
    pullback_pairs: tuple[tuple[int, int], ...]  # (y, pi-point)


def dependent_product(i: GMap, j: GMap, section_cap: int = DEFAULT_SECTION_CAP) -> ExponentialDiagram:
    """Sections of i : X -> Y defined on fibers of j : Y -> Z.

    A point of the product is (z, s) where s assigns to each y in the fiber
    of z a preimage under i; the carrier is sorted by z then by the image
    tuple over the sorted fiber.  G acts by conjugation.  Empty fibers
    contribute the single empty section.
    """
    if i.target != j.source:
        raise NotComposable("maps are not composable")
    X, Y, Z = i.source, i.target, j.target
    G = X.group

    fibers = {z: [y for y in Y.points() if j(y) == z] for z in Z.points()}
    preimages = {y: [x for x in X.points() if i(x) == y] for y in Y.points()}

    points: list[tuple[int, tuple[int, ...]]] = []
    for z in Z.points():
        fib = fibers[z]
        count = 1
        for y in fib:
            count *= len(preimages[y])
            if count > section_cap:
                raise ResourceBound(f"section count over fiber of {z}", section_cap)
        for choice in itertools.product(*(preimages[y] for y in fib)):
            points.append((z, tuple(choice)))
    points.sort()
    idx = {pt: k for k, pt in enumerate(points)}

    def act(g, pt):
        z, choice = pt
        z2 = Z.act(g, z)
        fib2 = fibers[z2]
        assignment = {Y.act(g, y): X.act(g, x) for y, x in zip(fibers[z], choice)}
        return (z2, tuple(assignment[y] for y in fib2))

    rows = tuple(tuple(idx[act(g, pt)] for pt in points) for g in G.elements())
    Pi = GSet(group=G, size=len(points), action=rows)
    p = GMap(Pi, Z, tuple(z for (z, _) in points))

    pb = pullback(j, p)
    e_values = []
    for (y, k) in pb.pairs:
        z, choice = points[k]
        e_values.append(choice[fibers[z].index(y)])
    e = GMap(pb.apex, X, tuple(e_values))
    return ExponentialDiagram(
        i=i,
        j=j,
        pi=Pi,
        pullback_obj=pb.apex,
        p=p,
        e=e,
        proj=pb.to_right,
        pi_points=tuple(points),
        pullback_pairs=pb.pairs,
    )


@dataclass(frozen=True)
class CandidateExponential:
    """A candidate distributor (f, g, h) over the bottom row (i, j).

        A --g--> B
        |f           |h
        X --i--> Y --j--> Z
    """

    f: GMap
    g: GMap
    h: GMap
    i: GMap
    j: GMap

    def __post_init__(self):
        if self.f.source != self.g.source:
            raise ShapeError("f and g must share a source")
        if self.f.target != self.i.source:
            raise ShapeError("f must land in the source of i")
        if self.g.target != self.h.source:
            raise ShapeError("g must land in the source of h")
        if self.h.target != self.j.target:
            raise ShapeError("h must land in the target of j")
        if self.i.target != self.j.source:
            raise ShapeError("bottom row must be composable")
        comp_left = compose(self.j, compose(self.i, self.f))
        comp_right = compose(self.h, self.g)
        if comp_left.values != comp_right.values:
            raise ShapeError("square does not commute")


def equivariant_bijections(
    X: GSet, Y: GSet, constraint=None
) -> Iterator[tuple[int, ...]]:
    """All equivariant bijections X -> Y as value tables (backtracking).

    ``constraint(x, y)`` may veto individual assignments.
    """
    if X.size != Y.size:
        return
    G = X.group
    orbits = orbit_decompose(X)

    def extend(k, values, used):
        if k == len(orbits):
            yield tuple(values)
            return
        pts, stab, rep = orbits[k]
        for y in Y.points():
            if y in used:
                continue
            if Y.stabilizer(y).elements != stab.elements:
                continue
            if constraint is not None and not constraint(rep, y):
                continue
            assignment = {}
            ok = True
            for g in G.elements():
                xx, yy = X.act(g, rep), Y.act(g, y)
                if xx in assignment:
                    if assignment[xx] != yy:
                        ok = False
                        break
                else:
                    if yy in used and yy not in assignment.values():
                        pass
                    assignment[xx] = yy
            if not ok:
                continue
            imgs = set(assignment.values())
            if len(imgs) != len(assignment) or imgs & used:
                continue
            if constraint is not None and any(
                not constraint(xx, yy) for xx, yy in assignment.items()
            ):
                continue
            for xx, yy in assignment.items():
                values[xx] = yy
            yield from extend(k + 1, values, used | imgs)
            for xx in assignment:
                values[xx] = None

    yield from extend(0, [None] * X.size, set())


def is_exponential(cand: CandidateExponential) -> Optional[tuple[GMap, GMap]]:
    """Decide whether (f, g, h) is a distributor for (i, j).

    Returns the witnessing pair of isomorphisms (alpha : A -> Y x_Z Pi,
    beta : B -> Pi) when the candidate is isomorphic to the dependent
    product over the fixed bottom row, else None.
    """
    ref = dependent_product(cand.i, cand.j)
    A, B = cand.f.source, cand.g.target
    if B.size != ref.pi.size or A.size != ref.pullback_obj.size:
        return None

    pb_lookup = {pair: k for k, pair in enumerate(ref.pullback_pairs)}

    for beta_vals in equivariant_bijections(
        B, ref.pi, constraint=lambda b, q: cand.h(b) == ref.p(q)
    ):
        beta = GMap(B, ref.pi, beta_vals)
        alpha_vals = []
        ok = True
        for a in A.points():
            y = cand.i(cand.f(a))
            key = (y, beta(cand.g(a)))
            k = pb_lookup.get(key)
            if k is None or ref.e(k) != cand.f(a):
                ok = False
                break
            alpha_vals.append(k)
        if not ok or len(set(alpha_vals)) != A.size:
            continue
        alpha = GMap(A, ref.pullback_obj, tuple(alpha_vals))
        return alpha, beta
    return None


# induction / restriction ---------------------------------------------------

@dataclass(frozen=True)
class Induction:
    gset: GSet
    points: tuple[tuple[int, int], ...]  # (coset rep in G, point of X)
    subgroup: Subgroup

    def index_of(self, rep: int, x: int) -> int:
        return self.points.index((rep, x))


def restrict(H: Subgroup, X: GSet) -> GSet:
    """Forget the action down to H; the carrier is unchanged.

    The result is a G-set over ``H.as_group()`` (element i of that group is
    ``H.elements[i]``).
    """
    if H.parent != X.group:
        raise NotSubgroup("subgroup belongs to a different group")
    Hg = H.as_group()
    rows = tuple(X.action[h] for h in H.elements)
    return GSet(group=Hg, size=X.size, action=rows)


def induce(G: FiniteGroup, H: Subgroup, X: GSet) -> Induction:
    """G x_H X for an H-set X (over H.as_group()).

    Carrier points are pairs (coset representative, point of X), sorted; the
    class of (g, x) is normalized by factoring g = r h with r the least
    element of gH.
    """
    if H.parent != G:
        raise NotSubgroup("subgroup belongs to a different group")
    if X.group != H.as_group():
        raise GroupMismatch("X must be a set over H.as_group()")
    reps = coset_reps(G, H)
    rep_lookup = {}
    for r in reps:
        for h in H.elements:
            rep_lookup[G.mul(r, h)] = r
    hpos = {h: i for i, h in enumerate(H.elements)}
    points = tuple((r, x) for r in reps for x in X.points())
    idx = {p: i for i, p in enumerate(points)}

    rows = []
    for g in G.elements():
        row = []
        for (r, x) in points:
            t = G.mul(g, r)
            r2 = rep_lookup[t]
            h = G.mul(G.inv(r2), t)
            row.append(idx[(r2, X.act(hpos[h], x))])
        rows.append(tuple(row))
    gset = GSet(group=G, size=len(points), action=tuple(rows))
    return Induction(gset=gset, points=points, subgroup=H)


def induce_map(ind_src: Induction, ind_tgt: Induction, f: GMap) -> GMap:
    """G x_H f for an H-map f between the inducted H-sets."""
    values = []
    for (r, x) in ind_src.points:
        values.append(ind_tgt.index_of(r, f(x)))
    return GMap(ind_src.gset, ind_tgt.gset, tuple(values))


def adjoint_to_g_map(ind: Induction, T: GSet, f_h: GMap) -> GMap:
    """Adjoint G-map G x_H X -> T of an H-map X -> restrict(H, T)."""
    G = T.group
    values = []
    for (r, x) in ind.points:
        values.append(T.act(r, f_h(x)))
    return GMap(ind.gset, T, tuple(values))


# isomorphism ---------------------------------------------------------------

def orbit_type(X: GSet) -> tuple[tuple[int, ...], ...]:
    """Sorted multiset of stabilizer conjugacy class representatives."""
    G = X.group
    classes = conj_classes(G)
    rep_of = {}
    for c in classes:
        for m in c.members:
            rep_of[m.elements] = c.representative.elements
    return tuple(sorted(rep_of[stab.elements] for (_, stab, _) in orbit_decompose(X)))


def gset_iso(X: GSet, Y: GSet) -> Optional[GMap]:
    """An equivariant bijection, or None; decided via orbit types first."""
    if X.group != Y.group:
        raise GroupMismatch("isomorphism requires a common group")
    if X.size != Y.size or orbit_type(X) != orbit_type(Y):
        return None
    for values in equivariant_bijections(X, Y):
        return GMap(X, Y, values)
    return None


def all_gmaps(X: GSet, Y: GSet) -> list[GMap]:
    """All equivariant maps X -> Y, in deterministic order."""
    G = X.group
    orbits = orbit_decompose(X)
    choices = []
    for pts, stab, rep in orbits:
        valid = []
        for y in Y.points():
            if all(g in Y.stabilizer(y) for g in stab.elements):
                valid.append(y)
        choices.append((rep, valid))
    out = []
    for imgs in itertools.product(*(v for (_, v) in choices)):
        values = [None] * X.size
        for (rep, _), y in zip(choices, imgs):
            for g in G.elements():
                values[X.act(g, rep)] = Y.act(g, y)
        out.append(GMap(X, Y, tuple(values)))
    out.sort(key=lambda f: f.values)
    return out
