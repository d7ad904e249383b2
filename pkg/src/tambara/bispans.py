"""Bispans T <- U -> V -> X and the free-functor diagram calculus.

Elements of the free structure at ports (T, X) are finite multisets of
isomorphism classes of bispans whose middle-right object V is a single
orbit.  Canonical forms are computed per orbit component by minimizing an
explicit encoding over base-point traversal labelings, so equal keys mean
isomorphic diagrams fixing both ports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import PortMismatch, ShapeError
from .gsets import (
    GMap,
    GSet,
    compose,
    coproduct,
    copair,
    dependent_product,
    disjoint_union,
    empty_gset,
    equivariant_bijections,
    identity_map,
    orbit_decompose,
    pullback,
)


@dataclass(frozen=True)
class Bispan:
    t: GSet
    u: GSet
    v: GSet
    x: GSet
    a: GMap  # U -> T
    b: GMap  # U -> V
    c: GMap  # V -> X

    def __post_init__(self):
        if self.a.source != self.u or self.a.target != self.t:
            raise ShapeError("left leg must map U to T")
        if self.b.source != self.u or self.b.target != self.v:
            raise ShapeError("middle leg must map U to V")
        if self.c.source != self.v or self.c.target != self.x:
            raise ShapeError("right leg must map V to X")


def theta(T: GSet) -> Bispan:
    """The universal element: the all-identity diagram at T."""
    i = identity_map(T)
    return Bispan(t=T, u=T, v=T, x=T, a=i, b=i, c=i)


def unit_bispan(T: GSet, X: GSet) -> Bispan:
    """Multiplicative unit over X: empty U, V = X with the identity."""
    G = X.group
    emp = empty_gset(G)
    to_t = GMap(emp, T, ())
    to_v = GMap(emp, X, ())
    return Bispan(t=T, u=emp, v=X, x=X, a=to_t, b=to_v, c=identity_map(X))


# canonicalization ----------------------------------------------------------

def _traversal_labels(X: GSet, base: int, points) -> tuple[dict, list]:
    """First-visit labels of an orbit, scanning group elements in order."""
    G = X.group
    lab: dict[int, int] = {}
    order: list[int] = []
    for g in G.elements():
        p = X.act(g, base)
        if p not in lab:
            lab[p] = len(order)
            order.append(p)
    assert len(order) == len(points)
    return lab, order


def canonical_component(bs: Bispan):
    """Canonical encoding of a bispan whose V is a single orbit.

    Minimizes, over all base points of V and of each U-orbit, the tuple
    (sizes, relabeled V action, c values, sorted U-orbit encodings).  The
    ports T and X are never relabeled.
    """
    G = bs.v.group
    v_points = list(bs.v.points())
    if not v_points:
        raise ShapeError("component must have nonempty V")
    u_orbits = orbit_decompose(bs.u)
    best = None
    for v0 in v_points:
        lab_v, order_v = _traversal_labels(bs.v, v0, v_points)
        v_action = tuple(
            tuple(lab_v[bs.v.act(g, p)] for p in order_v) for g in G.elements()
        )
        c_vals = tuple(bs.c(p) for p in order_v)
        orbit_encs = []
        for pts, _, _ in u_orbits:
            local_best = None
            for u0 in pts:
                lab_u, order_u = _traversal_labels(bs.u, u0, pts)
                enc = (
                    len(pts),
                    tuple(
                        tuple(lab_u[bs.u.act(g, p)] for p in order_u)
                        for g in G.elements()
                    ),
                    tuple(bs.a(p) for p in order_u),
                    tuple(lab_v[bs.b(p)] for p in order_u),
                )
                if local_best is None or enc < local_best:
                    local_best = enc
            orbit_encs.append(local_best)
        orbit_encs.sort()
        cand = (bs.v.size, bs.u.size, v_action, c_vals, tuple(orbit_encs))
        if best is None or cand < best:
            best = cand
    return best


def component_degree(key) -> int:
    v_size, u_size = key[0], key[1]
    return u_size // v_size


# elements ------------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    """An effective element: multiset of orbit-component classes at (T, X)."""

    t: GSet
    x: GSet
    components: tuple  # sorted tuple of canonical keys, repeats = multiplicity
    reps: dict = field(compare=False, hash=False, repr=False, default_factory=dict)

    def degree_split(self) -> dict[int, "Element"]:
        out: dict[int, list] = {}
        for key in self.components:
            out.setdefault(component_degree(key), []).append(key)
        return {
            n: Element(self.t, self.x, tuple(sorted(keys)), self.reps)
            for n, keys in sorted(out.items())
        }

    def degrees(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for key in self.components:
            d = component_degree(key)
            out[d] = out.get(d, 0) + 1
        return out

    def is_zero(self) -> bool:
        return not self.components

    def __len__(self):
        return len(self.components)


def zero(T: GSet, X: GSet) -> Element:
    return Element(t=T, x=X, components=())


def one(T: GSet, X: GSet) -> Element:
    return element_of(unit_bispan(T, X))


def theta_element(T: GSet) -> Element:
    return element_of(theta(T))


def _subgset(X: GSet, points: list[int]) -> tuple[GSet, dict]:
    idx = {p: i for i, p in enumerate(points)}
    rows = tuple(tuple(idx[X.act(g, p)] for p in points) for g in X.group.elements())
    return GSet(group=X.group, size=len(points), action=rows), idx


def split_components(bs: Bispan) -> list[Bispan]:
    """Split a bispan along the orbits of V."""
    out = []
    for pts, _, _ in orbit_decompose(bs.v):
        vpts = list(pts)
        v_sub, v_idx = _subgset(bs.v, vpts)
        upts = [u for u in bs.u.points() if bs.b(u) in v_idx]
        u_sub, u_idx = _subgset(bs.u, upts)
        a = GMap(u_sub, bs.t, tuple(bs.a(p) for p in upts))
        b = GMap(u_sub, v_sub, tuple(v_idx[bs.b(p)] for p in upts))
        c = GMap(v_sub, bs.x, tuple(bs.c(p) for p in vpts))
        out.append(Bispan(t=bs.t, u=u_sub, v=v_sub, x=bs.x, a=a, b=b, c=c))
    return out


def element_of(bs: Bispan) -> Element:
    keys = []
    reps: dict = {}
    for comp in split_components(bs):
        key = canonical_component(comp)
        keys.append(key)
        reps.setdefault(key, comp)
    return Element(t=bs.t, x=bs.x, components=tuple(sorted(keys)), reps=reps)


def bispan_class(bs: Bispan):
    """The isomorphism class of a bispan fixing its ports: the sorted key tuple."""
    return element_of(bs).components


def merge_to_bispan(el: Element) -> Bispan:
    """Reassemble an element into a single bispan (disjoint union of reps)."""
    comps = [el.reps[key] for key in el.components]
    G = el.x.group
    if not comps:
        return Bispan(
            t=el.t,
            u=empty_gset(G),
            v=empty_gset(G),
            x=el.x,
            a=GMap(empty_gset(G), el.t, ()),
            b=GMap(empty_gset(G), empty_gset(G), ()),
            c=GMap(empty_gset(G), el.x, ()),
        )
    U, incl_u = disjoint_union([c.u for c in comps], G)
    V, incl_v = disjoint_union([c.v for c in comps], G)
    a = copair([c.a for c in comps], U, incl_u)
    c_leg = copair([c.c for c in comps], V, incl_v)
    b_values = [0] * U.size
    for comp, iu, iv in zip(comps, incl_u, incl_v):
        for p in comp.u.points():
            b_values[iu(p)] = iv(comp.b(p))
    b = GMap(U, V, tuple(b_values))
    return Bispan(t=el.t, u=U, v=V, x=el.x, a=a, b=b, c=c_leg)


# raw bispan operations -----------------------------------------------------

def bispan_transfer(bs: Bispan, f: GMap) -> Bispan:
    """Compose the right leg with f : X -> Y."""
    if f.source != bs.x:
        raise PortMismatch("transfer map must start at the right port")
    return Bispan(t=bs.t, u=bs.u, v=bs.v, x=f.target, a=bs.a, b=bs.b, c=compose(f, bs.c))


def bispan_restrict(bs: Bispan, f: GMap) -> Bispan:
    """Double pullback along f : Y -> X."""
    if f.target != bs.x:
        raise PortMismatch("restriction map must end at the right port")
    pb1 = pullback(bs.c, f)  # P with legs P -> V, P -> Y
    pb2 = pullback(bs.b, pb1.to_left)  # Q with legs Q -> U, Q -> P
    return Bispan(
        t=bs.t,
        u=pb2.apex,
        v=pb1.apex,
        x=f.source,
        a=compose(bs.a, pb2.to_left),
        b=pb2.to_right,
        c=pb1.to_right,
    )


def bispan_norm(bs: Bispan, f: GMap, section_cap: int = 10**6) -> Bispan:
    """Multiplicative pushforward along f : X -> Y via the dependent product."""
    if f.source != bs.x:
        raise PortMismatch("norm map must start at the right port")
    diag = dependent_product(bs.c, f, section_cap=section_cap)
    # A = X x_Y Pi with e : A -> V;  B = Pi over Y
    pb = pullback(bs.b, diag.e)  # P with legs P -> U, P -> A
    return Bispan(
        t=bs.t,
        u=pb.apex,
        v=diag.pi,
        x=f.target,
        a=compose(bs.a, pb.to_left),
        b=compose(diag.proj, pb.to_right),
        c=diag.p,
    )


# element operations --------------------------------------------------------

def _require_ports(e1: Element, e2: Element):
    if e1.t != e2.t or e1.x != e2.x:
        raise PortMismatch("elements must share both ports")


def add(e1: Element, e2: Element) -> Element:
    _require_ports(e1, e2)
    reps = dict(e1.reps)
    reps.update({k: v for k, v in e2.reps.items() if k not in reps})
    return Element(
        t=e1.t,
        x=e1.x,
        components=tuple(sorted(e1.components + e2.components)),
        reps=reps,
    )


def transfer(el: Element, f: GMap) -> Element:
    if f.source != el.x:
        raise PortMismatch("transfer map must start at the element's level")
    out = zero(el.t, f.target)
    for key in el.components:
        out = add(out, element_of(bispan_transfer(el.reps[key], f)))
    return out


def restrict_along(el: Element, f: GMap) -> Element:
    if f.target != el.x:
        raise PortMismatch("restriction map must end at the element's level")
    out = zero(el.t, f.source)
    for key in el.components:
        out = add(out, element_of(bispan_restrict(el.reps[key], f)))
    return out


def norm(el: Element, f: GMap, section_cap: int = 10**6) -> Element:
    if f.source != el.x:
        raise PortMismatch("norm map must start at the element's level")
    merged = merge_to_bispan(el)
    return element_of(bispan_norm(merged, f, section_cap=section_cap))


def mul(e1: Element, e2: Element) -> Element:
    """Product: transfer both factors into X + X, then norm along the fold."""
    _require_ports(e1, e2)
    X = e1.x
    cp = coproduct(X, X)
    paired = add(transfer(e1, cp.incl_left), transfer(e2, cp.incl_right))
    fold = copair([identity_map(X), identity_map(X)], cp.total, [cp.incl_left, cp.incl_right])
    return norm(paired, fold)


# brute-force isomorphism (oracle) ------------------------------------------

def bispans_isomorphic(b1: Bispan, b2: Bispan) -> Optional[tuple]:
    """Search for equivariant bijections on U and V fixing T and X."""
    if b1.t != b2.t or b1.x != b2.x:
        return None
    if b1.u.size != b2.u.size or b1.v.size != b2.v.size:
        return None
    for sv in equivariant_bijections(
        b1.v, b2.v, constraint=lambda p, q: b1.c(p) == b2.c(q)
    ):
        for su in equivariant_bijections(
            b1.u,
            b2.u,
            constraint=lambda p, q: b1.a(p) == b2.a(q) and sv[b1.b(p)] == b2.b(q),
        ):
            return su, sv
    return None
