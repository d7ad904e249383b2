"""Shared test utilities: random instance generation and independent oracles."""

import itertools

from tambara.groups import FiniteGroup, all_subgroups, conj_classes
from tambara.gsets import (
    ExponentialDiagram,
    all_gmaps,
    compose,
    disjoint_union,
    empty_gset,
    make_orbit,
    pullback,
)


def random_gset(G: FiniteGroup, rng, max_size=5, allow_empty=True):
    subs = all_subgroups(G)
    pieces = []
    total = 0
    while True:
        cands = [S for S in subs if total + G.order // S.order <= max_size]
        if not cands:
            break
        if pieces and rng.random() < 0.35:
            break
        S = rng.choice(cands)
        pieces.append(make_orbit(G, S))
        total += G.order // S.order
    if not pieces:
        if allow_empty:
            return empty_gset(G)
        return make_orbit(G, subs[-1])
    return disjoint_union(pieces, G)[0]


def random_gmap(X, Y, rng):
    maps = all_gmaps(X, Y)
    if not maps:
        return None
    return rng.choice(maps)


def random_composable_pair(G, rng, max_size=5):
    """A pair (i : X -> Y, j : Y -> Z) of random equivariant maps."""
    for _ in range(50):
        Z = random_gset(G, rng, max_size, allow_empty=False)
        Y = random_gset(G, rng, max_size)
        j = random_gmap(Y, Z, rng)
        if j is None:
            continue
        X = random_gset(G, rng, max_size)
        i = random_gmap(X, Y, rng)
        if i is None:
            continue
        return i, j
    raise AssertionError("could not build a composable pair")


def random_composable_triple(G, rng, max_size=5):
    for _ in range(50):
        i, j = random_composable_pair(G, rng, max_size)
        W = random_gset(G, rng, max_size)
        k = random_gmap(W, j.target, rng)
        if k is not None:
            return i, j, k
    raise AssertionError("could not build a composable triple")


def random_chain(G, rng, max_size=5):
    """Composable i : V -> X, j : X -> Y, k : Y -> Z."""
    for _ in range(50):
        i, j = random_composable_pair(G, rng, max_size)
        Z = random_gset(G, rng, max_size, allow_empty=False)
        k = random_gmap(j.target, Z, rng)
        if k is not None:
            return i, j, k
    raise AssertionError("could not build a chain")


def check_universal_property(diag: ExponentialDiagram) -> bool:
    """Brute-force oracle for the dependent product.

    For every orbit W and every map w : W -> Z, maps W -> Pi over Z must
    biject (via evaluation) with sections of i on the pullback Y x_Z W.
    """
    X, Y, Z = diag.i.source, diag.i.target, diag.j.target
    G = X.group
    pb_index = {pair: n for n, pair in enumerate(diag.pullback_pairs)}
    for cls in conj_classes(G):
        W = make_orbit(G, cls.representative)
        for w in all_gmaps(W, Z):
            lhs = [
                u
                for u in all_gmaps(W, diag.pi)
                if compose(diag.p, u).values == w.values
            ]
            pb = pullback(diag.j, w)
            rhs = {
                s.values
                for s in all_gmaps(pb.apex, X)
                if compose(diag.i, s).values == pb.to_left.values
            }
            images = set()
            for u in lhs:
                vals = tuple(
                    diag.e(pb_index[(y, u(wpt))]) for (y, wpt) in pb.pairs
                )
                images.add(vals)
            if len(images) != len(lhs) or images != rhs:
                return False
    return True


def all_small_gsets(G, max_size):
    """All iso-class representatives of G-sets of size <= max_size."""
    orbits = [make_orbit(G, c.representative) for c in conj_classes(G)]
    out = [empty_gset(G)]
    sizes = [o.size for o in orbits]

    def rec(start, budget, chosen):
        for idx in range(start, len(orbits)):
            if sizes[idx] <= budget:
                pick = chosen + [orbits[idx]]
                out.append(disjoint_union(pick, G)[0])
                rec(idx, budget - sizes[idx], pick)

    rec(0, max_size, [])
    return out
