"""Twisted exponentials and the comparison elements built from them.

For a subgroup H of G and a homomorphism phi : H -> Sigma_n, the carrier
of the twisted exponential is the set of functions {1..n} -> T with H
acting by (h.f)(j) = h.f(phi(h)^-1 j).  Each such pair produces a
distinguished degree-n diagram class (the comparison generator), and the
connecting maps between pairs act on induced carriers by
[k, f, m] -> [kg, g^-1 f(sigma(-)), sigma^-1(m)].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bispans import Bispan, Element, element_of, restrict_along, transfer
from .errors import GroupMismatch, InputError, ResourceBound, WitnessFailed
from .freetamb import ft_basis_reps
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    all_subgroups,
    homs_to_sym,
    perm_from_index,
    perm_index,
    symmetric_group,
)
from .gsets import (
    GMap,
    GSet,
    Induction,
    adjoint_to_g_map,
    all_gmaps,
    identity_map,
    induce,
    induce_map,
    point_gset,
    pullback,
    restrict,
    trusted_construction,
)

DEFAULT_EXP_CAP = 10**6


def _inverse_perm(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


@dataclass(frozen=True)
class PhiSubgroup:
    subgroup: Subgroup
    phi: GroupHom  # subgroup.as_group() -> symmetric_group(n)
    n: int

    def __post_init__(self):
        if self.phi.source != self.subgroup.as_group():
            raise GroupMismatch("twist must be defined on the subgroup")
        if self.phi.target != symmetric_group(self.n):
            raise GroupMismatch("twist must land in the right symmetric group")
        # the graph {(h, phi(h))} meets 1 x Sigma_n only at the identity
        assert all(
            self.phi(i) == self.phi.target.identity
            for i, h in enumerate(self.subgroup.elements)
            if h == self.subgroup.parent.identity
        )

    def perm(self, h_index: int) -> tuple:
        return perm_from_index(self.n, self.phi(h_index))


def family_FGn(G: FiniteGroup, n: int, cap: int = 6) -> list[PhiSubgroup]:
    """All pairs (H, phi) with H a subgroup and phi : H -> Sigma_n."""
    if n < 1:
        raise InputError("arity must be at least 1")
    out = []
    for H in all_subgroups(G):
        for phi in homs_to_sym(H, n, cap=cap):
            out.append(PhiSubgroup(subgroup=H, phi=phi, n=n))
    return out


@dataclass(frozen=True)
class TwistedExponential:
    gset: GSet  # over subgroup.as_group()
    functions: tuple  # carrier labels: tuples {1..n} -> points of T
    pair: PhiSubgroup

    def index(self, f: tuple) -> int:
        return self.functions.index(f)


def exp_phi(T: GSet, pphi: PhiSubgroup, cap: int = DEFAULT_EXP_CAP) -> TwistedExponential:
    """The H-set of functions {1..n} -> T with the twisted action."""
    H = pphi.subgroup
    if H.parent != T.group:
        raise GroupMismatch("subgroup must belong to the acting group")
    n = pphi.n
    if T.size**n > cap:
        raise ResourceBound("twisted exponential size", cap)
    functions = tuple(itertools.product(range(T.size), repeat=n))
    index = {f: i for i, f in enumerate(functions)}
    rows = []
    for h_idx, h in enumerate(H.elements):
        inv_perm = _inverse_perm(pphi.perm(h_idx))
        row = tuple(
            index[tuple(T.act(h, f[inv_perm[j]]) for j in range(n))]
            for f in functions
        )
        rows.append(row)
    gset = GSet(group=H.as_group(), size=len(functions), action=tuple(rows))
    return TwistedExponential(gset=gset, functions=functions, pair=pphi)


def _exp_times_n(E: TwistedExponential) -> tuple[GSet, GMap]:
    """The H-set E x {1..n} with the diagonal action, and the projection."""
    pphi = E.pair
    n = pphi.n
    Hg = E.gset.group
    size = E.gset.size * n
    rows = []
    for h_idx in range(Hg.order):
        perm = pphi.perm(h_idx)
        rows.append(
            tuple(
                E.gset.act(h_idx, w // n) * n + perm[w % n] for w in range(size)
            )
        )
    gset = GSet(group=Hg, size=size, action=tuple(rows))
    proj = GMap(gset, E.gset, tuple(w // n for w in range(size)))
    return gset, proj


def xi_generator(pphi: PhiSubgroup, T: GSet, cap: int = DEFAULT_EXP_CAP) -> Element:
    """The degree-n comparison class at the induced twisted exponential."""
    G = T.group
    H = pphi.subgroup
    E = exp_phi(T, pphi, cap=cap)
    EW, proj = _exp_times_n(E)
    n = pphi.n
    res_t = restrict(H, T)
    evaluation = GMap(
        EW, res_t, tuple(E.functions[w // n][w % n] for w in range(EW.size))
    )
    ind_w = induce(G, H, EW)
    ind_e = induce(G, H, E.gset)
    a = adjoint_to_g_map(ind_w, T, evaluation)
    b = induce_map(ind_w, ind_e, proj)
    bs = Bispan(
        t=T,
        u=ind_w.gset,
        v=ind_e.gset,
        x=ind_e.gset,
        a=a,
        b=b,
        c=identity_map(ind_e.gset),
    )
    return element_of(bs)


def orbit_map_condition(
    ll: PhiSubgroup, hp: PhiSubgroup, g: int, sigma: tuple
) -> bool:
    """Whether (g, sigma) connects the two pairs as orbits.

    Requires L inside the g-conjugate of H, with the twists matching up to
    conjugation by sigma.
    """
    if ll.subgroup.parent != hp.subgroup.parent or ll.n != hp.n:
        raise GroupMismatch("pairs must share a group and an arity")
    G = ll.subgroup.parent
    H = hp.subgroup
    h_pos = {h: i for i, h in enumerate(H.elements)}
    sigma_inv = _inverse_perm(sigma)
    for l_idx, l in enumerate(ll.subgroup.elements):
        conj = G.mul(G.mul(G.inv(g), l), g)
        if conj not in h_pos:
            return False
        expected = tuple(
            sigma[hp.perm(h_pos[conj])[sigma_inv[j]]] for j in range(ll.n)
        )
        if ll.perm(l_idx) != expected:
            return False
    return True


def _connecting_maps(ll, hp, g, sigma, T):
    """The induced maps on carriers for a connecting (g, sigma)."""
    G = T.group
    n = ll.n
    e_l = exp_phi(T, ll)
    e_h = exp_phi(T, hp)
    ew_l, proj_l = _exp_times_n(e_l)
    ew_h, proj_h = _exp_times_n(e_h)
    ind_el = induce(G, ll.subgroup, e_l.gset)
    ind_eh = induce(G, hp.subgroup, e_h.gset)
    ind_wl = induce(G, ll.subgroup, ew_l)
    ind_wh = induce(G, hp.subgroup, ew_h)

    ginv = G.inv(g)
    sigma_inv = _inverse_perm(sigma)
    e_h_index = {f: i for i, f in enumerate(e_h.functions)}

    norm_eh = _induction_normalizer(ind_eh, e_h.gset)
    norm_wh = _induction_normalizer(ind_wh, ew_h)

    def twist(f: tuple) -> tuple:
        return tuple(T.act(ginv, f[sigma[j]]) for j in range(n))

    mu_e_values = []
    for (r, f_idx) in ind_el.points:
        f2 = twist(e_l.functions[f_idx])
        mu_e_values.append(norm_eh(G.mul(r, g), e_h_index[f2]))
    mu_e = GMap(ind_el.gset, ind_eh.gset, tuple(mu_e_values))

    mu_w_values = []
    for (r, w) in ind_wl.points:
        f2 = twist(e_l.functions[w // n])
        j2 = sigma_inv[w % n]
        mu_w_values.append(norm_wh(G.mul(r, g), e_h_index[f2] * n + j2))
    mu_w = GMap(ind_wl.gset, ind_wh.gset, tuple(mu_w_values))

    return (
        mu_e,
        mu_w,
        (ind_el, ind_eh, ind_wl, ind_wh),
        (proj_l, proj_h),
        (e_l, e_h),
        (ew_l, ew_h),
    )


def _induction_normalizer(ind: Induction, h_set: GSet):
    """Send an arbitrary class [k, x] to its carrier index."""
    G = ind.subgroup.parent
    H = ind.subgroup
    rep_of = {}
    reps = sorted({r for (r, _) in ind.points})
    for r in reps:
        for h in H.elements:
            rep_of[G.mul(r, h)] = r
    h_pos = {h: i for i, h in enumerate(H.elements)}
    idx = {p: i for i, p in enumerate(ind.points)}

    def normalize(k: int, x: int) -> int:
        r = rep_of[k]
        h_idx = h_pos[G.mul(G.inv(r), k)]
        return idx[(r, h_set.act(h_idx, x))]

    return normalize


def xi_naturality_check(
    ll: PhiSubgroup, hp: PhiSubgroup, g: int, sigma: tuple, T: GSet,
    corrupt: bool = False,
) -> list:
    """Verify the connecting map respects the comparison diagrams.

    Checks equivariance of the induced carrier maps, the evaluation
    triangle, the projection square, and that the square is a pullback.
    Returns failure strings.  With ``corrupt`` set, two values of the
    carrier map are deliberately swapped first, as a negative control
    that the comparisons can fail.
    """
    if not orbit_map_condition(ll, hp, g, sigma):
        raise InputError("the pair (g, sigma) does not connect the two orbits")
    report = []
    G = T.group
    try:
        mu_e, mu_w, inds, projs, exps, ews = _connecting_maps(ll, hp, g, sigma, T)
    except InputError as err:
        return [f"connecting map is not equivariant: {err}"]
    ind_el, ind_eh, ind_wl, ind_wh = inds
    proj_l, proj_h = projs
    if corrupt and mu_w.source.size >= 2:
        values = tuple((v + 1) % mu_w.target.size for v in mu_w.values)
        with trusted_construction():
            mu_w = GMap(mu_w.source, mu_w.target, values)

    n = ll.n
    e_l, e_h = exps
    ew_l, ew_h = ews
    res_t_l = restrict(ll.subgroup, T)
    res_t_h = restrict(hp.subgroup, T)
    eval_l = GMap(
        ew_l, res_t_l, tuple(e_l.functions[w // n][w % n] for w in range(ew_l.size))
    )
    eval_h = GMap(
        ew_h, res_t_h, tuple(e_h.functions[w // n][w % n] for w in range(ew_h.size))
    )
    a_l = adjoint_to_g_map(ind_wl, T, eval_l)
    a_h = adjoint_to_g_map(ind_wh, T, eval_h)
    b_l = induce_map(ind_wl, ind_el, proj_l)
    b_h = induce_map(ind_wh, ind_eh, proj_h)

    carrier = ind_wl.gset.points()
    if tuple(a_h(mu_w(u)) for u in carrier) != a_l.values:
        report.append("evaluation triangle does not commute")
    if tuple(b_h(mu_w(u)) for u in carrier) != tuple(mu_e(b_l(u)) for u in carrier):
        report.append("projection square does not commute")
    else:
        pb = pullback(b_h, mu_e)
        pair_index = {pair: i for i, pair in enumerate(pb.pairs)}
        images = [pair_index[(mu_w(u), b_l(u))] for u in ind_wl.gset.points()]
        if sorted(images) != list(range(pb.apex.size)):
            report.append("projection square is not a pullback")
    return report


def xi_surjectivity(T: GSet, n: int, cap: int = DEFAULT_EXP_CAP) -> list:
    """Witness each degree-n basis class at the one-point level.

    For every basis diagram, reads off the pair (H, phi) and the fixed
    function from the fiber over a base point, builds the span through the
    induced twisted exponential, and verifies that restricting the
    comparison class and transferring down reproduces the diagram.
    """
    G = T.group
    pt = point_gset(G)
    witnesses = []
    sym = symmetric_group(n)
    basis = ft_basis_reps(T, pt, n)
    for key in sorted(basis):
        bs = basis[key]
        V = bs.v
        v0 = 0
        H = V.stabilizer(v0)
        fiber = sorted(u for u in bs.u.points() if bs.b(u) == v0)
        if len(fiber) != n:
            raise WitnessFailed(f"fiber size mismatch for {key}")
        fiber_pos = {u: j for j, u in enumerate(fiber)}
        hom_values = []
        for h in H.elements:
            perm = tuple(fiber_pos[bs.u.act(h, fiber[j])] for j in range(n))
            hom_values.append(perm_index(perm))
        phi = GroupHom(H.as_group(), sym, tuple(hom_values))
        pphi = PhiSubgroup(subgroup=H, phi=phi, n=n)
        E = exp_phi(T, pphi, cap=cap)
        f_fixed = tuple(bs.a(u) for u in fiber)
        x0 = E.index(f_fixed)
        if any(E.gset.act(h_idx, x0) != x0 for h_idx in range(len(H.elements))):
            raise WitnessFailed(f"function not fixed for {key}")
        ind_e = induce(G, H, E.gset)
        normalize = _induction_normalizer(ind_e, E.gset)
        q_values = []
        for v in V.points():
            gmove = next(gg for gg in G.elements() if V.act(gg, v0) == v)
            q_values.append(normalize(gmove, x0))
        q = GMap(V, ind_e.gset, tuple(q_values))
        xi_el = xi_generator(pphi, T, cap=cap)
        down = all_gmaps(V, pt)[0]
        out = transfer(restrict_along(xi_el, q), down)
        if out.components != (key,):
            raise WitnessFailed(f"comparison does not reproduce {key}")
        witnesses.append(
            {
                "basis": key,
                "subgroup": H.elements,
                "phi": phi.values,
                "fixed_function": f_fixed,
                "verified": True,
            }
        )
    return witnesses
