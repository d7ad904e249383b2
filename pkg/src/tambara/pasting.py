"""Pasting constructions for exponential diagrams.

Each check builds the pasted candidate diagram explicitly and asks
``is_exponential`` for an isomorphism certificate; the returned witness is
the pair of isomorphisms onto the directly-computed dependent product.
"""

from __future__ import annotations

from .gsets import (
    CandidateExponential,
    GMap,
    compose,
    dependent_product,
    is_exponential,
    pullback,
)


def check_norm_restriction_commutation(i: GMap, j: GMap, k: GMap):
    """Base change: pulling back the dependent product of (i, j) along k
    yields the dependent product of the pulled-back pair.

    i : X -> Y, j : Y -> Z, k : W -> Z.  Returns the witness pair or None.
    """
    pb_jk = pullback(j, k)  # P with legs P->Y, h: P->W
    P, to_y, h = pb_jk.apex, pb_jk.to_left, pb_jk.to_right
    pb_iq = pullback(i, to_y)  # Q with legs Q->X, g: Q->P
    Q, to_x, g = pb_iq.apex, pb_iq.to_left, pb_iq.to_right

    diag = dependent_product(i, j)

    # pull the top row of the exponential diagram back along k
    pb_pi = pullback(diag.p, k)
    pi_k, pi_leg, h_prime = pb_pi.apex, pb_pi.to_left, pb_pi.to_right

    a_over_z = compose(diag.p, diag.proj)
    pb_a = pullback(a_over_z, k)
    a_k, a_leg, a_w = pb_a.apex, pb_a.to_left, pb_a.to_right

    pi_index = {pair: n for n, pair in enumerate(pb_pi.pairs)}
    g_prime = GMap(
        a_k,
        pi_k,
        tuple(
            pi_index[(diag.proj(a), w)] for (a, w) in pb_a.pairs
        ),
    )

    q_index = {pair: n for n, pair in enumerate(pb_iq.pairs)}
    p_index = {pair: n for n, pair in enumerate(pb_jk.pairs)}
    f_values = []
    for (a, w) in pb_a.pairs:
        y, _ = diag.pullback_pairs[a]
        f_values.append(q_index[(diag.e(a), p_index[(y, w)])])
    f_prime = GMap(a_k, Q, tuple(f_values))

    cand = CandidateExponential(f=f_prime, g=g_prime, h=h_prime, i=g, j=h)
    return is_exponential(cand)


def check_distributive_pentagon(i: GMap, j: GMap, k: GMap):
    """Pasting two exponential diagrams over a pullback gives a distributor
    for the composite pair (j i, k).

    i : V -> X, j : X -> Y, k : Y -> Z.  Returns the witness pair or None.
    """
    d1 = dependent_product(j, k)  # B = Pi over Z; A = Y x_Z Pi
    A, B = d1.pullback_obj, d1.pi
    e1, proj1, q = d1.e, d1.proj, d1.p

    pb = pullback(i, e1)  # P = V x_X A
    P, h, m1 = pb.apex, pb.to_left, pb.to_right

    d2 = dependent_product(m1, proj1)  # D = Pi over B; C = A x_B Pi
    C, D = d2.pullback_obj, d2.pi
    g, f, p = d2.e, d2.proj, d2.p

    cand = CandidateExponential(
        f=compose(h, g),
        g=f,
        h=compose(q, p),
        i=compose(j, i),
        j=k,
    )
    return is_exponential(cand)


def check_norm_functoriality(i: GMap, j: GMap, k: GMap):
    """Vertical pasting of exponential diagrams gives a distributor for
    (i, k j).

    i : V -> X, j : X -> Y, k : Y -> Z.  Returns the witness pair or None.
    """
    d1 = dependent_product(i, j)  # B = Pi over Y; A = X x_Y Pi
    A, B = d1.pullback_obj, d1.pi
    h, proj1, m = d1.e, d1.proj, d1.p

    d2 = dependent_product(m, k)  # D = Pi over Z; C = Y x_Z Pi
    C, D = d2.pullback_obj, d2.pi
    e2, q, r = d2.e, d2.proj, d2.p

    pb = pullback(proj1, e2)  # Q = A x_B C
    Q, g, p = pb.apex, pb.to_left, pb.to_right

    cand = CandidateExponential(
        f=compose(h, g),
        g=compose(q, p),
        h=r,
        i=i,
        j=compose(k, j),
    )
    return is_exponential(cand)
