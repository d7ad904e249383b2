"""Truncated polynomial Green functors over a cyclic group of prime order.

Two families of two-level structures are built here: one whose norm map
cannot exist (the Frobenius obstruction), and one carrying many distinct
norm structures.  Both levels are truncated polynomial rings over Z/p;
the transfer is zero and conjugations are trivial, so each structure is
described by the prime, the variable counts, and the restriction map.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import InputError, NotPrime, ResourceBound


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(math.isqrt(p)) + 1))


def _require_prime(p: int) -> None:
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")


# --- truncated polynomial arithmetic ---------------------------------------

@dataclass(frozen=True)
class TruncPoly:
    """A polynomial over Z/p in ``s`` variables, truncated above degree ``cap``.

    ``coeffs`` maps exponent tuples to nonzero residues; ``overflow`` records
    that some product term above the cap was discarded.
    """

    p: int
    s: int
    cap: int
    coeffs: tuple = ()  # sorted ((e_1..e_s), value) pairs, value in 1..p-1
    overflow: bool = False

    def __post_init__(self):
        _require_prime(self.p)
        if self.s < 0 or self.cap < 0:
            raise InputError("variable count and degree cap must be nonnegative")
        seen = set()
        for exps, value in self.coeffs:
            if len(exps) != self.s or any(e < 0 for e in exps):
                raise InputError(f"bad exponent tuple {exps}")
            if sum(exps) > self.cap:
                raise InputError(f"term {exps} beyond degree cap {self.cap}")
            if not 0 < value < self.p:
                raise InputError(f"coefficient {value} not reduced mod {self.p}")
            if exps in seen:
                raise InputError(f"duplicate exponent tuple {exps}")
            seen.add(exps)
        if list(self.coeffs) != sorted(self.coeffs):
            raise InputError("coefficients must be sorted by exponent tuple")

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.coeffs), default=0)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e, _ in self.coeffs)

    def constant_term(self) -> int:
        zero = (0,) * self.s
        return dict(self.coeffs).get(zero, 0)

    def same_ring(self, other: "TruncPoly") -> bool:
        return (self.p, self.s, self.cap) == (other.p, other.s, other.cap)


def _from_dict(p: int, s: int, cap: int, terms: dict, overflow: bool = False) -> TruncPoly:
    coeffs = tuple(
        sorted((exps, value % p) for exps, value in terms.items() if value % p)
    )
    return TruncPoly(p=p, s=s, cap=cap, coeffs=coeffs, overflow=overflow)


def tp_zero(p: int, s: int, cap: int) -> TruncPoly:
    return TruncPoly(p=p, s=s, cap=cap)


def tp_const(p: int, s: int, cap: int, value: int) -> TruncPoly:
    return _from_dict(p, s, cap, {(0,) * s: value})


def tp_var(p: int, s: int, cap: int, i: int) -> TruncPoly:
    if not 0 <= i < s:
        raise InputError(f"variable index {i} outside range({s})")
    if cap < 1:
        raise InputError("degree cap too small to hold a variable")
    exps = tuple(1 if j == i else 0 for j in range(s))
    return _from_dict(p, s, cap, {exps: 1})


def tp_add(f: TruncPoly, g: TruncPoly) -> TruncPoly:
    if not f.same_ring(g):
        raise InputError("polynomials live in different rings")
    terms = dict(f.coeffs)
    for exps, value in g.coeffs:
        terms[exps] = terms.get(exps, 0) + value
    return _from_dict(f.p, f.s, f.cap, terms, overflow=f.overflow or g.overflow)


def tp_mul(f: TruncPoly, g: TruncPoly) -> TruncPoly:
    if not f.same_ring(g):
        raise InputError("polynomials live in different rings")
    terms: dict = {}
    overflow = f.overflow or g.overflow
    for e1, v1 in f.coeffs:
        for e2, v2 in g.coeffs:
            exps = tuple(a + b for a, b in zip(e1, e2))
            if sum(exps) > f.cap:
                overflow = True
                continue
            terms[exps] = terms.get(exps, 0) + v1 * v2
    return _from_dict(f.p, f.s, f.cap, terms, overflow=overflow)


def tp_pow(f: TruncPoly, n: int) -> TruncPoly:
    out = tp_const(f.p, f.s, f.cap, 1)
    for _ in range(n):
        out = tp_mul(out, f)
    return out


def substitute(f: TruncPoly, images: list) -> TruncPoly:
    """Apply the ring map sending each variable of ``f`` to the given image."""
    if len(images) != f.s:
        raise InputError("need one image per variable")
    if f.s == 0:
        raise InputError("substitution target ring unknown for constants")
    target = images[0]
    if any(not target.same_ring(im) for im in images):
        raise InputError("images live in different rings")
    out = tp_zero(target.p, target.s, target.cap)
    for exps, value in f.coeffs:
        term = tp_const(target.p, target.s, target.cap, value)
        for i, e in enumerate(exps):
            term = tp_mul(term, tp_pow(images[i], e))
        out = tp_add(out, term)
    return out


def poly_str(f: TruncPoly) -> str:
    if not f.coeffs:
        return "0"
    parts = []
    ordered = sorted(
        f.coeffs, key=lambda t: (sum(t[0]), tuple(-e for e in t[0]))
    )
    for exps, value in ordered:
        factors = [] if value == 1 and any(exps) else [str(value)]
        for i, e in enumerate(exps):
            name = f"x{i + 1}" if f.s > 1 else "x"
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        parts.append("*".join(factors) if factors else str(value))
    return " + ".join(parts)


# --- two-level presentations ------------------------------------------------

@dataclass(frozen=True)
class GreenCpPresentation:
    """A two-level Green functor over C_p with truncated polynomial rings.

    The bottom level has ``bottom_vars`` variables, the top level
    ``top_vars``; the restriction map sends the i-th top variable to
    ``restriction_images[i]`` in the bottom ring.  The transfer is zero
    and all conjugations are trivial.
    """

    p: int
    bottom_vars: int
    top_vars: int
    cap: int
    restriction_images: tuple
    transfer_zero: bool = True
    trivial_conjugation: bool = True

    def __post_init__(self):
        _require_prime(self.p)
        if len(self.restriction_images) != self.top_vars:
            raise InputError("need one restriction image per top variable")
        for im in self.restriction_images:
            if (im.p, im.s, im.cap) != (self.p, self.bottom_vars, self.cap):
                raise InputError("restriction image in the wrong ring")

    def restrict(self, f: TruncPoly) -> TruncPoly:
        if (f.p, f.s, f.cap) != (self.p, self.top_vars, self.cap):
            raise InputError("element not in the top ring")
        if self.top_vars == 0:
            return tp_const(self.p, self.bottom_vars, self.cap, f.constant_term())
        return substitute(f, list(self.restriction_images))


def build_R61(p: int, D: int | None = None) -> GreenCpPresentation:
    """Bottom ring Z/p[x], top ring the constants Z/p, restriction the inclusion."""
    _require_prime(p)
    cap = p if D is None else D
    if cap < p:
        raise InputError(f"degree cap {cap} too small for prime {p}")
    return GreenCpPresentation(
        p=p, bottom_vars=1, top_vars=0, cap=cap, restriction_images=()
    )


def build_R63(p: int, s: int, D: int | None = None) -> GreenCpPresentation:
    """Bottom ring Z/p[x], top ring Z/p[x_1..x_s], every x_i restricting to x."""
    _require_prime(p)
    if s < 1:
        raise InputError("need at least one top variable")
    cap = p if D is None else D
    if cap < p:
        raise InputError(f"degree cap {cap} too small for prime {p}")
    x = tp_var(p, 1, cap, 0)
    return GreenCpPresentation(
        p=p,
        bottom_vars=1,
        top_vars=s,
        cap=cap,
        restriction_images=tuple(x for _ in range(s)),
    )


# --- the Frobenius obstruction ----------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """An exhaustive record that no norm value can satisfy the Frobenius law."""

    p: int
    cap: int
    target: TruncPoly  # x^p in the bottom ring
    candidates: tuple  # (value, restriction image, matches) triples
    exists: bool

    def as_dict(self) -> dict:
        return {
            "prime": self.p,
            "degree_cap": self.cap,
            "required_restriction": poly_str(self.target),
            "candidates": [
                {
                    "norm_value": value,
                    "restriction": poly_str(image),
                    "matches": matches,
                }
                for value, image, matches in self.candidates
            ],
            "tambara_structure_exists": self.exists,
        }


def obstruction_61(p: int, D: int | None = None) -> Certificate:
    """Certify that the inclusion-restriction structure admits no norm.

    A norm for the bottom generator would be an element of the top ring
    whose restriction is x^p.  The top ring is the finite set Z/p, so
    every candidate is checked; each restricts to a constant, while x^p
    is not constant.
    """
    pres = build_R61(p, D)
    x = tp_var(p, 1, pres.cap, 0)
    target = tp_pow(x, p)
    assert not target.is_constant()
    rows = []
    for value in range(p):
        image = pres.restrict(tp_const(p, 0, pres.cap, value))
        rows.append((value, image, image.coeffs == target.coeffs))
    exists = any(matches for _, _, matches in rows)
    return Certificate(
        p=p, cap=pres.cap, target=target, candidates=tuple(rows), exists=exists
    )


# --- enumeration of norm structures -----------------------------------------

@dataclass(frozen=True)
class NormCandidate:
    """A top-ring value for the norm of the bottom generator."""

    image: TruncPoly

    def as_dict(self) -> dict:
        return {"norm_of_x": poly_str(self.image)}


def _exponent_tuples(s: int, cap: int):
    for exps in itertools.product(range(cap + 1), repeat=s):
        if sum(exps) <= cap:
            yield exps


def enumerate_63(p: int, s: int, D: int | None = None, cap: int = 10**6) -> list:
    """All top-ring elements whose restriction is x^p, exhaustively.

    Each candidate determines a ring map from the bottom ring by sending
    x to it; the Frobenius condition says the composite with restriction
    is x -> x^p.  Enumerates every coefficient vector of the truncated
    top ring and filters.
    """
    pres = build_R63(p, s, D)
    monomials = list(_exponent_tuples(s, pres.cap))
    total = p ** len(monomials)
    if total > cap:
        raise ResourceBound("norm candidate space", cap)
    x = tp_var(p, 1, pres.cap, 0)
    target = tp_pow(x, p)
    out = []
    for values in itertools.product(range(p), repeat=len(monomials)):
        f = _from_dict(p, s, pres.cap, dict(zip(monomials, values)))
        if pres.restrict(f).coeffs == target.coeffs:
            out.append(NormCandidate(image=f))
    out.sort(key=lambda c: (len(c.image.coeffs), c.image.coeffs))
    # the induced map x -> f is a ring map by construction; spot-check
    # additivity and multiplicativity of substitution anyway
    for cand in out[:3]:
        a, b = tp_add(x, tp_const(p, 1, pres.cap, 1)), tp_pow(x, 1)
        im = [cand.image]
        assert substitute(tp_add(a, b), im).coeffs == tp_add(
            substitute(a, im), substitute(b, im)
        ).coeffs
        prod = tp_mul(a, b)
        if not prod.overflow:
            sub_prod = substitute(prod, im)
            direct = tp_mul(substitute(a, im), substitute(b, im))
            if not (sub_prod.overflow or direct.overflow):
                assert sub_prod.coeffs == direct.coeffs
    return out


def check_distinct(candidates: list) -> dict:
    """Report whether the candidate norms give pairwise distinct structures.

    Two structures coincide exactly when the norm of the generator does,
    so distinctness of the images is what is certified.
    """
    images = [c.image.coeffs for c in candidates]
    duplicates = []
    seen: dict = {}
    for i, image in enumerate(images):
        if image in seen:
            duplicates.append((seen[image], i))
        else:
            seen[image] = i
    report = {
        "count": len(candidates),
        "distinct": len(seen),
        "pairwise_distinct": not duplicates,
        "duplicates": duplicates,
    }
    if candidates:
        p = candidates[0].image.p
        s = candidates[0].image.s
        report["degree_p_monomial_count"] = math.comb(s + p - 1, p)
        report["meets_monomial_bound"] = len(seen) >= report["degree_p_monomial_count"]
    return report
