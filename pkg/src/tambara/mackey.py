"""Mackey-style tables: free bases per orbit level with integer matrices.

A table stores, for each conjugacy class of subgroups, a canonical basis of
diagram classes at the orbit G/H, together with transfer and restriction
matrices for every equivariant map between level orbits.  Conjugation
actions are the matrices of the orbit automorphisms, so they need no
separate bookkeeping.  Only free bases are supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from .bispans import Bispan, bispan_restrict, bispan_transfer, element_of
from .errors import GroupMismatch
from .gsets import (
    GMap,
    GSet,
    all_gmaps,
    compose,
    empty_gset,
    gset_iso,
    identity_map,
    make_orbit,
    orbit_decompose,
    pullback,
)
from .groups import FiniteGroup, conj_classes

Matrix = tuple  # tuple of row tuples of ints


def mat_zero(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_add(m1: Matrix, m2: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(m1, m2))


def mat_mul(m1: Matrix, m2: Matrix) -> Matrix:
    cols2 = len(m2[0]) if m2 else 0
    return tuple(
        tuple(sum(m1[i][k] * m2[k][j] for k in range(len(m2))) for j in range(cols2))
        for i in range(len(m1))
    )


def _perm_matrix(perm: tuple) -> Matrix:
    n = len(perm)
    return tuple(tuple(1 if perm[j] == i else 0 for j in range(n)) for i in range(n))


@dataclass
class MackeyTable:
    group: FiniteGroup
    levels: tuple  # orbit GSet per subgroup conjugacy class
    bases: tuple  # per level: sorted tuple of canonical diagram keys
    reps: tuple  # per level: dict key -> representative Bispan
    transfer_mats: dict  # (i, j, f.values) -> matrix, level i to level j
    restriction_mats: dict  # (i, j, f.values) -> matrix, level j to level i
    semi: bool

    def rank(self, level: int) -> int:
        return len(self.bases[level])

    def ranks(self) -> tuple:
        return tuple(len(b) for b in self.bases)


def expand_in_basis(table: MackeyTable, level: int, element) -> tuple:
    """Coefficient vector of an effective element in the level basis."""
    index = {key: n for n, key in enumerate(table.bases[level])}
    vec = [0] * len(index)
    for key in element.components:
        vec[index[key]] += 1
    return tuple(vec)


def _build_table(G: FiniteGroup, basis_fn, semi: bool = True) -> MackeyTable:
    levels = tuple(make_orbit(G, c.representative) for c in conj_classes(G))
    bases = []
    reps = []
    for O in levels:
        rep_map = basis_fn(O)
        bases.append(tuple(sorted(rep_map)))
        reps.append(rep_map)
    table = MackeyTable(
        group=G,
        levels=levels,
        bases=tuple(bases),
        reps=tuple(reps),
        transfer_mats={},
        restriction_mats={},
        semi=semi,
    )
    for i, Oi in enumerate(levels):
        for j, Oj in enumerate(levels):
            for f in all_gmaps(Oi, Oj):
                key = (i, j, f.values)
                t_cols = [
                    expand_in_basis(table, j, element_of(bispan_transfer(reps[i][k], f)))
                    for k in bases[i]
                ]
                table.transfer_mats[key] = tuple(
                    tuple(col[r] for col in t_cols) for r in range(len(bases[j]))
                )
                r_cols = [
                    expand_in_basis(table, i, element_of(bispan_restrict(reps[j][k], f)))
                    for k in bases[j]
                ]
                table.restriction_mats[key] = tuple(
                    tuple(col[r] for col in r_cols) for r in range(len(bases[i]))
                )
    return table


def burnside_table(G: FiniteGroup) -> MackeyTable:
    """Levels are spanned by orbits over each base orbit (empty top row)."""
    emp = empty_gset(G)

    def basis_fn(O: GSet):
        out = {}
        for cls in conj_classes(G):
            W = make_orbit(G, cls.representative)
            for c in all_gmaps(W, O):
                bs = Bispan(
                    t=emp,
                    u=emp,
                    v=W,
                    x=O,
                    a=GMap(emp, emp, ()),
                    b=GMap(emp, W, ()),
                    c=c,
                )
                out.setdefault(element_of(bs).components[0], bs)
        return out

    return _build_table(G, basis_fn)


def represented_table(G: FiniteGroup, T: GSet) -> MackeyTable:
    """Levels are spanned by spans O <- V -> T with V an orbit."""
    if T.group != G:
        raise GroupMismatch("generator must live over the same group")

    def basis_fn(O: GSet):
        out = {}
        for cls in conj_classes(G):
            W = make_orbit(G, cls.representative)
            for c in all_gmaps(W, O):
                for a in all_gmaps(W, T):
                    bs = Bispan(t=T, u=W, v=W, x=O, a=a, b=identity_map(W), c=c)
                    out.setdefault(element_of(bs).components[0], bs)
        return out

    return _build_table(G, basis_fn)


def completion(table: MackeyTable) -> MackeyTable:
    """Levelwise additive completion: same bases and matrices, signs allowed."""
    return MackeyTable(
        group=table.group,
        levels=table.levels,
        bases=table.bases,
        reps=table.reps,
        transfer_mats=dict(table.transfer_mats),
        restriction_mats=dict(table.restriction_mats),
        semi=False,
    )


def check_mackey_axioms(table: MackeyTable) -> list:
    """Verify functoriality and the pullback relation on all orbit pairs.

    Returns a list of human-readable failure entries; empty means pass.
    """
    report = []
    levels = table.levels

    if table.semi:
        for key, mat in list(table.transfer_mats.items()) + list(
            table.restriction_mats.items()
        ):
            if any(entry < 0 for row in mat for entry in row):
                report.append(f"negative entry in a semi table at {key}")

    for i, O in enumerate(levels):
        ident = identity_map(O).values
        if table.transfer_mats[(i, i, ident)] != mat_identity(table.rank(i)):
            report.append(f"transfer along id at level {i} is not the identity")
        if table.restriction_mats[(i, i, ident)] != mat_identity(table.rank(i)):
            report.append(f"restriction along id at level {i} is not the identity")

    for i, Oi in enumerate(levels):
        for j, Oj in enumerate(levels):
            for f in all_gmaps(Oi, Oj):
                for k, Ok in enumerate(levels):
                    for g in all_gmaps(Oj, Ok):
                        gf = compose(g, f).values
                        lhs_t = table.transfer_mats[(i, k, gf)]
                        rhs_t = mat_mul(
                            table.transfer_mats[(j, k, g.values)],
                            table.transfer_mats[(i, j, f.values)],
                        )
                        if lhs_t != rhs_t:
                            report.append(
                                f"transfer not functorial on {i}->{j}->{k}"
                            )
                        lhs_r = table.restriction_mats[(i, k, gf)]
                        rhs_r = mat_mul(
                            table.restriction_mats[(i, j, f.values)],
                            table.restriction_mats[(j, k, g.values)],
                        )
                        if lhs_r != rhs_r:
                            report.append(
                                f"restriction not functorial on {i}->{j}->{k}"
                            )

    level_by_iso = list(enumerate(levels))

    def level_of_orbit(P: GSet):
        for idx, O in level_by_iso:
            iso = gset_iso(O, P)
            if iso is not None:
                return idx, iso
        raise AssertionError("orbit does not match any level object")

    for k, Ok in enumerate(levels):
        for i, Oi in enumerate(levels):
            for f in all_gmaps(Oi, Ok):
                for j, Oj in enumerate(levels):
                    for g in all_gmaps(Oj, Ok):
                        lhs = mat_mul(
                            table.restriction_mats[(j, k, g.values)],
                            table.transfer_mats[(i, k, f.values)],
                        )
                        pb = pullback(f, g)
                        total = mat_zero(table.rank(j), table.rank(i))
                        for pts, _, _ in orbit_decompose(pb.apex):
                            P, idx_map = _sub_orbit(pb.apex, pts)
                            q1 = GMap(P, Oi, tuple(pb.to_left(p) for p in pts))
                            q2 = GMap(P, Oj, tuple(pb.to_right(p) for p in pts))
                            c_idx, u = level_of_orbit(P)
                            q1u = compose(q1, u)
                            q2u = compose(q2, u)
                            term = mat_mul(
                                table.transfer_mats[(c_idx, j, q2u.values)],
                                table.restriction_mats[(c_idx, i, q1u.values)],
                            )
                            total = mat_add(total, term)
                        if lhs != total:
                            report.append(
                                "pullback relation fails for "
                                f"f: {i}->{k} {f.values}, g: {j}->{k} {g.values}"
                            )
    return report


def _sub_orbit(X: GSet, pts):
    idx = {p: n for n, p in enumerate(pts)}
    rows = tuple(tuple(idx[X.act(g, p)] for p in pts) for g in X.group.elements())
    return GSet(group=X.group, size=len(pts), action=rows), idx


@dataclass
class MackeyTableMap:
    source: MackeyTable
    target: MackeyTable
    matrices: tuple  # per level


def verify_table_map(m: MackeyTableMap) -> bool:
    """Check commutation with every stored transfer and restriction matrix."""
    src, tgt = m.source, m.target
    if src.group != tgt.group:
        return False
    for (i, j, vals), mat in src.transfer_mats.items():
        if mat_mul(m.matrices[j], mat) != mat_mul(tgt.transfer_mats[(i, j, vals)], m.matrices[i]):
            return False
    for (i, j, vals), mat in src.restriction_mats.items():
        if mat_mul(m.matrices[i], mat) != mat_mul(
            tgt.restriction_mats[(i, j, vals)], m.matrices[j]
        ):
            return False
    return True


def identity_table_map(table: MackeyTable) -> MackeyTableMap:
    return MackeyTableMap(
        source=table,
        target=table,
        matrices=tuple(mat_identity(table.rank(i)) for i in range(len(table.levels))),
    )


def table_iso(t1: MackeyTable, t2: MackeyTable) -> Optional[MackeyTableMap]:
    """Search for a levelwise basis permutation commuting with all matrices."""
    if t1.group != t2.group:
        raise GroupMismatch("tables must share a group")
    if t1.ranks() != t2.ranks():
        return None
    n_levels = len(t1.levels)
    chosen: list = [None] * n_levels

    def consistent(upto: int) -> bool:
        mats = [(_perm_matrix(p) if p is not None else None) for p in chosen]
        for (i, j, vals), mat in t1.transfer_mats.items():
            if i <= upto and j <= upto:
                if mat_mul(mats[j], mat) != mat_mul(t2.transfer_mats[(i, j, vals)], mats[i]):
                    return False
        for (i, j, vals), mat in t1.restriction_mats.items():
            if i <= upto and j <= upto:
                if mat_mul(mats[i], mat) != mat_mul(
                    t2.restriction_mats[(i, j, vals)], mats[j]
                ):
                    return False
        return True

    def rec(level: int):
        if level == n_levels:
            return True
        for perm in permutations(range(t1.rank(level))):
            chosen[level] = perm
            if consistent(level) and rec(level + 1):
                return True
        chosen[level] = None
        return False

    if not rec(0):
        return None
    return MackeyTableMap(
        source=t1,
        target=t2,
        matrices=tuple(_perm_matrix(p) for p in chosen),
    )
