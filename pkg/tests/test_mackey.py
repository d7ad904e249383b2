import pytest

from helpers import all_small_gsets
from tambara.errors import GroupMismatch
from tambara.groups import conj_classes, cyclic_group, symmetric_group, trivial_group
from tambara.mackey import (
    MackeyTable,
    burnside_table,
    check_mackey_axioms,
    completion,
    expand_in_basis,
    identity_table_map,
    mat_identity,
    mat_mul,
    represented_table,
    table_iso,
    verify_table_map,
)
from tambara.gsets import all_gmaps, empty_gset, point_gset

C2 = cyclic_group(2)
C3 = cyclic_group(3)
C4 = cyclic_group(4)
S3 = symmetric_group(3)
E = trivial_group()


def level_of_point(table):
    # the one-point orbit is the level with full stabilizer
    for i, O in enumerate(table.levels):
        if O.size == 1:
            return i
    raise AssertionError


def test_burnside_trivial_group():
    t = burnside_table(E)
    assert len(t.levels) == 1
    assert t.ranks() == (1,)


def test_burnside_c2_ranks():
    t = burnside_table(C2)
    by_size = {O.size: t.rank(i) for i, O in enumerate(t.levels)}
    assert by_size[1] == 2  # fixed level: [pt], [C_2/e]
    assert by_size[2] == 1  # free level


def test_burnside_transfer_restrict_of_unit():
    # t r (unit) is the free-orbit class at the fixed level
    t = burnside_table(C2)
    top = level_of_point(t)
    free = 1 - top
    f = all_gmaps(t.levels[free], t.levels[top])[0]
    tr = mat_mul(
        t.transfer_mats[(free, top, f.values)],
        t.restriction_mats[(free, top, f.values)],
    )
    # identify basis positions by the size of V in the stored representative
    sizes = [t.reps[top][k].v.size for k in t.bases[top]]
    unit_idx = sizes.index(1)
    free_idx = sizes.index(2)
    col = tuple(tr[r][unit_idx] for r in range(2))
    expected = tuple(1 if r == free_idx else 0 for r in range(2))
    assert col == expected


@pytest.mark.parametrize("G,n_classes", [(C2, 2), (C3, 2), (C4, 3), (S3, 4)])
def test_burnside_rank_counts_subgroup_classes(G, n_classes):
    t = burnside_table(G)
    assert len(t.levels) == n_classes
    for i, O in enumerate(t.levels):
        stab = O.stabilizer(0)
        H = stab.as_group()
        assert t.rank(i) == len(conj_classes(H))


def test_burnside_axioms_pass():
    for G in (E, C2, C3, S3):
        assert check_mackey_axioms(burnside_table(G)) == []


def test_corrupted_transfer_fails_axioms():
    t = burnside_table(C2)
    bad = MackeyTable(
        group=t.group,
        levels=t.levels,
        bases=t.bases,
        reps=t.reps,
        transfer_mats=dict(t.transfer_mats),
        restriction_mats=dict(t.restriction_mats),
        semi=t.semi,
    )
    key = next(k for k in bad.transfer_mats if k[0] != k[1])
    mat = bad.transfer_mats[key]
    rows = [list(r) for r in mat]
    rows[0][0] += 1
    bad.transfer_mats[key] = tuple(tuple(r) for r in rows)
    report = check_mackey_axioms(bad)
    assert report != []


def test_represented_empty_is_zero():
    t = represented_table(C2, empty_gset(C2))
    assert t.ranks() == (0, 0)
    assert check_mackey_axioms(t) == []


def test_represented_point_is_burnside():
    for G in (E, C2, C3):
        m = table_iso(burnside_table(G), represented_table(G, point_gset(G)))
        assert m is not None
        assert verify_table_map(m)


def test_represented_c2_free_generator_ranks():
    from tambara.groups import Subgroup
    from tambara.gsets import make_orbit

    free = make_orbit(C2, Subgroup(C2, (C2.identity,)))
    t = represented_table(C2, free)
    by_size = {O.size: t.rank(i) for i, O in enumerate(t.levels)}
    assert by_size[1] == 1
    assert by_size[2] == 2


def test_represented_axioms_small_generators_c2():
    for T in all_small_gsets(C2, 3):
        assert check_mackey_axioms(represented_table(C2, T)) == []


def test_table_iso_reflexive():
    t = burnside_table(C2)
    m = table_iso(t, t)
    assert m is not None and verify_table_map(m)
    assert verify_table_map(identity_table_map(t))


def test_table_iso_rank_mismatch():
    assert table_iso(burnside_table(C2), represented_table(C2, empty_gset(C2))) is None


def test_table_iso_group_mismatch():
    with pytest.raises(GroupMismatch):
        table_iso(burnside_table(C2), burnside_table(C3))


def test_completion_flags_and_idempotence():
    t = burnside_table(C2)
    c = completion(t)
    assert t.semi and not c.semi
    assert c.transfer_mats == t.transfer_mats
    assert c.restriction_mats == t.restriction_mats
    assert completion(c).semi is False
    assert completion(c).bases == c.bases


def test_expand_in_basis_roundtrip():
    from tambara.bispans import element_of

    t = burnside_table(C2)
    top = level_of_point(t)
    for n, key in enumerate(t.bases[top]):
        vec = expand_in_basis(t, top, element_of(t.reps[top][key]))
        assert vec == tuple(1 if m == n else 0 for m in range(t.rank(top)))
