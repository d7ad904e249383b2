import random

import pytest

from tambara.bispans import (
    add,
    element_of,
    mul,
    norm,
    restrict_along,
    split_components,
    theta_element,
    transfer,
)
from tambara.errors import (
    GroupMismatch,
    PortMismatch,
    TnrSyntaxError,
    UnknownName,
)
from tambara.freetamb import ft_basis_reps
from tambara.groups import Subgroup, cyclic_group, trivial_subgroup
from tambara.gsets import (
    GMap,
    all_gmaps,
    disjoint_union,
    identity_map,
    make_orbit,
    point_gset,
)
from tambara.tnr import (
    Binary,
    MapContext,
    Theta,
    Unary,
    evaluate,
    parse,
    pretty_print,
    typecheck,
)

C2 = cyclic_group(2)


def free_orbit(G):
    return make_orbit(G, trivial_subgroup(G))


def c2_context():
    T = free_orbit(C2)
    pt = point_gset(C2)
    fold = all_gmaps(T, pt)[0]
    return MapContext(
        generator=T,
        gsets={"T": T, "pt": pt},
        gmaps={
            "id": identity_map(T),
            "f": fold,
            "idpt": identity_map(pt),
        },
    )


# --- parsing ----------------------------------------------------------------

def test_parse_theta_leaf():
    assert isinstance(parse("theta"), Theta)


def test_parse_unary_chain():
    e = parse("t[k] n[j] r[i] theta")
    assert isinstance(e, Unary) and e.kind == "t" and e.name == "k"
    assert e.arg.kind == "n" and e.arg.name == "j"
    assert e.arg.arg.kind == "r" and e.arg.arg.name == "i"
    assert isinstance(e.arg.arg.arg, Theta)


def test_parse_restriction_of_sum():
    e = parse("r[i] (theta + theta)")
    assert isinstance(e, Unary) and e.kind == "r"
    assert isinstance(e.arg, Binary) and e.arg.op == "+"


def test_parse_precedence():
    e = parse("theta + theta * theta")
    assert e.op == "+"
    assert isinstance(e.right, Binary) and e.right.op == "*"
    e2 = parse("(theta + theta) * theta")
    assert e2.op == "*"


def test_parse_unary_binds_tightest():
    e = parse("t[f] theta * theta")
    assert e.op == "*"
    assert isinstance(e.left, Unary)


def test_parse_errors_carry_position():
    with pytest.raises(TnrSyntaxError) as err:
        parse("t[k theta")
    assert err.value.position == 4
    with pytest.raises(TnrSyntaxError):
        parse("theta )")
    with pytest.raises(TnrSyntaxError):
        parse("theta ?")
    with pytest.raises(TnrSyntaxError):
        parse("")
    with pytest.raises(TnrSyntaxError):
        parse("banana")


def test_pretty_print_round_trip():
    corpus = [
        "theta",
        "t[k] n[j] r[i] theta",
        "r[i] (theta + theta)",
        "theta + theta * theta",
        "(theta + theta) * theta",
        "t[f] (theta * theta)",
    ]
    for text in corpus:
        printed = pretty_print(parse(text))
        assert " ".join(printed.split()) == " ".join(text.split())
        assert pretty_print(parse(printed)) == printed


# --- typechecking -----------------------------------------------------------

def test_typecheck_ports():
    ctx = c2_context()
    e = parse("t[idpt] n[f] r[id] theta")
    ports = typecheck(e, ctx)
    assert ports[id(e)] == ctx.gsets["pt"]


def test_typecheck_identity_everywhere():
    ctx = c2_context()
    for name in ("id", "idpt"):
        e = parse(f"r[{name}] t[{name}] theta")
        if name == "id":
            assert typecheck(e, ctx)[id(e)] == ctx.generator
        else:
            with pytest.raises(PortMismatch):
                typecheck(e, ctx)


def test_typecheck_sum_mismatch():
    ctx = c2_context()
    with pytest.raises(PortMismatch):
        typecheck(parse("theta + t[f] theta"), ctx)


def test_typecheck_unknown_name():
    with pytest.raises(UnknownName):
        typecheck(parse("t[missing] theta"), c2_context())


def test_context_validation():
    T = free_orbit(C2)
    other = point_gset(cyclic_group(3))
    with pytest.raises(GroupMismatch):
        MapContext(generator=T, gsets={"bad": other})


# --- evaluation -------------------------------------------------------------

def test_evaluate_r_id_theta():
    ctx = c2_context()
    out = evaluate(parse("r[id] theta"), ctx)
    assert out.components == theta_element(ctx.generator).components


def test_evaluate_tnr_word_is_basis_class():
    ctx = c2_context()
    out = evaluate(parse("t[idpt] n[f] r[id] theta"), ctx)
    direct = transfer(
        norm(restrict_along(theta_element(ctx.generator), ctx.gmaps["id"]), ctx.gmaps["f"]),
        ctx.gmaps["idpt"],
    )
    assert out.components == direct.components
    assert set(out.degrees()) == {2}


def test_evaluate_distributivity():
    ctx = c2_context()
    lhs = evaluate(parse("theta * (theta + theta)"), ctx)
    rhs = evaluate(parse("theta * theta + theta * theta"), ctx)
    assert lhs.components == rhs.components


def test_every_basis_class_is_a_word():
    # normal form completeness over a small window
    T = free_orbit(C2)
    for X in (point_gset(C2), free_orbit(C2)):
        for degree in (0, 1, 2):
            for key, bs in ft_basis_reps(T, X, degree).items():
                ctx = MapContext(
                    generator=T,
                    gmaps={"a": bs.a, "b": bs.b, "c": bs.c},
                )
                out = evaluate(parse("t[c] n[b] r[a] theta"), ctx)
                assert out.components == element_of(bs).components


# --- dual interpreter oracle ------------------------------------------------

def slow_evaluate(node, ctx):
    """Evaluate keeping components separate; add concatenates, the product
    distributes over singleton pairs, transfer and restriction act
    componentwise.  Norm merges first (it is not additive)."""
    def merge(parts):
        out = parts[0]
        for nxt in parts[1:]:
            out = add(out, nxt)
        return out

    from tambara.tnr import Binary, Theta, Unary

    if isinstance(node, Theta):
        return [theta_element(ctx.generator)]
    if isinstance(node, Unary):
        parts = slow_evaluate(node.arg, ctx)
        f = ctx.gmaps[node.name]
        if node.kind == "t":
            return [transfer(p, f) for p in parts]
        if node.kind == "r":
            return [restrict_along(p, f) for p in parts]
        return [norm(merge(parts), f)]
    if isinstance(node, Binary):
        left = slow_evaluate(node.left, ctx)
        right = slow_evaluate(node.right, ctx)
        if node.op == "+":
            return left + right
        return [mul(a, b) for a in left for b in right]
    raise AssertionError(node)


def random_expression(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return "theta"
    choice = rng.random()
    if choice < 0.35:
        return f"{random_expression(rng, depth - 1)} + {random_expression(rng, depth - 1)}"
    if choice < 0.6:
        return f"({random_expression(rng, depth - 1)}) * ({random_expression(rng, depth - 1)})"
    op = rng.choice(["t[id]", "r[id]", "n[id]"])
    return f"{op} ({random_expression(rng, depth - 1)})"


def test_dual_interpreter_randomized():
    ctx = c2_context()
    rng = random.Random(20260823)
    checked = 0
    while checked < 25:
        text = random_expression(rng, 3)
        expr = parse(text)
        fast = evaluate(expr, ctx)
        parts = slow_evaluate(expr, ctx)
        slow = parts[0]
        for nxt in parts[1:]:
            slow = add(slow, nxt)
        assert fast.components == slow.components, text
        checked += 1
