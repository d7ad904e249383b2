"""Command-line interface.

One binary with a subcommand tree covering groups, G-sets, free functor
windows, comparison classes, the polynomial counterexamples, and the
expression language.  Exit codes: 0 success, 1 verification failure,
2 input error, 3 resource bound exceeded.
"""

from __future__ import annotations

import csv
import io
import itertools
import sys
from pathlib import Path

import click

from .errors import InputError, ResourceBound, TambaraError, VerificationFailure
from .freetamb import (
    ft0_iso,
    ft1_iso,
    ft_basis_reps,
    restriction_compat,
    verify_semi_tambara,
)
from .groups import all_subgroups, conj_classes
from .gsets import (
    dependent_product,
    make_orbit,
    orbit_decompose,
    point_gset,
    pullback,
)
from .serialize import (
    context_from_dict,
    dumps,
    element_to_dict,
    exponential_to_dict,
    gmap_from_dict,
    group_from_dict,
    gset_from_dict,
    gset_to_dict,
    load_json,
    pullback_to_dict,
    subgroup_from_dict,
    subgroup_to_dict,
    table_map_to_dict,
)
from .tnr import evaluate, parse
from .xi import family_FGn, orbit_map_condition, xi_naturality_check, xi_surjectivity


def _load_group(path: str):
    return group_from_dict(load_json(path))


def _load_gset(G, path: str):
    return gset_from_dict(G, load_json(path))


@click.group()
def cli():
    """Equivariant algebra toolkit over a finite group."""


# --- groups -----------------------------------------------------------------

@cli.group("group")
def group_cmd():
    """Inspect finite groups given by multiplication tables."""


@group_cmd.command("validate")
@click.argument("group_file")
def group_validate(group_file):
    G = _load_group(group_file)
    click.echo(dumps({"order": G.order, "valid": True}))


@group_cmd.command("subgroups")
@click.argument("group_file")
def group_subgroups(group_file):
    G = _load_group(group_file)
    subs = all_subgroups(G)
    classes = conj_classes(G)
    click.echo(
        dumps(
            {
                "count": len(subs),
                "subgroups": [subgroup_to_dict(H) for H in subs],
                "conjugacy_classes": [
                    {
                        "representative": subgroup_to_dict(c.representative),
                        "members": [subgroup_to_dict(H) for H in c.members],
                    }
                    for c in classes
                ],
            }
        )
    )


# --- G-sets -----------------------------------------------------------------

@cli.group("gset")
def gset_cmd():
    """Inspect G-sets and equivariant maps."""


@gset_cmd.command("validate")
@click.option("--group", "group_file", required=True)
@click.argument("gset_file")
def gset_validate(group_file, gset_file):
    G = _load_group(group_file)
    X = _load_gset(G, gset_file)
    click.echo(dumps({"size": X.size, "valid": True}))


@gset_cmd.command("orbits")
@click.option("--group", "group_file", required=True)
@click.argument("gset_file")
def gset_orbits(group_file, gset_file):
    G = _load_group(group_file)
    X = _load_gset(G, gset_file)
    click.echo(
        dumps(
            {
                "orbits": [
                    {
                        "points": list(points),
                        "stabilizer": subgroup_to_dict(stab),
                        "representative": rep,
                    }
                    for points, stab, rep in orbit_decompose(X)
                ]
            }
        )
    )


@gset_cmd.command("pullback")
@click.option("--group", "group_file", required=True)
@click.option("--f", "f_file", required=True, help="left map JSON")
@click.option("--g", "g_file", required=True, help="right map JSON")
def gset_pullback(group_file, f_file, g_file):
    G = _load_group(group_file)
    f = gmap_from_dict(G, load_json(f_file))
    g = gmap_from_dict(G, load_json(g_file))
    click.echo(dumps(pullback_to_dict(pullback(f, g))))


@gset_cmd.command("depprod")
@click.option("--group", "group_file", required=True)
@click.option("--i", "i_file", required=True, help="map whose sections are taken")
@click.option("--j", "j_file", required=True, help="map whose fibers index them")
def gset_depprod(group_file, i_file, j_file):
    G = _load_group(group_file)
    i = gmap_from_dict(G, load_json(i_file))
    j = gmap_from_dict(G, load_json(j_file))
    click.echo(dumps(exponential_to_dict(dependent_product(i, j))))


# --- free functor windows ---------------------------------------------------

@cli.group("tambara")
def tambara_cmd():
    """Free functor windows: bases, ranks, axiom checks, comparisons."""


def _graded_ranks(G, T, max_degree):
    rows = []
    for level, cls in enumerate(conj_classes(G)):
        O = make_orbit(G, cls.representative)
        for degree in range(max_degree + 1):
            rows.append(
                {
                    "level": level,
                    "orbit_size": O.size,
                    "degree": degree,
                    "rank": len(ft_basis_reps(T, O, degree)),
                }
            )
    return rows


def _ranks_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=["level", "orbit_size", "degree", "rank"])
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()


@tambara_cmd.command("basis")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True, help="generator G-set JSON")
@click.option("--x", "x_file", default=None, help="level G-set JSON (default: a point)")
@click.option("-n", "--degree", type=int, required=True)
def tambara_basis(group_file, t_file, x_file, degree):
    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    X = _load_gset(G, x_file) if x_file else point_gset(G)
    reps = ft_basis_reps(T, X, degree)
    click.echo(dumps({"degree": degree, "rank": len(reps), "keys": sorted(reps)}))


@tambara_cmd.command("ranks")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True)
@click.option("--max-degree", type=int, default=2, show_default=True)
@click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
    show_default=True,
)
def tambara_ranks(group_file, t_file, max_degree, fmt):
    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    rows = _graded_ranks(G, T, max_degree)
    if fmt == "csv":
        click.echo(_ranks_csv(rows), nl=False)
    else:
        click.echo(dumps({"ranks": rows}))


@tambara_cmd.command("verify")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True)
@click.option("-k", "--window-size", type=int, default=3, show_default=True)
def tambara_verify(group_file, t_file, window_size):
    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    report = verify_semi_tambara(G, T, window_size)
    if report:
        click.echo(dumps({"passed": False, "failures": report}))
        raise VerificationFailure(f"{len(report)} axiom instance(s) failed")
    click.echo(dumps({"passed": True, "failures": []}))


@tambara_cmd.command("iso0")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True)
def tambara_iso0(group_file, t_file):
    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    click.echo(dumps(table_map_to_dict(ft0_iso(G, T))))


@tambara_cmd.command("iso1")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True)
def tambara_iso1(group_file, t_file):
    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    click.echo(dumps(table_map_to_dict(ft1_iso(G, T))))


@tambara_cmd.command("res-compat")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True)
@click.option("--subgroup", "subgroup_file", required=True, help="subgroup JSON")
@click.option("-k", "--window-size", type=int, default=3, show_default=True)
def tambara_res_compat(group_file, t_file, subgroup_file, window_size):
    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    H = subgroup_from_dict(G, load_json(subgroup_file))
    report = restriction_compat(H, T, k=window_size)
    if report:
        click.echo(dumps({"passed": False, "failures": report}))
        raise VerificationFailure(f"{len(report)} compatibility failure(s)")
    click.echo(dumps({"passed": True, "failures": []}))


# --- comparison classes -----------------------------------------------------

@cli.group("xi")
def xi_cmd():
    """Twisted exponential pairs and their comparison classes."""


@xi_cmd.command("family")
@click.option("--group", "group_file", required=True)
@click.option("-n", "--arity", type=int, required=True)
def xi_family(group_file, arity):
    G = _load_group(group_file)
    fam = family_FGn(G, arity)
    click.echo(
        dumps(
            {
                "count": len(fam),
                "pairs": [
                    {
                        "subgroup": list(p.subgroup.elements),
                        "phi": list(p.phi.values),
                        "n": p.n,
                    }
                    for p in fam
                ],
            }
        )
    )


@xi_cmd.command("check")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True)
@click.option("-n", "--arity", type=int, required=True)
@click.option("--corrupt", is_flag=True, help="negative control: break the maps")
def xi_check(group_file, t_file, arity, corrupt):
    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    fam = family_FGn(G, arity)
    checked = 0
    failures = []
    for ll, hp in itertools.product(fam, fam):
        for g in G.elements():
            for sigma in itertools.permutations(range(arity)):
                sigma = tuple(sigma)
                if not orbit_map_condition(ll, hp, g, sigma):
                    continue
                report = xi_naturality_check(ll, hp, g, sigma, T, corrupt=corrupt)
                checked += 1
                for line in report:
                    failures.append(
                        {"g": g, "sigma": list(sigma), "failure": line}
                    )
    click.echo(dumps({"checked": checked, "failures": failures}))
    if failures:
        raise VerificationFailure(f"{len(failures)} naturality failure(s)")


@xi_cmd.command("surjectivity")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True)
@click.option("-n", "--arity", type=int, required=True)
def xi_surj(group_file, t_file, arity):
    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    witnesses = xi_surjectivity(T, arity)
    click.echo(
        dumps(
            {
                "count": len(witnesses),
                "witnesses": [
                    {
                        "basis": w["basis"],
                        "subgroup": list(w["subgroup"]),
                        "phi": list(w["phi"]),
                        "fixed_function": list(w["fixed_function"]),
                        "verified": w["verified"],
                    }
                    for w in witnesses
                ],
            }
        )
    )


# --- polynomial counterexamples ---------------------------------------------

@cli.group("green")
def green_cmd():
    """Truncated polynomial two-level structures over a prime."""


@green_cmd.command("obstruct")
@click.option("-p", "--prime", type=int, required=True)
@click.option("-D", "--degree-cap", type=int, default=None)
def green_obstruct(prime, degree_cap):
    from .green import obstruction_61

    cert = obstruction_61(prime, degree_cap)
    click.echo(dumps(cert.as_dict()))


@green_cmd.command("enumerate")
@click.option("-p", "--prime", type=int, required=True)
@click.option("-s", "--variables", type=int, required=True)
@click.option("-D", "--degree-cap", type=int, default=None)
def green_enumerate(prime, variables, degree_cap):
    from .green import check_distinct, enumerate_63

    candidates = enumerate_63(prime, variables, degree_cap)
    report = check_distinct(candidates)
    click.echo(
        dumps(
            {
                "candidates": [c.as_dict() for c in candidates],
                "distinctness": report,
            }
        )
    )
    if not report["pairwise_distinct"]:
        raise VerificationFailure("duplicate norm candidates")


# --- expressions ------------------------------------------------------------

@cli.group("tnr")
def tnr_cmd():
    """Transfer-norm-restriction expression language."""


@tnr_cmd.command("eval")
@click.option("--ctx", "ctx_file", required=True, help="named-map context JSON")
@click.argument("expression")
def tnr_eval(ctx_file, expression):
    ctx = context_from_dict(load_json(ctx_file))
    el = evaluate(parse(expression), ctx)
    click.echo(dumps(element_to_dict(el)))


# --- report -----------------------------------------------------------------

@cli.command("report")
@click.option("--group", "group_file", required=True)
@click.option("--t", "t_file", required=True)
@click.option("--max-degree", type=int, default=2, show_default=True)
@click.option(
    "-o", "--output-dir", default=".", show_default=True,
    help="directory for the CSV and figure",
)
def report(group_file, t_file, max_degree, output_dir):
    """Graded rank table as CSV plus a rendered figure."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    G = _load_group(group_file)
    T = _load_gset(G, t_file)
    rows = _graded_ranks(G, T, max_degree)
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / "graded_ranks.csv"
    csv_path.write_text(_ranks_csv(rows), encoding="utf-8")

    levels = sorted({r["level"] for r in rows})
    degrees = sorted({r["degree"] for r in rows})
    fig, ax = plt.subplots(figsize=(1.5 + 1.2 * len(levels), 4))
    width = 0.8 / len(degrees)
    for pos, degree in enumerate(degrees):
        xs = [lvl + pos * width for lvl in levels]
        ys = [
            next(r["rank"] for r in rows if r["level"] == lvl and r["degree"] == degree)
            for lvl in levels
        ]
        ax.bar(xs, ys, width=width, label=f"degree {degree}")
    ax.set_xticks([lvl + 0.4 - width / 2 for lvl in levels])
    ax.set_xticklabels([f"level {lvl}" for lvl in levels])
    ax.set_ylabel("rank")
    ax.set_title("graded ranks of the free functor window")
    ax.legend()
    fig.tight_layout()
    fig_path = outdir / "graded_ranks.png"
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
    click.echo(
        dumps(
            {
                "csv": str(csv_path),
                "figure": str(fig_path),
                "rows": rows,
            }
        )
    )


# --- entry point ------------------------------------------------------------

def main(argv=None):
    try:
        cli(args=argv, standalone_mode=False)
    except click.exceptions.Exit as err:
        sys.exit(err.exit_code)
    except click.ClickException as err:
        err.show(file=sys.stderr)
        sys.exit(2)
    except click.Abort:
        sys.exit(2)
    except ResourceBound as err:
        click.echo(f"resource bound: {err}", err=True)
        sys.exit(3)
    except VerificationFailure as err:
        click.echo(f"verification failure: {err}", err=True)
        sys.exit(1)
    except InputError as err:
        click.echo(f"input error: {err}", err=True)
        sys.exit(2)
    except TambaraError as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(2)
    sys.exit(0)


if __name__ == "__main__":
    main()
