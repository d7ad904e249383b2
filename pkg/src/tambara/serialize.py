"""JSON conversion for groups, G-sets, maps, and computation results.

All dumps are deterministic: dictionaries are emitted with sorted keys
and tuples become lists.  Loaders validate through the ordinary
constructors, so malformed data surfaces as the usual input errors.
"""

from __future__ import annotations

import json

from .bispans import Element, component_degree
from .errors import InputError, UnknownName
from .groups import FiniteGroup, Subgroup, validate_group
from .gsets import ExponentialDiagram, GMap, GSet, Pullback
from .mackey import MackeyTable, MackeyTableMap
from .tnr import MapContext


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    raise InputError(f"cannot serialize {type(value).__name__}")


def dumps(value) -> str:
    return json.dumps(_jsonable(value), sort_keys=True, indent=2)


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as err:
        raise InputError(f"cannot read JSON from {path}: {err}") from err


def _require_dict(data, what: str) -> dict:
    if not isinstance(data, dict):
        raise InputError(f"{what} must be a JSON object")
    return data


# --- groups -----------------------------------------------------------------

def group_to_dict(G: FiniteGroup) -> dict:
    return {"order": G.order, "table": [list(row) for row in G.mult]}


def group_from_dict(data) -> FiniteGroup:
    data = _require_dict(data, "group")
    if "table" not in data:
        raise InputError("group object needs a 'table' field")
    table = data["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise InputError("group table must be a list of rows")
    return validate_group(tuple(tuple(row) for row in table))


def subgroup_to_dict(H: Subgroup) -> dict:
    return {"elements": list(H.elements)}


def subgroup_from_dict(G: FiniteGroup, data) -> Subgroup:
    data = _require_dict(data, "subgroup")
    if "elements" not in data:
        raise InputError("subgroup object needs an 'elements' field")
    return Subgroup(G, tuple(sorted(data["elements"])))


# --- G-sets and maps --------------------------------------------------------

def gset_to_dict(X: GSet) -> dict:
    return {"size": X.size, "action": [list(row) for row in X.action]}


def gset_from_dict(G: FiniteGroup, data) -> GSet:
    data = _require_dict(data, "G-set")
    if "action" not in data:
        raise InputError("G-set object needs an 'action' field")
    action = data["action"]
    if not isinstance(action, list) or not all(isinstance(r, list) for r in action):
        raise InputError("G-set action must be a list of rows")
    if len(action) != G.order:
        raise InputError("G-set action needs one row per group element")
    size = data.get("size", len(action[0]) if action else 0)
    return GSet(group=G, size=size, action=tuple(tuple(row) for row in action))


def gmap_to_dict(f: GMap) -> dict:
    return {
        "source": gset_to_dict(f.source),
        "target": gset_to_dict(f.target),
        "values": list(f.values),
    }


def gmap_from_dict(G: FiniteGroup, data) -> GMap:
    data = _require_dict(data, "map")
    for key in ("source", "target", "values"):
        if key not in data:
            raise InputError(f"map object needs a {key!r} field")
    source = gset_from_dict(G, data["source"])
    target = gset_from_dict(G, data["target"])
    return GMap(source, target, tuple(data["values"]))


def pullback_to_dict(pb: Pullback) -> dict:
    return {
        "apex": gset_to_dict(pb.apex),
        "to_left": list(pb.to_left.values),
        "to_right": list(pb.to_right.values),
        "pairs": [list(pair) for pair in pb.pairs],
    }


def exponential_to_dict(diag: ExponentialDiagram) -> dict:
    return {
        "product": gset_to_dict(diag.pi),
        "product_points": [[z, list(section)] for z, section in diag.pi_points],
        "projection": list(diag.p.values),
        "pullback": gset_to_dict(diag.pullback_obj),
        "pullback_pairs": [list(pair) for pair in diag.pullback_pairs],
        "evaluation": list(diag.e.values),
        "pullback_projection": list(diag.proj.values),
    }


# --- elements and tables ----------------------------------------------------

def element_to_dict(el: Element) -> dict:
    return {
        "generator": gset_to_dict(el.t),
        "port": gset_to_dict(el.x),
        "components": [
            {"degree": component_degree(key), "key": _jsonable(key)}
            for key in el.components
        ],
    }


def table_to_dict(table: MackeyTable) -> dict:
    return {
        "levels": [gset_to_dict(O) for O in table.levels],
        "ranks": list(table.ranks()),
        "semi": table.semi,
        "transfers": {
            f"{i}->{j}:{','.join(map(str, values))}": [list(row) for row in mat]
            for (i, j, values), mat in sorted(table.transfer_mats.items())
        },
        "restrictions": {
            f"{i}->{j}:{','.join(map(str, values))}": [list(row) for row in mat]
            for (i, j, values), mat in sorted(table.restriction_mats.items())
        },
    }


def table_map_to_dict(m: MackeyTableMap) -> dict:
    return {
        "levels": len(m.source.levels),
        "source_ranks": list(m.source.ranks()),
        "target_ranks": list(m.target.ranks()),
        "matrices": [[list(row) for row in mat] for mat in m.matrices],
    }


# --- expression contexts ----------------------------------------------------

def context_from_dict(data) -> MapContext:
    """Build a named-map context from its file form.

    Expected shape: a group, named G-sets, named maps whose endpoints
    refer to the G-set names, and the name of the designated generator.
    """
    data = _require_dict(data, "context")
    for key in ("group", "gsets", "generator"):
        if key not in data:
            raise InputError(f"context needs a {key!r} field")
    G = group_from_dict(data["group"])
    gsets = {
        name: gset_from_dict(G, value)
        for name, value in _require_dict(data["gsets"], "'gsets'").items()
    }
    if data["generator"] not in gsets:
        raise UnknownName(data["generator"])
    gmaps = {}
    for name, value in _require_dict(data.get("maps", {}), "'maps'").items():
        value = _require_dict(value, f"map {name!r}")
        for key in ("source", "target", "values"):
            if key not in value:
                raise InputError(f"map {name!r} needs a {key!r} field")
        if value["source"] not in gsets:
            raise UnknownName(value["source"])
        if value["target"] not in gsets:
            raise UnknownName(value["target"])
        gmaps[name] = GMap(
            gsets[value["source"]], gsets[value["target"]], tuple(value["values"])
        )
    return MapContext(generator=gsets[data["generator"]], gsets=gsets, gmaps=gmaps)
