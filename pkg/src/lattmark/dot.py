"""DOT rendering of Hasse diagrams: cover edges only, drawn bottom-up."""

from __future__ import annotations

from typing import Mapping

from .antimatroids import AntimatroidFamily
from .orders import Poset, set_key
from .rotations import RotationPoset


def _quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def poset_dot(poset: Poset, labels: Mapping[str, str] | None = None, name: str = "hasse") -> str:
    labels = labels or {}
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for e in poset.elements:
        label = labels.get(e, e)
        lines.append(f"  {_quote(e)} [label={_quote(label)}];")
    for x, y in poset.covers:
        lines.append(f"  {_quote(x)} -> {_quote(y)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def rotation_poset_dot(rp: RotationPoset) -> str:
    labels = {
        rid: f"{rid}: +{sorted(rot.plus)} -{sorted(rot.minus)}"
        for rid, rot in rp.rotations.items()
    }
    return poset_dot(rp.poset, labels, name="rotations")


def antimatroid_dot(fam: AntimatroidFamily) -> str:
    sets = sorted(fam.feasible, key=set_key)
    names = {s: "{" + ",".join(sorted(s)) + "}" for s in sets}
    rel = frozenset((names[a], names[b]) for a in sets for b in sets if a <= b)
    poset = Poset(tuple(names[s] for s in sets), rel)
    return poset_dot(poset, name="feasible_sets")
