"""Serialization: versioned JSON schemas and DOT export.

Schema versions are embedded in the `schema` field; see README for the full
documentation.  All output is deterministic (sorted keys, sorted edges).
"""

from __future__ import annotations

import json

from phylocount.networks import ComponentGraph, DagPattern, Network

NETWORK_SCHEMA = "phylocount.network/1"
COMPONENT_GRAPH_SCHEMA = "phylocount.component_graph/1"
PATTERN_SCHEMA = "phylocount.pattern/1"


def network_to_json(net: Network) -> str:
    kinds = net.kinds()
    vertices = []
    for v in range(net.n):
        entry: dict = {"id": v, "kind": kinds[v].value}
        if net.leaf_labels[v]:
            entry["label"] = net.leaf_labels[v]
        vertices.append(entry)
    doc = {
        "schema": NETWORK_SCHEMA,
        "root": net.root,
        "vertices": vertices,
        "edges": sorted([v, w] for v, w in net.edges()),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def network_from_json(text: str) -> Network:
    doc = json.loads(text)
    if doc.get("schema") != NETWORK_SCHEMA:
        raise ValueError(f"expected schema {NETWORK_SCHEMA}")
    n = len(doc["vertices"])
    children: list[list[int]] = [[] for _ in range(n)]
    for v, w in doc["edges"]:
        children[v].append(w)
    labels = {v["id"]: v["label"] for v in doc["vertices"] if "label" in v}
    return Network.build(children, labels, doc["root"])


def network_to_dot(net: Network, name: str = "network") -> str:
    kinds = net.kinds()
    shape = {"root": "diamond", "tree": "circle", "reticulation": "box", "leaf": "plaintext"}
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for v in range(net.n):
        kind = kinds[v].value
        label = str(net.leaf_labels[v]) if net.leaf_labels[v] else f"{kind[0]}{v}"
        lines.append(f'  n{v} [shape={shape[kind]}, label="{label}"];')
    for v, w in sorted(net.edges()):
        lines.append(f"  n{v} -> n{w};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def component_graph_to_json(cg: ComponentGraph) -> str:
    doc = {
        "schema": COMPONENT_GRAPH_SCHEMA,
        "root": cg.root,
        "vertices": [
            {
                "id": v,
                "attached_leaves": list(cg.attached[v]),
                "terminal_label": cg.terminal_labels[v] or None,
            }
            for v in range(cg.n)
        ],
        "edges": [
            {"from": u, "to": v, "double": double} for u, v, double in sorted(cg.edges)
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def component_graph_to_dot(cg: ComponentGraph, name: str = "components") -> str:
    lines = [f"digraph {name} {{"]
    for v in range(cg.n):
        bits = [f"c{v}"]
        if cg.attached[v]:
            bits.append("leaves " + ",".join(map(str, cg.attached[v])))
        if cg.terminal_labels[v]:
            bits.append(f"label {cg.terminal_labels[v]}")
        lines.append(f'  c{v} [shape=ellipse, label="{" / ".join(bits)}"];')
    for u, v, double in sorted(cg.edges):
        style = " [arrowhead=normalnormal, label=\"2\"]" if double else ""
        lines.append(f"  c{u} -> c{v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def pattern_to_json(pattern: DagPattern, symmetry: int | None = None) -> str:
    doc = {
        "schema": PATTERN_SCHEMA,
        "root": pattern.root,
        "m": pattern.m,
        "edges": [
            {"from": u, "to": v, "multiplicity": mult} for u, v, mult in sorted(pattern.edges)
        ],
    }
    if symmetry is not None:
        doc["symmetries"] = symmetry
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def pattern_to_dot(pattern: DagPattern, symmetry: int | None = None, name: str = "pattern") -> str:
    lines = [f"digraph {name} {{"]
    if symmetry is not None:
        lines.append(f'  label="symmetries: {symmetry}";')
    for v in range(pattern.m):
        shape = "diamond" if v == pattern.root else "circle"
        lines.append(f"  p{v} [shape={shape}];")
    for u, v, mult in sorted(pattern.edges):
        if mult == 2:
            lines.append(f'  p{u} -> p{v} [color="black:black", label="2"];')
        else:
            lines.append(f"  p{u} -> p{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
