"""Canonical forms and automorphism counts for small rooted directed multigraphs.

The canonizer is a standard colour-refinement / individualisation search.  It
is exact: two inputs get the same canonical bytes iff they are isomorphic as
vertex-coloured directed multigraphs.  Everything here targets graphs with at
most a couple of dozen vertices; no attempt is made at asymptotic cleverness.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Sequence

Edge = tuple[int, int, int]  # (src, dst, multiplicity)


def _refine(n: int, colors: list[int], out_adj, in_adj) -> list[int]:
    """Colour refinement to a fixed point; colour ids are assigned by sorted
    signature order so the result is canonical for the input colouring."""
    while True:
        signatures = []
        for v in range(n):
            out_sig = tuple(sorted((colors[w], m) for w, m in out_adj[v]))
            in_sig = tuple(sorted((colors[w], m) for w, m in in_adj[v]))
            signatures.append((colors[v], out_sig, in_sig))
        ranks = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
        new_colors = [ranks[sig] for sig in signatures]
        if new_colors == colors:
            return colors
        colors = new_colors


def _encode(n: int, perm: list[int], init_colors: Sequence[int], edges: Iterable[Edge]) -> bytes:
    # perm[v] = canonical position of vertex v
    relabeled = sorted((perm[u], perm[w], m) for u, w, m in edges)
    colors = [0] * n
    for v in range(n):
        colors[perm[v]] = init_colors[v]
    return repr((n, tuple(colors), tuple(relabeled))).encode()


def canonical_bytes(n: int, edges: Iterable[Edge], colors: Sequence[int] | None = None) -> bytes:
    """Canonical encoding of a vertex-coloured directed multigraph.

    `colors` are arbitrary integers; distinguish a root by giving it a unique
    colour.  Equal bytes <=> isomorphic inputs (colour- and
    multiplicity-preserving).
    """
    edges = [tuple(e) for e in edges]
    if any(u == w for u, w, _ in edges):
        raise ValueError("self-loops are not supported")
    if colors is None:
        colors = [0] * n
    init = list(colors)
    # normalise initial colours to compact ranks, keeping their identity
    rank = {c: i for i, c in enumerate(sorted(set(init)))}
    start = [rank[c] for c in init]
    out_adj = [[] for _ in range(n)]
    in_adj = [[] for _ in range(n)]
    for u, w, m in edges:
        out_adj[u].append((w, m))
        in_adj[w].append((u, m))

    best: list[bytes] = []
    raw_neighborhood = [
        (
            tuple(sorted(out_adj[v])),
            tuple(sorted(in_adj[v])),
        )
        for v in range(n)
    ]

    def search(colors: list[int]):
        colors = _refine(n, colors, out_adj, in_adj)
        cells: dict[int, list[int]] = {}
        for v in range(n):
            cells.setdefault(colors[v], []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            perm = [0] * n
            order = sorted(range(n), key=lambda v: colors[v])
            for pos, v in enumerate(order):
                perm[v] = pos
            code = _encode(n, perm, start, edges)
            if not best or code < best[0]:
                best[:] = [code]
            return
        marker = n + max(colors) + 1
        # vertices of the cell with identical raw neighborhoods are swapped by
        # an automorphism, so one branch per neighborhood class suffices
        branched_on = set()
        for v in target:
            key = raw_neighborhood[v]
            if key in branched_on:
                continue
            branched_on.add(key)
            branched = list(colors)
            branched[v] = marker
            search(branched)

    search(start)
    return best[0]


def automorphism_count(n: int, edges: Iterable[Edge], root: int = 0) -> int:
    """Order of the automorphism group fixing `root`, preserving directions
    and edge multiplicities.  Exhaustive search; intended for n <= ~9."""
    if n > 9:
        raise ValueError("exhaustive automorphism search is capped at 9 vertices")
    edge_map: dict[tuple[int, int], int] = {}
    for u, w, m in edges:
        edge_map[(u, w)] = edge_map.get((u, w), 0) + m
    others = [v for v in range(n) if v != root]
    count = 0
    for perm in permutations(others):
        mapping = {root: root}
        mapping.update(zip(others, perm))
        if all(edge_map.get((mapping[u], mapping[w]), 0) == m for (u, w), m in edge_map.items()):
            count += 1
    return count
