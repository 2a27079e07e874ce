"""Data model for rooted binary phylogenetic networks and their component graphs.

A network is stored as an immutable child-list DAG.  Vertex kinds are derived
from degrees: the root has indegree 0 and outdegree 1, leaves have indegree 1
and outdegree 0 and carry the labels 1..leaves, tree vertices are (1 in, 2
out) and reticulations (2 in, 1 out).  All predicates treat networks as
values; nothing here mutates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import permutations

from phylocount import canon


class VertexKind(enum.Enum):
    ROOT = "root"
    TREE = "tree"
    RETICULATION = "reticulation"
    LEAF = "leaf"


_KIND_ORDER = {
    VertexKind.ROOT: 0,
    VertexKind.TREE: 1,
    VertexKind.RETICULATION: 2,
    VertexKind.LEAF: 3,
}


@dataclass(frozen=True)
class Network:
    """Rooted binary leaf-labeled network.

    `children[v]` lists the children of vertex v; `leaf_labels[v]` is the
    label of leaf v and 0 for non-leaves; `root` is the vertex expected to
    have indegree 0 and outdegree 1.
    """

    children: tuple[tuple[int, ...], ...]
    leaf_labels: tuple[int, ...]
    root: int = 0

    @staticmethod
    def build(children, leaf_labels: dict[int, int], root: int = 0) -> "Network":
        n = len(children)
        labels = [0] * n
        for v, label in leaf_labels.items():
            labels[v] = label
        return Network(tuple(tuple(c) for c in children), tuple(labels), root)

    @property
    def n(self) -> int:
        return len(self.children)

    @property
    def num_leaves(self) -> int:
        return sum(1 for lab in self.leaf_labels if lab)

    @property
    def num_reticulations(self) -> int:
        indeg = self.indegrees()
        return sum(1 for v in range(self.n) if indeg[v] == 2)

    def indegrees(self) -> list[int]:
        indeg = [0] * self.n
        for kids in self.children:
            for w in kids:
                indeg[w] += 1
        return indeg

    def parents(self) -> list[list[int]]:
        par: list[list[int]] = [[] for _ in range(self.n)]
        for v, kids in enumerate(self.children):
            for w in kids:
                par[w].append(v)
        return par

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in range(self.n) for w in self.children[v]]

    def kind(self, v: int) -> VertexKind:
        indeg = self.indegrees()[v]
        outdeg = len(self.children[v])
        return _classify(indeg, outdeg)

    def kinds(self) -> list[VertexKind]:
        indeg = self.indegrees()
        return [_classify(indeg[v], len(self.children[v])) for v in range(self.n)]

    def relabel_vertices(self, perm: dict[int, int]) -> "Network":
        """Renumber vertices by `perm` (a bijection on 0..n-1); for tests."""
        n = self.n
        children = [[] for _ in range(n)]
        labels = [0] * n
        for v in range(n):
            children[perm[v]] = sorted(perm[w] for w in self.children[v])
        for v in range(n):
            labels[perm[v]] = self.leaf_labels[v]
        return Network(tuple(tuple(c) for c in children), tuple(labels), perm[self.root])


def _classify(indeg: int, outdeg: int) -> VertexKind:
    if indeg == 0 and outdeg == 1:
        return VertexKind.ROOT
    if indeg == 1 and outdeg == 0:
        return VertexKind.LEAF
    if indeg == 1 and outdeg == 2:
        return VertexKind.TREE
    if indeg == 2 and outdeg == 1:
        return VertexKind.RETICULATION
    raise ValueError(f"no binary vertex kind for indegree {indeg}, outdegree {outdeg}")


def validation_errors(net: Network) -> list[str]:
    """All invariant violations; an empty list means the network is valid."""
    errors = []
    n = net.n
    indeg = net.indegrees()
    # simplicity: no repeated child anywhere (a repeat would be a parallel edge)
    for v in range(n):
        kids = net.children[v]
        if len(kids) != len(set(kids)):
            errors.append(f"parallel edges out of vertex {v}")
        if any(not 0 <= w < n for w in kids):
            errors.append(f"vertex {v} has an out-of-range child")
            return errors
    roots = [v for v in range(n) if indeg[v] == 0]
    if roots != [net.root]:
        errors.append(f"indegree-0 vertices {roots} do not match declared root {net.root}")
    if len(net.children[net.root]) != 1:
        errors.append("root must have outdegree 1")
    labels = sorted(lab for lab in net.leaf_labels if lab)
    leaves = [v for v in range(n) if indeg[v] == 1 and not net.children[v]]
    expected = list(range(1, len(leaves) + 1))
    if labels != expected:
        errors.append(f"leaf labels {labels} are not a bijection with {expected}")
    for v in range(n):
        if net.leaf_labels[v] and (net.children[v] or indeg[v] != 1):
            errors.append(f"labeled vertex {v} is not a leaf")
    for v in range(n):
        if v == net.root or net.leaf_labels[v]:
            continue
        if (indeg[v], len(net.children[v])) not in ((1, 2), (2, 1)):
            errors.append(
                f"internal vertex {v} has degrees ({indeg[v]}, {len(net.children[v])})"
            )
    # acyclicity and reachability from the root
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done
    def dfs(v: int) -> bool:
        state[v] = 1
        for w in net.children[v]:
            if state[w] == 1:
                return False
            if state[w] == 0 and not dfs(w):
                return False
        state[v] = 2
        return True
    if not dfs(net.root):
        errors.append("the edge relation has a directed cycle")
    unreachable = [v for v in range(n) if state[v] == 0]
    if unreachable:
        errors.append(f"vertices {unreachable} are unreachable from the root")
    return errors


def is_valid(net: Network) -> bool:
    return not validation_errors(net)


def _require_valid(net: Network):
    errors = validation_errors(net)
    if errors:
        raise ValueError("invalid network: " + "; ".join(errors))


def _ancestor_masks(net: Network) -> list[int]:
    """ancestors[v] as a bitmask (proper ancestors, excluding v itself)."""
    n = net.n
    indeg = net.indegrees()
    masks = [0] * n
    remaining = indeg[:]
    queue = [net.root]
    while queue:
        v = queue.pop()
        for w in net.children[v]:
            masks[w] |= masks[v] | (1 << v)
            remaining[w] -= 1
            if remaining[w] == 0:
                queue.append(w)
    return masks


def is_tree_child(net: Network) -> bool:
    """Every non-leaf vertex has at least one child that is not a reticulation."""
    _require_valid(net)
    indeg = net.indegrees()
    for v in range(net.n):
        if not net.children[v]:
            continue
        if all(indeg[w] == 2 for w in net.children[v]):
            return False
    return True


def is_normal(net: Network) -> bool:
    """Tree-child and shortcut-free: no reticulation has one parent that is
    an ancestor of the other."""
    _require_valid(net)
    if not is_tree_child(net):
        return False
    indeg = net.indegrees()
    parents = net.parents()
    anc = _ancestor_masks(net)
    for v in range(net.n):
        if indeg[v] == 2:
            p, q = parents[v]
            if (anc[q] >> p) & 1 or (anc[p] >> q) & 1:
                return False
    return True


def is_reticulation_visible(net: Network) -> bool:
    """Every reticulation is visible: deleting it cuts some leaf off the root."""
    _require_valid(net)
    indeg = net.indegrees()
    rets = [v for v in range(net.n) if indeg[v] == 2]
    return all(_is_visible(net, v) for v in rets)


def _is_visible(net: Network, v: int) -> bool:
    reached = 1 << net.root
    stack = [net.root]
    while stack:
        u = stack.pop()
        for w in net.children[u]:
            if w != v and not (reached >> w) & 1:
                reached |= 1 << w
                stack.append(w)
    for leaf in range(net.n):
        if net.leaf_labels[leaf] and not (reached >> leaf) & 1:
            return True
    return False


def is_galled(net: Network) -> bool:
    """Every reticulation sits in a tree cycle: two edge-disjoint paths from a
    common tree vertex whose interior vertices are all tree vertices."""
    _require_valid(net)
    kinds = net.kinds()
    rets = [v for v in range(net.n) if kinds[v] is VertexKind.RETICULATION]
    trees = [v for v in range(net.n) if kinds[v] is VertexKind.TREE]
    return all(any(_two_edge_disjoint_paths(net, kinds, s, r) for s in trees) for r in rets)


def _two_edge_disjoint_paths(net: Network, kinds, s: int, r: int) -> bool:
    # Unit-capacity max flow from s to r through tree-vertex interiors only.
    allowed = [kinds[v] is VertexKind.TREE for v in range(net.n)]
    capacity: dict[tuple[int, int], int] = {}
    for v in range(net.n):
        if not allowed[v]:
            continue
        for w in net.children[v]:
            if allowed[w] or w == r:
                capacity[(v, w)] = 1
    flow = 0
    while flow < 2:
        # BFS for an augmenting path in the residual graph
        prev = {s: None}
        queue = [s]
        while queue and r not in prev:
            u = queue.pop(0)
            for (a, b), cap in capacity.items():
                if a == u and cap > 0 and b not in prev:
                    prev[b] = u
                    queue.append(b)
        if r not in prev:
            return False
        v = r
        while prev[v] is not None:
            u = prev[v]
            capacity[(u, v)] -= 1
            capacity[(v, u)] = capacity.get((v, u), 0) + 1
            v = u
        flow += 1
    return True


@dataclass(frozen=True)
class ComponentGraph:
    """Compressed view of a network: one vertex per tree component.

    Edges record how reticulations join components; `double` marks the case
    where both reticulation edges come from the same component.  Labels of
    leaves sit either attached to their component (`attached`) or, for a
    single-leaf terminal component under a double edge, directly on the
    component vertex (`terminal_labels`).
    """

    n: int
    root: int
    edges: tuple[tuple[int, int, bool], ...]
    attached: tuple[tuple[int, ...], ...]
    terminal_labels: tuple[int, ...]  # 0 where absent
    members: tuple[tuple[int, ...], ...]

    def weighted_indegrees(self) -> list[int]:
        indeg = [0] * self.n
        for _, dst, double in self.edges:
            indeg[dst] += 2 if double else 1
        return indeg

    def stripped_is_tree(self) -> bool:
        """True iff ignoring arrows leaves each non-root component exactly one
        incoming edge (the component graph of a galled network)."""
        count = [0] * self.n
        for _, dst, _ in self.edges:
            count[dst] += 1
        return all(count[v] == 1 for v in range(self.n) if v != self.root)

    def canonical_bytes(self) -> bytes:
        keys = [
            (self.attached[v], self.terminal_labels[v], v == self.root)
            for v in range(self.n)
        ]
        ranks = {key: i for i, key in enumerate(sorted(set(keys)))}
        colors = [ranks[key] for key in keys]
        edges = [(u, v, 2 if double else 1) for u, v, double in self.edges]
        return canon.canonical_bytes(self.n, edges, colors)


def component_graph(net: Network) -> ComponentGraph:
    """The component graph of a valid network."""
    _require_valid(net)
    n = net.n
    indeg = net.indegrees()
    parents = net.parents()
    comp_root: list[int] = [-1] * n  # representative network vertex per vertex

    def walk_up(v: int) -> int:
        seen = []
        while comp_root[v] == -1 and not (indeg[v] == 2 or v == net.root):
            seen.append(v)
            v = parents[v][0]
        rep = comp_root[v] if comp_root[v] != -1 else v
        for u in seen:
            comp_root[u] = rep
        comp_root[v] = rep
        return rep

    for v in range(n):
        walk_up(v)
    reps = [net.root] + sorted(v for v in range(n) if indeg[v] == 2)
    index = {rep: i for i, rep in enumerate(reps)}
    edges: list[tuple[int, int, bool]] = []
    for r in reps[1:]:
        sources = [index[comp_root[p]] for p in parents[r]]
        dst = index[r]
        if sources[0] == sources[1]:
            edges.append((sources[0], dst, True))
        else:
            edges.append((sources[0], dst, False))
            edges.append((sources[1], dst, False))
    attached: list[list[int]] = [[] for _ in reps]
    for v in range(n):
        if net.leaf_labels[v]:
            attached[index[comp_root[v]]].append(net.leaf_labels[v])
    members: list[list[int]] = [[] for _ in reps]
    for v in range(n):
        members[index[comp_root[v]]].append(v)
    has_out = [False] * len(reps)
    for src, _, _ in edges:
        has_out[src] = True
    terminal = [0] * len(reps)
    for i in range(1, len(reps)):
        double_in = any(dst == i and double for _, dst, double in edges)
        if not has_out[i] and len(attached[i]) == 1 and double_in:
            terminal[i] = attached[i][0]
            attached[i] = []
    return ComponentGraph(
        n=len(reps),
        root=0,
        edges=tuple(sorted(edges)),
        attached=tuple(tuple(sorted(a)) for a in attached),
        terminal_labels=tuple(terminal),
        members=tuple(tuple(sorted(m)) for m in members),
    )


@dataclass(frozen=True)
class DagPattern:
    """Unlabeled rooted multigraph DAG: root of indegree 0, every other vertex
    of weighted indegree exactly 2, edge multiplicities 1 or 2."""

    m: int
    edges: tuple[tuple[int, int, int], ...]  # (src, dst, multiplicity)
    root: int = 0

    def __post_init__(self):
        indeg = [0] * self.m
        for _, dst, mult in self.edges:
            if mult not in (1, 2):
                raise ValueError("edge multiplicities must be 1 or 2")
            indeg[dst] += mult
        if indeg[self.root] != 0:
            raise ValueError("root must have indegree 0")
        if any(indeg[v] != 2 for v in range(self.m) if v != self.root):
            raise ValueError("non-root vertices must have weighted indegree 2")

    def children(self, v: int) -> list[tuple[int, int]]:
        return [(dst, mult) for src, dst, mult in self.edges if src == v]

    def out_count(self, v: int) -> int:
        """Number of distinct children (a double edge counts one child)."""
        return len(self.children(v))

    def double_count(self, v: int) -> int:
        """Number of children attached by a double edge."""
        return sum(1 for _, mult in self.children(v) if mult == 2)

    def canonical_bytes(self) -> bytes:
        colors = [1 if v == self.root else 0 for v in range(self.m)]
        return canon.canonical_bytes(self.m, self.edges, colors)

    def automorphism_count(self) -> int:
        return canon.automorphism_count(self.m, self.edges, self.root)


def canonical_code(net: Network) -> bytes:
    """Deterministic bytes equal for two networks iff they are isomorphic as
    leaf-labeled rooted DAGs."""
    _require_valid(net)
    kinds = net.kinds()
    colors = [
        (_KIND_ORDER[kinds[v]] << 20) | net.leaf_labels[v] for v in range(net.n)
    ]
    edges = [(u, w, 1) for u, w in net.edges()]
    return canon.canonical_bytes(net.n, edges, colors)


def structure_key(net: Network):
    """Cheap isomorphism invariant: the recursive unfolding of the DAG.

    Equal keys do not in general imply isomorphism (sharing is lost), so this
    only serves as a fast pre-filter before :func:`canonical_code`.
    """
    n = net.n
    memo: dict[int, tuple] = {}
    kinds = net.kinds()
    order = _topo_order(net)
    for v in reversed(order):
        kids = tuple(sorted(memo[w] for w in net.children[v]))
        if kinds[v] is VertexKind.LEAF:
            memo[v] = (3, net.leaf_labels[v])
        elif kinds[v] is VertexKind.RETICULATION:
            memo[v] = (2, kids)
        elif kinds[v] is VertexKind.TREE:
            memo[v] = (1, kids)
        else:
            memo[v] = (0, kids)
    return memo[net.root]


def _topo_order(net: Network) -> list[int]:
    indeg = net.indegrees()
    remaining = indeg[:]
    order = [net.root]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for w in net.children[v]:
            remaining[w] -= 1
            if remaining[w] == 0:
                order.append(w)
    if len(order) != net.n:
        raise ValueError("graph is not acyclic")
    return order


def isomorphic(a: Network, b: Network) -> bool:
    return canonical_code(a) == canonical_code(b)


def all_leaf_relabelings(net: Network) -> list[Network]:
    """Every network obtained by permuting the leaf labels; for tests."""
    leaves = [v for v in range(net.n) if net.leaf_labels[v]]
    labels = sorted(net.leaf_labels[v] for v in leaves)
    out = []
    for perm in permutations(labels):
        new_labels = list(net.leaf_labels)
        for v, lab in zip(leaves, perm):
            new_labels[v] = lab
        out.append(Network(net.children, tuple(new_labels), net.root))
    return out
