"""Ground truth by exhaustion.

Backtracking generation of every leaf-labeled binary network with a given
leaf and reticulation count (desk scale: at most 14 vertices), per-class
counting, and the saturated-network analysis: the reticulation capacity of a
compressed shape, the decompression of maximally reticulated tree-child
networks, and the growth-term evaluation built on the first Airy root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import mpmath

from phylocount.networks import (
    ComponentGraph,
    Network,
    canonical_code,
    is_galled,
    is_normal,
    is_reticulation_visible,
    is_tree_child,
    is_valid,
    structure_key,
    validation_errors,
)

VERTEX_BUDGET = 14


@dataclass(frozen=True)
class EnumerationJob:
    leaves: int
    rets: int
    class_filter: str | None = None

    def __post_init__(self):
        if self.leaves < 1 or self.rets < 0:
            raise ValueError("need leaves >= 1 and rets >= 0")
        if self.vertex_budget > VERTEX_BUDGET:
            raise ValueError(
                f"job needs {self.vertex_budget} vertices, budget is {VERTEX_BUDGET}"
            )
        if self.class_filter is not None and self.class_filter not in CLASS_PREDICATES:
            raise ValueError(f"unknown class {self.class_filter!r}")

    @property
    def vertex_budget(self) -> int:
        return 2 * self.leaves + 2 * self.rets


CLASS_PREDICATES = {
    "pn": is_valid,
    "rv": is_reticulation_visible,
    "gn": is_galled,
    "tc": is_tree_child,
    "normal": is_normal,
}


def enumerate_networks(leaves: int, rets: int) -> Iterator[Network]:
    """Every leaf-labeled binary network with the given counts, exactly once.

    Vertices are filled slot by slot in creation order; descriptor ordering on
    the two child slots of a tree vertex removes most duplicate derivations
    and canonical codes remove the rest.
    """
    job = EnumerationJob(leaves, rets)
    t = leaves + rets - 1  # tree vertices
    n = job.vertex_budget
    first_ret = t + 1
    first_leaf = t + rets + 1

    children: list[list[int]] = [[] for _ in range(n)]
    slots: list[list] = [[0, None]]  # [vertex, minimum descriptor]
    ret_parent: dict[int, int] = {}  # open reticulations -> first parent
    seen: dict = {}

    # lazy canonical codes: the first member of a bucket is only canonized
    # when a second candidate shows up
    def emit_checked():
        labels = {first_leaf + i: i + 1 for i in range(leaves)}
        net = Network.build([list(c) for c in children], labels)
        key = structure_key(net)
        bucket = seen.get(key)
        if bucket is None:
            seen[key] = [net, None]  # representative, its code (lazy)
            return net
        rep, rep_code = bucket[0], bucket[1]
        if rep_code is None:
            rep_code = canonical_code(rep)
            bucket[1] = rep_code
        codes = bucket[2:] if len(bucket) > 2 else []
        code = canonical_code(net)
        if code == rep_code or code in codes:
            return None
        bucket.append(code)
        return net

    def options(u: int, used_t: int, used_r: int, label_mask: int, min_desc):
        # descriptor order: new tree (0,0) < new ret (1,0) < close ret (2, w) < leaf (3, label)
        if used_t < t:
            yield (0, 0)
        if used_r < rets:
            yield (1, 0)
        for w, p in ret_parent.items():
            if p != u:
                yield (2, w)
        m = label_mask
        while m:
            low = m & -m
            yield (3, low.bit_length())
            m ^= low

    def rec(index: int, used_t: int, used_r: int, label_mask: int):
        if index == len(slots):
            if used_t == t and used_r == rets and not ret_parent and label_mask == 0:
                net = emit_checked()
                if net is not None:
                    yield net
            return
        u, min_desc = slots[index]
        sibling = index + 1 < len(slots) and slots[index + 1][0] == u
        for desc in sorted(options(u, used_t, used_r, label_mask, min_desc)):
            if min_desc is not None and desc < min_desc:
                continue
            kind, arg = desc
            if sibling:
                slots[index + 1][1] = desc
            if kind == 0:
                v = 1 + used_t
                children[u].append(v)
                slots.append([v, None])
                slots.append([v, None])
                yield from rec(index + 1, used_t + 1, used_r, label_mask)
                slots.pop()
                slots.pop()
                children[u].pop()
            elif kind == 1:
                w = first_ret + used_r
                children[u].append(w)
                ret_parent[w] = u
                yield from rec(index + 1, used_t, used_r + 1, label_mask)
                del ret_parent[w]
                children[u].pop()
            elif kind == 2:
                w = arg
                p = ret_parent.pop(w)
                children[u].append(w)
                slots.append([w, None])
                yield from rec(index + 1, used_t, used_r, label_mask)
                slots.pop()
                children[u].pop()
                ret_parent[w] = p
            else:
                label = arg
                leaf = first_leaf + label - 1
                children[u].append(leaf)
                yield from rec(index + 1, used_t, used_r, label_mask & ~(1 << (label - 1)))
                children[u].pop()
            if sibling:
                slots[index + 1][1] = None

    yield from rec(0, 0, 0, (1 << leaves) - 1)


@dataclass(frozen=True)
class ClassCounts:
    pn: int
    rv: int
    gn: int
    tc: int
    normal: int

    def as_dict(self) -> dict[str, int]:
        return {"pn": self.pn, "rv": self.rv, "gn": self.gn, "tc": self.tc, "normal": self.normal}


_count_cache: dict[tuple[int, int], ClassCounts] = {}


def count_by_class(leaves: int, rets: int) -> ClassCounts:
    """Exhaustive per-class counts for one (leaves, rets) cell; memoized."""
    key = (leaves, rets)
    if key in _count_cache:
        return _count_cache[key]
    pn = rv = gn = tc = normal = 0
    for net in enumerate_networks(leaves, rets):
        pn += 1
        if is_galled(net):
            gn += 1
        if is_reticulation_visible(net):
            rv += 1
        if is_tree_child(net):
            tc += 1
            if is_normal(net):
                normal += 1
    result = ClassCounts(pn, rv, gn, tc, normal)
    _count_cache[key] = result
    return result


def reticulation_capacity(children: Sequence[Sequence[int]] | Network, root: int = 0) -> int:
    """Largest reticulation count obtainable by decompressing the given
    tree-child shape, per the arrow-placement rules.

    Accepts a Network (whose outdegree-1 stem root is skipped) or raw child
    lists of a compressed shape, possibly multifurcating.  Indegree-2
    vertices with several children are treated as split into a reticulation
    plus an uncounted follow-up vertex; a reticulation's lone follow-up
    vertex is likewise not counted (merge normalisation).
    """
    if isinstance(children, Network):
        net = children
        if not is_tree_child(net):
            raise ValueError("reticulation capacity is defined for tree-child inputs")
        root = net.children[net.root][0]
        kids = net.children
    else:
        kids = [tuple(c) for c in children]
    n = len(kids)
    indeg = [0] * n
    for v in range(n):
        for w in kids[v]:
            indeg[w] += 1
    def pure_ret(v: int) -> bool:
        return indeg[v] == 2 and len(kids[v]) == 1
    capacity = 0
    reachable = set()
    stack = [root]
    while stack:
        v = stack.pop()
        if v in reachable:
            continue
        reachable.add(v)
        stack.extend(kids[v])
    for v in sorted(reachable):
        if not kids[v]:  # leaf
            parent = next(p for p in reachable if v in kids[p])
            if not pure_ret(parent):
                capacity += 1  # arrow-eligible pendant edge
        elif indeg[v] == 2:
            capacity += 1  # one reticulation per indegree-2 vertex
        elif v != root:
            parent = next(p for p in reachable if v in kids[p])
            if not pure_ret(parent):
                capacity += 1  # internal vertex entered by an arrowed edge
    return capacity


def split_multifurcation(children: Sequence[Sequence[int]], vertex: int):
    """The capacity-raising split: detach all but the first child of a
    multifurcating vertex onto a fresh vertex.  Returns new child lists."""
    kids = [list(c) for c in children]
    if len(kids[vertex]) < 3:
        raise ValueError("vertex is not multifurcating")
    fresh = len(kids)
    keep, rest = kids[vertex][0], kids[vertex][1:]
    kids[vertex] = [keep, fresh]
    kids.append(rest)
    return kids


def decompress_max_reticulated(tc: Network) -> Network:
    """The unique reticulation-visible network whose compressed form is the
    given maximally reticulated binary tree-child network.

    Every tree vertex (with its single reticulation child and single other
    child) inflates to the unique two-leaf one-reticulation block; every
    reticulation of the input becomes a fresh reticulation fed by the spare
    slots of its two parents' blocks.  The result has 3*leaves - 3
    reticulations.
    """
    errors = validation_errors(tc)
    if errors:
        raise ValueError("invalid input: " + "; ".join(errors))
    if not is_tree_child(tc):
        raise ValueError("input must be tree-child")
    leaves = tc.num_leaves
    if tc.num_reticulations != leaves - 1:
        raise ValueError("input must be maximally reticulated (rets = leaves - 1)")
    indeg = tc.indegrees()
    tree_vertices = [
        v
        for v in range(tc.n)
        if v != tc.root and indeg[v] == 1 and len(tc.children[v]) == 2
    ]
    top = tc.children[tc.root][0]
    gadget_owner = tree_vertices
    for v in gadget_owner:
        ret_kids = [w for w in tc.children[v] if indeg[w] == 2]
        if len(ret_kids) != 1:
            raise ValueError("tree vertex without exactly one reticulation child")

    # fresh vertex ids: root, then per-owner gadget (entry, side, ret),
    # one reticulation per input reticulation, leaves keep their labels
    counter = [0]
    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    root = fresh()
    entry = {v: fresh() for v in gadget_owner}
    side = {v: fresh() for v in gadget_owner}
    gadget_ret = {v: fresh() for v in gadget_owner}
    shared_ret = {w: fresh() for w in range(tc.n) if indeg[w] == 2}
    leaf_of = {}
    for v in range(tc.n):
        if tc.leaf_labels[v]:
            leaf_of[v] = fresh()
    n = counter[0]
    children: list[list[int]] = [[] for _ in range(n)]
    labels = {leaf_of[v]: tc.leaf_labels[v] for v in leaf_of}

    def expansion_top(v: int) -> int:
        # where an edge pointing at input vertex v lands in the output
        if v in entry:
            return entry[v]
        if v in leaf_of:
            return leaf_of[v]
        raise ValueError("reticulation child where a tree part was expected")

    children[root] = [entry[top]]
    for v in gadget_owner:
        ret_kid = next(w for w in tc.children[v] if indeg[w] == 2)
        other_kid = next(w for w in tc.children[v] if indeg[w] != 2)
        children[entry[v]] = [side[v], gadget_ret[v]]
        children[side[v]] = [gadget_ret[v], shared_ret[ret_kid]]
        children[gadget_ret[v]] = [expansion_top(other_kid)]
    for w, ret in shared_ret.items():
        child = tc.children[w][0]
        children[ret] = [expansion_top(child)]
    out = Network.build(children, labels, root)
    errors = validation_errors(out)
    if errors:
        raise AssertionError("decompression built an invalid network: " + "; ".join(errors))
    if out.num_reticulations != 3 * leaves - 3:
        raise AssertionError("decompression missed the saturation bound")
    return out


def expected_compressed_form(tc: Network) -> ComponentGraph:
    """The component graph the decompression of `tc` must produce, built
    directly from `tc`: contract reticulation-to-tree edges, mark tree-tree
    edges as doubles, turn tree-parented leaves into labeled terminal
    vertices and keep reticulation-parented leaves attached."""
    indeg = tc.indegrees()
    top = tc.children[tc.root][0]
    rep = {}

    def find(v: int) -> int:
        while rep.get(v, v) != v:
            v = rep[v]
        return v

    for w in range(tc.n):
        if indeg[w] == 2:
            child = tc.children[w][0]
            if not tc.leaf_labels[child]:
                rep[find(child)] = find(w)  # merge the follow-up tree vertex
    comp_of: dict[int, int] = {}
    order: list[int] = []
    internal = [
        v for v in range(tc.n) if v != tc.root and not tc.leaf_labels[v]
    ]
    terminal_leaves = [
        v for v in range(tc.n) if tc.leaf_labels[v] and indeg[find_parent(tc, v)] != 2
    ]
    roots = [find(top)]
    members: dict[int, list[int]] = {}
    for v in internal + [top]:
        members.setdefault(find(v), []).append(v)
    comp_ids = {}
    ordered = [find(top)] + sorted(
        c for c in members if c != find(top)
    ) + sorted(terminal_leaves)
    for i, c in enumerate(ordered):
        comp_ids[c] = i
    n = len(ordered)
    edges = []
    attached: list[list[int]] = [[] for _ in range(n)]
    terminal = [0] * n
    for leaf in terminal_leaves:
        terminal[comp_ids[leaf]] = tc.leaf_labels[leaf]
        parent = find_parent(tc, leaf)
        edges.append((comp_ids[find(parent)], comp_ids[leaf], True))
    for v in range(tc.n):
        if tc.leaf_labels[v] and v not in terminal_leaves:
            attached[comp_ids[find(find_parent(tc, v))]].append(tc.leaf_labels[v])
    for w in range(tc.n):
        if indeg[w] == 2:
            parents = [p for p in range(tc.n) if w in tc.children[p]]
            edges.append((comp_ids[find(parents[0])], comp_ids[find(w)], False))
            edges.append((comp_ids[find(parents[1])], comp_ids[find(w)], False))
        elif w != tc.root and not tc.leaf_labels[w] and len(tc.children[w]) == 2:
            parent = find_parent(tc, w)
            if indeg[parent] != 2 or parent == tc.root:
                if parent != tc.root:
                    edges.append((comp_ids[find(parent)], comp_ids[find(w)], True))
    members_out = [tuple(sorted(members.get(c, [c]))) for c in ordered]
    return ComponentGraph(
        n=n,
        root=0,
        edges=tuple(sorted(edges)),
        attached=tuple(tuple(sorted(a)) for a in attached),
        terminal_labels=tuple(terminal),
        members=tuple(members_out),
    )


def find_parent(net: Network, v: int) -> int:
    for p in range(net.n):
        if v in net.children[p]:
            return p
    raise ValueError(f"vertex {v} has no parent")


def max_reticulation_summary(leaves: int) -> dict[str, int]:
    """Saturation analysis by exhaustion (leaves == 2) or decompression
    (leaves == 3): the largest feasible reticulation count for the visible
    class and the count at the maximum against the tree-child count."""
    if leaves == 2:
        max_k = 0
        count_at_max = 0
        for k in range(0, (VERTEX_BUDGET - 2 * leaves) // 2 + 1):
            rv = count_by_class(leaves, k).rv
            if rv > 0:
                max_k, count_at_max = k, rv
        tc_max = count_by_class(leaves, leaves - 1).tc
        return {"max_rets": max_k, "count_at_max": count_at_max, "tc_max_count": tc_max}
    if leaves == 3:
        images = []
        for net in enumerate_networks(3, 2):
            if is_tree_child(net):
                images.append(decompress_max_reticulated(net))
        codes = {canonical_code(img) for img in images}
        if len(codes) != len(images):
            raise AssertionError("decompression is not injective")
        for img in images:
            if not is_reticulation_visible(img):
                raise AssertionError("decompression left the visible class")
        return {
            "max_rets": 3 * leaves - 3,
            "count_at_max": len(images),
            "tc_max_count": len(images),
        }
    raise ValueError("saturation summary supports leaves in {2, 3}")


def airy_first_root() -> float:
    """Largest (least negative) root of the Airy function of the first kind,
    found by bisection plus Newton polish on mpmath's Airy evaluation."""
    with mpmath.workdps(30):
        root = mpmath.findroot(mpmath.airyai, mpmath.mpf("-2.338107"))
        return float(root)


def saturated_growth_term_log(leaves: int) -> float:
    """Natural log of l^(-2/3) exp(a1 (3l)^(1/3)) (12/e^2)^l l^(2l) with a1
    the first Airy root."""
    l = leaves
    if l < 2:
        raise ValueError("leaves must be >= 2")
    a1 = airy_first_root()
    return (
        -2.0 / 3.0 * math.log(l)
        + a1 * (3.0 * l) ** (1.0 / 3.0)
        + l * (math.log(12.0) - 2.0)
        + 2.0 * l * math.log(l)
    )


def saturated_growth_term(leaves: int) -> tuple[float, int]:
    """(mantissa, decimal exponent) of the saturated growth term."""
    log10 = saturated_growth_term_log(leaves) / math.log(10.0)
    exponent = math.floor(log10)
    return 10.0 ** (log10 - exponent), exponent
