"""Reticulation-visible counts via sums over small DAG patterns.

For k reticulations the compressed form of a reticulation-visible network is
a rooted multigraph DAG on k+1 vertices whose non-root vertices have weighted
indegree 2 (a double edge counts twice).  Summing a per-vertex block series
over the catalog of such patterns, weighted by inverse symmetry, yields the
EGF of the class.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from phylocount.series import Egf, SqrtPoly, double_factorial
from phylocount.networks import DagPattern
from phylocount.onecomp import block_count
from phylocount.galled import galled_egf

MAX_PATTERN_VERTICES = 8

_lock = threading.Lock()
_catalog_memo: dict[int, tuple] = {}


def enumerate_patterns(m: int) -> tuple[tuple[DagPattern, int], ...]:
    """All isomorphism classes of m-vertex patterns with their symmetry counts,
    sorted by canonical code.

    Generation assigns each non-root vertex its incoming edges from
    lower-indexed vertices (every DAG admits such a labeling) and dedupes by
    canonical form.
    """
    if not 1 <= m <= MAX_PATTERN_VERTICES:
        raise ValueError(f"pattern enumeration supports 1 <= m <= {MAX_PATTERN_VERTICES}")
    with _lock:
        cached = _catalog_memo.get(m)
    if cached is not None:
        return cached

    seen: dict[bytes, DagPattern] = {}

    def assign(v: int, edges: list[tuple[int, int, int]], keys: list[tuple[int, ...]]):
        if v == m:
            pattern = DagPattern(m, tuple(sorted(edges)))
            code = pattern.canonical_bytes()
            if code not in seen:
                seen[code] = pattern
            return
        # adjacent-swap cut: if the previous vertex is not a parent of v,
        # swapping the two labels yields an isomorph generated elsewhere, so
        # demand non-decreasing parent keys in that case
        def feasible(parents: tuple[int, ...], key: tuple[int, ...]) -> bool:
            return v == 1 or (v - 1) in parents or key >= keys[-1]

        for p in range(v):  # double edge from one earlier vertex
            key = (p, p)
            if feasible((p,), key):
                assign(v + 1, edges + [(p, v, 2)], keys + [key])
        for p1 in range(v):  # two single edges from distinct earlier vertices
            for p2 in range(p1 + 1, v):
                key = (p1, p2)
                if feasible((p1, p2), key):
                    assign(v + 1, edges + [(p1, v, 1), (p2, v, 1)], keys + [key])

    assign(1, [], [])
    catalog = tuple(
        (pattern, pattern.automorphism_count())
        for _, pattern in sorted(seen.items())
    )
    with _lock:
        _catalog_memo[m] = catalog
    return catalog


def vertex_egf(pattern: DagPattern, vertex: int, order: int) -> Egf:
    """Block series attached to a pattern vertex.

    With c distinct children of which c1 join by double edges, the vertex
    carries sum_{l >= l0} block_count(l + c, c1) z^l / l!, where l0 is 0 when
    c1 > 0 and 1 otherwise (a component with no owned reticulations must keep
    at least one labeled leaf).
    """
    c = pattern.out_count(vertex)
    c1 = pattern.double_count(vertex)
    l0 = 0 if c1 > 0 else 1
    counts = [0] * (order + 1)
    for l in range(l0, order + 1):
        counts[l] = block_count(l + c, c1)
    return Egf.from_counts(counts)


def rv_egf(rets: int, order: int) -> Egf:
    """EGF of reticulation-visible networks with exactly `rets` reticulations."""
    if rets < 0:
        raise ValueError("rets must be nonnegative")
    total = Egf.zero(order)
    for pattern, symmetry in enumerate_patterns(rets + 1):
        term = Egf.one(order)
        for v in range(pattern.m):
            term = term * vertex_egf(pattern, v, order)
        total = total + term.scale(Fraction(1, symmetry))
    return total


def rv_count(leaves: int, rets: int) -> int:
    """Exact count by series extraction; the inverse-symmetry weights must
    resolve to an integer, which is asserted on every call."""
    if leaves < 1:
        raise ValueError("leaves must be >= 1")
    value = rv_egf(rets, leaves).coeff(leaves) * math.factorial(leaves)
    if value.denominator != 1:
        raise ArithmeticError(
            f"symmetry-weighted total is not integral at (leaves={leaves}, rets={rets})"
        )
    if value.numerator < 0:
        raise ArithmeticError("negative count; pattern catalog is inconsistent")
    return value.numerator


def rv_closed_form(leaves: int, rets: int):
    """Closed-form count for rets in {2, 3}; exact value, integral except at
    boundary points outside the validated range."""
    l = leaves
    if l < 1:
        raise ValueError("leaves must be >= 1")
    if rets == 2:
        first = Fraction(6 * l**4 + 7 * l**3 + 6 * l**2 - l - 3, 3)
        value = first * double_factorial(2 * l - 3) - Fraction(2) ** (l - 1) * (
            2 * l**2 + 2 * l + 1
        ) * math.factorial(l)
    elif rets == 3:
        # coefficients pinned by the pattern-sum series (exact fit on 12
        # samples, verified through l = 40) and by exhaustive counts at
        # l = 2, 3; the polynomial degrees are forced by the singularity
        # structure of the pattern sum
        first = Fraction(
            4 * l**6 + 20 * l**5 + 33 * l**4 - 8 * l**3 - 52 * l**2 + 6 * l + 6, 3
        )
        second = Fraction(2) ** (l - 4) * Fraction(
            48 * l**4 + 175 * l**3 + 135 * l**2 - 106 * l - 168, 3
        )
        value = first * double_factorial(2 * l - 3) - second * math.factorial(l)
    else:
        raise ValueError("closed forms exist for rets in {2, 3}")
    return value.numerator if value.denominator == 1 else value


_threshold_memo: dict[int, int] = {}


def closed_form_threshold(rets: int, scan_to: int = 40) -> int:
    """Validated range start for the closed form, discovered against the series."""
    with _lock:
        cached = _threshold_memo.get(rets)
    if cached is not None:
        return cached
    series = rv_egf(rets, scan_to)
    mismatches = [
        l
        for l in range(1, scan_to + 1)
        if rv_closed_form(l, rets) != series.coeff(l) * math.factorial(l)
    ]
    if mismatches and mismatches[-1] == scan_to:
        raise ArithmeticError(f"closed form for rets={rets} still wrong at l={scan_to}")
    threshold = mismatches[-1] + 1 if mismatches else 1
    with _lock:
        _threshold_memo[rets] = threshold
    return threshold


def vanishing_certificate(rets: int, leaves: int) -> bool:
    """Prove, without enumerating the catalog, that every (rets+1)-vertex
    pattern contributes nothing at the given leaf count.

    Relaxation over vertex profiles: a vertex with c distinct children and c1
    double-edge children needs at least `need(c, c1)` labeled leaves before
    its block series is nonzero, and profiles are constrained only by the
    total indegree budget 2*rets.  If even the relaxed minimum exceeds
    `leaves`, every true pattern coefficient vanishes.
    """
    m = rets + 1
    budget = 2 * rets  # total weighted indegree units across non-root vertices

    def need(c: int, c1: int) -> int:
        l0 = 0 if c1 > 0 else 1
        for l in range(l0, l0 + 3):
            if block_count(l + c, c1) > 0:
                return l
        return l0 + 3  # block series supported further out; a safe lower bound

    # cheapest unit cost of a "free" vertex (need 0)
    free_costs = [
        c + c1
        for c in range(0, budget + 1)
        for c1 in range(0, min(c, budget) + 1)
        if c + c1 <= budget and need(c, c1) == 0
    ]
    if not free_costs:
        return m > leaves
    cheapest_free = min(free_costs)
    max_free = min(m, budget // cheapest_free)
    min_needed = m - max_free
    return min_needed > leaves


def pattern_is_treelike(pattern: DagPattern) -> bool:
    """True when every non-root vertex hangs off a single parent (all its
    indegree arrives as one double edge); such patterns compress galled
    networks."""
    parents: dict[int, int] = {}
    for _, dst, _ in pattern.edges:
        parents[dst] = parents.get(dst, 0) + 1
    return all(count == 1 for count in parents.values())


def three_ret_split_sqrt_forms() -> tuple[SqrtPoly, SqrtPoly]:
    """Closed Laurent forms of the tree-like and non-tree-like halves of the
    four-vertex pattern sum (reticulation-visible networks with three
    reticulations)."""
    x = SqrtPoly.x_power
    one = SqrtPoly.of({0: 1})
    one_plus_x = one + x(1)
    # the z^5 coefficient is pinned by an exact fit of the tree-like pattern
    # sum (the sum equals the three-reticulation galled series, so the fit is
    # doubly anchored)
    t1 = (
        SqrtPoly.from_z_poly([0, 0, 0, 4])
        * SqrtPoly.from_z_poly([29, 12, 29, -37, 36, -16])
    ).exact_div(x(11) * one_plus_x**3)
    t2 = (
        SqrtPoly.from_z_poly([0, 0, 0, 6]) * SqrtPoly.from_z_poly([3, -1, 7, -4])
    ).exact_div(x(10) * one_plus_x**2)
    t3 = SqrtPoly.from_z_poly([0, 0, 0, 0, 2]).exact_div(x(9) * one_plus_x)
    tree_part = t1 + t2 + t3
    # the x^4 and x^6 coefficients are pinned by an exact fit of the pattern
    # sum (exponents -10..3, verified through order 34)
    non_tree_part = (
        (one - x(1)) ** 2
        * SqrtPoly.of(
            {0: 258, 1: -105, 2: -153, 3: -16, 4: 14, 5: 7, 6: 7, 7: -2, 8: -2}
        )
    ).exact_div(x(10, 8))
    return tree_part, non_tree_part


def three_ret_split_check(order: int = 24):
    """Compare the pattern-sum halves (tree-like vs not) with their closed
    Laurent forms, coefficient by coefficient up to `order`.

    Returns (True, None) or (False, (which, n)) at the first disagreement.
    """
    tree_sum = Egf.zero(order)
    non_tree_sum = Egf.zero(order)
    for pattern, symmetry in enumerate_patterns(4):
        term = Egf.one(order)
        for v in range(pattern.m):
            term = term * vertex_egf(pattern, v, order)
        term = term.scale(Fraction(1, symmetry))
        if pattern_is_treelike(pattern):
            tree_sum = tree_sum + term
        else:
            non_tree_sum = non_tree_sum + term
    tree_form, non_tree_form = three_ret_split_sqrt_forms()
    for name, computed, form in (
        ("tree", tree_sum, tree_form),
        ("non-tree", non_tree_sum, non_tree_form),
    ):
        for n in range(order + 1):
            if computed.coeff(n) != form.coeff_z(n):
                return False, (name, n)
    return True, None


# The small-scale component-graph sum: enumerate the admissible compressed
# shapes directly and apply the per-vertex block sums.

MAX_COMPONENT_SUM_LEAVES = 3


def rv_component_sum(leaves: int) -> int:
    """Total reticulation-visible networks over all reticulation counts,
    evaluated by exhausting the admissible compressed shapes.

    Admissible shapes are leaf-labeled rooted DAGs that are tree-child, have
    all indegrees at most 2, no indegree-2 vertex with a lone internal
    indegree-1 child, and no internal vertex with indegree and outdegree both
    one.  Capped at 3 leaves; the shape space grows violently after that.
    """
    if not 1 <= leaves <= MAX_COMPONENT_SUM_LEAVES:
        raise ValueError(f"component sum supports 1 <= leaves <= {MAX_COMPONENT_SUM_LEAVES}")
    from itertools import permutations

    from phylocount import canon

    seen: set[bytes] = set()
    total = 0
    # Internal-vertex count never exceeds 3*leaves - 3 (one compressed vertex
    # per reticulation of a saturated network, plus the root, minus the
    # terminal components that turn into labeled leaves).  The totals are
    # cross-checked against the pattern-sum counts, which certifies the cap.
    max_internal = 1 if leaves == 1 else 3 * leaves - 3
    for internal in range(1, max_internal + 1):
        for parent_sets in _internal_parent_choices(internal):
            for counts in _leaf_count_vectors(internal, leaves):
                if not _shape_admissible(internal, parent_sets, counts):
                    continue
                weight = _shape_weight(internal, parent_sets, counts)
                if weight == 0:
                    continue
                slots = [v for v in range(internal) for _ in range(counts[v])]
                for assignment in set(permutations(slots)):
                    code = _shape_code(canon, internal, parent_sets, assignment)
                    if code not in seen:
                        seen.add(code)
                        total += weight
    return total


def _internal_parent_choices(internal: int):
    def rec(v: int, acc):
        if v == internal:
            yield tuple(acc)
            return
        for p in range(v):
            yield from rec(v + 1, acc + [(p,)])
        for p1 in range(v):
            for p2 in range(p1 + 1, v):
                yield from rec(v + 1, acc + [(p1, p2)])

    yield from rec(1, [])


def _leaf_count_vectors(internal: int, leaves: int):
    def rec(v: int, remaining: int, acc):
        if v == internal - 1:
            yield tuple(acc + [remaining])
            return
        for c in range(remaining + 1):
            yield from rec(v + 1, remaining - c, acc + [c])

    yield from rec(0, leaves, [])


def _shape_admissible(internal: int, parent_sets, counts) -> bool:
    indeg = [0] * internal
    out_total = list(counts)
    for v, parents in enumerate(parent_sets, start=1):
        indeg[v] = len(parents)
        for p in parents:
            out_total[p] += 1
    for v in range(internal):
        if out_total[v] == 0:
            return False  # internal sink
        if v > 0 and indeg[v] == 1 and out_total[v] == 1:
            return False  # suppressed unary vertex
    for v in range(internal):
        kids = [w for w in range(1, internal) if v in parent_sets[w - 1]]
        has_non_ret_kid = counts[v] > 0 or any(indeg[w] == 1 for w in kids)
        if not has_non_ret_kid:
            return False  # tree-child violation
        if indeg[v] == 2 and out_total[v] == 1 and kids and indeg[kids[0]] == 1:
            return False  # reticulation followed by a single internal vertex
    return True


def _shape_code(canon, internal: int, parent_sets, leaf_parents) -> bytes:
    leaves = len(leaf_parents)
    n = internal + leaves
    edges = []
    for v, parents in enumerate(parent_sets, start=1):
        for p in parents:
            edges.append((p, v, 1))
    for label, p in enumerate(leaf_parents, start=1):
        edges.append((p, internal + label - 1, 1))
    colors = [0] * internal + list(range(1, leaves + 1))
    return canon.canonical_bytes(n, edges, colors)


def _shape_weight(internal: int, parent_sets, counts) -> int:
    indeg = [0] * internal
    for v, parents in enumerate(parent_sets, start=1):
        indeg[v] = len(parents)
    weight = 1
    for v in range(internal):
        kids = [w for w in range(1, internal) if v in parent_sets[w - 1]]
        leaf_kids = counts[v]
        c = len(kids) + leaf_kids
        c1 = sum(1 for w in kids if indeg[w] == 1)
        factor = sum(
            math.comb(leaf_kids, j) * block_count(c, c1 + j) for j in range(leaf_kids + 1)
        )
        weight *= factor
        if weight == 0:
            return 0
    return weight


def galled_series_reference(leaves: int, rets: int) -> int:
    """Galled count via the tree-pattern part of the pattern sum, used as a
    cross-check that tree-like patterns reproduce the galled class."""
    total = Egf.zero(leaves)
    for pattern, symmetry in enumerate_patterns(rets + 1):
        if not pattern_is_treelike(pattern):
            continue
        term = Egf.one(leaves)
        for v in range(pattern.m):
            term = term * vertex_egf(pattern, v, leaves)
        total = total + term.scale(Fraction(1, symmetry))
    value = total.coeff(leaves) * math.factorial(leaves)
    if value.denominator != 1:
        raise ArithmeticError("non-integral tree-pattern total")
    assert value.numerator == galled_egf(rets, leaves).count(leaves)
    return value.numerator
