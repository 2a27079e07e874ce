"""One-component building-block counts and the baseline closed-form counts.

The central quantity is ``block_count(leaves, rets)``: the number of
one-component galled networks with the given number of leaves and
reticulations whose reticulation leaves carry the fixed labels 1..rets.
Every multi-component count in the package is assembled from these blocks.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from phylocount.series import (
    Egf,
    SqrtPoly,
    double_factorial,
    polynomial_eval,
    polynomial_interpolate,
)

_lock = threading.Lock()
_block_memo: dict[tuple[int, int], int] = {}


def block_count(leaves: int, rets: int) -> int:
    """Number of one-component blocks with `leaves` leaves and `rets`
    reticulations, reticulation leaves labeled 1..rets.

    Zero outside 1 <= leaves and 0 <= rets <= leaves.  Values are produced by
    the two-term recurrence with a correction sum; the correction is always
    even, which is asserted rather than assumed.
    """
    if leaves < 1 or rets < 0 or rets > leaves:
        return 0
    if rets == 0:
        return double_factorial(2 * leaves - 3)
    if rets == 1:
        return (leaves - 1) * double_factorial(2 * leaves - 3)
    key = (leaves, rets)
    with _lock:
        cached = _block_memo.get(key)
    if cached is not None:
        return cached
    l, k = leaves, rets
    value = (l + k - 2) * block_count(l, k - 1) + (k - 1) * block_count(l, k - 2)
    correction = 0
    for d in range(1, k):
        correction += (
            math.comb(k - 1, d)
            * double_factorial(2 * d - 1)
            * (block_count(l - d, k - 1 - d) - block_count(l + 1 - d, k - 1 - d))
        )
    if correction % 2:
        raise ArithmeticError(f"odd correction sum at (leaves={l}, rets={k})")
    value += correction // 2
    if value < 0:
        raise ArithmeticError(f"negative block count at (leaves={l}, rets={k})")
    with _lock:
        _block_memo[key] = value
    return value


def one_component_count(leaves: int, rets: int) -> int:
    """One-component networks with unrestricted leaf labels: C(leaves, rets)
    label choices times the block count."""
    if leaves < 0 or rets < 0 or rets > leaves:
        return 0
    return math.comb(leaves, rets) * block_count(leaves, rets)


def block_closed_one(leaves: int) -> int:
    """Closed form (leaves-1) (2 leaves - 3)!! for one reticulation."""
    return (leaves - 1) * double_factorial(2 * leaves - 3)


def block_closed_two(leaves: int) -> int:
    """Closed form (2l-1) (l-1)^2 (2l-5)!! for two reticulations (l >= 1)."""
    l = leaves
    return (2 * l - 1) * (l - 1) ** 2 * double_factorial(2 * l - 5)


def block_polynomial(rets: int) -> tuple[Fraction, ...]:
    """Coefficients of the polynomial p with
    block_count(l, rets) = p(l) * (2(l - rets) - 3)!! for all l >= rets.

    Interpolated from 2*rets+1 samples and verified on 2*rets+10 more; the
    degree (2*rets) and leading coefficient (2^rets) are asserted.
    """
    if rets < 1:
        raise ValueError("rets must be >= 1")
    k = rets

    def sample(l: int) -> Fraction:
        return Fraction(block_count(l, k), double_factorial(2 * (l - k) - 3))

    points = [(Fraction(l), sample(l)) for l in range(k, 3 * k + 1)]
    coeffs = polynomial_interpolate(points)
    for l in range(3 * k + 1, 5 * k + 11):
        if polynomial_eval(coeffs, Fraction(l)) != sample(l):
            raise ArithmeticError(f"block polynomial fails verification at l={l}")
    if len(coeffs) - 1 != 2 * k or coeffs[-1] != 2**k:
        raise ArithmeticError(
            f"block polynomial for rets={k} has degree {len(coeffs) - 1}, "
            f"leading coefficient {coeffs[-1]}"
        )
    return coeffs


def block_egf(rets: int, order: int) -> Egf:
    """Series sum_l block_count(l, rets) z^l / l!."""
    return Egf.from_counts([block_count(l, rets) for l in range(order + 1)])


def block_shift_egf(rets: int, order: int) -> Egf:
    """Series sum_l block_count(l + rets, rets) z^l / l!.

    This is the rets-fold derivative of :func:`block_egf`; the identity is
    asserted on every construction.
    """
    shifted = Egf.from_counts([block_count(l + rets, rets) for l in range(order + 1)])
    if rets:
        derived = block_egf(rets, order + rets).diff(rets)
        if derived != shifted:
            raise ArithmeticError(f"shift/derivative identity fails for rets={rets}")
    return shifted


def tree_count(leaves: int) -> int:
    """(2 leaves - 3)!!, the number of binary phylogenetic trees."""
    if leaves < 1:
        raise ValueError("leaves must be >= 1")
    return double_factorial(2 * leaves - 3)


def single_reticulation_count(leaves: int) -> int:
    """l (2l-1)!! - 2^(l-1) l!, shared by every class at one reticulation
    (galled, reticulation-visible, tree-child, unrestricted)."""
    l = leaves
    if l < 1:
        raise ValueError("leaves must be >= 1")
    return l * double_factorial(2 * l - 1) - 2 ** (l - 1) * math.factorial(l)


def normal_two_reticulation_count(leaves: int) -> int:
    """Closed form for normal networks with two reticulations."""
    l = leaves
    if l < 1:
        raise ValueError("leaves must be >= 1")
    first = Fraction((3 * l - 4) * (l * l + 11 * l + 6), 3) * double_factorial(2 * l - 1)
    second = 2**l * (l + 2) * (3 * l - 4) * math.factorial(l)
    value = first - second
    if value.denominator != 1:
        raise ArithmeticError(f"normal count is not integral at leaves={l}")
    return value.numerator


def baseline_counts(leaves: int) -> dict[str, int]:
    """The baseline closed-form counts: trees, the shared one-reticulation
    count, and normal networks with two reticulations."""
    return {
        "trees": tree_count(leaves),
        "one_reticulation": single_reticulation_count(leaves),
        "normal_two_reticulations": normal_two_reticulation_count(leaves),
    }


def block_table_csv(lmax: int, kmax: int) -> str:
    """CSV of block counts, rows l = 1..lmax, columns k = 0..kmax."""
    lines = ["leaves," + ",".join(f"k={k}" for k in range(kmax + 1))]
    for l in range(1, lmax + 1):
        lines.append(str(l) + "," + ",".join(str(block_count(l, k)) for k in range(kmax + 1)))
    return "\n".join(lines) + "\n"


# Closed Laurent forms of the low-order block series, used by tests and by
# the galled/retvis closed-form constructions; each is asserted against the
# recurrence-built series wherever it is consumed.

def block_sqrt_form(rets: int) -> SqrtPoly:
    """Closed Laurent form of block_egf for rets in {0, 1, 2}."""
    x = SqrtPoly.x_power
    one = SqrtPoly.of({0: 1})
    if rets == 0:
        return one - x(1)
    if rets == 1:
        return ((one - x(1)) ** 2).exact_div(x(1, 2))
    if rets == 2:
        # (4z^2 - 7z + 4 + (5 - 4z) sqrt(1-2z)) (1 - sqrt(1-2z))^2 / (6 (1-2z)^(3/2))
        root_factor = SqrtPoly.from_z_poly([5, -4]) * x(1)
        numerator = (SqrtPoly.from_z_poly([4, -7, 4]) + root_factor) * (one - x(1)) ** 2
        return numerator.exact_div(x(3, 6))
    raise ValueError("closed forms are kept for rets <= 2; fit higher orders explicitly")


def shift_sqrt_form(rets: int) -> SqrtPoly:
    """Closed Laurent form of block_shift_egf for rets in {0, 1, 2}."""
    if rets == 0:
        return block_sqrt_form(0)
    if rets == 1:
        return SqrtPoly.from_z_poly([0, 1]).exact_div(SqrtPoly.x_power(3))
    if rets == 2:
        return SqrtPoly.from_z_poly([3, -1, 7, -4]).exact_div(SqrtPoly.x_power(7))
    raise ValueError("closed forms are kept for rets <= 2")
