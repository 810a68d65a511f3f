"""Exact counts of n-configurations and the elementary bounds on them.

All counts are Python integers.  The only floating point lives in
:func:`exponent_estimate`.
"""

from __future__ import annotations

import math
import statistics
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from . import limits
from .errors import EmptyPath
from .lattice import BinSpec, boundary_mask, configuration_array, word_array


def _dp_layers(l, n_max, caps=None):
    """Yield ``(t, table)`` at each block boundary ``t = 1..n_max``.

    ``table`` maps the tallies ``(c_1, ..., c_{k-1})`` of valid prefixes of
    length ``tL`` to their number; ``c_k`` is implicit.  Constraints are only
    applied at block boundaries.  ``caps`` optionally bounds each tally.
    """
    k = len(l)
    L = sum(l)
    sums = list(accumulate(l))
    if caps is None:
        caps = [None] * k
    table = {(0,) * (k - 1): 1}
    for t in range(1, n_max + 1):
        for pos in range((t - 1) * L, t * L):
            nxt = defaultdict(int)
            for state, ways in table.items():
                used = sum(state)
                ck = pos - used
                for j in range(k - 1):
                    cap = caps[j]
                    if cap is None or state[j] < cap:
                        s = list(state)
                        s[j] += 1
                        nxt[tuple(s)] += ways
                if caps[k - 1] is None or ck < caps[k - 1]:
                    nxt[state] += ways
            table = nxt
        kept = {}
        for state, ways in table.items():
            low, ok = 0, True
            for i in range(k - 1):
                low += state[i]
                if low > t * sums[i]:
                    ok = False
                    break
            if ok:
                kept[state] = ways
        table = kept
        yield t, table


def count_configurations(spec: BinSpec) -> int:
    """Number of n-configurations, by dynamic programming over prefix tallies."""
    caps = list(spec.totals)
    final = spec.totals[:-1]
    table = {}
    for _, table in _dp_layers(spec.l, spec.n, caps):
        pass
    return table.get(tuple(final), 0)


def configuration_counts(l, n_max: int) -> list[int]:
    """``[count(1), ..., count(n_max)]`` from a single uncapped sweep."""
    l = tuple(l)
    out = []
    for t, table in _dp_layers(l, n_max):
        out.append(table.get(tuple(t * x for x in l[:-1]), 0))
    return out


def count_by_filter(spec: BinSpec, limit=None) -> int:
    """Brute force: test every word with the right step multiset."""
    limits.check("filter", spec.size, limit)
    words = word_array(spec.totals)
    return int(boundary_mask(words, spec.l, spec.n).sum())


def count_by_search(spec: BinSpec) -> int:
    """Depth-first search with pruning at block boundaries."""
    return len(configuration_array(spec))


def tbp_count(a: int, b: int, n: int) -> int:
    """t(a, b, n): lattice paths to ``(bn, an)`` staying weakly below ``(N^a E^b)^n``."""
    if a < 0 or b < 0 or n < 1:
        raise ValueError(f"need a, b >= 0 and n >= 1, got ({a}, {b}, {n})")
    if a + b == 0:
        raise EmptyPath("a + b must be at least 1")
    # ways[c]: admissible prefixes with c north steps; c never exceeds the
    # number of north steps of the bound so far.
    ways = [1]
    for _ in range(n):
        for is_north in (True,) * a + (False,) * b:
            if is_north:
                ways.append(0)
            ways = [ways[c] + (ways[c - 1] if c else 0) for c in range(len(ways))]
    return ways[a * n]


def multinomial(parts) -> int:
    out, total = 1, 0
    for p in parts:
        total += p
        out *= math.comb(total, p)
    return out


def hook_lengths(shape):
    shape = list(shape)
    conj = [sum(1 for r in shape if r > c) for c in range(shape[0])] if shape else []
    for i, row in enumerate(shape):
        for j in range(row):
            yield row - j + conj[j] - i - 1


def standard_young_tableaux(shape) -> int:
    """Number of SYT of a partition shape, by the hook-length formula."""
    shape = [p for p in shape if p]
    if any(a < b for a, b in zip(shape, shape[1:])):
        raise ValueError(f"shape {shape} is not a partition")
    prod = 1
    for h in hook_lengths(shape):
        prod *= h
    return math.factorial(sum(shape)) // prod


def equal_rows_syt_closed_form(l: int, k: int, n: int) -> Fraction:
    """SYT count for k equal rows of length nl, in the product form for equal bins."""
    m = n * l
    denom = Fraction(math.factorial(m)) ** k
    for i in range(1, k):
        denom *= (Fraction(m, i) + 1) ** (k - i)
    return Fraction(math.factorial(m * k)) / denom


def hook_applicable(l) -> bool:
    return all(a <= b for a, b in zip(l, l[1:]))


def upper_bound(spec: BinSpec) -> int:
    return multinomial(spec.totals)


def hook_lower_bound(spec: BinSpec) -> int | None:
    """SYT of shape ``(nl_k, ..., nl_1)``; ``None`` unless ``l`` is non-decreasing."""
    if not hook_applicable(spec.l):
        return None
    return standard_young_tableaux(tuple(reversed(spec.totals)))


def product_lower_bound(spec: BinSpec) -> int:
    l = spec.l
    out = 1
    for i in range(len(l) - 1):
        out *= tbp_count(l[i], sum(l[i + 1:]), spec.n)
    return out


@dataclass(frozen=True)
class BoundsReport:
    upper_multinomial: int
    lower_hook: int | None
    lower_product: int
    exact: int | None = None

    def sandwich_holds(self) -> bool:
        if self.exact is None:
            return True
        ok = self.lower_product <= self.exact <= self.upper_multinomial
        if self.lower_hook is not None:
            ok = ok and self.lower_hook <= self.exact
        return ok

    def to_json(self) -> dict:
        out = {
            "upper": self.upper_multinomial,
            "lower_hook": self.lower_hook,
            "lower_product": self.lower_product,
        }
        if self.exact is not None:
            out["count"] = self.exact
        return out


def bounds(spec: BinSpec, with_exact: bool = False) -> BoundsReport:
    return BoundsReport(
        upper_bound(spec),
        hook_lower_bound(spec),
        product_lower_bound(spec),
        count_configurations(spec) if with_exact else None,
    )


SERIES = ("exact", "hook", "multinomial")


def series_values(kind: str, l, n_max: int) -> list[int]:
    """``[value(1), ..., value(n_max)]`` for one of :data:`SERIES`."""
    l = tuple(l)
    if kind == "exact":
        return configuration_counts(l, n_max)
    if kind == "hook":
        if not hook_applicable(l):
            raise ValueError(f"hook bound needs non-decreasing l, got {l}")
        return [standard_young_tableaux(tuple(n * x for x in reversed(l))) for n in range(1, n_max + 1)]
    if kind == "multinomial":
        return [multinomial([n * x for x in l]) for n in range(1, n_max + 1)]
    raise ValueError(f"unknown series {kind!r}; choose from {SERIES}")


def growth_base(l) -> Fraction:
    """Exponential growth rate ``L^L / prod l_j^{l_j}`` of the multinomial bound."""
    L = sum(l)
    den = 1
    for x in l:
        den *= x ** x
    return Fraction(L ** L, den)


def exponent_estimate(l=(1, 1, 1), n_max: int = 64, kind: str = "exact", values=None) -> float:
    """Fitted polynomial exponent alpha in ``value(n) ~ c * base^n * n^alpha``.

    Least squares of ``log(value(n) / base^n)`` against ``log n`` over
    ``n in [n_max/2, n_max]``.
    """
    if n_max < 8:
        raise ValueError("n_max must be at least 8")
    l = tuple(l)
    if values is None:
        values = series_values(kind, l, n_max)
    log_base = math.log(growth_base(l))
    ns = list(range(n_max // 2, n_max + 1))
    xs = [math.log(n) for n in ns]
    ys = [math.log(values[n - 1]) - n * log_base for n in ns]
    slope, _ = statistics.linear_regression(xs, ys)
    return slope
