"""Lattice paths in N^k and the configuration-path predicate.

A path is a word over axis indices ``1..k``.  Positions are 1-based
throughout the package: step ``i`` of a path corresponds to ball ``i``, and
``path.steps[i - 1]`` is its axis.  For ``k = 2`` the text form uses ``N``
for axis 1 and ``E`` for axis 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from .errors import (
    DimensionMismatch,
    IllegalSwitch,
    InfeasiblePrefix,
    NotAPartition,
    WrongStepMultiset,
)
from .partition import OrderedPartition

_LETTERS = {"N": 1, "E": 2}


@dataclass(frozen=True)
class StepSequence:
    steps: tuple[int, ...]
    k: int

    def __post_init__(self):
        steps = tuple(int(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if self.k < 1:
            raise DimensionMismatch(f"k must be positive, got {self.k}")
        bad = [s for s in steps if not 1 <= s <= self.k]
        if bad:
            raise DimensionMismatch(f"axis {bad[0]} outside 1..{self.k}")

    @classmethod
    def parse(cls, text: str, k: int | None = None) -> StepSequence:
        """Read ``"NNEEE"`` (k=2) or a digit string such as ``"321"``."""
        text = text.strip().upper()
        if text and set(text) <= set(_LETTERS):
            if k not in (None, 2):
                raise DimensionMismatch("N/E paths have k = 2")
            return cls(tuple(_LETTERS[c] for c in text), 2)
        if not text.isdigit() and text:
            raise ValueError(f"cannot parse path {text!r}")
        steps = tuple(int(c) for c in text)
        if k is None:
            k = max(steps, default=1)
        return cls(steps, k)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def totals(self) -> tuple[int, ...]:
        out = [0] * self.k
        for s in self.steps:
            out[s - 1] += 1
        return tuple(out)

    def to_text(self) -> str:
        if self.k == 2:
            return "".join("N" if s == 1 else "E" for s in self.steps)
        return "".join(map(str, self.steps))

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class BinSpec:
    """Bin sizes ``(l_1, ..., l_k)`` and number of turns ``n``."""

    l: tuple[int, ...]
    n: int

    def __post_init__(self):
        l = tuple(int(x) for x in self.l)
        object.__setattr__(self, "l", l)
        if not l or any(x < 1 for x in l):
            raise ValueError(f"bin sizes must be positive integers, got {l}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")

    @property
    def k(self) -> int:
        return len(self.l)

    @property
    def L(self) -> int:
        return sum(self.l)

    @property
    def size(self) -> int:
        return self.n * self.L

    @property
    def totals(self) -> tuple[int, ...]:
        return tuple(self.n * x for x in self.l)

    @property
    def partial_sums(self) -> tuple[int, ...]:
        """``(l_1, l_1+l_2, ..., L)``."""
        return tuple(accumulate(self.l))


@dataclass(frozen=True)
class PrefixCounts:
    """``counts[t]`` is the per-axis tally of the first ``t`` steps (``t = 0..len``)."""

    counts: tuple[tuple[int, ...], ...]

    def __getitem__(self, t):
        return self.counts[t]

    def __len__(self):
        return len(self.counts)


def prefix_counts(path: StepSequence) -> PrefixCounts:
    row = [0] * path.k
    rows = [tuple(row)]
    for s in path.steps:
        row[s - 1] += 1
        rows.append(tuple(row))
    return PrefixCounts(tuple(rows))


def _check_dims(path: StepSequence, spec: BinSpec):
    if path.k != spec.k:
        raise DimensionMismatch(f"path has k={path.k}, spec has k={spec.k}")


def _boundaries_ok(steps, l, upto_turns) -> bool:
    # Among the first tL steps at most t*(l_1+...+l_i) lie in {e_1..e_i}.
    k = len(l)
    L = sum(l)
    sums = list(accumulate(l))
    tally = [0] * (k + 1)
    t = 0
    for pos, s in enumerate(steps, start=1):
        tally[s] += 1
        if pos % L == 0:
            t += 1
            if t > upto_turns:
                break
            low = 0
            for i in range(1, k):
                low += tally[i]
                if low > t * sums[i - 1]:
                    return False
    return True


def is_configuration_path(path: StepSequence, spec: BinSpec) -> bool:
    _check_dims(path, spec)
    if path.totals() != spec.totals:
        raise WrongStepMultiset(f"path totals {path.totals()} differ from {spec.totals}")
    return _boundaries_ok(path.steps, spec.l, spec.n)


def is_configuration_word(steps, l, n) -> bool:
    """Predicate on a raw tuple of axes, assuming the multiset is already right."""
    return _boundaries_ok(steps, l, n)


def switch_steps(path: StepSequence, i: int, j: int) -> StepSequence:
    """Exchange steps ``i < j`` (1-based) where ``axis(s_i) <= axis(s_j)``."""
    if not 1 <= i < j <= len(path):
        raise IllegalSwitch(f"need 1 <= i < j <= {len(path)}, got i={i}, j={j}")
    a, b = path.steps[i - 1], path.steps[j - 1]
    if a > b:
        raise IllegalSwitch(f"step {i} has axis {a} > axis {b} of step {j}")
    steps = list(path.steps)
    steps[i - 1], steps[j - 1] = b, a
    return StepSequence(tuple(steps), path.k)


def minimal_turns(prefix: StepSequence, l) -> int:
    """Least ``n'`` with ``t'_j <= n' l_j`` for every axis."""
    return max((-(-c // lj) for c, lj in zip(prefix.totals(), l)), default=0)


def complete_to_configuration(prefix: StepSequence, spec_l, n_extra: int = 0) -> StepSequence:
    """Extend an initial segment of a configuration path to a full one.

    Appends the missing ``e_k`` steps first, then ``e_{k-1}``, and so on down
    to ``e_1``, for ``n' + n_extra`` turns in total.
    """
    l = tuple(spec_l)
    if prefix.k != len(l):
        raise DimensionMismatch(f"prefix has k={prefix.k}, l has {len(l)} entries")
    if n_extra < 0:
        raise ValueError("n_extra must be non-negative")
    full_turns = len(prefix) // sum(l)
    if not _boundaries_ok(prefix.steps, l, full_turns):
        raise InfeasiblePrefix(f"prefix {prefix} breaks a block-boundary inequality")
    n_total = minimal_turns(prefix, l) + n_extra
    have = prefix.totals()
    tail = []
    for j in range(len(l), 0, -1):
        tail.extend([j] * (n_total * l[j - 1] - have[j - 1]))
    steps = prefix.steps + tuple(tail)
    # Block checks inside the prefix do not see a partial last block.
    if not _boundaries_ok(steps, l, n_total):
        raise InfeasiblePrefix(f"prefix {prefix} is not an initial segment of any configuration path")
    return StepSequence(steps, prefix.k)


def partition_from_path(path: StepSequence) -> OrderedPartition:
    return OrderedPartition.from_labels(path.steps, path.k)


def path_from_partition(partition: OrderedPartition, spec: BinSpec | None = None) -> StepSequence:
    if not isinstance(partition, OrderedPartition):
        try:
            partition = OrderedPartition.from_lists(partition)
        except TypeError as exc:
            raise NotAPartition(str(exc)) from None
    if spec is not None:
        if partition.k != spec.k:
            raise DimensionMismatch(f"partition has {partition.k} blocks, spec has k={spec.k}")
        if partition.ground_size != spec.size:
            raise NotAPartition(f"partition covers [{partition.ground_size}], expected [{spec.size}]")
    return StepSequence(partition.labels, partition.k)


def multiset_words(totals):
    """All words with ``totals[j-1]`` copies of axis ``j``, in lexicographic order."""
    totals = list(totals)
    k = len(totals)
    length = sum(totals)
    word = [0] * length

    def rec(pos):
        if pos == length:
            yield tuple(word)
            return
        for j in range(k):
            if totals[j]:
                totals[j] -= 1
                word[pos] = j + 1
                yield from rec(pos + 1)
                totals[j] += 1

    yield from rec(0)


def configuration_words(spec: BinSpec):
    """All configuration paths of ``spec`` as raw axis tuples, lexicographically.

    Depth-first search over the multiset, pruning at block boundaries.
    """
    l, L, k = spec.l, spec.L, spec.k
    sums = spec.partial_sums
    remaining = list(spec.totals)
    tally = [0] * (k + 1)
    length = spec.size
    word = [0] * length

    def rec(pos):
        if pos == length:
            yield tuple(word)
            return
        for j in range(1, k + 1):
            if not remaining[j - 1]:
                continue
            remaining[j - 1] -= 1
            tally[j] += 1
            word[pos] = j
            ok = True
            if (pos + 1) % L == 0:
                t = (pos + 1) // L
                low = 0
                for i in range(1, k):
                    low += tally[i]
                    if low > t * sums[i - 1]:
                        ok = False
                        break
            if ok:
                yield from rec(pos + 1)
            tally[j] -= 1
            remaining[j - 1] += 1

    yield from rec(0)


def configuration_paths(spec: BinSpec):
    for w in configuration_words(spec):
        yield StepSequence(w, spec.k)


# -- vectorized enumeration ------------------------------------------------


def boundary_mask(words: np.ndarray, l, n: int | None = None) -> np.ndarray:
    """Row-wise configuration predicate for an ``(N, nL)`` array of axis labels."""
    l = tuple(l)
    k, L = len(l), sum(l)
    sums = np.array(list(accumulate(l))[:-1], dtype=np.int64)
    turns = words.shape[1] // L if n is None else n
    rows = np.arange(words.shape[0])
    tally = np.zeros((words.shape[0], k + 1), dtype=np.int16)
    ok = np.ones(words.shape[0], dtype=bool)
    for t in range(1, turns + 1):
        for c in range((t - 1) * L, t * L):
            tally[rows, words[:, c]] += 1
        ok &= np.all(np.cumsum(tally[:, 1:k], axis=1) <= t * sums, axis=1)
    return ok


def word_array(totals, prune_l=None) -> np.ndarray:
    """All words with the given step multiset, as a lexicographically sorted int8 array.

    With ``prune_l`` set, rows failing a block-boundary inequality for those
    bin sizes are dropped as soon as the boundary is reached, which yields
    exactly the configuration paths.
    """
    totals = np.asarray(totals, dtype=np.int64)
    k, m = len(totals), int(totals.sum())
    if prune_l is not None:
        L = sum(prune_l)
        sums = np.array(list(accumulate(prune_l))[:-1], dtype=np.int64)
    words = np.zeros((1, m), dtype=np.int8)
    rem = totals[None, :].astype(np.int16)
    for pos in range(m):
        parents, axes = [], []
        for j in range(k):
            idx = np.nonzero(rem[:, j] > 0)[0]
            parents.append(idx)
            axes.append(np.full(len(idx), j, dtype=np.int16))
        parent = np.concatenate(parents)
        axis = np.concatenate(axes)
        order = np.lexsort((axis, parent))
        parent, axis = parent[order], axis[order]
        words = words[parent]
        words[:, pos] = axis + 1
        rem = rem[parent]
        rem[np.arange(len(parent)), axis] -= 1
        if prune_l is not None and (pos + 1) % L == 0 and k > 1:
            t = (pos + 1) // L
            low = np.cumsum((totals - rem)[:, :-1], axis=1)
            keep = np.all(low <= t * sums, axis=1)
            words, rem = words[keep], rem[keep]
    return words


def configuration_array(spec: BinSpec) -> np.ndarray:
    """Every configuration path of ``spec`` as a row of axis labels."""
    return word_array(spec.totals, prune_l=spec.l)
