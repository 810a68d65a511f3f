"""Flag matroids and the k-bin tennis ball process.

The process: on turn ``t`` balls ``(t-1)L+1 .. tL`` enter bin 1, then for
each boundary ``i = 1..k-1`` exactly ``L - (l_1+...+l_i)`` balls move from
bin ``i`` to bin ``i+1``.  An n-configuration is the final bin contents,
recorded as an :class:`~flagpath.partition.OrderedPartition` of ``[nL]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb, prod

import numpy as np

from . import limits
from .errors import (
    DimensionMismatch,
    EmptyFamily,
    IllegalMove,
    NotAFlagBasis,
    WrongCardinality,
)
from .lattice import BinSpec, configuration_array, is_configuration_word
from .matroid import (
    ExchangeVerdict,
    ExplicitMatroid,
    free_matroid,
    quotient_witness,
    tbp_matroid,
    from_mask,
    to_mask,
    verify_matroid_axioms,
)
from .partition import OrderedPartition


class FlagBasisFamily:
    """A set of ordered partitions of ``[m]`` with common block sizes.

    Stored as a lexicographically sorted array of label rows (row ``r``,
    column ``e-1`` holds the block of element ``e``); :attr:`flags` gives the
    same set as :class:`OrderedPartition` objects.
    """

    def __init__(self, ground_size: int, flag_rank, words):
        self.ground_size = int(ground_size)
        self.flag_rank = tuple(int(r) for r in flag_rank)
        if sum(self.flag_rank) != self.ground_size:
            raise ValueError(f"flag rank {self.flag_rank} does not sum to {self.ground_size}")
        words = np.asarray(words, dtype=np.int8).reshape(-1, self.ground_size)
        if len(words):
            words = np.unique(words, axis=0)
        for j, r in enumerate(self.flag_rank, start=1):
            if not np.all((words == j).sum(axis=1) == r):
                raise ValueError(f"some flag is not a {self.flag_rank}-partition")
        self.words = words

    @classmethod
    def from_flags(cls, flags) -> FlagBasisFamily:
        flags = [f if isinstance(f, OrderedPartition) else OrderedPartition.from_lists(f) for f in flags]
        if not flags:
            raise EmptyFamily("no flags given")
        k = flags[0].k
        if any(f.k != k for f in flags):
            raise ValueError("flags have different numbers of blocks")
        return cls(flags[0].ground_size, flags[0].sizes, [f.labels for f in flags])

    @property
    def k(self) -> int:
        return len(self.flag_rank)

    @cached_property
    def _word_set(self) -> frozenset:
        return frozenset(map(tuple, self.words.tolist()))

    @cached_property
    def flags(self) -> frozenset[OrderedPartition]:
        return frozenset(OrderedPartition.from_labels(w, self.k) for w in self._word_set)

    def __len__(self):
        return len(self.words)

    def __contains__(self, item):
        if isinstance(item, OrderedPartition):
            if item.k != self.k:
                return False
            item = item.labels
        return tuple(item) in self._word_set

    def __eq__(self, other):
        if not isinstance(other, FlagBasisFamily):
            return NotImplemented
        return (
            self.flag_rank == other.flag_rank
            and self.words.shape == other.words.shape
            and bool(np.all(self.words == other.words))
        )

    def __hash__(self):
        return hash((self.flag_rank, self._word_set))

    def __repr__(self):
        return f"FlagBasisFamily(ground_size={self.ground_size}, flag_rank={self.flag_rank}, {len(self)} flags)"

    def sorted_flags(self) -> list[OrderedPartition]:
        return sorted(self.flags, key=OrderedPartition.sort_key)

    def to_json(self) -> dict:
        return {
            "ground_size": self.ground_size,
            "flag_rank": list(self.flag_rank),
            "flags": [f.to_lists() for f in self.sorted_flags()],
        }

    @classmethod
    def from_json(cls, data) -> FlagBasisFamily:
        flags = [OrderedPartition.from_lists(f) for f in data["flags"]]
        rank = tuple(data["flag_rank"])
        if any(f.k != len(rank) for f in flags):
            raise ValueError("a flag has the wrong number of blocks")
        return cls(int(data["ground_size"]), rank, [f.labels for f in flags])


def _level_masks(words: np.ndarray, k: int) -> list[np.ndarray]:
    """Prefix-union bitmasks ``C_1..C_k`` of every row (bit ``e-1`` is element ``e``)."""
    pow2 = np.left_shift(np.int64(1), np.arange(words.shape[1], dtype=np.int64))
    return [((words <= i).astype(np.int64) * pow2).sum(axis=1) for i in range(1, k + 1)]


def _chain_words(levels, m: int) -> np.ndarray:
    """Label rows of all chains ``C_1 < ... < C_k`` with ``C_i`` drawn from ``levels[i]``."""
    k = len(levels)
    chains = np.asarray(levels[0], dtype=np.int64)[:, None]
    for level in levels[1:]:
        level = np.asarray(level, dtype=np.int64)
        prev = chains[:, -1:]
        rows, cols = np.nonzero((prev & level[None, :]) == prev)
        chains = np.hstack([chains[rows], level[cols][:, None]])
    bits = np.arange(m, dtype=np.int64)
    words = np.ones((len(chains), m), dtype=np.int8)
    for i in range(k):
        words += ((chains[:, i : i + 1] >> bits) & 1 == 0).astype(np.int8)
    return words


@dataclass(frozen=True)
class FlagMatroid:
    """A flag matroid given by its constituents ``M_1, ..., M_k``.

    A partition is a flag basis exactly when each prefix union ``C_i`` is a
    basis of ``M_i``; the explicit family is only built on demand.
    """

    flag_rank: tuple[int, ...]
    constituents: tuple

    @property
    def ground_size(self) -> int:
        return sum(self.flag_rank)

    @property
    def k(self) -> int:
        return len(self.flag_rank)

    def __contains__(self, partition: OrderedPartition) -> bool:
        if partition.sizes != self.flag_rank:
            return False
        return all(M.is_basis(c) for M, c in zip(self.constituents, partition.prefix_unions()))

    def word_array(self) -> np.ndarray:
        """Label rows of every flag basis, extending bases of ``M_1`` block by block."""
        levels = [sorted(to_mask(b) for b in M.bases()) for M in self.constituents]
        return _chain_words(levels, self.ground_size)

    def flags(self):
        for w in self.word_array().tolist():
            yield OrderedPartition.from_labels(w, self.k)

    def count(self) -> int:
        return len(self.word_array())

    @cached_property
    def family(self) -> FlagBasisFamily:
        limits.check("family", self.ground_size)
        return FlagBasisFamily(self.ground_size, self.flag_rank, self.word_array())


@dataclass(frozen=True)
class TennisBallFlag(FlagMatroid):
    """The flag matroid of n-configurations of the ``spec.l`` tennis ball problem."""

    spec: BinSpec = None

    def __contains__(self, partition: OrderedPartition) -> bool:
        if partition.sizes != self.flag_rank or partition.k != self.spec.k:
            return False
        return is_configuration_word(partition.labels, self.spec.l, self.spec.n)

    def word_array(self) -> np.ndarray:
        return configuration_array(self.spec)

    def count(self) -> int:
        from .enumeration import count_configurations

        return count_configurations(self.spec)


def tbp_flag(spec: BinSpec) -> TennisBallFlag:
    """Constituent i is the n-th ``(l_1+..+l_i, l_{i+1}+..+l_k)``-tbp matroid."""
    sums = spec.partial_sums
    constituents = tuple(
        tbp_matroid(s, spec.L - s, spec.n) if s < spec.L else free_matroid(spec.size)
        for s in sums
    )
    return TennisBallFlag(spec.totals, constituents, spec)


# -- process ---------------------------------------------------------------


@dataclass(frozen=True)
class MoveSchedule:
    """``turns[t-1][i-1]`` is the set of balls moved from bin i to bin i+1 on turn t."""

    turns: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "turns", tuple(tuple(frozenset(m) for m in turn) for turn in self.turns)
        )

    def to_json(self) -> dict:
        return {"turns": [{"moves": [sorted(m) for m in turn]} for turn in self.turns]}

    @classmethod
    def from_json(cls, data) -> MoveSchedule:
        return cls(tuple(tuple(frozenset(m) for m in turn["moves"]) for turn in data["turns"]))


def _move_sizes(spec: BinSpec):
    return [spec.L - s for s in spec.partial_sums[:-1]]


def _replay(spec: BinSpec, moves) -> np.ndarray:
    """Run move arrays (see :func:`realize_many`) and return final bin labels per row."""
    L, m = spec.L, spec.size
    rows = len(moves[0][0]) if moves and moves[0] else 1
    where = np.zeros((rows, m), dtype=np.int8)
    r = np.arange(rows)[:, None]
    for t, turn in enumerate(moves, start=1):
        where[:, (t - 1) * L : t * L] = 1
        for i, chosen in enumerate(turn, start=1):
            bad = where[r, chosen] != i
            if bad.any():
                row, col = np.argwhere(bad)[0]
                ball = int(chosen[row, col]) + 1
                raise IllegalMove(f"turn {t}, boundary {i}: ball {ball} is not in bin {i}")
            where[r, chosen] = i + 1
    return where


def simulate_many(spec: BinSpec, moves) -> np.ndarray:
    """Vectorized :func:`simulate`: ``moves[t][i]`` is an ``(N, size)`` array of 0-based balls."""
    sizes = _move_sizes(spec)
    if len(moves) != spec.n or any(len(turn) != spec.k - 1 for turn in moves):
        raise WrongCardinality("move arrays do not match the turn and boundary counts")
    for turn in moves:
        for chosen, size in zip(turn, sizes):
            if chosen.shape[1] != size or np.any(np.diff(np.sort(chosen, axis=1), axis=1) == 0):
                raise WrongCardinality(f"a move set does not have {size} distinct balls")
    return _replay(spec, moves)


def simulate(spec: BinSpec, schedule: MoveSchedule) -> OrderedPartition:
    sizes = _move_sizes(spec)
    if len(schedule.turns) != spec.n:
        raise WrongCardinality(f"schedule has {len(schedule.turns)} turns, expected {spec.n}")
    moves = []
    for t, turn in enumerate(schedule.turns, start=1):
        if len(turn) != spec.k - 1:
            raise WrongCardinality(f"turn {t} has {len(turn)} moves, expected {spec.k - 1}")
        row = []
        for i, (moved, size) in enumerate(zip(turn, sizes), start=1):
            if len(moved) != size:
                raise WrongCardinality(f"turn {t}, boundary {i}: {len(moved)} balls moved, expected {size}")
            outside = [b for b in moved if not 1 <= b <= spec.size]
            if outside:
                raise IllegalMove(f"turn {t}, boundary {i}: ball {min(outside)} is not in bin {i}")
            row.append(np.array([sorted(b - 1 for b in moved)], dtype=np.int64))
        moves.append(row)
    return OrderedPartition.from_labels(_replay(spec, moves)[0].tolist(), spec.k)


def _process_states(spec: BinSpec):
    """Breadth-first sweep of the process.

    A state records the bin of every ball (0 before it enters).  Returns
    ``(words, counts)``: the final label rows and the number of move
    schedules reaching each of them.
    """
    sizes = _move_sizes(spec)
    L, k, m = spec.L, spec.k, spec.size
    # Bin occupancy is the same on every branch, so each boundary has fixed (p, s).
    occupancy, plan = [0] * k, []
    for _ in range(spec.n):
        occupancy[0] += L
        for i, s in enumerate(sizes):
            plan.append((occupancy[i], s))
            occupancy[i] -= s
            occupancy[i + 1] += s
    exact = prod(comb(p, s) for p, s in plan) < 2**62
    radix = (k + 1) ** np.arange(m, dtype=np.int64) if (k + 1) ** m < 2**63 else None
    states = np.zeros((1, m), dtype=np.int8)
    counts = np.ones(1, dtype=np.int64 if exact else object)
    step = iter(plan)
    for t in range(1, spec.n + 1):
        states[:, (t - 1) * L : t * L] = 1
        for i in range(1, k):
            p, s = next(step)
            balls = np.nonzero(states == i)[1].reshape(len(states), p)
            combos = np.array(list(combinations(range(p), s)), dtype=np.int64)
            moved = balls[:, combos].reshape(-1, s)
            states = np.repeat(states, len(combos), axis=0)
            counts = np.repeat(counts, len(combos))
            states[np.arange(len(states))[:, None], moved] = i + 1
            if radix is None:
                states, inverse = np.unique(states, axis=0, return_inverse=True)
            else:
                _, first, inverse = np.unique(
                    states.astype(np.int64) @ radix, return_index=True, return_inverse=True
                )
                states = states[first]
            merged = np.zeros(len(states), dtype=counts.dtype)
            np.add.at(merged, inverse.ravel(), counts)
            counts = merged
    return states, counts


def reachable_configurations(spec: BinSpec, limit=None) -> FlagBasisFamily:
    """All n-configurations, found by running the ball process exhaustively."""
    limits.check("bfs", spec.size, limit)
    words, _ = _process_states(spec)
    return FlagBasisFamily(spec.size, spec.totals, words)


def movement_counts(spec: BinSpec, limit=None) -> dict[OrderedPartition, int]:
    """Number of distinct move schedules leading to each n-configuration."""
    limits.check("bfs", spec.size, limit)
    words, counts = _process_states(spec)
    return {
        OrderedPartition.from_labels(w, spec.k): int(c)
        for w, c in zip(words.tolist(), counts.tolist())
    }


def realize_many(spec: BinSpec, words) -> list[list[np.ndarray]]:
    """Greedy move arrays for many targets at once.

    ``words`` holds one label row per target.  The result ``moves[t-1][i-1]``
    is an ``(N, size)`` array of 0-based balls moved across boundary ``i`` on
    turn ``t``.  At every boundary the balls destined for the highest bins
    move first and ties go to the lowest label, so bin ``i`` never keeps a
    ball that must travel further.  Rows are assumed to be flag bases.
    """
    words = np.asarray(words, dtype=np.int64).reshape(-1, spec.size)
    rows, m, L = len(words), spec.size, spec.L
    key = -words * (m + 1) + np.arange(m)
    sentinel = np.iinfo(np.int64).max
    where = np.zeros((rows, m), dtype=np.int8)
    r = np.arange(rows)[:, None]
    moves = []
    for t in range(1, spec.n + 1):
        where[:, (t - 1) * L : t * L] = 1
        turn = []
        for i, s in enumerate(_move_sizes(spec), start=1):
            masked = np.where(where == i, key, sentinel)
            chosen = np.sort(np.argpartition(masked, s - 1, axis=1)[:, :s], axis=1)
            if np.any(masked[r, chosen] == sentinel) or np.any(words[r, chosen] <= i):
                raise RuntimeError(f"greedy realization stuck at turn {t}, boundary {i}")
            where[r, chosen] = i + 1
            turn.append(chosen)
        moves.append(turn)
    return moves


def realize(spec: BinSpec, target: OrderedPartition) -> MoveSchedule:
    """A move schedule whose simulation ends in ``target``; see :func:`realize_many`."""
    if target.k != spec.k:
        raise DimensionMismatch(f"target has {target.k} blocks, spec has k={spec.k}")
    if target.ground_size != spec.size or target.sizes != spec.totals:
        raise NotAFlagBasis(f"target block sizes {target.sizes} differ from {spec.totals}")
    flag = tbp_flag(spec)
    for i, (M, c) in enumerate(zip(flag.constituents, target.prefix_unions()), start=1):
        if not M.is_basis(c):
            raise NotAFlagBasis(f"C_{i} = {sorted(c)} is not a basis of constituent {i}")
    moves = realize_many(spec, [target.labels])
    return MoveSchedule(
        tuple(tuple(frozenset(int(b) + 1 for b in chosen[0]) for chosen in turn) for turn in moves)
    )


# -- axiom checking --------------------------------------------------------


@dataclass(frozen=True)
class FlagVerdict:
    ok: bool
    axiom: str | None = None
    index: int | None = None
    witness: object = None
    flag_matroid: FlagMatroid | None = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        if self.ok:
            return {
                "ok": True,
                "constituent_ranks": [M.rank for M in self.flag_matroid.constituents],
            }
        w = self.witness
        if isinstance(w, ExchangeVerdict):
            w = w.to_json()
        elif isinstance(w, OrderedPartition):
            w = w.to_lists()
        elif isinstance(w, frozenset):
            w = sorted(w)
        return {"ok": False, "axiom": self.axiom, "index": self.index, "witness": w}


def is_flag_matroid(family: FlagBasisFamily, limit=None) -> FlagVerdict:
    """Check axioms F1 (constituent basis families), F2 (quotient chain), F3 (closure).

    Returns the first failing axiom with its lexicographically smallest
    witness, or an ok verdict carrying the constituents.
    """
    if not len(family):
        raise EmptyFamily("flag family is empty")
    limits.check("flag", family.ground_size, limit)
    k, m = family.k, family.ground_size
    levels = [np.unique(lv).tolist() for lv in _level_masks(family.words, k)]
    constituents = []
    for i, level in enumerate(levels, start=1):
        sets = [from_mask(x) for x in level]
        verdict = verify_matroid_axioms(sets, limit)
        if not verdict:
            return FlagVerdict(False, "F1", i, verdict)
        constituents.append(ExplicitMatroid(m, frozenset(sets)))
    for i in range(k - 1):
        w = quotient_witness(constituents[i], constituents[i + 1], limit)
        if w is not None:
            return FlagVerdict(False, "F2", i + 1, w)
    fm = FlagMatroid(family.flag_rank, tuple(constituents))
    candidates = _chain_words(levels, m)
    # Every member's chain is among the candidates, so equal sizes mean equal sets.
    if len(candidates) != len(family):
        missing = [
            OrderedPartition.from_labels(w, k)
            for w in candidates.tolist()
            if tuple(w) not in family._word_set
        ]
        return FlagVerdict(False, "F3", None, min(missing, key=OrderedPartition.sort_key))
    return FlagVerdict(True, flag_matroid=fm)
