"""Ordered set partitions of ``[m] = {1, ..., m}``."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from .errors import NotAPartition


@dataclass(frozen=True)
class OrderedPartition:
    """A k-tuple of disjoint non-empty blocks covering ``[m]``.

    Blocks are stored as frozensets; ``labels`` gives the inverse view
    (``labels[e-1]`` is the 1-based block index holding element ``e``).
    """

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise NotAPartition("a partition needs at least one block")
        m = sum(len(b) for b in blocks)
        seen = frozenset().union(*blocks)
        if len(seen) != m:
            raise NotAPartition("blocks overlap")
        if seen != frozenset(range(1, m + 1)):
            raise NotAPartition(f"blocks do not cover [1..{m}] exactly")
        if any(not b for b in blocks):
            raise NotAPartition("empty block")

    @classmethod
    def from_lists(cls, blocks) -> OrderedPartition:
        return cls(tuple(frozenset(b) for b in blocks))

    @classmethod
    def from_labels(cls, labels, k: int | None = None) -> OrderedPartition:
        k = max(labels) if k is None else k
        blocks = [set() for _ in range(k)]
        for e, j in enumerate(labels, start=1):
            blocks[j - 1].add(e)
        return cls(tuple(frozenset(b) for b in blocks))

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def ground_size(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def labels(self) -> tuple[int, ...]:
        out = [0] * self.ground_size
        for j, b in enumerate(self.blocks, start=1):
            for e in b:
                out[e - 1] = j
        return tuple(out)

    def prefix_unions(self) -> tuple[frozenset[int], ...]:
        """``(C_1, ..., C_k)`` with ``C_i`` the union of the first i blocks."""
        return tuple(accumulate(self.blocks, frozenset.union))

    def to_lists(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]

    def sort_key(self):
        return tuple(tuple(sorted(b)) for b in self.blocks)

    def __str__(self):
        return "(" + ", ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks) + ")"
