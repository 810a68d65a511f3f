"""Small-ground-set matroids.

Two representations share one duck-typed interface (``ground_size``,
``rank``, ``rank_of``, ``is_independent``, ``is_basis``, ``bases``):

* :class:`NestedMatroid` -- the lattice path matroid ``M[P]`` of a bounding
  path ``P`` over ``{N, E}``, stored only as its prefix-cap vector.
* :class:`ExplicitMatroid` -- a listed basis family, used for truncations,
  flag constituents and brute-force cross-checks.

Ground sets are always ``[m] = {1, ..., m}``.  Exhaustive routines work on
bitmasks (bit ``e - 1`` stands for element ``e``) and refuse ground sets
above the ``flats``/``exchange`` ceilings of :mod:`flagpath.limits`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import limits
from .errors import (
    BadRank,
    DimensionMismatch,
    EmptyFamily,
    EmptyPath,
    GroundMismatch,
    OutOfRange,
)
from .lattice import StepSequence


def to_mask(subset) -> int:
    mask = 0
    for e in subset:
        mask |= 1 << (e - 1)
    return mask


def from_mask(mask: int) -> frozenset[int]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return frozenset(out)


def _sorted_key(s):
    return (len(s), tuple(sorted(s)))


def _check_range(subset, ground_size):
    for e in subset:
        if not 1 <= e <= ground_size:
            raise OutOfRange(f"element {e} outside ground set [1..{ground_size}]")


@dataclass(frozen=True)
class NestedMatroid:
    """``M[P]``: bases are the N-position sets of paths not above ``P``.

    ``caps[t-1]`` is the number of N steps among the first ``t`` steps of
    ``P``.  A set ``A`` is independent exactly when ``|A & [t]| <= caps[t-1]``
    for every ``t``.
    """

    caps: tuple[int, ...]

    def __post_init__(self):
        caps = tuple(int(c) for c in self.caps)
        object.__setattr__(self, "caps", caps)
        prev = 0
        for c in caps:
            if c - prev not in (0, 1):
                raise ValueError(f"caps must rise by 0 or 1 per step: {caps}")
            prev = c

    @classmethod
    def from_path(cls, path: StepSequence) -> NestedMatroid:
        if path.k != 2:
            raise DimensionMismatch(f"bounding path must use N/E steps (k=2), got k={path.k}")
        caps, c = [], 0
        for s in path.steps:
            c += s == 1
            caps.append(c)
        return cls(tuple(caps))

    @property
    def ground_size(self) -> int:
        return len(self.caps)

    @property
    def rank(self) -> int:
        return self.caps[-1] if self.caps else 0

    def bounding_path(self) -> StepSequence:
        steps, prev = [], 0
        for c in self.caps:
            steps.append(1 if c > prev else 2)
            prev = c
        return StepSequence(tuple(steps), 2)

    def is_independent(self, subset) -> bool:
        _check_range(subset, self.ground_size)
        for i, e in enumerate(sorted(set(subset)), start=1):
            if i > self.caps[e - 1]:
                return False
        return True

    def rank_of(self, subset) -> int:
        _check_range(subset, self.ground_size)
        # Ascending greedy: adding the largest element only tightens the cap at it.
        r = 0
        for e in sorted(set(subset)):
            if r < self.caps[e - 1]:
                r += 1
        return r

    def is_basis(self, subset) -> bool:
        return len(set(subset)) == self.rank and self.is_independent(subset)

    def _rank_mask(self, mask: int) -> int:
        r, e = 0, 0
        caps = self.caps
        while mask:
            if mask & 1 and r < caps[e]:
                r += 1
            mask >>= 1
            e += 1
        return r

    def independent_sets_of_size(self, size: int):
        """Independent sets of the given size in lexicographic order."""
        g, caps = self.ground_size, self.caps
        chosen = []

        def rec(start):
            if len(chosen) == size:
                yield frozenset(chosen)
                return
            need = size - len(chosen)
            for e in range(start, g - need + 2):
                if len(chosen) + 1 <= caps[e - 1]:
                    chosen.append(e)
                    yield from rec(e + 1)
                    chosen.pop()

        yield from rec(1)

    def bases(self):
        return self.independent_sets_of_size(self.rank)

    def count_bases(self) -> int:
        # ways[c] = number of independent prefixes holding c elements.
        ways = [1] + [0] * self.rank
        for t, cap in enumerate(self.caps, start=1):
            new = ways[:]
            for c in range(1, cap + 1):
                new[c] += ways[c - 1]
            ways = new
        return ways[self.rank]

    def to_json(self) -> dict:
        return {"ground_size": self.ground_size, "caps": list(self.caps)}

    @classmethod
    def from_json(cls, data) -> NestedMatroid:
        caps = tuple(data["caps"])
        if len(caps) != data.get("ground_size", len(caps)):
            raise ValueError("ground_size disagrees with caps length")
        return cls(caps)


@dataclass(frozen=True)
class ExplicitMatroid:
    """A matroid given by its list of bases.

    The constructor only checks equicardinality; run
    :func:`verify_matroid_axioms` to certify basis exchange.
    """

    ground_size: int
    basis_family: frozenset[frozenset[int]]
    _masks: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fam = frozenset(frozenset(b) for b in self.basis_family)
        if not fam:
            raise EmptyFamily("a matroid needs at least one basis")
        sizes = {len(b) for b in fam}
        if len(sizes) != 1:
            raise ValueError(f"bases of different sizes {sorted(sizes)}")
        for b in fam:
            _check_range(b, self.ground_size)
        object.__setattr__(self, "basis_family", fam)
        object.__setattr__(self, "_masks", frozenset(to_mask(b) for b in fam))

    @property
    def rank(self) -> int:
        return len(next(iter(self.basis_family)))

    def bases(self):
        return iter(sorted(self.basis_family, key=lambda b: tuple(sorted(b))))

    def count_bases(self) -> int:
        return len(self.basis_family)

    def is_basis(self, subset) -> bool:
        return frozenset(subset) in self.basis_family

    def is_independent(self, subset) -> bool:
        _check_range(subset, self.ground_size)
        m = to_mask(subset)
        return any(m & b == m for b in self._masks)

    def rank_of(self, subset) -> int:
        _check_range(subset, self.ground_size)
        return self._rank_mask(to_mask(subset))

    def _rank_mask(self, mask: int) -> int:
        return max(bin(mask & b).count("1") for b in self._masks)

    def has_basis_mask(self, mask: int) -> bool:
        return mask in self._masks


def explicit(M) -> ExplicitMatroid:
    """Materialize any matroid's bases."""
    if isinstance(M, ExplicitMatroid):
        return M
    return ExplicitMatroid(M.ground_size, frozenset(M.bases()))


def free_matroid(m: int) -> NestedMatroid:
    return NestedMatroid(tuple(range(1, m + 1)))


def nested_from_path(path: StepSequence) -> NestedMatroid:
    return NestedMatroid.from_path(path)


def tbp_path(a: int, b: int, n: int) -> StepSequence:
    if a < 0 or b < 0 or n < 1:
        raise ValueError(f"need a, b >= 0 and n >= 1, got ({a}, {b}, {n})")
    if a + b == 0:
        raise EmptyPath("a + b must be at least 1")
    return StepSequence(((1,) * a + (2,) * b) * n, 2)


def tbp_matroid(a: int, b: int, n: int) -> NestedMatroid:
    """The n-th (a, b)-tbp matroid ``M[(N^a E^b)^n]``."""
    return NestedMatroid.from_path(tbp_path(a, b, n))


def tbp_parameters(M) -> tuple[int, int, int] | None:
    """Recover ``(a, b, n)`` if ``M`` is ``M[(N^a E^b)^n]`` with ``a, b >= 1``."""
    if not isinstance(M, NestedMatroid) or not M.ground_size:
        return None
    word = M.bounding_path().to_text()
    a = len(word) - len(word.lstrip("N"))
    rest = word[a:]
    b = len(rest) - len(rest.lstrip("E"))
    if a == 0 or b == 0 or len(word) % (a + b):
        return None
    n = len(word) // (a + b)
    if word != ("N" * a + "E" * b) * n:
        return None
    return a, b, n


def rank(M, subset) -> int:
    return M.rank_of(subset)


def closure(M, subset) -> frozenset[int]:
    _check_range(subset, M.ground_size)
    base = set(subset)
    r = M.rank_of(base)
    out = set(base)
    for e in range(1, M.ground_size + 1):
        if e not in base and M.rank_of(base | {e}) == r:
            out.add(e)
    return frozenset(out)


def is_flat(M, subset) -> bool:
    return closure(M, subset) == frozenset(subset)


def rank_table(M, limit=None) -> list[int]:
    """``table[mask]`` = rank of the subset encoded by ``mask``."""
    g = M.ground_size
    limits.check("flats", g, limit)
    if isinstance(M, NestedMatroid):
        return [M._rank_mask(mask) for mask in range(1 << g)]
    size = 1 << g
    indep = bytearray(size)
    for b in M._masks:
        indep[b] = 1
    for mask in range(size - 1, 0, -1):
        if indep[mask]:
            m = mask
            while m:
                low = m & -m
                indep[mask ^ low] = 1
                m ^= low
    table = [0] * size
    for mask in range(1, size):
        if indep[mask]:
            table[mask] = bin(mask).count("1")
        else:
            best, m = 0, mask
            while m:
                low = m & -m
                v = table[mask ^ low]
                if v > best:
                    best = v
                m ^= low
            table[mask] = best
    return table


def _flat_masks(M, table=None, limit=None) -> list[int]:
    g = M.ground_size
    table = rank_table(M, limit) if table is None else table
    full = (1 << g) - 1
    out = []
    for mask in range(1 << g):
        r = table[mask]
        rest = full & ~mask
        closed = True
        while rest:
            low = rest & -rest
            if table[mask | low] == r:
                closed = False
                break
            rest ^= low
        if closed:
            out.append(mask)
    return out


def flats(M, limit=None) -> list[frozenset[int]]:
    """All flats, sorted by size then lexicographically."""
    return sorted((from_mask(m) for m in _flat_masks(M, limit=limit)), key=_sorted_key)


def cyclic_flats(M: NestedMatroid) -> list[frozenset[int]]:
    """Proper non-trivial cyclic flats of ``M[P]``: ``[t]`` where step t is E and t+1 is N."""
    steps = M.bounding_path().steps
    return [
        frozenset(range(1, t + 1))
        for t in range(1, len(steps))
        if steps[t - 1] == 2 and steps[t] == 1
    ]


def cyclic_flats_brute(M, limit=None) -> list[frozenset[int]]:
    """Cyclic flats other than the empty set and the whole ground set, by exhaustion."""
    g = M.ground_size
    table = rank_table(M, limit)
    full = (1 << g) - 1
    out = []
    for mask in _flat_masks(M, table):
        if mask in (0, full):
            continue
        r = table[mask]
        m, cyclic = mask, True
        while m:
            low = m & -m
            if table[mask ^ low] != r:
                cyclic = False
                break
            m ^= low
        if cyclic:
            out.append(from_mask(mask))
    return sorted(out, key=_sorted_key)


def quotient_witness(M, N, limit=None) -> frozenset[int] | None:
    """Smallest flat of ``M`` that is not a flat of ``N``, or ``None``."""
    if M.ground_size != N.ground_size:
        raise GroundMismatch(f"ground sizes {M.ground_size} and {N.ground_size} differ")
    flats_n = set(_flat_masks(N, limit=limit))
    bad = [from_mask(m) for m in _flat_masks(M, limit=limit) if m not in flats_n]
    return min(bad, key=_sorted_key) if bad else None


def _tbp_quotient_fast(M, N) -> bool | None:
    pm, pn = tbp_parameters(M), tbp_parameters(N)
    if pm is None or pn is None:
        return None
    (a, b, n), (a2, b2, n2) = pm, pn
    if n != n2 or a + b != a2 + b2:
        return None
    # Cyclic flats [t(a+b)] of M must be flats of N ...
    for z in cyclic_flats(M):
        if not is_flat(N, z):
            return False
    # ... and every isthmus set with |I & [t(a+b)]| < a must keep |I & [t(a+b)]| < a2.
    return a <= a2


def is_quotient(M, N, method: str = "brute", limit=None) -> bool:
    """Whether every flat of ``M`` is a flat of ``N``.

    ``method="fast"`` applies the tbp-pair argument (cyclic-flat chain plus
    the isthmus inequality) when both are tbp matroids with the same n and
    ``a + b``; otherwise, and for ``"brute"``, flats are compared directly.
    """
    if M.ground_size != N.ground_size:
        raise GroundMismatch(f"ground sizes {M.ground_size} and {N.ground_size} differ")
    if method == "fast":
        verdict = _tbp_quotient_fast(M, N)
        if verdict is not None:
            return verdict
    elif method != "brute":
        raise ValueError(f"unknown method {method!r}")
    return quotient_witness(M, N, limit) is None


def truncate(M, r: int, limit=None) -> ExplicitMatroid:
    if not 1 <= r <= M.rank:
        raise BadRank(f"truncation rank {r} outside [1, {M.rank}]")
    limits.check("exchange", M.ground_size, limit)
    if isinstance(M, NestedMatroid):
        bases = frozenset(M.independent_sets_of_size(r))
    else:
        g = M.ground_size
        bases = frozenset(
            frozenset(c) for c in combinations(range(1, g + 1), r) if M.is_independent(c)
        )
    return ExplicitMatroid(M.ground_size, bases)


@dataclass(frozen=True)
class ExchangeVerdict:
    ok: bool
    b1: frozenset[int] | None = None
    b2: frozenset[int] | None = None
    x: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        if self.ok:
            return {"ok": True}
        return {
            "ok": False,
            "reason": self.reason,
            "b1": sorted(self.b1),
            "b2": sorted(self.b2),
            "x": self.x,
        }


def verify_matroid_axioms(family, limit=None) -> ExchangeVerdict:
    """Check equicardinality and basis exchange over a family of subsets of ``[m]``.

    On failure returns the lexicographically first ``(B1, B2, x)`` with
    ``x in B1 - B2`` such that no ``y in B2 - B1`` gives ``B1 - x + y`` in the family.
    """
    fam = sorted({frozenset(b) for b in family}, key=lambda b: tuple(sorted(b)))
    if not fam:
        raise EmptyFamily("empty basis family")
    ground = max((max(b) for b in fam if b), default=0)
    limits.check("exchange", ground, limit)
    size = len(fam[0])
    for b in fam[1:]:
        if len(b) != size:
            return ExchangeVerdict(False, fam[0], b, None, "unequal cardinalities")
    masks = [to_mask(b) for b in fam]
    present = set(masks)
    for b1, m1 in zip(fam, masks):
        for b2, m2 in zip(fam, masks):
            if m1 == m2:
                continue
            only2 = m2 & ~m1
            for x in sorted(b1 - b2):
                base = m1 & ~(1 << (x - 1))
                y_bits = only2
                found = False
                while y_bits:
                    low = y_bits & -y_bits
                    if base | low in present:
                        found = True
                        break
                    y_bits ^= low
                if not found:
                    return ExchangeVerdict(False, b1, b2, x, "basis exchange fails")
    return ExchangeVerdict(True)
