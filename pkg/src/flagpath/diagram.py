"""The n-diagram of a 3-bin tennis ball problem.

The n-diagram is the set of points of N^3 visited by some configuration
path.  It is pushed upward in z and backward in x, so it is recorded by the
matrix of minimum heights ``m_n(x, y)``: row ``x + 1``, column ``y + 1``
(``entries[x][y]`` here), with ``None`` standing for the unreachable symbol
``*``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import product

from . import limits
from .errors import DimensionMismatch, OutOfRange
from .lattice import BinSpec, StepSequence, configuration_words, multiset_words

STAR = None


@dataclass(frozen=True)
class DiagramMatrix:
    l: tuple[int, int, int]
    n: int
    entries: tuple[tuple[int | None, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "l", tuple(self.l))
        object.__setattr__(self, "entries", tuple(tuple(r) for r in self.entries))
        rows, cols = self.n * self.l[0] + 1, self.n * self.l[1] + 1
        if len(self.entries) != rows or any(len(r) != cols for r in self.entries):
            raise ValueError(f"diagram for l={self.l}, n={self.n} must be {rows}x{cols}")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def height(self) -> int:
        return self.n * self.l[2]

    def block(self, rows, cols):
        return tuple(tuple(self.entries[i][j] for j in cols) for i in rows)

    def to_json(self) -> dict:
        return {"l": list(self.l), "n": self.n, "entries": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, data) -> DiagramMatrix:
        return cls(tuple(data["l"]), int(data["n"]), tuple(tuple(r) for r in data["entries"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x\\y"] + list(range(self.shape[1])))
        for x, row in enumerate(self.entries):
            w.writerow([x] + ["*" if v is STAR else v for v in row])
        return buf.getvalue()

    def to_ascii(self) -> str:
        cells = [["*" if v is STAR else str(v) for v in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells) + "\n"


def _stripe_value(v: int, l1: int, l2: int, l3: int) -> int:
    # q with q(l1+l2) < v <= (q+1)(l1+l2), i.e. q = n - s.
    return (-(-v // (l1 + l2)) - 1) * l3


def diagram_matrix(l, n: int, corrected: bool = False) -> DiagramMatrix:
    """The matrix ``M_n`` built block-recursively from ``M_{n-1}``.

    ``M_n = [[A, B], [C, D]]`` with ``A = M_{n-1}``, ``B`` diagonal stripes
    of height multiples of ``l_3``, ``C`` counting down to ``(n-1) l_3`` in
    its last column, ``D`` constant ``(n-1) l_3``.

    Taken literally, the recursion copies ``*`` entries of ``C_{m}`` into
    every later ``M_n`` although those points become reachable once the
    height ceiling rises to ``n l_3``.  ``corrected=True`` caps every ``C``
    block at the final ceiling ``n l_3`` instead, which yields the true
    n-diagram.
    """
    l = tuple(l)
    if len(l) != 3:
        raise DimensionMismatch(f"diagrams are three-dimensional, got k={len(l)}")
    l1, l2, l3 = l
    if min(l) < 1 or n < 1:
        raise ValueError(f"need three positive bin sizes and n >= 1, got l={l}, n={n}")
    rows = [[0] * (l2 + 1) for _ in range(l1 + 1)]
    for m in range(2, n + 1):
        top = (m - 1) * l1 + 1
        width = (m - 1) * l2 + 1
        for i in range(1, top + 1):
            rows[i - 1].extend(
                _stripe_value(i - 1 + j + (m - 1) * l2, l1, l2, l3) for j in range(1, l2 + 1)
            )
        low = (m - 1) * l3
        c_row = []
        for c in range(1, width + 1):
            v = low + (width - c)
            ceiling = n * l3 if corrected else m * l3
            c_row.append(v if v <= ceiling else STAR)
        for _ in range(l1):
            rows.append(c_row + [low] * l2)
    return DiagramMatrix(l, n, tuple(tuple(r) for r in rows))


def _check_xy(D: DiagramMatrix, x: int, y: int):
    rows, cols = D.shape
    if not (0 <= x < rows and 0 <= y < cols):
        raise OutOfRange(f"({x}, {y}) outside the {rows}x{cols} diagram")


def min_height(D: DiagramMatrix, x: int, y: int):
    _check_xy(D, x, y)
    return D.entries[x][y]


def contains_point(D: DiagramMatrix, p) -> bool:
    x, y, z = p
    _check_xy(D, x, y)
    if not 0 <= z <= D.height:
        raise OutOfRange(f"z = {z} outside [0, {D.height}]")
    m = D.entries[x][y]
    return m is not STAR and m <= z


def _point_ok(x, y, z, l, L):
    # Bin inequalities at a block boundary x + y + z = tL.
    s = x + y + z
    if s % L:
        return True
    t = s // L
    return x <= t * l[0] and x + y <= t * (l[0] + l[1])


def diagram_points(spec: BinSpec) -> set[tuple[int, int, int]]:
    """Points lying on some configuration path (forward and backward reachability)."""
    if spec.k != 3:
        raise DimensionMismatch(f"diagrams are three-dimensional, got k={spec.k}")
    l, L = spec.l, spec.L
    X, Y, Z = spec.totals
    fwd = set()
    for s in range(X + Y + Z + 1):
        for x in range(min(s, X) + 1):
            for y in range(min(s - x, Y) + 1):
                z = s - x - y
                if z > Z or not _point_ok(x, y, z, l, L):
                    continue
                if s == 0 or (x - 1, y, z) in fwd or (x, y - 1, z) in fwd or (x, y, z - 1) in fwd:
                    fwd.add((x, y, z))
    back = set()
    for s in range(X + Y + Z, -1, -1):
        for x in range(min(s, X) + 1):
            for y in range(min(s - x, Y) + 1):
                z = s - x - y
                p = (x, y, z)
                if p not in fwd:
                    continue
                if p == (X, Y, Z) or (x + 1, y, z) in back or (x, y + 1, z) in back or (x, y, z + 1) in back:
                    back.add(p)
    return back


def _matrix_from_points(spec: BinSpec, points) -> DiagramMatrix:
    X, Y, _ = spec.totals
    rows = [[STAR] * (Y + 1) for _ in range(X + 1)]
    for x, y, z in points:
        if rows[x][y] is STAR or z < rows[x][y]:
            rows[x][y] = z
    return DiagramMatrix(spec.l, spec.n, tuple(tuple(r) for r in rows))


def brute_force_matrix(spec: BinSpec, limit=None) -> DiagramMatrix:
    """Minimum heights from the reachability sweep over boundary-valid prefixes."""
    if spec.k != 3:
        raise DimensionMismatch(f"diagrams are three-dimensional, got k={spec.k}")
    limits.check("diagram_bfm", spec.size, limit)
    return _matrix_from_points(spec, diagram_points(spec))


def enumerated_matrix(spec: BinSpec, limit=None) -> DiagramMatrix:
    """Minimum heights collected by walking every configuration path."""
    if spec.k != 3:
        raise DimensionMismatch(f"diagrams are three-dimensional, got k={spec.k}")
    limits.check("diagram_paths", spec.size, limit)
    points = set()
    for w in configuration_words(spec):
        p = [0, 0, 0]
        points.add((0, 0, 0))
        for s in w:
            p[s - 1] += 1
            points.add(tuple(p))
    return _matrix_from_points(spec, points)


def paths_in_diagram(D: DiagramMatrix):
    """Monotone paths from the origin to the far corner that stay inside ``D``."""
    X, Y, Z = D.n * D.l[0], D.n * D.l[1], D.n * D.l[2]
    word = []

    def inside(x, y, z):
        m = D.entries[x][y]
        return m is not STAR and m <= z

    def rec(x, y, z):
        if (x, y, z) == (X, Y, Z):
            yield tuple(word)
            return
        for axis, (nx, ny, nz) in ((1, (x + 1, y, z)), (2, (x, y + 1, z)), (3, (x, y, z + 1))):
            if nx <= X and ny <= Y and nz <= Z and inside(nx, ny, nz):
                word.append(axis)
                yield from rec(nx, ny, nz)
                word.pop()

    if inside(0, 0, 0):
        yield from rec(0, 0, 0)


@dataclass(frozen=True)
class DiagramVerdict:
    ok: bool
    counterexample: StepSequence | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def paths_in_diagram_are_configurations(D: DiagramMatrix, spec: BinSpec | None = None, limit=None) -> DiagramVerdict:
    """Compare the paths inside ``D`` with the configuration paths of ``spec``."""
    spec = BinSpec(D.l, D.n) if spec is None else spec
    if spec.k != 3 or tuple(spec.l) != tuple(D.l) or spec.n != D.n:
        raise DimensionMismatch(f"diagram (l={D.l}, n={D.n}) does not match spec {spec}")
    limits.check("diagram_paths", spec.size, limit)
    inside = set(paths_in_diagram(D))
    configs = set(configuration_words(spec))
    extra = sorted(inside - configs)
    if extra:
        return DiagramVerdict(False, StepSequence(extra[0], 3), "path in diagram is not a configuration path")
    missing = sorted(configs - inside)
    if missing:
        return DiagramVerdict(False, StepSequence(missing[0], 3), "configuration path leaves the diagram")
    return DiagramVerdict(True)


def witness_path(l, n: int, x: int, y: int) -> StepSequence | None:
    """A configuration path through ``(x, y, m_n(x, y))``, or ``None`` at a ``*`` entry.

    Follows the induction on n: points of the old block are reached by
    completing an (n-1)-witness, the rest by explicit step patterns.  Old
    cells that were ``*`` one turn earlier use the generic pattern
    ``e3^z e2^y e1^x`` followed by the remaining steps in the order e3, e2, e1.
    """
    l1, l2, l3 = l
    if not (0 <= x <= n * l1 and 0 <= y <= n * l2):
        raise OutOfRange(f"({x}, {y}) outside the diagram")

    def word(*runs):
        out = []
        for axis, count in runs:
            out.extend([axis] * count)
        return StepSequence(tuple(out), 3)

    def generic(z):
        return word((3, z), (2, y), (1, x), (3, n * l3 - z), (2, n * l2 - y), (1, n * l1 - x))

    if n == 1:
        return word((2, y), (1, x), (3, l3), (2, l2 - y), (1, l1 - x))
    if x <= (n - 1) * l1 and y <= (n - 1) * l2:
        prev = witness_path(l, n - 1, x, y)
        if prev is not None:
            return StepSequence(prev.steps + word((3, l3), (2, l2), (1, l1)).steps, 3)
        z = diagram_matrix(l, n, corrected=True).entries[x][y]
        return None if z is STAR else generic(z)
    if x > (n - 1) * l1:
        if y >= (n - 1) * l2:
            base = witness_path(l, n - 1, 0, 0).steps
            tail = word(
                (2, y - (n - 1) * l2), (1, x - (n - 1) * l1), (3, l3), (2, n * l2 - y), (1, n * l1 - x)
            )
            return StepSequence(base + tail.steps, 3)
        z = (n - 1) * (l2 + l3) - y
        return None if z > n * l3 else generic(z)
    # x <= (n-1) l1 and y > (n-1) l2: stripes of the B block.
    return generic(_stripe_value(x + y, l1, l2, l3))


def _height_diagrams(rows: int, cols: int, height: int):
    """Height matrices ``rows x cols`` over ``{0..height, *}``, non-decreasing down each column.

    These are the point sets closed under the pushes ``x -> x' <= x`` and
    ``z -> z' >= z``, with the origin present.
    """
    values = list(range(height + 1)) + [STAR]
    order = {v: i for i, v in enumerate(values)}
    columns = [
        col
        for col in product(values, repeat=rows)
        if all(order[a] <= order[b] for a, b in zip(col, col[1:]))
    ]
    for chosen in product(columns, repeat=cols):
        if chosen[0][0] != 0:
            continue
        yield tuple(tuple(chosen[y][x] for y in range(cols)) for x in range(rows))


def non_flag_diagrams(flag_rank=(2, 2, 2), cobases=((2, 6), (4, 5)), absent=((4, 6), (5, 6))):
    """Search pushed-closed height diagrams whose path families are not flag matroids.

    Paths run from the origin to ``flag_rank``; a path is read as the
    ordered partition putting ball ``i`` in block ``j`` when step ``i`` is
    ``e_j``.  Yields ``(diagram, family, verdict)`` for every distinct family
    that contains the ``e_3``-step sets in ``cobases``, none of those in
    ``absent``, and fails the flag axioms.
    """
    from .flag import FlagBasisFamily, is_flag_matroid
    from .partition import OrderedPartition

    r1, r2, r3 = flag_rank
    rows, cols, depth = r1 + 1, r2 + 1, r3 + 1
    words = list(multiset_words(flag_rank))
    masks = []
    for w in words:
        p, m = [0, 0, 0], 1
        for s in w:
            p[s - 1] += 1
            m |= 1 << ((p[0] * cols + p[1]) * depth + p[2])
        masks.append(m)
    want = [frozenset(c) for c in cobases]
    avoid = [frozenset(c) for c in absent]
    seen = set()
    for entries in _height_diagrams(rows, cols, r3):
        region = 0
        for x in range(rows):
            for y in range(cols):
                h = entries[x][y]
                if h is STAR:
                    continue
                for z in range(h, depth):
                    region |= 1 << ((x * cols + y) * depth + z)
        chosen = frozenset(i for i, m in enumerate(masks) if m & ~region == 0)
        if not chosen or chosen in seen:
            continue
        seen.add(chosen)
        e3_sets = {frozenset(p for p, s in enumerate(words[i], start=1) if s == 3) for i in chosen}
        if not all(c in e3_sets for c in want) or any(c in e3_sets for c in avoid):
            continue
        family = FlagBasisFamily.from_flags(
            [OrderedPartition.from_labels(words[i], 3) for i in sorted(chosen)]
        )
        verdict = is_flag_matroid(family)
        if not verdict:
            yield DiagramMatrix(tuple(flag_rank), 1, entries), family, verdict
