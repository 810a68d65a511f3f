"""Cross-oracle agreement checks at desk scale.

Each check pairs a fast construction with an exhaustive oracle that does not
share its code path.  ``run_checks`` backs the ``selfcheck`` subcommand.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from . import diagram, enumeration, flag, lattice, matroid
from .lattice import BinSpec, StepSequence


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""
    gating: bool = True


def specs_up_to(size: int, max_k: int | None = None):
    """Every BinSpec with ``nL <= size`` (and ``k <= max_k``), in a fixed order."""
    for L in range(1, size + 1):
        for cut in product((0, 1), repeat=L - 1):
            l, run = [], 1
            for c in cut:
                if c:
                    l.append(run)
                    run = 1
                else:
                    run += 1
            l.append(run)
            if max_k is not None and len(l) > max_k:
                continue
            for n in range(1, size // L + 1):
                yield BinSpec(tuple(l), n)


def all_bounding_paths(max_len: int):
    for m in range(1, max_len + 1):
        for steps in product((1, 2), repeat=m):
            yield StepSequence(steps, 2)


def bases_by_paths(P: StepSequence) -> set[frozenset[int]]:
    """N-position sets of paths ending where P ends and never rising above it."""
    height, heights = 0, []
    for s in P.steps:
        height += s == 1
        heights.append(height)
    r = height
    out = set()
    for north in combinations(range(1, len(P) + 1), r):
        q, ok, ns = 0, True, set(north)
        for t in range(1, len(P) + 1):
            q += t in ns
            if q > heights[t - 1]:
                ok = False
                break
        if ok:
            out.add(frozenset(north))
    return out


def _check(name, fn, gating=True):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed check, not an aborted run
        return Check(name, False, f"{type(exc).__name__}: {exc}", gating)
    return Check(name, ok, detail, gating)


def check_nested_bases(max_len=8):
    bad = [
        P.to_text()
        for P in all_bounding_paths(max_len)
        if set(matroid.nested_from_path(P).bases()) != bases_by_paths(P)
    ]
    return not bad, f"{len(bad)} mismatching paths" if bad else "ok"


def check_independence(max_len=7):
    bad = []
    for P in all_bounding_paths(max_len):
        M = matroid.nested_from_path(P)
        bases = bases_by_paths(P)
        for mask in range(1 << len(P)):
            A = matroid.from_mask(mask)
            if M.is_independent(A) != any(A <= B for B in bases):
                bad.append((P.to_text(), sorted(A)))
    return not bad, f"first mismatch {bad[0]}" if bad else "ok"


def check_cyclic_flats(max_len=8):
    bad = [
        P.to_text()
        for P in all_bounding_paths(max_len)
        if matroid.cyclic_flats(matroid.nested_from_path(P))
        != matroid.cyclic_flats_brute(matroid.nested_from_path(P))
    ]
    return not bad, f"{len(bad)} mismatches, first {bad[0]}" if bad else "ok"


def check_quotients(max_size=8):
    bad = []
    for n in range(1, max_size + 1):
        for s in range(1, max_size // n + 1):
            ms = [matroid.tbp_matroid(a, s - a, n) for a in range(s + 1)]
            for M, N in product(ms, repeat=2):
                if matroid.is_quotient(M, N, "fast") != matroid.is_quotient(M, N, "brute"):
                    bad.append((M.caps, N.caps))
    return not bad, f"{len(bad)} disagreements" if bad else "ok"


def check_counts(size=8):
    bad = []
    for spec in specs_up_to(size):
        dp = enumeration.count_configurations(spec)
        filt = enumeration.count_by_filter(spec)
        bfs = len(flag.reachable_configurations(spec))
        if not dp == filt == bfs:
            bad.append((spec.l, spec.n, dp, filt, bfs))
    return not bad, f"first disagreement {bad[0]}" if bad else "ok"


def check_predicate_vs_process(size=8):
    bad = []
    for spec in specs_up_to(size):
        reach = flag.reachable_configurations(spec).words
        words = lattice.word_array(spec.totals)
        pred = words[lattice.boundary_mask(words, spec.l, spec.n)]
        if not np.array_equal(reach, pred):
            bad.append((spec.l, spec.n))
    return not bad, f"first disagreement {bad[0]}" if bad else "ok"


def check_flags(size=7):
    bad = []
    for spec in specs_up_to(size):
        fm = flag.tbp_flag(spec)
        fam = fm.family
        verdict = flag.is_flag_matroid(fam)
        if not verdict:
            bad.append((spec.l, spec.n, verdict.axiom))
            continue
        if not np.array_equal(flag.simulate_many(spec, flag.realize_many(spec, fam.words)), fam.words):
            bad.append((spec.l, spec.n, "realize"))
    return not bad, f"first failure {bad[0]}" if bad else "ok"


def check_diagrams(max_l=3, max_n=3, corrected=True):
    bad = []
    for l in product(range(1, max_l + 1), repeat=3):
        for n in range(1, max_n + 1):
            if diagram.diagram_matrix(l, n, corrected=corrected) != diagram.brute_force_matrix(BinSpec(l, n)):
                bad.append((l, n))
    return not bad, f"{len(bad)} mismatches, first {bad[0]}" if bad else "ok"


def check_bounds(size=10):
    bad = [
        (spec.l, spec.n)
        for spec in specs_up_to(size, max_k=4)
        if not enumeration.bounds(spec, with_exact=True).sandwich_holds()
    ]
    return not bad, f"first violation {bad[0]}" if bad else "ok"


def check_hook_closed_form():
    bad = [
        (k, n)
        for k in range(2, 5)
        for n in range(1, 5)
        if enumeration.standard_young_tableaux((n,) * k) != enumeration.equal_rows_syt_closed_form(1, k, n)
    ]
    return not bad, f"mismatch at {bad[0]}" if bad else "ok"


def run_checks() -> list[Check]:
    return [
        _check("nested bases = paths below P (|P| <= 8)", check_nested_bases),
        _check("cap criterion = subset of a basis (|P| <= 7)", check_independence),
        _check("cyclic flats formula = brute force (|P| <= 8)", check_cyclic_flats),
        _check("fast tbp quotient = brute force ((a+b)n <= 8)", check_quotients),
        _check("DP = filter = process counts (nL <= 8)", check_counts),
        _check("configuration predicate = process reachability (nL <= 8)", check_predicate_vs_process),
        _check("tbp flag axioms and realization round trip (nL <= 7)", check_flags),
        _check("corrected diagram = brute force (l_i <= 3, n <= 3)", check_diagrams),
        _check(
            "literal block recursion = brute force (l_i <= 3, n <= 3)",
            lambda: check_diagrams(corrected=False),
            gating=False,
        ),
        _check("bounds sandwich (nL <= 10, k <= 4)", check_bounds),
        _check("hook-length = equal-row closed form", check_hook_closed_form),
    ]
