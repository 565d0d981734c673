"""Kauffman bracket and Jones polynomial, plus the end-to-end certificate.

Conventions (fixed here and locked by the torus-knot tests):

* bracket of the unknot is 1, a disjoint unknot multiplies by
  delta = -A^2 - A^(-2);
* A-smoothing of a crossing record (a, b, c, d) joins a-b and c-d,
  B-smoothing joins a-d and b-c;
* Jones is (-A)^(-3 writhe) * bracket under A = t^(-1/4), returned in
  t^(1/2) units (exponents are integers over denominator 2);
* a crossing is positive when the frame (over direction, under direction)
  is positively oriented, which makes a positive braid letter a positive
  crossing.

Two implementations are kept deliberately independent: a state-sum over all
smoothings and a skein recursion; tests require exact agreement.  Invariant
equality certifies the construction but is evidence, not a proof of isotopy.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braids import QuasitoricPattern, component_count
from .errors import StateSumBudgetError
from .laurent import Laurent, lp_add, lp_pow, lp_scale, lp_shift, lp_to_string
from .pdcodes import PDCode, braid_closure_pd, traversal_pd

STATE_SUM_MAX_CROSSINGS = 24


def extract_pd(diagram, over_data: dict[int, bool]) -> PDCode:
    """PD code of a star or perturbed-polygon diagram.

    ``over_data[i]`` says whether the chord_a strand passes over at crossing
    i; arcs are labeled by traversal order.
    """
    pd, _ = traversal_pd(diagram.diagram_traversal(over_data))
    return pd


def diagram_jones(diagram, over_data: dict[int, bool]) -> Laurent:
    """Jones polynomial of a planar diagram with prescribed over/under data."""
    pd, sign_map = traversal_pd(diagram.diagram_traversal(over_data))
    return jones(pd, sum(sign_map.values()))

DELTA: Laurent = {2: -1, -2: -1}  # -A^2 - A^(-2)


def _normalized_labels(pd: PDCode) -> list[tuple[int, int, int, int]]:
    labels = sorted({x for rec in pd.crossings for x in rec})
    remap = {old: new for new, old in enumerate(labels)}
    return [tuple(remap[x] for x in rec) for rec in pd.crossings]


def kauffman_bracket(pd: PDCode) -> Laurent:
    """State-sum bracket: sum over all 2^n smoothings of A^(#A - #B) delta^(loops-1)."""
    n = pd.crossing_count
    if n > STATE_SUM_MAX_CROSSINGS:
        raise StateSumBudgetError(
            f"{n} crossings exceed the state-sum budget of {STATE_SUM_MAX_CROSSINGS}"
        )
    if n == 0:
        return lp_pow(DELTA, pd.free_loops - 1)

    recs = _normalized_labels(pd)
    num_edges = 2 * n
    # flattened union pairs per crossing and smoothing choice
    a_pairs = [((a, b), (c, d)) for a, b, c, d in recs]
    b_pairs = [((a, d), (b, c)) for a, b, c, d in recs]

    parent = list(range(num_edges))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    init = list(range(num_edges))
    counts: dict[tuple[int, int], int] = {}
    for state in range(1 << n):
        parent[:] = init
        merges = 0
        for i in range(n):
            pairs = b_pairs[i] if (state >> i) & 1 else a_pairs[i]
            for x, y in pairs:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
                    merges += 1
        b_count = bin(state).count("1")
        circles = num_edges - merges + pd.free_loops
        key = (n - 2 * b_count, circles - 1)
        counts[key] = counts.get(key, 0) + 1

    delta_powers = [lp_pow(DELTA, j) for j in range(num_edges + pd.free_loops + 1)]
    total: Laurent = {}
    for (exp_a, delta_exp), mult in counts.items():
        total = lp_add(total, lp_scale(lp_shift(delta_powers[delta_exp], exp_a), mult))
    return total


def kauffman_bracket_skein(pd: PDCode) -> Laurent:
    """Independent oracle: resolve one crossing at a time, recursively."""

    def merge(crossings: list[list[int]], x: int, y: int) -> tuple[list[list[int]], int]:
        if x == y:
            return crossings, 1
        return [[x if v == y else v for v in rec] for rec in crossings], 0

    def recurse(crossings: list[list[int]], loops: int) -> Laurent:
        if not crossings:
            return lp_pow(DELTA, loops - 1)
        a, b, c, d = crossings[0]
        rest = [list(rec) for rec in crossings[1:]]
        total: Laurent = {}
        for exponent, (p1, p2) in ((1, ((a, b), (c, d))), (-1, ((a, d), (b, c)))):
            work = [list(rec) for rec in rest]
            extra = 0
            # the second pair may mention labels merged by the first
            pair2 = list(p2)
            x, y = p1
            if x == y:
                extra += 1
            else:
                work = [[x if v == y else v for v in rec] for rec in work]
                pair2 = [x if v == y else v for v in pair2]
            work, closed = merge(work, pair2[0], pair2[1])
            extra += closed
            total = lp_add(total, lp_shift(recurse(work, loops + extra), exponent))
        return total

    if not pd.crossings:
        return lp_pow(DELTA, pd.free_loops - 1)
    return recurse([list(rec) for rec in pd.crossings], pd.free_loops)


def jones(pd: PDCode, writhe: int, bracket: Laurent | None = None) -> Laurent:
    """Jones polynomial in t^(1/2) units: keys are doubled exponents."""
    if bracket is None:
        bracket = kauffman_bracket(pd)
    normalized = lp_scale(lp_shift(bracket, -3 * writhe), (-1) ** (writhe % 2))
    out: Laurent = {}
    for exp_a, coeff in normalized.items():
        if exp_a % 2:
            raise AssertionError(f"odd A-exponent {exp_a} after writhe normalization")
        out[-exp_a // 2] = coeff
    return out


def jones_mirror(poly: Laurent) -> Laurent:
    """Jones of the mirror image: t -> t^(-1)."""
    return {-e: c for e, c in poly.items()}


def jones_string(poly: Laurent) -> str:
    return lp_to_string(poly, variable="t", denominator=2)


def pattern_jones(pattern: QuasitoricPattern) -> Laurent:
    """Jones polynomial of the closure of a quasitoric pattern."""
    return jones(braid_closure_pd(pattern), pattern.writhe())


def unlink_jones(components: int) -> Laurent:
    """Jones polynomial of the crossing-free unlink."""
    return jones(PDCode((), free_loops=components), 0)


@dataclass(frozen=True)
class CertificationReport:
    passed: bool
    jones_constructed: Laurent
    jones_intended: Laurent
    components_constructed: int
    components_intended: int
    writhe_constructed: int
    writhe_intended: int

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"certify={status}: constructed {jones_string(self.jones_constructed)} "
            f"({self.components_constructed} comp), intended "
            f"{jones_string(self.jones_intended)} ({self.components_intended} comp)"
        )


def certify(traj, pattern: QuasitoricPattern) -> CertificationReport:
    """Compare the trajectory's diagram invariant with the intended closure.

    ``traj`` provides ``diagram_traversal()`` (planar passage events with the
    realized over/under choices); the intended side is computed from the
    abstract braid word by an independent route.
    """
    traversal = traj.diagram_traversal()
    pd, sign_map = traversal_pd(traversal)
    writhe_constructed = sum(sign_map.values())
    constructed = jones(pd, writhe_constructed)
    intended = pattern_jones(pattern)
    comp_constructed = len(traversal.components)
    comp_intended = component_count(pattern)
    return CertificationReport(
        passed=(constructed == intended and comp_constructed == comp_intended),
        jones_constructed=constructed,
        jones_intended=intended,
        components_constructed=comp_constructed,
        components_intended=comp_intended,
        writhe_constructed=writhe_constructed,
        writhe_intended=pattern.writhe(),
    )
