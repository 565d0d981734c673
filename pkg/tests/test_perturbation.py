from fractions import Fraction

import mpmath as mp
import pytest

from billiardknots.errors import DomainError, PrecisionError
from billiardknots.perturbation import (
    arc_length_table,
    crossing_abscissa,
    independence_check,
    line_intersection,
    perturb,
)
from billiardknots.stars import ArcTable, Passage, build_star, star_arc_table


def test_crossing_abscissa_formula():
    # slopes (0, 1), intercepts (0, 1): x_{0,1} = (0 - 1)/(1 - 0) = -1
    assert crossing_abscissa((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))) == -1
    assert crossing_abscissa((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))) == 1
    with pytest.raises(DomainError):
        crossing_abscissa((Fraction(2), Fraction(1)), (Fraction(2), Fraction(5)))


def test_line_intersection_point():
    x, y = line_intersection((Fraction(0), Fraction(2)), (Fraction(1), Fraction(0)))
    assert (x, y) == (2, 2)


def test_perturb_preserves_pentagram_combinatorics():
    star = build_star(5, 2)
    poly = perturb(star, Fraction(1, 1000), seed=42)
    assert len(poly.components) == 1
    assert len(poly.components[0].vertices) == 5
    assert len(poly.crossings) == 5
    # same crossing chord-pairs as the star, recomputed by exact arithmetic
    star_pairs = {(c.chord_a, c.chord_b) for c in star.crossings}
    poly_pairs = set()
    chord_of = {}
    for comp in poly.components:
        for i, ch in enumerate(comp.chord_ids):
            chord_of[ch] = i
    star_by_index = {c.index: c for c in star.crossings}
    for pc in poly.crossings:
        sc = star_by_index[pc.index]
        poly_pairs.add((sc.chord_a, sc.chord_b))
    assert poly_pairs == star_pairs


def test_perturb_bigger_star_same_orders():
    star = build_star(10, 3)
    poly = perturb(star, Fraction(1, 1000), seed=7)
    assert len(poly.crossings) == 20
    assert poly.delta == Fraction(1, 1000)


def test_perturb_zero_draws_identity():
    star = build_star(5, 2)
    poly = perturb(star, Fraction(1, 10**6), seed=1, _draw_override=lambda: 0.0)
    assert len(poly.crossings) == 5


def test_perturb_rejects_bad_delta():
    star = build_star(5, 2)
    with pytest.raises(DomainError):
        perturb(star, Fraction(0), seed=1)
    with pytest.raises(DomainError):
        perturb(star, Fraction(-1, 2), seed=1)


def test_perturb_deterministic():
    star = build_star(5, 2)
    p1 = perturb(star, Fraction(1, 1000), seed=42)
    p2 = perturb(star, Fraction(1, 1000), seed=42)
    assert p1.components[0].lines == p2.components[0].lines
    p3 = perturb(star, Fraction(1, 1000), seed=43)
    assert p1.components[0].lines != p3.components[0].lines


@pytest.mark.parametrize("p,q,seed", [(5, 2, 0), (7, 2, 3), (7, 3, 5), (9, 4, 9), (40, 3, 11)])
def test_perturb_halving_always_lands(p, q, seed):
    star = build_star(p, q)
    poly = perturb(star, Fraction(1, 100), seed=seed)
    assert len(poly.crossings) == p * (q - 1)


def test_arc_table_basic():
    star = build_star(5, 2)
    poly = perturb(star, Fraction(1, 1000), seed=42)
    table = arc_length_table(poly, prec_bits=256)
    (passages,) = table.passages
    assert len(passages) == 10
    arcs = [ps.arc for ps in passages]
    assert all(0 < a < 1 for a in arcs)
    for a1, a2 in zip(arcs, arcs[1:]):
        assert float(a2 - a1) > 1e-9
    assert table.vertex_arcs[0][0] == 0


def test_arc_lengths_match_planar_distance():
    """|l_{i,j}| from the slope formula equals the planar distance to P_{i,j}."""
    star = build_star(7, 3, prec_bits=128)
    poly = perturb(star, Fraction(1, 500), seed=3)
    with mp.workprec(128):
        for pc in poly.crossings:
            for place in (pc.a_place, pc.b_place):
                ci, i = place
                comp = poly.components[ci]
                a, _ = comp.lines[i]
                v = comp.vertices[i]
                dx = pc.point[0] - v[0]
                dy = pc.point[1] - v[1]
                formula = mp.sqrt(1 + (mp.mpf(a.numerator) / a.denominator) ** 2) * abs(
                    mp.mpf(dx.numerator) / dx.denominator
                )
                direct = mp.hypot(
                    mp.mpf(dx.numerator) / dx.denominator,
                    mp.mpf(dy.numerator) / dy.denominator,
                )
                assert mp.almosteq(formula, direct, rel_eps=mp.mpf("1e-20"))


def _toy_table(arcs, prec_bits=256):
    with mp.workprec(prec_bits):
        passages = tuple(
            Passage(i, mp.mpf(a.numerator) / a.denominator if isinstance(a, Fraction) else mp.mpf(a), True)
            for i, a in enumerate(arcs)
        )
    return ArcTable(
        prec_bits=prec_bits,
        passages=(passages,),
        vertex_arcs=((mp.mpf(0),),),
        total_lengths=(mp.mpf(1),),
    )


def test_independence_constructed_rational_relation():
    table = _toy_table([Fraction(1, 4), Fraction(1, 2)])
    res = independence_check(table, max_coeff=10, tol=1e-12)
    assert not res.passed
    lam = res.witness
    assert any(lam)
    assert max(abs(c) for c in lam) <= 10
    value = lam[0] + lam[1] * Fraction(1, 4) + lam[2] * Fraction(1, 2)
    assert value == 0


def test_independence_third_with_coeff_bound_three():
    table = _toy_table([Fraction(1, 3)])
    res = independence_check(table, max_coeff=3, tol=1e-12)
    assert not res.passed
    lam = res.witness
    assert lam[0] + lam[1] * Fraction(1, 3) == 0
    assert max(abs(c) for c in lam) <= 3


def test_independence_perturbed_pentagram_passes():
    star = build_star(5, 2, prec_bits=256)
    poly = perturb(star, Fraction(1, 1000), seed=42)
    table = arc_length_table(poly, prec_bits=256)
    assert independence_check(table, max_coeff=10, tol=1e-12).passed


def test_independence_unperturbed_pentagram_fails_exactly():
    star = build_star(5, 2, prec_bits=256)
    table = star_arc_table(star)
    res = independence_check(table, max_coeff=10, tol=1e-12)
    assert not res.passed
    assert res.witness is not None
    # the witness must be a genuine relation, far below the tolerance
    assert float(res.residual) < 1e-24


def test_independence_precision_guard():
    star = build_star(5, 2, prec_bits=64)
    table = star_arc_table(star)
    with pytest.raises(PrecisionError):
        independence_check(table, max_coeff=10, tol=1e-12)
