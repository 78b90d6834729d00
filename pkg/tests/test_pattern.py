from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_min_R_1x1
from ramsey_forge.coloring import Coloring, enumerate_colorings, parse_coloring
from ramsey_forge.errors import CollisionUnderDistinct, DimensionMismatch, FormatError, NotIntegral, NotPositive
from ramsey_forge.exact import RatMatrix
from ramsey_forge.ipr import verify_refutation
from ramsey_forge.pattern import (
    NAMED_PATTERNS,
    Component,
    PatternSpec,
    Witness,
    find_witness,
    min_forcing_R,
    parse_witness,
    pattern_values,
    verify_witness,
)

M = RatMatrix.from_rows
ONE = M([[1]])
A1 = M([[1, 0], [1, 1]])
C = Component
SCHUR = PatternSpec(ONE, ONE, {C.IMAGE_A, C.IMAGE_B, C.SUM})
MOREIRA = PatternSpec.named("moreira", ONE)


def test_pattern_values_examples():
    assert pattern_values(MOREIRA, (2,), (2,)) == (2, 4)
    assert pattern_values(PatternSpec.named("moreira", A1), (1, 1), (1, 2)) == (1, 2, 5, 6)
    cross = PatternSpec(ONE, ONE, {C.CROSS_SET})
    assert pattern_values(cross, (2,), (3,)) == (2, 5, 6)


def test_cross_set_pairs_every_coordinate():
    A = M([[1], [2]])
    B = M([[1], [1], [3]])
    spec = PatternSpec(A, B, {C.CROSS_SET})
    a, b = (2, 4), (3, 3, 9)
    want = set(a) | {x + y for x in a for y in b} | {x * y for x in a for y in b}
    assert set(pattern_values(spec, (2,), (3,))) == want


def test_pattern_values_rejections():
    half = M([[Fraction(1, 2)]])
    with pytest.raises(NotIntegral):
        pattern_values(PatternSpec.named("moreira", half, ONE), (3,), (1,))
    with pytest.raises(NotPositive):
        pattern_values(PatternSpec.named("moreira", M([[1, -1]]), M([[1, 1]])), (1, 1), (1, 1))
    with pytest.raises(DimensionMismatch):
        pattern_values(MOREIRA, (1, 2), (1,))
    with pytest.raises(DimensionMismatch):
        PatternSpec.named("moreira", A1, ONE)
    assert pattern_values(PatternSpec(M([[1], [2]]), ONE, {C.CROSS_SET}), (1,), (1,)) == (1, 2, 3)


def test_distinct_flag():
    strict = PatternSpec.named("moreira", ONE, distinct=True)
    with pytest.raises(CollisionUnderDistinct):
        pattern_values(strict, (2,), (2,))
    assert pattern_values(strict, (2,), (3,)) == (2, 5, 6)
    with pytest.raises(CollisionUnderDistinct):
        pattern_values(PatternSpec(ONE, ONE, {C.IMAGE_A, C.IMAGE_B, C.SUM}, True), (3,), (3,))


def test_spec_validation():
    with pytest.raises(FormatError):
        PatternSpec(ONE, ONE, set())
    with pytest.raises(FormatError):
        PatternSpec.named("nope", ONE)
    assert Component.parse("imagea") is C.IMAGE_A
    assert Component.parse("cross-set") is C.CROSS_SET
    with pytest.raises(FormatError):
        Component.parse("Difference")
    # {x, y, x+y, xy}
    full = PatternSpec.named("full", ONE)
    assert pattern_values(full, (2,), (3,)) == (2, 3, 5, 6)


def test_find_witness_examples():
    mono = Coloring(100, 1, (0,) * 100)
    w = find_witness(mono, MOREIRA)
    assert (w.X, w.Y, w.values, w.color) == ((1,), (1,), (1, 2), 0)

    c = parse_coloring("4 2\n0010")
    w = find_witness(c, MOREIRA)
    # (1, 1) gives {1, 2}, both color 0, and precedes (2, 2) in lex order
    assert (w.X, w.Y, w.values, w.color) == ((1,), (1,), (1, 2), 0)
    alt = Witness((2,), (2,), 0, (2, 4))
    assert verify_witness(c, MOREIRA, alt)

    assert find_witness(parse_coloring("4 2\n0110"), SCHUR) is None


def test_find_witness_lex_order_is_first():
    c = parse_coloring("12 2\n011010011001")
    spec = PatternSpec.named("schur-add", ONE)
    w = find_witness(c, spec)
    for x in range(1, 13):
        for y in range(1, 13):
            if (x,) + (y,) >= w.X + w.Y:
                break
            vals = {x, y, x + y}
            assert not (max(vals) <= 12 and len({c.color(v) for v in vals}) == 1)


def test_image_only_witness_has_no_y():
    A2 = M([[1, 0], [1, 1], [1, 2]])
    c = parse_coloring("9 2\n001100110")
    w = find_witness(c, PatternSpec.named("image", A2))
    assert w.Y == ()
    assert w.to_text().count("Y:") == 0
    assert verify_witness(c, PatternSpec.named("image", A2), w)


def test_verify_witness_rejections():
    c = parse_coloring("4 2\n0010")
    w = find_witness(c, MOREIRA)
    assert verify_witness(c, MOREIRA, w)
    assert not verify_witness(parse_coloring("4 2\n0110"), MOREIRA, w)
    assert not verify_witness(c, MOREIRA, Witness((1,), (1,), 1, (1, 2)))
    assert not verify_witness(c, MOREIRA, Witness((3,), (2,), 0, (3, 5, 6)))
    assert not verify_witness(c, MOREIRA, Witness((1,), (1,), 0, (1, 2, 3)))
    assert not verify_witness(c, MOREIRA, Witness((1, 1), (1,), 0, ()))


def test_witness_text_roundtrip():
    w = Witness((1, 2), (3, 4), 1, (1, 3, 5))
    assert w.to_text() == "X: 1 2\nY: 3 4\ncolor: 1\nvalues: 1 3 5\n"
    assert parse_witness(w.to_text()) == w
    with pytest.raises(FormatError):
        parse_witness("X: 1\nvalues: 1\n")
    with pytest.raises(FormatError):
        parse_witness("Z: 1\ncolor: 0\n")


SPECS = [
    PatternSpec.named(name, mat)
    for name in ("moreira", "lemma", "schur-add", "cross", "full")
    for mat in (ONE, M([[2]]), A1)
] + [PatternSpec.named("moreira", ONE, distinct=True), PatternSpec(M([[Fraction(1, 2)]]), ONE, {C.SUM, C.IMAGE_A})]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, len(SPECS) - 1), st.lists(st.integers(0, 2), min_size=1, max_size=30), st.permutations(range(3)))
def test_round_trip_and_permutation_invariance(k, colors, perm):
    spec = SPECS[k]
    c = Coloring(len(colors), 3, tuple(colors))
    w = find_witness(c, spec)
    if w is not None:
        assert verify_witness(c, spec, w)
    permuted = Coloring(len(colors), 3, tuple(perm[x] for x in colors))
    assert (find_witness(permuted, spec) is None) == (w is None)


def test_min_forcing_examples():
    res = min_forcing_R(SCHUR, 2, 10)
    assert res.minimal_R == 5
    assert res.avoiding.body() == "0110"
    assert min_forcing_R(MOREIRA, 1, 10).minimal_R == 2
    res = min_forcing_R(PatternSpec.named("image", M([[1], [2]])), 2, 64)
    assert not res.forced
    assert res.avoiding.n_max == 64
    assert verify_refutation(M([[1], [2]]), res.avoiding)


def test_schur_three_colors():
    res = min_forcing_R(SCHUR, 3, 20)
    assert res.minimal_R == 14
    assert find_witness(res.avoiding, SCHUR) is None


ORACLE_CASES = [
    ({"ImageA", "ImageB", "Sum"}, 1, 1),
    ({"ImageA", "Sum", "Product"}, 1, 1),
    ({"ImageA", "ImageB", "Product"}, 1, 1),
    ({"CrossSet"}, 1, 1),
    ({"Sum"}, 1, 1),
    ({"ImageA", "Sum"}, 2, 1),
    ({"ImageA", "ImageB", "Sum"}, Fraction(1, 2), 1),
    ({"ImageA", "Product"}, 1, 2),
    ({"ImageB", "Sum"}, 3, 1),
    ({"CrossSet", "ImageB"}, 1, 1),
]


@pytest.mark.parametrize("comps, a, b", ORACLE_CASES)
def test_min_forcing_matches_naive_oracle(comps, a, b):
    r_max = 10
    spec = PatternSpec(M([[a]]), M([[b]]), {Component(n) for n in comps})
    res = min_forcing_R(spec, 2, r_max)
    assert res.minimal_R == naive_min_R_1x1(comps, a, b, 2, r_max)


def _forced_by_find_witness(spec, r, n):
    return all(find_witness(c, spec) is not None for c in enumerate_colorings(n, r))


@pytest.mark.parametrize("name, mat, r", [("schur-add", ONE, 2), ("moreira", ONE, 2), ("image", M([[1, 0], [1, 1], [1, 2]]), 2), ("schur-add", ONE, 3)])
def test_forcing_agrees_with_find_witness_and_is_monotone(name, mat, r):
    spec = PatternSpec.named(name, mat)
    res = min_forcing_R(spec, r, 16)
    R = res.minimal_R
    assert R is not None
    assert find_witness(res.avoiding, spec) is None
    if r == 2:
        assert not _forced_by_find_witness(spec, r, R - 1)
        assert _forced_by_find_witness(spec, r, R)
        assert _forced_by_find_witness(spec, r, R + 1)
    assert min_forcing_R(spec, r, R + 1).minimal_R == R


def _min_R(spec, r=2, r_max=14):
    res = min_forcing_R(spec, r, r_max)
    return res.minimal_R if res.forced else float("inf")


@pytest.mark.parametrize("mat", [ONE, M([[2]]), A1])
def test_adding_components_never_decreases_forcing_range(mat):
    lemma = PatternSpec.named("lemma", mat)
    with_sum = PatternSpec(mat, mat, lemma.components | {C.SUM})
    moreira = PatternSpec.named("moreira", mat)
    full = PatternSpec(mat, mat, {C.CROSS_SET, C.IMAGE_B})
    assert _min_R(lemma) <= _min_R(with_sum)
    assert _min_R(moreira) <= _min_R(with_sum)
    for base in (lemma, with_sum, moreira):
        assert _min_R(base) <= _min_R(PatternSpec(mat, mat, base.components | {C.CROSS_SET}))
    assert _min_R(PatternSpec(mat, mat, {C.CROSS_SET})) <= _min_R(full)


def test_forcing_independent_of_jobs():
    spec = PatternSpec.named("schur-add", ONE)
    a = min_forcing_R(spec, 3, 16, jobs=1)
    b = min_forcing_R(spec, 3, 16, jobs=4)
    assert a == b
    img = PatternSpec.named("image", M([[1], [2]]))
    assert min_forcing_R(img, 2, 40, jobs=1) == min_forcing_R(img, 2, 40, jobs=3)


def test_fixed_x_bound_shrinks_search():
    spec = PatternSpec.named("schur-add", ONE)
    res = min_forcing_R(spec, 2, 10, x_bound=1)
    # only x = y = 1, i.e. {1, 2}, which splitting 1 and 2 avoids
    assert not res.forced
    assert res.avoiding.body() == "0100000000"
    assert set(NAMED_PATTERNS) >= {"moreira", "lemma", "schur-add", "schur-mul", "cross", "full"}
