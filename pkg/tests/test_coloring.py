import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_colorings, canonical, orbit_representatives
from ramsey_forge.coloring import (
    AvoidsAll,
    Coloring,
    avoidance_search,
    canonicalize,
    deepest_prefix,
    enumerate_colorings,
    parse_coloring,
    valuation_parity,
)
from ramsey_forge.errors import BadHeader, ColorOutOfRange, LengthMismatch


def test_parse_examples():
    c = parse_coloring("4 2\n0110")
    assert (c.n_max, c.num_colors) == (4, 2)
    assert [c.color(n) for n in range(1, 5)] == [0, 1, 1, 0]
    mono = parse_coloring("5 1\n00000")
    assert set(mono.colors) == {0}
    with pytest.raises(ColorOutOfRange):
        parse_coloring("3 2\n012")


def test_parse_integer_list_and_comments():
    c = parse_coloring("# big palette\n4 16\n0 3 15 7\n")
    assert c.colors == (0, 3, 15, 7)
    assert c.to_text() == "4 16\n0 3 15 7\n"
    assert parse_coloring(c.to_text()) == c


@pytest.mark.parametrize(
    "text, err",
    [("4\n0110", BadHeader), ("4 2\n011", LengthMismatch), ("a b\n0", BadHeader), ("2 2\n0 x", BadHeader), ("", BadHeader)],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_coloring(text)


def test_canonicalize_examples():
    assert canonicalize(parse_coloring("4 2\n1001")).to_text() == "4 2\n0110\n"
    assert canonicalize(parse_coloring("3 3\n210")).to_text() == "3 3\n012\n"
    c = parse_coloring("4 2\n0110")
    assert canonicalize(c) == c


def test_enumerate_examples():
    assert [c.body() for c in enumerate_colorings(2, 2)] == ["00", "01"]
    assert [c.body() for c in enumerate_colorings(3, 2)] == ["000", "001", "010", "011"]
    for r in (1, 2, 5):
        assert [c.body() for c in enumerate_colorings(1, r)] == ["0"]


@pytest.mark.parametrize("n, r", [(n, r) for n in range(1, 7) for r in range(1, 5)])
def test_enumeration_is_exactly_the_orbit_set(n, r):
    visited = [c.colors for c in enumerate_colorings(n, r)]
    assert visited == orbit_representatives(n, r)
    assert len(set(visited)) == len(visited)
    if r == 2:
        assert len(visited) == 2 ** (n - 1)


def test_prefix_pruning_contract():
    seen = []

    def accept(seq):
        seen.append(tuple(seq))
        return tuple(seq[:2]) != (0, 1)

    out = [c.colors for c in enumerate_colorings(4, 2, accept)]
    assert all(s[:2] != (0, 1) or len(s) == 2 for s in seen)
    assert out == [c for c in orbit_representatives(4, 2) if c[:2] != (0, 1)]


def test_partitioned_traversal_covers_everything():
    whole = [c.colors for c in enumerate_colorings(6, 3)]
    parts = []
    for p in [(0, 0), (0, 1)]:
        parts.extend(c.colors for c in enumerate_colorings(6, 3, prefix=p))
    assert parts == whole


@given(st.lists(st.integers(0, 3), min_size=1, max_size=12), st.permutations(range(4)))
def test_canonicalize_idempotent_and_permutation_invariant(colors, perm):
    c = Coloring(len(colors), 4, tuple(colors))
    k = canonicalize(c)
    assert canonicalize(k) == k
    assert k.is_canonical()
    permuted = Coloring(len(colors), 4, tuple(perm[x] for x in colors))
    assert canonicalize(permuted) == k
    assert k.colors == canonical(colors)


def test_equal_canonical_forms_iff_permutation():
    raw = list(all_colorings(4, 3))
    for a in raw[::7]:
        for b in raw[::5]:
            same = canonicalize(Coloring(4, 3, a)) == canonicalize(Coloring(4, 3, b))
            related = any(
                tuple(p[x] for x in a) == b for p in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
            )
            assert same == related


def test_bitset_and_masks():
    c = parse_coloring("4 2\n0110")
    assert c.bitset == 0b01100
    assert c.class_masks() == [0b10010, 0b01100]
    with pytest.raises(ValueError):
        parse_coloring("2 3\n01").bitset


def test_valuation_parity():
    c = valuation_parity(8)
    assert c.colors == (0, 1, 0, 0, 0, 1, 0, 1)


def _schur_checks(n):
    checks = {}
    for x in range(1, n + 1):
        for y in range(1, n + 1 - x):
            e = tuple(sorted({x, y, x + y}))
            checks.setdefault(e[-1], set()).add(e)
    return {k: sorted(v) for k, v in checks.items()}


def test_deepest_prefix_schur():
    best = deepest_prefix(10, 2, AvoidsAll(_schur_checks(10)))
    assert best == (0, 1, 1, 0)


@pytest.mark.parametrize("jobs", [1, 3])
def test_avoidance_search_independent_of_jobs_and_edge_order(jobs):
    checks = _schur_checks(16)
    shuffled = {k: random.Random(k).sample(v, len(v)) for k, v in checks.items()}
    base = avoidance_search(16, 3, checks, jobs=1)
    assert len(base) == 13
    assert avoidance_search(16, 3, shuffled, jobs=jobs, min_parallel_depth=0) == base
