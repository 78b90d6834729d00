"""Checks for image partition regularity of a finite rational matrix.

Two decidable conditions (first entries, Rado's columns condition) and a
bounded refuter that looks for a coloring of [1, N] with no monochromatic
image. None of them is a full decision procedure.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .coloring import Coloring, avoidance_search
from .errors import TooManyColumns
from .exact import RatMatrix

MAX_COLUMNS = 20


def first_entries_condition(A: RatMatrix) -> bool:
    first_by_col: dict[int, Fraction] = {}
    for i in range(A.rows):
        row = A.row(i)
        j = next(k for k, e in enumerate(row) if e != 0)
        if row[j] <= 0:
            return False
        if first_by_col.setdefault(j, row[j]) != row[j]:
            return False
    return True


def _reduce(basis: list[tuple[int, list[Fraction]]], vec: Sequence[Fraction]) -> list[Fraction]:
    v = list(vec)
    for pivot, b in basis:
        if v[pivot] != 0:
            f = v[pivot] / b[pivot]
            v = [x - f * y for x, y in zip(v, b)]
    return v


def _insert(basis, vec):
    v = _reduce(basis, vec)
    for k, x in enumerate(v):
        if x != 0:
            basis.append((k, v))
            return


def columns_condition(A: RatMatrix) -> bool:
    """Rado's columns condition, decided by greedy extension.

    If T1 and T2 are both admissible next blocks after the columns in U,
    then T2 minus T1 is admissible after U plus T1, so any maximal chain of
    admissible blocks covers all columns iff some ordered partition exists.
    """
    if A.cols > MAX_COLUMNS:
        raise TooManyColumns(f"columns condition enumerates subsets; {A.cols} > {MAX_COLUMNS} columns")
    cols = [A.column(j) for j in range(A.cols)]
    remaining = list(range(A.cols))
    basis: list = []  # echelon basis of the span of used columns
    while remaining:
        block = None
        for size in range(1, len(remaining) + 1):
            for subset in itertools.combinations(remaining, size):
                total = [sum(cols[j][i] for j in subset) for i in range(A.rows)]
                if all(x == 0 for x in _reduce(basis, total)):
                    block = subset
                    break
            if block:
                break
        if block is None:
            return False
        for j in block:
            _insert(basis, cols[j])
        remaining = [j for j in remaining if j not in block]
    return True


def column_bounds(A: RatMatrix, n: int, x_bound: int | None = None) -> list[int]:
    """Upper bound on x_j over all X with A·X inside [1, n].

    A row with nonnegative entries and a_ij > 0 bounds x_j since the other
    coordinates are at least 1. Zero columns do not move the image and are
    pinned at 1. Columns with no such row fall back to ``x_bound`` (default n).
    """
    bounds = []
    for j in range(A.cols):
        col = A.column(j)
        if all(e == 0 for e in col):
            bounds.append(1)
            continue
        best = None
        for i in range(A.rows):
            row = A.row(i)
            if row[j] > 0 and all(e >= 0 for e in row):
                rest = sum(e for k, e in enumerate(row) if k != j)
                b = math.floor((n - rest) / row[j])
                best = b if best is None else min(best, b)
        if best is None:
            best = n if x_bound is None else x_bound
        bounds.append(max(best, 0))
    return bounds


def image_vectors(A: RatMatrix, n: int, x_bound: int | None = None) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(X, AX) for every X whose image is integral and inside [1, n]."""
    bounds = column_bounds(A, n, x_bound)
    for X in itertools.product(*(range(1, b + 1) for b in bounds)):
        img = A.natural_image(X)
        if img is not None and max(img) <= n:
            yield X, img


def refute_ipr(A: RatMatrix, r: int, n: int, x_bound: int | None = None, jobs: int = 1) -> Coloring | None:
    """Lex-least canonical r-coloring of [1, n] with no monochromatic image of A, if any."""
    checks: dict[int, set] = defaultdict(set)
    for _, img in image_vectors(A, n, x_bound):
        vals = tuple(sorted(set(img)))
        checks[vals[-1]].add(vals)
    best = avoidance_search(n, r, {k: sorted(v) for k, v in checks.items()}, jobs=jobs)
    if len(best) < n:
        return None
    return Coloring(n, r, best)


def verify_refutation(A: RatMatrix, c: Coloring, x_bound: int | None = None) -> bool:
    """Brute-force check that no image of A inside [1, N] is monochromatic under c.

    Enumerates X over a box derived from the smallest positive entry alone,
    independent of :func:`column_bounds`.
    """
    n = c.n_max
    positive = [e for e in A.entries if e > 0]
    if A.is_nonnegative():
        box = math.floor(n / min(positive))
    else:
        box = n if x_bound is None else x_bound
    ranges = []
    for j in range(A.cols):
        ranges.append(range(1, 2) if all(e == 0 for e in A.column(j)) else range(1, box + 1))
    masks = c.class_masks()
    rows = A.as_rows()
    for X in itertools.product(*ranges):
        mask = 0
        ok = True
        for row in rows:
            v = sum(e * x for e, x in zip(row, X))
            if v.denominator != 1 or not 1 <= v <= n:
                ok = False
                break
            mask |= 1 << int(v)
        if ok and any(mask & m == mask for m in masks):
            return False
    return True


@dataclass(frozen=True)
class IprVerdict:
    status: str  # SufficientConditionHolds | RefutedUpTo | Unknown
    method: str  # FirstEntries | ColumnsCondition | BoundedSearch
    bound: int | None = None
    coloring: Coloring | None = None

    def __str__(self):
        status = f"RefutedUpTo({self.bound})" if self.status == "RefutedUpTo" else self.status
        return f"verdict: {status} method: {self.method}"


def fec_verdict(A: RatMatrix) -> IprVerdict:
    if first_entries_condition(A):
        return IprVerdict("SufficientConditionHolds", "FirstEntries")
    return IprVerdict("Unknown", "FirstEntries")


def refute_verdict(A: RatMatrix, r: int, n: int, x_bound: int | None = None, jobs: int = 1) -> IprVerdict:
    c = refute_ipr(A, r, n, x_bound, jobs)
    if c is None:
        return IprVerdict("Unknown", "BoundedSearch", n)
    return IprVerdict("RefutedUpTo", "BoundedSearch", n, c)
