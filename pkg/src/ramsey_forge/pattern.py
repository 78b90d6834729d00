"""Monochromatic matrix-image patterns: values, witnesses, forcing ranges.

A pattern names which pieces of {AX, BY, AX+BY, AX·BY} (coordinate-wise) or
the cross set {a, a+b, a·b : a in AX, b in BY} must share one color.
"""

from __future__ import annotations

import enum
import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Sequence

from .coloring import Coloring, avoidance_search
from .errors import CollisionUnderDistinct, DimensionMismatch, FormatError
from .exact import RatMatrix, mat_apply, nat_vector, to_nat_image


class Component(str, enum.Enum):
    IMAGE_A = "ImageA"
    IMAGE_B = "ImageB"
    SUM = "Sum"
    PRODUCT = "Product"
    CROSS_SET = "CrossSet"

    @classmethod
    def parse(cls, name: str) -> "Component":
        key = name.strip().lower().replace("_", "").replace("-", "")
        for c in cls:
            if c.value.lower() == key:
                return c
        raise FormatError(f"unknown component {name!r}; choose from {', '.join(c.value for c in cls)}")


_A_USERS = {Component.IMAGE_A, Component.SUM, Component.PRODUCT, Component.CROSS_SET}
_B_USERS = {Component.IMAGE_B, Component.SUM, Component.PRODUCT, Component.CROSS_SET}

NAMED_PATTERNS = {
    "moreira": frozenset({Component.IMAGE_A, Component.SUM, Component.PRODUCT}),
    "lemma": frozenset({Component.IMAGE_A, Component.IMAGE_B, Component.PRODUCT}),
    "schur-add": frozenset({Component.IMAGE_A, Component.IMAGE_B, Component.SUM}),
    "schur-mul": frozenset({Component.IMAGE_A, Component.IMAGE_B, Component.PRODUCT}),
    "cross": frozenset({Component.CROSS_SET}),
    "full": frozenset({Component.CROSS_SET, Component.IMAGE_B}),
    "image": frozenset({Component.IMAGE_A}),
}


@dataclass(frozen=True)
class PatternSpec:
    A: RatMatrix
    B: RatMatrix
    components: frozenset
    distinct: bool = False

    def __post_init__(self):
        comps = frozenset(Component(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise FormatError("a pattern needs at least one component")
        if comps & {Component.SUM, Component.PRODUCT} and self.A.rows != self.B.rows:
            raise DimensionMismatch(
                f"Sum and Product need matrices of the same order, got {self.A.rows} and {self.B.rows} rows"
            )

    @classmethod
    def named(cls, name: str, A: RatMatrix, B: RatMatrix | None = None, distinct: bool = False) -> "PatternSpec":
        if name not in NAMED_PATTERNS:
            raise FormatError(f"unknown pattern {name!r}; choose from {', '.join(NAMED_PATTERNS)} or custom")
        return cls(A, A if B is None else B, NAMED_PATTERNS[name], distinct)

    @property
    def uses_a(self) -> bool:
        return bool(self.components & _A_USERS)

    @property
    def uses_b(self) -> bool:
        return bool(self.components & _B_USERS)

    def describe(self) -> str:
        return ",".join(sorted(c.value for c in self.components))


@dataclass(frozen=True)
class Witness:
    X: tuple[int, ...]
    Y: tuple[int, ...]  # empty when no component references B
    color: int
    values: tuple[int, ...]

    def to_text(self) -> str:
        lines = [f"X: {' '.join(map(str, self.X))}".rstrip()]
        if self.Y:
            lines.append(f"Y: {' '.join(map(str, self.Y))}")
        lines.append(f"color: {self.color}")
        lines.append(f"values: {' '.join(map(str, self.values))}")
        return "\n".join(lines) + "\n"


def parse_witness(text: str) -> Witness:
    fields: dict[str, list[int]] = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        key, sep, rest = ln.partition(":")
        if not sep or key.strip() not in ("X", "Y", "color", "values"):
            raise FormatError(f"bad witness line {ln!r}")
        try:
            fields[key.strip()] = [int(t) for t in rest.split()]
        except ValueError:
            raise FormatError(f"bad witness line {ln!r}") from None
    if "color" not in fields or len(fields["color"]) != 1:
        raise FormatError("witness needs exactly one 'color:' value")
    return Witness(
        tuple(fields.get("X", [])),
        tuple(fields.get("Y", [])),
        fields["color"][0],
        tuple(fields.get("values", [])),
    )


def _roles(spec: PatternSpec, a: Sequence[int], b: Sequence[int]):
    """(role, value) pairs; Sum/Product coordinates share keys with the cross set diagonal."""
    comps = spec.components
    out = {}
    if Component.IMAGE_A in comps or Component.CROSS_SET in comps:
        for i, ai in enumerate(a):
            out[("a", i)] = ai
    if Component.IMAGE_B in comps:
        for j, bj in enumerate(b):
            out[("b", j)] = bj
    if Component.SUM in comps:
        for i in range(len(a)):
            out[("s", i, i)] = a[i] + b[i]
    if Component.PRODUCT in comps:
        for i in range(len(a)):
            out[("p", i, i)] = a[i] * b[i]
    if Component.CROSS_SET in comps:
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                out[("s", i, j)] = ai + bj
                out[("p", i, j)] = ai * bj
    return out


def pattern_values(spec: PatternSpec, X: Sequence[int], Y: Sequence[int] = ()) -> tuple[int, ...]:
    """Sorted set of values realized by the pattern at (X, Y).

    Raises NotIntegral / NotPositive if AX or BY leaves N, DimensionMismatch
    on bad vector lengths, CollisionUnderDistinct when ``spec.distinct`` and
    two roles share a value.
    """
    a: tuple[int, ...] = ()
    b: tuple[int, ...] = ()
    if spec.uses_a:
        a = to_nat_image(mat_apply(spec.A, nat_vector(X)))
    if spec.uses_b:
        b = to_nat_image(mat_apply(spec.B, nat_vector(Y)))
    roles = _roles(spec, a, b)
    if spec.distinct:
        seen: dict[int, object] = {}
        for role, v in roles.items():
            if v in seen:
                raise CollisionUnderDistinct(v, (seen[v], role))
            seen[v] = role
    return tuple(sorted(set(roles.values())))


def _fast_values(comps, distinct, a, b):
    # inner-loop twin of pattern_values on precomputed images; None on collision
    vals = []
    cross = Component.CROSS_SET in comps
    if Component.IMAGE_A in comps or cross:
        vals.extend(a)
    if Component.IMAGE_B in comps:
        vals.extend(b)
    if cross:
        for ai in a:
            for bj in b:
                vals.append(ai + bj)
                vals.append(ai * bj)
    else:
        if Component.SUM in comps:
            vals.extend(x + y for x, y in zip(a, b))
        if Component.PRODUCT in comps:
            vals.extend(x * y for x, y in zip(a, b))
    out = set(vals)
    if distinct and len(out) != len(vals):
        return None
    return tuple(sorted(out))


def _images(A: RatMatrix, x_bound: int, n: int):
    """(X, AX) for X in [1, x_bound]^cols in lex order, keeping images inside [1, n]."""
    out = []
    for X in itertools.product(range(1, x_bound + 1), repeat=A.cols):
        img = A.natural_image(X)
        if img is not None and max(img) <= n:
            out.append((X, img))
    return out


def pattern_instances(spec: PatternSpec, n: int, x_bound: int) -> Iterator[tuple[tuple, tuple, tuple]]:
    """All (X, Y, values) with entries in [1, x_bound] and values in [1, n], lex order in (X, Y)."""
    comps = spec.components
    # every component value is >= the a (resp. b) it is built from, so images beyond n never help
    a_list = _images(spec.A, x_bound, n) if spec.uses_a else [((), ())]
    b_list = _images(spec.B, x_bound, n) if spec.uses_b else [((), ())]
    distinct = spec.distinct
    for X, a in a_list:
        for Y, b in b_list:
            vals = _fast_values(comps, distinct, a, b)
            if vals is not None and vals[-1] <= n:
                yield X, Y, vals


def find_witness(c: Coloring, spec: PatternSpec, x_bound: int | None = None) -> Witness | None:
    """First (X, Y) in lex order whose pattern is monochromatic inside [1, N].

    None only means nothing was found with entries up to ``x_bound``
    (default N).
    """
    n = c.n_max
    xb = n if x_bound is None else x_bound
    colors = c.colors
    for X, Y, vals in pattern_instances(spec, n, xb):
        col = colors[vals[0] - 1]
        if all(colors[v - 1] == col for v in vals):
            return Witness(X, Y, col, vals)
    return None


def verify_witness(c: Coloring, spec: PatternSpec, w: Witness) -> bool:
    """Recompute the pattern from (X, Y) alone and check range and color."""
    try:
        vals = pattern_values(spec, w.X if spec.uses_a else (), w.Y if spec.uses_b else ())
    except (ValueError, TypeError):
        return False
    if w.values and tuple(w.values) != vals:
        return False
    for v in vals:
        if not 1 <= v <= c.n_max or c.color(v) != w.color:
            return False
    return True


@dataclass(frozen=True)
class ForcingResult:
    minimal_R: int | None  # None: some coloring of [1, max_range] avoids the pattern
    max_range: int
    num_colors: int
    avoiding: Coloring | None  # lex-least canonical avoider of [1, max_range] or [1, minimal_R - 1]

    @property
    def forced(self) -> bool:
        return self.minimal_R is not None


def forcing_checks(spec: PatternSpec, R_max: int, x_bound: int | None = None) -> dict[int, list[tuple[int, ...]]]:
    """Group pattern value sets by the range at which they become checkable.

    With ``x_bound=None`` the bound on X, Y entries tracks the range itself,
    so an instance is active from max(values, entries) onwards.
    """
    xb = R_max if x_bound is None else x_bound
    checks: dict[int, set] = defaultdict(set)
    for X, Y, vals in pattern_instances(spec, R_max, xb):
        level = vals[-1]
        if x_bound is None:
            level = max(level, *X, *Y)
        checks[level].add(vals)
    return {k: sorted(v) for k, v in sorted(checks.items())}


def min_forcing_R(
    spec: PatternSpec,
    r: int,
    R_max: int,
    x_bound: int | None = None,
    jobs: int = 1,
) -> ForcingResult:
    """Least R <= R_max such that every r-coloring of [1, R] contains the pattern."""
    checks = forcing_checks(spec, R_max, x_bound)
    best = avoidance_search(R_max, r, checks, jobs=jobs)
    avoiding = Coloring(len(best), r, best) if best else None
    if len(best) == R_max:
        return ForcingResult(None, R_max, r, avoiding)
    return ForcingResult(len(best) + 1, R_max, r, avoiding)
