"""Exact rational matrices and their images on positive integer vectors.

Scalars are :class:`fractions.Fraction`, which keeps every value in lowest
terms with a positive denominator. Vectors and images are plain tuples of
``int``; the naturals exclude 0 throughout.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import DimensionMismatch, FormatError, NotIntegral, NotPositive

Rational = Fraction
NatVector = tuple[int, ...]
NatImage = tuple[int, ...]

_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(token: str) -> Fraction:
    """Parse ``p`` or ``p/q`` (q > 0). Decimal and exponent forms are rejected."""
    m = _RATIONAL_RE.match(token.strip())
    if not m:
        raise FormatError(f"bad rational {token!r}: expected p or p/q")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise FormatError(f"bad rational {token!r}: zero denominator")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]
    # D * A as integers, D = lcm of entry denominators; drives the fast image path
    _scaled: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _denom: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionMismatch(f"matrix shape must be positive, got {self.rows}x{self.cols}")
        entries = tuple(Fraction(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)
        for i in range(self.rows):
            if all(e == 0 for e in self.row(i)):
                raise FormatError(f"row {i} is entirely zero")
        denom = reduce(math.lcm, (e.denominator for e in entries), 1)
        scaled = tuple(
            tuple(int(e * denom) for e in self.row(i)) for i in range(self.rows)
        )
        object.__setattr__(self, "_denom", denom)
        object.__setattr__(self, "_scaled", scaled)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("rows must be nonempty and of equal length")
        return cls(len(rows), len(rows[0]), tuple(Fraction(e) for r in rows for e in r))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols]

    def as_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def denominator_lcm(self) -> int:
        return self._denom

    def is_nonnegative(self) -> bool:
        return all(e >= 0 for e in self.entries)

    def natural_image(self, x: Sequence[int]) -> NatImage | None:
        """A·x as a tuple of positive ints, or None if any coordinate is not in N.

        Integer fast path for the search loops; callers that need the reason
        for a rejection use :func:`mat_apply` and :func:`to_nat_image`.
        """
        d = self._denom
        out = []
        for row in self._scaled:
            s = 0
            for a, xi in zip(row, x):
                s += a * xi
            if s <= 0:
                return None
            if d != 1:
                q, rem = divmod(s, d)
                if rem:
                    return None
                s = q
            out.append(s)
        return tuple(out)

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for i in range(self.rows):
            lines.append(" ".join(format_rational(e) for e in self.row(i)))
        return "\n".join(lines) + "\n"

    def __str__(self):
        return "[" + ", ".join(
            "[" + ", ".join(format_rational(e) for e in self.row(i)) + "]" for i in range(self.rows)
        ) + "]"


def parse_matrix(text: str) -> RatMatrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty matrix file")
    header = lines[0].split()
    if len(header) != 2 or not all(t.isdigit() for t in header):
        raise FormatError(f"bad matrix header {lines[0]!r}: expected 'u v'")
    u, v = int(header[0]), int(header[1])
    body = lines[1:]
    if len(body) != u:
        raise FormatError(f"matrix header declares {u} rows, found {len(body)}")
    rows = []
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != v:
            raise FormatError(f"matrix row {i} has {len(toks)} entries, expected {v}")
        rows.append([parse_rational(t) for t in toks])
    return RatMatrix.from_rows(rows)


def nat_vector(values: Iterable[int]) -> NatVector:
    out = tuple(values)
    for i, x in enumerate(out):
        if int(x) != x:
            raise NotIntegral(i, x)
        if x < 1:
            raise NotPositive(i, x)
    return tuple(int(x) for x in out)


def mat_apply(a: RatMatrix, x: Sequence[int]) -> tuple[Fraction, ...]:
    if len(x) != a.cols:
        raise DimensionMismatch(f"matrix has {a.cols} columns but vector has length {len(x)}")
    return tuple(
        sum((e * xi for e, xi in zip(a.row(i), x)), Fraction(0)) for i in range(a.rows)
    )


def to_nat_image(values: Iterable) -> NatImage:
    """Check that every value is an integer >= 1; raise on the first offender."""
    out = []
    for i, v in enumerate(values):
        v = Fraction(v)
        if v.denominator != 1:
            raise NotIntegral(i, v)
        if v < 1:
            raise NotPositive(i, v)
        out.append(v.numerator)
    return tuple(out)


def scale_vector(c: int, x: Sequence[int]) -> NatVector:
    if c < 1:
        raise NotPositive(0, c)
    return tuple(c * xi for xi in x)
