"""Finite version of the compactness-and-lift argument.

Pipeline on one coloring omega of [1, N]:

1. compound coloring omega' on [1, M], M = N // R: alpha and beta agree iff
   omega(i*alpha) = omega(i*beta) for every i in [1, R];
2. a witness (y, xs) for omega' making {x, x*y, x + P(y)} monochromatic, P in F1;
3. the family {x, x*y, x + P(y)} and the induced coloring chi of [1, R];
4. a {AX, BY, AX*BY} witness under chi;
5. the lift X -> x*X, Y -> y*Y, checked against omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .coloring import Coloring
from .errors import (
    FormatError,
    LiftVerificationFailed,
    NonIntegralPolyValue,
    PipelineIncomplete,
    RangeTooSmall,
    WellDefinednessViolation,
    ZeroScale,
)
from .exact import RatMatrix, format_rational, parse_rational, scale_vector
from .pattern import PatternSpec, Witness, find_witness, pattern_values, verify_witness


@dataclass(frozen=True)
class Poly:
    """Polynomial with no constant term; coeffs[k] multiplies t**(k+1)."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "Poly":
        if degree < 1:
            raise FormatError("polynomials here have no constant term")
        return cls((0,) * (degree - 1) + (Fraction(coeff),))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = (acc + c) * t
        return acc

    def to_text(self) -> str:
        terms = [f"{k + 1}:{format_rational(c)}" for k, c in enumerate(self.coeffs) if c != 0]
        return " ".join(reversed(terms)) or "1:0"

    def sort_key(self):
        return (len(self.coeffs), self.coeffs)


def parse_poly(line: str) -> Poly:
    coeffs: dict[int, Fraction] = {}
    for tok in line.split():
        deg, sep, coef = tok.partition(":")
        if not sep or not deg.isdigit():
            raise FormatError(f"bad polynomial term {tok!r}: expected degree:coefficient")
        d = int(deg)
        if d < 1:
            raise FormatError(f"bad polynomial term {tok!r}: constant terms are not allowed")
        if d in coeffs:
            raise FormatError(f"degree {d} given twice in {line!r}")
        coeffs[d] = parse_rational(coef)
    if not coeffs:
        raise FormatError("empty polynomial line")
    top = max(coeffs)
    return Poly(tuple(coeffs.get(k, Fraction(0)) for k in range(1, top + 1)))


def parse_poly_set(text: str) -> list[Poly]:
    out = []
    for ln in text.splitlines():
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            out.append(parse_poly(ln))
    if not out:
        raise FormatError("polynomial file is empty")
    return out


def poly_rescale(P: Poly, rho) -> Poly:
    """t -> P(rho * t)."""
    rho = Fraction(rho)
    if rho == 0:
        raise ZeroScale("rescaling by 0 collapses every polynomial")
    return Poly(tuple(c * rho ** (k + 1) for k, c in enumerate(P.coeffs)))


def poly_outer_div(P: Poly, y: int) -> Poly:
    return Poly(tuple(c / y for c in P.coeffs))


def build_F1(F: Iterable[Poly], R: int, q: int) -> list[Poly]:
    """{P(z/q * t) / y : P in F, y, z in [1, R]}, deduplicated and sorted."""
    out = set()
    for P in F:
        for z in range(1, R + 1):
            scaled = poly_rescale(P, Fraction(z, q))
            for y in range(1, R + 1):
                out.add(poly_outer_div(scaled, y))
    return sorted(out, key=Poly.sort_key)


def compound_coloring(omega: Coloring, R: int, M: int | None = None) -> "CompoundColoring":
    if M is None:
        M = omega.n_max // R
    if M < 1 or R * M > omega.n_max:
        raise RangeTooSmall(f"window {R} over [1, {M}] needs omega on [1, {R * M}], have [1, {omega.n_max}]")
    ids: dict[tuple, int] = {}
    derived = []
    keys = []
    for alpha in range(1, M + 1):
        key = tuple(omega.colors[i * alpha - 1] for i in range(1, R + 1))
        if key not in ids:
            ids[key] = len(ids)
            keys.append(key)
        derived.append(ids[key])
    return CompoundColoring(omega, R, Coloring(M, len(ids), tuple(derived)), tuple(keys))


@dataclass(frozen=True)
class CompoundColoring:
    base: Coloring
    window: int
    derived: Coloring
    class_keys: tuple[tuple[int, ...], ...]  # class_keys[k] = (omega(alpha), ..., omega(R*alpha)) for class k

    @property
    def num_classes(self) -> int:
        return len(self.class_keys)


def moreira_witness(
    c: Coloring,
    F: Sequence[Poly],
    y_bound: int,
    min_count: int = 1,
) -> tuple[int, list[int]] | None:
    """Least y <= y_bound with min_count values x making {x, x*y, x + P(y)} monochromatic in c."""
    n = c.n_max
    colors = c.colors
    for y in range(1, y_bound + 1):
        try:
            shifts = []
            for P in F:
                v = P(y)
                if v.denominator != 1:
                    raise NonIntegralPolyValue(f"{P.to_text()} at {y} = {v}")
                shifts.append(v.numerator)
        except NonIntegralPolyValue:
            continue  # every candidate x at this y is rejected
        xs = []
        for x in range(1, n // y + 1):
            col = colors[x - 1]
            if colors[x * y - 1] != col:
                continue
            for s in shifts:
                v = x + s
                if not 1 <= v <= n or colors[v - 1] != col:
                    break
            else:
                xs.append(x)
                if len(xs) == min_count:
                    return y, xs
    return None


def moreira_family(xs: Iterable[int], y: int, F: Sequence[Poly]) -> list[int]:
    fam = set()
    for x in xs:
        fam.add(x)
        fam.add(x * y)
        for P in F:
            v = x + P(y)
            if v.denominator != 1:
                raise NonIntegralPolyValue(f"{P.to_text()} at {y} = {P(y)}")
            fam.add(v.numerator)
    return sorted(fam)


def chi_from_family(omega: Coloring, family: Sequence[int], R: int) -> Coloring:
    """chi(m) = the common omega-color of m * family, for m in [1, R]."""
    family = sorted(set(family))
    if not family:
        raise RangeTooSmall("family is empty")
    if R * family[-1] > omega.n_max:
        raise RangeTooSmall(f"{R} * {family[-1]} exceeds omega's range [1, {omega.n_max}]")
    chi = []
    for m in range(1, R + 1):
        first = family[0]
        col = omega.colors[m * first - 1]
        for e in family[1:]:
            got = omega.colors[m * e - 1]
            if got != col:
                raise WellDefinednessViolation(m, first, e, (col, got))
        chi.append(col)
    return Coloring(R, omega.num_colors, tuple(chi))


def lift_witness(omega: Coloring, inner: Witness, moreira_pair: tuple[int, int], spec_out: PatternSpec) -> Witness:
    x, y = moreira_pair
    X = scale_vector(x, inner.X)
    Y = scale_vector(y, inner.Y)
    try:
        vals = pattern_values(spec_out, X, Y)
    except ValueError as exc:
        raise LiftVerificationFailed(None, (), f"lifted vectors X={X} Y={Y} rejected: {exc}") from exc
    too_big = [v for v in vals if v > omega.n_max]
    if too_big:
        raise LiftVerificationFailed(too_big[0], (), f"lifted value {too_big[0]} exceeds [1, {omega.n_max}]")
    col = omega.color(vals[0])
    out = Witness(X, Y, col, vals)
    if not verify_witness(omega, spec_out, out):
        bad = next(v for v in vals if omega.color(v) != col)
        raise LiftVerificationFailed(bad, (col, omega.color(bad)))
    return out


def default_q(A: RatMatrix, B: RatMatrix) -> int:
    return reduce(math.lcm, (e.denominator for e in A.entries + B.entries), 1)


@dataclass
class LiftResult:
    window: int
    M: int
    q: int
    compound: CompoundColoring
    F1: list[Poly]
    y: int
    xs: list[int]
    family: list[int]
    chi: Coloring
    inner: Witness
    outer: Witness

    def trace(self) -> dict:
        return {
            "window": self.window,
            "M": self.M,
            "q": self.q,
            "omega_prime": {
                "num_classes": self.compound.num_classes,
                "coloring": self.compound.derived.body(),
                "class_keys": [list(k) for k in self.compound.class_keys],
            },
            "F1": [P.to_text() for P in self.F1],
            "moreira": {"y": self.y, "xs": self.xs},
            "family": self.family,
            "chi": list(self.chi.colors),
            "inner": _witness_dict(self.inner),
            "outer": _witness_dict(self.outer),
        }


def _witness_dict(w: Witness) -> dict:
    return {"X": list(w.X), "Y": list(w.Y), "color": w.color, "values": list(w.values)}


def run_pipeline(
    omega: Coloring,
    A: RatMatrix,
    B: RatMatrix,
    window: int,
    F: Sequence[Poly],
    q: int | None = None,
    min_count: int = 1,
    y_bound: int | None = None,
) -> LiftResult:
    if A.rows != B.rows:
        raise FormatError("A and B must have the same number of rows")
    q = default_q(A, B) if q is None else q
    compound = compound_coloring(omega, window)
    M = compound.derived.n_max
    F1 = build_F1(F, window, q)
    found = moreira_witness(compound.derived, F1, M if y_bound is None else y_bound, min_count)
    if found is None:
        raise PipelineIncomplete("moreira", f"no y <= {y_bound or M} with {min_count} witnesses x in omega'")
    y, xs = found
    family = moreira_family(xs, y, F1)
    chi = chi_from_family(omega, family, window)
    inner_spec = PatternSpec.named("lemma", A, B)
    inner = find_witness(chi, inner_spec, window)
    if inner is None:
        raise PipelineIncomplete("inner", f"no {{AX, BY, AX*BY}} witness under chi on [1, {window}]")
    outer = lift_witness(omega, inner, (xs[0], y), PatternSpec.named("moreira", A, B))
    return LiftResult(window, M, q, compound, F1, y, xs, family, chi, inner, outer)
