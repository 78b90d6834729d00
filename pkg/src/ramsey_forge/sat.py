"""CNF encoding of "some r-coloring of [1, N] avoids the pattern", plus a toy DPLL.

Variable r*(n-1) + c + 1 means "n has color c". For r > 6 the at-most-one
constraints use the sequential (Sinz) encoding with auxiliary variables
numbered after the N*r color variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormatError
from .pattern import PatternSpec, pattern_instances

PAIRWISE_MAX_COLORS = 6


@dataclass
class Cnf:
    num_vars: int
    clauses: list[list[int]]
    comments: list[str] = field(default_factory=list)

    def to_dimacs(self) -> str:
        out = [f"c {line}" for line in self.comments]
        out.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        out.extend(" ".join(map(str, cl)) + " 0" for cl in self.clauses)
        return "\n".join(out) + "\n"


def parse_dimacs(text: str) -> Cnf:
    header = None
    clauses: list[list[int]] = []
    comments = []
    current: list[int] = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("c"):
            comments.append(ln[2:] if ln.startswith("c ") else ln[1:])
            continue
        if ln.startswith("p"):
            toks = ln.split()
            if len(toks) != 4 or toks[1] != "cnf":
                raise FormatError(f"bad DIMACS header {ln!r}")
            header = (int(toks[2]), int(toks[3]))
            continue
        for tok in ln.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if header is None:
        raise FormatError("missing 'p cnf' header")
    if current:
        raise FormatError("last clause is not 0-terminated")
    if len(clauses) != header[1]:
        raise FormatError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return Cnf(header[0], clauses, comments)


def color_var(n: int, c: int, r: int) -> int:
    return r * (n - 1) + c + 1


def sat_encode(spec: PatternSpec, r: int, n: int, x_bound: int | None = None) -> Cnf:
    """CNF that is satisfiable iff some r-coloring of [1, n] avoids ``spec``.

    Instances range over X, Y with entries up to ``x_bound`` (default n),
    matching :func:`find_witness` on a coloring of [1, n].
    """
    xb = n if x_bound is None else x_bound
    clauses: list[list[int]] = []
    num_vars = n * r
    comments = [
        f"pattern {spec.describe()} A={spec.A} B={spec.B} distinct={str(spec.distinct).lower()}",
        f"range N={n} colors r={r}",
        "variable r*(n-1)+c+1 means: n has color c",
    ]
    for m in range(1, n + 1):
        clauses.append([color_var(m, c, r) for c in range(r)])
    if r <= PAIRWISE_MAX_COLORS:
        for m in range(1, n + 1):
            for c1 in range(r):
                for c2 in range(c1 + 1, r):
                    clauses.append([-color_var(m, c1, r), -color_var(m, c2, r)])
    else:
        comments.append(f"auxiliary variables {num_vars + 1}..{num_vars + n * (r - 1)}: sequential at-most-one")
        for m in range(1, n + 1):
            xs = [color_var(m, c, r) for c in range(r)]
            s = list(range(num_vars + 1, num_vars + r))
            num_vars += r - 1
            clauses.append([-xs[0], s[0]])
            for i in range(1, r - 1):
                clauses.append([-xs[i], s[i]])
                clauses.append([-s[i - 1], s[i]])
                clauses.append([-xs[i], -s[i - 1]])
            clauses.append([-xs[r - 1], -s[r - 2]])
    seen = set()
    for _, _, vals in pattern_instances(spec, n, xb):
        if vals in seen:
            continue
        seen.add(vals)
        for c in range(r):
            clauses.append([-color_var(v, c, r) for v in vals])
    clauses.append([color_var(1, 0, r)])
    return Cnf(num_vars, clauses, comments)


def unit_propagate(clauses, assignment):
    """Extend ``assignment`` (var -> bool) by unit propagation; False on conflict."""
    changed = True
    while changed:
        changed = False
        for cl in clauses:
            unassigned = None
            count = 0
            sat = False
            for lit in cl:
                val = assignment.get(abs(lit))
                if val is None:
                    count += 1
                    unassigned = lit
                elif val == (lit > 0):
                    sat = True
                    break
            if sat:
                continue
            if count == 0:
                return False
            if count == 1:
                assignment[abs(unassigned)] = unassigned > 0
                changed = True
    return True


def dpll(cnf: Cnf) -> dict[int, bool] | None:
    """Return a satisfying assignment or None. Meant for instances of a few dozen variables."""

    def solve(assignment):
        if not unit_propagate(cnf.clauses, assignment):
            return None
        for v in range(1, cnf.num_vars + 1):
            if v not in assignment:
                break
        else:
            return assignment
        for value in (True, False):
            trial = dict(assignment)
            trial[v] = value
            got = solve(trial)
            if got is not None:
                return got
        return None

    model = solve({})
    if model is None:
        return None
    return {v: model.get(v, False) for v in range(1, cnf.num_vars + 1)}


def decode_coloring(model: dict[int, bool], n: int, r: int) -> list[int]:
    out = []
    for m in range(1, n + 1):
        out.append(next(c for c in range(r) if model[color_var(m, c, r)]))
    return out
