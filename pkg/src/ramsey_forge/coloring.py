"""Finite colorings of [1, N], their file format, and pruned enumeration.

Enumeration only ever produces canonical colorings: colors are labelled
by first occurrence, so the color of 1 is 0 and each new color is the least
unused index. One representative per color-permutation orbit is visited.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

from .errors import BadHeader, ColorOutOfRange, LengthMismatch


@dataclass(frozen=True)
class Coloring:
    n_max: int
    num_colors: int
    colors: tuple[int, ...]  # colors[n - 1] is the color of n

    def __post_init__(self):
        if self.n_max < 1 or self.num_colors < 1:
            raise BadHeader(f"N and r must be positive, got N={self.n_max} r={self.num_colors}")
        colors = tuple(self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != self.n_max:
            raise LengthMismatch(f"expected {self.n_max} colors, got {len(colors)}")
        for n, c in enumerate(colors, start=1):
            if not 0 <= c < self.num_colors:
                raise ColorOutOfRange(f"color {c} of {n} is outside [0, {self.num_colors})")

    def color(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"{n} is outside [1, {self.n_max}]")
        return self.colors[n - 1]

    def restrict(self, m: int) -> "Coloring":
        return Coloring(m, self.num_colors, self.colors[:m])

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for n, c in enumerate(self.colors, start=1):
            out[c].append(n)
        return out

    def class_masks(self) -> list[int]:
        """Bit n of mask c is set iff n has color c."""
        masks = [0] * self.num_colors
        for n, c in enumerate(self.colors, start=1):
            masks[c] |= 1 << n
        return masks

    @property
    def bitset(self) -> int:
        """Packed view for two colorings: bit n set iff n has color 1."""
        if self.num_colors != 2:
            raise ValueError("bitset view is only defined for r = 2")
        return self.class_masks()[1]

    def is_canonical(self) -> bool:
        return self.colors == canonicalize(self).colors

    def body(self) -> str:
        if self.num_colors <= 10:
            return "".join(str(c) for c in self.colors)
        return " ".join(str(c) for c in self.colors)

    def to_text(self) -> str:
        return f"{self.n_max} {self.num_colors}\n{self.body()}\n"


def parse_coloring(text: str) -> Coloring:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise BadHeader("empty coloring file")
    header = lines[0].split()
    if len(header) != 2 or not all(t.isdigit() for t in header):
        raise BadHeader(f"bad coloring header {lines[0]!r}: expected 'N r'")
    n, r = int(header[0]), int(header[1])
    if n < 1 or r < 1:
        raise BadHeader(f"N and r must be positive, got {lines[0]!r}")
    tokens = " ".join(lines[1:]).split()
    if len(tokens) == 1 and n > 1:
        if r > 10:
            raise BadHeader("digit-string colorings need r <= 10; use the integer list form")
        tokens = list(tokens[0])
    if not all(t.isdigit() for t in tokens):
        raise BadHeader("coloring body must be digits or nonnegative integers")
    colors = tuple(int(t) for t in tokens)
    for c in colors:
        if c >= r:
            raise ColorOutOfRange(f"color {c} is not below r={r}")
    if len(colors) != n:
        raise LengthMismatch(f"header declares N={n} but body has {len(colors)} colors")
    return Coloring(n, r, colors)


def canonicalize(c: Coloring) -> Coloring:
    relabel: dict[int, int] = {}
    out = []
    for col in c.colors:
        if col not in relabel:
            relabel[col] = len(relabel)
        out.append(relabel[col])
    return Coloring(c.n_max, c.num_colors, tuple(out))


def valuation_parity(n: int, p: int = 2) -> Coloring:
    """2-coloring of [1, n] by the parity of the p-adic valuation."""
    colors = []
    for m in range(1, n + 1):
        v = 0
        while m % p == 0:
            m //= p
            v += 1
        colors.append(v % 2)
    return Coloring(n, 2, tuple(colors))


def _walk(n: int, r: int, accept: Callable[[list[int]], bool] | None, prefix: Sequence[int]):
    """Preorder walk over accepted canonical extensions of ``prefix``.

    Yields the current prefix (a shared list, copy it to keep it) after each
    accepted extension. Rejected prefixes are never extended.
    """
    seq = list(prefix)
    base = len(seq)
    if base >= n:
        return
    top = [min(max(seq) + 1, r - 1) if seq else 0]
    nxt = [0]
    while nxt:
        c = nxt[-1]
        if c > top[-1]:
            nxt.pop()
            top.pop()
            if len(seq) > base:
                seq.pop()
            continue
        nxt[-1] = c + 1
        seq.append(c)
        if accept is None or accept(seq):
            yield seq
            if len(seq) < n:
                top.append(min(c + 1, r - 1) if c == top[-1] else top[-1])
                nxt.append(0)
                continue
        seq.pop()


def enumerate_colorings(
    n: int,
    r: int,
    accept: Callable[[list[int]], bool] | None = None,
    prefix: Sequence[int] = (),
) -> Iterator[Coloring]:
    """Yield every canonical r-coloring of [1, n] extending ``prefix``.

    ``accept`` sees each new prefix (including the full coloring); returning
    False prunes that subtree. Disjoint prefixes may be walked by separate
    workers.
    """
    for seq in _walk(n, r, accept, prefix):
        if len(seq) == n:
            yield Coloring(n, r, tuple(seq))


def deepest_prefix(
    n: int,
    r: int,
    accept: Callable[[list[int]], bool],
    prefix: Sequence[int] = (),
) -> tuple[int, ...]:
    """Lexicographically least among the longest accepted prefixes (length <= n).

    Stops as soon as a full-length coloring is accepted.
    """
    best = tuple(prefix)
    for seq in _walk(n, r, accept, prefix):
        if len(seq) > len(best):
            best = tuple(seq)
            if len(best) == n:
                break
    return best


class AvoidsAll:
    """Prefix predicate: no hyperedge closing at the current length is monochromatic.

    ``checks[k]`` lists the value tuples that become fully colored (and active)
    once the prefix reaches length k.
    """

    def __init__(self, checks: Mapping[int, Sequence[tuple[int, ...]]]):
        self.checks = {k: [tuple(e) for e in v] for k, v in checks.items() if v}

    def __call__(self, seq: list[int]) -> bool:
        edges = self.checks.get(len(seq))
        if not edges:
            return True
        for e in edges:
            c = seq[e[0] - 1]
            for v in e:
                if seq[v - 1] != c:
                    break
            else:
                return False
        return True


_worker_accept: AvoidsAll | None = None


def _init_worker(checks):
    global _worker_accept
    _worker_accept = AvoidsAll(checks)


def _explore(task):
    n, r, prefix = task
    return deepest_prefix(n, r, _worker_accept, prefix)


def default_jobs() -> int:
    env = os.environ.get("RAMSEY_FORGE_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def avoidance_search(
    n: int,
    r: int,
    checks: Mapping[int, Sequence[tuple[int, ...]]],
    jobs: int = 1,
    min_parallel_depth: int = 12,
) -> tuple[int, ...]:
    """Lex-least longest canonical prefix of length <= n avoiding every hyperedge.

    With ``jobs > 1`` the tree is cut at a shallow frontier whose prefixes go
    to a process pool; the answer is identical for every job count.
    """
    accept = AvoidsAll(checks)
    if jobs <= 1 or n < min_parallel_depth:
        return deepest_prefix(n, r, accept)

    # breadth-first frontier, kept in lexicographic order
    level: list[tuple[int, ...]] = [()]
    depth = 0
    while depth < n and 0 < len(level) < 4 * jobs:
        nxt = []
        for p in level:
            top = min(max(p) + 1, r - 1) if p else 0
            for c in range(top + 1):
                s = list(p) + [c]
                if accept(s):
                    nxt.append(tuple(s))
        if not nxt:
            break
        level = nxt
        depth += 1
    if depth == n:
        return level[0]
    if len(level) < 2:
        return deepest_prefix(n, r, accept, level[0])

    best = level[0]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(accept.checks,)) as pool:
        futures = [pool.submit(_explore, (n, r, p)) for p in level]
        for i, fut in enumerate(futures):
            got = fut.result()
            if len(got) > len(best):
                best = got
            if len(best) == n:
                for later in futures[i + 1:]:
                    later.cancel()
                break
    return best
