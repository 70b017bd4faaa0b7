"""Exhaustive maximum-density search over all (strictly) d-ary trees of a given size."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable

from .counting import CopyCounter
from .errors import DomainError
from .trees import Tree, enumerate_trees, even_tree

DEFAULT_TREE_CAP = 10**6


@dataclass
class SearchResult:
    D: Tree
    d: int
    n: int
    strict: bool
    max_count: int
    max_density: Fraction
    argmax: list[Tree]
    trees_scanned: int


def max_density(D: Tree, d: int, n: int, strict: bool = False, cap: int = DEFAULT_TREE_CAP,
                counter: CopyCounter | None = None) -> SearchResult:
    """Exact maximum of c(D, T) over every ``n``-leaf tree T, with all maximizers."""
    k = D.n_leaves
    if k < 1:
        raise DomainError("pattern must be nonempty")
    if n < k:
        raise DomainError(f"need n >= {k} leaves, got {n}")
    counter = counter or CopyCounter(D, d)
    best, argmax, scanned = -1, [], 0
    for T in enumerate_trees(d, n, strict=strict, cap=cap):
        scanned += 1
        c = counter(T)
        if c > best:
            best, argmax = c, [T]
        elif c == best:
            argmax.append(T)
    return SearchResult(D, d, n, strict, best, Fraction(best, comb(n, k)), argmax, scanned)


@dataclass
class ConvergenceRow:
    n: int
    leaves: int
    max_density: Fraction
    reference: Fraction
    gap: Fraction = field(init=False)
    n_times_gap: float = field(init=False)

    def __post_init__(self):
        self.gap = self.max_density - self.reference
        self.n_times_gap = float(self.n * self.gap)


def convergence_table(D: Tree, d: int, n_range: Iterable[int], reference: Fraction,
                      strict: bool = False, cap: int = DEFAULT_TREE_CAP) -> list[ConvergenceRow]:
    """Gap between the maximum density and ``reference`` for each ``n``.

    In strict mode ``n`` is the index of the population of trees with
    ``(d-1)*n + 1`` leaves; otherwise it is the leaf count itself.
    """
    counter = CopyCounter(D, d)
    rows = []
    for n in n_range:
        leaves = (d - 1) * n + 1 if strict else n
        res = max_density(D, d, leaves, strict=strict, cap=cap, counter=counter)
        rows.append(ConvergenceRow(n, leaves, res.max_density, Fraction(reference)))
    return rows


CSV_COLUMNS = ["n", "leaves", "max_density_num", "max_density_den", "gap_num", "gap_den", "n_times_gap"]


def rows_to_csv(rows: Iterable[ConvergenceRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.n, r.leaves, r.max_density.numerator, r.max_density.denominator,
                         r.gap.numerator, r.gap.denominator, repr(r.n_times_gap)])
    return buf.getvalue()


@dataclass
class Violation:
    n: int
    side: str  # "lower" or "upper"
    max_density: Fraction
    bound: Fraction


def sandwich_check(D: Tree, d: int, exact_I: Fraction, n_range: Iterable[int],
                   cap: int = DEFAULT_TREE_CAP) -> tuple[bool, list[Violation]]:
    """Check I <= max density <= I + k(k-1)/n at every ``n`` in ``n_range``."""
    k = D.n_leaves
    counter = CopyCounter(D, d)
    violations = []
    for n in n_range:
        m = max_density(D, d, n, cap=cap, counter=counter).max_density
        upper = exact_I + Fraction(k * (k - 1), n)
        if m < exact_I:
            violations.append(Violation(n, "lower", m, exact_I))
        if m > upper:
            violations.append(Violation(n, "upper", m, upper))
    return not violations, violations


@dataclass
class ConjectureRow:
    n: int
    max_count: int
    even_count: int
    n_trees: int

    @property
    def holds(self) -> bool:
        return self.even_count == self.max_count


@dataclass
class ConjectureReport:
    d: int
    k: int
    rows: list[ConjectureRow]
    counterexamples: list[tuple[int, Tree, int]]

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def conjecture_check(d: int, k: int, n_max: int, cap: int = DEFAULT_TREE_CAP) -> ConjectureReport:
    """Is the even tree E^d_n among the maximizers of c(E^d_k, .) for every n <= n_max?

    Every tree beating E^d_n is returned as a counterexample.
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    counter = CopyCounter(even_tree(d, k), d)
    rows, bad = [], []
    for n in range(1, n_max + 1):
        even = counter(even_tree(d, n))
        best, scanned = even, 0
        for T in enumerate_trees(d, n, cap=cap):
            scanned += 1
            c = counter(T)
            best = max(best, c)
            if c > even:
                bad.append((n, T, c))
        rows.append(ConjectureRow(n, best, even, scanned))
    return ConjectureReport(d, k, rows, bad)
