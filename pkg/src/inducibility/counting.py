"""Exact copy counts c(D, T) and densities via the branch recursion.

For trees ``D`` and ``T`` with padded branch lists ``D_1..D_d`` and ``T_1..T_d``::

    c(D, T) = sum_i c(D, T_i) + sum_{pi in M(D)} prod_j c(D_pi(j), T_j)

where ``M(D)`` holds one representative per class of branch permutations that
agree up to isomorphism, c(empty, T) = 1 and c(D, empty) = 0 for nonempty D.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod
from typing import Iterable

from .errors import CapExceeded, DomainError
from .trees import EMPTY, LEAF, Tree, branches, check_arity, induce_subtree

DEFAULT_SUBSET_CAP = 10**7


def multiset_permutations(items: tuple) -> list[tuple]:
    """Distinct orderings of a multiset, in lexicographic order of first occurrence."""
    counts = Counter(items)
    keys = list(dict.fromkeys(items))
    out: list[tuple] = []

    def rec(prefix: list) -> None:
        if len(prefix) == len(items):
            out.append(tuple(prefix))
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                rec(prefix)
                prefix.pop()
                counts[k] += 1

    rec([])
    return out


@dataclass(frozen=True)
class BranchSignature:
    """Isomorphism classes among the padded branches of a tree."""

    classes: tuple[tuple[Tree, int], ...]
    m_profile: dict[int, int]
    m_size: int

    @property
    def sizes(self) -> tuple[int, ...]:
        """Padded branch leaf counts in nonincreasing order."""
        return tuple(sorted((t.n_leaves for t, m in self.classes for _ in range(m)), reverse=True))


@lru_cache(maxsize=None)
def branch_signature(D: Tree, d: int) -> BranchSignature:
    """Group the padded branches of ``D`` into classes; |M(D)| = d! / prod(mult!)."""
    counts = Counter(branches(D, d))
    classes = tuple(sorted(counts.items(), key=lambda kv: (kv[0].n_leaves, kv[0].key)))
    profile = Counter()
    for t, m in classes:
        profile[t.n_leaves] += m
    m_size = factorial(d) // prod(factorial(m) for _, m in classes)
    return BranchSignature(classes, dict(profile), m_size)


@dataclass
class PatternTable:
    """All trees reachable from ``D`` by taking branches, with per-pattern
    branch arrangements (one per element of M(P)) over pattern indices."""

    root: Tree
    d: int
    patterns: list[Tree] = field(default_factory=list)
    index: dict[Tree, int] = field(default_factory=dict)
    arrangements: list[list[tuple[int, ...]]] = field(default_factory=list)

    def __post_init__(self):
        check_arity(self.root, self.d)
        todo = [EMPTY, LEAF, self.root]
        seen = set()
        while todo:
            t = todo.pop()
            if t in seen:
                continue
            seen.add(t)
            todo.extend(t.children)
        self.patterns = sorted(seen)
        self.index = {t: i for i, t in enumerate(self.patterns)}
        for t in self.patterns:
            if t.n_leaves <= 1:
                self.arrangements.append([])
                continue
            ids = tuple(self.index[b] for b in branches(t, self.d))
            self.arrangements.append(multiset_permutations(ids))

    def __len__(self) -> int:
        return len(self.patterns)


class CopyCounter:
    """Counts copies of every pattern of ``D`` in arbitrary trees ``T``.

    Count vectors are memoized by canonical subtree, so repeated subtrees (and
    repeated calls over an enumeration of trees) are only evaluated once.
    """

    def __init__(self, D: Tree, d: int):
        self.table = PatternTable(D, d)
        self.d = d
        self.target = self.table.index[D]
        self._memo: dict[str, tuple[int, ...]] = {}
        self._empty = tuple(int(p.is_empty) for p in self.table.patterns)
        self._leaf = tuple(int(p.n_leaves <= 1) for p in self.table.patterns)

    def vector(self, T: Tree) -> tuple[int, ...]:
        """c(P, T) for every pattern P of the table, in table order."""
        if T.is_empty:
            return self._empty
        if T.is_leaf:
            return self._leaf
        hit = self._memo.get(T.key)
        if hit is not None:
            return hit
        if len(T.children) > self.d:
            check_arity(T, self.d)
        kids = [self.vector(c) for c in T.children]
        kids += [self._empty] * (self.d - len(kids))
        out = []
        for p, pat in enumerate(self.table.patterns):
            if pat.n_leaves == 0:
                out.append(1)
                continue
            if pat.n_leaves == 1:
                out.append(T.n_leaves)
                continue
            if pat.n_leaves > T.n_leaves:
                out.append(0)
                continue
            total = sum(v[p] for v in kids)
            for arr in self.table.arrangements[p]:
                term = 1
                for v, q in zip(kids, arr):
                    term *= v[q]
                    if not term:
                        break
                total += term
            out.append(total)
        res = tuple(out)
        self._memo[T.key] = res
        return res

    def __call__(self, T: Tree) -> int:
        return self.vector(T)[self.target]

    def density(self, T: Tree) -> Fraction:
        k = self.table.root.n_leaves
        if T.n_leaves < k:
            raise DomainError(f"tree has {T.n_leaves} leaves, fewer than the pattern's {k}")
        return Fraction(self(T), comb(T.n_leaves, k))


@lru_cache(maxsize=256)
def _counter(D: Tree, d: int) -> CopyCounter:
    return CopyCounter(D, d)


def count_copies(D: Tree, T: Tree, d: int) -> int:
    """Number of ``len(D)``-leaf subsets of ``T`` inducing a copy of ``D``."""
    if D.is_empty:
        return 1
    check_arity(T, d)
    return _counter(D, d)(T)


def density(D: Tree, T: Tree, d: int) -> Fraction:
    """c(D, T) / C(len(T), len(D)) as an exact fraction."""
    if D.is_empty:
        raise DomainError("density is undefined for the empty pattern")
    if T.n_leaves < D.n_leaves:
        raise DomainError(f"tree has {T.n_leaves} leaves, fewer than the pattern's {D.n_leaves}")
    return Fraction(count_copies(D, T, d), comb(T.n_leaves, D.n_leaves))


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def induced_shape_counts(T: Tree, k: int, cap: int = DEFAULT_SUBSET_CAP) -> Counter:
    """Tally the shapes induced by all ``k``-subsets of leaves of ``T``."""
    total = comb(T.n_leaves, k)
    if total > cap:
        raise CapExceeded(f"C({T.n_leaves},{k}) = {total} subsets exceed the cap of {cap}")
    tally: Counter = Counter()
    for subset in combinations(range(T.n_leaves), k):
        tally[induce_subtree(T, subset).key] += 1
    return tally


def count_copies_bruteforce(D: Tree, T: Tree, cap: int = DEFAULT_SUBSET_CAP) -> int:
    """c(D, T) by literal enumeration of leaf subsets."""
    if D.is_empty:
        return 1
    if D.n_leaves > T.n_leaves:
        return 0
    return induced_shape_counts(T, D.n_leaves, cap)[D.key]


def count_many(D: Tree, trees: Iterable[Tree], d: int) -> list[int]:
    counter = _counter(D, d)
    return [counter(T) for T in trees]
