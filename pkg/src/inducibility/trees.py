"""Canonical unlabeled rooted trees, bracket text format, generators and enumeration.

Trees are immutable and always stored in canonical form: the children of every
internal node are sorted by ``(n_leaves, key)``. The ``key`` of a tree is its
canonical bracket serialization, so two trees are isomorphic exactly when their
keys are equal and ``==`` on :class:`Tree` *is* rooted isomorphism.

Text format::

    tree := "*" | "-" | "(" tree ("," tree)+ ")"

``*`` is a leaf and ``-`` is the empty tree, which is only accepted at the top
level. The arity ``d`` is not stored in a tree; it is checked at the API
boundary (:func:`parse_tree`, :func:`check_arity`, :func:`branches`).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import ArityError, CapExceeded, DomainError, TreeSyntaxError

__all__ = [
    "Tree",
    "EMPTY",
    "LEAF",
    "node",
    "parse_tree",
    "serialize",
    "canonicalize",
    "is_isomorphic",
    "check_arity",
    "even_tree",
    "strict_even_tree",
    "strict_even_indices",
    "complete_tree",
    "caterpillar",
    "star",
    "enumerate_trees",
    "count_trees",
    "branches",
    "is_balanced",
    "is_caterpillar",
    "induce_subtree",
]


class Tree:
    """Rooted unlabeled tree in canonical form.

    Use :data:`EMPTY`, :data:`LEAF` and :func:`node` to build trees rather than
    calling the constructor directly.
    """

    __slots__ = ("children", "n_leaves", "key", "_hash")

    def __init__(self, children: tuple[Tree, ...], n_leaves: int, key: str):
        self.children = children
        self.n_leaves = n_leaves
        self.key = key
        self._hash = hash(key)

    @property
    def kind(self) -> str:
        if self.n_leaves == 0:
            return "empty"
        return "internal" if self.children else "leaf"

    @property
    def is_empty(self) -> bool:
        return self.n_leaves == 0

    @property
    def is_leaf(self) -> bool:
        return self.n_leaves == 1 and not self.children

    @property
    def degree(self) -> int:
        return len(self.children)

    def max_degree(self) -> int:
        """Largest number of children of any vertex."""
        if not self.children:
            return 0
        return max(len(self.children), max(c.max_degree() for c in self.children))

    def __len__(self) -> int:
        return self.n_leaves

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Tree) -> bool:
        return (self.n_leaves, self.key) < (other.n_leaves, other.key)

    def __repr__(self) -> str:
        return f"Tree({self.key!r})"

    def __str__(self) -> str:
        return self.key


EMPTY = Tree((), 0, "-")
LEAF = Tree((), 1, "*")


def _sort_key(t: Tree) -> tuple[int, str]:
    return (t.n_leaves, t.key)


def node(children: Iterable[Tree]) -> Tree:
    """Internal node over ``children`` (empty trees are dropped).

    A single remaining child is returned unchanged, which is exactly the
    suppression of a vertex with one child.
    """
    kids = sorted((c for c in children if c.n_leaves), key=_sort_key)
    if not kids:
        return EMPTY
    if len(kids) == 1:
        return kids[0]
    key = "(" + ",".join(c.key for c in kids) + ")"
    return Tree(tuple(kids), sum(c.n_leaves for c in kids), key)


def star(k: int) -> Tree:
    """Root with ``k`` leaf children (``k = 1`` gives a leaf, ``k = 0`` the empty tree)."""
    if k < 0:
        raise DomainError(f"leaf count must be nonnegative, got {k}")
    if k <= 1:
        return LEAF if k else EMPTY
    return node([LEAF] * k)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.s = "".join(text.split())
        self.i = 0

    def error(self, msg: str) -> TreeSyntaxError:
        return TreeSyntaxError(f"{msg} at position {self.i} in {self.s!r}")

    def parse(self) -> tuple:
        if not self.s:
            raise self.error("empty input")
        if self.s == "-":
            return ()
        out = self.tree()
        if self.i != len(self.s):
            raise self.error("trailing characters")
        return out

    def tree(self):
        if self.i >= len(self.s):
            raise self.error("unexpected end of input")
        ch = self.s[self.i]
        if ch == "*":
            self.i += 1
            return "*"
        if ch == "-":
            raise self.error("empty tree is only allowed at top level")
        if ch != "(":
            raise self.error(f"unexpected character {ch!r}")
        self.i += 1
        kids = [self.tree()]
        while self.i < len(self.s) and self.s[self.i] == ",":
            self.i += 1
            kids.append(self.tree())
        if self.i >= len(self.s) or self.s[self.i] != ")":
            raise self.error("expected ')'")
        self.i += 1
        return kids


def _build(raw, d: int | None) -> Tree:
    if raw == "*":
        return LEAF
    if len(raw) < 2:
        raise ArityError("internal node with a single child")
    if d is not None and len(raw) > d:
        raise ArityError(f"internal node with {len(raw)} children exceeds arity {d}")
    return node(_build(r, d) for r in raw)


def parse_tree(text: str, d: int | None = None) -> Tree:
    """Parse bracket text into a canonical tree, validating arity ``d`` if given.

    >>> parse_tree("(*,(*,*))")
    Tree('(*,(*,*))')
    """
    if d is not None and d < 2:
        raise DomainError(f"arity must be at least 2, got {d}")
    raw = _Parser(text).parse()
    if raw == ():
        return EMPTY
    return _build(raw, d)


def serialize(t: Tree) -> str:
    return t.key


def canonicalize(t: Tree) -> Tree:
    """Rebuild ``t`` bottom-up; trees are canonical on construction so this is idempotent."""
    if not t.children:
        return t
    return node(canonicalize(c) for c in t.children)


def is_isomorphic(a: Tree, b: Tree) -> bool:
    return a.key == b.key


def check_arity(t: Tree, d: int) -> Tree:
    """Raise :class:`ArityError` unless every internal node has 2..d children."""
    if d < 2:
        raise DomainError(f"arity must be at least 2, got {d}")
    if t.max_degree() > d:
        raise ArityError(f"{t.key} has a vertex with more than {d} children")
    return t


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _check_d(d: int) -> None:
    if d < 2:
        raise DomainError(f"arity must be at least 2, got {d}")


@lru_cache(maxsize=None)
def even_tree(d: int, k: int) -> Tree:
    """The even tree with ``k`` leaves: a star for ``k <= d``, otherwise
    ``d - b`` copies of ``even_tree(d, s)`` and ``b`` copies of
    ``even_tree(d, s + 1)`` under a new root, where ``k = d*s + b``."""
    _check_d(d)
    if k < 0:
        raise DomainError(f"leaf count must be nonnegative, got {k}")
    if k <= d:
        return star(k)
    s, b = divmod(k, d)
    return node([even_tree(d, s)] * (d - b) + [even_tree(d, s + 1)] * b)


def strict_even_indices(d: int, n: int) -> tuple[int, ...]:
    """Branch indices ``(s, ..., s, s+1, ..., s+1)`` of ``strict_even_tree(d, n)``, n >= 1."""
    if n < 1:
        raise DomainError("branch indices are defined for n >= 1")
    s, b = divmod(n - 1, d)
    return (s,) * (d - b) + (s + 1,) * b


@lru_cache(maxsize=None)
def strict_even_tree(d: int, n: int) -> Tree:
    """Strictly d-ary analogue of the even trees, with ``(d-1)*n + 1`` leaves."""
    _check_d(d)
    if n < 0:
        raise DomainError(f"index must be nonnegative, got {n}")
    if n == 0:
        return LEAF
    return node(strict_even_tree(d, i) for i in strict_even_indices(d, n))


@lru_cache(maxsize=None)
def complete_tree(d: int, h: int) -> Tree:
    """Strictly d-ary tree with all ``d**h`` leaves at depth ``h``."""
    _check_d(d)
    if h < 0:
        raise DomainError(f"height must be nonnegative, got {h}")
    if h == 0:
        return LEAF
    return node([complete_tree(d, h - 1)] * d)


@lru_cache(maxsize=None)
def caterpillar(k: int) -> Tree:
    """Binary caterpillar with ``k`` leaves."""
    if k < 1:
        raise DomainError(f"caterpillar needs at least one leaf, got {k}")
    if k == 1:
        return LEAF
    return node([caterpillar(k - 1), LEAF])


def is_caterpillar(t: Tree) -> bool:
    """True for binary caterpillars (including the leaf and the cherry)."""
    while t.children:
        if len(t.children) != 2 or not t.children[0].is_leaf:
            return False
        t = t.children[1]
    return not t.is_empty


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _partitions(n: int, parts: int, largest: int, step: int) -> Iterator[tuple[int, ...]]:
    """Nonincreasing tuples of ``parts`` positive integers summing to ``n``, each
    at most ``largest`` and congruent to 1 modulo ``step`` (step 1 = no restriction)."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    hi = min(largest, n - (parts - 1))
    for first in range(hi, 0, -1):
        if (first - 1) % step:
            continue
        for rest in _partitions(n - first, parts - 1, first, step):
            yield (first,) + rest


def _check_population(d: int, n: int, strict: bool) -> None:
    _check_d(d)
    if n < 1:
        raise DomainError(f"leaf count must be positive, got {n}")
    if strict and (n - 1) % (d - 1):
        raise DomainError(f"no strictly {d}-ary tree has {n} leaves (need n = 1 mod {d - 1})")


def _root_shapes(d: int, n: int, strict: bool) -> Iterator[tuple[int, ...]]:
    step = d - 1 if strict else 1
    degrees = (d,) if strict else range(2, d + 1)
    for p in degrees:
        yield from _partitions(n, p, n - 1, step)


@lru_cache(maxsize=None)
def count_trees(d: int, n: int, strict: bool = False) -> int:
    """Number of isomorphism classes of (strictly) d-ary trees with ``n`` leaves."""
    _check_population(d, n, strict)
    if n == 1:
        return 1
    total = 0
    for shape in _root_shapes(d, n, strict):
        ways = 1
        for size in set(shape):
            ways *= comb(count_trees(d, size, strict) + shape.count(size) - 1, shape.count(size))
        total += ways
    return total


@lru_cache(maxsize=None)
def _trees(d: int, n: int, strict: bool) -> tuple[Tree, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for shape in _root_shapes(d, n, strict):
        groups = [
            combinations_with_replacement(_trees(d, size, strict), shape.count(size))
            for size in sorted(set(shape))
        ]
        for choice in product(*groups):
            out.append(node(c for group in choice for c in group))
    out.sort(key=_sort_key)
    return tuple(out)


def enumerate_trees(d: int, n: int, strict: bool = False, cap: int | None = None) -> Iterator[Tree]:
    """Yield every (strictly) d-ary tree with ``n`` leaves once, in canonical-key order.

    Raises :class:`DomainError` when ``strict`` and ``n`` is not 1 mod (d-1),
    and :class:`~inducibility.errors.CapExceeded` when more than ``cap`` trees exist.
    """
    _check_population(d, n, strict)
    if cap is not None and count_trees(d, n, strict) > cap:
        raise CapExceeded(
            f"{count_trees(d, n, strict)} trees with {n} leaves exceed the cap of {cap}"
        )
    yield from _trees(d, n, strict)


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def branches(t: Tree, d: int) -> list[Tree]:
    """Children of the root padded with empty trees to length ``d``."""
    if t.is_empty:
        raise DomainError("the empty tree has no branches")
    if len(t.children) > d:
        raise ArityError(f"root of {t.key} has more than {d} children")
    return list(t.children) + [EMPTY] * (d - len(t.children))


def is_balanced(t: Tree, d: int) -> bool:
    """Padded branch sizes pairwise differ by at most one."""
    sizes = [b.n_leaves for b in branches(t, d)]
    return max(sizes) - min(sizes) <= 1


def induce_subtree(t: Tree, leaves: Iterable[int]) -> Tree:
    """Tree induced by a set of leaves, indexed in DFS order of the canonical form.

    The minimal subtree spanning the chosen leaves is taken and vertices with a
    single child are suppressed, so the root is their last common ancestor.
    """
    chosen = sorted(set(leaves))
    if not chosen:
        raise DomainError("at least one leaf must be chosen")
    if chosen[0] < 0 or chosen[-1] >= t.n_leaves:
        raise IndexError(f"leaf index out of range for a tree with {t.n_leaves} leaves")
    return _induce(t, 0, chosen, 0, len(chosen))


def _induce(t: Tree, offset: int, chosen: Sequence[int], lo: int, hi: int) -> Tree:
    # chosen[lo:hi] are the selected leaf indices falling inside t
    if lo == hi:
        return EMPTY
    if not t.children:
        return LEAF
    parts = []
    for c in t.children:
        end = offset + c.n_leaves
        mid = lo
        while mid < hi and chosen[mid] < end:
            mid += 1
        if mid > lo:
            parts.append(_induce(c, offset, chosen, lo, mid))
        offset, lo = end, mid
    return node(parts)
