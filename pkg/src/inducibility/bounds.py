"""Exact values and bounds for the d-ary inducibility I_d(D).

Every bound that needs the inducibility of a branch substitutes the best
branch bound available (an upper bound for the upper-bound formulas, a lower
bound for the lower-bound formulas). Both sides are monotone in the branch
values, so the substituted bounds stay valid.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

from .counting import branch_signature
from .errors import DomainError
from .supremum import (
    DEFAULT_TOL,
    PROVEN,
    certify_supremum_condition,
    multinomial,
    sigma,
    z_function,
    z_supremum,
)
from .trees import Tree, branches, check_arity, even_tree, is_balanced, is_caterpillar

EVEN_TREE = "EvenTree"
BALANCED_RECURSIVE = "BalancedRecursive"
SUPREMUM_CONDITION = "SupremumCondition"
TWO_LEAF = "TwoLeaf"
CATERPILLAR = "Caterpillar"


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _sizes(D: Tree, d: int) -> list[int]:
    return [b.n_leaves for b in branches(D, d)]


@lru_cache(maxsize=None)
def eta(D: Tree, d: int) -> Fraction:
    """Limit density of ``D`` in the strictly d-ary even trees H_n^d.

    >>> from inducibility.trees import even_tree
    >>> eta(even_tree(3, 6), 3)
    Fraction(15, 121)
    """
    if D.n_leaves <= 1:
        return Fraction(1)
    k = D.n_leaves
    sub = branches(D, d)
    value = Fraction(multinomial(_sizes(D, d)) * branch_signature(D, d).m_size, d**k - d)
    for b in sub:
        value *= eta(b, d)
    return value


def phi(D: Tree, d: int) -> Fraction:
    """(d-1)^k * eta / k!, which is multiplicative over branches."""
    return (d - 1) ** D.n_leaves * eta(D, d) / factorial(D.n_leaves)


@lru_cache(maxsize=None)
def _even_c(d: int, k: int) -> Fraction:
    if k <= 1:
        return Fraction(1)
    s, b = divmod(k, d)
    value = Fraction(comb(d, b), d**k - d) * _even_c(d, s) ** (d - b)
    return value * _even_c(d, s + 1) ** b if b else value


def even_inducibility(d: int, k: int) -> Fraction:
    """I_d of the even tree with ``k`` leaves, k! * c_k."""
    if d < 2 or k < 0:
        raise DomainError(f"need d >= 2 and k >= 0, got d={d}, k={k}")
    return factorial(k) * _even_c(d, k)


def complete_inducibility(d: int, h: int) -> Fraction:
    """I_d of the complete d-ary tree of height ``h`` from the closed product."""
    if d < 2 or h < 0:
        raise DomainError(f"need d >= 2 and h >= 0, got d={d}, h={h}")
    value = Fraction(factorial(d**h))
    for i in range(h):
        value /= (d ** (d ** (h - i)) - d) ** (d**i)
    return value


def lower_bound_star(k: int, d: int) -> Fraction:
    """(k-1)! / (k^(k-1) - 1), valid for every d-ary tree with k > 1 leaves."""
    if k < 2:
        raise DomainError(f"star bound needs k >= 2, got {k}")
    return Fraction(factorial(k - 1), k ** (k - 1) - 1)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bound:
    value: Fraction | float
    source: str
    rigorous: bool = True


@lru_cache(maxsize=None)
def exact_inducibility(D: Tree, d: int) -> tuple[Fraction, str] | None:
    """Exact I_d(D) with its certificate when one of the known cases applies."""
    check_arity(D, d)
    if D.n_leaves <= 2:
        return Fraction(1), TWO_LEAF
    if is_caterpillar(D):
        return Fraction(1), CATERPILLAR
    if D == even_tree(d, D.n_leaves):
        return even_inducibility(d, D.n_leaves), EVEN_TREE
    for b in branches(D, d):
        sub = exact_inducibility(b, d)
        if sub is None or sub[0] != eta(b, d):
            return None
    if is_balanced(D, d):
        return eta(D, d), BALANCED_RECURSIVE
    if certify_supremum_condition(D, d).status == PROVEN:
        return eta(D, d), SUPREMUM_CONDITION
    return None


def _branch_product(D: Tree, d: int, which) -> Fraction:
    return prod((which(b, d) for b in branches(D, d)), start=Fraction(1))


def upper_bound_prop4(D: Tree, d: int, seed: int = 0, tol: float = DEFAULT_TOL) -> Bound:
    """multinomial * prod(branch upper) * sup Z_D.

    Rigorous when the supremum is known exactly; otherwise the numeric estimate
    of the supremum is used and the bound is flagged as heuristic.
    """
    if D.n_leaves < 2:
        raise DomainError("needs at least two leaves")
    sup = z_supremum(z_function(D, d), seed=seed, tol=tol)
    base = multinomial(_sizes(D, d)) * _branch_product(D, d, best_upper)
    if sup.is_closed_form:
        return Bound(base * sup.value, "prop4")
    return Bound(float(base) * float(sup.value), "prop4:numeric", rigorous=False)


def _prop4_rigorous(D: Tree, d: int) -> Fraction:
    sup = z_supremum(z_function(D, d), numeric=False)
    return multinomial(_sizes(D, d)) * _branch_product(D, d, best_upper) * sup.rigorous_upper


def upper_bound_cor5(D: Tree, d: int) -> Bound:
    """(|M| prod(m_j!) / d!) * prod(branch upper)."""
    sig = branch_signature(D, d)
    coef = Fraction(sig.m_size * prod(factorial(m) for m in sig.m_profile.values()), factorial(d))
    return Bound(coef * _branch_product(D, d, best_upper), "cor5")


def upper_bound_balanced(D: Tree, d: int) -> Bound:
    """|M| / (d^k - d) * multinomial * prod(branch upper) for balanced trees, or
    |M| / Sigma(D) * ... when only the nonempty branches are balanced."""
    sizes = _sizes(D, d)
    nonempty = [s for s in sizes if s]
    if len(nonempty) < 2 or max(nonempty) - min(nonempty) > 1:
        raise DomainError(f"{D.key} is not balanced")
    k = D.n_leaves
    m_size = branch_signature(D, d).m_size
    rest = multinomial(sizes) * _branch_product(D, d, best_upper)
    if max(sizes) - min(sizes) <= 1:
        return Bound(Fraction(m_size, d**k - d) * rest, "thm8")
    return Bound(Fraction(m_size, sigma(D, d)) * rest, "thm8:sigma")


def lower_bound_thm11(D: Tree, d: int) -> Fraction:
    """multinomial * k^-k * prod(l_i^l_i) * prod(branch lower), with 0^0 = 1."""
    if D.n_leaves < 2:
        raise DomainError("needs at least two leaves")
    k = D.n_leaves
    sizes = _sizes(D, d)
    value = Fraction(multinomial(sizes) * prod(s**s for s in sizes), k**k)
    return value * _branch_product(D, d, best_lower)


def equal_branch_bounds(D: Tree, d: int) -> tuple[Fraction, Fraction] | None:
    """Sandwich for ``d`` isomorphic branches B: k!/d^k (I(B)/|B|!)^d <= I <= k!/(d^k-d) (I(B)/|B|!)^d."""
    subs = branches(D, d)
    if any(b != subs[0] for b in subs) or subs[0].is_empty:
        return None
    k, B = D.n_leaves, subs[0]
    lo = factorial(k) * (best_lower(B, d) / factorial(B.n_leaves)) ** d / d**k
    hi = factorial(k) * (best_upper(B, d) / factorial(B.n_leaves)) ** d / (d**k - d)
    return lo, hi


@lru_cache(maxsize=None)
def best_upper(D: Tree, d: int) -> Fraction:
    """Smallest rigorous upper bound on I_d(D) known to this module."""
    exact = exact_inducibility(D, d)
    if exact is not None:
        return exact[0]
    return min(_rigorous_uppers(D, d), key=lambda b: b.value).value


@lru_cache(maxsize=None)
def best_lower(D: Tree, d: int) -> Fraction:
    exact = exact_inducibility(D, d)
    if exact is not None:
        return exact[0]
    return max(b.value for b in _lowers(D, d))


def _rigorous_uppers(D: Tree, d: int) -> list[Bound]:
    out = [Bound(Fraction(1), "trivial")]
    if D.n_leaves < 2:
        return out
    out.append(upper_bound_cor5(D, d))
    out.append(Bound(_prop4_rigorous(D, d), "prop4"))
    try:
        out.append(upper_bound_balanced(D, d))
    except DomainError:
        pass
    pair = equal_branch_bounds(D, d)
    if pair is not None:
        out.append(Bound(pair[1], "thm10"))
    return out


def _lowers(D: Tree, d: int) -> list[Bound]:
    out = [Bound(eta(D, d), "eta")]
    if D.n_leaves < 2:
        return out
    out.append(Bound(lower_bound_thm11(D, d), "thm11"))
    out.append(Bound(lower_bound_star(D.n_leaves, d), "star"))
    pair = equal_branch_bounds(D, d)
    if pair is not None:
        out.append(Bound(pair[0], "thm10"))
    return out


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def _rational(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _json_value(v):
    return _rational(v) if isinstance(v, Fraction) else float(v)


@dataclass
class BoundReport:
    tree: Tree
    d: int
    eta: Fraction
    lower: list[Bound] = field(default_factory=list)
    upper: list[Bound] = field(default_factory=list)
    exact: Fraction | None = None
    certificate: str | None = None

    @property
    def best_lower(self) -> Fraction:
        return max(b.value for b in self.lower)

    @property
    def best_upper(self) -> Fraction:
        return min(b.value for b in self.upper if b.rigorous)

    def to_dict(self) -> dict:
        return {
            "tree": self.tree.key,
            "d": self.d,
            "leaves": self.tree.n_leaves,
            "eta": _rational(self.eta),
            "lower": [{"value": _json_value(b.value), "source": b.source} for b in self.lower],
            "upper": [
                {"value": _json_value(b.value), "source": b.source, "rigorous": b.rigorous}
                for b in self.upper
            ],
            "best_lower": _rational(self.best_lower),
            "best_upper": _rational(self.best_upper),
            "exact": None if self.exact is None else _rational(self.exact),
            "certificate": self.certificate,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def inducibility_report(D: Tree, d: int, seed: int = 0, tol: float = DEFAULT_TOL) -> BoundReport:
    """Collect eta, every applicable bound, and the exact value when certified."""
    check_arity(D, d)
    if D.is_empty:
        return BoundReport(D, d, Fraction(1), [Bound(Fraction(1), "empty")],
                           [Bound(Fraction(1), "empty")], Fraction(1), TWO_LEAF)
    report = BoundReport(D, d, eta(D, d), _lowers(D, d), _rigorous_uppers(D, d))
    if D.n_leaves >= 2:
        numeric = upper_bound_prop4(D, d, seed=seed, tol=tol)
        if not numeric.rigorous:
            report.upper.append(numeric)
    exact = exact_inducibility(D, d)
    if exact is not None:
        report.exact, report.certificate = exact
    return report
