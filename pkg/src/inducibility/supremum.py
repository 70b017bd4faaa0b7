"""The symmetric rational function Z_D on the simplex and its supremum.

For a tree ``D`` with ``k`` leaves and padded branch sizes ``l_1..l_d``::

    Z_D(x) = |M(D)| * prod(m_j!) / d!  *  sum_{distinct perms e of l} prod x_j^e_j
             ---------------------------------------------------------------
                                 1 - sum_i x_i^k

on ``x_i >= 0, sum x_i = 1, x_i < 1``. The supremum is known in closed form
for balanced exponent vectors (Muirhead majorization) and for a single leaf
branch next to one larger branch. For binary trees the univariate problem is
decided exactly with real root isolation. Everything else falls back to a
seeded multi-start Nelder-Mead search, which is only ever a lower estimate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import comb, factorial, prod
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .counting import branch_signature, multiset_permutations
from .errors import DomainError
from .trees import Tree

CLOSED_BALANCED = "ClosedFormBalanced"
CLOSED_ONE_LEAF = "ClosedFormOneLeafBranch"
CLOSED_CERTIFIED = "ClosedFormCertified"
UPPER_ONLY = "UpperBoundOnly"
NUMERIC = "NumericHeuristic"

CLOSED_FORMS = (CLOSED_BALANCED, CLOSED_ONE_LEAF, CLOSED_CERTIFIED)

DEFAULT_STARTS = 64
DEFAULT_TOL = 1e-9
CORNER_EPSILONS = (1e-2, 1e-4, 1e-6)


def multinomial(parts: Sequence[int]) -> int:
    out, total = 1, 0
    for p in parts:
        total += p
        out *= comb(total, p)
    return out


@dataclass(frozen=True)
class ZFunction:
    d: int
    k: int
    exponents: tuple[int, ...]  # nonincreasing, length d
    m_size: int

    @property
    def coefficient(self) -> Fraction:
        """|M| * prod(m_j!) / d!, the weight of each distinct monomial."""
        mult = prod(factorial(self.exponents.count(e)) for e in set(self.exponents))
        return Fraction(self.m_size * mult, factorial(self.d))

    @property
    def monomials(self) -> list[tuple[int, ...]]:
        return multiset_permutations(self.exponents)

    @property
    def uniform_value(self) -> Fraction:
        """Z at (1/d, ..., 1/d), equal to |M| / (d^k - d)."""
        return Fraction(self.m_size, self.d**self.k - self.d)

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(e for e in self.exponents if e)

    def is_balanced(self) -> bool:
        return self.exponents[0] - self.exponents[-1] <= 1

    def is_face_balanced(self) -> bool:
        nz = self.nonzero
        return nz[0] - nz[-1] <= 1

    def coefficient_cap(self) -> Fraction:
        """General upper bound on sup Z: |M| prod(m_j!) / d! / multinomial(k; l)."""
        return self.coefficient / multinomial(self.exponents)

    def exact(self, x: Sequence) -> Fraction:
        x = [Fraction(v) for v in x]
        if len(x) != self.d or sum(x) != 1 or min(x) < 0 or max(x) >= 1:
            raise DomainError(f"{x} is not a point of the open-at-one simplex")
        num = sum(prod(xi**e for xi, e in zip(x, mono)) for mono in self.monomials)
        den = 1 - sum(xi**self.k for xi in x)
        return self.coefficient * num / den

    def __call__(self, x) -> np.ndarray:
        """Vectorized float evaluation; ``x`` has shape (..., d)."""
        x = np.asarray(x, dtype=float)
        num = np.zeros(x.shape[:-1])
        for mono in self.monomials:
            num = num + np.prod(x ** np.asarray(mono, dtype=float), axis=-1)
        # 1 - sum x_i^k with the largest coordinate written as 1 - rest, avoiding cancellation
        xs = np.sort(x, axis=-1)
        rest = np.sum(xs[..., :-1], axis=-1)
        den = -np.expm1(self.k * np.log1p(-np.clip(rest, 0.0, 1.0))) - np.sum(xs[..., :-1] ** self.k, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = float(self.coefficient) * num / den
        return np.where(den > 0, out, np.nan)


def z_function(D: Tree, d: int) -> ZFunction:
    if D.n_leaves < 2:
        raise DomainError("Z is defined for trees with at least two leaves")
    sig = branch_signature(D, d)
    return ZFunction(d, D.n_leaves, sig.sizes, sig.m_size)


def sigma(D: Tree, d: int) -> int:
    """Sum of multinomial(k; v) over vectors v of d entries in [0, k) summing
    to k with at least d - r zeros, where r is the number of nonempty branches."""
    return _sigma(d, D.n_leaves, sum(1 for c in D.children))


@lru_cache(maxsize=None)
def _sigma(d: int, k: int, r: int) -> int:
    if r < 2:
        raise DomainError("sigma needs at least two nonempty branches")
    total = 0
    for v in cartesian(range(k), repeat=d):
        if sum(v) == k and v.count(0) >= d - r:
            total += multinomial(v)
    return total


@dataclass(frozen=True)
class SupremumResult:
    value: Fraction | float
    status: str
    witness: tuple | str
    gap_bound: float
    cap: Fraction  # certified upper bound on the supremum

    @property
    def is_closed_form(self) -> bool:
        return self.status in CLOSED_FORMS

    @property
    def rigorous_upper(self) -> Fraction:
        return self.value if self.is_closed_form else self.cap


def _face_point(zf: ZFunction) -> tuple[Fraction, ...]:
    r = len(zf.nonzero)
    return (Fraction(1, r),) * r + (Fraction(0),) * (zf.d - r)


def _face_closed_form(zf: ZFunction) -> Fraction | None:
    """|M| / Sigma when the nonzero exponents are balanced and the bound is attained."""
    r = len(zf.nonzero)
    if r < 2 or r == zf.d or not zf.is_face_balanced():
        return None
    value = Fraction(zf.m_size, _sigma(zf.d, zf.k, r))
    return value if zf.exact(_face_point(zf)) == value else None


def _binary_polynomial(zf: ZFunction, level: Fraction):
    """P(x) = level * (1 - x^k - (1-x)^k) - coef * N(x, 1-x); Z <= level on [0,1) iff P >= 0."""
    import sympy

    x = sympy.Symbol("x")
    a, b = zf.exponents
    num = x**a * (1 - x) ** b + (x**b * (1 - x) ** a if a != b else 0)
    expr = sympy.Rational(level.numerator, level.denominator) * (1 - x**zf.k - (1 - x) ** zf.k)
    expr -= sympy.Rational(zf.coefficient.numerator, zf.coefficient.denominator) * num
    return sympy.Poly(sympy.expand(expr), x, domain="QQ")


def binary_max_check(zf: ZFunction, level: Fraction) -> Fraction | None:
    """Decide exactly whether Z <= level on [0, 1) for d = 2.

    Returns None if so, otherwise a rational point where Z exceeds ``level``.
    """
    import sympy

    if zf.d != 2:
        raise DomainError("exact univariate check needs d = 2")
    poly = _binary_polynomial(zf, level)
    if poly.is_zero:
        return None
    roots = [(Fraction(str(lo)), Fraction(str(hi))) for (lo, hi), _ in poly.intervals(eps=Fraction(1, 10**6))]
    cuts = sorted({Fraction(0), Fraction(1)} | {c for iv in roots for c in iv if 0 < c < 1})
    inside = [iv for iv in roots if iv[1] > 0 and iv[0] < 1]
    points = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        if not any(r_lo <= mid <= r_hi for r_lo, r_hi in inside):
            points.append(mid)
    for p in points:
        if poly.eval(sympy.Rational(p.numerator, p.denominator)) < 0:
            return p
    return None


def _to_simplex(y: np.ndarray) -> np.ndarray:
    a = np.abs(y)
    s = a.sum()
    return a / s if s > 0 else np.full_like(a, 1.0 / len(a))


def numeric_search(zf: ZFunction, seed: int = 0, n_starts: int = DEFAULT_STARTS, tol: float = DEFAULT_TOL):
    """Seeded multi-start Nelder-Mead maximization of Z; returns (value, point)."""
    d = zf.d
    rng = np.random.default_rng(seed)
    candidates = [np.full(d, 1.0 / d)]
    for eps in CORNER_EPSILONS:
        corner = np.full(d, eps)
        corner[-1] = 1.0 - (d - 1) * eps
        candidates.append(corner)
    starts = [np.full(d, 1.0 / d)] + list(rng.dirichlet(np.ones(d), size=n_starts))

    def neg(y):
        x = _to_simplex(y)
        if x.max() >= 1.0:
            return 0.0
        v = float(zf(x))
        return -v if np.isfinite(v) else 0.0

    for x0 in starts:
        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"xatol": tol, "fatol": tol * 1e-3, "maxiter": 4000 * d})
        candidates.append(_to_simplex(res.x))
    values = [float(zf(c)) for c in candidates]
    values = [v if np.isfinite(v) else -np.inf for v in values]
    best = int(np.argmax(values))
    return values[best], tuple(float(v) for v in candidates[best])


def z_supremum(zf: ZFunction, seed: int = 0, n_starts: int = DEFAULT_STARTS,
               tol: float = DEFAULT_TOL, numeric: bool = True) -> SupremumResult:
    """Supremum of Z over the simplex, with a status describing how it was obtained."""
    cap = zf.coefficient_cap()
    if zf.is_balanced():
        return SupremumResult(zf.uniform_value, CLOSED_BALANCED, (Fraction(1, zf.d),) * zf.d, 0.0, zf.uniform_value)
    face = _face_closed_form(zf)
    if face is not None:
        return SupremumResult(face, CLOSED_BALANCED, _face_point(zf), 0.0, face)
    if sorted(zf.nonzero) == [1, zf.k - 1] and zf.k > 2:
        value = Fraction(1, zf.k)
        return SupremumResult(value, CLOSED_ONE_LEAF, "limit eps->0+ of (eps,...,eps,1-(d-1)eps)", 0.0, value)
    if zf.d == 2 and binary_max_check(zf, zf.uniform_value) is None:
        return SupremumResult(zf.uniform_value, CLOSED_CERTIFIED, (Fraction(1, 2),) * 2, 0.0, zf.uniform_value)
    if not numeric:
        return SupremumResult(cap, UPPER_ONLY, "general cap", float(cap), cap)
    value, point = numeric_search(zf, seed, n_starts, tol)
    return SupremumResult(value, NUMERIC, point, float(cap), cap)


PROVEN = "Proven"
SUPPORTED = "NumericallySupported"
REFUTED = "Refuted"


@dataclass(frozen=True)
class SupremumCertificate:
    """Whether sup Z is attained at the uniform point."""

    status: str
    method: str
    uniform: Fraction
    witness: tuple | str | None = None
    excess: float = 0.0


def certify_supremum_condition(D: Tree, d: int, tolerance: float = DEFAULT_TOL,
                               seed: int = 0, n_starts: int = DEFAULT_STARTS) -> SupremumCertificate:
    zf = z_function(D, d)
    u = zf.uniform_value
    if zf.is_balanced():
        return SupremumCertificate(PROVEN, "muirhead", u)
    face = _face_closed_form(zf)
    if face is not None:
        # face value |M|/Sigma exceeds |M|/(d^k - d) because Sigma < d^k - d
        return SupremumCertificate(REFUTED, "face-balanced", u, _face_point(zf), float(face - u))
    if sorted(zf.nonzero) == [1, zf.k - 1] and zf.k > 2:
        value = Fraction(1, zf.k)
        if value > u:
            return SupremumCertificate(REFUTED, "one-leaf-branch", u,
                                       "limit eps->0+ of (eps,...,eps,1-(d-1)eps)", float(value - u))
        return SupremumCertificate(PROVEN, "one-leaf-branch", u)
    if d == 2:
        bad = binary_max_check(zf, u)
        if bad is None:
            return SupremumCertificate(PROVEN, "root-isolation", u)
        point = (bad, 1 - bad)
        return SupremumCertificate(REFUTED, "root-isolation", u, point, float(zf.exact(point) - u))
    value, point = numeric_search(zf, seed, n_starts, tolerance)
    excess = value - float(u)
    if excess > tolerance:
        return SupremumCertificate(REFUTED, "multistart", u, point, excess)
    return SupremumCertificate(SUPPORTED, "multistart", u, point, max(excess, 0.0))
