"""Exact leaf-induced subtree counts, densities and inducibility bounds for d-ary trees."""

__version__ = "0.1.0"

from .bounds import (
    Bound,
    BoundReport,
    best_lower,
    best_upper,
    complete_inducibility,
    equal_branch_bounds,
    eta,
    even_inducibility,
    exact_inducibility,
    inducibility_report,
    lower_bound_star,
    lower_bound_thm11,
    phi,
    upper_bound_balanced,
    upper_bound_cor5,
    upper_bound_prop4,
)
from .counting import CopyCounter, branch_signature, count_copies, count_copies_bruteforce, density
from .errors import ArityError, CapExceeded, DomainError, InducibilityError, TreeSyntaxError
from .search import conjecture_check, convergence_table, max_density, sandwich_check
from .supremum import certify_supremum_condition, sigma, z_function, z_supremum
from .trees import (
    EMPTY,
    LEAF,
    Tree,
    canonicalize,
    caterpillar,
    complete_tree,
    enumerate_trees,
    even_tree,
    induce_subtree,
    is_isomorphic,
    node,
    parse_tree,
    serialize,
    star,
    strict_even_tree,
)
