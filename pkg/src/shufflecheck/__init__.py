"""Permutation statistics, shuffle products and bounded shuffle-compatibility checks."""

from .perm_core import (
    Permutation,
    descent_set,
    disjoint,
    equivalent,
    inversion_set,
    parse_permutation,
    standardize,
)
from .shuffles import ShuffleSet, ValueMultiset, left_shuffle, shuffle, shuffle_count, value_multiset
from .stats import StatValue, Statistic, available, lookup, register
from .checker import (
    CompatReport,
    check_descent_statistic,
    check_left_shuffle_compatible,
    check_shuffle_compatible,
    find_witness,
)

__version__ = "0.1.0"
