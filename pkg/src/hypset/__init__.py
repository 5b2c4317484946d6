"""Exact coarse-geometry computations for subsets of free groups.

Words are tuples of signed integers over a fixed alphabet; subgroups are
folded core graphs; rational sets are canonical automata over reduced
words.  On top of those sit truncated checks for quasiconvexity,
covering relations, quasidensity, limit-set censuses and hulls, with
every reported witness chosen shortlex-least so runs are reproducible.
"""

from .freewords import (
    Alphabet,
    ParseError,
    Word,
    ball,
    ball_size,
    conjugacy_class,
    conjugate_test,
    cyclic_reduce,
    distance,
    geodesic,
    gromov_product,
    inverse,
    normalize,
    power,
    primitive_root,
    product,
    shortlex_key,
    sphere,
)
from .geometry import (
    BrokenLineResult,
    DeltaEstimate,
    HausdorffEstimate,
    PreceqResult,
    QcEstimate,
    QuasidenseResult,
    QuasigeodesicResult,
    SetOracle,
    TruncationParams,
    WordTrie,
    broken_line_check,
    conj_witness,
    conjugacy_oracle,
    default_slack,
    delta_four_point,
    explicit_oracle,
    hausdorff_truncated,
    preceq_check,
    quasiconvexity_constant,
    quasidense_check,
    quasigeodesic_check,
    thin_triangle_defect,
    union_oracle,
)
from .ratsets import (
    HullSlice,
    LimitComparison,
    LimitPrefixSet,
    ReducedAutomaton,
    TameResult,
    boolean,
    complement,
    hull_slice,
    inverse_automaton,
    limit_compare,
    reduced_product,
    sampled_limit_prefixes,
    tame_check,
    translated,
)
from .stallings import (
    CommensuratorScan,
    CosetTable,
    DoubleCosetClass,
    SubgroupGraph,
    WidthResult,
    commensurator,
    conjugates_into,
    coset_representative,
    double_cosets,
    power_conjugates_into,
    relative_index,
    width_lower_bound,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "ParseError",
    "Word",
    "ball",
    "ball_size",
    "conjugacy_class",
    "conjugate_test",
    "cyclic_reduce",
    "distance",
    "geodesic",
    "gromov_product",
    "inverse",
    "normalize",
    "power",
    "primitive_root",
    "product",
    "shortlex_key",
    "sphere",
    "BrokenLineResult",
    "DeltaEstimate",
    "HausdorffEstimate",
    "PreceqResult",
    "QcEstimate",
    "QuasidenseResult",
    "QuasigeodesicResult",
    "SetOracle",
    "TruncationParams",
    "WordTrie",
    "broken_line_check",
    "conj_witness",
    "conjugacy_oracle",
    "default_slack",
    "delta_four_point",
    "explicit_oracle",
    "hausdorff_truncated",
    "preceq_check",
    "quasiconvexity_constant",
    "quasidense_check",
    "quasigeodesic_check",
    "thin_triangle_defect",
    "union_oracle",
    "HullSlice",
    "LimitComparison",
    "LimitPrefixSet",
    "ReducedAutomaton",
    "TameResult",
    "boolean",
    "complement",
    "hull_slice",
    "inverse_automaton",
    "limit_compare",
    "reduced_product",
    "sampled_limit_prefixes",
    "tame_check",
    "translated",
    "CommensuratorScan",
    "CosetTable",
    "DoubleCosetClass",
    "SubgroupGraph",
    "WidthResult",
    "commensurator",
    "conjugates_into",
    "coset_representative",
    "double_cosets",
    "power_conjugates_into",
    "relative_index",
    "width_lower_bound",
    "__version__",
]
