"""gdslab: exact generalized dimension subgroup computations.

D(n, a) = F cap (1 + a + f^n) in truncated free group rings, denominator
subgroups in basic-commutator coordinates, Dold-Puppe style derived
functors from finite complexes, and checkers tying the two sides together.
"""

from .intlinalg import (
    AbGroup,
    Lattice,
    NotSublattice,
    hermite_normal_form,
    lattice_preimage,
    quotient_invariants,
    smith_normal_form,
)
from .freering import (
    IdealExpr,
    RingContext,
    RingElement,
    Word,
    deviation,
    eval_ideal,
    get_context,
    left_partial,
    membership,
    parse_ideal_expr,
    parse_word,
    right_partial,
    t_polynomial,
    validate_divisors,
)
from .nilpotent import (
    CommutatorBasis,
    SubgroupSpec,
    basic_commutators,
    subgroup_lattice,
    word_log,
)
from .functors import (
    BoundsRecord,
    ChainComplex,
    Resolution,
    functor_on_free,
    functor_on_map,
    h5,
    h7,
    jean_l1sp3,
    l2_ls3,
    l_sp2,
    l_sp3,
    resolution,
    tor,
)
from .dimsub import (
    DimensionProblem,
    VerifyReport,
    THEOREM_IDS,
    dimension_lattice,
    problem,
    q_group,
    quotient,
    verify_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "AbGroup",
    "BoundsRecord",
    "ChainComplex",
    "CommutatorBasis",
    "DimensionProblem",
    "IdealExpr",
    "Lattice",
    "NotSublattice",
    "Resolution",
    "RingContext",
    "RingElement",
    "SubgroupSpec",
    "THEOREM_IDS",
    "VerifyReport",
    "Word",
    "basic_commutators",
    "deviation",
    "dimension_lattice",
    "eval_ideal",
    "functor_on_free",
    "functor_on_map",
    "get_context",
    "h5",
    "h7",
    "hermite_normal_form",
    "jean_l1sp3",
    "l2_ls3",
    "l_sp2",
    "l_sp3",
    "lattice_preimage",
    "left_partial",
    "membership",
    "parse_ideal_expr",
    "parse_word",
    "problem",
    "q_group",
    "quotient",
    "quotient_invariants",
    "resolution",
    "right_partial",
    "smith_normal_form",
    "subgroup_lattice",
    "t_polynomial",
    "tor",
    "validate_divisors",
    "verify_theorem",
    "word_log",
]
