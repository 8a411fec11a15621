"""Order-Regular binary matrices: verification, constructions and search."""

from .matrix import (
    BinaryMatrix,
    MatrixFormatError,
    Pattern,
    canonicalize,
    emit_matrix,
    glue,
    is_canonical,
    negate_columns,
    parse_matrix,
    reverse,
    tilde,
)
from .regularity import (
    Constraint,
    ConstraintMap,
    RegularityKind,
    Verdict,
    check,
    constraint_map,
    constraint_satisfied,
    or_star_bijection,
)

__version__ = "0.1.0"
