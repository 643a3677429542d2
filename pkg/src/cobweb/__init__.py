"""Cobweb posets: exact F-nomials, incidence algebra, and layer tilings."""

from .combinatorics import (
    equal_block_count,
    equal_block_recurrence_step,
    f_factorial,
    f_falling,
    fnomial,
    phi_lambda,
    phi_lambda_factorial,
)
from .exceptions import (
    BudgetExceeded,
    CobwebError,
    InternalInconsistency,
    InvalidParameter,
    NonpositiveTerm,
    OutOfRange,
    StructuralObstruction,
)
from .poset import CobwebPoset, Vertex, build
from .properties import check_admissible, check_gcd_morphic, search_admissible, search_gcd_morphic
from .sequences import FSequence, make_builtin, make_custom, parse_seq_spec
from .tiling import LayerGrid, Tiling, make_problem

__version__ = "0.1.0"
