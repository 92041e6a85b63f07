from frolov_cubature.differences.boundedness import (
    ChangeOfVariableOperator,
    DegenerateSeminormError,
    MultiplierOperator,
    boundedness_ratio,
)
from frolov_cubature.differences.operators import (
    MIN_QUAD_POINTS,
    DifferenceQuery,
    active_axes,
    mixed_difference,
    rectangular_mean,
    univariate_difference,
)
from frolov_cubature.differences.seminorms import (
    BESOV,
    TRIEBEL_LIZORKIN,
    SeminormResult,
    SmoothnessParams,
    besov_seminorm,
    seminorm,
    seminorm_domain,
    tl_seminorm,
)
