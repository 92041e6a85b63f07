from frolov_cubature.rules.lattice import (
    LatticeGenerator,
    RootRefinementError,
    admissibility_check,
    build_frolov_generator,
)
from frolov_cubature.rules.cubature import (
    CubatureRule,
    EmptyRuleError,
    fibonacci_rule,
    frolov_rule,
    scale_rule_to_box,
    tensor_gauss_rule,
)
