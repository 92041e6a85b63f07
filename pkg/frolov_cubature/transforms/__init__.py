from frolov_cubature.transforms.change_of_variable import change_of_variable_point, transform_rule
from frolov_cubature.transforms.periodization import (
    DEFAULT_DELTA,
    PeriodizerKernel,
    apply_multiplier,
    build_periodizer,
    partition_check,
    periodize_rule,
)
from frolov_cubature.transforms.transformed_rule import TransformedRule
