from typing import Tuple

import numpy as np

from frolov_cubature.rules.cubature import CubatureRule
from frolov_cubature.transforms.transformed_rule import CHANGE_OF_VARIABLE, TransformedRule


def _map_nodes(kernel, nodes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mapped = kernel.value(nodes)
    factors = np.prod(kernel.density(nodes), axis=-1)
    return mapped, factors


def change_of_variable_point(kernel, x) -> Tuple[np.ndarray, float]:
    """x -> (psi(x_1), ..., psi(x_d)) together with |det psi'(x)| = prod_i psi'(x_i).

    `kernel` is anything exposing coordinate-wise `value` and `density`
    (KernelPsiK or CInfKernel)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    mapped, factor = _map_nodes(kernel, x[None, :])
    return mapped[0], float(factor[0])


def transform_rule(base: CubatureRule, kernel) -> TransformedRule:
    """Q^psi(f) = sum_i lambda_i prod_j psi'(x^i_j) f(psi(x^i))."""
    if not np.all(np.isfinite(base.nodes)):
        raise ValueError("Base rule nodes must be finite.")

    mapped, factors = _map_nodes(kernel, base.nodes)
    weights = base.weights * factors
    keep = weights != 0.0

    return TransformedRule(
        nodes=mapped[keep],
        weights=weights[keep],
        label=f"cov[{base.label}]",
        base=base,
        kind=CHANGE_OF_VARIABLE,
        kernel=kernel,
        dropped_nodes=int((~keep).sum()),
    )
