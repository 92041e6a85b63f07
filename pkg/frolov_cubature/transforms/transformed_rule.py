import json
from dataclasses import dataclass
from typing import Any, Optional

from frolov_cubature.rules.cubature import CubatureRule


CHANGE_OF_VARIABLE = "change_of_variable"
PERIODIZED = "periodized"


@dataclass(eq=False)
class TransformedRule(CubatureRule):
    """A cubature rule derived from `base` by a boundary modifier. Nodes and weights are
    materialized; nodes whose modified weight is zero are dropped."""

    base: Optional[CubatureRule] = None
    kind: str = CHANGE_OF_VARIABLE
    kernel: Any = None
    dropped_nodes: int = 0
    outside_support: int = 0

    def __post_init__(self):
        super().__post_init__()
        if self.kind not in (CHANGE_OF_VARIABLE, PERIODIZED):
            raise ValueError(f"Unknown transform kind {self.kind}.")
        if self.base is not None:
            assert self.n + self.dropped_nodes == self.base.n

    def provenance(self) -> dict:
        return {
            "kind": self.kind,
            "kernel": self.kernel.asdict() if self.kernel is not None else None,
            "base_label": self.base.label if self.base is not None else "",
            "dropped_nodes": self.dropped_nodes,
        }

    def provenance_json(self) -> str:
        return json.dumps(self.provenance())

    def __str__(self) -> str:
        return (
            f"TransformedRule(kind={self.kind}, base={self.base.label if self.base else ''}, "
            f"n={self.n}, dropped={self.dropped_nodes})"
        )
