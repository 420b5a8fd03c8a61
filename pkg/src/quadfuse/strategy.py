"""Resolution strategies and policies."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .model import Node


class Cardinality(Enum):
    SINGLEVALUED = "SINGLEVALUED"
    MANYVALUED = "MANYVALUED"


class ErrorStrategy(Enum):
    """What mediating functions do with values they cannot aggregate."""

    RETURN_ALL = "RETURN_ALL"
    IGNORE = "IGNORE"


@dataclass(frozen=True)
class ResolutionStrategy:
    function: str = "ALL"
    cardinality: Cardinality = Cardinality.SINGLEVALUED
    error_strategy: ErrorStrategy = ErrorStrategy.RETURN_ALL
    params: Mapping[str, str] = field(default_factory=dict)
    agree_coefficient: float = 4.0

    def __post_init__(self):
        if not self.agree_coefficient > 0:
            raise ValueError("agree_coefficient must be positive")
        object.__setattr__(self, "function", self.function.upper())
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "_hash", hash((self.function, self.cardinality, self.error_strategy,
                                                tuple(sorted(self.params.items())), self.agree_coefficient)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class ResolutionPolicy:
    """Default strategy plus per-property overrides keyed by the property URI as written."""

    default: ResolutionStrategy = field(default_factory=ResolutionStrategy)
    per_property: Mapping[Node, ResolutionStrategy] = field(default_factory=dict)

    def many_valued(self) -> set[Node]:
        return {p for p, s in self.per_property.items() if s.cardinality is Cardinality.MANYVALUED}
