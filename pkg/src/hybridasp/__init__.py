"""Hybrid answer-set programs over generalized positions: semantics, a
brute-force oracle, splitting-set operators and a layer-by-layer solver."""

from .model import (
    AdvancingRule,
    Block,
    Fact,
    InitialCondition,
    Literal,
    Position,
    Program,
    StationaryRule,
)

__all__ = [
    "AdvancingRule",
    "Block",
    "Fact",
    "InitialCondition",
    "Literal",
    "Position",
    "Program",
    "StationaryRule",
]
