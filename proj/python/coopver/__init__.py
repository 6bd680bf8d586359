"""Cooperative verification of integer programs."""

from ._coopver import (
    Error,
    Program,
    invariant_holds,
    map_property,
    oracle_verdict,
    run_helper,
    verify,
    witness_is_trivial,
)

__all__ = [
    "Error",
    "Program",
    "invariant_holds",
    "map_property",
    "oracle_verdict",
    "run_helper",
    "verify",
    "witness_is_trivial",
]
