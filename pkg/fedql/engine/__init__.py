"""
Query evaluation module.

This module evaluates SPARQL ASTs over in-memory graphs.
"""

from .expressions import TYPE_ERROR, eval_expression, effective_boolean_value
from .evaluator import (
    ServiceExecutor,
    eval_bgp,
    eval_construct,
    eval_group,
    eval_select,
    failing_executor,
    merge,
)

__all__ = [
    "TYPE_ERROR",
    "eval_expression",
    "effective_boolean_value",
    "ServiceExecutor",
    "eval_bgp",
    "eval_construct",
    "eval_group",
    "eval_select",
    "failing_executor",
    "merge",
]
