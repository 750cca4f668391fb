"""
Mapping module.

Lifts JSON Web API responses to RDF and applies CONSTRUCT mappings.
"""

from .lift import LiftConfig, RawNumber, lift_json, load_json_text
from .mapping import MappingSpec, apply_mapping, load_mapping_spec, map_response

__all__ = [
    "LiftConfig",
    "RawNumber",
    "lift_json",
    "load_json_text",
    "MappingSpec",
    "apply_mapping",
    "load_mapping_spec",
    "map_response",
]
