"""Verification of DMN decision tables and graphs against a description-logic ontology."""

__version__ = "0.1.0"

from .dkbfile import DkbError, emit_dkb, parse_dkb
from .encoding import Dkb, encode_dkb
from .fixtures import load_fixture
from .reasoner import Reasoner, ResourceLimitError, concept_satisfiable, instance_check, kb_satisfiable
from .tasks import (
    Task, TaskVerdict, check_any_hit, check_completeness, check_coverage,
    check_determinability, check_io, check_priority_hit, check_unique_hit,
)

__all__ = [
    "Dkb", "DkbError", "Reasoner", "ResourceLimitError", "Task", "TaskVerdict",
    "check_any_hit", "check_completeness", "check_coverage", "check_determinability",
    "check_io", "check_priority_hit", "check_unique_hit", "concept_satisfiable",
    "emit_dkb", "encode_dkb", "instance_check", "kb_satisfiable", "load_fixture", "parse_dkb",
]
