"""Presence/absence reasoning for anatomy ontologies with an EL classifier."""

from .el import ClassHierarchy, ComplementNotSupported, classify, is_subsumed_by, normalize, reason, saturate
from .eq import EqAnnotation, core_property_axioms, presence_query_classes, translate_eq
from .matrix import infer_matrix, load_matrix, matrix_stats, write_matrix
from .model import Iri, Ontology, merge_ontologies
from .oracle import diff, oracle_classify, oracle_presence
from .pipeline import anatomy_classes, generate_absence_axioms, invert_negation_hierarchy, run_pipeline
from .syntax import parse_ontology, serialize_ontology
from .vocabulary import Vocabulary

__version__ = "0.1.0"

__all__ = [
    "ClassHierarchy", "ComplementNotSupported", "EqAnnotation", "Iri", "Ontology",
    "Vocabulary", "anatomy_classes", "classify", "core_property_axioms", "diff",
    "generate_absence_axioms", "infer_matrix", "invert_negation_hierarchy",
    "is_subsumed_by", "load_matrix", "matrix_stats", "merge_ontologies", "normalize",
    "oracle_classify", "oracle_presence", "parse_ontology", "presence_query_classes",
    "reason", "run_pipeline", "saturate", "serialize_ontology", "translate_eq",
    "write_matrix",
]
