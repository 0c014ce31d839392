"""Class-model translation, materialization and structural checks."""

from cwp_verifier.schema.export import CWP, export_schema, schema_to_store
from cwp_verifier.schema.materialize import apply_defaults, materialize
from cwp_verifier.schema.semantic import (
    Characteristic,
    PartWholeStrategy,
    SemanticSchema,
    TranslationOptions,
    ValuePartitionStrategy,
)
from cwp_verifier.schema.structural import StructuralViolation, ViolationKind, check_structural
from cwp_verifier.schema.translator import (
    TRANSITIVE_CARDINALITY_CONFLICT,
    build_property_chains,
    translate,
    translate_value_partition,
)
from cwp_verifier.schema.uml import (
    Association,
    AssociationKind,
    Attribute,
    Generalization,
    Multiplicity,
    UmlClass,
    UmlClassModel,
    ValuePartition,
)

__all__ = [
    "CWP",
    "TRANSITIVE_CARDINALITY_CONFLICT",
    "Association",
    "AssociationKind",
    "Attribute",
    "Characteristic",
    "Generalization",
    "Multiplicity",
    "PartWholeStrategy",
    "SemanticSchema",
    "StructuralViolation",
    "TranslationOptions",
    "UmlClass",
    "UmlClassModel",
    "ValuePartition",
    "ValuePartitionStrategy",
    "ViolationKind",
    "apply_defaults",
    "build_property_chains",
    "check_structural",
    "export_schema",
    "materialize",
    "schema_to_store",
    "translate",
    "translate_value_partition",
]
