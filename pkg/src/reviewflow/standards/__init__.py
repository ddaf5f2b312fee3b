from .model import (
    AttributeItem,
    Category,
    Diagnostic,
    Registry,
    Standard,
    StandardKind,
    validate_registry,
    validate_standard,
)
from .parser import parse_standard
from .registry import builtin_standards_dir, load_builtin_registry, load_registry, validate_directory
from .serializer import serialize_standard

__all__ = [
    "AttributeItem",
    "Category",
    "Diagnostic",
    "Registry",
    "Standard",
    "StandardKind",
    "builtin_standards_dir",
    "load_builtin_registry",
    "load_registry",
    "parse_standard",
    "serialize_standard",
    "validate_directory",
    "validate_registry",
    "validate_standard",
]
