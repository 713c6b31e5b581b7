"""SQL corpus pipeline: ingestion, flattening, templates, build steps."""

from .build import (
    DEFAULT_OBFUSCATION_MAP,
    RESERVED_KEYWORDS,
    build_sql_gen,
    build_sql_sel,
    deobfuscate_keywords,
    obfuscate_examples,
    obfuscate_keywords,
    selection_tags,
)
from .flatten import (
    DEFAULT_TOKEN_BUDGET,
    CellSpan,
    ContextFormatError,
    FlattenBudgetError,
    FlattenedDb,
    flatten,
    parse_flattened,
)
from .templates import (
    DEFAULT_TEMPLATES,
    SHAPES,
    NoCompatibleColumnsError,
    QueryTemplate,
    SlotSpec,
    instantiate,
    load_templates,
    template_from_record,
    template_to_record,
)

__all__ = [
    "CellSpan",
    "ContextFormatError",
    "DEFAULT_OBFUSCATION_MAP",
    "DEFAULT_TEMPLATES",
    "DEFAULT_TOKEN_BUDGET",
    "FlattenBudgetError",
    "FlattenedDb",
    "NoCompatibleColumnsError",
    "QueryTemplate",
    "RESERVED_KEYWORDS",
    "SHAPES",
    "SlotSpec",
    "build_sql_gen",
    "build_sql_sel",
    "deobfuscate_keywords",
    "flatten",
    "instantiate",
    "load_templates",
    "obfuscate_examples",
    "obfuscate_keywords",
    "parse_flattened",
    "selection_tags",
    "template_from_record",
    "template_to_record",
]
