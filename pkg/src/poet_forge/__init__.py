"""poet-forge: deterministic synthesis of program-execution corpora.

Three generators pair seeded program/context sampling with built-in
reference executors — decimal arithmetic expressions, implication
entailment over boolean variables, and a SQL subset over in-memory
tables — and emit reproducible JSONL example shards plus statistics.
"""

from .core import (
    CorpusStats,
    ExampleValidationError,
    PretrainExample,
    SeedSpec,
    ShardFormatError,
    collect_stats,
    emit_shard,
    iter_shard,
    read_shard,
    validate_example,
)
from .logicgen import entailed, gen_logic
from .mathgen import eval_math, gen_math
from .rng import Rng
from .validate import ValidationMismatch, recheck_example, validate_shard

__version__ = "0.1.0"

__all__ = [
    "CorpusStats",
    "ExampleValidationError",
    "PretrainExample",
    "Rng",
    "SeedSpec",
    "ShardFormatError",
    "ValidationMismatch",
    "collect_stats",
    "emit_shard",
    "entailed",
    "eval_math",
    "gen_logic",
    "gen_math",
    "iter_shard",
    "read_shard",
    "recheck_example",
    "validate_example",
    "validate_shard",
    "__version__",
]
