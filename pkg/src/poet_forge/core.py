"""Shared corpus schema: examples, seeding, shard files, statistics.

A shard is UTF-8 JSONL, one example per line, fields in the fixed order
{id, task, context, program, result, tags?, meta}. Emission is
byte-deterministic for identical input, so corpora can be diffed and
checksummed across machines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

TASKS = ("math", "logic", "sql_gen", "sql_sel")
TAG_IN, TAG_OUT = "I", "O"

_MAX_U64 = (1 << 64) - 1


class ExampleValidationError(ValueError):
    """An example violates the schema invariants; carries the offending id."""

    def __init__(self, example_id: str, message: str) -> None:
        super().__init__(f"example {example_id!r}: {message}")
        self.example_id = example_id


class ShardFormatError(ValueError):
    """A shard line cannot be parsed; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one shard of a deterministic run.

    Identical SeedSpec (plus generator config) implies byte-identical
    output. Shards partition the global example indices by stride, so the
    union of shards 0..k-1 equals the single-shard corpus of the same
    total size.
    """

    master_seed: int
    shard_index: int = 0
    shard_count: int = 1

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed <= _MAX_U64:
            raise ValueError(f"master_seed out of u64 range: {self.master_seed}")
        if self.shard_count < 1:
            raise ValueError(f"shard_count must be >= 1, got {self.shard_count}")
        if not 0 <= self.shard_index < self.shard_count:
            raise ValueError(
                f"shard_index {self.shard_index} not in [0, {self.shard_count})"
            )

    def global_indices(self, total: int) -> range:
        """Global example indices covered by this shard for a corpus of `total`."""
        return range(self.shard_index, total, self.shard_count)


@dataclass(frozen=True)
class PretrainExample:
    """One corpus record: program, program context, execution result.

    `tags` is the per-token I/O sequence and is present exactly for the
    sql_sel task, aligned with the whitespace tokens of `context`.
    """

    id: str
    task: str
    context: str
    program: str
    result: str
    tags: tuple[str, ...] | None = None
    meta: dict[str, str] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "task": self.task,
            "context": self.context,
            "program": self.program,
            "result": self.result,
        }
        if self.tags is not None:
            out["tags"] = list(self.tags)
        out["meta"] = {k: self.meta[k] for k in sorted(self.meta)}
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PretrainExample":
        if not isinstance(obj, dict):
            raise ValueError("example must be a JSON object")
        required = ("id", "task", "context", "program", "result", "meta")
        missing = [k for k in required if k not in obj]
        if missing:
            raise ValueError(f"missing fields: {', '.join(missing)}")
        extra = set(obj) - set(required) - {"tags"}
        if extra:
            raise ValueError(f"unknown fields: {', '.join(sorted(extra))}")
        tags = obj.get("tags")
        return cls(
            id=obj["id"],
            task=obj["task"],
            context=obj["context"],
            program=obj["program"],
            result=obj["result"],
            tags=tuple(tags) if tags is not None else None,
            meta=dict(obj["meta"]),
        )


def validate_example(ex: PretrainExample) -> None:
    """Check the schema invariants, raising ExampleValidationError."""
    if not ex.id:
        raise ExampleValidationError(ex.id, "empty id")
    if ex.task not in TASKS:
        raise ExampleValidationError(ex.id, f"unknown task {ex.task!r}")
    if not ex.result:
        raise ExampleValidationError(ex.id, "empty result")
    if (ex.tags is not None) != (ex.task == "sql_sel"):
        raise ExampleValidationError(
            ex.id, "tags must be present exactly for task sql_sel"
        )
    if ex.tags is not None:
        n_tokens = len(ex.context.split())
        if len(ex.tags) != n_tokens:
            raise ExampleValidationError(
                ex.id,
                f"tags length {len(ex.tags)} != context token count {n_tokens}",
            )
        bad = set(ex.tags) - {TAG_IN, TAG_OUT}
        if bad:
            raise ExampleValidationError(ex.id, f"invalid tag values {sorted(bad)}")
    for k, v in ex.meta.items():
        if not isinstance(k, str) or not isinstance(v, str):
            raise ExampleValidationError(ex.id, "meta must map string to string")


def emit_shard(examples: Iterable[PretrainExample], path: str | Path) -> int:
    """Write validated examples as JSONL, returning the line count.

    Output is byte-identical for identical input. Raises
    ExampleValidationError (naming the id) on the first invalid example;
    nothing is left behind on failure.
    """
    path = Path(path)
    seen: set[str] = set()
    tmp = path.with_name(path.name + ".tmp")
    count = 0
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            for ex in examples:
                validate_example(ex)
                if ex.id in seen:
                    raise ExampleValidationError(ex.id, "duplicate id within shard")
                seen.add(ex.id)
                fh.write(json.dumps(ex.to_json_dict(), ensure_ascii=False,
                                    separators=(",", ":")))
                fh.write("\n")
                count += 1
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    tmp.replace(path)
    return count


def iter_shard(path: str | Path) -> Iterator[tuple[int, PretrainExample]]:
    """Yield (line_number, example) pairs; malformed lines raise ShardFormatError."""
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                raise ShardFormatError(line_number, "blank line")
            try:
                obj = json.loads(line)
                ex = PretrainExample.from_json_dict(obj)
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                raise ShardFormatError(line_number, str(exc)) from exc
            yield line_number, ex


def read_shard(path: str | Path) -> list[PretrainExample]:
    return [ex for _, ex in iter_shard(path)]


@dataclass
class CorpusStats:
    """One-pass aggregate statistics over a shard."""

    example_count: int = 0
    label_histogram: dict[str, int] = field(default_factory=dict)
    program_length_histogram: dict[str, int] = field(default_factory=dict)
    truncated_db_count: int = 0

    def to_json_dict(self) -> dict:
        return {
            "example_count": self.example_count,
            "label_histogram": {
                k: self.label_histogram[k] for k in sorted(self.label_histogram)
            },
            "program_length_histogram": {
                k: self.program_length_histogram[k]
                for k in sorted(self.program_length_histogram, key=int)
            },
            "truncated_db_count": self.truncated_db_count,
        }


def collect_stats(path: str | Path) -> CorpusStats:
    """Scan a shard once, histogramming labels and program lengths."""
    stats = CorpusStats()
    for _, ex in iter_shard(path):
        stats.example_count += 1
        stats.label_histogram[ex.result] = stats.label_histogram.get(ex.result, 0) + 1
        bucket = str(len(ex.program.split()))
        stats.program_length_histogram[bucket] = (
            stats.program_length_histogram.get(bucket, 0) + 1
        )
        if ex.meta.get("dropped_rows", "0") != "0":
            stats.truncated_db_count += 1
    return stats
