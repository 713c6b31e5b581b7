"""Implication-statement instances over 5 boolean variables, labeled exactly.

The entailment checker enumerates all 2^5 assignments; each statement is
reduced to a 32-bit truth mask (bit a = truth under assignment a), so a
conclusion is necessarily implied iff the premise mask conjunction has no
bit outside the conclusion mask. No solver dependency.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import PretrainExample, SeedSpec
from .rng import Rng

NUM_VARS = 5
MAX_PAIRS = 8
VAR_PAIRS = tuple(combinations(range(NUM_VARS), 2))  # the 10 unordered pairs

# The four statement shapes over a pair (p, q), as (antecedent negated,
# consequent negated): p->q, p->~q, ~p->~q, ~p->q.
STATEMENT_SHAPES = ((False, False), (False, True), (True, True), (True, False))

# Weight of drawing i+1 statement pairs. A lone statement (k=1) has no
# premises and can never be entailed, so the default starts at k=2; this
# puts the corpus True rate near 0.14, inside the accepted band.
DEFAULT_PAIR_WEIGHTS = (0, 1, 1, 1, 1, 1, 1, 1)

_DOMAIN_TAG = 2
_FULL_MASK = (1 << (1 << NUM_VARS)) - 1

# mask bit a is set iff variable v is true under assignment a
_VAR_MASKS = tuple(
    sum(1 << a for a in range(1 << NUM_VARS) if (a >> v) & 1) for v in range(NUM_VARS)
)


class StatementParseError(ValueError):
    pass


@dataclass(frozen=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.var < NUM_VARS:
            raise ValueError(f"variable index out of range: {self.var}")

    def truth_mask(self) -> int:
        mask = _VAR_MASKS[self.var]
        return (~mask & _FULL_MASK) if self.negated else mask


@dataclass(frozen=True)
class ImplicationStmt:
    antecedent: Literal
    consequent: Literal

    def __post_init__(self) -> None:
        if self.antecedent.var == self.consequent.var:
            raise ValueError("antecedent and consequent must use distinct variables")

    def truth_mask(self) -> int:
        a = self.antecedent.truth_mask()
        return (~a & _FULL_MASK) | self.consequent.truth_mask()


def entailed(premises: Iterable[ImplicationStmt], conclusion: ImplicationStmt) -> bool:
    """True iff every assignment satisfying all premises satisfies the conclusion."""
    satisfying = _FULL_MASK
    for stmt in premises:
        satisfying &= stmt.truth_mask()
    return satisfying & ~conclusion.truth_mask() & _FULL_MASK == 0


def render_literal(lit: Literal) -> str:
    return f"~ p{lit.var}" if lit.negated else f"p{lit.var}"


def render_stmt(stmt: ImplicationStmt) -> str:
    return f"{render_literal(stmt.antecedent)} -> {render_literal(stmt.consequent)}"


def _parse_literal(tokens: list[str], pos: int) -> tuple[Literal, int]:
    negated = False
    if pos < len(tokens) and tokens[pos] == "~":
        negated = True
        pos += 1
    if pos >= len(tokens):
        raise StatementParseError("truncated literal")
    tok = tokens[pos]
    if len(tok) < 2 or tok[0] != "p" or not tok[1:].isdigit():
        raise StatementParseError(f"bad literal token {tok!r}")
    return Literal(int(tok[1:]), negated), pos + 1


def parse_stmt(text: str) -> ImplicationStmt:
    """Inverse of render_stmt."""
    tokens = text.split()
    antecedent, pos = _parse_literal(tokens, 0)
    if pos >= len(tokens) or tokens[pos] != "->":
        raise StatementParseError(f"expected '->' in {text!r}")
    consequent, pos = _parse_literal(tokens, pos + 1)
    if pos != len(tokens):
        raise StatementParseError(f"trailing tokens in {text!r}")
    return ImplicationStmt(antecedent, consequent)


def parse_premises(context: str) -> list[ImplicationStmt]:
    if not context:
        return []
    return [parse_stmt(part) for part in context.split(" ; ")]


def make_statement(pair: tuple[int, int], shape: int) -> ImplicationStmt:
    ant_neg, cons_neg = STATEMENT_SHAPES[shape]
    return ImplicationStmt(Literal(pair[0], ant_neg), Literal(pair[1], cons_neg))


def sample_logic_instance(
    rng: Rng, pair_weights: Sequence[int] | None = None
) -> tuple[list[ImplicationStmt], ImplicationStmt, bool]:
    """Draw (premises, conclusion, label) for one instance.

    `pair_weights` reweights the statement-count distribution (index i is
    the weight of i+1 pairs); defaults to DEFAULT_PAIR_WEIGHTS.
    """
    if pair_weights is None:
        pair_weights = DEFAULT_PAIR_WEIGHTS
    if len(pair_weights) != MAX_PAIRS:
        raise ValueError(f"pair_weights needs {MAX_PAIRS} entries")
    total = sum(pair_weights)
    pick = rng.below(total)
    k = 1
    for i, w in enumerate(pair_weights):
        if pick < w:
            k = i + 1
            break
        pick -= w
    pair_indices = rng.sample(len(VAR_PAIRS), k)
    statements = [
        make_statement(VAR_PAIRS[i], rng.below(len(STATEMENT_SHAPES)))
        for i in pair_indices
    ]
    conclusion_at = rng.below(k)
    conclusion = statements.pop(conclusion_at)
    label = entailed(statements, conclusion)
    return statements, conclusion, label


def gen_logic(
    seed: SeedSpec, count: int, pair_weights: Sequence[int] | None = None
) -> list[PretrainExample]:
    """Generate this shard's slice of a `count`-example logic corpus."""
    examples = []
    for g in seed.global_indices(count):
        rng = Rng(seed.master_seed, _DOMAIN_TAG, g)
        premises, conclusion, label = sample_logic_instance(rng, pair_weights)
        examples.append(
            PretrainExample(
                id=f"logic-{seed.master_seed:016x}-{g:08d}",
                task="logic",
                context=" ; ".join(render_stmt(s) for s in premises),
                program=render_stmt(conclusion),
                result="True" if label else "False",
                meta={"seed": str(seed.master_seed)},
            )
        )
    return examples
