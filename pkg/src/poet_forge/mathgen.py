"""Addition/subtraction programs over contexts of named decimal variables.

Values are multiples of 0.1 stored as integer tenths, so evaluation is
exact integer arithmetic and the rendered one-decimal results carry no
floating-point error. Contexts mix the variables the program needs with
configurable irrelevant bindings, shuffled together.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import PretrainExample, SeedSpec
from .rng import Rng

TENTHS_MAX = 10000  # 1000.0
MAX_OPERATORS = 2
MAX_IRRELEVANT_VARS = 30

_DOMAIN_TAG = 1


class MathEvalError(ValueError):
    pass


@dataclass(frozen=True)
class MathExpr:
    """Signed sum of variables; `terms` is ((sign, name), ...), first sign "+"."""

    terms: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not 2 <= len(self.terms) <= MAX_OPERATORS + 1:
            raise ValueError(f"expression needs 2..3 terms, got {len(self.terms)}")
        if self.terms[0][0] != "+":
            raise ValueError("first term must carry sign '+'")
        for sign, _ in self.terms:
            if sign not in ("+", "-"):
                raise ValueError(f"bad sign {sign!r}")


@dataclass(frozen=True)
class MathContext:
    """Ordered (name, tenths-value) bindings, necessary and irrelevant mixed."""

    bindings: tuple[tuple[str, int], ...]
    necessary_count: int
    irrelevant_count: int

    def __post_init__(self) -> None:
        if not 0 <= self.irrelevant_count <= MAX_IRRELEVANT_VARS:
            raise ValueError(f"irrelevant_count out of range: {self.irrelevant_count}")
        names = [name for name, _ in self.bindings]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        for name, value in self.bindings:
            if not 0 <= value <= TENTHS_MAX:
                raise ValueError(f"value of {name!r} out of [0, {TENTHS_MAX}] tenths")


@dataclass(frozen=True)
class MathResult:
    value_tenths: int

    def render(self) -> str:
        return render_tenths(self.value_tenths)


def render_tenths(value: int) -> str:
    """Tenths integer as a one-decimal string: 1807 -> '180.7', -5 -> '-0.5'."""
    sign = "-" if value < 0 else ""
    whole, frac = divmod(abs(value), 10)
    return f"{sign}{whole}.{frac}"


def parse_tenths(text: str) -> int:
    whole, _, frac = text.strip().partition(".")
    if len(frac) != 1 or not frac.isdigit():
        raise MathEvalError(f"not a one-decimal number: {text!r}")
    negative = whole.startswith("-")
    magnitude = abs(int(whole)) * 10 + int(frac)
    return -magnitude if negative else magnitude


def var_name(index: int) -> str:
    """0-based index to a short name: a..z, aa, ab, ..."""
    index += 1
    name = ""
    while index:
        index, r = divmod(index - 1, 26)
        name = chr(ord("a") + r) + name
    return name


def eval_math(expr: MathExpr, ctx: MathContext) -> MathResult:
    """Exact signed sum of the bound tenths values."""
    values = dict(ctx.bindings)
    total = 0
    for sign, name in expr.terms:
        if name not in values:
            raise MathEvalError(f"unbound variable {name!r}")
        total += values[name] if sign == "+" else -values[name]
    return MathResult(total)


def render_math_program(expr: MathExpr) -> str:
    parts = [expr.terms[0][1]]
    for sign, name in expr.terms[1:]:
        parts.append(sign)
        parts.append(name)
    return " ".join(parts)


def render_math_context(ctx: MathContext) -> str:
    return " ".join(
        f"{name} = {render_tenths(value)} ;" for name, value in ctx.bindings
    )


def parse_math_program(text: str) -> MathExpr:
    tokens = text.split()
    if not tokens or len(tokens) % 2 == 0:
        raise MathEvalError(f"malformed program: {text!r}")
    terms = [("+", tokens[0])]
    for i in range(1, len(tokens), 2):
        if tokens[i] not in ("+", "-"):
            raise MathEvalError(f"bad operator {tokens[i]!r} in {text!r}")
        terms.append((tokens[i], tokens[i + 1]))
    return MathExpr(tuple(terms))


def parse_math_bindings(text: str) -> tuple[tuple[str, int], ...]:
    """Inverse of render_math_context, without the noise bookkeeping."""
    tokens = text.split()
    if len(tokens) % 4 != 0:
        raise MathEvalError(f"malformed context: {text!r}")
    bindings = []
    for i in range(0, len(tokens), 4):
        name, eq, value, term = tokens[i : i + 4]
        if eq != "=" or term != ";":
            raise MathEvalError(f"malformed binding near token {i} of {text!r}")
        bindings.append((name, parse_tenths(value)))
    return tuple(bindings)


def sample_math_pair(rng: Rng, irrelevant_vars: int) -> tuple[MathExpr, MathContext]:
    """Draw one (expression, context) pair.

    Draw order is part of the determinism contract: operator count, then
    the sign of each non-leading term, then every binding value in name
    order (necessary first), then the binding shuffle.
    """
    n_ops = 1 + rng.below(MAX_OPERATORS)
    terms = [("+", var_name(0))]
    for t in range(1, n_ops + 1):
        terms.append(("+-"[rng.below(2)], var_name(t)))
    total = n_ops + 1 + irrelevant_vars
    bindings = [(var_name(i), rng.below(TENTHS_MAX + 1)) for i in range(total)]
    rng.shuffle(bindings)
    ctx = MathContext(
        bindings=tuple(bindings),
        necessary_count=n_ops + 1,
        irrelevant_count=irrelevant_vars,
    )
    return MathExpr(tuple(terms)), ctx


def gen_math(
    seed: SeedSpec, count: int, irrelevant_vars: int = 0
) -> list[PretrainExample]:
    """Generate this shard's slice of a `count`-example math corpus."""
    if not 0 <= irrelevant_vars <= MAX_IRRELEVANT_VARS:
        raise ValueError(f"irrelevant_vars must be in 0..30, got {irrelevant_vars}")
    examples = []
    for g in seed.global_indices(count):
        rng = Rng(seed.master_seed, _DOMAIN_TAG, g)
        expr, ctx = sample_math_pair(rng, irrelevant_vars)
        result = eval_math(expr, ctx)
        examples.append(
            PretrainExample(
                id=f"math-{seed.master_seed:016x}-{g:08d}",
                task="math",
                context=render_math_context(ctx),
                program=render_math_program(expr),
                result=result.render(),
                meta={
                    "seed": str(seed.master_seed),
                    "irrelevant_vars": str(irrelevant_vars),
                },
            )
        )
    return examples
