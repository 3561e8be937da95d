"""Symbolic vocabulary: literals, blocks, generalized positions, facts and rules."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

ParamValue = Union[int, Fraction, str]

ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
RESERVED = frozenset({"cs", "adv", "bool", "not"})


def normalize_value(value) -> ParamValue:
    """Coerce a parameter value to its canonical exact form."""
    if isinstance(value, bool):
        raise TypeError("booleans are not parameter values")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        return value
    raise TypeError(f"parameter values must be int, Fraction or str, got {type(value).__name__}")


def value_key(value: ParamValue):
    # numbers sort before symbols; ints and Fractions compare exactly
    if isinstance(value, str):
        return (1, value)
    return (0, value)


def format_value(value: ParamValue) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


@dataclass(frozen=True, order=True)
class Literal:
    atom: str
    negated: bool = False

    def __post_init__(self):
        if not ATOM_RE.match(self.atom) or self.atom in RESERVED:
            raise ValueError(f"invalid atom name {self.atom!r}")

    def complement(self) -> Literal:
        return Literal(self.atom, not self.negated)

    def __str__(self):
        return ("-" if self.negated else "") + self.atom

    @classmethod
    def parse(cls, text: str) -> Literal:
        text = text.strip()
        if text.startswith("-"):
            return cls(text[1:], True)
        return cls(text)


def lit(text: str) -> Literal:
    return Literal.parse(text)


@dataclass(frozen=True)
class Block:
    """A body unit ``b1, ..., bk, not c1, ..., not cm``.

    Literal order is kept for serialization only; semantic operations use the
    parts as sets.
    """

    positive: tuple[Literal, ...] = ()
    negative: tuple[Literal, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "positive", tuple(dict.fromkeys(self.positive)))
        object.__setattr__(self, "negative", tuple(dict.fromkeys(self.negative)))

    @property
    def atoms(self) -> frozenset[Literal]:
        return frozenset(self.positive) | frozenset(self.negative)

    @property
    def is_empty(self) -> bool:
        return not self.positive and not self.negative

    def positive_part(self) -> Block:
        return Block(self.positive, ())

    def negative_part(self) -> Block:
        return Block((), self.negative)

    def __sub__(self, removed: Iterable[Literal]) -> Block:
        return block_difference(self, removed)

    def __str__(self):
        parts = [str(x) for x in self.positive] + [f"not {x}" for x in self.negative]
        return ", ".join(parts)

    @classmethod
    def parse(cls, text: str) -> Block:
        pos, neg = [], []
        for item in filter(None, (s.strip() for s in text.split(","))):
            if item.startswith("not "):
                neg.append(Literal.parse(item[4:]))
            else:
                pos.append(Literal.parse(item))
        return cls(tuple(pos), tuple(neg))


def block_difference(block: Block, removed: Iterable[Literal]) -> Block:
    removed = frozenset(removed)
    return Block(
        tuple(x for x in block.positive if x not in removed),
        tuple(x for x in block.negative if x not in removed),
    )


@dataclass(frozen=True)
class Position:
    """A generalized position: integer time step plus named exact parameters."""

    step: int
    params: tuple[tuple[str, ParamValue], ...] = ()

    def __post_init__(self):
        if not isinstance(self.step, int) or isinstance(self.step, bool) or self.step < 0:
            raise ValueError(f"step must be a non-negative integer, got {self.step!r}")
        items = self.params.items() if isinstance(self.params, Mapping) else self.params
        canon = tuple(sorted((str(k), normalize_value(v)) for k, v in items))
        if len({k for k, _ in canon}) != len(canon):
            raise ValueError("duplicate parameter name")
        object.__setattr__(self, "params", canon)

    @classmethod
    def at(cls, step: int, **params: ParamValue) -> Position:
        return cls(step, tuple(params.items()))

    def get(self, name: str, default=None):
        for k, v in self.params:
            if k == name:
                return v
        return default

    def replace(self, step: int | None = None, **params: ParamValue) -> Position:
        merged = dict(self.params)
        merged.update(params)
        return Position(self.step if step is None else step, tuple(merged.items()))

    def sort_key(self):
        return (self.step, tuple((k, value_key(v)) for k, v in self.params))

    def __lt__(self, other: Position):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return " ".join([f"step={self.step}"] + [f"{k}={format_value(v)}" for k, v in self.params])


@dataclass(frozen=True)
class Fact:
    literal: Literal
    position: Position

    def sort_key(self):
        return (self.position.sort_key(), str(self.literal))

    def __lt__(self, other: Fact):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return f"{self.literal} @ {self.position}"


Interpretation = frozenset  # frozenset[Fact]


def interpretation(facts: Iterable[Fact] = ()) -> frozenset[Fact]:
    return frozenset(facts)


def facts_at(M: Iterable[Fact], p: Position) -> frozenset[Fact]:
    """M|_p: the facts of M located at ``p``."""
    return frozenset(f for f in M if f.position == p)


def literals_of(M: Iterable[Fact]) -> frozenset[Literal]:
    return frozenset(f.literal for f in M)


def layer(M: Iterable[Fact], step: int) -> frozenset[Fact]:
    """N[i]: the facts of M at time step ``step``."""
    return frozenset(f for f in M if f.position.step == step)


def up_to(M: Iterable[Fact], step: int) -> frozenset[Fact]:
    return frozenset(f for f in M if f.position.step <= step)


def is_consistent(M: Iterable[Fact]) -> bool:
    M = set(M)
    return not any(f.literal.negated and Fact(f.literal.complement(), f.position) in M for f in M)


def sorted_facts(M: Iterable[Fact]) -> list[Fact]:
    return sorted(M, key=Fact.sort_key)


def interpretation_key(M: Iterable[Fact]):
    return tuple(f.sort_key() for f in sorted_facts(M))


# ---------------------------------------------------------------------------
# Rules and programs


@dataclass(frozen=True)
class AlgorithmRef:
    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(format_arg(a) for a in self.args)})"


def format_arg(arg) -> str:
    if isinstance(arg, frozenset):
        return "{" + ", ".join(format_value(v) for v in sorted(arg, key=value_key)) + "}"
    return format_value(arg)


class AdvancingAlgorithmRef(AlgorithmRef):
    pass


class BooleanAlgorithmRef(AlgorithmRef):
    pass


class ConstraintSetRef(AlgorithmRef):
    pass


@dataclass(frozen=True)
class AdvancingRule:
    head: Literal
    blocks: tuple[Block, ...]
    cs: ConstraintSetRef
    adv: AdvancingAlgorithmRef

    is_advancing = True

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("a rule needs at least one block")

    @property
    def arity(self) -> int:
        return len(self.blocks)

    def __str__(self):
        return f"{self.head} :- {' ; '.join(str(b) for b in self.blocks)} : cs {self.cs}, adv {self.adv}."


@dataclass(frozen=True)
class StationaryRule:
    head: Literal
    blocks: tuple[Block, ...]
    cs: ConstraintSetRef
    bool: BooleanAlgorithmRef

    is_advancing = False

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("a rule needs at least one block")

    @property
    def arity(self) -> int:
        return len(self.blocks)

    def __str__(self):
        return f"{self.head} :- {' ; '.join(str(b) for b in self.blocks)} : cs {self.cs}, bool {self.bool}."


Rule = Union[AdvancingRule, StationaryRule]


def body_positive(rule) -> list[Block]:
    """body(r)+ as the list of per-block positive parts."""
    return [b.positive_part() for b in rule.blocks]


def body_negative(rule) -> list[Block]:
    return [b.negative_part() for b in rule.blocks]


def rule_literals(rule) -> frozenset[Literal]:
    out = {rule.head}
    for b in rule.blocks:
        out |= b.atoms
    return frozenset(out)


@dataclass(frozen=True)
class InitialCondition:
    positions: frozenset[Position] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "positions", frozenset(self.positions))

    def __iter__(self):
        return iter(sorted(self.positions))

    def __len__(self):
        return len(self.positions)

    def __contains__(self, p):
        return p in self.positions

    def at_step(self, step: int) -> frozenset[Position]:
        return frozenset(p for p in self.positions if p.step == step)

    def check_discrete(self):
        if not self.at_step(0):
            raise ValueError("initial condition needs a position at step 0")


class Program:
    """A set of hybrid rules bound to the registry that resolves their references.

    The semantics layer only talks to programs through ``rules``,
    ``cs_tuples``, ``advance`` and ``holds``; materialized rule sets in
    :mod:`hybridasp.splitting` implement the same four members.
    """

    def __init__(self, rules: Iterable[Rule] = (), registry=None, delta_t=None):
        from .registry import Registry, default_registry

        rules = tuple(dict.fromkeys(rules))
        if registry is None:
            registry = default_registry(1 if delta_t is None else delta_t)
        elif delta_t is not None and Fraction(delta_t) != registry.delta_t:
            registry = Registry(delta_t, registry.context.max_denominator)
        for r in rules:
            registry.validate(r.cs)
            registry.validate(r.adv if r.is_advancing else r.bool)
            if registry.arity(r.cs) != r.arity:
                raise ValueError(f"rule {r}: {len(r.blocks)} block(s) but constraint set arity {registry.arity(r.cs)}")
        self.rules = rules
        self.registry = registry

    @property
    def delta_t(self) -> Fraction:
        return self.registry.delta_t

    @property
    def literals(self) -> frozenset[Literal]:
        """Lit_At(P): both polarities of every atom occurring in the program."""
        atoms = {x.atom for r in self.rules for x in rule_literals(r)}
        return frozenset(Literal(a, neg) for a in atoms for neg in (False, True))

    def cs_tuples(self, rule, domain) -> tuple:
        return self.registry.cs_enumerate(rule.cs, domain)

    def advance(self, rule, tup) -> frozenset[Position]:
        return self.registry.eval_advancing(rule.adv, tup)

    def holds(self, rule, tup) -> bool:
        return self.registry.eval_boolean(rule.bool, tup)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return frozenset(self.rules) == frozenset(other.rules) and self.delta_t == other.delta_t

    def __hash__(self):
        return hash((frozenset(self.rules), self.delta_t))

    def __repr__(self):
        return f"Program({len(self.rules)} rules, delta_t={self.delta_t})"
