"""Ground normal programs with classical negation: reduct, least model, answer sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .model import Block, Literal

DEFAULT_MAX_LITERALS = 20


class GuardError(Exception):
    """A desk-scale size guard was exceeded."""


@dataclass(frozen=True)
class NormalRule:
    head: Literal
    body: Block = field(default_factory=Block)

    @property
    def is_horn(self) -> bool:
        return not self.body.negative

    def __str__(self):
        body = str(self.body)
        return f"{self.head} :- {body}." if body else f"{self.head} :- ."


@dataclass(frozen=True)
class NormalProgram:
    rules: frozenset[NormalRule] = frozenset()
    universe: frozenset[Literal] = frozenset()

    def __post_init__(self):
        rules = frozenset(self.rules)
        object.__setattr__(self, "rules", rules)
        occurring = set()
        for r in rules:
            occurring.add(r.head)
            occurring |= r.body.atoms
        object.__setattr__(self, "universe", frozenset(self.universe) | occurring)

    @property
    def is_horn(self) -> bool:
        return all(r.is_horn for r in self.rules)

    def sorted_rules(self) -> list[NormalRule]:
        return sorted(self.rules, key=str)

    def __str__(self):
        return " ".join(str(r) for r in self.sorted_rules())


def program(*rules: NormalRule, universe: Iterable[Literal] = ()) -> NormalProgram:
    return NormalProgram(frozenset(rules), frozenset(universe))


def n_satisfies(M: Iterable[Literal], B: Block) -> bool:
    M = M if isinstance(M, (set, frozenset)) else set(M)
    return all(x in M for x in B.positive) and not any(x in M for x in B.negative)


def n_gl_reduct(P: NormalProgram, M: Iterable[Literal]) -> NormalProgram:
    M = frozenset(M)
    kept = frozenset(
        NormalRule(r.head, r.body.positive_part())
        for r in P.rules
        if not any(x in M for x in r.body.negative)
    )
    return NormalProgram(kept, P.universe)


def n_least_model(P: NormalProgram) -> frozenset[Literal]:
    if not P.is_horn:
        raise ValueError("least model requested for a program with negative bodies")
    model: set[Literal] = set()
    changed = True
    while changed:
        changed = False
        for r in P.rules:
            if r.head not in model and n_satisfies(model, r.body):
                model.add(r.head)
                changed = True
    return frozenset(model)


def consistent(M: Iterable[Literal]) -> bool:
    M = set(M)
    return not any(x.negated and x.complement() in M for x in M)


def n_is_answer_set(P: NormalProgram, M: Iterable[Literal]) -> bool:
    M = frozenset(M)
    return consistent(M) and n_least_model(n_gl_reduct(P, M)) == M


def answer_set_order(M: frozenset[Literal]):
    return (len(M), sorted(str(x) for x in M))


def n_answer_sets(P: NormalProgram, max_literals: int = DEFAULT_MAX_LITERALS) -> list[frozenset[Literal]]:
    """Every answer set, by exhaustive subset check, ordered by size then lexicographically.

    Candidates range over subsets of the head literals: an answer set is the
    least model of a reduct, and that model only contains heads.
    """
    if len(P.universe) > max_literals:
        raise GuardError(f"universe has {len(P.universe)} literals, limit is {max_literals}")
    heads = sorted({r.head for r in P.rules})
    found = []
    for size in range(len(heads) + 1):
        for combo in combinations(heads, size):
            M = frozenset(combo)
            if n_is_answer_set(P, M):
                found.append(M)
    return sorted(found, key=answer_set_order)
