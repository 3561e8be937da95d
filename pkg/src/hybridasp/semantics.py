"""Hybrid ASP model theory: satisfaction with initial conditions, the reduct
P^{M,I}, the one-step provability operator and the answer-set test.

Functions taking a program ``P`` need only ``P.rules``, ``P.cs_tuples``,
``P.advance`` and ``P.holds``, so they work on registry-backed
:class:`~hybridasp.model.Program` objects and on materialized rule sets alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import Block, Fact, InitialCondition, Literal, Position, is_consistent

DEFAULT_MAX_ITERATIONS = 10_000


class IterationLimitError(Exception):
    pass


def _positions(I) -> frozenset[Position]:
    if isinstance(I, InitialCondition):
        return I.positions
    return frozenset(I)


def gp(M: Iterable[Fact]) -> frozenset[Position]:
    return frozenset(f.position for f in M)


def gp_i(M: Iterable[Fact], I) -> frozenset[Position]:
    return gp(M) | _positions(I)


def satisfies_block(M, I, B: Block, p: Position, *, domain=None) -> bool:
    """M |=_I (B, p).

    ``domain`` may carry a precomputed GP_I(M).
    """
    M = M if isinstance(M, (set, frozenset)) else frozenset(M)
    if any(Fact(x, p) in M for x in B.negative):
        return False
    if B.positive:
        return all(Fact(x, p) in M for x in B.positive)
    if domain is None:
        domain = gp_i(M, I)
    return p in domain


def satisfies_body(M, I, blocks: Sequence[Block], tup: Sequence[Position], *, domain=None) -> bool:
    if len(blocks) != len(tup):
        raise ValueError(f"{len(blocks)} blocks but {len(tup)} positions")
    M = M if isinstance(M, (set, frozenset)) else frozenset(M)
    if domain is None:
        domain = gp_i(M, I)
    return all(satisfies_block(M, I, b, p, domain=domain) for b, p in zip(blocks, tup))


def _negatives_hold(M, blocks, tup) -> bool:
    return not any(Fact(x, p) in M for b, p in zip(blocks, tup) for x in b.negative)


@dataclass(frozen=True)
class ReductRule:
    """r^{M,I}: positive blocks plus the materialized O^{M,I} (and A^{M,I})."""

    head: Literal
    blocks: tuple[Block, ...]
    is_advancing: bool
    tuples: tuple[tuple[Position, ...], ...]
    outputs: tuple[frozenset[Position], ...] | None = None

    def advance(self, tup) -> frozenset[Position]:
        return self.outputs[self.tuples.index(tuple(tup))]


@dataclass(frozen=True)
class HornProgram:
    rules: tuple[ReductRule, ...] = ()

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def _restricted(P, r, M, domain):
    """O^{M,I} as (tuples, outputs-or-None)."""
    tuples, outputs = [], []
    for tup in P.cs_tuples(r, domain):
        if not _negatives_hold(M, r.blocks, tup):
            continue
        if r.is_advancing:
            out = P.advance(r, tup) & domain
            if not out:
                continue
            outputs.append(out)
        elif not P.holds(r, tup):
            continue
        tuples.append(tup)
    return tuple(tuples), (tuple(outputs) if r.is_advancing else None)


def is_inapplicable(P, r, M, I) -> bool:
    """True iff every tuple of CS(r) over GP_I(M) fails a negative block,
    misses GP_I(M) with its advancing output, or is rejected by Bool(r)."""
    M = frozenset(M)
    tuples, _ = _restricted(P, r, M, gp_i(M, I))
    return not tuples


def reduct_rule(P, r, M, I) -> ReductRule:
    M = frozenset(M)
    tuples, outputs = _restricted(P, r, M, gp_i(M, I))
    if not tuples:
        raise ValueError(f"rule {r} is inapplicable for the given interpretation")
    return ReductRule(r.head, tuple(b.positive_part() for b in r.blocks), r.is_advancing, tuples, outputs)


def reduct_program(P, M, I) -> HornProgram:
    M = frozenset(M)
    domain = gp_i(M, I)
    out = []
    for r in P.rules:
        tuples, outputs = _restricted(P, r, M, domain)
        if tuples:
            out.append(ReductRule(r.head, tuple(b.positive_part() for b in r.blocks), r.is_advancing, tuples, outputs))
    return HornProgram(tuple(out))


def one_step(Ph: HornProgram, I, M) -> frozenset[Fact]:
    """T[Ph, I](M)."""
    M = frozenset(M)
    domain = gp_i(M, I)
    derived = set(M)
    for r in Ph.rules:
        for k, tup in enumerate(r.tuples):
            if not all(p in domain for p in tup):
                continue
            if not satisfies_body(M, I, r.blocks, tup, domain=domain):
                continue
            if r.is_advancing:
                derived.update(Fact(r.head, q) for q in r.outputs[k])
            else:
                derived.add(Fact(r.head, tup[-1]))
    return frozenset(derived)


def least_fixpoint(Ph: HornProgram, I, max_iterations: int = DEFAULT_MAX_ITERATIONS) -> frozenset[Fact]:
    M: frozenset[Fact] = frozenset()
    for _ in range(max_iterations):
        nxt = one_step(Ph, I, M)
        if nxt == M:
            return M
        M = nxt
    raise IterationLimitError(f"no fixpoint within {max_iterations} iterations")


def fixpoint_trace(Ph: HornProgram, I) -> list[frozenset[Fact]]:
    """The chain T^0(empty), T^1(empty), ... up to the fixpoint."""
    chain = [frozenset()]
    while True:
        nxt = one_step(Ph, I, chain[-1])
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


def is_answer_set(P, I, M) -> bool:
    M = frozenset(M)
    if not is_consistent(M):
        return False
    return least_fixpoint(reduct_program(P, M, I), I) == M
