"""Seeded random instances for the regression and acceptance suites."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .asp import GuardError, NormalProgram, NormalRule
from .model import (
    AdvancingAlgorithmRef,
    AdvancingRule,
    Block,
    BooleanAlgorithmRef,
    ConstraintSetRef,
    InitialCondition,
    Literal,
    Position,
    Program,
    StationaryRule,
)
from .oracle import FiniteUniverse, derivable_facts, reachable_universe

ATOMS = ("a", "b", "c", "d", "e")


@dataclass(frozen=True)
class CorpusConfig:
    max_atoms: int = 3
    max_rules: int = 5
    max_arity: int = 2
    max_horizon: int = 3
    min_positions: int = 2
    max_positions: int = 12
    max_facts: int = 16
    p_advancing: float = 0.4
    p_arity2: float = 0.3
    p_negation: float = 0.3
    p_classical: float = 0.1
    p_two_initial: float = 0.2


@dataclass(frozen=True)
class Case:
    seed: int
    program: Program
    init: InitialCondition
    horizon: int
    universe: FiniteUniverse = field(compare=False)


def _literal(rng: random.Random, atoms, cfg: CorpusConfig) -> Literal:
    return Literal(rng.choice(atoms), rng.random() < cfg.p_classical)


def _block(rng, atoms, cfg) -> Block:
    pos, neg = [], []
    for _ in range(rng.choice((0, 1, 1, 2))):
        x = _literal(rng, atoms, cfg)
        (neg if rng.random() < cfg.p_negation else pos).append(x)
    return Block(tuple(pos), tuple(neg))


def _constraint(rng, arity) -> ConstraintSetRef:
    if arity == 1:
        return rng.choice([ConstraintSetRef("any1")] * 3 + [ConstraintSetRef("time_eq", (rng.randrange(3),))])
    k = rng.randrange(2)
    return rng.choice(
        [ConstraintSetRef("any2"), ConstraintSetRef("consecutive2"), ConstraintSetRef("window", (k, k + 1))]
    )


def _advancing(rng) -> AdvancingAlgorithmRef:
    roll = rng.random()
    if roll < 0.6:
        return AdvancingAlgorithmRef("tick")
    if roll < 0.8:
        return AdvancingAlgorithmRef("set_param", ("mode", rng.choice(("on", "off"))))
    return AdvancingAlgorithmRef("fanout", ("mode", frozenset({"on", "off"})))


def _boolean(rng) -> BooleanAlgorithmRef:
    roll = rng.random()
    if roll < 0.7:
        return BooleanAlgorithmRef("true")
    if roll < 0.8:
        return BooleanAlgorithmRef("false")
    if roll < 0.9:
        return BooleanAlgorithmRef("step_eq", (rng.randrange(3),))
    return BooleanAlgorithmRef("param_eq", ("mode", "on"))


def random_program(rng: random.Random, cfg: CorpusConfig = CorpusConfig()) -> Program:
    atoms = ATOMS[: rng.randint(1, cfg.max_atoms)]
    rules = []
    for _ in range(rng.randint(1, cfg.max_rules)):
        head = _literal(rng, atoms, cfg)
        arity = 2 if cfg.max_arity >= 2 and rng.random() < cfg.p_arity2 else 1
        blocks = tuple(_block(rng, atoms, cfg) for _ in range(arity))
        cs = _constraint(rng, arity)
        if rng.random() < cfg.p_advancing:
            rules.append(AdvancingRule(head, blocks, cs, _advancing(rng)))
        else:
            rules.append(StationaryRule(head, blocks, cs, _boolean(rng)))
    return Program(rules)


def random_init(rng: random.Random, cfg: CorpusConfig = CorpusConfig()) -> InitialCondition:
    ps = {Position(0)}
    if rng.random() < cfg.p_two_initial:
        ps.add(Position.at(0, mode="on"))
    return InitialCondition(frozenset(ps))


def random_case(seed: int, cfg: CorpusConfig = CorpusConfig()) -> Case | None:
    """One instance, or None when it falls outside the size bounds."""
    rng = random.Random(seed)
    P = random_program(rng, cfg)
    J = random_init(rng, cfg)
    horizon = rng.randint(1, cfg.max_horizon)
    try:
        universe = reachable_universe(P, J, horizon, cfg.max_positions)
    except GuardError:
        return None
    if len(universe.positions) < cfg.min_positions:
        return None
    if len(derivable_facts(P, universe)) > cfg.max_facts:
        return None
    return Case(seed, P, J, horizon, universe)


def generate_corpus(n: int, seed: int = 0, cfg: CorpusConfig = CorpusConfig()) -> list[Case]:
    """The first n in-bounds instances drawn from consecutive sub-seeds."""
    out = []
    sub = seed * 1_000_003
    while len(out) < n:
        case = random_case(sub, cfg)
        sub += 1
        if case is not None:
            out.append(case)
    return out


# ---------------------------------------------------------------------------
# classical programs


def random_normal_program(rng: random.Random, n_atoms: int = 4, n_rules: int = 6, p_classical: float = 0.1) -> NormalProgram:
    atoms = ATOMS[:n_atoms]
    cfg = CorpusConfig(p_classical=p_classical, p_negation=0.4)
    rules = []
    for _ in range(rng.randint(1, n_rules)):
        rules.append(NormalRule(_literal(rng, atoms, cfg), _block(rng, atoms, cfg)))
    return NormalProgram(frozenset(rules))


def embed_normal(NP: NormalProgram) -> tuple[Program, InitialCondition]:
    """Each rule h :- B becomes a stationary arity-1 rule over any position,
    evaluated at a single step-0 position."""
    rules = [StationaryRule(r.head, (r.body,), ConstraintSetRef("any1"), BooleanAlgorithmRef("true")) for r in NP.rules]
    return Program(rules), InitialCondition(frozenset({Position(0)}))
