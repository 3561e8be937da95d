"""Layer-by-layer answer-set computation for discrete-time hybrid programs.

Starting from the step-0 positions of the initial condition, each layer picks
the next generalized positions produced by active advancing rules (through an
advancing selector F) and fixes the state at every such position by choosing
an answer set of a small classical program (through a stationary selector D).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

from .asp import GuardError, NormalProgram, NormalRule, n_answer_sets, n_is_answer_set
from .model import Block, Fact, InitialCondition, Literal, Position, interpretation_key
from .semantics import gp_i, is_answer_set, satisfies_block, satisfies_body

DEFAULT_MAX_BRANCHES = 10**5

AdvancingSelector = Callable[[frozenset, frozenset], frozenset]
StationarySelector = Callable[[frozenset, Position, NormalProgram], Optional[frozenset]]


# ---------------------------------------------------------------------------
# selectors


def select_all(N, Z):
    return frozenset(Z)


def select_none(N, Z):
    return frozenset()


class SeededRandomSelector:
    """Keeps each candidate position independently with probability ``p``."""

    def __init__(self, p=Fraction(1, 2), seed: int = 0):
        self.p = float(Fraction(p))
        self.rng = random.Random(seed)

    def __call__(self, N, Z):
        return frozenset(z for z in sorted(Z) if self.rng.random() < self.p)


def first_answer_set(N, z, program: NormalProgram):
    found = n_answer_sets(program)
    return found[0] if found else None


class SeededRandomStationary:
    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def __call__(self, N, z, program: NormalProgram):
        found = n_answer_sets(program)
        return self.rng.choice(found) if found else None


ADVANCING_SELECTORS = ("select_all", "select_none", "seeded_random")
STATIONARY_SELECTORS = ("first", "seeded_random")


def advancing_selector(name: str, seed: int | None = None, p=Fraction(1, 2)) -> AdvancingSelector:
    if name == "select_all":
        return select_all
    if name == "select_none":
        return select_none
    if name == "seeded_random":
        if seed is None:
            raise ValueError("seeded_random needs a seed")
        return SeededRandomSelector(p, seed)
    raise ValueError(f"unknown advancing selector {name!r}")


def stationary_selector(name: str, seed: int | None = None) -> StationarySelector:
    if name == "first":
        return first_answer_set
    if name == "seeded_random":
        if seed is None:
            raise ValueError("seeded_random needs a seed")
        return SeededRandomStationary(seed)
    raise ValueError(f"unknown stationary selector {name!r}")


# ---------------------------------------------------------------------------
# advancing side


def _tuples_ending_at_step(P, r, domain, k):
    return [t for t in P.cs_tuples(r, domain) if t[-1].step == k]


def rules_adv_at_time(P, N, J, k: int) -> list:
    """Advancing rules whose whole body N satisfies at some CS tuple over
    GP_J(N) whose last position has step k."""
    N = frozenset(N)
    domain = gp_i(N, J)
    out = []
    for r in P.rules:
        if r.is_advancing and any(
            satisfies_body(N, J, r.blocks, t, domain=domain) for t in _tuples_ending_at_step(P, r, domain, k)
        ):
            out.append(r)
    return out


def active_advancing(P, N, J, tup) -> list:
    """Advancing rules active at ``tup`` relative to N."""
    N = frozenset(N)
    tup = tuple(tup)
    domain = gp_i(N, J)
    if not all(p in domain for p in tup):
        return []
    out = []
    for r in P.rules:
        if r.is_advancing and r.arity == len(tup) and tup in set(P.cs_tuples(r, domain)):
            if satisfies_body(N, J, r.blocks, tup, domain=domain):
                out.append(r)
    return out


def next_gp_at_tuple(P, N, J, tup) -> frozenset[Position]:
    out = set()
    for r in active_advancing(P, N, J, tup):
        out |= P.advance(r, tup)
    return frozenset(out)


def frontier(P, N, J, k: int) -> dict[Position, frozenset[Literal]]:
    """Every position reachable from step k, mapped to the advancing heads
    derived there (the union before any selector is applied)."""
    N = frozenset(N)
    domain = gp_i(N, J)
    heads: dict[Position, set] = {}
    for r in P.rules:
        if not r.is_advancing:
            continue
        for t in _tuples_ending_at_step(P, r, domain, k):
            if satisfies_body(N, J, r.blocks, t, domain=domain):
                for q in P.advance(r, t):
                    heads.setdefault(q, set()).add(r.head)
    return {q: frozenset(h) for q, h in heads.items()}


def next_gp(P, F: AdvancingSelector, N, J, k: int) -> frozenset[Position]:
    N = frozenset(N)
    Z = frozenset(frontier(P, N, J, k))
    chosen = frozenset(F(N, Z))
    if not chosen <= Z:
        raise ValueError("advancing selector returned positions outside its input")
    return chosen


def head_adv(P, N, J, q: Position) -> frozenset[Literal]:
    if q.step == 0:
        return frozenset()
    return frontier(P, N, J, q.step - 1).get(q, frozenset())


# ---------------------------------------------------------------------------
# stationary side


def rules_stat(P, N, J, tup) -> list:
    """Stationary rules with tup in CS and Bool whose first n-1 blocks N satisfies.
    The last block is left for the per-position classical program."""
    N = frozenset(N)
    tup = tuple(tup)
    domain = gp_i(N, J)
    out = []
    for r in P.rules:
        if r.is_advancing or r.arity != len(tup):
            continue
        if tup not in set(P.cs_tuples(r, domain | {tup[-1]})) or not P.holds(r, tup):
            continue
        if all(satisfies_block(N, J, b, p, domain=domain) for b, p in zip(r.blocks[:-1], tup[:-1])):
            out.append(r)
    return out


def red_app_rule(r) -> NormalRule:
    return NormalRule(r.head, r.blocks[-1])


def red_app_program(P, N, J, z: Position) -> NormalProgram:
    """The classical rules ``head :- B_n`` of every stationary rule active at
    some tuple over GP_J(N) ending in z."""
    N = frozenset(N)
    domain = gp_i(N, J)
    rules = set()
    for r in P.rules:
        if r.is_advancing:
            continue
        for t in P.cs_tuples(r, domain | {z}):
            if t[-1] != z or not P.holds(r, t):
                continue
            if all(satisfies_block(N, J, b, p, domain=domain) for b, p in zip(r.blocks[:-1], t[:-1])):
                rules.add(red_app_rule(r))
                break
    return NormalProgram(frozenset(rules), P.literals)


def position_program(P, N, J, z: Position, heads=None) -> NormalProgram:
    """Red_App(P, N, z) plus the advancing heads at z as facts."""
    base = red_app_program(P, N, J, z)
    if heads is None:
        heads = head_adv(P, N, J, z)
    facts = frozenset(NormalRule(h, Block()) for h in heads)
    return NormalProgram(base.rules | facts, base.universe)


# ---------------------------------------------------------------------------
# the layer loop


@dataclass(frozen=True)
class LayerTrace:
    k: int
    positions: tuple[Position, ...]
    programs: tuple[tuple[Position, NormalProgram], ...]
    chosen: tuple[tuple[Position, Optional[frozenset]], ...]
    facts: frozenset[Fact]
    failed: bool = False

    def __post_init__(self):
        assert all(f.position.step == self.k for f in self.facts)


def _choose(D, N, z, program):
    pick = D(N, z, program)
    if pick is not None and not n_is_answer_set(program, pick):
        raise ValueError(f"stationary selector returned a non-answer set at {z}")
    return pick


def compute_y0(P, J, D: StationarySelector) -> LayerTrace:
    J = J if isinstance(J, InitialCondition) else InitialCondition(frozenset(J))
    empty: frozenset[Fact] = frozenset()
    zs = tuple(sorted(J.at_step(0)))
    programs, chosen, facts, failed = [], [], set(), False
    for z in zs:
        prog = red_app_program(P, empty, J, z)
        pick = _choose(D, empty, z, prog)
        programs.append((z, prog))
        chosen.append((z, pick))
        if pick is None:
            failed = True
        else:
            facts.update(Fact(l, z) for l in pick)
    return LayerTrace(0, zs, tuple(programs), tuple(chosen), frozenset(facts), failed)


def step(P, J, F: AdvancingSelector, D: StationarySelector, N, k: int) -> LayerTrace:
    """Compute Z_{k+1} and Y_{k+1} from N = Y_0 | ... | Y_k."""
    N = frozenset(N)
    heads = frontier(P, N, J, k)
    Z = frozenset(F(N, frozenset(heads)))
    if not Z <= frozenset(heads):
        raise ValueError("advancing selector returned positions outside its input")
    zs = tuple(sorted(Z))
    programs, chosen, facts = [], [], set()
    failed = False
    for z in zs:
        prog = position_program(P, N, J, z, heads[z])
        pick = _choose(D, N, z, prog)
        programs.append((z, prog))
        chosen.append((z, pick))
        if pick is None:
            failed = True
        else:
            facts.update(Fact(l, z) for l in pick)
    # one position without an answer set empties the whole layer
    Y = frozenset() if failed else frozenset(facts)
    return LayerTrace(k + 1, zs, tuple(programs), tuple(chosen), Y, failed)


@dataclass(frozen=True)
class RunResult:
    interpretation: frozenset[Fact]
    layers: tuple[LayerTrace, ...]
    valid: bool


def run(P, J, F: AdvancingSelector, D: StationarySelector, horizon: int) -> RunResult:
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    J = J if isinstance(J, InitialCondition) else InitialCondition(frozenset(J))
    J.check_discrete()
    layers = [compute_y0(P, J, D)]
    N = layers[0].facts
    k = 0
    while k < horizon and (k == 0 or layers[-1].facts):
        tr = step(P, J, F, D, N, k)
        layers.append(tr)
        N = N | tr.facts
        k += 1
        if not tr.facts:
            break
    return RunResult(N, tuple(layers), is_answer_set(P, J, N))


# ---------------------------------------------------------------------------
# exhaustive enumeration over selector behaviours


def _subsets(items):
    for mask in range(1 << len(items)):
        yield frozenset(x for i, x in enumerate(items) if mask >> i & 1)


def enumerate_candidates(P, J, horizon: int, max_branches: int = DEFAULT_MAX_BRANCHES) -> list[frozenset[Fact]]:
    """Every union of layers some pair of selectors (F, D) can produce."""
    J = J if isinstance(J, InitialCondition) else InitialCondition(frozenset(J))
    J.check_discrete()
    empty: frozenset[Fact] = frozenset()
    branches = 0
    results: set[frozenset[Fact]] = set()

    def bump(n=1):
        nonlocal branches
        branches += n
        if branches > max_branches:
            raise GuardError(f"more than {max_branches} selector branches")

    def descend(N, k, Yk):
        if k >= horizon or (k > 0 and not Yk):
            results.add(N)
            return
        heads = frontier(P, N, J, k)
        zs = sorted(heads)
        programs = {z: position_program(P, N, J, z, heads[z]) for z in zs}
        options = {z: n_answer_sets(programs[z]) for z in zs}
        for S in _subsets(zs):
            bump()
            chosen = sorted(S)
            if not chosen or any(not options[z] for z in chosen):
                results.add(N)
                continue
            for picks in product(*(options[z] for z in chosen)):
                bump()
                Y = frozenset(Fact(l, z) for z, pick in zip(chosen, picks) for l in pick)
                descend(N | Y, k + 1, Y)

    zs0 = sorted(J.at_step(0))
    options0 = [n_answer_sets(red_app_program(P, empty, J, z)) or [None] for z in zs0]
    for picks in product(*options0):
        bump()
        Y0 = frozenset(Fact(l, z) for z, pick in zip(zs0, picks) if pick is not None for l in pick)
        descend(Y0, 0, Y0)
    return sorted(results, key=interpretation_key)


def enumerate_all(P, J, horizon: int, max_branches: int = DEFAULT_MAX_BRANCHES) -> list[frozenset[Fact]]:
    """Answer sets reachable by the layer algorithm, each validated against the
    full stable-model definition."""
    return [M for M in enumerate_candidates(P, J, horizon, max_branches) if is_answer_set(P, J, M)]
