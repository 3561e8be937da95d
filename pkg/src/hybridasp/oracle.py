"""Brute-force answer-set enumeration over a finite reachable universe.

This is the ground truth the incremental solver and the splitting operators
are checked against, so it deliberately uses nothing but the definitions in
:mod:`hybridasp.semantics`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .asp import GuardError
from .model import Fact, InitialCondition, Literal, Position, interpretation_key, is_consistent
from .semantics import gp_i, is_answer_set, least_fixpoint, reduct_program

DEFAULT_MAX_POSITIONS = 64
DEFAULT_MAX_FACTS = 22


@dataclass(frozen=True)
class FiniteUniverse:
    positions: frozenset[Position]
    literals: frozenset[Literal]
    horizon: int

    @property
    def facts(self) -> frozenset[Fact]:
        return frozenset(Fact(l, p) for p in self.positions for l in self.literals)

    def positions_up_to(self, step: int) -> frozenset[Position]:
        return frozenset(p for p in self.positions if p.step <= step)

    def truncate(self, horizon: int) -> FiniteUniverse:
        return FiniteUniverse(self.positions_up_to(horizon), self.literals, horizon)

    def __contains__(self, p: Position) -> bool:
        return p in self.positions


def _init_positions(J) -> frozenset[Position]:
    return J.positions if isinstance(J, InitialCondition) else frozenset(J)


def reachable_universe(P, J, horizon: int, max_positions: int = DEFAULT_MAX_POSITIONS) -> FiniteUniverse:
    """Close J under every advancing rule applied to every admissible tuple,
    ignoring bodies, keeping positions with step <= horizon."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    positions = {p for p in _init_positions(J) if p.step <= horizon}
    advancing = [r for r in P.rules if r.is_advancing]
    changed = True
    while changed:
        changed = False
        domain = frozenset(positions)
        for r in advancing:
            for tup in P.cs_tuples(r, domain):
                for q in P.advance(r, tup):
                    if q.step <= horizon and q not in positions:
                        positions.add(q)
                        changed = True
                        if len(positions) > max_positions:
                            raise GuardError(
                                f"reachable universe exceeds {max_positions} positions "
                                f"(horizon {horizon}); shrink the instance or raise the limit"
                            )
    return FiniteUniverse(frozenset(positions), P.literals, horizon)


def derivable_facts(P, universe: FiniteUniverse) -> frozenset[Fact]:
    """Every (head, position) some rule could conclude inside the universe.

    Answer sets are least models of reducts, so they never leave this set.
    """
    out = set()
    for r in P.rules:
        for tup in P.cs_tuples(r, universe.positions):
            if r.is_advancing:
                out.update(Fact(r.head, q) for q in P.advance(r, tup) if q in universe.positions)
            elif P.holds(r, tup):
                out.add(Fact(r.head, tup[-1]))
    return frozenset(out)


def _negated_literals(P) -> frozenset[Literal]:
    return frozenset(x for r in P.rules for b in r.blocks for x in b.negative)


def brute_force_answer_sets(
    P,
    J,
    horizon: int | None = None,
    *,
    universe: FiniteUniverse | None = None,
    max_facts: int = DEFAULT_MAX_FACTS,
    max_positions: int = DEFAULT_MAX_POSITIONS,
) -> list[frozenset[Fact]]:
    """All answer sets of P w.i.c. J inside the universe, in canonical order.

    Every consistent subset of the derivable facts is tested. The reduct
    P^{M,J} reads M only through GP_J(M) and the facts whose literal occurs
    under ``not``, so least fixpoints are shared between candidates with the
    same such projection; the comparison with M itself is done per candidate.
    """
    if universe is None:
        if horizon is None:
            raise ValueError("need a horizon or a universe")
        universe = reachable_universe(P, J, horizon, max_positions)
    candidates = sorted(derivable_facts(P, universe))
    if len(candidates) > max_facts:
        raise GuardError(
            f"{len(candidates)} candidate facts over {len(universe.positions)} positions, "
            f"limit is {max_facts}"
        )
    negated = _negated_literals(P)
    memo: dict = {}
    found = []
    for size in range(len(candidates) + 1):
        for combo in combinations(candidates, size):
            M = frozenset(combo)
            if not is_consistent(M):
                continue
            key = (gp_i(M, J), frozenset(f for f in M if f.literal in negated))
            lfp = memo.get(key)
            if lfp is None:
                lfp = memo[key] = least_fixpoint(reduct_program(P, M, J), J)
            if lfp == M:
                found.append(M)
    assert all(is_answer_set(P, J, M) for M in found)
    return sorted(found, key=interpretation_key)
