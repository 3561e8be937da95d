"""Splitting sets with initial conditions, the bottom/remainder/partial-evaluation
operators, and the decompositions of the splitting set and splitting sequence
theorems for hybrid programs.

All operators act on programs materialized over a :class:`FiniteUniverse`:
each rule carries its constraint set as an explicit tuple set and its
advancing algorithm as an explicit map, so rules can be split per tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import Block, Fact, Literal, Position, block_difference, interpretation_key, is_consistent
from .oracle import FiniteUniverse, brute_force_answer_sets
from .semantics import gp_i, is_answer_set


class SplittingError(Exception):
    pass


@dataclass(frozen=True)
class SplitSet:
    facts: frozenset[Fact]
    _by_position: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        facts = frozenset(self.facts)
        object.__setattr__(self, "facts", facts)
        index: dict[Position, set] = {}
        for f in facts:
            index.setdefault(f.position, set()).add(f.literal)
        object.__setattr__(self, "_by_position", {p: frozenset(ls) for p, ls in index.items()})

    def __contains__(self, fact: Fact) -> bool:
        return fact in self.facts

    def __len__(self):
        return len(self.facts)

    def __le__(self, other: SplitSet) -> bool:
        return self.facts <= other.facts

    def literals_at(self, p: Position) -> frozenset[Literal]:
        """At(U|_p)."""
        return self._by_position.get(p, frozenset())

    @property
    def positions(self) -> frozenset[Position]:
        return frozenset(self._by_position)


@dataclass(frozen=True)
class SplitRule:
    """A hybrid rule with an explicit constraint set.

    Advancing rules map each tuple to an explicit output set; stationary rules
    record the tuples on which their boolean algorithm holds.
    """

    head: Literal
    blocks: tuple[Block, ...]
    is_advancing: bool
    tuples: frozenset[tuple[Position, ...]]
    outputs: frozenset = frozenset()  # advancing: {(tuple, frozenset[Position])}
    accepted: frozenset = frozenset()  # stationary: tuples where Bool(r) holds
    _out: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "tuples", frozenset(self.tuples))
        if self.is_advancing:
            out = {t: frozenset(v) for t, v in dict(self.outputs).items() if t in self.tuples}
            object.__setattr__(self, "outputs", frozenset(out.items()))
            object.__setattr__(self, "_out", out)
            object.__setattr__(self, "accepted", frozenset())
        else:
            object.__setattr__(self, "accepted", frozenset(self.accepted) & self.tuples)
            object.__setattr__(self, "outputs", frozenset())
            object.__setattr__(self, "_out", {})

    @property
    def arity(self) -> int:
        return len(self.blocks)

    def advance(self, tup) -> frozenset[Position]:
        return self._out.get(tuple(tup), frozenset())

    def holds(self, tup) -> bool:
        return tuple(tup) in self.accepted

    def contributions(self, tup) -> frozenset[Fact]:
        """The head facts this rule concludes for ``tup`` (ignoring its body)."""
        if self.is_advancing:
            return frozenset(Fact(self.head, q) for q in self.advance(tup))
        return frozenset({Fact(self.head, tup[-1])}) if self.holds(tup) else frozenset()

    def restrict(self, tuples: Iterable, keep=lambda fact: True) -> SplitRule:
        """Same rule on a sub-constraint-set, with outputs filtered by ``keep``."""
        tuples = frozenset(tuples)
        if self.is_advancing:
            outs = {t: frozenset(q for q in self.advance(t) if keep(Fact(self.head, q))) for t in tuples}
            return SplitRule(self.head, self.blocks, True, tuples, frozenset(outs.items()))
        return SplitRule(self.head, self.blocks, False, tuples, accepted=self.accepted & tuples)

    def sort_key(self):
        return (
            str(self.head),
            tuple(str(b) for b in self.blocks),
            self.is_advancing,
            sorted(tuple(p.sort_key() for p in t) for t in self.tuples),
        )

    def __str__(self):
        body = " ; ".join(str(b) for b in self.blocks)
        ts = ", ".join("(" + ", ".join(f"({p})" for p in t) + ")" for t in sorted(self.tuples))
        if self.is_advancing:
            return f"{self.head} :- {body} : {{{ts}}}, adv"
        return f"{self.head} :- {body} : {{{ts}}}, bool"


class SplitProgram:
    """A finite set of :class:`SplitRule` usable wherever a program is expected."""

    def __init__(self, rules: Iterable[SplitRule] = (), literals: Iterable[Literal] = ()):
        self.rules = tuple(sorted(set(rules), key=SplitRule.sort_key))
        self.literals = frozenset(literals)

    def cs_tuples(self, rule: SplitRule, domain) -> list:
        domain = domain if isinstance(domain, (set, frozenset)) else frozenset(domain)
        return sorted(t for t in rule.tuples if all(p in domain for p in t))

    def advance(self, rule: SplitRule, tup) -> frozenset[Position]:
        return rule.advance(tup)

    def holds(self, rule: SplitRule, tup) -> bool:
        return rule.holds(tup)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        return isinstance(other, SplitProgram) and set(self.rules) == set(other.rules)

    def __hash__(self):
        return hash(frozenset(self.rules))

    def __sub__(self, other) -> SplitProgram:
        drop = set(other)
        return SplitProgram((r for r in self.rules if r not in drop), self.literals)

    def __or__(self, other) -> SplitProgram:
        return SplitProgram(self.rules + tuple(other), self.literals)

    def __str__(self):
        return "\n".join(str(r) for r in self.rules)


def materialize(P, universe: FiniteUniverse) -> SplitProgram:
    """Explicit-tuple form of P over the universe's positions."""
    if isinstance(P, SplitProgram):
        return P
    rules = []
    for r in P.rules:
        tuples = P.cs_tuples(r, universe.positions)
        if r.is_advancing:
            outs = {t: P.advance(r, t) & universe.positions for t in tuples}
            rules.append(SplitRule(r.head, r.blocks, True, frozenset(tuples), frozenset(outs.items())))
        else:
            acc = frozenset(t for t in tuples if P.holds(r, t))
            rules.append(SplitRule(r.head, r.blocks, False, frozenset(tuples), accepted=acc))
    return SplitProgram(rules, universe.literals | P.literals)


def _as_split_set(U) -> SplitSet:
    return U if isinstance(U, SplitSet) else SplitSet(frozenset(U))


def _init_positions(J) -> frozenset[Position]:
    return gp_i((), J)


# ---------------------------------------------------------------------------
# splitting sets and the per-rule tuple sets


def is_splitting_set(U, P, J, universe: FiniteUniverse) -> bool:
    U = _as_split_set(U)
    SP = materialize(P, universe)
    support = U.positions | _init_positions(J)  # GP_J(U)
    for r in SP.rules:
        for tup in r.tuples:
            if r.is_advancing:
                lands = any(Fact(r.head, q) in U for q in r.advance(tup))
            else:
                lands = Fact(r.head, tup[-1]) in U
            if not lands:
                continue
            for b, p in zip(r.blocks, tup):
                if any(Fact(x, p) not in U for x in b.atoms):
                    return False
            if any(p not in support for p in tup):
                return False
    return True


def cs_b(U, r: SplitRule) -> frozenset:
    """Tuples for which r could contribute a fact in U."""
    U = _as_split_set(U)
    return frozenset(t for t in r.tuples if any(f in U for f in r.contributions(t)))


def cs_rem(U, r: SplitRule) -> frozenset:
    """Tuples for which r could contribute a fact outside U."""
    U = _as_split_set(U)
    return frozenset(t for t in r.tuples if any(f not in U for f in r.contributions(t)))


def rules_b(U, P, universe: FiniteUniverse | None = None) -> list[SplitRule]:
    U = _as_split_set(U)
    SP = P if isinstance(P, SplitProgram) else materialize(P, universe)
    return [r for r in SP.rules if cs_b(U, r)]


def bottom(U, P, universe: FiniteUniverse | None = None) -> SplitProgram:
    """b_U(P): each rule of Rules_b restricted to CS_b with outputs kept inside U."""
    U = _as_split_set(U)
    SP = P if isinstance(P, SplitProgram) else materialize(P, universe)
    out = [r.restrict(cs_b(U, r), lambda f: f in U) for r in rules_b(U, SP)]
    return SplitProgram(out, SP.literals)


def remainder(U, P, universe: FiniteUniverse | None = None) -> SplitProgram:
    """Rem(U, P): the parts of Rules_b rules that contribute outside U."""
    U = _as_split_set(U)
    SP = P if isinstance(P, SplitProgram) else materialize(P, universe)
    out = []
    for r in rules_b(U, SP):
        tuples = cs_rem(U, r)
        if tuples:
            out.append(r.restrict(tuples, lambda f: f not in U))
    return SplitProgram(out, SP.literals)


def top(U, P, universe: FiniteUniverse | None = None) -> SplitProgram:
    """(P minus Rules_b(U, P)) together with Rem(U, P)."""
    U = _as_split_set(U)
    SP = P if isinstance(P, SplitProgram) else materialize(P, universe)
    return (SP - rules_b(U, SP)) | remainder(U, SP)


def cs_eps(U, r: SplitRule, X) -> list:
    U = _as_split_set(U)
    X = frozenset(X)
    keep = []
    for tup in sorted(r.tuples):
        ok = True
        for b, p in zip(r.blocks, tup):
            if any(Fact(x, p) in U and Fact(x, p) not in X for x in b.positive):
                ok = False
                break
            if any(Fact(x, p) in X for x in b.negative):
                ok = False
                break
        if ok:
            keep.append(tup)
    return keep


def eps(U, Pp, X, universe: FiniteUniverse | None = None) -> SplitProgram:
    """Partial evaluation of Pp against X: one single-tuple rule per tuple whose
    projection onto U is satisfied by X, with that projection removed."""
    U = _as_split_set(U)
    X = frozenset(X)
    if not X <= U.facts:
        raise SplittingError("X must be a subset of the splitting set")
    SP = Pp if isinstance(Pp, SplitProgram) else materialize(Pp, universe)
    out = []
    for r in SP.rules:
        for tup in cs_eps(U, r, X):
            blocks = tuple(block_difference(b, U.literals_at(p)) for b, p in zip(r.blocks, tup))
            single = frozenset({tup})
            if r.is_advancing:
                out.append(SplitRule(r.head, blocks, True, single, frozenset({(tup, r.advance(tup))})))
            else:
                out.append(SplitRule(r.head, blocks, False, single, accepted=r.accepted & single))
    return SplitProgram(out, SP.literals)


# ---------------------------------------------------------------------------
# theorem 1


@dataclass(frozen=True)
class Decomposition:
    X: frozenset[Fact]
    Y: frozenset[Fact]
    bottom_ok: bool
    top_ok: bool

    @property
    def verdicts(self) -> tuple[bool, bool]:
        return (self.bottom_ok, self.top_ok)


def _corrupt(SP: SplitProgram) -> SplitProgram:
    # negative-path hook: drop the first bottom rule
    return SplitProgram(SP.rules[1:], SP.literals)


def theorem1_decompose(P, U, J, universe: FiniteUniverse, M, *, corrupt_bottom: bool = False) -> Decomposition:
    U = _as_split_set(U)
    SP = materialize(P, universe)
    if not is_splitting_set(U, SP, J, universe):
        raise SplittingError("not a splitting set of the program")
    M = frozenset(M)
    X = M & U.facts
    Y = M - U.facts
    b = bottom(U, SP)
    if corrupt_bottom:
        b = _corrupt(b)
    bottom_ok = is_answer_set(b, J, X)
    top_ok = is_answer_set(eps(U, top(U, SP), X), gp_i(X, J), Y)
    return Decomposition(X, Y, bottom_ok, top_ok)


def theorem1_solutions(P, U, J, universe: FiniteUniverse, *, corrupt_bottom: bool = False, max_facts: int = 22):
    """Every consistent X | Y with X an answer set of the bottom and Y an answer
    set of the partially evaluated top."""
    U = _as_split_set(U)
    SP = materialize(P, universe)
    b = bottom(U, SP)
    if corrupt_bottom:
        b = _corrupt(b)
    t = top(U, SP)
    out = set()
    for X in brute_force_answer_sets(b, J, universe=universe, max_facts=max_facts):
        E = eps(U, t, X)
        for Y in brute_force_answer_sets(E, gp_i(X, J), universe=universe, max_facts=max_facts):
            if is_consistent(X | Y):
                out.add(X | Y)
    return sorted(out, key=interpretation_key)


# ---------------------------------------------------------------------------
# theorem 2


def prefix_sequence(universe: FiniteUniverse, horizon: int | None = None) -> list[SplitSet]:
    """U_i = all literals at positions with step <= i, for i = 0..horizon."""
    if horizon is None:
        horizon = universe.horizon
    return [
        SplitSet(frozenset(Fact(l, p) for p in universe.positions_up_to(i) for l in universe.literals))
        for i in range(horizon + 1)
    ]


def _check_sequence(seq: Sequence[SplitSet], universe: FiniteUniverse):
    for a, b in zip(seq, seq[1:]):
        if not a <= b:
            raise SplittingError("splitting sequence is not monotone")
    if seq and not universe.facts <= seq[-1].facts:
        raise SplittingError("splitting sequence does not cover the universe")


@dataclass(frozen=True)
class LayerVerdict:
    index: int
    X: frozenset[Fact]
    layer_ok: bool
    prefix_ok: bool

    @property
    def ok(self) -> bool:
        return self.layer_ok and self.prefix_ok


def layer_program(P, seq: Sequence[SplitSet], alpha: int, prefix, universe: FiniteUniverse) -> SplitProgram:
    """The program whose answer set is X_{alpha+1} given the union ``prefix``
    of the earlier layers."""
    SP = materialize(P, universe)
    Ua = seq[alpha]
    B = bottom(seq[alpha + 1], SP)
    return eps(Ua, top(Ua, B), prefix)


def theorem2_decompose(P, seq: Sequence, J, universe: FiniteUniverse, M) -> list[LayerVerdict]:
    seq = [_as_split_set(U) for U in seq]
    _check_sequence(seq, universe)
    SP = materialize(P, universe)
    for U in seq:
        if not is_splitting_set(U, SP, J, universe):
            raise SplittingError("sequence member is not a splitting set")
    M = frozenset(M)
    consistent = is_consistent(M)
    out = []
    prev: frozenset[Fact] = frozenset()
    prefix: frozenset[Fact] = frozenset()
    for i, U in enumerate(seq):
        X = (M & U.facts) - prev
        if i == 0:
            layer_ok = is_answer_set(bottom(U, SP), J, X)
            prefix_ok = consistent
        else:
            E = layer_program(SP, seq, i - 1, prefix, universe)
            layer_ok = is_answer_set(E, gp_i(prefix, J), X)
            prefix_ok = consistent and is_answer_set(bottom(seq[i - 1], SP), J, prefix)
        out.append(LayerVerdict(i, X, layer_ok, prefix_ok))
        prev = U.facts
        prefix = prefix | X
    return out


def theorem2_solutions(P, seq: Sequence, J, universe: FiniteUniverse, *, max_facts: int = 22):
    """Unions of every layer-by-layer solution sequence."""
    seq = [_as_split_set(U) for U in seq]
    _check_sequence(seq, universe)
    SP = materialize(P, universe)
    bottoms = [bottom(U, SP) for U in seq]
    results = set()

    def extend(i, prefix):
        if i == len(seq):
            if is_consistent(prefix):
                results.add(prefix)
            return
        if not is_answer_set(bottoms[i - 1], J, prefix):
            return
        E = layer_program(SP, seq, i - 1, prefix, universe)
        for X in brute_force_answer_sets(E, gp_i(prefix, J), universe=universe, max_facts=max_facts):
            extend(i + 1, prefix | X)

    for X0 in brute_force_answer_sets(bottoms[0], J, universe=universe, max_facts=max_facts):
        extend(1, X0)
    return sorted(results, key=interpretation_key)
