import pytest

from hybridasp.model import Block, InitialCondition, Position
from hybridasp.semantics import (
    HornProgram,
    fixpoint_trace,
    gp,
    gp_i,
    is_answer_set,
    is_inapplicable,
    least_fixpoint,
    one_step,
    reduct_program,
    reduct_rule,
    satisfies_block,
    satisfies_body,
)
from hybridasp.syntax import parse_program

from conftest import fact, facts

p0, p1 = Position(0), Position(1)
ANSWER = facts(("a", 0), ("b", 1), ("c", 1))


def rule(P, head):
    return next(r for r in P.rules if str(r.head) == head)


def test_gp():
    assert gp(()) == frozenset()
    assert gp({fact("a"), fact("b", 1)}) == {p0, p1}
    assert gp({fact("a"), fact("b")}) == {p0}


def test_gp_i():
    assert gp_i((), {p0}) == {p0}
    assert gp_i({fact("a", 1)}, {p0}) == {p0, p1}
    assert gp_i({fact("a")}, InitialCondition(frozenset({p0}))) == {p0}


class TestSatisfaction:
    def test_positive(self):
        assert satisfies_block({fact("a")}, {p0}, Block.parse("a"), p0)

    def test_empty_block_needs_known_position(self):
        assert satisfies_block(set(), {p0}, Block(), p0)
        assert not satisfies_block(set(), {p0}, Block(), p1)

    def test_mixed(self):
        assert satisfies_block({fact("b", 1)}, {p0}, Block.parse("b, not a"), p1)
        assert not satisfies_block({fact("b", 1), fact("a", 1)}, {p0}, Block.parse("b, not a"), p1)

    def test_negative_only_block_needs_known_position(self):
        assert not satisfies_block(set(), {p0}, Block.parse("not a"), p1)
        assert satisfies_block({fact("b", 1)}, {p0}, Block.parse("not a"), p1)

    def test_body(self):
        assert satisfies_body(set(), {p0}, [Block()], [p0])
        assert not satisfies_body({fact("a")}, {p0}, [Block.parse("a"), Block.parse("b")], [p0, p1])
        assert satisfies_body(facts(("a", 0), ("b", 1)), {p0}, [Block.parse("b, not a")], [p1])


class TestReduct:
    def test_no_tuples_means_inapplicable(self):
        P = parse_program("h :- : cs time_eq(5), bool true.")
        assert is_inapplicable(P, P.rules[0], facts(("x", 1)), {p0})

    def test_false_guard_means_inapplicable(self):
        P = parse_program("h :- : cs any1, bool false.")
        assert is_inapplicable(P, P.rules[0], set(), {p0})

    def test_e1_advancing_rule_applicable_at_answer_set(self, e1):
        assert not is_inapplicable(e1, rule(e1, "b"), ANSWER, {p0})

    def test_e1_advancing_rule_inapplicable_without_successor(self, e1):
        # with M = {(a,0)} the only successor (k=1) is outside GP_J(M)
        assert is_inapplicable(e1, rule(e1, "b"), facts(("a", 0)), {p0})

    def test_e1_rule3(self, e1):
        rr = reduct_rule(e1, rule(e1, "c"), ANSWER, {p0})
        assert rr.blocks == (Block.parse("b"),)
        assert rr.tuples == ((p1,),)
        assert not rr.is_advancing

    def test_e1_rule2(self, e1):
        rr = reduct_rule(e1, rule(e1, "b"), ANSWER, {p0})
        assert str(rr.head) == "b"
        assert rr.tuples == ((p0,),)
        assert rr.advance((p0,)) == {p1}

    def test_inapplicable_reduct_raises(self, e1):
        with pytest.raises(ValueError):
            reduct_rule(e1, rule(e1, "b"), set(), {p1})

    def test_program(self, e1):
        assert len(reduct_program(e1, ANSWER, {p0})) == 3
        P = parse_program("h :- : cs time_eq(3), bool true.")
        assert len(reduct_program(P, set(), {p0})) == 0

    def test_horn_program_keeps_applicable_rules(self):
        P = parse_program("a :- : cs any1, bool true.\nb :- a : cs any1, adv tick.\nc :- b : cs time_eq(2), bool true.")
        Ph = reduct_program(P, facts(("a", 0), ("b", 1)), {p0})
        assert sorted(str(r.head) for r in Ph) == ["a", "b"]
        assert all(r.blocks == rule(P, str(r.head)).blocks for r in Ph)


class TestFixpoint:
    def test_one_step_empty_program(self):
        M = facts(("a", 0))
        assert one_step(HornProgram(), {p0}, M) == M

    def test_one_step_chain(self, e1):
        Ph = reduct_program(e1, ANSWER, {p0})
        assert one_step(Ph, {p0}, set()) == facts(("a", 0))
        assert one_step(Ph, {p0}, facts(("a", 0))) == facts(("a", 0), ("b", 1))

    def test_least_fixpoint(self, e1):
        Ph = reduct_program(e1, ANSWER, {p0})
        assert least_fixpoint(Ph, {p0}) == ANSWER
        assert len(fixpoint_trace(Ph, {p0})) == 4
        assert least_fixpoint(HornProgram(), {p0}) == frozenset()

    def test_unseeded_recursion(self):
        P = parse_program("a :- a : cs any1, adv tick.")
        assert least_fixpoint(reduct_program(P, set(), {p0}), {p0}) == frozenset()


class TestAnswerSets:
    def test_empty(self):
        assert is_answer_set(parse_program(""), {p0}, set())

    def test_e1_full(self, e1):
        assert is_answer_set(e1, {p0}, ANSWER)

    def test_e1_without_successor(self, e1):
        # r2 is inapplicable for M = {(a,0)} (its output (k=1) is not in
        # GP_J(M)), r3 is blocked by a at (k=0), so the reduct's least
        # fixpoint is {(a,0)} again
        assert is_answer_set(e1, {p0}, facts(("a", 0)))

    def test_e1_non_answer_sets(self, e1):
        for M in [set(), facts(("a", 0), ("b", 1)), facts(("b", 1), ("c", 1)), ANSWER | facts(("c", 0))]:
            assert not is_answer_set(e1, {p0}, M)

    def test_inconsistent_rejected(self):
        P = parse_program("a :- : cs any1, bool true.\n-a :- : cs any1, bool true.")
        assert not is_answer_set(P, {p0}, {fact("a"), fact("-a")})


def test_negation_free_advancing_program_has_two_answer_sets():
    # {(a,0)} leaves the successor (k=1) outside GP_J(M), which makes the
    # advancing rule inapplicable, so both the short and the long model are stable
    P = parse_program("a :- : cs time_eq(0), bool true.\nb :- a : cs any1, adv tick.")
    assert is_answer_set(P, {p0}, facts(("a", 0)))
    assert is_answer_set(P, {p0}, facts(("a", 0), ("b", 1)))
