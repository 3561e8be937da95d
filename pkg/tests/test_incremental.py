import pytest

from hybridasp.asp import GuardError, NormalRule
from hybridasp.incremental import (
    SeededRandomSelector,
    SeededRandomStationary,
    advancing_selector,
    compute_y0,
    enumerate_all,
    enumerate_candidates,
    first_answer_set,
    head_adv,
    next_gp,
    next_gp_at_tuple,
    red_app_program,
    red_app_rule,
    rules_adv_at_time,
    rules_stat,
    run,
    select_all,
    select_none,
    stationary_selector,
    step,
)
from hybridasp.model import Block, Fact, InitialCondition, Position, layer, lit
from hybridasp.oracle import brute_force_answer_sets
from hybridasp.syntax import parse_program

from conftest import facts, load

p0, p1, p2 = Position(0), Position(1), Position(2)
J = InitialCondition(frozenset({p0}))
Y0 = facts(("a", 0))
Y1 = facts(("b", 1), ("c", 1))


def names(rules):
    return sorted(str(r.head) for r in rules)


def nrule(text):
    head, body = text.split(":-")
    return NormalRule(lit(head.strip()), Block.parse(body.strip().rstrip(".")))


class TestAdvancingSide:
    def test_rules_adv_at_time(self, e1):
        assert names(rules_adv_at_time(e1, Y0, J, 0)) == ["b"]
        assert rules_adv_at_time(e1, Y0 | Y1, J, 1) == []

    def test_empty_body_fires_at_initial_position(self):
        P = parse_program("h :- : cs any1, adv tick.")
        assert len(rules_adv_at_time(P, frozenset(), J, 0)) == 1

    def test_next_gp_at_tuple(self, e1):
        assert next_gp_at_tuple(e1, Y0, J, (p0,)) == {p1}
        assert next_gp_at_tuple(e1, Y0 | Y1, J, (p1,)) == frozenset()

    def test_overlapping_outputs(self):
        P = parse_program("h :- : cs any1, adv tick.\ng :- : cs any1, adv tick.")
        assert next_gp_at_tuple(P, frozenset(), J, (p0,)) == {p1}
        assert head_adv(P, frozenset(), J, p1) == {lit("h"), lit("g")}

    def test_next_gp(self, e1):
        assert next_gp(e1, select_all, Y0, J, 0) == {p1}
        assert next_gp(e1, select_none, Y0, J, 0) == frozenset()
        assert next_gp(e1, select_all, Y0 | Y1, J, 1) == frozenset()

    def test_head_adv(self, e1):
        assert head_adv(e1, Y0, J, p1) == {lit("b")}
        assert head_adv(e1, Y0, J, Position(3)) == frozenset()
        assert head_adv(e1, Y0, J, p0) == frozenset()

    def test_selector_must_return_subset(self, e1):
        with pytest.raises(ValueError):
            next_gp(e1, lambda N, Z: frozenset({p2}), Y0, J, 0)


class TestStationarySide:
    def test_rules_stat(self, e1):
        assert names(rules_stat(e1, frozenset(), J, (p0,))) == ["a", "c"]
        assert names(rules_stat(e1, frozenset(), J, (p1,))) == ["c"]

    def test_rules_stat_checks_earlier_blocks_only(self):
        P = parse_program("h :- x ; not h : cs consecutive2, bool true.")
        assert rules_stat(P, frozenset(), J, (p0, p1)) == []
        assert len(rules_stat(P, facts(("x", 0)), J, (p0, p1))) == 1

    def test_red_app_rule(self, e1):
        assert {str(red_app_rule(r)) for r in e1.rules if not r.is_advancing} == {"a :- .", "c :- b, not a."}
        P = parse_program("h :- ; ; x, not y : cs any3, bool true.")
        assert str(red_app_rule(P.rules[0])) == "h :- x, not y."

    def test_red_app_program(self, e1):
        assert red_app_program(e1, frozenset(), J, p0).rules == {nrule("a :- ."), nrule("c :- b, not a.")}
        assert red_app_program(e1, Y0, J, p1).rules == {nrule("c :- b, not a.")}
        P = parse_program("h :- : cs time_eq(0), bool true.")
        assert red_app_program(P, Y0, J, p1).rules == frozenset()
        assert red_app_program(P, Y0, J, p1).universe == P.literals


class TestLayers:
    def test_y0(self, e1):
        tr = compute_y0(e1, J, first_answer_set)
        assert tr.facts == Y0 and not tr.failed

    def test_y0_without_stationary_rules(self):
        P = parse_program("b :- : cs any1, adv tick.")
        assert compute_y0(P, J, first_answer_set).facts == frozenset()

    def test_y0_positions_solved_independently(self):
        P = parse_program("a :- : cs any1, bool param_eq(m, x).\nb :- : cs any1, bool true.")
        q = Position.at(0, m="x")
        tr = compute_y0(P, InitialCondition(frozenset({p0, q})), first_answer_set)
        assert tr.facts == facts(("b", 0)) | {Fact(lit("a"), q), Fact(lit("b"), q)}

    def test_step(self, e1):
        tr = step(e1, J, select_all, first_answer_set, Y0, 0)
        assert tr.positions == (p1,) and tr.facts == Y1
        tr = step(e1, J, select_all, first_answer_set, Y0 | Y1, 1)
        assert tr.positions == () and tr.facts == frozenset()
        tr = step(e1, J, select_none, first_answer_set, Y0, 0)
        assert tr.positions == () and tr.facts == frozenset()

    def test_failure_at_one_position_empties_the_layer(self):
        P = parse_program(
            "s :- : cs time_eq(0), bool true.\n"
            "g :- s : cs any1, adv fanout(m, {x, y}).\n"
            "a :- not a : cs any1, bool param_eq(m, x)."
        )
        tr = step(P, J, select_all, first_answer_set, facts(("s", 0)), 0)
        assert len(tr.positions) == 2 and tr.failed and tr.facts == frozenset()
        assert dict(tr.chosen)[Position.at(1, m="y")] == {lit("g")}


class TestRun:
    def test_e1(self, e1):
        r = run(e1, J, select_all, first_answer_set, 3)
        assert r.interpretation == Y0 | Y1 and r.valid
        assert [layer(r.interpretation, k) for k in range(3)] == [tr.facts for tr in r.layers]

    def test_empty_program(self):
        r = run(parse_program(""), J, select_all, first_answer_set, 2)
        assert r.interpretation == frozenset() and r.valid

    def test_dropping_successors(self, e1):
        # {(a,0)} is itself an answer set: once (k=1) is not in GP_J(M) the
        # advancing rule no longer applies
        r = run(e1, J, select_none, first_answer_set, 3)
        assert r.interpretation == Y0 and r.valid

    def test_invalid_path_is_reported(self):
        P = parse_program("a :- not a : cs any1, bool true.")
        r = run(P, J, select_all, first_answer_set, 1)
        assert r.interpretation == frozenset() and not r.valid

    def test_horizon_stops_self_sustaining_ticks(self):
        P = parse_program("a :- : cs time_eq(0), bool true.\na :- a : cs any1, adv tick.")
        r = run(P, J, select_all, first_answer_set, 4)
        assert max(f.position.step for f in r.interpretation) == 4
        assert r.valid

    def test_layers_are_pure(self, e1):
        for tr in run(e1, J, select_all, first_answer_set, 3).layers:
            assert all(f.position.step == tr.k for f in tr.facts)
            assert all(z.step == tr.k for z in tr.positions)

    def test_seeded_selectors_are_reproducible(self):
        P, J_ = load("fanout.hasp")
        a = run(P, J_, SeededRandomSelector(seed=7), SeededRandomStationary(seed=7), 3)
        b = run(P, J_, SeededRandomSelector(seed=7), SeededRandomStationary(seed=7), 3)
        assert a == b

    def test_selector_factories(self):
        assert advancing_selector("select_all") is select_all
        assert stationary_selector("first") is first_answer_set
        with pytest.raises(ValueError):
            advancing_selector("seeded_random")
        with pytest.raises(ValueError):
            stationary_selector("best")


class TestEnumerate:
    def test_e1(self, e1):
        assert enumerate_all(e1, J, 3) == [Y0, Y0 | Y1]

    def test_fanout_matches_oracle(self):
        P, J_ = load("fanout.hasp")
        got = enumerate_all(P, J_, 2)
        assert len(got) > 1
        assert got == brute_force_answer_sets(P, J_, 2)

    def test_empty_program(self):
        assert enumerate_all(parse_program(""), J, 2) == [frozenset()]

    def test_candidates_may_include_non_answer_sets(self):
        P = parse_program("a :- not a : cs any1, bool true.")
        assert enumerate_candidates(P, J, 1) == [frozenset()]
        assert enumerate_all(P, J, 1) == []

    def test_branch_guard(self):
        P, J_ = load("fanout.hasp")
        with pytest.raises(GuardError):
            enumerate_all(P, J_, 3, max_branches=5)

    def test_later_initial_positions_are_not_seeded(self):
        # the layer algorithm only seeds from J at step 0; a J position at a
        # later step supports derivations the oracle sees but the layers do not
        P = parse_program("a :- : cs time_eq(1), bool true.")
        J2 = InitialCondition(frozenset({p0, p1}))
        assert brute_force_answer_sets(P, J2, 1) == [facts(("a", 1))]
        assert enumerate_all(P, J2, 1) == []
