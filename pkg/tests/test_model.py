from fractions import Fraction

import pytest

from hybridasp.model import (
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
    block_difference,
    body_negative,
    body_positive,
    facts_at,
    is_consistent,
    layer,
    lit,
    literals_of,
)
from hybridasp.registry import RegistryError

from conftest import fact


def blk(text):
    return Block.parse(text)


class TestLiteral:
    def test_complement_is_involution(self):
        a = lit("a")
        assert a.complement() == lit("-a")
        assert a.complement().complement() == a

    @pytest.mark.parametrize("name", ["A", "1a", "cs", "not", "adv", "bool", "a-b", ""])
    def test_bad_names(self, name):
        with pytest.raises(ValueError):
            Literal(name)

    def test_str(self):
        assert str(lit("-on_1")) == "-on_1"


class TestBlock:
    def test_atoms_and_empty(self):
        b = blk("a, b, not c")
        assert b.atoms == {lit("a"), lit("b"), lit("c")}
        assert Block().is_empty

    def test_difference_from_both_parts(self):
        b = Block((lit("b1"), lit("b2")), (lit("b3"), lit("b4")))
        assert block_difference(b, {lit("b1"), lit("b4")}) == Block((lit("b2"),), (lit("b3"),))

    def test_difference_with_nothing(self):
        b = blk("a, not b")
        assert b - set() == b

    def test_difference_clears_same_atom_both_sides(self):
        assert blk("a, not a") - {lit("a")} == Block()

    def test_duplicates_collapse(self):
        assert blk("a, a, not b, not b") == blk("a, not b")


class TestPosition:
    def test_exact_equality(self):
        assert Position.at(1, level=Fraction(7, 2)) == Position.at(1, level=Fraction(14, 4))
        assert Position.at(1, level=2) == Position.at(1, level=Fraction(4, 2))
        assert Position.at(1, level=2) != Position.at(2, level=2)

    def test_param_order_irrelevant(self):
        assert Position(0, (("x", 1), ("y", 2))) == Position(0, (("y", 2), ("x", 1)))

    def test_negative_step_rejected(self):
        with pytest.raises(ValueError):
            Position(-1)

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            Position.at(0, level=0.5)

    def test_str(self):
        assert str(Position.at(0, level=Fraction(7, 2))) == "step=0 level=7/2"

    def test_replace(self):
        p = Position.at(2, mode="on")
        assert p.replace(step=3) == Position.at(3, mode="on")
        assert p.replace(mode="off").get("mode") == "off"

    def test_numbers_sort_before_symbols(self):
        assert Position.at(0, v=5) < Position.at(0, v="a")


class TestInterpretations:
    def test_consistency(self):
        assert is_consistent({fact("a"), fact("-a", 1)})
        assert not is_consistent({fact("a"), fact("-a")})

    def test_restrictions(self):
        M = {fact("a"), fact("b", 1), fact("c", 1)}
        assert facts_at(M, Position(1)) == {fact("b", 1), fact("c", 1)}
        assert layer(M, 0) == {fact("a")}
        assert literals_of(M) == {lit("a"), lit("b"), lit("c")}


def test_body_projections():
    r = StationaryRule(lit("h"), (blk("a, not b"),), ConstraintSetRef("any1"), BooleanAlgorithmRef("true"))
    assert body_positive(r) == [blk("a")]
    assert body_negative(r) == [Block((), (lit("b"),))]
    r2 = StationaryRule(
        lit("h"), (Block(), blk("c, d, not e")), ConstraintSetRef("any2"), BooleanAlgorithmRef("true")
    )
    assert body_positive(r2) == [Block(), blk("c, d")]


def test_e1_third_rule_positive_body(e1):
    r3 = next(r for r in e1.rules if r.head == lit("c"))
    assert body_positive(r3) == [blk("b")]


class TestProgram:
    def test_arity_mismatch(self):
        r = StationaryRule(lit("h"), (Block(),), ConstraintSetRef("any2"), BooleanAlgorithmRef("true"))
        with pytest.raises(ValueError):
            Program([r])

    def test_unknown_reference(self):
        r = AdvancingRule(lit("h"), (Block(),), ConstraintSetRef("any1"), AdvancingAlgorithmRef("warp"))
        with pytest.raises(RegistryError):
            Program([r])

    def test_literals_both_polarities(self, e1):
        assert lit("-b") in e1.literals and lit("c") in e1.literals
        assert len(e1.literals) == 6

    def test_rules_need_a_block(self):
        with pytest.raises(ValueError):
            StationaryRule(lit("h"), (), ConstraintSetRef("any1"), BooleanAlgorithmRef("true"))


def test_initial_condition_needs_step_zero():
    with pytest.raises(ValueError):
        InitialCondition(frozenset({Position(1)})).check_discrete()
    InitialCondition(frozenset({Position(0), Position(1)})).check_discrete()
