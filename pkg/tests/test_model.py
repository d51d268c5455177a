from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from taopacity import TRUE, And, Cmp, DiffCmp, Edge, ModelError, Or, TimedAutomaton, Valuation
from taopacity.model import as_time, elapse, eval_constraint, fmt_time, reset

rationals = st.fractions(min_value=0, max_value=50, max_denominator=12)
valuations = st.dictionaries(st.sampled_from(["x", "y", "z"]), rationals, min_size=1).map(Valuation)


def V(**kw):
    return Valuation({k: Fraction(v) for k, v in kw.items()})


class TestEvalConstraint:
    def test_guard_enabled_at_one(self):
        assert eval_constraint(V(x=1), Cmp("x", "==", 1))

    def test_true_always_holds(self):
        assert eval_constraint(V(x=7), TRUE)
        assert eval_constraint(Valuation(), TRUE)

    def test_difference_and_upper_bound(self):
        phi = And(DiffCmp("x", "y", ">=", 1), Cmp("x", "<", 2))
        assert eval_constraint(V(x="3/2", y="1/2"), phi)
        assert not eval_constraint(V(x="3/2", y="2/3"), phi)

    def test_disjunction(self):
        phi = Or(Cmp("x", "<", 1), Cmp("x", ">", 3))
        assert [eval_constraint(V(x=v), phi) for v in (0, 1, 2, 3, 4)] == [True, False, False, False, True]

    def test_undeclared_clock_is_model_error(self):
        with pytest.raises(ModelError):
            eval_constraint(V(x=1), Cmp("y", "<", 2))
        with pytest.raises(ModelError):
            eval_constraint(V(x=1), And(Cmp("x", ">", 5), Cmp("w", "<", 2)))

    @pytest.mark.parametrize("alias,canon", [("=", "=="), ("≤", "<="), ("≥", ">=")])
    def test_operator_aliases(self, alias, canon):
        assert Cmp("x", alias, 1).op == canon

    @pytest.mark.parametrize("bad", [-1, 1.5, Fraction(1, 2), True, "2"])
    def test_constants_must_be_natural(self, bad):
        with pytest.raises(ModelError):
            Cmp("x", "<", bad)


class TestValuationAlgebra:
    def test_reset_full(self):
        assert reset(V(x=5), {"x"}) == V(x=0)

    def test_reset_empty_is_identity(self):
        assert reset(V(x=5, y=2), set()) == V(x=5, y=2)

    def test_reset_partial(self):
        assert reset(V(x=5, y=2), {"y"}) == V(x=5, y=0)

    def test_reset_undeclared(self):
        with pytest.raises(ModelError):
            reset(V(x=1), {"q"})

    def test_elapse_from_zero(self):
        assert elapse(V(x=0), Fraction(3, 2)) == V(x="3/2")

    def test_elapse_zero_is_identity(self):
        u = V(x=4, y="1/3")
        assert elapse(u, 0) == u

    def test_elapse_componentwise(self):
        assert elapse(V(x=1, y="1/2"), Fraction(1, 2)) == V(x="3/2", y=1)

    def test_negative_delay_rejected(self):
        with pytest.raises(ValueError):
            elapse(V(x=0), -1)

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            as_time(0.5)
        with pytest.raises(TypeError):
            Valuation({"x": 0.1})

    def test_negative_value_rejected(self):
        with pytest.raises(ModelError):
            Valuation({"x": -1})

    def test_valuation_is_hashable_and_ordered(self):
        assert hash(V(x=1, y=2)) == hash(Valuation({"y": 2, "x": 1}))
        assert list(V(y=1, x=2)) == ["x", "y"]
        assert str(V(x="3/2")) == "{x: 3/2}"

    def test_fmt_time(self):
        assert fmt_time(Fraction(5, 1)) == "5"
        assert fmt_time(Fraction(5, 2)) == "5/2"


@given(valuations, rationals, rationals)
def test_elapse_associative(u, t1, t2):
    assert elapse(elapse(u, t1), t2) == elapse(u, t1 + t2)


@given(valuations, st.sets(st.sampled_from(["x", "y", "z"])))
def test_reset_idempotent(u, r):
    r = r & set(u)
    assert reset(reset(u, r), r) == reset(u, r)


@given(valuations, st.integers(0, 40), rationals)
def test_lower_bound_atoms_stay_true(u, n, tau):
    clock = next(iter(u))
    for op in (">=", ">"):
        atom = Cmp(clock, op, n)
        if eval_constraint(u, atom):
            assert eval_constraint(elapse(u, tau), atom)


class TestAutomatonValidation:
    def base(self, **over):
        kw = dict(locations=["l0", "l1"], initial="l0", clocks=["x"], events=["a"], edges=[Edge("l0", "a", TRUE, set(), "l1")])
        kw.update(over)
        return TimedAutomaton(**kw)

    def test_valid(self):
        A = self.base(invariants={"l1": Cmp("x", "<=", 5)})
        assert A.invariant("l1") == Cmp("x", "<=", 5)
        assert A.invariant("l0") is TRUE
        assert A.state("l1", x=2).valuation == V(x=2)

    @pytest.mark.parametrize(
        "over",
        [
            {"initial": "l9"},
            {"edges": [Edge("l0", "a", TRUE, set(), "nowhere")]},
            {"edges": [Edge("l0", "zz", TRUE, set(), "l1")]},
            {"edges": [Edge("l0", "a", Cmp("y", "<", 1), set(), "l1")]},
            {"edges": [Edge("l0", "a", TRUE, {"y"}, "l1")]},
            {"invariants": {"l7": TRUE}},
            {"invariants": {"l0": Cmp("y", "<", 1)}},
            {"locations": ["l0", "l0"]},
            {"locations": ["l0", "l1", "ε"]},
        ],
    )
    def test_rejections(self, over):
        with pytest.raises(ModelError):
            self.base(**over)

    def test_disjunctive_invariant_rejected_with_reason(self):
        with pytest.raises(ModelError, match="disjunction"):
            self.base(invariants={"l1": Or(Cmp("x", "<=", 1), Cmp("x", ">=", 3))})

    def test_guards_may_be_disjunctive(self):
        self.base(edges=[Edge("l0", "a", Or(Cmp("x", "<=", 1), Cmp("x", ">=", 3)), set(), "l1")])

    def test_edge_rendering(self):
        e = Edge("l0", "a", Cmp("x", "==", 1), {"x"}, "l1")
        assert str(e) == "l0 -> l1 on a when x == 1 reset x"
