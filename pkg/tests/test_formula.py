"""Parser, AST, evaluation, and knowledge-base tests."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import logicrbm as L
from logicrbm import formula as fm
from logicrbm.errors import ParseError

from conftest import random_formula


def table(*names):
    return fm.PropositionTable(names)


# ---------------------------------------------------------------------------
# PropositionTable / Assignment
# ---------------------------------------------------------------------------

class TestPropositionTable:
    def test_first_appearance_order(self):
        t = fm.PropositionTable()
        assert [t.add("b"), t.add("a"), t.add("b")] == [0, 1, 0]
        assert t.names == ["b", "a"]
        assert t.index == {"b": 0, "a": 1}

    def test_empty_name_rejected(self):
        with pytest.raises(ValueError):
            fm.PropositionTable().add("")

    def test_len_and_contains(self):
        t = table("x", "y")
        assert len(t) == 2 and "x" in t and "z" not in t


class TestAssignment:
    def test_total(self):
        a = fm.Assignment.total([1, 0, 1])
        assert a.is_total and a[0] and not a[1]
        assert np.array_equal(a.to_vector(), [1.0, 0.0, 1.0])

    def test_partial(self):
        a = fm.Assignment({0: True}, 3)
        assert not a.is_total
        assert a.assigned() == (0,) and a.unassigned() == (1, 2)
        with pytest.raises(ValueError):
            a.to_vector()

    def test_out_of_universe_index(self):
        with pytest.raises(ValueError):
            fm.Assignment({3: True}, 3)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class TestParsing:
    def test_xor_iff_example(self):
        t = table()
        f = fm.parse_formula("(x ^ y) <-> z", t)
        assert f == fm.Iff(fm.Xor(fm.Var(0), fm.Var(1)), fm.Var(2))
        assert t.names == ["x", "y", "z"]

    def test_negated_literal(self):
        f = fm.parse_formula("~n", table("n"))
        assert f == fm.Not(fm.Var(0))

    def test_backward_implication_is_head_first(self):
        t = table("r", "n")
        f = fm.parse_formula("r <- n", t)
        assert f == fm.Implies(body=fm.Var(1), head=fm.Var(0))

    def test_forward_implication_normalized(self):
        t = table("n", "r")
        assert fm.parse_formula("n -> r", t) \
            == fm.Implies(body=fm.Var(0), head=fm.Var(1))

    def test_precedence_and_over_or(self):
        t = table("a", "b", "c")
        assert fm.parse_formula("a | b & c", t) \
            == fm.Or(fm.Var(0), fm.And(fm.Var(1), fm.Var(2)))

    def test_precedence_or_over_xor(self):
        t = table("a", "b", "c")
        assert fm.parse_formula("a ^ b | c", t) \
            == fm.Xor(fm.Var(0), fm.Or(fm.Var(1), fm.Var(2)))

    def test_implication_right_associative(self):
        t = table("a", "b", "c")
        assert fm.parse_formula("a -> b -> c", t) \
            == fm.Implies(body=fm.Var(0),
                          head=fm.Implies(body=fm.Var(1), head=fm.Var(2)))

    def test_not_binds_tightest(self):
        t = table("a", "b")
        assert fm.parse_formula("~a & b", t) \
            == fm.And(fm.Not(fm.Var(0)), fm.Var(1))

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as err:
            fm.parse_formula("a & $b", table(), line_no=7)
        assert err.value.line == 7
        assert err.value.column is not None

    def test_empty_formula(self):
        with pytest.raises(ParseError):
            fm.parse_formula("   ", table())

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError):
            fm.parse_formula("(a & b", table())

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            fm.parse_formula("a b", table())


class TestParseKb:
    def test_weights_comments_blank_lines(self):
        kb = fm.parse_kb(
            "# header comment\n"
            "1000: r <- n\n"
            "\n"
            "q <- n   # unweighted line\n")
        assert [w for w, _ in kb.items] == [1000.0, 1.0]
        assert kb.table.names == ["r", "n", "q"]

    def test_bad_weight(self):
        with pytest.raises(ParseError):
            fm.parse_kb("abc: x | y\n")

    def test_load_kb_files(self, kb_dir):
        kb = L.load_kb(kb_dir / "nixon.kb")
        assert kb.table.names == ["n", "r", "q", "p"]
        assert [w for w, _ in kb.items] == [1000.0, 1000.0, 10.0, 10.0]


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def xor_formula():
    return fm.parse_formula("(x ^ y) <-> z", table())


class TestEvaluate:
    def test_xor_truth_values(self):
        f = xor_formula()
        assert fm.evaluate(f, fm.Assignment.total([1, 1, 0])) is True
        assert fm.evaluate(f, fm.Assignment.total([1, 1, 1])) is False

    def test_xor_all_models(self):
        f = xor_formula()
        models = {bits for bits in
                  [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
                  if fm.evaluate(f, fm.Assignment.total(bits))}
        assert models == {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}

    def test_const(self):
        assert fm.evaluate(fm.TRUE, fm.Assignment.total([])) is True
        assert fm.evaluate(fm.FALSE, fm.Assignment.total([])) is False

    def test_unassigned_variable(self):
        with pytest.raises(ValueError):
            fm.evaluate(fm.Var(1), fm.Assignment({0: True}, 2))

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(0)
        from logicrbm.normal_forms import all_assignments
        X = all_assignments(4)
        for _ in range(25):
            f = random_formula(rng, 4)
            want = [fm.evaluate(f, fm.Assignment.total(row)) for row in X]
            assert np.array_equal(fm.evaluate_batch(f, X), want)


class TestWeightedSat:
    def test_nixon_all_true(self, kb_dir):
        kb = L.load_kb(kb_dir / "nixon.kb")
        a = fm.Assignment.total([1, 1, 1, 1])
        assert L.weighted_sat(kb, a) == 2010.0

    def test_nixon_all_false(self, kb_dir):
        kb = L.load_kb(kb_dir / "nixon.kb")
        a = fm.Assignment.total([0, 0, 0, 0])
        assert L.weighted_sat(kb, a) == 2020.0

    def test_empty_kb(self):
        kb = fm.KnowledgeBase(table("x"))
        assert L.weighted_sat(kb, fm.Assignment.total([1])) == 0.0

    def test_linear_in_weights(self):
        rng = np.random.default_rng(1)
        from conftest import random_kb
        from logicrbm.normal_forms import all_assignments
        kb = random_kb(rng, n_vars=4)
        scaled = fm.KnowledgeBase(kb.table, [(3.5 * w, f) for w, f in kb.items])
        X = all_assignments(4)
        np.testing.assert_allclose(
            fm.weighted_sat_batch(scaled, X),
            3.5 * fm.weighted_sat_batch(kb, X), rtol=1e-12)

    def test_non_finite_weight_rejected(self):
        kb = fm.KnowledgeBase(table("x"))
        with pytest.raises(ValueError):
            kb.add(float("inf"), fm.Var(0))


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------

@st.composite
def formulas(draw, n_vars=4):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_formula(np.random.default_rng(seed), n_vars)


class TestProperties:
    @settings(max_examples=100, deadline=None)
    @given(formulas())
    def test_print_parse_round_trip(self, f):
        t = table("x0", "x1", "x2", "x3")
        assert fm.parse_formula(fm.format_formula(f, t), t) == f

    @settings(max_examples=100, deadline=None)
    @given(formulas(), st.integers(0, 15))
    def test_implication_equals_or_not(self, f, bits):
        a = fm.Assignment.total([(bits >> i) & 1 for i in range(4)])
        g = fm.Implies(body=f, head=fm.Var(0))
        assert fm.evaluate(g, a) == fm.evaluate(fm.Or(fm.Not(f), fm.Var(0)), a)

    @settings(max_examples=50, deadline=None)
    @given(formulas())
    def test_free_vars_covers_evaluation_needs(self, f):
        fv = fm.free_vars(f)
        a = fm.Assignment({i: True for i in fv}, 4)
        fm.evaluate(f, a)  # must not raise
