import pytest
from hypothesis import given, strategies as st

from corpus import FormulaGenerator
from error_handler import ErrorType, RealizabilityError
from formula import Const, Eq, Var, conj, ctx, format_formula, make_bounded_exists, make_bounded_forall, parse_formula
from hfset import EMPTY, hf, level, seq_function
from truth_engine import eval_bruteforce, eval_delta0, parse_assignment, truth_universe


class TestDelta0:
    @pytest.mark.parametrize('text,expected', [
        ('(bot)', 0),
        ('(mem {} {{}})', 1),
        ('(mem {{}} {{}})', 0),
        ('(eq {{},{{}}} 2)', 1),
        ('(imp (mem {} {}) (bot))', 1),
        ('(and)', 1),
        ('(or)', 0),
        ('(and* (eq {} {}) (mem {} {{}}))', 1),
        ('(or* (bot) (mem {{}} {}))', 0),
        ('(all (x0) (imp (mem x0 2) (mem {} 3)))', 1),
        ('(ex (x0) (and (mem x0 2) (mem {} x0)))', 1),
        ('(all (x0) (imp (mem x0 {}) (bot)))', 1),
    ])
    def test_examples(self, text, expected):
        assert eval_delta0(parse_formula(text)) == expected

    def test_sequence_bounded_quantifiers(self):
        a, b = EMPTY, hf(EMPTY)
        bound = Const(hf(seq_function([a, b]), seq_function([b, b])))
        wanted = conj(Eq(Var(0), Const(a)), Eq(Var(1), Const(b)))
        assert eval_delta0(make_bounded_exists(ctx(0, 1), bound, wanted)) == 1
        assert eval_delta0(make_bounded_forall(ctx(0, 1), bound, Eq(Var(1), Const(b)))) == 1
        assert eval_delta0(make_bounded_forall(ctx(0, 1), bound, Eq(Var(0), Const(b)))) == 0

    def test_assignment(self):
        phi = parse_formula('(mem x0 x1)')
        assert eval_delta0(phi, {0: EMPTY, 1: hf(EMPTY)}) == 1
        with pytest.raises(RealizabilityError) as info:
            eval_delta0(phi, {0: EMPTY})
        assert info.value.error_type == ErrorType.UNBOUND_VARIABLE

    def test_rejects_unbounded(self):
        with pytest.raises(RealizabilityError) as info:
            eval_delta0(parse_formula('(ex (x0) (mem x0 {{}}))'))
        assert info.value.error_type == ErrorType.NOT_DELTA0

    @given(st.integers(0, 10_000))
    def test_agrees_with_brute_force(self, seed):
        phi = FormulaGenerator(seed, 2, 2).delta0_sentence()
        assert eval_delta0(phi) == eval_bruteforce(phi, level(4)), format_formula(phi)


class TestBruteForce:
    @pytest.mark.parametrize('text,expected', [
        ('(ex (x0) (mem x0 x0))', 0),
        ('(ex (x0) (all (x1) (imp (mem x1 x0) (bot))))', 1),
        ('(all (x0) (ex (x1) (mem x0 x1)))', 0),
        ('(ex (x0 x1) (and (mem x0 x1) (mem x1 2)))', 1),
    ])
    def test_unbounded_over_v3(self, text, expected):
        assert eval_bruteforce(parse_formula(text), level(3)) == expected

    def test_truth_universe_adds_sequences(self):
        assert truth_universe(2) == level(2)
        universe = truth_universe(4)
        assert set(level(4)) <= set(universe)
        assert seq_function([EMPTY, hf(EMPTY)]) in universe


class TestAssignments:
    def test_parse(self):
        assert parse_assignment('x0={};x2=2') == {0: EMPTY, 2: hf(EMPTY, hf(EMPTY))}
        assert parse_assignment('') == {}

    def test_bad_entry(self):
        with pytest.raises(RealizabilityError) as info:
            parse_assignment('y={}')
        assert info.value.error_type == ErrorType.PARSE_ERROR
