import pytest

from error_handler import ErrorType, RealizabilityError
from formula import (Conj, Const, Eq, Exists, FormulaClass, Mem, OmegaFamily, SeqMem, Var, classify, constants,
                     ctx, expand_seq_membership, family_distinct_parts, family_length, family_part, format_formula,
                     free_vars, is_delta0, is_infinitary, make_bounded_exists, make_bounded_forall, max_var,
                     non_absolute_bounded_exists, parse_formula, rename_var, substitute)
from hfset import EMPTY, hf
from ordinal import OMEGA

x0, x1, x2 = Var(0), Var(1), Var(2)


class TestSyntax:
    @pytest.mark.parametrize('text', [
        '(bot)',
        '(mem x0 {{}})',
        '(imp (eq x0 x1) (bot))',
        '(and (mem {} {{}}) (or))',
        '(or* (bot) (eq {} {}))',
        '(all (x0 x1) (imp (seqmem (x0 x1) x2) (mem x0 x1)))',
        '(ex (x3) (and (mem x3 {{},{{}}}) (eq x3 {})))',
    ])
    def test_round_trip(self, text):
        assert format_formula(parse_formula(text)) == text

    def test_natural_literal_is_von_neumann(self):
        assert parse_formula('(mem 1 2)') == Mem(Const(hf(EMPTY)), Const(hf(EMPTY, hf(EMPTY))))

    @pytest.mark.parametrize('text,position', [
        ('(mem x0)', 7),
        ('(foo)', 1),
        ('(bot) (bot)', 6),
        ('(mem x0 {{}', 8),
    ])
    def test_parse_errors_carry_position(self, text, position):
        with pytest.raises(RealizabilityError) as info:
            parse_formula(text)
        assert info.value.error_type == ErrorType.PARSE_ERROR
        assert info.value.context['position'] == position

    def test_context_must_be_distinct(self):
        with pytest.raises(RealizabilityError):
            parse_formula('(ex (x0 x0) (bot))')


class TestFamilies:
    def test_periodic_family(self):
        family = OmegaFamily((Eq(x0, x0), Mem(x0, x1)))
        assert family_length(family) == OMEGA
        assert family_part(family, 5) == Mem(x0, x1)
        assert family_distinct_parts(family) == family.pattern

    def test_generator_family(self):
        family = OmegaFamily(generator=lambda i: Mem(Var(i), x0))
        assert family_part(family, 3) == Mem(Var(3), x0)
        with pytest.raises(RealizabilityError) as info:
            family_distinct_parts(family)
        assert info.value.error_type == ErrorType.NOT_DECIDABLE
        assert not is_delta0(Conj(family))

    def test_finite_family_bounds(self):
        with pytest.raises(RealizabilityError) as info:
            family_part((Eq(x0, x0),), 1)
        assert info.value.error_type == ErrorType.INDEX_OUT_OF_RANGE

    def test_empty_family_needs_pattern(self):
        with pytest.raises(RealizabilityError):
            OmegaFamily()


class TestVariables:
    def test_free_vars(self):
        phi = parse_formula('(ex (x0) (and (mem x0 x1) (seqmem (x2 x0) x3)))')
        assert free_vars(phi) == frozenset({1, 2, 3})
        assert max_var(phi) == 3

    def test_substitute(self):
        phi = parse_formula('(and (mem x0 x1) (ex (x0) (eq x0 x1)))')
        result = substitute(phi, ctx(0, 1), [EMPTY, hf(EMPTY)])
        assert format_formula(result) == '(and (mem {} {{}}) (ex (x0) (eq x0 {{}})))'
        assert constants(result) == frozenset({EMPTY, hf(EMPTY)})

    def test_substitute_length_mismatch(self):
        with pytest.raises(RealizabilityError) as info:
            substitute(Eq(x0, x1), ctx(0, 1), [EMPTY])
        assert info.value.error_type == ErrorType.LENGTH_MISMATCH

    def test_rename_skips_bound_occurrences(self):
        phi = parse_formula('(and (eq x0 x1) (all (x0) (eq x0 x0)))')
        assert format_formula(rename_var(phi, 0, 5)) == '(and (eq x5 x1) (all (x0) (eq x0 x0)))'


class TestClassification:
    @pytest.mark.parametrize('text,expected', [
        ('(mem x0 x1)', FormulaClass.DELTA0_OMEGA),
        ('(all (x0) (imp (mem x0 {}) (bot)))', FormulaClass.DELTA0_OMEGA),
        ('(and* (mem x0 x1))', FormulaClass.DELTA0_INF),
        ('(ex (x0) (mem x0 {{}}))', FormulaClass.SIGMA1_OMEGA),
        ('(ex (x0 x1) (eq x0 x1))', FormulaClass.SIGMA1_INF),
        ('(seqmem (x0 x1) x2)', FormulaClass.SIGMA1_INF),
        ('(all (x0) (mem x0 x0))', FormulaClass.GENERAL),
        ('(imp (ex (x0) (eq x0 x0)) (bot))', FormulaClass.GENERAL),
    ])
    def test_classify(self, text, expected):
        assert classify(parse_formula(text)) is expected

    def test_bounded_sequence_quantifiers(self):
        body = Eq(x0, x1)
        assert classify(make_bounded_exists(ctx(0, 1), x2, body)) is FormulaClass.DELTA0_INF
        assert classify(make_bounded_forall(ctx(0, 1), x2, body)) is FormulaClass.DELTA0_INF
        assert classify(make_bounded_forall(ctx(0), x2, body)) is FormulaClass.DELTA0_OMEGA

    def test_separate_guards_are_not_bounded(self):
        phi = non_absolute_bounded_exists(ctx(0, 1), x2, Eq(x0, x1))
        assert not is_delta0(phi)
        assert classify(phi) is FormulaClass.SIGMA1_INF

    def test_bound_may_not_mention_the_context(self):
        assert not is_delta0(make_bounded_exists(ctx(0), x0, Eq(x0, x0)))

    def test_expansion(self):
        expanded = expand_seq_membership((x0, x1), x2)
        assert isinstance(expanded, Exists)
        assert free_vars(expanded) == frozenset({0, 1, 2})
        assert min(expanded.ctx.vars) > 2
        assert SeqMem((x0, x1), x2).expand() == expanded
        assert is_infinitary(SeqMem((x0, x1), x2))
        assert not is_infinitary(SeqMem((x0,), x2))
