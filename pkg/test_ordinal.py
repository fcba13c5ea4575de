import pytest
from hypothesis import given, strategies as st

from error_handler import ErrorType, RealizabilityError
from ordinal import (OMEGA, ZERO, Ordering, Ordinal, OrdPair, double, format_ordinal, godel_pair, godel_pair_int,
                     godel_unpair, ord_add, ord_cmp, ord_left_sub, ord_mul, ord_sup, parse_ordinal)


def w(text: str) -> Ordinal:
    return parse_ordinal(text)


class TestComparison:
    def test_examples(self):
        assert ord_cmp(0, 0) is Ordering.EQUAL
        assert ord_cmp(3, OMEGA) is Ordering.LESS
        assert ord_cmp(w('w*2+1'), w('w*2')) is Ordering.GREATER

    def test_cnf_ordering(self):
        chain = [w('0'), w('5'), w('w'), w('w+3'), w('w*2'), w('w^2'), w('w^2*3+w+1'), w('w^3')]
        for a, b in zip(chain, chain[1:]):
            assert a < b
            assert ord_cmp(b, a) is Ordering.GREATER


class TestArithmetic:
    def test_left_absorption(self):
        assert ord_add(1, OMEGA) == OMEGA
        assert ord_add(OMEGA, 1) == w('w+1')

    def test_multiplication(self):
        assert ord_mul(OMEGA, 2) == w('w*2')
        assert ord_mul(2, OMEGA) == OMEGA
        assert double(w('w+3')) == w('w+6')

    def test_left_subtraction(self):
        assert ord_left_sub(w('w+5'), 3) == w('w+5')
        assert ord_left_sub(w('w*2+1'), OMEGA) == w('w+1')
        with pytest.raises(RealizabilityError):
            ord_left_sub(3, OMEGA)

    def test_sup(self):
        assert ord_sup([]) == ZERO
        assert ord_sup([2, 5, 3]) == Ordinal.of(5)
        assert ord_sup([OMEGA, 4]) == OMEGA

    def test_bound_overflow(self):
        with pytest.raises(RealizabilityError) as info:
            parse_ordinal('w^w')
        assert info.value.error_type == ErrorType.BOUND_OVERFLOW

    def test_bound_is_configurable(self, override_config):
        override_config({'ORDINAL_BOUND': 'w^(w+1)'})
        from ordinal import check_bound
        assert check_bound(parse_ordinal('w^w', bounded=False)) == parse_ordinal('w^w', bounded=False)

    @given(st.integers(0, 63), st.integers(0, 63))
    def test_finite_arithmetic_matches_integers(self, a, b):
        assert ord_add(a, b) == Ordinal.of(a + b)
        assert ord_mul(a, b) == Ordinal.of(a * b)


class TestPairing:
    def test_examples(self):
        assert godel_pair(OrdPair.of(0, 0)) == ZERO
        assert godel_pair(OrdPair.of(1, 0)) == Ordinal.of(2)
        assert godel_pair(OrdPair.of(2, 2)) == Ordinal.of(8)
        assert godel_unpair(8) == OrdPair.of(2, 2)

    def test_enumeration_is_consecutive(self):
        pairs = sorted(((x, y) for x in range(12) for y in range(12)), key=lambda p: (max(p), p))
        assert [godel_pair_int(x, y) for x, y in pairs] == list(range(len(pairs)))

    def test_exhaustive_inverse_below_64(self):
        for x in range(64):
            for y in range(64):
                assert godel_unpair(godel_pair(OrdPair.of(x, y))) == OrdPair.of(x, y)

    @pytest.mark.parametrize('first,second', [('w', '0'), ('0', 'w'), ('w+1', 'w'), ('3', 'w*2'), ('w^2', 'w+4')])
    def test_transfinite_inverse(self, first, second):
        p = OrdPair(w(first), w(second))
        assert godel_unpair(godel_pair(p)) == p

    def test_transfinite_order(self):
        assert godel_pair(OrdPair.of(5, 5)) < godel_pair(OrdPair.of(0, OMEGA))
        assert godel_pair(OrdPair.of(0, OMEGA)) < godel_pair(OrdPair.of(OMEGA, 0))


class TestNotation:
    @pytest.mark.parametrize('text', ['0', '5', 'w', 'w+3', 'w*2', 'w^2*3+w+1', 'w^(w+1)'])
    def test_canonical_round_trip(self, text):
        value = parse_ordinal(text, bounded=False)
        assert format_ordinal(value) == text

    def test_parse_error_carries_position(self):
        with pytest.raises(RealizabilityError) as info:
            parse_ordinal('w+x')
        assert info.value.error_type == ErrorType.PARSE_ERROR
        assert info.value.context['position'] == 2
