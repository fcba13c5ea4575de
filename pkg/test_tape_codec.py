import pytest
from hypothesis import given, strategies as st

from error_handler import ErrorType, RealizabilityError
from ordinal import OMEGA, Ordinal, ord_add, parse_ordinal
from rterm import parse_realizer
from tape_codec import (BitTape, LowPair, OrdSet, bits, concat, decode_lowpair, decode_ordset, decode_seq,
                        encode_lowpair, encode_ordset, encode_seq, format_tape, parse_ordset, parse_tape,
                        seq_append, seq_index, seq_remove, tape_bounded_search, tape_image, tape_member,
                        validate_set_code)

small_ordsets = st.frozensets(st.integers(0, 31), max_size=6).map(OrdSet.of)
tails = st.text(alphabet='01', max_size=16).map(bits)
low_pairs = st.builds(LowPair.of, st.integers(0, 31), st.frozensets(st.integers(0, 31), max_size=4))


class TestSetCodes:
    def test_footnote_codes_are_bit_exact(self):
        assert encode_ordset(OrdSet.of([])) == bits('011')
        assert encode_ordset(OrdSet.of([0])) == bits('01011')
        assert encode_ordset(OrdSet.omega()) == parse_tape('(01)^w011')

    def test_omega_code_layout(self):
        tape = encode_ordset(OrdSet.omega())
        assert tape.length == parse_ordinal('w+3')
        assert tape.bit(11) == 1 and tape.bit(10) == 0
        assert tape.bit(OMEGA) == 0
        assert tape.bit(ord_add(OMEGA, 1)) == 1 and tape.bit(ord_add(OMEGA, 2)) == 1

    def test_even_positions_below_terminator_are_zero(self):
        tape = encode_ordset(OrdSet.of([1, 4, 6]))
        assert all(tape.bit(p) == 0 for p in range(0, 14, 2))
        assert validate_set_code(tape)
        assert not validate_set_code(bits('11'))

    @given(small_ordsets, tails)
    def test_prefix_robustness(self, ordset, tail):
        assert decode_ordset(concat(encode_ordset(ordset), tail)) == ordset

    def test_omega_run_survives_tail(self):
        assert decode_ordset(concat(encode_ordset(OrdSet.omega()), bits('1101'))) == OrdSet.omega()

    def test_tape_literal_round_trip(self):
        for text in ('011', '01011', '(01)^w011', '0111'):
            assert format_tape(parse_tape(text)) == text

    def test_bad_tape_literal(self):
        with pytest.raises(RealizabilityError) as info:
            parse_tape('01x')
        assert info.value.error_type == ErrorType.PARSE_ERROR

    def test_ordset_literal(self):
        assert parse_ordset('{0,3}') == OrdSet.of([0, 3])
        assert parse_ordset('{}') == OrdSet.of([])
        assert parse_ordset(str(OrdSet.omega())) == OrdSet.omega()


class TestPairsAndSequences:
    def test_pair_examples(self):
        assert encode_lowpair(LowPair.of(0)) == bits('0111')
        assert encode_lowpair(LowPair.of(2)) == bits('011001')
        assert encode_lowpair(LowPair.of(0, [0])) == bits('010111')
        assert decode_lowpair(bits('0111')) == LowPair.of(0)

    def test_malformed_pair(self):
        with pytest.raises(RealizabilityError) as info:
            decode_lowpair(bits('11'))
        assert info.value.error_type == ErrorType.MALFORMED_CODE

    @given(low_pairs, tails)
    def test_pair_prefix_robustness(self, pair, tail):
        assert decode_lowpair(concat(encode_lowpair(pair), tail)) == pair

    def test_sequence_examples(self):
        assert encode_seq([]) == bits('1111')
        assert seq_append(encode_seq([]), LowPair.of(0)) == bits('01111111')
        tape = encode_seq([LowPair.of(0), LowPair.of(1)])
        assert seq_index(tape, 1) == LowPair.of(1)
        assert decode_seq(seq_remove(tape, 0)) == [LowPair.of(1)]

    def test_index_out_of_range(self):
        with pytest.raises(RealizabilityError) as info:
            seq_index(encode_seq([LowPair.of(0)]), 3)
        assert info.value.error_type == ErrorType.INDEX_OUT_OF_RANGE
        with pytest.raises(RealizabilityError):
            seq_remove(encode_seq([]), OMEGA)

    @given(st.lists(low_pairs, max_size=4))
    def test_sequence_round_trip(self, pairs):
        assert decode_seq(encode_seq(pairs)) == pairs


class TestTapeOperations:
    def test_membership(self):
        assert tape_member(0, encode_ordset(OrdSet.of([0]))) == 1
        assert tape_member(1, encode_ordset(OrdSet.of([0]))) == 0
        assert tape_member(5, encode_ordset(OrdSet.omega())) == 1
        assert tape_member(OMEGA, encode_ordset(OrdSet.omega())) == 0

    def test_image_with_callables(self):
        code = encode_ordset(OrdSet.of([1, 3]))
        assert tape_image(lambda a: a, code) == code
        assert tape_image(lambda a: ord_add(a, 1), encode_ordset(OrdSet.of([0, 1]))) == \
            encode_ordset(OrdSet.of([1, 2]))
        assert tape_image(lambda a: 0, encode_ordset(OrdSet.of([2, 7]))) == encode_ordset(OrdSet.of([0]))

    def test_image_with_program_term(self):
        successor = parse_realizer('(realizer (lam x (prim add x 1)) nil)')
        assert tape_image(successor, encode_ordset(OrdSet.of([0, 1]))) == encode_ordset(OrdSet.of([1, 2]))

    def test_image_composes(self):
        f = lambda a: ord_add(a, 2)
        g = lambda a: Ordinal.of(a.to_int() // 2)
        code = encode_ordset(OrdSet.of([0, 3, 5, 8]))
        assert tape_image(lambda a: g(f(a)), code) == tape_image(g, tape_image(f, code))

    def test_bounded_search(self):
        is_even = lambda a: a.is_even()
        assert tape_bounded_search(encode_ordset(OrdSet.of([1, 2, 3])), is_even) == Ordinal.of(2)
        assert tape_bounded_search(encode_ordset(OrdSet.of([1, 3])), is_even) is None
        assert tape_bounded_search(encode_ordset(OrdSet.of([])), lambda a: True) is None

    def test_bounded_search_with_program_term(self):
        above_one = parse_realizer('(realizer (lam x (prim lt 1 x)) nil)')
        assert tape_bounded_search(encode_ordset(OrdSet.of([0, 1, 4, 6])), above_one) == Ordinal.of(4)

    def test_bounded_search_through_a_run(self):
        found = tape_bounded_search(encode_ordset(OrdSet.omega()), lambda a: a.to_int() == 2)
        assert found == Ordinal.of(2)
        with pytest.raises(RealizabilityError) as info:
            tape_bounded_search(encode_ordset(OrdSet.omega()), lambda a: False, probe=3)
        assert info.value.error_type == ErrorType.NOT_DECIDABLE

    def test_bounded_search_is_least_past_a_run(self):
        past_run = ord_add(OMEGA, 3)
        mixed = encode_ordset(OrdSet(members=frozenset({past_run}), runs=frozenset({Ordinal.of(0)})))
        assert tape_bounded_search(mixed, lambda a: not a < Ordinal.of(2), probe=4) == Ordinal.of(2)
        with pytest.raises(RealizabilityError) as info:
            tape_bounded_search(mixed, lambda a: a == past_run, probe=4)
        assert info.value.error_type == ErrorType.NOT_DECIDABLE

    def test_empty_tape_is_all_zero(self):
        assert BitTape().bit(OMEGA) == 0
