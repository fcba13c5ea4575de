import pytest
from hypothesis import given, strategies as st

from error_handler import ErrorType, RealizabilityError
from hfset import (EMPTY, hf, kpair, level, ordinal_value, parse_set, seq_function, seq_values, transitive_closure,
                   unpair, von_neumann)
from set_codec import (build_code, build_code_scrambled, build_iso, decode_match, decode_set, element_node,
                       empty_code, essdom, first_element, format_code, is_code_iso, least_element, make_precode,
                       merge_codes, nodes_equal, parse_code, restrict_to_essdom, separate, subset_check)

hf_sets = st.sampled_from(level(4))
seeds = st.integers(0, 7)


class TestHFSets:
    def test_level_sizes(self):
        assert [len(level(n)) for n in range(5)] == [0, 1, 2, 4, 16]

    def test_literals(self):
        assert parse_set('{}') == EMPTY
        assert parse_set('2') == von_neumann(2) == hf(EMPTY, hf(EMPTY))
        assert str(parse_set('{{},{{}}}')) == '{{},{{}}}'
        assert ordinal_value(von_neumann(3)) == 3
        assert ordinal_value(hf(hf(EMPTY))) is None

    def test_bad_literal(self):
        with pytest.raises(RealizabilityError) as info:
            parse_set('{{}')
        assert info.value.error_type == ErrorType.PARSE_ERROR

    def test_pairs_and_sequences(self):
        a, b = EMPTY, hf(EMPTY)
        assert unpair(kpair(a, b)) == (a, b)
        assert unpair(kpair(b, b)) == (b, b)
        assert unpair(von_neumann(3)) is None
        assert seq_values(seq_function([b, a, b])) == (b, a, b)
        assert seq_values(hf(kpair(von_neumann(1), a))) is None

    def test_transitive_closure(self):
        assert transitive_closure(hf(von_neumann(2))) == [EMPTY, hf(EMPTY), von_neumann(2)]


class TestCodes:
    @given(hf_sets)
    def test_canonical_round_trip(self, x):
        assert decode_set(build_code(x)) == x

    @given(hf_sets, seeds)
    def test_scrambled_round_trip(self, x, seed):
        code = build_code_scrambled(x, seed)
        assert decode_set(code) == x
        assert decode_set(restrict_to_essdom(code)) == x

    def test_junk_top_is_not_essential(self):
        x = von_neumann(2)
        code = build_code_scrambled(x, 1)
        assert code.pre.domain == 4
        assert len(essdom(code)) == 3
        assert restrict_to_essdom(code).pre.domain == 3

    def test_literal(self):
        code = build_code(hf(EMPTY))
        assert format_code(code) == 'code(1; 1; 2)'
        assert decode_set(parse_code('code(1; 1; 2)')) == hf(EMPTY)
        assert decode_set(empty_code()) == EMPTY
        with pytest.raises(RealizabilityError) as info:
            parse_code('code(1; 1)')
        assert info.value.error_type == ErrorType.PARSE_ERROR

    @pytest.mark.parametrize('edges,domain', [
        ([(0, 1), (1, 0)], 2),
        ([(0, 2), (1, 2)], 3),
        ([(0, 1), (0, 2)], 3),
        ([], 0),
    ])
    def test_invalid_precodes(self, edges, domain):
        with pytest.raises(RealizabilityError) as info:
            make_precode(edges, domain)
        assert info.value.error_type == ErrorType.INVALID_CODE


class TestCodeOperations:
    def test_subset_and_match(self):
        two, one = build_code(von_neumann(2)), build_code(von_neumann(1))
        assert subset_check(one, two, one.rho, two.rho) == 1
        assert subset_check(two, one, two.rho, one.rho) == 0
        assert decode_match(one, two, one.rho) == element_node(two, von_neumann(1))
        assert decode_match(two, one, two.rho) is None

    def test_equality_across_scrambled_codes(self):
        x = hf(EMPTY, hf(EMPTY))
        canonical = build_code(x)
        assert canonical.pre.ranks[canonical.rho] == 2
        for seed in (0, 1):
            scrambled = build_code_scrambled(x, seed)
            assert nodes_equal(canonical, scrambled, canonical.rho, scrambled.rho)
            assert subset_check(scrambled, canonical, scrambled.rho, canonical.rho) == 1
            iso = build_iso(canonical, scrambled)
            assert iso is not None and is_code_iso(iso, canonical, scrambled)
        other = build_code(hf(hf(EMPTY)))
        assert not nodes_equal(canonical, other, canonical.rho, other.rho)

    def test_merge(self):
        merged = merge_codes([build_code(EMPTY), build_code(hf(EMPTY)), build_code_scrambled(EMPTY, 3)])
        assert decode_set(merged) == von_neumann(2)
        assert decode_set(merge_codes([])) == EMPTY

    def test_separate(self):
        code = build_code(von_neumann(3))
        nonempty = separate(code, lambda e: len(decode_set(e)) > 0)
        assert decode_set(nonempty) == hf(von_neumann(1), von_neumann(2))
        assert decode_set(separate(code, lambda e: 0)) == EMPTY

    def test_separate_rejects_non_bits(self):
        with pytest.raises(RealizabilityError) as info:
            separate(build_code(von_neumann(2)), lambda e: 2)
        assert info.value.error_type == ErrorType.PRED_FAILURE

    @given(hf_sets, seeds)
    def test_iso_between_codes_of_one_set(self, x, seed):
        a, b = build_code(x), build_code_scrambled(x, seed)
        iso = build_iso(a, b)
        assert iso is not None
        assert is_code_iso(iso, a, b)

    def test_no_iso_between_different_sets(self):
        a, b = build_code(von_neumann(2)), build_code(hf(hf(EMPTY)))
        assert build_iso(a, b) is None
        assert not is_code_iso('nope', a, b)

    def test_first_element_depends_on_the_code(self):
        x = von_neumann(2)
        canonical, reversed_code = build_code(x), build_code_scrambled(x, 0)
        assert decode_set(first_element(canonical)) == EMPTY
        assert decode_set(first_element(reversed_code)) == hf(EMPTY)
        assert least_element(canonical) == least_element(reversed_code) == EMPTY
        assert first_element(empty_code()) is None
