import os

import pytest

from config import Config, config
from main import OK, REFUSED, USAGE, cmd_dispatch


def run(capsys, *argv):
    code = cmd_dispatch(list(argv))
    return code, capsys.readouterr().out.strip().splitlines()


class TestCodingCommands:
    def test_encode_ordset(self, capsys):
        code, out = run(capsys, 'encode', '--ordset', '{0}')
        assert code == OK and out == ['01011']

    def test_encode_then_decode_set(self, capsys):
        _, out = run(capsys, 'encode', '--set', '{{},{{}}}', '--seed', '1')
        code, decoded = run(capsys, 'decode', '--code', out[0])
        assert code == OK and decoded == ['{{},{{}}}']

    def test_decode_tape(self, capsys):
        code, out = run(capsys, 'decode', '--tape', '011')
        assert code == OK and out == ['{}']


class TestEval:
    def test_delta0(self, capsys):
        assert run(capsys, 'eval', '--formula', '(eq {} {})') == (OK, ['1'])
        assert run(capsys, 'eval', '--formula', '(mem {} {})') == (OK, ['0'])

    def test_assignment_and_brute_force(self, capsys):
        assert run(capsys, 'eval', '--formula', '(mem x0 x1)', '--assign', 'x0={};x1={{}}') == (OK, ['1'])
        assert run(capsys, 'eval', '--formula', '(ex (x0) (mem x0 x0))', '--rank', '3') == (OK, ['0'])

    def test_formula_from_file(self, capsys, temp_dir):
        path = os.path.join(temp_dir, 'phi.txt')
        with open(path, 'w') as f:
            f.write('(mem {} {{}})\n')
        assert run(capsys, 'eval', '--formula', '@' + path) == (OK, ['1'])

    def test_parse_error_is_a_usage_error(self, capsys):
        code, out = run(capsys, 'eval', '--formula', '(mem x0)')
        assert code == USAGE
        assert 'parse_error' in out[-1]

    def test_missing_file(self, capsys, temp_dir):
        code, _ = run(capsys, 'eval', '--formula', '@' + os.path.join(temp_dir, 'absent'))
        assert code == USAGE


class TestRealiserCommands:
    def test_realize_then_verify(self, capsys):
        code, out = run(capsys, 'realize', '--formula', '(ex (x0) (mem x0 {{}}))')
        assert code == OK
        assert run(capsys, 'verify', '--realizer', out[0], '--formula', '(ex (x0) (mem x0 {{}}))') == (OK, ['1'])

    def test_false_formula_is_refused(self, capsys):
        code, _ = run(capsys, 'realize', '--formula', '(mem {} {})')
        assert code == REFUSED

    def test_realize_axiom_with_default_variables(self, capsys):
        code, out = run(capsys, 'realize', '--axiom', 'delta0-separation', '--formula', '(mem {} x0)')
        assert code == OK and out[0].startswith('(realizer')

    def test_unknown_axiom(self, capsys):
        code, _ = run(capsys, 'realize', '--axiom', 'replacement')
        assert code == USAGE

    def test_realize_needs_something(self, capsys):
        assert run(capsys, 'realize')[0] == USAGE

    def test_verify_rejects_a_wrong_realiser(self, capsys):
        code, out = run(capsys, 'verify', '--realizer', '(realizer (lam z (pair 0 P)) nil)',
                        '--formula', '(or (bot) (eq {} {}))')
        assert (code, out) == (REFUSED, ['0'])

    def test_extract_branch(self, capsys):
        _, out = run(capsys, 'realize', '--formula', '(or (bot) (eq {} {}))')
        code, extracted = run(capsys, 'extract', '--realizer', out[0], '--formula', '(or (bot) (eq {} {}))')
        assert code == OK and extracted[0] == 'branch 1'

    def test_fuel_after_the_subcommand(self, capsys, override_config):
        code, _ = run(capsys, 'verify', '--realizer', '(realizer (lam x x) nil)', '--formula', '(imp (bot) (bot))',
                      '--fuel', '5000')
        assert code == OK


class TestGluedCommands:
    def test_glued_verify_unknown(self, capsys, temp_dir):
        oracle = os.path.join(temp_dir, 'empty.db')
        open(oracle, 'w').close()
        code, out = run(capsys, 'glued-verify', '--realizer', '(realizer (lam x x) nil)',
                        '--formula', '(imp (ex (x0) (mem x0 x0)) (bot))', '--oracle', oracle)
        assert (code, out) == (REFUSED, ['unknown'])

    def test_dp_extract(self, capsys):
        oracle = os.path.join(os.path.dirname(__file__), 'specs', 'oracle.db')
        _, out = run(capsys, 'realize', '--formula', '(or (bot) (eq {} {}))')
        code, extracted = run(capsys, 'dp-extract', '--realizer', out[0], '--formula', '(or (bot) (eq {} {}))',
                              '--oracle', oracle)
        assert code == OK and extracted[0] == 'branch 1'

    def test_dp_extract_refuses_a_wrong_realiser(self, capsys):
        oracle = os.path.join(os.path.dirname(__file__), 'specs', 'oracle.db')
        code, out = run(capsys, 'dp-extract', '--realizer', '(realizer (lam z (pair 0 P)) nil)',
                        '--formula', '(or (bot) (eq {} {}))', '--oracle', oracle)
        assert code == REFUSED and out[-1].startswith('❌')


class TestBatchCommands:
    def test_run_otm(self, capsys):
        code, out = run(capsys, 'run-otm', '--program', 'member', '--input', '01011', '--param', '1')
        assert code == OK and out[0].startswith('✅ halted')

    def test_corpus(self, capsys, temp_dir):
        path = os.path.join(temp_dir, 'corpus.tsv')
        code, _ = run(capsys, 'corpus', '--count', '5', '--output', path)
        assert code == OK and os.path.exists(path)

    def test_corpus_bad_depth(self, capsys):
        assert run(capsys, 'corpus', '--depth', '-1')[0] == USAGE

    def test_suite(self, capsys, temp_dir):
        code, out = run(capsys, 'suite', '--only', '1', '--scale', '0.01', '--output', temp_dir)
        assert code == OK
        assert os.path.exists(os.path.join(temp_dir, 'suite_summary.json'))

    @pytest.mark.parametrize('argv', [[], ['frobnicate'], ['encode'], ['eval', '--mode', 'fast', '--formula', '(bot)']])
    def test_argument_errors(self, capsys, argv):
        assert cmd_dispatch(argv) == USAGE


class TestConfiguration:
    EXAMPLE = os.path.join(os.path.dirname(__file__), 'specs', 'config.example.yaml')

    def test_yaml_layering(self):
        layered = Config.from_yaml(self.EXAMPLE)
        assert layered.DEFAULT_FUEL == 400000
        assert layered.SCRAMBLE_SEEDS == (0, 1)

    def test_config_flag(self, capsys, override_config):
        assert run(capsys, '--config', self.EXAMPLE, 'eval', '--formula', '(bot)') == (OK, ['0'])
        assert config.DEFAULT_FUEL == 400000

    def test_unknown_keys_are_rejected(self, capsys, temp_dir, override_config):
        path = os.path.join(temp_dir, 'bad.yaml')
        with open(path, 'w') as f:
            f.write('FUEL: 3\n')
        code, out = run(capsys, '--config', path, 'eval', '--formula', '(bot)')
        assert code == USAGE and 'configuration' in out[-1]

    def test_out_of_range_rank(self, capsys, override_config):
        assert run(capsys, '--universe-rank', '9', 'eval', '--formula', '(bot)')[0] == USAGE
        assert config.UNIVERSE_RANK == 2

    def test_missing_config_file(self, capsys, temp_dir, override_config):
        assert run(capsys, '--config', os.path.join(temp_dir, 'absent.yaml'), 'eval', '--formula', '(bot)')[0] == USAGE
