import json
import os

from reports import AgreementCase, CriterionResult, OtmAgreementReport, SuiteReport
from suite import AcceptanceSuite


class TestAcceptanceSuite:
    def test_quick_run_passes(self):
        report = AcceptanceSuite(rank=1, seed=0, scale=0.01).run(only=[1, 4], stable=True)
        assert [c.number for c in report.criteria] == [1, 4]
        assert report.passed, report.as_text()
        assert all(c.seconds is None for c in report.criteria)

    def test_identical_arguments_give_identical_reports(self):
        first = AcceptanceSuite(rank=1, seed=3, scale=0.01).run(only=[1, 3], stable=True)
        second = AcceptanceSuite(rank=1, seed=3, scale=0.01).run(only=[1, 3], stable=True)
        assert first.model_dump() == second.model_dump()

    def test_scale_never_drops_below_one_instance(self):
        suite = AcceptanceSuite(rank=1, scale=0.0)
        assert suite.size(1) == 1
        assert AcceptanceSuite(rank=1, scale=0.5).size(1) == 500

    def test_unstable_runs_record_timings(self):
        report = AcceptanceSuite(rank=1, scale=0.01).run(only=[1], stable=False)
        assert report.criteria[0].seconds is not None


class TestReports:
    def test_save(self, temp_dir):
        report = SuiteReport(rank=2, criteria=[
            CriterionResult(number=1, title="coding", passed=True, checked=4),
            CriterionResult(number=2, title="machines", passed=False, checked=2, failures=["member on 3"]),
        ])
        paths = report.save(temp_dir)
        with open(paths['json']) as f:
            summary = json.load(f)
        assert 'generated_at' not in summary
        assert summary['criteria'][1]['failures'] == ["member on 3"]
        with open(paths['text']) as f:
            text = f.read()
        assert text.rstrip().endswith('FAIL')
        assert '- member on 3' in text
        assert os.path.basename(paths['text']) == 'suite_report.txt'

    def test_agreement_report(self):
        report = OtmAgreementReport()
        report.record('member', AgreementCase(input='3 in {3}', expected='1', got='1'))
        report.record('member', AgreementCase(input='2 in {3}', expected='0', got='None'))
        assert report.agreement('member') == 0.5
        assert not report.full_agreement
        assert report.summary() == 'member: 1/2'
        assert report.agreement('append') == 1.0
