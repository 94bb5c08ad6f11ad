import json
import os

import pytest

from config import Config, TestingConfig
from services import verification

SMALL = verification.default_settings(TestingConfig)._replace(
    samples=20_000, param_sets=3, kernel_draws=50, oracle_draws=5, states=30)


@pytest.fixture(scope='module')
def report():
    return verification.run_verify(seed=42, settings=SMALL)


def test_default_settings_from_class_and_mapping():
    from_class = verification.default_settings(Config)
    assert from_class.samples == Config.VERIFY_MC_SAMPLES
    assert from_class.param_sets == Config.VERIFY_PARAM_SETS
    mapping = {name: getattr(TestingConfig, name) for name in dir(TestingConfig) if name.isupper()}
    from_mapping = verification.default_settings(mapping, samples=12_345)
    assert from_mapping.samples == 12_345
    assert from_mapping.kernel_draws == TestingConfig.VERIFY_KERNEL_DRAWS


@pytest.mark.skipif('RANGEEQ_VERIFY_MC_SAMPLES' in os.environ, reason='sample count overridden')
def test_verify_samples_default_to_mc_samples():
    assert verification.default_settings(Config).samples == Config.MC_SAMPLES
    assert TestingConfig.VERIFY_MC_SAMPLES < Config.MC_SAMPLES


def test_random_params_are_valid():
    rng = verification._stream(7, 99)
    for _ in range(50):
        params = verification.random_params(rng)
        assert 0.1 <= params.x_I <= 0.9
        assert params.Z > 0.0


def test_suite_streams_are_independent():
    a = verification._stream(42, 1).uniform(size=3)
    b = verification._stream(42, 2).uniform(size=3)
    again = verification._stream(42, 1).uniform(size=3)
    assert list(a) == list(again)
    assert list(a) != list(b)


def test_kernel_suite_passes():
    results = list(verification.check_kernel(3, SMALL))
    assert [r.anchor for r in results] == [
        'A2.bounds', 'A2.derivative', 'A6.slope', 'A2.bound_derivatives',
        'A2.translation', 'A6.reflection', 'A2.inverse',
    ]
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_every_check_passes(report):
    failed = {a: report['details'][a] for a, s in report['checks'].items() if s != 'pass'}
    assert report['passed'], failed


def test_report_contents(report):
    for anchor in ('A2.bounds', 'Eq2-1.clearing', 'Fig1.signature', 'Fig2.signature', 'Prop5.driver',
                   'Prop2.endowment', 'Prop6.neutral_midpoint', 'Sec4.4.higher_range',
                   'Sec4.4.midpoint_slope', 'Cor1.signs', 'Prop9.premium'):
        assert anchor in report['checks']
    assert set(report['diagnostics']) == {'Eq2-7.posterior_gap', 'Eq4-11.printed_gap'}
    assert report['diagnostics']['Eq4-11.printed_gap'] != 0.0
    assert report['seed'] == 42
    assert report['samples'] == 20_000


def test_renderings(report):
    parsed = json.loads(verification.render_report_json(report))
    assert parsed['checks'] == report['checks']
    text = verification.render_report_text(report)
    assert text.startswith('verification seed=42 samples=20000\n')
    assert text.endswith('PASSED\n')
    assert 'PASS  A2.bounds' in text
    assert 'diag  Eq4-11.printed_gap' in text


def test_failed_report_renders_failed():
    fake = {'seed': 1, 'samples': 10, 'checks': {'A2.bounds': 'fail'},
            'details': {'A2.bounds': 'x'}, 'diagnostics': {}, 'passed': False}
    text = verification.render_report_text(fake)
    assert 'FAIL  A2.bounds' in text
    assert text.endswith('FAILED\n')
