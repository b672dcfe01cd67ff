"""Shared fixtures: the 24-video tagged sample corpus and scripted gateways.

Also prints one PASS/FAIL line per acceptance criterion after a run that
included tests/test_acceptance.py.
"""

import pytest

from vmx import sampledata
from vmx.corpus import load_corpus
from vmx.gateway import Backend, GatewayConfig, ModelGateway, Script

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        CRITERIA = {}
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for nodeid in sorted(_acceptance_results):
        outcome = _acceptance_results[nodeid]
        name = nodeid.split("::")[-1].split("[")[0]
        label = CRITERIA.get(name, name)
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"  {status}  {label}")


@pytest.fixture(scope="session")
def sample_manifest(tmp_path_factory):
    dest = tmp_path_factory.mktemp("sample-corpus")
    return sampledata.write_corpus(sampledata.sample_plans(), dest)


@pytest.fixture(scope="session")
def sample_corpus(sample_manifest):
    corpus = load_corpus(sample_manifest)
    assert not corpus.ingest_report
    return corpus


@pytest.fixture
def gateway():
    return ModelGateway(GatewayConfig(backend=Backend.SCRIPTED))


@pytest.fixture
def make_gateway():
    def factory(script: Script | None = None, **config_kwargs) -> ModelGateway:
        config = GatewayConfig(backend=Backend.SCRIPTED, **config_kwargs)
        return ModelGateway(config, script=script)

    return factory
