import re

import pytest

from impactcap import topics
from impactcap.emotion import LexiconClassifier
from impactcap.ingest import parse_bilibili_xml

try:
    from importlib import resources
except ImportError:  # pragma: no cover
    import importlib_resources as resources

_CRITERION_RE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


@pytest.fixture(scope="session")
def classifier():
    return LexiconClassifier()


@pytest.fixture(scope="session")
def sample_log():
    data = resources.files("impactcap").joinpath("data/sample_log.xml").read_bytes()
    return parse_bilibili_xml(data)


@pytest.fixture(scope="session")
def sample_model(sample_log):
    return topics.fit_lda(topics.corpus_from_messages(sample_log.messages), seed=0)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = {}

    def mark(rep, ok: bool) -> None:
        m = _CRITERION_RE.search(getattr(rep, "nodeid", ""))
        if m:
            n = int(m.group(1))
            label = m.group(2).replace("_", " ")
            rows[n] = (label, rows.get(n, (label, True))[1] and ok)

    for rep in terminalreporter.stats.get("passed", []):
        mark(rep, True)
    for status in ("failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            mark(rep, False)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(rows):
        label, ok = rows[n]
        terminalreporter.write_line(
            f"criterion {n} ({label}): {'PASS' if ok else 'FAIL'}"
        )
