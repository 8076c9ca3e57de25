import random

import pytest

_criteria: list[tuple[int, str, str]] = []


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def criterion(record_property):
    """Attach ``(number, summary)`` to the test; the outcome decides PASS/FAIL."""

    class Note:
        def __call__(self, number: int, summary: str) -> None:
            record_property("criterion", (number, summary))

        def detail(self, text: str) -> None:
            record_property("criterion_detail", text)

    return Note()


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        number, summary = props["criterion"]
        if "criterion_detail" in props:
            summary = f"{summary} [{props['criterion_detail']}]"
        _criteria.append((number, "PASS" if report.passed else "FAIL", summary))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, summary in sorted(_criteria):
        terminalreporter.write_line(f"{status} criterion {number:2d}: {summary}")
