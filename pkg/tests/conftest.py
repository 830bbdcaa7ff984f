import pytest
from hypothesis import HealthCheck, settings

from scalext.fields import GF, QQ, make_extension

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def qsqrt2():
    return make_extension(QQ, [-2, 0, 1])


@pytest.fixture
def f4():
    return make_extension(GF(2), [1, 1, 1])


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title, elapsed, detail = ACCEPTANCE[n]
        line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'} {elapsed:7.2f}s  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
