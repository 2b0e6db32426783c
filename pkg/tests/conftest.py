from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "exact",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


def nonzero_rationals(limit: int = 30):
    return st.builds(
        Fraction,
        st.integers(-limit, limit).filter(lambda n: n != 0),
        st.integers(1, limit),
    )


def positive_rationals(limit: int = 30):
    return st.builds(Fraction, st.integers(1, limit), st.integers(1, limit))


def squares(limit: int = 12):
    return st.builds(lambda p, q: Fraction(p, q) ** 2, st.integers(1, limit), st.integers(1, limit))


# -- acceptance summary ----------------------------------------------------------

import pytest

_CRITERIA: dict = {}


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.checks: list = []

    def check(self, label: str, ok: bool, note: str = "") -> bool:
        self.checks.append((label, bool(ok), note))
        return bool(ok)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)


@pytest.fixture
def criterion():
    def make(number: int, title: str) -> _Criterion:
        c = _CRITERIA.get(number)
        if c is None:
            c = _CRITERIA[number] = _Criterion(number, title)
        return c

    return make


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        c = _CRITERIA[n]
        status = "PASS" if c.ok else "FAIL"
        tr.write_line(f"C{n:<2} {status}  {c.title}")
        for label, ok, note in c.checks:
            if not ok:
                tr.write_line(f"      failed: {label}" + (f" ({note})" if note else ""))
