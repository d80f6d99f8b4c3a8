import pytest
from hypothesis import strategies as st

from l2rank import kernels
from l2rank.presentations import Word


def words(rank, max_len=12):
    letters = st.tuples(st.integers(0, rank - 1), st.sampled_from((1, -1)))
    return st.lists(letters, max_size=max_len).map(lambda ls: Word(rank, tuple(ls)))


@st.composite
def ranked_words(draw, max_rank=4, max_len=12):
    rank = draw(st.integers(1, max_rank))
    return rank, draw(words(rank, max_len))


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return kernels.available_backends()[request.param]


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[number])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
