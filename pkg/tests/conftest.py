import contextlib

import pytest

from trifaith.graph import Dag, ExtendedPattern, TripleMark
from trifaith.sem import LinearSem, four_cycle_cancellation_model

CRITERIA: list[str] = []


@contextlib.contextmanager
def criterion(num: int, text: str):
    """Record a PASS/FAIL line for an acceptance criterion, re-raising failures."""
    try:
        yield
    except BaseException as exc:
        CRITERIA.append(f"FAIL  criterion {num:>2}: {text} ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})")
        raise
    CRITERIA.append(f"PASS  criterion {num:>2}: {text}")


def note(num: int, text: str) -> None:
    """Attach an informational line to a criterion's report."""
    CRITERIA.append(f"INFO  criterion {num:>2}: {text}")


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def collider_sem():
    dag = Dag("XYZ", [("X", "Z"), ("Y", "Z")])
    return LinearSem(dag, {("X", "Z"): 0.6, ("Y", "Z"): 0.7}, {v: 1.0 for v in "XYZ"})


@pytest.fixture
def chain_sem():
    # standardized chain with both coefficients 0.6
    dag = Dag("XYZ", [("X", "Y"), ("Y", "Z")])
    return LinearSem(dag, {("X", "Y"): 0.6, ("Y", "Z"): 0.6}, {"X": 1.0, "Y": 0.64, "Z": 0.64})


@pytest.fixture
def four_cycle_sem():
    return four_cycle_cancellation_model()


def ambiguous_cycle_pattern() -> ExtendedPattern:
    """Four-cycle X-Y-U-Z with two ambiguous triples and a collider A -> U <- Z."""
    return ExtendedPattern.from_graph(
        "XYZUA",
        directed=[("A", "U"), ("Z", "U")],
        undirected=[("X", "Y"), ("X", "Z"), ("Y", "A"), ("Y", "U")],
        ambiguous=[("Y", "X", "Z"), ("Z", "U", "Y")],
    )


@pytest.fixture
def ambiguous_cycle():
    return ambiguous_cycle_pattern()


__all__ = ["criterion", "note", "ambiguous_cycle_pattern", "TripleMark"]
