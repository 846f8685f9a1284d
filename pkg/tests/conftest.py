import math
import sys
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from tropirank.linsys import tr_det
from tropirank.tropcore import NEG_INF, TropMatrix

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

# Example 1 (order 2)
EX1_A = [[1, 2], [F(1, 2), 1]]
EX1_B = [[1, F(1, 3)], [3, 1]]
EX1_C = [[0, 1], [0, 0]]

# Example 2 (order 4)
EX2_A = [
    [1, 3, 4, 2],
    [F(1, 3), 1, F(1, 2), F(1, 3)],
    [F(1, 4), 2, 1, 4],
    [F(1, 2), 3, F(1, 4), 1],
]
EX2_B = [
    [1, 2, 4, 2],
    [F(1, 2), 1, F(1, 3), F(1, 2)],
    [F(1, 4), 3, 1, 4],
    [F(1, 2), 2, F(1, 4), 1],
]
EX2_C = [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]

EX2_STAR = [
    [1, 4, 2, 4],
    [F(1, 4), 1, F(1, 2), 1],
    [F(1, 2), 2, 1, 2],
    [F(1, 4), 1, F(1, 2), 1],
]


def M(rows):
    return TropMatrix.from_values(rows)


@pytest.fixture
def ex1():
    return M(EX1_A), M(EX1_B), M(EX1_C)


@pytest.fixture
def ex2():
    return M(EX2_A), M(EX2_B), M(EX2_C)


def random_reciprocal(rng, n, scale=(1, 2, 3, 4, 5)):
    """Reciprocal matrix with entries drawn from a Saaty-like ratio scale."""
    logs = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            v = math.log(rng.choice(scale))
            if rng.random() < 0.5:
                v = -v
            logs[i, j], logs[j, i] = v, -v
    return TropMatrix(logs)


def random_constraints(rng, n, density=0.3):
    """Sparse non-negative C with Tr(C) <= 1.

    Forward edges along a random order never form cycles; occasional back
    edges are kept only if the tropical determinant stays at most one.
    """
    order = rng.permutation(n)
    logs = np.full((n, n), NEG_INF)
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                logs[order[a], order[b]] = math.log(rng.uniform(0.3, 2.0))
    C = TropMatrix(logs)
    for _ in range(2):
        i, j = rng.choice(n, size=2, replace=False)
        trial = logs.copy()
        trial[i, j] = max(trial[i, j], math.log(rng.uniform(0.05, 0.8)))
        if tr_det(TropMatrix(trial)).logval <= 0:
            logs = trial
            C = TropMatrix(logs)
    return C


def random_logs(rng, n, m=None, zero_prob=0.0, spread=2.0):
    m = n if m is None else m
    logs = rng.uniform(-spread, spread, size=(n, m))
    if zero_prob:
        logs[rng.random((n, m)) < zero_prob] = NEG_INF
    return logs


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
