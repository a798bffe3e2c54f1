import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from orbitsum.algebra.laurent import VARS3, LaurentPoly
from orbitsum.cli import load_problem
from orbitsum.dde import DDE, DDEEquation, DDETerm, KernelEquation, Section

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = Path(__file__).resolve().parent.parent
PROBLEMS = ROOT / "problems"


def L3(d):
    return LaurentPoly(d, VARS3)


X = L3({(1, 0, 0): 1})
Y = L3({(0, 1, 0): 1})
T = L3({(0, 0, 1): 1})
ONE = L3({(0, 0, 0): 1})
XB = L3({(-1, 0, 0): 1})
YB = L3({(0, -1, 0): 1})


def ex1_dde():
    return DDE.single(ONE, [(X + Y, 0, 0), (ONE, 1, 0), (ONE, 0, 1)])


def ex3_system():
    return DDE(
        ("F0", "F1"),
        {
            "F0": DDEEquation(ONE, [DDETerm(ONE, 0, 0, "F1"), DDETerm(ONE, 1, 1, "F1")]),
            "F1": DDEEquation(L3({}), [DDETerm(ONE + X + Y, 0, 0, "F0"), DDETerm(Y, 1, 0, "F0")]),
        },
    )


def ex3_kernel(signs=(1, 1, 1, 1, 1)):
    """The eliminated equation for F0; ``signs`` flips individual terms."""
    S0 = LaurentPoly({(-1, 1): 1, (0, 1): 1, (1, 0): 1, (0, 0): 1})
    S1 = LaurentPoly({(-1, -1): 1, (0, 0): 1})
    a, b, c, d, e = signs
    return KernelEquation(
        2,
        S0 * S1,
        "F0",
        ONE.__mul__(L3({(0, 0, 0): e})),
        [
            (-T * XB * YB * L3({(0, 0, 0): a}), Section("F1", "x", 0)),
            (-T * XB * YB * L3({(0, 0, 0): b}), Section("F1", "y", 0)),
            (T * XB * YB * L3({(0, 0, 0): c}), Section("F1", "0", (0, 0))),
            (-T * T * (XB * YB + ONE) * XB * Y * L3({(0, 0, 0): d}), Section("F0", "y", 0)),
        ],
    )


@pytest.fixture(scope="session")
def ex1():
    return ex1_dde()


@pytest.fixture(scope="session")
def ex3():
    return ex3_system(), ex3_kernel()


@pytest.fixture(scope="session")
def problem_ex3():
    return load_problem(PROBLEMS / "ex3.dde")
