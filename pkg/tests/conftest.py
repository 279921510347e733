import pytest

from quantkit.boolalg import FiniteBooleanAlgebra
from quantkit.semantics import FunctionalModel
from quantkit.terms import Signature


@pytest.fixture
def sig_pr():
    return Signature({"f": 1, "c": 0}, {"P": 1, "R": 2}, with_equality=True)


@pytest.fixture
def two_model():
    """Domain {a,b}, B=2, P true exactly on a, R is 'first arg equals a or
    args equal', f swaps."""
    sig = Signature({"f": 1, "c": 0}, {"P": 1, "R": 2}, with_equality=True)
    return FunctionalModel(
        sig,
        ("a", "b"),
        FiniteBooleanAlgebra(1),
        fun_tables={
            "f": {("a",): "b", ("b",): "a"},
            "c": {(): "a"},
        },
        rel_tables={
            "P": {("a",): 1, ("b",): 0},
            "R": {("a", "a"): 1, ("a", "b"): 1, ("b", "a"): 0, ("b", "b"): 1},
        },
    )
