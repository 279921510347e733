import random

import pytest

from quantkit.gen import all_two_valued_models, random_model
from quantkit.laws import check_equality_axioms, check_quantifier_axioms
from quantkit.polyadic import check_polyadic_axioms
from quantkit.terms import Signature

SIG = Signature({"f": 1, "c": 0}, {"P": 1, "R": 2}, with_equality=True)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_quantifier_laws_on_random_models(seed):
    m = random_model(SIG, domain_size=seed + 1, atom_count=seed % 3 + 1,
                     rng=random.Random(seed))
    for report in check_quantifier_axioms(m, samples=25, seed=seed):
        assert report.checked > 0
        assert report.ok, (report.law, report.violations[:3])


@pytest.mark.parametrize("seed", [0, 1])
def test_equality_laws_on_random_models(seed):
    m = random_model(SIG, domain_size=seed + 2, atom_count=2, rng=random.Random(seed))
    for report in check_equality_axioms(m, samples=25, seed=seed):
        assert report.checked > 0
        assert report.ok, (report.law, report.violations[:3])


def test_equality_suite_requires_equality():
    sig = Signature({}, {"P": 1}, with_equality=False)
    m = random_model(sig, 2, 1, random.Random(0))
    with pytest.raises(ValueError):
        check_equality_axioms(m)


def test_quantifier_laws_exhaustive_two_element_spot():
    # one full pass over every 2-valued model on 2 elements with P/1
    sig = Signature({}, {"P": 1}, False)
    for m in all_two_valued_models(sig, 2):
        for report in check_quantifier_axioms(m, samples=2, seed=0):
            assert report.ok, (report.law, report.violations[:3])


def test_polyadic_laws_on_random_model():
    m = random_model(SIG, 2, 2, random.Random(4))
    for report in check_polyadic_axioms(m, samples=30, seed=4):
        assert report.checked > 0
        assert report.ok, (report.law, report.violations[:3])
