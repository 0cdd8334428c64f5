import pytest

from symlab.core import ToleranceContext
from symlab.suites import (
    SUITES,
    CounterExample,
    coexistence_grid_verdict,
    diagonal_rotation_instance,
    random_ordered_effect_pair,
    relation_holds,
    run_suite,
)
from symlab.core import random_hermitian, rng_for
from symlab.order import loewner_le


SMALL = {
    "T2.2-dagger": dict(dim=2, trials=60),
    "T2.3-hyperplane": dict(dim=3, trials=60),
    "MEAN-sym": dict(dim=3, trials=30),
    "VAU-order": dict(dim=2, trials=20),
    "T3.1-uhlhorn": dict(dim=3, trials=6),
    "T3.2-ludwig": dict(dim=3, trials=4),
    "T3.3-bicommutant": dict(dim=4, trials=20),
    "T4.1-gleason": dict(dim=3, trials=15),
    "T4.2-commutativity": dict(dim=3, trials=2),
    "COEX-oracle": dict(dim=2, trials=15),
}


@pytest.mark.parametrize("suite_id", sorted(SUITES))
def test_all_suites_pass_small(suite_id):
    out = run_suite(suite_id, seed=31, **SMALL[suite_id])
    assert out.passed, out.details
    assert out.counterexample is None
    assert out.max_residual >= out.mean_residual >= 0.0


def test_run_suite_unknown_id():
    with pytest.raises(KeyError):
        run_suite("T0.0-nothing")


def test_run_suite_defaults():
    out = run_suite("T2.2-dagger", seed=32)
    assert out.passed and out.trials > 0 and out.dim >= 2


def test_relation_holds_names():
    import numpy as np

    a, b = np.diag([1.0, 2.0]), np.diag([2.0, 3.0])
    assert relation_holds("le", a, b) is True
    assert relation_holds("adjacent", a, a + np.diag([1.0, 0.0])) is True
    assert relation_holds("commute", a, b) is True
    with pytest.raises(ValueError):
        relation_holds("friends", a, b)


def test_ordered_effect_pair_is_ordered():
    for k in range(100):
        a, b = random_ordered_effect_pair(3, rng_for((33, k)))
        assert loewner_le(a, b)
        assert loewner_le(b, __import__("numpy").eye(3))


def test_grid_verdict_matches_known_cases():
    import numpy as np

    # commuting diagonal effects always admit a witness
    a, b = np.diag([0.6, 0.2]).astype(complex), np.diag([0.3, 0.9]).astype(complex)
    assert coexistence_grid_verdict(a, b) == "yes"
    # orthogonal-ish noncommuting projections do not
    rng = rng_for(34)
    p, q = diagonal_rotation_instance(rng, projections=True)
    assert coexistence_grid_verdict(p, q) == "no"


def test_counterexample_shapes():
    import numpy as np

    ce = CounterExample("le", 1e-9, np.eye(2), np.zeros((2, 2)), "note")
    assert relation_holds(ce.relation, ce.a, ce.b) is False
