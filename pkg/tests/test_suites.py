import pytest

from nonsep.errors import ValidationError
from nonsep.lab.suites import SUITES, run_suite, verify


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_small(name):
    rep = run_suite(name, seed=11, count=8)
    assert rep.passed, rep.failures
    assert len(rep.outcomes) == 8


@pytest.mark.parametrize("name", sorted(SUITES))
def test_corrupt_case_is_caught(name):
    rep = run_suite(name, seed=11, count=3, inject_corrupt=True)
    assert not rep.passed
    assert [f.index for f in rep.failures] == [3]


def test_deterministic_and_threads_agree(monkeypatch):
    a = run_suite("thm5", seed=4, count=6).to_dict()
    monkeypatch.setenv("NONSEP_THREADS", "3")
    b = run_suite("thm5", seed=4, count=6).to_dict()
    assert a == b


def test_verify_all_and_unknown():
    reps = verify("all", seed=2, count=2)
    assert [r.suite for r in reps] == list(SUITES)
    with pytest.raises(ValidationError):
        run_suite("nope")
