import pytest

from calabi.identities import SUITES, run_suite, suite_names


@pytest.mark.parametrize("suite", suite_names())
def test_suite_outcomes_as_expected(suite):
    for entry, rep in run_suite(suite):
        assert rep.holds == entry.expect, entry.name


def test_every_suite_records_a_correction():
    # each suite that carries a rejected variant also carries its verified replacement
    for name, entries in SUITES.items():
        if any(not e.expect for e in entries):
            assert any(e.expect for e in entries), name


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_restricted_m_range():
    (entry, rep), *_ = run_suite("appendixB", ms=range(3, 5))
    assert rep.ms == (3, 4)
