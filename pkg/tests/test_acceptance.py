"""One pass/fail line per acceptance criterion.

Criteria 6, 7, 9, 11 and 14 carry a literal line that cannot hold as
stated (the displayed values or statement disagree with exact
computation).  Those lines are strict xfails; everything else must pass.
Run directly (``python3 tests/test_acceptance.py``) for the summary only.
"""

import sys

import pytest

from tetra.criteria import CRITERIA, DEFAULT_SEED, run_criterion

LITERAL_FAILURES = {6, 7, 9, 11, 14}


@pytest.fixture(scope="module")
def results():
    return {}


def _result(results, k):
    if k not in results:
        results[k] = run_criterion(k, DEFAULT_SEED)
    return results[k]


def _line(r) -> str:
    verdict = "PASS" if r.status == "pass" else ("PASS (literal line xfail)" if r.status == "partial" else "FAIL")
    return f"criterion {r.number:2d} {r.title}: {verdict}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, results, capsys):
    r = _result(results, k)
    with capsys.disabled():
        print(f"\n{_line(r)} ", end="")
    failing = [l.label for l in r.lines if not l.passed and not l.literal]
    assert not failing, failing
    if k not in LITERAL_FAILURES:
        assert r.status == "pass"


@pytest.mark.parametrize("k", sorted(LITERAL_FAILURES))
@pytest.mark.xfail(strict=True, reason="the literal displayed claim disagrees with exact computation")
def test_literal_claim(k, results):
    r = _result(results, k)
    literal = [l for l in r.lines if l.literal]
    assert literal and all(l.passed for l in literal)


def test_literal_lines_exist_only_where_expected(results):
    for k in CRITERIA:
        r = _result(results, k)
        assert any(l.literal for l in r.lines) == (k in LITERAL_FAILURES)


if __name__ == "__main__":
    bad = 0
    for k in sorted(CRITERIA):
        r = run_criterion(k, DEFAULT_SEED)
        print(_line(r))
        bad += r.status == "fail"
    sys.exit(1 if bad else 0)
