"""One test per acceptance criterion, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) to see just the table.
"""

import pytest

from polyperturb.checks import EXAMPLES, THEOREMS



def _number(check):
    return {"check_cubic_example": 1, "check_shift": 2, "check_hk": 3, "check_inverse_h1": 4,
            "check_kh_audit": 5, "check_factor_bound_audit": 6, "check_grace_audits": 7,
            "check_classifier": 8, "check_bottleneck_oracle": 9, "check_quadratic": 10,
            "check_metric_suite": 11}[check.__name__]


ORDERED = sorted(EXAMPLES + THEOREMS, key=_number)


@pytest.mark.parametrize("check", ORDERED, ids=[f"criterion_{_number(c):02d}_{c.__name__[6:]}"
                                                for c in ORDERED])
def test_criterion(check, acceptance_log):
    result = check(0)
    print(result.line())
    acceptance_log.append(result.line())
    assert result.number == _number(check)
    assert result.passed, result.line()


if __name__ == "__main__":
    for check in ORDERED:
        print(check(0).line())
