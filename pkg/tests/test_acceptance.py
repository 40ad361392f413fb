import pytest

from snpcrypt import acceptance


@pytest.mark.parametrize("check", acceptance.CRITERIA, ids=lambda c: f"AC{c.number}")
def test_criterion(check):
    res = check(acceptance.DEFAULT_SEED)
    print(res.line())
    assert res.passed, res.line()
