import pytest

from mhad.controls import controls, run_control


@pytest.mark.parametrize("control", controls(), ids=lambda c: c.name)
def test_control_fails_only_where_targeted(control):
    out = run_control(control)
    assert out.clean_ok, "the uncorrupted fixture must pass"
    assert out.failures, "the corruption went unnoticed"
    assert not out.stray, [c.name for c in out.stray]
    assert all(c.witness is not None for c in out.failures)
