import math

import pytest

from gkcp2 import checks


def test_check_item_pass_flag():
    assert checks.CheckItem("a", "x", 1e-9, 1e-8).passed
    assert not checks.CheckItem("a", "x", 1e-7, 1e-8).passed
    assert not checks.CheckItem("a", "x", math.nan, 1.0).passed


def test_report_overrides():
    rep = checks.CheckReport("demo")
    rep.add("one", "x", 1e-3, 1e-4)
    rep.add("two", "y", 0.0, 1.0)
    assert not rep.passed
    rep.apply_overrides({"one": 1e-2})
    assert rep.passed and rep.get("one").tolerance == 1e-2
    with pytest.raises(KeyError):
        rep.get("three")
    assert rep.lines()[0].startswith("== demo: PASS")


def test_richardson_limit_recovers_linear_plus_quadratic():
    assert checks.richardson_limit(lambda h: 2.0 + 3 * h + 5 * h * h, 0.1) == pytest.approx(2.0, abs=1e-12)


def test_seeded_determinism():
    a = [i.residual for i in checks.run("groupoid", seed=3)[0].items]
    b = [i.residual for i in checks.run("groupoid", seed=3)[0].items]
    assert a == b


def test_area_integral():
    val, _ = checks.triangle_area_integral()
    assert abs(val - 0.5) < 1e-6
