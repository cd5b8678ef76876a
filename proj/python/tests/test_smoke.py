import math
from fractions import Fraction

import pytest

import e8lp


def test_e8_gram_and_polynomial():
    g = e8lp.e8_gram()
    assert len(g) == 8 and all(g[i][i] == 2 for i in range(8))
    assert all(g[i][j] == g[j][i] for i in range(8) for j in range(8))
    assert e8lp.characteristic_polynomial_e8() == [1, -16, 105, -364, 714, -784, 440, -96, 1]


def test_theta_counts():
    counts = e8lp.theta_counts("e8", 6)
    assert counts == {Fraction(0): 1, Fraction(2): 240, Fraction(4): 2160, Fraction(6): 6720}
    assert e8lp.theta_counts("z2", 2) == {0: 1, 1: 4, 2: 4}


def test_densities_and_tables():
    assert e8lp.packing_density(8, math.sqrt(2)) == pytest.approx(math.pi**4 / 384, abs=1e-12)
    tables = e8lp.reference_tables()
    assert len(tables["table1"]) == 36 and len(tables["table2"]) == 36
    assert all(tables["table1"][n] <= tables["table2"][n] for n in range(1, 37))
    assert e8lp.record_density(24) == pytest.approx(0.0019295743)


def test_magic_function():
    value, text, err = e8lp.magic_value(0)
    assert value == pytest.approx(1, abs=1e-30)
    assert text.startswith("1") or text.startswith("0.9999")
    assert err < 1e-30
    value, _, _ = e8lp.magic_value(2, hat=True)
    assert abs(value) < 1e-30


def test_eigenbasis():
    assert e8lp.eigenbasis_values(8, 3, 0.0) == pytest.approx([1.0, 1.0, 1.0])
    r = 0.7
    assert e8lp.eigenbasis_values(1, 1, r)[0] == pytest.approx(math.exp(-math.pi * r * r))


def test_lp_bound_dimension_one():
    out = e8lp.lp_bound(1)
    assert out["valid"]
    assert out["bound"] == pytest.approx(1.0, rel=5e-3)
    assert out["bound"] >= e8lp.record_density(1)


def test_run_and_errors():
    code, report = e8lp.run("lattice", "info", target="e8")
    assert code == 0
    assert report["kissing"] == 240
    with pytest.raises(e8lp.ConfigError):
        e8lp.run("lattice", "info", target="e8", bogus=1)
    with pytest.raises(ValueError):
        e8lp.run("lp", "bound", dim=99)
