from fractions import Fraction

import pytest

import cpm


def test_encodings():
    assert cpm.pair(1, 2) == 7
    assert cpm.unpair(7) == (1, 2)
    assert cpm.tuple_decode(cpm.tuple_encode([3, 1, 4]), 3) == [3, 1, 4]
    assert cpm.zeta_inv(cpm.zeta(-12)) == -12
    assert cpm.rho_inv(cpm.rho(Fraction(-684, 10))) == Fraction(-342, 5)
    assert cpm.interval_decode(cpm.interval_code("0.29", "0.41")) == (Fraction(29, 100), Fraction(41, 100))
    assert cpm.beta(13, 6) == [0, 0, 1, 1, 0, 1]
    big = 10**40
    assert cpm.unpair(cpm.pair(big, big + 1)) == (big, big + 1)


def test_catalog_queries():
    assert "radioactive" in cpm.catalog_names()
    tau = cpm.interval_code("0.29", "0.41")
    assert cpm.count_where("calibrated-orbit", {"tau": tau}) == 40
    assert cpm.probability("radioactive", {"status@2": 1}, {"tau": 2}) == Fraction(3, 4)
    states = cpm.states_where("orbit-ensemble", {"tau": tau})
    assert len(states) == 3
    assert cpm.observe("orbit-ensemble", states[0])["tau"] == tau


def test_predict_orbit():
    rows = cpm.predict("orbit", [Fraction(9, 4)], digits=6)
    assert len(rows) == 6
    for low, high in rows:
        assert low < 90 < high
    assert rows[0] == (Fraction(342, 5), Fraction(558, 5))
    low, high = cpm.predict("orbit", [3], digits=1)[0]
    assert low > high  # wraps through 0


def test_algebra():
    a = {"states": [0, 1], "observables": {"alpha": {"0": 0, "1": 1}}}
    b = {"states": [0, 1, 2], "observables": {"beta": {"0": 0, "1": 0, "2": 1}}}
    assert cpm.observationally_equivalent(a, b)
    assert not cpm.is_isomorphic(a, b)
    assert cpm.is_epimorphic(b, a)
    assert cpm.reduce(b)["states"] == [0, 2]


def test_errors_and_cli():
    with pytest.raises(cpm.CpmError):
        cpm.count_where("nowhere", {})
    with pytest.raises(cpm.Inconclusive):
        cpm.predict("orbit", [Fraction(9, 4)], digits=5, fuel=1)
    assert cpm.run(["encode", "pair", "1", "2"]) == (0, "7\n", "")
    assert cpm.run(["bogus"])[0] == 2
