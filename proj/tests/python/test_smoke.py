"""Smoke tests for the python module: duality round trips, density checks,
and the config runner. Heavy statistical coverage lives in the C++ suites;
these only assert that the bindings wire through correctly."""

import math

import pytest

import minpen


def test_entropic_duality_round_trip():
    space = minpen.FiniteSpace.uniform(2)
    psi = minpen.finite_penalty("entropic", space, parameter=1.0)
    value = minpen.risk_from_penalty(space, psi, payoffs=[1.0, 0.0])
    closed = math.log(0.5 * (math.exp(-1.0) + 1.0))
    assert value == pytest.approx(closed, abs=1e-6)


def test_relative_entropy_and_minimal_penalty():
    space = minpen.FiniteSpace.uniform(2)
    q = minpen.DensityVector.from_probabilities(space, [0.7, 0.3])
    closed = 0.7 * math.log(1.4) + 0.3 * math.log(0.6)
    assert minpen.relative_entropy(space, q) == pytest.approx(closed, abs=1e-12)

    psi = minpen.finite_penalty("entropic", space, parameter=1.0)
    result = minpen.minimal_penalty(space, psi, q)
    assert result["converged"]
    assert result["value"] <= psi(q) + 1e-9
    assert result["value"] == pytest.approx(closed, abs=2e-3)


def test_density_martingale():
    model = minpen.LevyTriplet(
        0.0, True, [minpen.JumpAtom(-0.5, 1.0), minpen.JumpAtom(1.0, 0.5)]
    )
    est = minpen.martingale_check(model, 0.5, 0.2, 1.0, paths=4000, seed=7)
    assert abs(est["mean"] - 1.0) <= 4.0 * est["se"]


def test_penalty_routes_agree():
    model = minpen.LevyTriplet(0.0, True, [])
    quad = minpen.penalty_quadrature("entropic", model, 0.5, 0.0)
    assert quad == pytest.approx(0.125, abs=1e-9)
    mc = minpen.penalty_value("entropic", model, 0.5, 0.0, paths=4000, seed=9)
    assert abs(mc["mean"] - quad) <= 4.0 * mc["se"]


def test_risk_measure_brownian():
    model = minpen.LevyTriplet(0.0, True, [])
    r = minpen.risk_measure(model, "entropic", scale=0.5, paths=4000, seed=11)
    assert not r["boundary"]
    assert r["value"] == pytest.approx(0.125, abs=0.01)
    assert r["theta0"] == pytest.approx(-0.5, abs=0.1)


def test_run_config_and_errors():
    out = minpen.run_config('{"preset": "entropic_2pt"}')
    assert out["kind"] == "finite-duality"
    assert out["passed"]
    assert "checks.csv" in out["tables"]
    assert "duality.csv" in out["tables"]
    assert out["tables"]["duality.csv"].startswith("density,")

    with pytest.raises(minpen.ConfigError):
        minpen.run_config('{"kind": "unknown-kind", "seed": 1}')
