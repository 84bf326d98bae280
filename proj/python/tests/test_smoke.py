import math

import numpy as np
import pytest

import sphtp


def test_cg_values():
    assert sphtp.cg(1, 0, 1, 0, 0, 0) == pytest.approx(-1 / math.sqrt(3), abs=1e-15)
    assert sphtp.cg_exact(1, 1, 1, -1, 2, 0) == "1*sqrt(1/6)"


def test_ninej():
    assert sphtp.wigner_9j([1, 1, 1, 1, 1, 1, 1, 1, 1]) == 0.0
    assert sphtp.wigner_9j([0, 1, 1, 1, 0, 1, 1, 1, 1]) == pytest.approx(-1 / 9, abs=1e-15)
    assert sphtp.wigner_9j_exact([0, 1, 1, 1, 0, 1, 1, 1, 1]) == "-1*sqrt(1/81)"


def test_wigner_d_unitary():
    d = sphtp.wigner_d(3, 0.3, 1.1, -0.7)
    assert d.shape == (7, 7)
    assert np.allclose(d @ d.conj().T, np.eye(7), atol=1e-13)


def test_d_matches_spherical_harmonic():
    a, b, g = 0.4, 1.2, 2.0
    l = 3
    d = sphtp.wigner_d(l, a, b, g)
    for m in range(-l, l + 1):
        want = math.sqrt(4 * math.pi / (2 * l + 1)) * np.conj(sphtp.sh(l, m, b, a))
        assert abs(d[m + l, l] - want) < 1e-12


def test_simulation_recovers_cross_product_path():
    rng = np.random.default_rng(0)
    x = rng.normal(size=3) + 1j * rng.normal(size=3)
    y = rng.normal(size=3) + 1j * rng.normal(size=3)
    z, _ = sphtp.cgtp_path(x, y, 1)
    s, flops = sphtp.simulate_cgtp_path(x, y, 1)
    assert flops > 0
    assert np.max(np.abs(z - s)) < 1e-10


def test_rules_and_ells():
    r = sphtp.vstp_rules(1, 1, 1, 1, 1, 1)
    assert not r["passed"] and not r["rules"][3] and not r["rules"][4]
    assert sphtp.find_valid_ells(1, 1, 1) == [0, 1, 1]
    with pytest.raises(ValueError):
        sphtp.find_valid_ells(0, 0, 0)


def test_transform_round_trip():
    coeffs = {"L": 2, "blocks": [{"j": 2, "l": None, "m": [-2, -1, 0, 1, 2],
                                  "re": [0.5, -0.25, 1.0, 0.125, 0.0],
                                  "im": [0.0, 0.75, -0.5, 0.0, 0.25]}]}
    samples = sphtp.transform_inverse(coeffs, Lg=4)
    assert samples["grid"]["Lg"] == 4
    back = sphtp.transform_forward(samples)
    blocks = {b["j"]: b for b in back["blocks"]}
    assert np.allclose(blocks[2]["re"], coeffs["blocks"][0]["re"], atol=1e-12)
    assert np.allclose(blocks[2]["im"], coeffs["blocks"][0]["im"], atol=1e-12)
    assert np.allclose(blocks[0]["re"], 0.0, atol=1e-12)


def test_inverse_rejects_small_grid():
    coeffs = {"L": 3, "blocks": []}
    with pytest.raises(ValueError):
        sphtp.transform_inverse(coeffs, Lg=2)


def test_projected_flops():
    assert sphtp.projected_flops("cgtp_naive", "SISO", 1) == 27


def test_verify_subset():
    report = sphtp.verify("quick", filter="tsh_")
    assert report["passed"]
    assert {c["name"] for c in report["checks"]} >= {"tsh_round_trip", "tsh_equivariance"}
