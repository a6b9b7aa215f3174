from nmdiscord.validation import (
    halving_convergence,
    pseudomode_calibration,
    vanish_times_crosscheck,
)


def test_calibration_passes():
    assert pseudomode_calibration().passed


def test_calibration_rejects_wrong_coupling():
    for scale in (0.95, 1.05):
        assert not pseudomode_calibration(lambdas=(1.0,), omega_scale=scale).passed


def test_vanish_times_crosscheck():
    assert vanish_times_crosscheck().passed


def test_halving():
    res = halving_convergence(t_max=10.0)
    assert res.passed, res.detail
