import numpy as np
import pytest

from ericksen.potential import PotentialSpec, w_deriv, w_eval


QUARTIC = PotentialSpec(s_plus=1.0, w0=1.0)


def test_wells_are_depth_zero():
    assert w_eval(QUARTIC, 0.0) == 0.0
    assert w_eval(QUARTIC, 1.0) == 0.0


def test_quartic_value():
    # direct evaluation of w0 * s^2 (s_plus - s)^2 at s = 1/2
    assert w_eval(QUARTIC, 0.5) == pytest.approx(0.0625, abs=1e-15)


def test_deriv_at_wells_and_midpoint():
    assert w_deriv(QUARTIC, 0.0) == 0.0
    assert w_deriv(QUARTIC, 0.5) == pytest.approx(0.0, abs=1e-15)
    # analytic derivative of s^2(1-s)^2: 2s(1-s)(1-2s) = 0.1875 at s = 0.25,
    # confirmed by the centered-difference cross-check below
    assert w_deriv(QUARTIC, 0.25) == pytest.approx(0.1875, abs=1e-15)


@pytest.mark.parametrize("spec", [
    QUARTIC,
    PotentialSpec(s_plus=0.7, w0=2.3),
    PotentialSpec(s_plus=0.7, w0=2.3, barrier_enabled=True),
])
def test_well_symmetry(spec):
    rng = np.random.default_rng(7)
    s = rng.uniform(0.0, spec.s_plus, size=10_000)
    w1 = w_eval(spec, s)
    w2 = w_eval(spec, spec.s_plus - s)
    # the absolute floor covers reflection roundoff of s_plus - s next to the wells
    tol = 1e-12 * np.abs(w1) + 4e-16 * spec.w0
    assert np.all(np.abs(w1 - w2) <= tol)


def test_positive_away_from_wells():
    rng = np.random.default_rng(3)
    s = rng.uniform(-0.45, 0.95, size=5000)
    s = s[(np.abs(s) > 1e-8) & (np.abs(s - 1.0) > 1e-8)]
    assert np.all(w_eval(QUARTIC, s) > 0.0)


def test_deriv_matches_centered_difference():
    spec = QUARTIC
    s = np.linspace(-0.4, 0.9, 1301)
    h = 1e-5
    fd = (w_eval(spec, s + h) - w_eval(spec, s - h)) / (2 * h)
    assert np.max(np.abs(fd - w_deriv(spec, s))) <= 1e-6


def test_barrier_blows_up_and_respects_domain():
    spec = PotentialSpec(s_plus=0.6, w0=1.0, barrier_enabled=True)
    assert w_eval(spec, -0.499999) > 1e3
    assert w_eval(spec, 0.9999999) > 1e3
    with pytest.raises(ValueError):
        w_eval(spec, -0.5)
    with pytest.raises(ValueError):
        w_eval(spec, 1.0)
    # quartic untouched inside [0, s_plus]
    assert w_eval(spec, 0.3) == w_eval(PotentialSpec(s_plus=0.6), 0.3)


def test_barrier_deriv_matches_fd():
    spec = PotentialSpec(s_plus=0.6, w0=1.2, barrier_enabled=True)
    s = np.linspace(-0.45, 0.97, 700)
    h = 1e-6
    fd = (w_eval(spec, s + h) - w_eval(spec, s - h)) / (2 * h)
    scale = np.maximum(1.0, np.abs(fd))
    assert np.max(np.abs(fd - w_deriv(spec, s)) / scale) <= 1e-5


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        PotentialSpec(s_plus=0.0)
    with pytest.raises(ValueError):
        PotentialSpec(w0=-1.0)
    with pytest.raises(ValueError):
        PotentialSpec(s_plus=1.0, barrier_enabled=True)
