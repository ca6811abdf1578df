import numpy as np
import pytest

from tidalbundle.errors import FrameMismatchError, NullFiberError
from tidalbundle.tensors import (ADAPTED, COORDINATE, PhasePoint, SmallTensor,
                                 angular_metric, distinguished_section,
                                 lower_index, norm_and_sign, null_tolerance,
                                 raise_index)

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


def test_norm_and_sign_hand_values():
    # eta(y,y) = -4 + 1 = -3 for y = (2,1,0,0)
    nrm, eps = norm_and_sign(ETA, [2.0, 1.0, 0.0, 0.0])
    assert nrm == pytest.approx(np.sqrt(3.0))
    assert eps == -1
    # spacelike: eta(y,y) = -1 + 4 = 3
    nrm, eps = norm_and_sign(ETA, [1.0, 2.0, 0.0, 0.0])
    assert nrm == pytest.approx(np.sqrt(3.0))
    assert eps == 1


def test_null_vector_rejected():
    with pytest.raises(NullFiberError):
        norm_and_sign(ETA, [1.0, 1.0, 0.0, 0.0])
    # tol=0 disables the guard; exact zero still yields sign 0
    nrm, eps = norm_and_sign(ETA, [1.0, 1.0, 0.0, 0.0], tol=0.0)
    assert nrm == 0.0 and eps == 0


def test_null_tolerance_scales_with_components():
    assert null_tolerance([2000.0, 0, 0, 0]) == pytest.approx(1e-12 * 2000.0 ** 2)


def test_distinguished_section_unit_lengths():
    y = np.array([1.5, 0.2, -0.4, 0.1])
    l_up, l_low = distinguished_section(ETA, y)
    assert l_low @ l_up == pytest.approx(-1.0)  # timelike causal sign
    nrm, _ = norm_and_sign(ETA, y)
    np.testing.assert_allclose(l_up * nrm, y)


def test_angular_metric_annihilates_fiber():
    rng = np.random.default_rng(7)
    g = ETA + 0.1 * np.eye(4)
    for _ in range(5):
        y = rng.uniform(-1, 1, 4)
        y[0] = rng.uniform(1.5, 2.5)
        h = angular_metric(g, y)
        np.testing.assert_allclose(h @ y, np.zeros(4), atol=1e-14)
        # h is a rank-3 projector once an index is raised
        hmix = np.linalg.inv(g) @ h
        np.testing.assert_allclose(hmix @ hmix, hmix, atol=1e-14)
        assert np.trace(hmix) == pytest.approx(3.0)


def test_phase_point_caches_norm():
    p = PhasePoint.create(ETA, np.zeros(4), [2.0, 1.0, 0.0, 0.0])
    assert p.norm == pytest.approx(np.sqrt(3.0))
    assert p.causal_sign == -1
    np.testing.assert_array_equal(p.x, np.zeros(4))


def test_small_tensor_variance_checks():
    t = SmallTensor(np.eye(4), "ud")
    with pytest.raises(ValueError):
        SmallTensor(np.eye(4), "xy")
    with pytest.raises(ValueError):
        t + SmallTensor(np.eye(4), "uu")
    s = t + t
    np.testing.assert_array_equal(s.components, 2 * np.eye(4))
    assert (2.0 * t).components[1, 1] == 2.0


def test_frame_mixing_rejected():
    a = SmallTensor(np.eye(4), "ud", frame=COORDINATE)
    b = SmallTensor(np.eye(4), "ud", frame=ADAPTED)
    with pytest.raises(FrameMismatchError):
        a + b
    with pytest.raises(FrameMismatchError):
        lower_index(b, ETA, 0)


def test_raise_lower_round_trip():
    rng = np.random.default_rng(3)
    comps = rng.standard_normal((4, 4))
    g = ETA + 0.05 * np.outer([0, 1, 0, 1.0], [0, 1, 0, 1.0])
    t = SmallTensor(comps, "uu")
    down = lower_index(t, g, 1)
    assert down.variance == "ud"
    np.testing.assert_allclose(down.components, comps @ g.T, atol=1e-15)
    back = raise_index(down, g, 1)
    np.testing.assert_allclose(back.components, comps, atol=1e-14)
    with pytest.raises(ValueError):
        lower_index(down, g, 1)
