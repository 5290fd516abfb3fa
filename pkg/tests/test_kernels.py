import os
import subprocess
import sys

import numpy as np
import pytest

from zeromodes import _kernels_py, kernels, numeric
from zeromodes.model import PotentialParams

compiled = pytest.importorskip("zeromodes._kernels")


@pytest.fixture
def shooter():
    return numeric._Shooter(PotentialParams(2.5, 0.7), numeric.Grid.from_spacing(-15, 15, 0.01))


def test_selected_backend():
    expected = "python" if os.environ.get("ZEROMODES_PURE_PYTHON") else "cython"
    assert kernels.BACKEND == expected


def test_matching_function_backends_agree(shooter):
    ks = np.linspace(0.71, 3.5, 57)
    args = (shooter.v_half, shooter.h, shooter.i_match, shooter.v_left, shooter.v_right)
    fast = compiled.matching_function(ks, *args)
    slow = _kernels_py.matching_function(ks, *args)
    np.testing.assert_allclose(fast, slow, rtol=1e-12, atol=1e-14)
    assert np.all(np.abs(fast) <= 1.0 + 1e-15)


def test_integrate_path_backends_agree(shooter):
    args = (1.9, shooter.v_half, shooter.h, shooter.i_match, shooter.v_left, shooter.v_right)
    fast = compiled.integrate_path(*args)
    slow = _kernels_py.integrate_path(*args)
    for a, b in zip(fast[:3], slow[:3]):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(fast[3], slow[3], rtol=1e-12)


def test_renormalisation_keeps_values_finite():
    p = PotentialParams(40.0, 0.0)
    s = numeric._Shooter(p, numeric.Grid.from_spacing(-25, 25, 0.01))
    f = s.match(np.array([5.0, 20.0, 39.0]))
    assert np.all(np.isfinite(f))
    u, w, scale, _ = kernels.integrate_path(39.0, s.v_half, s.h, s.i_match, s.v_left, s.v_right)
    assert np.all(np.isfinite(u)) and scale.max() > 100


def test_pure_python_fallback_end_to_end():
    code = (
        "from zeromodes import kernels, numeric\n"
        "from zeromodes.model import PotentialParams\n"
        "assert kernels.BACKEND == 'python', kernels.BACKEND\n"
        "g = numeric.Grid.from_spacing(-20.0, 20.0, 0.01)\n"
        "print(' '.join(f'{r.ky:.8f}' for r in numeric.shoot_spectrum(PotentialParams(1.5, 0.5), 3.0, g)))\n"
    )
    env = dict(os.environ, ZEROMODES_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert [float(v) for v in out] == pytest.approx([1.25 ** 0.5], abs=1e-7)
