"""
Sinc sampling and reconstruction of band-limited signals
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from lib.sampling import (
    SampledSignal,
    automaton_time_bridge,
    make_signal,
    reconstruct,
    reconstruct_many,
    reconstruct_sweep,
    sample,
    sinc_kernel,
)
from lib.validators import DegenerateInputError, ValidationError

OFF_NODE = np.linspace(-10.0, 10.0, 100) + 0.0123

coefficients = st.floats(min_value=-10, max_value=10, allow_nan=False)


@pytest.fixture(scope="module")
def cosine():
    return make_signal('cos', 1.0)


class TestKernel:
    def test_values(self):
        assert sinc_kernel(0.0) == 1.0
        assert abs(sinc_kernel(0.5) - 2 / math.pi) <= 1e-15
        assert abs(sinc_kernel(2.5) - 1 / (2.5 * math.pi)) <= 1e-15
        assert abs(sinc_kernel(-1.5) - np.sinc(-1.5)) <= 1e-15

    def test_integers_are_exact_zeros(self):
        u = np.arange(-50, 51, dtype=float)
        kernel = sinc_kernel(u)
        assert kernel[50] == 1.0
        assert np.all(np.delete(kernel, 50) == 0.0)

    def test_small_arguments_use_series(self):
        assert sinc_kernel(1e-14) == 1.0
        assert abs(sinc_kernel(1e-7) - 1.0) <= 1e-13

    def test_matches_numpy_off_nodes(self):
        u = np.linspace(-7.3, 7.3, 57)
        assert np.max(np.abs(sinc_kernel(u) - np.sinc(u))) <= 1e-12


class TestSampling:
    def test_grid(self, cosine):
        s = sample(cosine, 2.0, (-3, 3))
        assert len(s) == 7
        assert s.window == (-3, 3)
        assert s.spacing == math.pi / 2
        assert s.to_rows()[3] == (0, 0.0, 1.0, 0.0)
        assert not s.aliased

    def test_explicit_indices(self, cosine):
        s = sample(cosine, 1.0, [0, 2, 5])
        assert s.indices == (0, 2, 5)
        assert np.allclose(s.times, [0.0, 2 * math.pi, 5 * math.pi])

    def test_aliasing_is_flagged(self):
        assert sample(make_signal('cos', 3.0), 2.0, (-10, 10)).aliased
        assert not sample(make_signal('const'), 0.5, (-10, 10)).aliased

    def test_rejects_bad_ranges(self, cosine):
        with pytest.raises(DegenerateInputError):
            sample(cosine, 2.0, (5, 4))
        with pytest.raises(ValidationError):
            sample(cosine, 0.0, (-3, 3))
        with pytest.raises(ValidationError):
            SampledSignal(2.0, (1, 1), [0.0, 0.0])
        with pytest.raises(ValidationError):
            make_signal('square')


class TestReconstruction:
    def test_nodes_are_reproduced(self, cosine):
        s = sample(cosine, 2.0, (-200, 200))
        assert np.max(np.abs(reconstruct_many(s, s.times) - s.values)) <= 1e-14

    @hyp_settings(max_examples=25, deadline=None)
    @given(st.integers(-300, 0), st.integers(0, 300), st.floats(0.25, 8.0))
    def test_nodes_are_reproduced_for_any_window(self, n_min, n_max, omega_max):
        signal = make_signal('sin', 0.2)
        s = sample(signal, omega_max, (n_min, n_max))
        assert s.window == (n_min, n_max)
        assert np.max(np.abs(reconstruct_many(s, s.times) - s.values)) <= 1e-14

    def test_cosine_off_node_error(self, cosine):
        s = sample(cosine, 2.0, (-200, 200))
        error = np.max(np.abs(reconstruct_many(s, OFF_NODE) - cosine(OFF_NODE)))
        assert error <= 1e-3

    def test_error_shrinks_as_window_doubles(self, cosine):
        errors = [
            np.max(np.abs(reconstruct_many(sample(cosine, 2.0, (-w, w)), OFF_NODE) - cosine(OFF_NODE)))
            for w in (100, 200, 400)
        ]
        assert errors[0] > errors[1] > errors[2]

    def test_complex_signal(self):
        signal = make_signal('cexp', 0.5)
        s = sample(signal, 1.0, (-300, 300))
        t = 1.234
        assert abs(reconstruct(s, t) - signal(t)) <= 1e-2

    def test_sweep_report(self, cosine):
        s = sample(cosine, 2.0, (-200, 200))
        sweep = reconstruct_sweep(s, OFF_NODE, oracle=cosine)
        assert sweep.window == (-200, 200)
        assert sweep.sample_count == 401
        assert len(sweep.points) == 100
        assert sweep.max_abs_error <= 1e-3
        assert sweep.max_abs_error == max(p.abs_error for p in sweep.points)

    def test_sweep_without_oracle(self, cosine):
        sweep = reconstruct_sweep(sample(cosine, 2.0, (-5, 5)), [0.3])
        assert sweep.max_abs_error is None
        assert sweep.points[0].abs_error is None

    @hyp_settings(max_examples=25, deadline=None)
    @given(coefficients, coefficients)
    def test_reconstruction_is_linear(self, a, b):
        indices = tuple(range(-20, 21))
        f = np.cos(0.7 * np.array(indices))
        g = np.sin(1.3 * np.array(indices))
        ts = [0.1, 2.2, -3.7]
        combined = reconstruct_many(SampledSignal(2.0, indices, a * f + b * g), ts)
        separate = (a * reconstruct_many(SampledSignal(2.0, indices, f), ts)
                    + b * reconstruct_many(SampledSignal(2.0, indices, g), ts))
        assert np.max(np.abs(combined - separate)) <= 1e-12 * (1 + abs(a) + abs(b))


def test_automaton_time_bridge():
    assert automaton_time_bridge(0.5, 4) == 2.0
    with pytest.raises(ValidationError):
        automaton_time_bridge(0.0, 1)
