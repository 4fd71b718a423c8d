"""
Band-limited signals on the automaton time grid

A signal with no Fourier content above ω_max is fixed by its values at
tₙ = n·l, l = π/ω_max, through f(t) = Σₙ f(tₙ)·sin[ω_max(t−tₙ)]/[ω_max(t−tₙ)].
Only finite symmetric windows of n are ever summed; every reconstruction
reports the window it used.
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import settings
from lib.logger import logger
from lib.validators import DegenerateInputError, ValidationError
from schemas.reports import ReconstructionPoint, ReconstructionSweep


@dataclass(frozen=True)
class Signal:
    """Evaluable signal with an optional known bandwidth"""
    name: str
    function: Callable[[np.ndarray], np.ndarray]
    bandwidth: Optional[float] = None

    def __call__(self, t):
        return self.function(np.asarray(t, dtype=float))


def make_signal(name: str, frequency: float = 1.0) -> Signal:
    """cos, sin, cexp, sinc or const at angular frequency `frequency`"""
    w = float(frequency)
    factories = {
        'cos': lambda t: np.cos(w * t),
        'sin': lambda t: np.sin(w * t),
        'cexp': lambda t: np.exp(1j * w * t),
        'sinc': lambda t: np.sinc(w * t / math.pi),
        'const': lambda t: np.ones_like(t),
    }
    if name not in factories:
        raise ValidationError(f"Unknown signal '{name}', expected one of: {', '.join(factories)}", "signal")
    return Signal(name, factories[name], 0.0 if name == 'const' else abs(w))


@dataclass(frozen=True, eq=False)
class SampledSignal:
    omega_max: float
    indices: Tuple[int, ...]
    values: np.ndarray
    signal_bandwidth: Optional[float] = None

    def __post_init__(self):
        if not self.omega_max > 0:
            raise ValidationError(f"omega_max must be positive, got {self.omega_max}", "omega_max")
        indices = tuple(int(n) for n in self.indices)
        if not indices:
            raise DegenerateInputError("A sampled signal needs at least one sample", "n_range")
        if len(set(indices)) != len(indices):
            raise ValidationError("Sample indices must be unique", "indices")
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.shape[0] != len(indices):
            raise ValidationError(f"{len(indices)} indices but {values.shape[0]} values", "values")
        values.setflags(write=False)
        object.__setattr__(self, 'indices', indices)
        object.__setattr__(self, 'values', values)

    @property
    def spacing(self) -> float:
        return math.pi / self.omega_max

    @property
    def times(self) -> np.ndarray:
        return np.array(self.indices, dtype=float) * self.spacing

    @property
    def window(self) -> Tuple[int, int]:
        return min(self.indices), max(self.indices)

    @property
    def aliased(self) -> bool:
        return self.signal_bandwidth is not None and self.signal_bandwidth > self.omega_max

    def __len__(self) -> int:
        return len(self.indices)

    def to_rows(self) -> List[Tuple[int, float, float, float]]:
        """(n, t_n, re, im) per sample"""
        return [(n, float(t), float(v.real), float(v.imag))
                for n, t, v in zip(self.indices, self.times, self.values)]


def _index_range(n_range: Union[Tuple[int, int], Iterable[int]]) -> List[int]:
    if isinstance(n_range, tuple) and len(n_range) == 2:
        n_min, n_max = n_range
        return list(range(int(n_min), int(n_max) + 1))
    return [int(n) for n in n_range]


def sample(f: Union[Signal, Callable], omega_max: float,
           n_range: Union[Tuple[int, int], Iterable[int]],
           signal_bandwidth: Optional[float] = None) -> SampledSignal:
    """Values of f at tₙ = n·π/ω_max; a 2-tuple n_range is inclusive"""
    if not omega_max > 0:
        raise ValidationError(f"omega_max must be positive, got {omega_max}", "omega_max")
    indices = _index_range(n_range)
    if not indices:
        raise DegenerateInputError(f"Empty sample range {n_range}", "n_range")

    if signal_bandwidth is None and isinstance(f, Signal):
        signal_bandwidth = f.bandwidth
    times = np.array(indices, dtype=float) * (math.pi / omega_max)
    values = np.asarray(f(times), dtype=complex)

    sampled = SampledSignal(omega_max, tuple(indices), values, signal_bandwidth)
    if sampled.aliased:
        logger.warning(
            f"Signal bandwidth {signal_bandwidth:g} exceeds omega_max {omega_max:g}; reconstruction will alias"
        )
    return sampled


_NODE_ULPS = 8


def sinc_kernel(u: np.ndarray, cutoff: Optional[float] = None,
                scale: Optional[np.ndarray] = None) -> np.ndarray:
    """
    sin(πu)/(πu) for u = (t − tₙ)/l

    The sine is taken of the distance to the nearest integer, and |πu| below
    the cutoff uses 1 − x²/6. Arguments within a few ulps of `scale` from a
    nonzero integer are nodes and give exactly 0.
    """
    cutoff = settings.config.sampling.taylor_cutoff if cutoff is None else cutoff
    u = np.asarray(u, dtype=float)
    scale = np.maximum(1.0, np.abs(u)) if scale is None else scale
    nearest = np.round(u)
    fraction = u - nearest
    x = math.pi * u
    sign = np.where(nearest % 2 == 0, 1.0, -1.0)
    small = np.abs(x) < cutoff
    with np.errstate(divide='ignore', invalid='ignore'):
        regular = sign * np.sin(math.pi * fraction) / x
    kernel = np.where(small, 1.0 - x * x / 6.0, regular)
    node = (np.abs(fraction) <= _NODE_ULPS * np.finfo(float).eps * scale) & (nearest != 0)
    return np.where(node, 0.0, kernel)


def reconstruct_many(s: SampledSignal, ts: Sequence[float]) -> np.ndarray:
    """Truncated sinc series at every t"""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    indices = np.array(s.indices, dtype=float)
    position = ts / s.spacing
    u = position[:, None] - indices[None, :]
    # rounding in t/l grows with |t/l| and |n|
    scale = np.maximum(1.0, np.abs(position)[:, None] + np.abs(indices)[None, :])
    return sinc_kernel(u, scale=scale) @ s.values


def reconstruct(s: SampledSignal, t: float) -> complex:
    return complex(reconstruct_many(s, [t])[0])


def reconstruct_sweep(s: SampledSignal, ts: Sequence[float],
                      oracle: Optional[Callable] = None) -> ReconstructionSweep:
    """Reconstruction over a grid, with absolute errors when the true signal is known"""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    values = reconstruct_many(s, ts)
    errors = None
    if oracle is not None:
        errors = np.abs(values - np.asarray(oracle(ts), dtype=complex))

    points = [
        ReconstructionPoint(
            t=float(t), re=float(v.real), im=float(v.imag),
            abs_error=None if errors is None else float(errors[k]),
        )
        for k, (t, v) in enumerate(zip(ts, values))
    ]
    return ReconstructionSweep(
        omega_max=s.omega_max,
        spacing=s.spacing,
        window=s.window,
        sample_count=len(s),
        signal_bandwidth=s.signal_bandwidth,
        aliased=s.aliased,
        points=points,
        max_abs_error=None if errors is None or not len(errors) else float(np.max(errors)),
    )


def automaton_time_bridge(T: float, n: int) -> float:
    """tₙ = n·T: the automaton tick T plays the role of the spacing l"""
    if not T > 0:
        raise ValidationError(f"Timestep must be positive, got {T}", "T")
    return n * T
