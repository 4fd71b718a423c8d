"""
Spin configurations, ontological basis orderings and state vectors

Basis indices are 1-based wherever they leave this module; arrays are 0-based.
"""

from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from config.settings import settings
from lib.validators import DimensionError, ShapeError, ValidationError


class Spin(IntEnum):
    UP = 1
    DOWN = -1

    @property
    def char(self) -> str:
        return 'u' if self is Spin.UP else 'd'

    @property
    def arrow(self) -> str:
        return '↑' if self is Spin.UP else '↓'


_FROM_CHAR = {'u': Spin.UP, 'd': Spin.DOWN, '↑': Spin.UP, '↓': Spin.DOWN}


@dataclass(frozen=True)
class SpinConfig:
    """Ordered spins; position 1 is the leftmost spin"""
    spins: Tuple[Spin, ...]

    def __post_init__(self):
        if len(self.spins) < 1:
            raise DimensionError("A spin configuration needs at least one spin", "spins")
        try:
            normalized = tuple(Spin(s) for s in self.spins)
        except ValueError as e:
            raise ValidationError(f"Spins must be +1 or -1: {self.spins}", "spins") from e
        object.__setattr__(self, 'spins', normalized)

    @classmethod
    def from_string(cls, text: str) -> 'SpinConfig':
        """Parse "uud" (or arrows) into a configuration"""
        try:
            return cls(tuple(_FROM_CHAR[ch] for ch in text.strip().lower()))
        except KeyError as e:
            raise ValidationError(f"Invalid spin configuration '{text}'", "config") from e

    @property
    def n(self) -> int:
        return len(self.spins)

    @property
    def up_count(self) -> int:
        return sum(1 for s in self.spins if s is Spin.UP)

    def flipped(self) -> 'SpinConfig':
        return SpinConfig(tuple(Spin(-s) for s in self.spins))

    def to_string(self) -> str:
        return ''.join(s.char for s in self.spins)

    def arrows(self) -> str:
        return ''.join(s.arrow for s in self.spins)

    def binary_index(self) -> int:
        """Position in the Kronecker product basis: up=0, down=1, spin 1 most significant"""
        index = 0
        for s in self.spins:
            index = (index << 1) | (0 if s is Spin.UP else 1)
        return index

    def __str__(self) -> str:
        return self.to_string()


# Orderings that reproduce the labelled bases |1>...|2^n>
_LISTED_ORDERS: Dict[int, Tuple[str, ...]] = {
    2: ('uu', 'ud', 'du', 'dd'),
    3: ('uuu', 'uud', 'udu', 'duu', 'ddu', 'dud', 'udd', 'ddd'),
}


def _fallback_order(n: int) -> List[str]:
    """Sort by down-spin count, then by binary value (up=0, down=1, leftmost most significant)"""
    labels = []
    for value in range(2 ** n):
        bits = format(value, f'0{n}b')
        labels.append(bits.replace('0', 'u').replace('1', 'd'))
    return sorted(labels, key=lambda s: (s.count('d'), s.replace('u', '0').replace('d', '1')))


@dataclass(frozen=True)
class BasisOrdering:
    """Bijection between configurations of n spins and basis indices 1..2^n"""
    n: int
    configs: Tuple[SpinConfig, ...]
    _positions: Dict[SpinConfig, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.configs) != 2 ** self.n or len(set(self.configs)) != len(self.configs):
            raise ValidationError(f"Ordering for n={self.n} is not a bijection", "configs")
        object.__setattr__(self, '_positions', {c: k for k, c in enumerate(self.configs)})

    @property
    def dim(self) -> int:
        return len(self.configs)

    def index_of(self, config: SpinConfig) -> int:
        """1-based basis index of a configuration"""
        return self.position(config) + 1

    def config_of(self, index: int) -> SpinConfig:
        """Configuration at a 1-based basis index"""
        if not 1 <= index <= self.dim:
            raise DimensionError(f"Basis index {index} outside [1, {self.dim}]", "index")
        return self.configs[index - 1]

    def position(self, config: SpinConfig) -> int:
        """0-based array position of a configuration"""
        if config.n != self.n:
            raise ShapeError(f"Configuration {config} has {config.n} spins, basis has {self.n}", "config")
        return self._positions[config]

    def binary_positions(self) -> np.ndarray:
        """Kronecker-basis index for each ordering position"""
        return np.array([c.binary_index() for c in self.configs], dtype=np.intp)

    def sectors(self) -> Dict[int, List[int]]:
        """0-based positions grouped by up-spin count, in basis order"""
        groups: Dict[int, List[int]] = {}
        for k, config in enumerate(self.configs):
            groups.setdefault(config.up_count, []).append(k)
        return groups

    def __iter__(self) -> Iterator[SpinConfig]:
        return iter(self.configs)

    def __len__(self) -> int:
        return self.dim


@lru_cache(maxsize=None)
def make_basis(n: int) -> BasisOrdering:
    """Ontological basis ordering for n spins"""
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= settings.config.numerics.max_spins:
        raise DimensionError(
            f"Spin count must be in [1, {settings.config.numerics.max_spins}], got {n}", "n"
        )
    labels = _LISTED_ORDERS.get(n) or _fallback_order(n)
    return BasisOrdering(n=n, configs=tuple(SpinConfig.from_string(s) for s in labels))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over an ontological basis"""
    amplitudes: np.ndarray
    n: int

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape[0] != 2 ** self.n:
            raise ShapeError(
                f"State for n={self.n} needs {2 ** self.n} amplitudes, got {amplitudes.shape[0]}",
                "amplitudes",
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def is_normalized(self, tol: float = None) -> bool:
        tol = settings.config.numerics.tolerance if tol is None else tol
        return abs(float(np.sum(self.probabilities())) - 1.0) <= tol

    def amplitude(self, config: SpinConfig, ordering: BasisOrdering) -> complex:
        return complex(self.amplitudes[ordering.position(config)])


def basis_state(config: SpinConfig, ordering: BasisOrdering) -> StateVector:
    """One-hot vector for an ontological state"""
    if config.n != ordering.n:
        raise ShapeError(f"Configuration {config} does not fit an n={ordering.n} basis", "config")
    amplitudes = np.zeros(ordering.dim, dtype=complex)
    amplitudes[ordering.position(config)] = 1.0
    return StateVector(amplitudes, ordering.n)


def superposition(
    terms: Sequence[Tuple[SpinConfig, complex]], ordering: BasisOrdering
) -> StateVector:
    """Linear combination of basis states"""
    amplitudes = np.zeros(ordering.dim, dtype=complex)
    for config, coefficient in terms:
        amplitudes[ordering.position(config)] += coefficient
    return StateVector(amplitudes, ordering.n)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in a"""
    if a.dim != b.dim:
        raise ShapeError(f"Dimension mismatch: {a.dim} vs {b.dim}", "b")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
