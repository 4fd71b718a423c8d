"""
Permutation operators on spin chains

Transpositions are built combinatorially (as site permutations lifted to
basis-index permutation matrices) and as Pauli tensor products. Operator
products apply the right factor first: P12 P23 |s1 s2 s3> = |s3 s1 s2>.
"""

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import permutations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import settings
from lib.logger import logger, transcription_note
from lib.statespace import BasisOrdering, SpinConfig, StateVector, make_basis
from lib.validators import DimensionError, ShapeError, SpinIndexError, ValidationError

Transposition = Tuple[int, int]


@dataclass(frozen=True)
class Permutation:
    """
    Permutation of spin positions

    `sites[k]` is the 0-based input position whose spin lands at position k.
    `provenance` lists the transpositions (1-based) as written in the operator
    product, so the rightmost one acts first.
    """
    sites: Tuple[int, ...]
    provenance: Tuple[Transposition, ...] = ()

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        if sorted(sites) != list(range(len(sites))):
            raise ValidationError(f"Not a bijection on spin positions: {sites}", "sites")
        object.__setattr__(self, 'sites', sites)

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def label(self) -> str:
        if not self.provenance:
            return "Id"
        return ''.join(f"P{i}{j}" if max(i, j) < 10 else f"P{i}_{j}" for i, j in self.provenance)

    def permute(self, sequence: Sequence) -> tuple:
        """Apply to any length-n sequence of symbols"""
        if len(sequence) != self.n:
            raise ShapeError(f"Sequence of length {len(sequence)} for a {self.n}-spin permutation")
        return tuple(sequence[s] for s in self.sites)

    def apply(self, config: SpinConfig) -> SpinConfig:
        return SpinConfig(self.permute(config.spins))

    def is_identity(self) -> bool:
        return self.sites == tuple(range(self.n))

    def inverse(self) -> 'Permutation':
        inverse_sites = [0] * self.n
        for k, s in enumerate(self.sites):
            inverse_sites[s] = k
        return Permutation(tuple(inverse_sites), tuple(reversed(self.provenance)))

    def power(self, k: int) -> 'Permutation':
        base = self if k >= 0 else self.inverse()
        result = identity(self.n)
        for _ in range(abs(k)):
            result = compose(base, result)
        return result

    def order(self) -> int:
        k, current = 1, self
        while not current.is_identity():
            current = compose(self, current)
            k += 1
        return k

    def mapping(self, ordering: BasisOrdering) -> Tuple[int, ...]:
        """0-based image position of every basis position"""
        if ordering.n != self.n:
            raise ShapeError(f"Permutation on {self.n} spins, basis on {ordering.n}", "ordering")
        return tuple(ordering.position(self.apply(c)) for c in ordering.configs)

    def cycle_notation(self, ordering: Optional[BasisOrdering] = None) -> str:
        """
        One-line cycle notation, 1-based, fixed points omitted

        Without an ordering the cycles are over spin positions (where each
        spin moves); with one they are over basis indices.
        """
        if ordering is None:
            image = self.inverse().sites
        else:
            image = self.mapping(ordering)
        return _cycles(image)


def _cycles(image: Sequence[int]) -> str:
    seen = set()
    parts = []
    for start in range(len(image)):
        if start in seen or image[start] == start:
            continue
        cycle, k = [], start
        while k not in seen:
            seen.add(k)
            cycle.append(k + 1)
            k = image[k]
        parts.append('(' + ' '.join(str(c) for c in cycle) + ')')
    return ''.join(parts) or '()'


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(n)))


def transposition(i: int, j: int, n: int) -> Permutation:
    """Exchange spins i and j (1-based)"""
    if i > j:
        i, j = j, i
    if i == j or i < 1 or j > n:
        raise SpinIndexError(f"Transposition ({i},{j}) invalid for {n} spins", "i,j")
    sites = list(range(n))
    sites[i - 1], sites[j - 1] = sites[j - 1], sites[i - 1]
    return Permutation(tuple(sites), ((i, j),))


def compose(outer: Permutation, inner: Permutation) -> Permutation:
    """outer ∘ inner: apply inner first"""
    if outer.n != inner.n:
        raise ShapeError(f"Cannot compose permutations on {outer.n} and {inner.n} spins")
    sites = tuple(inner.sites[s] for s in outer.sites)
    return Permutation(sites, outer.provenance + inner.provenance)


def product(generators: Iterable[Optional[Transposition]], n: int) -> Permutation:
    """Left-to-right operator product of transpositions; None stands for Id"""
    factors = [identity(n) if g is None else transposition(g[0], g[1], n) for g in generators]
    return reduce(compose, factors, identity(n))


def orbit(p: Permutation, config: SpinConfig) -> List[SpinConfig]:
    """Trajectory of a configuration under repeated application until it returns"""
    states = [config]
    current = p.apply(config)
    while current != config:
        states.append(current)
        current = p.apply(current)
    return states


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """
    Dense complex operator with verified property flags

    `index_map`, when present, is the exact permutation action (column k has
    its single 1 in row index_map[k]) used for integer composition and powers.
    """
    entries: np.ndarray
    label: str = ""
    index_map: Optional[Tuple[int, ...]] = None
    unitary: bool = field(init=False)
    hermitian: bool = field(init=False)
    permutation: bool = field(init=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise ShapeError(f"Operator must be a nonempty square matrix, got {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

        tol = settings.config.numerics.tolerance
        eye = np.eye(entries.shape[0])
        adjoint = entries.conj().T
        object.__setattr__(self, 'unitary', bool(np.linalg.norm(adjoint @ entries - eye) <= tol))
        object.__setattr__(self, 'hermitian', bool(np.linalg.norm(entries - adjoint) <= tol))
        object.__setattr__(self, 'permutation', _is_permutation_matrix(entries))

        if self.index_map is not None:
            index_map = tuple(int(k) for k in self.index_map)
            if not self.permutation or any(entries[r, c] != 1 for c, r in enumerate(index_map)):
                raise ValidationError(f"index_map does not match the entries of {self.label}")
            object.__setattr__(self, 'index_map', index_map)

    @classmethod
    def identity(cls, dim: int) -> 'OperatorMatrix':
        return cls(np.eye(dim), "Id", tuple(range(dim)))

    @classmethod
    def from_index_map(cls, index_map: Sequence[int], label: str = "") -> 'OperatorMatrix':
        dim = len(index_map)
        entries = np.zeros((dim, dim), dtype=complex)
        entries[list(index_map), list(range(dim))] = 1
        return cls(entries, label, tuple(index_map))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def flags(self) -> dict:
        return {'unitary': self.unitary, 'hermitian': self.hermitian, 'permutation': self.permutation}

    def dagger(self) -> 'OperatorMatrix':
        index_map = None
        if self.index_map is not None:
            inverse = [0] * self.dim
            for c, r in enumerate(self.index_map):
                inverse[r] = c
            index_map = tuple(inverse)
        return OperatorMatrix(self.entries.conj().T, f"({self.label})†", index_map)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return apply(self, other)
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        _check_dims(self, other)
        index_map = None
        if self.index_map is not None and other.index_map is not None:
            index_map = tuple(self.index_map[k] for k in other.index_map)
            return OperatorMatrix.from_index_map(index_map, self.label + other.label)
        return OperatorMatrix(self.entries @ other.entries, self.label + other.label)

    def __add__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        _check_dims(self, other)
        return OperatorMatrix(self.entries + other.entries, f"{self.label}+{other.label}")

    def __sub__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        _check_dims(self, other)
        return OperatorMatrix(self.entries - other.entries, f"{self.label}-{other.label}")

    def __mul__(self, scalar: complex) -> 'OperatorMatrix':
        return OperatorMatrix(self.entries * scalar, self.label)

    __rmul__ = __mul__

    def power(self, k: int) -> 'OperatorMatrix':
        """Integer power; exact (index composition) for permutation operators"""
        if k < 0:
            if not self.unitary:
                raise ValidationError(f"Negative power of non-unitary operator {self.label}")
            return self.dagger().power(-k)
        label = f"({self.label})^{k}"
        if self.index_map is not None:
            image = list(range(self.dim))
            for _ in range(k):
                image = [self.index_map[r] for r in image]
            return OperatorMatrix.from_index_map(image, label)
        return OperatorMatrix(np.linalg.matrix_power(self.entries, k), label)

    def frobenius_distance(self, other: Union['OperatorMatrix', np.ndarray]) -> float:
        target = other.entries if isinstance(other, OperatorMatrix) else np.asarray(other)
        if target.shape != self.entries.shape:
            raise ShapeError(f"Cannot compare {self.entries.shape} with {target.shape}")
        return float(np.linalg.norm(self.entries - target))

    def is_identity(self, tol: float = 0.0) -> bool:
        return self.frobenius_distance(np.eye(self.dim)) <= tol

    def to_json(self) -> dict:
        """Row-major [re, im] pairs"""
        return {
            'label': self.label,
            'dim': self.dim,
            'flags': self.flags,
            'entries': [[[float(z.real), float(z.imag)] for z in row] for row in self.entries],
        }

    def to_grid(self, digits: int = 4) -> str:
        """Plain-text grid; real matrices print without imaginary parts"""
        real = not np.any(np.abs(self.entries.imag) > 0)

        def cell(z: complex) -> str:
            if real:
                value = z.real
                return str(int(value)) if float(value).is_integer() else f"{value:.{digits}g}"
            return f"{z.real:+.{digits}f}{z.imag:+.{digits}f}i"

        cells = [[cell(z) for z in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return '\n'.join(' '.join(c.rjust(width) for c in row) for row in cells)


def _is_permutation_matrix(entries: np.ndarray) -> bool:
    if not np.all((entries == 0) | (entries == 1)):
        return False
    ones = entries.real.astype(int)
    return bool(np.all(ones.sum(axis=0) == 1) and np.all(ones.sum(axis=1) == 1))


def _check_dims(a: OperatorMatrix, b: OperatorMatrix):
    if a.dim != b.dim:
        raise ShapeError(f"Dimension mismatch: {a.label} is {a.dim}, {b.label} is {b.dim}")


def to_matrix(p: Permutation, ordering: Optional[BasisOrdering] = None) -> OperatorMatrix:
    """Lift a spin permutation to the basis: entry (index_of(p(c)), index_of(c)) = 1"""
    ordering = ordering or make_basis(p.n)
    return OperatorMatrix.from_index_map(p.mapping(ordering), p.label)


def transposition_matrix(i: int, j: int, n: int) -> OperatorMatrix:
    return to_matrix(transposition(i, j, n))


@lru_cache(maxsize=None)
def chain_cycle() -> OperatorMatrix:
    """Û = P12 P23 on the three-spin basis"""
    return to_matrix(compose(transposition(1, 2, 3), transposition(2, 3, 3)))


# Pauli tensor products, spin 1 is the leftmost Kronecker factor

SIGMA = {
    'x': np.array([[0, 1], [1, 0]], dtype=complex),
    'y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'z': np.array([[1, 0], [0, -1]], dtype=complex),
}
_AXES = ('x', 'y', 'z')


def _check_operator_size(n: int):
    limit = settings.config.numerics.max_operator_spins
    if not 1 <= n <= limit:
        raise DimensionError(f"Dense operators support 1..{limit} spins, got {n}", "n")


def site_operators(ops: dict, n: int) -> np.ndarray:
    """Kronecker product with ops[site] (1-based) placed at its site and identities elsewhere"""
    factors = [ops.get(site, np.eye(2, dtype=complex)) for site in range(1, n + 1)]
    return reduce(np.kron, factors)


def to_ordering(kron_matrix: np.ndarray, ordering: BasisOrdering) -> np.ndarray:
    """Re-index a matrix from the Kronecker (binary) basis to an ontological ordering"""
    b = ordering.binary_positions()
    return kron_matrix[np.ix_(b, b)]


def pauli_dot(i: int, j: int, n: int) -> np.ndarray:
    """σ_i · σ_j in the Kronecker basis"""
    return sum(site_operators({i: SIGMA[a], j: SIGMA[a]}, n) for a in _AXES)


def pauli_triple(i: int, j: int, k: int, n: int) -> np.ndarray:
    """σ_i · (σ_j × σ_k) in the Kronecker basis"""
    total = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for a, b, c in permutations(range(3)):
        sign = (b - a) * (c - a) * (c - b) // 2
        total += sign * site_operators({i: SIGMA[_AXES[a]], j: SIGMA[_AXES[b]], k: SIGMA[_AXES[c]]}, n)
    return total


def pauli_transposition(i: int, j: int, n: int, ordering: Optional[BasisOrdering] = None) -> OperatorMatrix:
    """P_ij = ½(σ_i·σ_j + Id)"""
    _check_operator_size(n)
    transposition(i, j, n)
    i, j = min(i, j), max(i, j)
    ordering = ordering or make_basis(n)
    kron = 0.5 * (pauli_dot(i, j, n) + np.eye(2 ** n))
    return OperatorMatrix(to_ordering(kron, ordering), f"½(σ{i}·σ{j}+Id)")


def pauli_cycle(n: int = 3, include_chiral_term: bool = True) -> OperatorMatrix:
    """
    P12 P23 = ¼(σ1·σ2 + σ1·σ3 + σ2·σ3 + Id − i σ1·(σ2×σ3))

    The four pairwise terms alone are Hermitian and give ½(Û + Û†); the
    scalar triple product carries the anti-Hermitian part of the cycle.
    """
    if n != 3:
        raise DimensionError(f"The Pauli form of the cycle is defined for 3 spins, got {n}", "n")
    kron = pauli_dot(1, 2, 3) + pauli_dot(1, 3, 3) + pauli_dot(2, 3, 3) + np.eye(8)
    label = "¼(σ1·σ2+σ1·σ3+σ2·σ3+Id"
    if include_chiral_term:
        kron = kron - 1j * pauli_triple(1, 2, 3, 3)
        label += "−iσ1·(σ2×σ3)"
    return OperatorMatrix(0.25 * to_ordering(kron, make_basis(3)), label + ")")


def apply(m: OperatorMatrix, v: StateVector) -> StateVector:
    if m.dim != v.dim:
        raise ShapeError(f"Operator {m.label} is {m.dim}-dimensional, state is {v.dim}")
    return StateVector(m.entries @ v.amplitudes, v.n)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """[a, b] = ab − ba"""
    _check_dims(a, b)
    return OperatorMatrix(a.entries @ b.entries - b.entries @ a.entries, f"[{a.label},{b.label}]")


def compare_with_fixture(
    computed: OperatorMatrix, printed: np.ndarray, identity_name: str, tol: float = 0.0
) -> float:
    """Distance to a printed matrix; the computed operator stays authoritative"""
    distance = computed.frobenius_distance(np.asarray(printed, dtype=complex))
    if distance > tol:
        transcription_note(
            identity_name,
            f"printed matrix differs from {computed.label} by {distance:.3g}",
            distance=distance,
        )
    else:
        logger.debug(f"{identity_name}: printed matrix matches {computed.label}")
    return distance
