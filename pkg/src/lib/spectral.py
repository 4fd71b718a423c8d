"""
Cogwheel models, spectra of cyclic evolution operators, Hamiltonians and the
finite BCH identity for the three-spin cycle.

Matrix exponentials go through explicit spectral decompositions so that the
exact permutation identities hold to machine precision.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from config.settings import settings
from lib.logger import logger, transcription_note
from lib.permops import (
    OperatorMatrix,
    chain_cycle,
    compose,
    orbit,
    to_matrix,
    transposition,
    transposition_matrix,
)
from lib.statespace import BasisOrdering, SpinConfig, make_basis
from lib.validators import ContractViolationError, DimensionError, ValidationError
from schemas.reports import VerificationReport

KAPPA = complex(-0.5, math.sqrt(3) / 6)

CONVENTIONS = ('cycle', 'literal')

_PHASE_SNAP = 1e-9


def descending_phase(eigenvalue: complex) -> float:
    """Phase p in [0, 2π) with eigenvalue = e^{-ip}; 1 → 0, e^{-i2π/3} → 2π/3"""
    p = (-np.angle(eigenvalue)) % (2 * math.pi)
    if p > 2 * math.pi - _PHASE_SNAP:
        p = 0.0
    return float(p)


def _fix_phase(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first non-negligible component is real and positive"""
    fixed = vectors.copy()
    for k in range(fixed.shape[1]):
        column = fixed[:, k]
        lead = column[np.flatnonzero(np.abs(column) > tol)[0]]
        fixed[:, k] = column * (abs(lead) / lead)
    return fixed


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues and orthonormal eigenvector columns D, sorted by descending phase"""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def phases(self) -> np.ndarray:
        return np.array([descending_phase(z) for z in self.eigenvalues])

    def basis_change(self) -> OperatorMatrix:
        return OperatorMatrix(self.eigenvectors, "D")

    def orthonormality_residual(self) -> float:
        d = self.eigenvectors
        return float(np.linalg.norm(d.conj().T @ d - np.eye(d.shape[1])))

    def modulus_residual(self) -> float:
        return float(np.max(np.abs(np.abs(self.eigenvalues) - 1.0)))

    def projector(self, indices: Sequence[int]) -> np.ndarray:
        """Orthogonal projector onto span of the given (0-based) eigenvector columns"""
        columns = self.eigenvectors[:, list(indices)]
        return columns @ columns.conj().T

    def eigenspaces(self, tol: float = 1e-9) -> List[Tuple[complex, List[int]]]:
        """Group eigenvector indices by (numerically) equal eigenvalue"""
        groups: List[Tuple[complex, List[int]]] = []
        for k, value in enumerate(self.eigenvalues):
            for representative, members in groups:
                if abs(representative - value) <= tol:
                    members.append(k)
                    break
            else:
                groups.append((complex(value), [k]))
        return groups

    def reconstruct(self, values: Optional[np.ndarray] = None) -> np.ndarray:
        """D diag(values) D†, defaulting to the eigenvalues themselves"""
        values = self.eigenvalues if values is None else values
        d = self.eigenvectors
        return (d * values) @ d.conj().T


def _residual(matrix: np.ndarray, values: np.ndarray, vectors: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(matrix @ vectors - vectors * values, axis=0)))


def decompose(op: OperatorMatrix) -> SpectralDecomposition:
    """Spectral decomposition of a normal operator via the complex Schur form"""
    triangular, vectors = scipy.linalg.schur(op.entries, output='complex')
    values = np.diag(triangular).copy()
    off_diagonal = np.linalg.norm(triangular - np.diag(values))
    if off_diagonal > settings.config.numerics.projector_tolerance:
        raise ContractViolationError(
            f"{op.label} is not normal (Schur off-diagonal norm {off_diagonal:.3g})", "op"
        )
    order = np.argsort([descending_phase(z) for z in values], kind='stable')
    values, vectors = values[order], _fix_phase(vectors[:, order])
    return SpectralDecomposition(values, vectors, _residual(op.entries, values, vectors))


def sector_decomposition(op: OperatorMatrix, ordering: BasisOrdering) -> SpectralDecomposition:
    """
    Decompose block by block over spin-count sectors

    Sectors follow the basis order, and within a sector eigenpairs are sorted
    by descending phase, so eigenvectors never mix sectors.
    """
    values = np.zeros(op.dim, dtype=complex)
    vectors = np.zeros((op.dim, op.dim), dtype=complex)
    column = 0
    for positions in ordering.sectors().values():
        block = OperatorMatrix(op.entries[np.ix_(positions, positions)], f"{op.label}|sector")
        part = decompose(block)
        width = len(positions)
        values[column:column + width] = part.eigenvalues
        vectors[np.ix_(positions, range(column, column + width))] = part.eigenvectors
        column += width
    return SpectralDecomposition(values, vectors, _residual(op.entries, values, vectors))


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hermitian generator with the timestep T of one automaton tick"""
    matrix: OperatorMatrix
    timestep: float = 1.0

    def __post_init__(self):
        if not self.matrix.hermitian:
            raise ContractViolationError(f"Hamiltonian {self.matrix.label} is not Hermitian", "matrix")
        if not self.timestep > 0:
            raise ValidationError(f"Timestep must be positive, got {self.timestep}", "timestep")

    @property
    def label(self) -> str:
        return self.matrix.label

    def evolution(self, t: Optional[float] = None) -> OperatorMatrix:
        return expm_unitary(self, self.timestep if t is None else t)


@dataclass(frozen=True, eq=False)
class HamiltonianForms:
    """The same Hamiltonian in its eigenbasis and in the ontological basis"""
    diagonal: Hamiltonian
    ontological: Hamiltonian
    basis_change: np.ndarray
    convention: str = 'cycle'

    @property
    def agreement(self) -> float:
        """‖D H_diag D† − H_ontological‖_F"""
        d = self.basis_change
        rotated = d @ self.diagonal.matrix.entries @ d.conj().T
        return float(np.linalg.norm(rotated - self.ontological.matrix.entries))


def expm_unitary(h: Union[Hamiltonian, OperatorMatrix], t: float) -> OperatorMatrix:
    """exp(−i H t) through the eigendecomposition of H"""
    matrix = h.matrix if isinstance(h, Hamiltonian) else h
    if not matrix.hermitian:
        raise ContractViolationError(f"Cannot exponentiate non-Hermitian {matrix.label}", "h")
    energies, vectors = scipy.linalg.eigh(matrix.entries)
    phases = np.exp(-1j * energies * t)
    return OperatorMatrix((vectors * phases) @ vectors.conj().T, f"exp(-i{matrix.label}·{t:g})")


def exp_hermitian(generator: OperatorMatrix, angle: float) -> OperatorMatrix:
    """exp(−i·angle·G) for a Hermitian G"""
    return expm_unitary(generator, angle)


# Cogwheel models

def cogwheel_operator(N: int) -> OperatorMatrix:
    """N-state cogwheel tick: state m goes to m+1 (mod N)"""
    if N < 1:
        raise DimensionError(f"Cogwheel needs N >= 1, got {N}", "N")
    return OperatorMatrix.from_index_map([(m + 1) % N for m in range(N)], f"U{N}")


@lru_cache(maxsize=64)
def cogwheel_spectrum(N: int) -> SpectralDecomposition:
    """Eigenvalues e^{-2πik/N} with Fourier eigenvectors v_k[m] = e^{2πikm/N}/√N"""
    op = cogwheel_operator(N)
    vectors = np.conj(scipy.linalg.dft(N)) / math.sqrt(N)
    values = np.exp(-2j * math.pi * np.arange(N) / N)
    return SpectralDecomposition(values, vectors, _residual(op.entries, values, vectors))


def cogwheel_hamiltonian(N: int, T: float = 1.0) -> HamiltonianForms:
    """Diagonal form (2π/(NT))·k and its auxiliary (ontological-basis) form D·diag·D†"""
    spectrum = cogwheel_spectrum(N)
    energies = 2 * math.pi * np.arange(N) / (N * T)
    diagonal = Hamiltonian(OperatorMatrix(np.diag(energies), f"H{N}diag"), T)
    rotated = spectrum.reconstruct(energies)
    # Hermitian by construction; symmetrize away the rounding
    rotated = (rotated + rotated.conj().T) / 2
    auxiliary = Hamiltonian(OperatorMatrix(rotated, f"H{N}aux"), T)
    return HamiltonianForms(diagonal, auxiliary, spectrum.eigenvectors)


def kappa_matrix() -> np.ndarray:
    """Circulant pattern [[1, κ, κ*], [κ*, 1, κ], [κ, κ*, 1]] of the three-state auxiliary form"""
    k, kc = KAPPA, KAPPA.conjugate()
    return np.array([[1, k, kc], [kc, 1, k], [k, kc, 1]], dtype=complex)


# Three-spin chain

def check_convention(convention: Optional[str]) -> str:
    convention = convention or settings.config.perturbation.kappa_convention
    if convention not in CONVENTIONS:
        raise ValidationError(f"Unknown κ convention '{convention}', expected one of {CONVENTIONS}")
    return convention


def cycle_products() -> Dict[str, OperatorMatrix]:
    """The two three-cycles that appear in the Hamiltonian, built by integer composition"""
    p13, p23 = transposition(1, 3, 3), transposition(2, 3, 3)
    return {
        'P13P23': to_matrix(compose(p13, p23)),
        'P23P13': to_matrix(compose(p23, p13)),
    }


def permutation_generator(convention: Optional[str] = None, squared_form: bool = False) -> OperatorMatrix:
    """
    G with Û = exp(−i(2π/3)G)

    cycle:   G = Id + κ·P13P23 + κ*·P23P13, which generates P12P23
    literal: G = Id + κ*·P13P23 + κ·P23P13, which generates P13P23

    `squared_form` writes P23P13 as (P13P23)².
    """
    convention = check_convention(convention)
    cycles = cycle_products()
    forward = cycles['P13P23']
    backward = forward.power(2) if squared_form else cycles['P23P13']
    a, b = (KAPPA, KAPPA.conjugate()) if convention == 'cycle' else (KAPPA.conjugate(), KAPPA)
    entries = np.eye(8) + a * forward.entries + b * backward.entries
    return OperatorMatrix(entries, f"G[{convention}]")


@lru_cache(maxsize=1)
def chain_spectrum() -> SpectralDecomposition:
    """Eight eigenpairs of Û = P12P23, sector by sector"""
    return sector_decomposition(chain_cycle(), make_basis(3))


def chain_energies(T: float = 1.0) -> np.ndarray:
    """Energies p/T in chain_spectrum order, where eigenvalue = e^{-ip}"""
    return chain_spectrum().phases / T


def chain_hamiltonian(T: float = 1.0, convention: Optional[str] = None,
                      squared_form: bool = False) -> HamiltonianForms:
    """Eigenbasis diagonal (2π/3T)·diag{0,0,1,2,0,1,2,0} and its permutation-operator form"""
    convention = check_convention(convention)
    if not T > 0:
        raise ValidationError(f"Timestep must be positive, got {T}", "T")
    spectrum = chain_spectrum()
    energies = chain_energies(T)
    diagonal = Hamiltonian(OperatorMatrix(np.diag(energies), "Hdiag"), T)
    generator = permutation_generator(convention, squared_form)
    ontological = Hamiltonian(OperatorMatrix(generator.entries * (2 * math.pi / (3 * T)), "H"), T)
    return HamiltonianForms(diagonal, ontological, spectrum.eigenvectors, convention)


def hamiltonian_from_powers(T: float = 1.0, convention: Optional[str] = None) -> HamiltonianForms:
    """Explicit form with (P13P23)² in place of P23P13"""
    return chain_hamiltonian(T, convention, squared_form=True)


@dataclass(frozen=True)
class EnergyLevel:
    energy: float
    degeneracy: int
    eigenvectors: Tuple[int, ...]  # 1-based positions in chain_spectrum


def energy_levels(T: float = 1.0) -> List[EnergyLevel]:
    """Distinct chain energies with their degeneracies, lowest first"""
    energies = chain_energies(T)
    levels: Dict[int, List[int]] = {}
    for k, energy in enumerate(energies):
        levels.setdefault(int(round(energy * 3 * T / (2 * math.pi))), []).append(k + 1)
    return [
        EnergyLevel(2 * math.pi * level / (3 * T), len(members), tuple(members))
        for level, members in sorted(levels.items())
    ]


def orbit_basis(start: Union[str, SpinConfig] = 'uud') -> List[SpinConfig]:
    """Sector basis (s, Ûs, Û²s) following the cycle"""
    config = SpinConfig.from_string(start) if isinstance(start, str) else start
    return orbit(compose(transposition(1, 2, 3), transposition(2, 3, 3)), config)


def sector_block(op: Union[OperatorMatrix, np.ndarray], configs: Sequence[SpinConfig],
                 ordering: Optional[BasisOrdering] = None) -> np.ndarray:
    """Block of an operator on an ordered list of basis configurations"""
    entries = op.entries if isinstance(op, OperatorMatrix) else np.asarray(op)
    ordering = ordering or make_basis(configs[0].n)
    positions = [ordering.position(c) for c in configs]
    return entries[np.ix_(positions, positions)]


def exp_transposition_identity(i: int, j: int, n: int = None,
                               tolerance: Optional[float] = None) -> VerificationReport:
    """P_ij = i·exp(−iπ/2·P_ij)"""
    n = n or max(i, j)
    tolerance = settings.config.numerics.tolerance if tolerance is None else tolerance
    p = transposition_matrix(i, j, n)
    rhs = 1j * exp_hermitian(p, math.pi / 2).entries
    return VerificationReport.evaluate(
        f"P{i}{j} = i exp(-i pi/2 P{i}{j}) (n={n})",
        {'transposition_vs_exponential': float(np.linalg.norm(p.entries - rhs))},
        tolerance,
    )


def bch_verify(tolerance: float, convention: Optional[str] = None) -> VerificationReport:
    """
    i²·exp(−iπ/2 P12)·exp(−iπ/2 P23) = exp(−i(2π/3)G) = P12P23

    Gating residuals use the selected κ convention; the other convention is
    evaluated too and reported under diagnostics.
    """
    if not tolerance > 0:
        raise ValidationError(f"Tolerance must be positive, got {tolerance}", "tolerance")
    convention = check_convention(convention)
    other = 'literal' if convention == 'cycle' else 'cycle'

    cycle = chain_cycle()
    lhs = -(exp_hermitian(transposition_matrix(1, 2, 3), math.pi / 2).entries
            @ exp_hermitian(transposition_matrix(2, 3, 3), math.pi / 2).entries)

    def rhs_for(name: str) -> Tuple[OperatorMatrix, np.ndarray]:
        generator = permutation_generator(name)
        return generator, exp_hermitian(generator, 2 * math.pi / 3).entries

    generator, rhs = rhs_for(convention)
    _, other_rhs = rhs_for(other)
    inverse = cycle.power(2).entries

    residuals = {
        'lhs_vs_rhs': np.linalg.norm(lhs - rhs),
        'lhs_vs_cycle': np.linalg.norm(lhs - cycle.entries),
        'rhs_vs_cycle': np.linalg.norm(rhs - cycle.entries),
        'generator_hermiticity': np.linalg.norm(generator.entries - generator.entries.conj().T),
        'generator_commutes_with_cycle': np.linalg.norm(
            generator.entries @ cycle.entries - cycle.entries @ generator.entries
        ),
    }
    diagnostics = {
        f'{other}_rhs_vs_cycle': float(np.linalg.norm(other_rhs - cycle.entries)),
        f'{other}_rhs_vs_inverse_cycle': float(np.linalg.norm(other_rhs - inverse)),
        f'{convention}_rhs_vs_inverse_cycle': float(np.linalg.norm(rhs - inverse)),
    }

    literal_rhs = other_rhs if convention == 'cycle' else rhs
    literal_generates_inverse = bool(np.linalg.norm(literal_rhs - inverse) <= 1e-10)
    notes = []
    if literal_generates_inverse:
        note = (
            "literal κ placement Id + κ·P23P13 + κ*·P13P23 exponentiates to P13P23 = Û⁻¹; "
            f"residual against P12P23 is {np.linalg.norm(literal_rhs - cycle.entries):.6g}"
        )
        notes.append(note)
        transcription_note("bch", note)

    report = VerificationReport.evaluate(
        "i^2 exp(-i pi/2 P12) exp(-i pi/2 P23) = exp(-i 2pi/3 G)",
        residuals,
        tolerance,
        diagnostics=diagnostics,
        flags={'kappa_swapped': convention == 'cycle' and literal_generates_inverse},
        notes=notes,
    )
    if not report.passed:
        logger.warning(f"BCH identity not verified at tolerance {tolerance:g} ({convention} convention)")
    return report
