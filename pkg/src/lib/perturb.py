"""
Perturbed evolution of the three-spin cycle

Five schemes scale or shift the generator of Û = P12P23:

    operator           Û − i(π/2)ε(P12 + P23)                  first order
    exact-operator     −exp(−i(π/2)(1+ε)P12)·exp(−i(π/2)(1+ε)P23)
    hamiltonian        Û − i(2π/3)ε(Û + κ*·P12P13 + κ·Id)      first order
    exact-hamiltonian  exp(−iĤT(1+ε))
    diagonal           D·diag(λ_k e^{i c_k T})·D†

The exact schemes are computed spectrally and are the reference for every
closed form and truncation.
"""

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from config.settings import settings
from lib.fixtures import CORRECTED_SECTOR_COEFFICIENTS, PRINTED_SECTOR_COEFFICIENTS
from lib.logger import logger, transcription_note
from lib.permops import OperatorMatrix, chain_cycle, compose, to_matrix, transposition, transposition_matrix
from lib.spectral import (
    KAPPA,
    chain_hamiltonian,
    chain_spectrum,
    check_convention,
    exp_hermitian,
    expm_unitary,
    orbit_basis,
)
from lib.statespace import SpinConfig, make_basis
from lib.validators import DegenerateInputError, ShapeError, ValidationError
from schemas.reports import AmplitudeEntry, SuperpositionReport


class SchemeKind(str, Enum):
    OPERATOR_LEVEL = "operator"
    HAMILTONIAN_LEVEL = "hamiltonian"
    EXACT_OPERATOR_LEVEL = "exact-operator"
    EXACT_EXPONENT_SCALE = "exact-hamiltonian"
    DIAGONAL_GENERIC = "diagonal"

    @property
    def first_order(self) -> bool:
        return self in (SchemeKind.OPERATOR_LEVEL, SchemeKind.HAMILTONIAN_LEVEL)


def check_epsilon(epsilon: float, test_mode: Optional[bool] = None) -> float:
    """Soft warning above the soft limit, error above the hard limit unless in test mode"""
    if isinstance(epsilon, complex) or not np.isreal(epsilon):
        raise ValidationError(f"ε must be real, got {epsilon}", "epsilon")
    epsilon = float(np.real(epsilon))
    if not math.isfinite(epsilon):
        raise ValidationError(f"ε must be finite, got {epsilon}", "epsilon")

    config = settings.config.perturbation
    test_mode = config.test_mode if test_mode is None else test_mode
    if abs(epsilon) > config.epsilon_hard_limit and not test_mode:
        raise ValidationError(
            f"|ε| = {abs(epsilon):g} exceeds {config.epsilon_hard_limit:g}; enable test mode to allow it",
            "epsilon",
        )
    if abs(epsilon) > config.epsilon_soft_limit:
        logger.warning(f"|ε| = {abs(epsilon):g} is outside the small-perturbation regime")
    return epsilon


@dataclass(frozen=True)
class PerturbationSpec:
    """One perturbation scheme with its parameters"""
    kind: SchemeKind
    epsilon: float = 0.0
    coefficients: Tuple[complex, ...] = ()
    timestep: float = 1.0
    test_mode: Optional[bool] = None
    convention: Optional[str] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', SchemeKind(self.kind))
        except ValueError:
            valid = ', '.join(k.value for k in SchemeKind)
            raise ValidationError(f"Unknown scheme '{self.kind}', expected one of: {valid}", "kind")
        if not self.timestep > 0:
            raise ValidationError(f"Timestep must be positive, got {self.timestep}", "timestep")
        object.__setattr__(self, 'convention', check_convention(self.convention))

        if self.kind is SchemeKind.DIAGONAL_GENERIC:
            coefficients = tuple(complex(c) for c in self.coefficients)
            if len(coefficients) != 8:
                raise ShapeError(f"Diagonal perturbation needs 8 entries, got {len(coefficients)}", "c")
            object.__setattr__(self, 'coefficients', coefficients)
        else:
            object.__setattr__(self, 'epsilon', check_epsilon(self.epsilon, self.test_mode))

    @classmethod
    def operator_level(cls, epsilon: float, **kwargs) -> 'PerturbationSpec':
        return cls(SchemeKind.OPERATOR_LEVEL, epsilon, **kwargs)

    @classmethod
    def exact_operator_level(cls, epsilon: float, **kwargs) -> 'PerturbationSpec':
        return cls(SchemeKind.EXACT_OPERATOR_LEVEL, epsilon, **kwargs)

    @classmethod
    def hamiltonian_level(cls, epsilon: float, **kwargs) -> 'PerturbationSpec':
        return cls(SchemeKind.HAMILTONIAN_LEVEL, epsilon, **kwargs)

    @classmethod
    def exact_exponent_scale(cls, epsilon: float, **kwargs) -> 'PerturbationSpec':
        return cls(SchemeKind.EXACT_EXPONENT_SCALE, epsilon, **kwargs)

    @classmethod
    def diagonal_generic(cls, coefficients: Sequence[complex], **kwargs) -> 'PerturbationSpec':
        return cls(SchemeKind.DIAGONAL_GENERIC, coefficients=tuple(coefficients), **kwargs)


# Operator-level schemes

def first_order_operator_level(epsilon: float, test_mode: Optional[bool] = None) -> OperatorMatrix:
    """Û − i(π/2)ε(P12 + P23); not unitary for ε ≠ 0"""
    epsilon = check_epsilon(epsilon, test_mode)
    p12, p23 = transposition_matrix(1, 2, 3), transposition_matrix(2, 3, 3)
    entries = chain_cycle().entries - 1j * (math.pi / 2) * epsilon * (p12.entries + p23.entries)
    return OperatorMatrix(entries, f"operator[1st,ε={epsilon:g}]")


def exact_operator_level(epsilon: float) -> OperatorMatrix:
    """−exp(−i(π/2)(1+ε)P12)·exp(−i(π/2)(1+ε)P23)"""
    angle = (math.pi / 2) * (1 + float(epsilon))
    e12 = exp_hermitian(transposition_matrix(1, 2, 3), angle)
    e23 = exp_hermitian(transposition_matrix(2, 3, 3), angle)
    return OperatorMatrix(-(e12.entries @ e23.entries), f"operator[exact,ε={epsilon:g}]")


def exact_operator_level_closed_form(epsilon: float) -> OperatorMatrix:
    """Same product using exp(−iθP) = cos θ·Id − i·sin θ·P for an involution P"""
    angle = (math.pi / 2) * (1 + float(epsilon))
    eye = np.eye(8)

    def factor(p: OperatorMatrix) -> np.ndarray:
        return math.cos(angle) * eye - 1j * math.sin(angle) * p.entries

    entries = -(factor(transposition_matrix(1, 2, 3)) @ factor(transposition_matrix(2, 3, 3)))
    return OperatorMatrix(entries, f"operator[closed,ε={epsilon:g}]")


def perturbed_transposition(i: int, j: int, n: int, epsilon: float) -> OperatorMatrix:
    """i·exp(−i(π/2)(1+ε)P_ij); equals P_ij at ε = 0"""
    p = transposition_matrix(i, j, n)
    return OperatorMatrix(1j * exp_hermitian(p, (math.pi / 2) * (1 + float(epsilon))).entries,
                          f"{p.label}[exact,ε={epsilon:g}]")


def first_order_transposition(i: int, j: int, n: int, epsilon: float) -> OperatorMatrix:
    """P_ij − i(π/2)ε·Id"""
    p = transposition_matrix(i, j, n)
    entries = p.entries - 1j * (math.pi / 2) * float(epsilon) * np.eye(p.dim)
    return OperatorMatrix(entries, f"{p.label}[1st,ε={epsilon:g}]")


# Hamiltonian-level schemes

def first_order_hamiltonian_level(epsilon: float, convention: Optional[str] = None,
                                  test_mode: Optional[bool] = None) -> OperatorMatrix:
    """
    Û − i(2π/3)ε(Û + κ*·P12P13 + κ·Id)

    This is Û·(Id − iεĤT) for the Hamiltonian that generates Û. The literal
    convention swaps κ and κ*, which is only accurate to O(ε).
    """
    epsilon = check_epsilon(epsilon, test_mode)
    convention = check_convention(convention)
    cycle = chain_cycle()
    p12p13 = to_matrix(compose(transposition(1, 2, 3), transposition(1, 3, 3)))
    on_square, on_identity = (KAPPA.conjugate(), KAPPA) if convention == 'cycle' else (KAPPA, KAPPA.conjugate())
    correction = cycle.entries + on_square * p12p13.entries + on_identity * np.eye(8)
    entries = cycle.entries - 1j * (2 * math.pi / 3) * epsilon * correction
    return OperatorMatrix(entries, f"hamiltonian[1st,{convention},ε={epsilon:g}]")


def exact_hamiltonian_level(epsilon: float, T: float = 1.0,
                            convention: Optional[str] = None) -> OperatorMatrix:
    """exp(−iĤT(1+ε)); in the eigenbasis diag{λ_k·e^{−i E_k T ε}}"""
    convention = check_convention(convention)
    epsilon = float(epsilon)
    if convention == 'literal':
        forms = chain_hamiltonian(T, 'literal')
        return expm_unitary(forms.ontological, T * (1 + epsilon))
    spectrum = chain_spectrum()
    values = spectrum.eigenvalues * np.exp(-1j * spectrum.phases * epsilon)
    return OperatorMatrix(spectrum.reconstruct(values), f"hamiltonian[exact,ε={epsilon:g}]")


def eigenbasis_diagonal(op: OperatorMatrix) -> np.ndarray:
    """D† · op · D in the chain eigenbasis"""
    d = chain_spectrum().eigenvectors
    return d.conj().T @ op.entries @ d


@dataclass(frozen=True)
class EigenDecompCoefficients:
    """(α_i, β_i, γ_i) with s_i = α_i v2 + β_i v3 + γ_i v4 on the two-up sector"""
    coefficients: Dict[str, Tuple[complex, complex, complex]]

    def reconstruction_residual(self) -> float:
        basis = make_basis(3)
        vectors = chain_spectrum().eigenvectors[:, 1:4]
        worst = 0.0
        for label, coefficients in self.coefficients.items():
            target = np.zeros(8, dtype=complex)
            target[basis.position(SpinConfig.from_string(label))] = 1
            worst = max(worst, float(np.linalg.norm(vectors @ np.array(coefficients) - target)))
        return worst


def eigenbasis_coefficients() -> EigenDecompCoefficients:
    """Solve s_i = α_i v2 + β_i v3 + γ_i v4 for the three two-up states"""
    basis = make_basis(3)
    labels = ['uud', 'udu', 'duu']
    rows = [basis.position(SpinConfig.from_string(s)) for s in labels]
    block = chain_spectrum().eigenvectors[np.ix_(rows, [1, 2, 3])]
    try:
        solution = scipy.linalg.solve(block, np.eye(3, dtype=complex))
    except scipy.linalg.LinAlgError as e:
        raise RuntimeError(f"Sector eigenvectors are singular: {e}") from e
    result = EigenDecompCoefficients({
        label: tuple(complex(z) for z in solution[:, k]) for k, label in enumerate(labels)
    })
    compare_with_printed_coefficients(result)
    return result


_COEFFICIENT_NAMES = ('alpha', 'beta', 'gamma')


def compare_with_printed_coefficients(result: EigenDecompCoefficients, tol: float = 1e-12) -> float:
    """Worst gap to the printed coefficient list; the solved values stay authoritative"""
    worst = 0.0
    for label, printed in PRINTED_SECTOR_COEFFICIENTS.items():
        for name, solved, expected in zip(_COEFFICIENT_NAMES, result.coefficients[label], printed):
            gap = abs(solved - expected)
            worst = max(worst, gap)
            if gap > tol:
                transcription_note(
                    "eigenbasis_coefficients",
                    f"printed {name} of {label} is {expected:.6g}, solved {solved:.6g}",
                    gap=gap,
                )
            elif (label, name) in CORRECTED_SECTOR_COEFFICIENTS:
                transcription_note(
                    "eigenbasis_coefficients",
                    f"printed {name} of {label} has an unbalanced parenthesis; balanced reading matches",
                )
    return worst


# Closed forms of the exact-hamiltonian amplitudes (T = 1)

_HALF = complex(0.5, math.sqrt(3) / 2)


def closed_form_image(epsilon: float) -> complex:
    """(1/3)[1 + e^{−iθ}(1 + e^{−iθ})], amplitude on the unperturbed image"""
    z = cmath.exp(-1j * 2 * math.pi * epsilon / 3)
    return (1 + z * (1 + z)) / 3


def closed_form_stay(epsilon: float) -> complex:
    """(1/3)[1 − e^{−iθ}((1/2 + i√3/2) + (1/2 − i√3/2)e^{−iθ})], amplitude on the input itself"""
    z = cmath.exp(-1j * 2 * math.pi * epsilon / 3)
    return (1 - z * (_HALF + _HALF.conjugate() * z)) / 3


def closed_form_back(epsilon: float) -> complex:
    """(1/3)[1 − e^{−iθ}((1/2 − i√3/2) + (1/2 + i√3/2)e^{−iθ})], amplitude on the preimage"""
    z = cmath.exp(-1j * 2 * math.pi * epsilon / 3)
    return (1 - z * (_HALF.conjugate() + _HALF * z)) / 3


def _orbit_position(config: SpinConfig) -> Tuple[int, int]:
    """(sector up-count, position along the cycle orbit)"""
    start = 'uud' if config.up_count == 2 else 'ddu'
    return config.up_count, [c.to_string() for c in orbit_basis(start)].index(config.to_string())


def closed_form_amplitude(config_in: Union[str, SpinConfig], config_out: Union[str, SpinConfig],
                          epsilon: float) -> complex:
    """⟨out| exp(−iĤ(1+ε)) |in⟩ from the closed forms, T = 1"""
    c_in = SpinConfig.from_string(config_in) if isinstance(config_in, str) else config_in
    c_out = SpinConfig.from_string(config_out) if isinstance(config_out, str) else config_out
    if c_in.n != 3 or c_out.n != 3:
        raise ShapeError("Closed forms are defined on three spins", "config")
    if c_in.up_count != c_out.up_count:
        return 0j
    if c_in.up_count in (0, 3):
        return 1 + 0j
    _, m_in = _orbit_position(c_in)
    _, m_out = _orbit_position(c_out)
    r = (1 + m_in - m_out) % 3
    return (closed_form_image, closed_form_stay, closed_form_back)[r](epsilon)


# Generic diagonal perturbation

def diagonal_perturbation_operator(coefficients: Sequence[complex], T: float = 1.0) -> OperatorMatrix:
    """Û′ = D·diag(λ_k e^{+i c_k T})·D†, c_k aligned with the chain eigenvectors v1..v8"""
    coefficients = np.array([complex(c) for c in coefficients])
    if coefficients.shape != (8,):
        raise ShapeError(f"Diagonal perturbation needs 8 entries, got {coefficients.shape[0]}", "c")
    spectrum = chain_spectrum()
    values = spectrum.eigenvalues * np.exp(1j * coefficients * T)
    return OperatorMatrix(spectrum.reconstruct(values), "diagonal[c]")


@dataclass(frozen=True, eq=False)
class DiagonalPerturbation:
    operator: OperatorMatrix
    reports: Dict[str, SuperpositionReport]


def diagonal_perturbation(coefficients: Sequence[complex], T: float = 1.0,
                          threshold: Optional[float] = None) -> DiagonalPerturbation:
    """Operator plus one SuperpositionReport per ontological input"""
    spec = PerturbationSpec.diagonal_generic(coefficients, timestep=T)
    op = perturbed_operator(spec)
    reports = {
        config.to_string(): superposition_report(config, op, spec, threshold)
        for config in make_basis(3)
    }
    return DiagonalPerturbation(op, reports)


# Reports

def down_sector_map(config: Union[str, SpinConfig]) -> SpinConfig:
    """Global spin flip ↑↑↓ ↦ ↓↓↑ etc."""
    config = SpinConfig.from_string(config) if isinstance(config, str) else config
    if config.n != 3:
        raise ShapeError(f"Down-sector map is defined on three spins, got {config.n}", "config")
    return config.flipped()


def perturbed_operator(spec: PerturbationSpec) -> OperatorMatrix:
    kind = spec.kind
    if kind is SchemeKind.OPERATOR_LEVEL:
        return first_order_operator_level(spec.epsilon, test_mode=True)
    if kind is SchemeKind.EXACT_OPERATOR_LEVEL:
        return exact_operator_level(spec.epsilon)
    if kind is SchemeKind.HAMILTONIAN_LEVEL:
        return first_order_hamiltonian_level(spec.epsilon, spec.convention, test_mode=True)
    if kind is SchemeKind.EXACT_EXPONENT_SCALE:
        return exact_hamiltonian_level(spec.epsilon, spec.timestep, spec.convention)
    return diagonal_perturbation_operator(spec.coefficients, spec.timestep)


@dataclass(frozen=True)
class ClassicalityVerdict:
    max_probability: float
    classical: bool


def classicality_measure(report: Union[SuperpositionReport, np.ndarray],
                         threshold: Optional[float] = None) -> ClassicalityVerdict:
    """Largest normalized probability and whether it is within threshold of 1"""
    threshold = settings.config.perturbation.classicality_threshold if threshold is None else threshold
    amplitudes = report.amplitude_vector() if isinstance(report, SuperpositionReport) else np.asarray(report)
    probabilities = np.abs(amplitudes) ** 2
    total = float(np.sum(probabilities))
    if total == 0.0:
        raise DegenerateInputError("Cannot measure classicality of a zero vector", "amplitudes")
    max_probability = float(np.max(probabilities)) / total
    return ClassicalityVerdict(max_probability, max_probability >= 1 - threshold)


def superposition_report(config: SpinConfig, op: OperatorMatrix, spec: PerturbationSpec,
                         threshold: Optional[float] = None) -> SuperpositionReport:
    basis = make_basis(3)
    if config.n != 3:
        raise ShapeError(f"Perturbed evolution acts on three spins, got '{config}'", "config")
    threshold = settings.config.perturbation.classicality_threshold if threshold is None else threshold

    amplitudes = op.entries[:, basis.position(config)]
    verdict = classicality_measure(amplitudes, threshold)
    probabilities = np.abs(amplitudes) ** 2
    entries = [
        AmplitudeEntry(config=c.to_string(), re=float(a.real), im=float(a.imag), prob=float(p))
        for c, a, p in zip(basis, amplitudes, probabilities)
    ]

    metadata = {'first_order': spec.kind.first_order, 'convention': spec.convention}
    if spec.kind is SchemeKind.DIAGONAL_GENERIC:
        metadata['phase_sign'] = 1
    if spec.kind is SchemeKind.EXACT_EXPONENT_SCALE:
        metadata['closed_forms_assume_T'] = 1.0

    diagonal = spec.kind is SchemeKind.DIAGONAL_GENERIC
    return SuperpositionReport(
        input=config.to_string(),
        scheme=spec.kind.value,
        epsilon=None if diagonal else spec.epsilon,
        c=[(c.real, c.imag) for c in spec.coefficients] if diagonal else None,
        timestep=spec.timestep,
        amplitudes=entries,
        max_prob=verdict.max_probability,
        classical=verdict.classical,
        dominant=entries[int(np.argmax(probabilities))].config,
        threshold=threshold,
        norm_squared=float(np.sum(probabilities)),
        unitary=op.unitary,
        metadata=metadata,
    )


def evolve_perturbed(config: Union[str, SpinConfig], spec: PerturbationSpec,
                     threshold: Optional[float] = None) -> SuperpositionReport:
    """Apply the perturbed operator to one ontological state"""
    config = SpinConfig.from_string(config) if isinstance(config, str) else config
    if config.n != 3:
        raise ShapeError(f"Perturbed evolution acts on three spins, got '{config}'", "config")
    return superposition_report(config, perturbed_operator(spec), spec, threshold)


def sweep_superpositions(specs: Sequence[PerturbationSpec], configs: Sequence[Union[str, SpinConfig]],
                         threshold: Optional[float] = None,
                         workers: Optional[int] = None) -> List[SuperpositionReport]:
    """Every (spec, config) pair, in input order; optionally on a thread pool"""
    workers = settings.config.perturbation.sweep_workers if workers is None else workers
    jobs = [(spec, config) for spec in specs for config in configs]

    def run(job):
        spec, config = job
        return evolve_perturbed(config, spec, threshold)

    if workers <= 1 or len(jobs) <= 1:
        return [run(job) for job in jobs]

    logger.debug(f"Sweeping {len(jobs)} evolutions on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run, jobs))
