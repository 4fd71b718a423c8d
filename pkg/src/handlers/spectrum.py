"""
Spectra and Hamiltonians of the three-spin cycle and of N-state cogwheels
"""

import math
from typing import Any, Dict, List

import numpy as np

from lib.logger import log_command
from lib.permops import chain_cycle
from lib.spectral import (
    SpectralDecomposition,
    check_convention,
    chain_energies,
    chain_hamiltonian,
    chain_spectrum,
    cogwheel_hamiltonian,
    cogwheel_operator,
    cogwheel_spectrum,
    energy_levels,
    expm_unitary,
    hamiltonian_from_powers,
    kappa_matrix,
    orbit_basis,
    sector_block,
)
from lib.statespace import SpinConfig
from lib.validators import validate_params
from schemas.reports import RunConfig, VerificationReport
from utils.output import CommandResult

COLUMNS = ['index', 'eigenvalue_re', 'eigenvalue_im', 'phase', 'energy']


def _eigenpairs(spectrum: SpectralDecomposition, energies: np.ndarray) -> List[Dict[str, Any]]:
    return [
        {
            'index': k + 1,
            'eigenvalue': complex(spectrum.eigenvalues[k]),
            'phase': float(spectrum.phases[k]),
            'energy': float(energies[k]),
            'vector': [complex(z) for z in spectrum.eigenvectors[:, k]],
        }
        for k in range(spectrum.dim)
    ]


def _multiset_distance(values: np.ndarray, expected: np.ndarray) -> float:
    """Largest gap after matching both lists by descending phase"""
    def key(z):
        return (round(float((-np.angle(z)) % (2 * math.pi)), 9), z.real)
    a = sorted(values, key=key)
    b = sorted(expected, key=key)
    return float(np.max(np.abs(np.array(a) - np.array(b))))


def _chain(T: float, tol: float, convention: str) -> CommandResult:
    spectrum = chain_spectrum()
    energies = chain_energies(T)
    forms = chain_hamiltonian(T, convention)
    explicit = hamiltonian_from_powers(T, convention)
    cycle = chain_cycle()

    third = np.exp(-2j * math.pi / 3)
    expected = np.array([1, 1, 1, 1, third, third, third ** 2, third ** 2])
    # aux block ordering: orbit basis for the cycle convention, (uud, udu, duu) for the literal one
    if convention == 'cycle':
        block_configs = orbit_basis('uud')
    else:
        block_configs = [SpinConfig.from_string(s) for s in ('uud', 'udu', 'duu')]
    aux = (2 * math.pi / (3 * T)) * kappa_matrix()

    residuals = {
        'eigen_equation': spectrum.residual,
        'orthonormality': spectrum.orthonormality_residual(),
        'eigenvalue_multiset': _multiset_distance(spectrum.eigenvalues, expected),
        'round_trip_permutation_form': expm_unitary(forms.ontological, T).frobenius_distance(cycle),
        'round_trip_explicit_form': expm_unitary(explicit.ontological, T).frobenius_distance(cycle),
        'diagonal_vs_permutation_form': forms.agreement,
        'explicit_vs_permutation_form': explicit.ontological.matrix.frobenius_distance(
            forms.ontological.matrix
        ),
        'up_sector_block': float(np.linalg.norm(
            sector_block(forms.ontological.matrix, block_configs) - aux
        )),
    }
    report = VerificationReport.evaluate(
        f"exp(-i H T) = P12P23 ({convention} convention, T={T:g})", residuals, tol
    )

    levels = energy_levels(T)
    pairs = _eigenpairs(spectrum, energies)
    return CommandResult(
        command='spectrum',
        payload={
            'target': 'chain',
            'T': T,
            'convention': convention,
            'eigenpairs': pairs,
            'levels': [
                {'energy': lv.energy, 'degeneracy': lv.degeneracy, 'eigenvectors': list(lv.eigenvectors)}
                for lv in levels
            ],
            'block_basis': [c.to_string() for c in block_configs],
            'report': report,
        },
        columns=COLUMNS,
        rows=[(p['index'], p['eigenvalue'].real, p['eigenvalue'].imag, p['phase'], p['energy']) for p in pairs],
        passed=report.passed,
    )


def _cogwheel(N: int, T: float, tol: float) -> CommandResult:
    spectrum = cogwheel_spectrum(N)
    forms = cogwheel_hamiltonian(N, T)
    op = cogwheel_operator(N)
    roots = np.exp(-2j * math.pi * np.arange(N) / N)

    residuals = {
        'eigen_equation': spectrum.residual,
        'orthonormality': spectrum.orthonormality_residual(),
        'roots_of_unity': float(np.max(np.abs(spectrum.eigenvalues - roots))),
        'round_trip': expm_unitary(forms.ontological, T).frobenius_distance(op),
        'diagonal_vs_auxiliary': forms.agreement,
    }
    if N == 3:
        aux = (2 * math.pi / (3 * T)) * kappa_matrix()
        residuals['kappa_form'] = forms.ontological.matrix.frobenius_distance(aux)
    report = VerificationReport.evaluate(f"cogwheel N={N}, exp(-i H T) = U", residuals, tol)

    energies = np.diag(forms.diagonal.matrix.entries).real
    pairs = _eigenpairs(spectrum, energies)
    return CommandResult(
        command='spectrum',
        payload={'target': 'cogwheel', 'N': N, 'T': T, 'eigenpairs': pairs, 'report': report},
        columns=COLUMNS,
        rows=[(p['index'], p['eigenvalue'].real, p['eigenvalue'].imag, p['phase'], p['energy']) for p in pairs],
        passed=report.passed,
    )


@log_command
@validate_params('spectrum')
def run(run_config: RunConfig) -> CommandResult:
    """
    Eigenpairs, energy levels and Hamiltonian round trips
    cogwheel spectrum --target chain --T 1
    """
    params = run_config.params
    if params['target'] == 'cogwheel':
        return _cogwheel(params['N'], params['T'], params['tol'])
    return _chain(params['T'], params['tol'], check_convention(params.get('convention')))
