"""
Permutation operator products: matrices, group properties and Pauli forms
"""

from itertools import combinations

import numpy as np

from config.settings import settings
from lib.fixtures import printed_matrix
from lib.logger import log_command, logger
from lib.permops import (
    commutator,
    compare_with_fixture,
    pauli_transposition,
    product,
    to_matrix,
    transposition_matrix,
)
from lib.statespace import make_basis
from lib.validators import validate_params
from schemas.reports import RunConfig, VerificationReport
from utils.output import CommandResult

COLUMNS = ['row', 'col', 'config_row', 'config_col', 're', 'im']


@log_command
@validate_params('ops')
def run(run_config: RunConfig) -> CommandResult:
    """
    Build the product of the given transpositions on n spins
    cogwheel ops --n 3 --gens P12,P23
    """
    params = run_config.params
    n, generators, tol = params['n'], params['gens'], params['tol']
    basis = make_basis(n)

    permutation = product(generators, n)
    op = to_matrix(permutation, basis)
    order = permutation.order()

    residuals = {
        'unitarity': (op.dagger() @ op).frobenius_distance(np.eye(op.dim)),
        'power_order_is_identity': op.power(order).frobenius_distance(np.eye(op.dim)),
    }

    pairs = sorted({g for g in generators if g is not None})
    factors = {f"P{i}{j}" if j < 10 else f"P{i}_{j}": transposition_matrix(i, j, n) for i, j in pairs}
    factor_checks = {}
    for (label, factor), (i, j) in zip(factors.items(), pairs):
        entry = {
            'involution': factor.power(2).is_identity(),
            'unitary': (factor.dagger() @ factor).is_identity(),
        }
        if n <= settings.config.numerics.max_operator_spins:
            pauli = pauli_transposition(i, j, n, basis)
            entry['pauli_max_error'] = float(np.max(np.abs(pauli.entries - factor.entries)))
            residuals[f'{label}_pauli'] = entry['pauli_max_error']
        residuals[f'{label}_involution'] = 0.0 if entry['involution'] else 1.0
        factor_checks[label] = entry

    commutators = {
        f"[{a},{b}]": float(np.linalg.norm(commutator(factors[a], factors[b]).entries))
        for a, b in combinations(factors, 2)
    }

    fixture_distance = None
    printed = printed_matrix(permutation.label, n)
    if printed is not None:
        fixture_distance = compare_with_fixture(op, printed, f"{permutation.label} (n={n})")

    report = VerificationReport.evaluate(f"{permutation.label} on {n} spins", residuals, tol)
    if not report.passed:
        logger.warning(f"Operator checks failed for {permutation.label}: {report.residuals}")

    configs = [c.to_string() for c in basis]
    rows = [
        (r + 1, c + 1, configs[r], configs[c], float(op.entries[r, c].real), float(op.entries[r, c].imag))
        for r in range(op.dim) for c in range(op.dim)
    ]
    summary = [
        f"{op.label} on {n} spins, order {order}, cycles {permutation.cycle_notation(basis)}",
        f"basis: {' '.join(configs)}",
        op.to_grid(),
        f"unitary: {op.unitary}  hermitian: {op.hermitian}  pass: {report.passed}",
    ]
    summary += [f"‖{name}‖_F = {value:.6g}" for name, value in commutators.items()]

    return CommandResult(
        command='ops',
        payload={
            'n': n,
            'label': op.label,
            'basis': configs,
            'order': order,
            'spin_cycles': permutation.cycle_notation(),
            'basis_cycles': permutation.cycle_notation(basis),
            'matrix': op.to_json(),
            'factors': factor_checks,
            'commutators': commutators,
            'fixture_distance': fixture_distance,
            'report': report,
        },
        columns=COLUMNS,
        rows=rows,
        text='\n'.join(summary),
        passed=report.passed,
    )
