"""
Finite BCH identity for two transpositions
"""

from lib.logger import log_command
from lib.spectral import bch_verify, exp_transposition_identity
from lib.validators import validate_params
from schemas.reports import RunConfig
from utils.output import CommandResult

COLUMNS = ['identity', 'pass', 'tolerance', 'max_residual', 'kappa_swapped']


@log_command
@validate_params('bch')
def run(run_config: RunConfig) -> CommandResult:
    """
    Verify i²·exp(−iπ/2 P12)·exp(−iπ/2 P23) = exp(−i(2π/3)G) = P12P23
    cogwheel bch --tol 1e-10
    """
    params = run_config.params
    tolerance = params['tol']
    report = bch_verify(tolerance, params.get('convention'))
    transpositions = [exp_transposition_identity(i, j, 3, tolerance) for i, j in ((1, 2), (2, 3), (1, 3))]

    max_residual = max(report.residuals.values())
    lines = [
        report.identity_name,
        *(f"  {name}: {value:.3e}" for name, value in report.residuals.items()),
        *(f"  {name} (diagnostic): {value:.3e}" for name, value in report.diagnostics.items()),
        *(f"  note: {note}" for note in report.notes),
        f"pass: {report.passed} (tolerance {tolerance:g})",
    ]
    return CommandResult(
        command='bch',
        payload={'report': report, 'transpositions': transpositions},
        columns=COLUMNS,
        rows=[(report.identity_name, report.passed, tolerance, max_residual,
               report.flags.get('kappa_swapped', False))],
        text='\n'.join(lines),
        passed=report.passed,
    )
