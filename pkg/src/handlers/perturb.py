"""
Perturbed evolution of ontological states: single runs and ε sweeps
"""

from typing import Any, Dict, List, Optional

from lib.logger import log_command, logger
from lib.perturb import PerturbationSpec, SchemeKind, evolve_perturbed, sweep_superpositions
from lib.validators import UsageError, validate_params
from schemas.reports import RunConfig, SuperpositionReport
from utils.output import CommandResult

COLUMNS = ['epsilon', 'config_in', 'config_out', 're', 'im', 'prob']


def _spec(params: Dict[str, Any], epsilon: Optional[float]) -> PerturbationSpec:
    scheme = SchemeKind(params['scheme'])
    coefficients = params.get('c')
    if scheme is SchemeKind.DIAGONAL_GENERIC:
        if not coefficients:
            raise UsageError("The diagonal scheme needs --c with 8 values", 'c')
    elif coefficients:
        raise UsageError(f"--c only applies to the diagonal scheme, not '{scheme.value}'", 'c')

    return PerturbationSpec(
        kind=scheme,
        epsilon=0.0 if epsilon is None else epsilon,
        coefficients=tuple(coefficients or ()),
        timestep=params['T'],
        # the flag can only switch test mode on; otherwise settings decide
        test_mode=params['test_mode'] or None,
        convention=params.get('convention'),
    )


def _rows(report: SuperpositionReport) -> List[tuple]:
    return [(report.epsilon, report.input, a.config, a.re, a.im, a.prob) for a in report.amplitudes]


@log_command
@validate_params('perturb')
def run(run_config: RunConfig) -> CommandResult:
    """
    Apply one perturbed evolution to one ontological state
    cogwheel perturb --scheme exact-hamiltonian --eps 0.1 --in uud
    """
    params = run_config.params
    report = evolve_perturbed(params['input'], _spec(params, params['eps']), params.get('threshold'))
    logger.debug(f"{report.input} -> dominant {report.dominant} with p={report.max_prob:.6g}")
    return CommandResult(
        command='perturb',
        payload={'report': report},
        columns=COLUMNS,
        rows=_rows(report),
    )


@log_command
@validate_params('sweep')
def sweep(run_config: RunConfig) -> CommandResult:
    """
    Long-format amplitude table over ε values and inputs
    cogwheel sweep --scheme exact-hamiltonian --eps 0.01,0.05,0.1 --in uud
    """
    params = run_config.params
    if params['scheme'] == SchemeKind.DIAGONAL_GENERIC.value:
        if params.get('eps'):
            logger.warning("--eps is ignored by the diagonal scheme")
        specs = [_spec(params, None)]
    else:
        if not params.get('eps'):
            raise UsageError(f"The '{params['scheme']}' scheme needs a nonempty --eps list", 'eps')
        specs = [_spec(params, eps) for eps in params['eps']]

    reports = sweep_superpositions(specs, params['inputs'], params.get('threshold'), params.get('workers'))
    rows = [row for report in reports for row in _rows(report)]
    return CommandResult(
        command='sweep',
        payload={'scheme': params['scheme'], 'reports': reports},
        columns=COLUMNS,
        rows=rows,
    )
