"""
Sampling of band-limited signals and sinc-series reconstruction
"""

import numpy as np

from config.settings import settings
from lib.logger import log_command
from lib.sampling import make_signal, reconstruct_sweep, sample
from lib.validators import validate_params
from schemas.reports import RunConfig
from utils.output import CommandResult

SAMPLE_COLUMNS = ['n', 't_n', 're', 'im']
SWEEP_COLUMNS = ['t', 're', 'im', 'abs_error']


@log_command
@validate_params('sample')
def run(run_config: RunConfig) -> CommandResult:
    """
    Without --points: the samples themselves. With --points: a reconstruction
    sweep over [t_min, t_max] with the error against the known signal.

    cogwheel sample --signal cos --omega-max 2 --points 100 --format csv
    """
    params = run_config.params
    signal = make_signal(params['signal'], params['freq'])
    window = settings.config.sampling.default_window
    n_range = (params.get('n_min', -window), params.get('n_max', window))
    sampled = sample(signal, params['omega_max'], n_range)
    described = {
        'signal': signal.name,
        'frequency': params['freq'],
        'omega_max': sampled.omega_max,
        'spacing': sampled.spacing,
        'window': list(sampled.window),
        'sample_count': len(sampled),
        'signal_bandwidth': sampled.signal_bandwidth,
        'aliased': sampled.aliased,
    }

    if params['points'] == 0:
        rows = sampled.to_rows()
        return CommandResult(
            command='sample',
            payload={**described, 'samples': [list(r) for r in rows]},
            columns=SAMPLE_COLUMNS,
            rows=rows,
        )

    ts = np.linspace(params['t_min'], params['t_max'], params['points'])
    result = reconstruct_sweep(sampled, ts, oracle=signal)
    return CommandResult(
        command='sample',
        payload={**described, 'reconstruction': result},
        columns=SWEEP_COLUMNS,
        rows=[(p.t, p.re, p.im, p.abs_error) for p in result.points],
    )
