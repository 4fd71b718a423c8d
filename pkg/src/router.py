"""
Command router: maps a RunConfig to its handler
"""

from handlers import bch, ops, perturb, sample, spectrum, verify
from lib.logger import logger
from lib.validators import UsageError
from schemas.reports import RunConfig
from utils.output import CommandResult

# Route Definition
# (Command, Handler)
ROUTES = [
    # Operators and spectra
    ('ops', ops.run),
    ('spectrum', spectrum.run),
    ('bch', bch.run),

    # Perturbed evolution
    ('perturb', perturb.run),
    ('sweep', perturb.sweep),

    # Continuous time
    ('sample', sample.run),

    # Everything at once
    ('verify-all', verify.verify_all),
]


def route(run_config: RunConfig) -> CommandResult:
    """
    Matches the command to a handler.
    """
    logger.debug(f"Router: {run_config.command} {sorted(run_config.params)}")

    for command, handler in ROUTES:
        if command == run_config.command:
            return handler(run_config)

    raise UsageError(f"Unknown command '{run_config.command}'", 'command')
