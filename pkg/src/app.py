"""
Cogwheel Lab command line
Permutation dynamics of spin triplets, their Hamiltonians and perturbations
"""

from typing import Any, Dict, Optional

import typer
from pydantic import ValidationError as PydanticValidationError
from rich.console import Console
from rich.markup import escape

from config.settings import settings
from lib.logger import configure_logging, logger
from lib.validators import ValidationError
from schemas.reports import RunConfig
from utils.output import EXIT_USAGE, respond
import router

app = typer.Typer(
    name="cogwheel",
    help="Permutation operators, cogwheel spectra, the finite BCH identity, perturbation sweeps and sinc sampling.",
    add_completion=False,
    no_args_is_help=True,
)
err_console = Console(stderr=True)

FORMAT_OPTION = typer.Option(None, "--format", "-f", help="json, csv or text")
OUTPUT_OPTION = typer.Option(None, "--output", "-o", help="Write to this file instead of stdout")


@app.callback()
def configure(
    ctx: typer.Context,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    no_timestamp: bool = typer.Option(False, "--no-timestamp", help="Leave generated_at out of the header"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override LOG_LEVEL"),
):
    """Global output and logging options"""
    config = settings.config
    configure_logging(log_level or config.logging.level, config.logging.format)
    ctx.obj = {
        'output_format': output_format or config.output.default_format,
        'output_path': output,
        'include_timestamp': config.output.include_timestamp and not no_timestamp,
    }


def _run(ctx: typer.Context, command: str, params: Dict[str, Any],
         output_format: Optional[str] = None, output: Optional[str] = None) -> None:
    """Build the RunConfig, route it and exit with the handler's status"""
    options = dict(ctx.obj or {})
    # Options given after the command win over the global ones
    if output_format is not None:
        options['output_format'] = output_format
    if output is not None:
        options['output_path'] = output
    try:
        run_config = RunConfig(
            command=command,
            params={k: v for k, v in params.items() if v is not None},
            output_format=options.get('output_format', 'json'),
            output_path=options.get('output_path'),
            include_timestamp=options.get('include_timestamp', True),
        )
    except PydanticValidationError as e:
        err_console.print(f"[red]error[/red]: {escape(e.errors()[0]['msg'])}", highlight=False)
        raise typer.Exit(EXIT_USAGE)

    try:
        code = respond(router.route(run_config), run_config)
    except ValidationError as e:
        logger.debug(f"Usage error in {command}: {e.message}")
        err_console.print(f"[red]error[/red]: {escape(e.message)}", highlight=False)
        code = EXIT_USAGE
    raise typer.Exit(code)


@app.command()
def ops(
    ctx: typer.Context,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    n: int = typer.Option(3, "--n", help="Number of spins"),
    gens: str = typer.Option("P12,P23", "--gens", help="Operator product, left to right, e.g. P12,P23"),
    tol: float = typer.Option(1e-12, "--tol", help="Tolerance for the Pauli comparison"),
):
    """Matrix of a product of transpositions with its group properties"""
    _run(ctx, 'ops', {'n': n, 'gens': gens, 'tol': tol}, output_format, output)


@app.command()
def spectrum(
    ctx: typer.Context,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    target: str = typer.Option("chain", "--target", help="chain or cogwheel"),
    N: int = typer.Option(3, "--N", "-N", help="Cogwheel size"),
    T: float = typer.Option(1.0, "--T", "-T", help="Timestep of one tick"),
    tol: float = typer.Option(1e-12, "--tol"),
    convention: Optional[str] = typer.Option(None, "--convention", help="cycle or literal κ placement"),
):
    """Eigenpairs, energy levels and Hamiltonian round trips"""
    _run(ctx, 'spectrum', {'target': target, 'N': N, 'T': T, 'tol': tol, 'convention': convention},
         output_format, output)


@app.command()
def bch(
    ctx: typer.Context,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    tol: float = typer.Option(1e-10, "--tol"),
    convention: Optional[str] = typer.Option(None, "--convention", help="cycle or literal κ placement"),
):
    """Check i²·exp(−iπ/2 P12)·exp(−iπ/2 P23) = exp(−i(2π/3)G) = P12P23"""
    _run(ctx, 'bch', {'tol': tol, 'convention': convention}, output_format, output)


@app.command()
def perturb(
    ctx: typer.Context,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    scheme: str = typer.Option(..., "--scheme", help="operator, hamiltonian, exact-operator, exact-hamiltonian or diagonal"),
    eps: float = typer.Option(0.0, "--eps"),
    c: Optional[str] = typer.Option(None, "--c", help="Eight comma-separated (complex) diagonal entries"),
    config_in: str = typer.Option(..., "--in", help="Input configuration, e.g. uud"),
    T: float = typer.Option(1.0, "--T", "-T"),
    threshold: Optional[float] = typer.Option(None, "--threshold", help="Classicality threshold"),
    test_mode: bool = typer.Option(False, "--test-mode", help="Allow |ε| above the hard limit"),
    convention: Optional[str] = typer.Option(None, "--convention"),
):
    """Apply one perturbed evolution to one ontological state"""
    _run(ctx, 'perturb', {
        'scheme': scheme, 'eps': eps, 'c': c, 'input': config_in, 'T': T,
        'threshold': threshold, 'test_mode': test_mode, 'convention': convention,
    }, output_format, output)


@app.command()
def sweep(
    ctx: typer.Context,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    scheme: str = typer.Option(..., "--scheme"),
    eps: Optional[str] = typer.Option(None, "--eps", help="Comma-separated ε values"),
    c: Optional[str] = typer.Option(None, "--c", help="Eight comma-separated (complex) diagonal entries"),
    inputs: str = typer.Option(..., "--in", help="Comma-separated input configurations"),
    T: float = typer.Option(1.0, "--T", "-T"),
    threshold: Optional[float] = typer.Option(None, "--threshold"),
    test_mode: bool = typer.Option(False, "--test-mode"),
    convention: Optional[str] = typer.Option(None, "--convention"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Threads for the sweep"),
):
    """Long-format amplitude table over ε values and inputs"""
    _run(ctx, 'sweep', {
        'scheme': scheme, 'eps': eps, 'c': c, 'inputs': inputs, 'T': T,
        'threshold': threshold, 'test_mode': test_mode, 'convention': convention, 'workers': workers,
    }, output_format, output)


@app.command()
def sample(
    ctx: typer.Context,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
    signal: str = typer.Option("cos", "--signal", help="cos, sin, cexp, sinc or const"),
    freq: float = typer.Option(1.0, "--freq", help="Angular frequency of the signal"),
    omega_max: float = typer.Option(2.0, "--omega-max"),
    n_min: Optional[int] = typer.Option(None, "--n-min", help="Defaults to minus the configured window"),
    n_max: Optional[int] = typer.Option(None, "--n-max", help="Defaults to the configured window"),
    points: int = typer.Option(0, "--points", help="Reconstruction points; 0 emits the samples"),
    t_min: float = typer.Option(-10.0, "--t-min"),
    t_max: float = typer.Option(10.0, "--t-max"),
):
    """Sample a band-limited signal or reconstruct it from its samples"""
    _run(ctx, 'sample', {
        'signal': signal, 'freq': freq, 'omega_max': omega_max, 'n_min': n_min, 'n_max': n_max,
        'points': points, 't_min': t_min, 't_max': t_max,
    }, output_format, output)


@app.command("verify-all")
def verify_all(
    ctx: typer.Context,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
):
    """Run every acceptance check and summarize"""
    _run(ctx, 'verify-all', {}, output_format, output)


def main():
    app()


if __name__ == "__main__":
    main()
