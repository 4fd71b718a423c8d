"""
Rendering of command results as JSON, CSV or text

Payloads are deterministic; the only run-dependent value is `generated_at`,
which lives in the header and can be switched off.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import typer
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from config.settings import settings
from lib.logger import logger
from lib.validators import UsageError
from schemas.reports import SCHEMA_VERSION, RunConfig
from utils.timestamps import utc_now

TOOL_NAME = "cogwheel"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

_EXTENSIONS = {'json': 'json', 'csv': 'csv', 'text': 'txt'}


def tool_version() -> str:
    try:
        return metadata.version("cogwheel-lab")
    except metadata.PackageNotFoundError:
        return "0.0.0+local"


@dataclass
class CommandResult:
    """What a handler hands back for rendering"""
    command: str
    payload: Dict[str, Any]
    columns: Optional[List[str]] = None
    rows: List[Sequence[Any]] = field(default_factory=list)
    text: Optional[str] = None
    table: Optional[Table] = None
    passed: Optional[bool] = None

    @property
    def exit_code(self) -> int:
        return EXIT_CHECK_FAILED if self.passed is False else EXIT_OK


def _normalize(value: Any) -> Any:
    """Models, complex and numpy values to plain JSON types, NaN to null"""
    if isinstance(value, BaseModel):
        return _normalize(value.model_dump(mode='python', by_alias=True))
    if isinstance(value, np.ndarray):
        return _normalize(value.tolist())
    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [_normalize(float(value.real)), _normalize(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    if isinstance(value, np.generic):
        return value.item()
    return value


def header(run_config: RunConfig) -> Dict[str, Any]:
    data = {
        'tool': TOOL_NAME,
        'version': tool_version(),
        'command': run_config.command,
        'schema_version': SCHEMA_VERSION,
        'params': _normalize(run_config.params),
    }
    if run_config.include_timestamp:
        data['generated_at'] = utc_now()
    return data


def format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        # -0.0 prints as 0
        return format(float(value) + 0.0, f'.{settings.config.output.float_digits}g')
    if value is None:
        return ''
    return str(value)


def render_json(result: CommandResult, run_config: RunConfig) -> str:
    document = {'header': header(run_config), 'payload': _normalize(result.payload)}
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + '\n'


def render_csv(result: CommandResult, run_config: RunConfig) -> str:
    if not result.columns:
        raise UsageError(f"Command '{result.command}' has no CSV form", "format")
    buffer = io.StringIO()
    if run_config.include_timestamp:
        buffer.write(f"# generated_at={utc_now()}\n")
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_cell(v) for v in row])
    return buffer.getvalue()


def render_text(result: CommandResult, run_config: RunConfig) -> str:
    if result.text is not None:
        return result.text.rstrip('\n') + '\n'
    table = result.table
    if table is None and result.columns:
        table = Table(title=result.command)
        for column in result.columns:
            table.add_column(column)
        for row in result.rows:
            table.add_row(*(format_cell(v) for v in row))
    if table is None:
        return render_json(result, run_config)
    console = Console(file=io.StringIO(), width=160, color_system=None)
    console.print(table)
    return console.file.getvalue()


_RENDERERS = {'json': render_json, 'csv': render_csv, 'text': render_text}


def output_target(run_config: RunConfig) -> Optional[Path]:
    """--output, else the configured output directory, else stdout (None)"""
    if run_config.output_path:
        return Path(run_config.output_path)
    directory = settings.config.output.output_dir
    if directory:
        name = run_config.command.replace('-', '_')
        return Path(directory) / f"{name}.{_EXTENSIONS[run_config.output_format]}"
    return None


def respond(result: CommandResult, run_config: RunConfig, stream=None) -> int:
    """Write the rendered result and return the process exit code"""
    document = _RENDERERS[run_config.output_format](result, run_config)
    target = output_target(run_config)
    if target is None:
        if stream is None:
            typer.echo(document, nl=False)
        else:
            stream.write(document)
    else:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(document, encoding='utf-8')
        logger.info(f"Wrote {run_config.output_format} output to {target}")
    return result.exit_code
