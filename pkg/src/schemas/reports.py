"""
Report and run-configuration models

These are the machine-readable shapes written by the CLI. JSON field names
are part of the output contract; see docs/OUTPUT_FORMATS.md.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "1"


class VerificationReport(BaseModel):
    """Residuals of a numerical identity check; failure is an outcome, not an exception"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    identity_name: str
    residuals: Dict[str, float]
    tolerance: float
    passed: bool = Field(alias="pass")
    diagnostics: Dict[str, float] = Field(default_factory=dict)
    flags: Dict[str, bool] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)

    @classmethod
    def evaluate(
        cls, identity_name: str, residuals: Dict[str, float], tolerance: float, **extra: Any
    ) -> 'VerificationReport':
        """Pass iff every gating residual is within tolerance (NaN fails)"""
        residuals = {k: float(v) for k, v in residuals.items()}
        passed = all(v <= tolerance for v in residuals.values())
        return cls(
            identity_name=identity_name,
            residuals=residuals,
            tolerance=tolerance,
            passed=passed,
            **extra,
        )


class AmplitudeEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    config: str
    re: float
    im: float
    prob: float


class SuperpositionReport(BaseModel):
    """Amplitudes of a perturbed evolution applied to one ontological state"""
    model_config = ConfigDict(frozen=True)

    input: str
    scheme: str
    epsilon: Optional[float] = None
    c: Optional[List[Tuple[float, float]]] = None
    timestep: float = 1.0
    amplitudes: List[AmplitudeEntry]
    max_prob: float
    classical: bool
    dominant: str
    threshold: float
    norm_squared: float
    unitary: bool
    metadata: Dict[str, Any] = Field(default_factory=dict)

    def amplitude(self, config: str) -> complex:
        for entry in self.amplitudes:
            if entry.config == config:
                return complex(entry.re, entry.im)
        raise KeyError(config)

    def amplitude_vector(self) -> np.ndarray:
        return np.array([complex(e.re, e.im) for e in self.amplitudes])

    def probabilities(self) -> Dict[str, float]:
        return {e.config: e.prob for e in self.amplitudes}


class ReconstructionPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float
    re: float
    im: float
    abs_error: Optional[float] = None


class ReconstructionSweep(BaseModel):
    """Sinc-series reconstruction over a grid, with the window that produced it"""
    model_config = ConfigDict(frozen=True)

    omega_max: float
    spacing: float
    window: Tuple[int, int]
    sample_count: int
    signal_bandwidth: Optional[float] = None
    aliased: bool = False
    points: List[ReconstructionPoint]
    max_abs_error: Optional[float] = None


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    detail: str = ""


class RunConfig(BaseModel):
    """Everything that determines a CLI run"""
    model_config = ConfigDict(frozen=True)

    command: Literal['ops', 'spectrum', 'bch', 'perturb', 'sweep', 'sample', 'verify-all']
    params: Dict[str, Any] = Field(default_factory=dict)
    output_format: Literal['json', 'csv', 'text'] = 'json'
    output_path: Optional[str] = None
    include_timestamp: bool = True
