"""
Report and run-configuration models
"""

from schemas.reports import (
    AmplitudeEntry,
    CheckResult,
    ReconstructionPoint,
    ReconstructionSweep,
    RunConfig,
    SuperpositionReport,
    VerificationReport,
)

__all__ = [
    'AmplitudeEntry',
    'CheckResult',
    'ReconstructionPoint',
    'ReconstructionSweep',
    'RunConfig',
    'SuperpositionReport',
    'VerificationReport',
]
