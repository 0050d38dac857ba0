"""Evidential reasoning workbench.

Graded belief arguments built from core positions and exception
conditions, fused with explicit handling of shared assumptions.  Conflict
is quantified, attributed to culpable assumptions, and resolved by
principled retraction rather than averaged away.
"""

from .arguments import (
    Argument,
    EvidenceItem,
    ExceptionCondition,
    ExceptionStatus,
    Rebut,
    Undercut,
    compile_argument,
    set_exception_status,
)
from .belief import (
    Frame,
    HypothesisSubset,
    MassFunction,
    bayes_posterior,
    combine_dempster,
    mass_new,
    vacuous,
)
from .fusion import (
    CulpabilityReport,
    FusionResult,
    VoiResult,
    culpability,
    fuse,
    value_of_question,
)
from .ledger import AssumptionKind, AssumptionRecord, Ledger, RecordState
from .resolution import ResolutionPolicy, ResolutionTrace, Terminal
from .scenarios import SCENARIOS, load_scenario
from .session import Session

__all__ = [
    "Argument",
    "AssumptionKind",
    "AssumptionRecord",
    "CulpabilityReport",
    "EvidenceItem",
    "ExceptionCondition",
    "ExceptionStatus",
    "Frame",
    "FusionResult",
    "HypothesisSubset",
    "Ledger",
    "MassFunction",
    "Rebut",
    "RecordState",
    "ResolutionPolicy",
    "ResolutionTrace",
    "SCENARIOS",
    "Session",
    "Terminal",
    "Undercut",
    "VoiResult",
    "bayes_posterior",
    "combine_dempster",
    "compile_argument",
    "culpability",
    "fuse",
    "load_scenario",
    "mass_new",
    "set_exception_status",
    "vacuous",
    "value_of_question",
]

__version__ = "0.1.0"
