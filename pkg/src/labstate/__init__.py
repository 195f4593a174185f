"""Power-set bit registers and exact labstate dynamics for detector networks."""

from .amplitude import Amp, RealQ2, amp_as_rat, amp_mul, amp_sqmod, format_amp, parse_amp
from .bits import BitOp, PBitState, Question, bracket, compose, enumerate_bitops
from .errors import (
    IrrationalProbability,
    LabstateError,
    NonNormalState,
    ScenarioParseError,
    UnmatchedMonomial,
    WiringError,
)
from .network import Bomb, run_ev, run_hardy, stockpile_yield
from .quantum import Labstate, Projector, StageMap, probability, stage_apply
from .register import PermutationFlow, PhysicalRegister, RegisterState

__all__ = [
    "Amp", "RealQ2", "amp_as_rat", "amp_mul", "amp_sqmod", "format_amp", "parse_amp",
    "BitOp", "PBitState", "Question", "bracket", "compose", "enumerate_bitops",
    "IrrationalProbability", "LabstateError", "NonNormalState", "ScenarioParseError",
    "UnmatchedMonomial", "WiringError",
    "Bomb", "run_ev", "run_hardy", "stockpile_yield",
    "Labstate", "Projector", "StageMap", "probability", "stage_apply",
    "PermutationFlow", "PhysicalRegister", "RegisterState",
]

__version__ = "0.1.0"
