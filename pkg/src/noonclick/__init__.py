"""Clock-based single-switch selection: engine, simulator, and session service."""

from .click_model import ClickDensity, bandwidth, init_density
from .language_prior import CorpusIndex, PriorConfig, build_index, compute_prior, select_completions
from .metrics import entropy_bits, error_rate, levenshtein, words_per_minute
from .selector import ClockSet, RoundState, click_offset, period_for_index
from .simulator import EngineConfig, UserProfile, simulate_scanning, simulate_selection, simulate_typing

__all__ = [
    "ClickDensity", "bandwidth", "init_density",
    "CorpusIndex", "PriorConfig", "build_index", "compute_prior",
    "select_completions",
    "entropy_bits", "error_rate", "levenshtein", "words_per_minute",
    "ClockSet", "RoundState", "click_offset", "period_for_index",
    "EngineConfig", "UserProfile", "simulate_scanning", "simulate_selection",
    "simulate_typing",
]

__version__ = "0.1.0"
