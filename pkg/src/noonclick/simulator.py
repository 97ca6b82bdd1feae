"""Synthetic users driving the selection engine at desk scale.

Provides single-selection trials (clicks-to-selection, error fraction,
entropy traces), a scripted typing agent for whole phrases, and a
row-column scanning baseline for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .click_model import (
    DEFAULT_BIN_COUNT,
    DEFAULT_LAMBDA,
    DEFAULT_N_DELAY,
    ClickDensity,
    init_density,
)
from .keyboard import DELETE, PERIOD, UNDERSCORE, UNDO, KeyboardState
from .language_prior import CorpusIndex, PriorConfig
from .selector import (
    DEFAULT_ALPHA,
    MAX_CLICKS_PER_ROUND,
    ClockSet,
    RoundState,
    period_for_index,
)


@dataclass(frozen=True)
class UserProfile:
    """Synthetic clicker: offset statistics in normalized units."""

    offset_mean: float = 0.05
    offset_sd: float = 0.02
    lapse_prob: float = 0.0

    def __post_init__(self):
        if self.offset_sd <= 0:
            raise ValueError("offset_sd must be positive")
        if not 0.0 <= self.lapse_prob <= 0.5:
            raise ValueError("lapse_prob must lie in [0, 0.5]")


@dataclass(frozen=True)
class EngineConfig:
    period_index: int = 0
    alpha: float = DEFAULT_ALPHA
    damping_lambda: float = DEFAULT_LAMBDA
    bin_count: int = DEFAULT_BIN_COUNT
    n_delay: int = DEFAULT_N_DELAY

    @property
    def period_T(self) -> float:
        return period_for_index(self.period_index)

    def fresh_density(self) -> ClickDensity:
        return init_density(self.period_T, self.bin_count,
                            self.damping_lambda, self.n_delay)


@dataclass
class TrialRecord:
    """Outcome of one simulated selection."""

    target: str
    winner: str
    clicks: int
    correct: bool
    seconds: float
    entropy_trace: list[float]
    aborted: bool = False


def pretrain_density(density: ClickDensity, profile: UserProfile,
                     rng: np.random.Generator, selections: int = 50,
                     clicks_per_selection: int = 2) -> None:
    """Feed the density synthetic committed selections from the profile.

    Approximates the experienced-user regime so measurements start from a
    matched, well-learned click model.
    """
    for _ in range(selections):
        offsets = profile.offset_mean + profile.offset_sd * rng.standard_normal(
            clicks_per_selection)
        offsets = (offsets + 0.5) % 1.0 - 0.5
        density.stage_selection("train", list(offsets))
    # flush the delay queue so all training rounds are committed
    for _ in range(density.n_delay):
        density.stage_selection("train", [])


def _run_round(round_state: RoundState, target_idx: int,
               profile: UserProfile, rng: np.random.Generator,
               start_time: float) -> tuple[str | None, float, list[float]]:
    """Click at the target's noon each period until a winner emerges.

    Returns (winner or None on abort, end wall time, entropy trace).
    """
    T = round_state.period_T
    now = start_time
    trace: list[float] = []
    winner = round_state.check_winner()
    while winner is None:
        if round_state.clicks_so_far >= MAX_CLICKS_PER_ROUND:
            return None, now, trace
        phase = float(round_state.clocks.phases[target_idx])
        # next time the target hand passes noon, strictly after `now`
        k = np.floor((now - phase) / T) + 1.0
        noon = phase + k * T
        if profile.lapse_prob > 0 and rng.random() < profile.lapse_prob:
            now = noon  # missed this pass; wait a full revolution
            continue
        click_time = noon + T * (profile.offset_mean
                                 + profile.offset_sd * rng.standard_normal())
        round_state.register_click(click_time)
        now = max(click_time, noon)
        trace.append(metrics.entropy_bits(round_state.posterior()))
        winner = round_state.check_winner()
    return winner, now, trace


def simulate_selection(prior: dict[str, float], target: str,
                       profile: UserProfile,
                       config: EngineConfig = EngineConfig(),
                       rng_seed: int | np.random.Generator = 0,
                       density: ClickDensity | None = None,
                       learn: bool = True) -> TrialRecord:
    """Run one selection round against the engine.

    The synthetic user aims for ``target``'s noon every period.  With a
    provided density the trial continues that user's learning (unless
    ``learn`` is off); otherwise a fresh density is used.
    """
    if target not in prior:
        raise ValueError(f"target {target!r} not among clocks")
    rng = (rng_seed if isinstance(rng_seed, np.random.Generator)
           else np.random.default_rng(rng_seed))
    if density is None:
        density = config.fresh_density()
    clocks = ClockSet.from_prior(prior)
    round_state = RoundState(clocks=clocks, density=density,
                             period_T=config.period_T,
                             period_index_j=config.period_index,
                             alpha=config.alpha)
    target_idx = clocks.index_of(target)
    winner, end_time, trace = _run_round(round_state, target_idx, profile,
                                         rng, 0.0)
    if winner is None:
        return TrialRecord(target=target, winner="", clicks=MAX_CLICKS_PER_ROUND,
                           correct=False, seconds=end_time,
                           entropy_trace=trace, aborted=True)
    if learn:
        density.stage_selection(winner, round_state.winner_offsets(winner))
    return TrialRecord(target=target, winner=winner,
                       clicks=round_state.clicks_so_far,
                       correct=winner == target, seconds=end_time,
                       entropy_trace=trace)


def run_selection_batch(prior: dict[str, float], profile: UserProfile,
                        config: EngineConfig, seed: int, trials: int,
                        pretrain: bool = True,
                        targets: list[str] | None = None
                        ) -> list[TrialRecord]:
    """Repeated selections with a persistent, learning density.

    Targets are drawn from the prior (realistic usage) unless given
    explicitly.  Deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    density = config.fresh_density()
    if pretrain:
        pretrain_density(density, profile, rng)
    ids = list(prior)
    weights = np.array([prior[c] for c in ids], dtype=float)
    weights /= weights.sum()
    records = []
    for t in range(trials):
        target = (targets[t % len(targets)] if targets
                  else ids[int(rng.choice(len(ids), p=weights))])
        records.append(simulate_selection(prior, target, profile, config,
                                          rng, density))
    return records


@dataclass
class TypingResult:
    output: str
    clicks: int
    seconds: float
    selections: int
    errors: int
    aborted: bool = False
    records: list[TrialRecord] = field(default_factory=list)


def _choose_target(state: KeyboardState, phrase: str,
                   prior: dict[str, float], pending_undo: bool) -> str:
    """Scripted agent policy: highest-prior option consistent with phrase."""
    text = state.text
    if pending_undo:
        return UNDO
    if not phrase.startswith(text):
        return DELETE
    best = None
    ctx = state.context
    base = text[:len(text) - len(ctx)]
    for word, _ in state.completions:
        candidate = base + word
        if len(candidate) > len(text) and phrase.startswith(candidate):
            key = "w:" + word
            if best is None or prior.get(key, 0.0) > prior.get(best, 0.0):
                best = key
    if best is not None:
        return best
    nxt = phrase[len(text)]
    if nxt == "_":
        return UNDERSCORE
    if nxt == ".":
        return PERIOD
    return nxt


def simulate_typing(phrase: str, profile: UserProfile,
                    corpus_index: CorpusIndex | None,
                    prior_config: PriorConfig = PriorConfig(),
                    config: EngineConfig = EngineConfig(),
                    seed: int = 0,
                    density: ClickDensity | None = None,
                    pretrain: bool = True) -> TypingResult:
    """Type a phrase with the scripted agent; stop when the output matches.

    The agent picks the consistent word completion with the highest prior
    when one is on screen, otherwise the next character; a wrong selection
    is undone on the following round.  Aborts after 10x phrase length
    selections.
    """
    rng = np.random.default_rng(seed)
    if density is None:
        density = config.fresh_density()
        if pretrain:
            pretrain_density(density, profile, rng)
    state = KeyboardState(index=corpus_index, prior_config=prior_config)
    clicks = 0
    selections = 0
    errors = 0
    now = 0.0
    pending_undo = False
    records: list[TrialRecord] = []
    budget = max(10 * len(phrase), 20)
    while state.text != phrase:
        if selections >= budget:
            return TypingResult(state.text, clicks, now, selections, errors,
                                aborted=True, records=records)
        prior = state.prior()
        target = _choose_target(state, phrase, prior, pending_undo)
        clocks = ClockSet.from_prior(prior)
        round_state = RoundState(clocks=clocks, density=density,
                                 period_T=config.period_T,
                                 period_index_j=config.period_index,
                                 alpha=config.alpha)
        winner, now, trace = _run_round(round_state,
                                        clocks.index_of(target), profile,
                                        rng, now)
        if winner is None:
            return TypingResult(state.text, clicks, now, selections, errors,
                                aborted=True, records=records)
        clicks += round_state.clicks_so_far
        selections += 1
        correct = winner == target
        if not correct:
            errors += 1
        records.append(TrialRecord(target=target, winner=winner,
                                   clicks=round_state.clicks_so_far,
                                   correct=correct, seconds=now,
                                   entropy_trace=trace))
        was_undo = state.apply_selection(winner)
        if was_undo:
            density.discard_last()
        density.stage_selection(winner, round_state.winner_offsets(winner))
        pending_undo = not correct and not was_undo
    return TypingResult(state.text, clicks, now, selections, errors,
                        records=records)


# -- row-column scanning baseline ----------------------------------------

SCAN_KEYS = "abcdefghijklmnopqrstuvwxyz" + "_" + "." + "\b" + "\x15"
SCAN_COLS = 5
SCAN_COMPLETION_SLOTS = 6


def scanning_delay(j: int) -> float:
    """Scanning delay schedule: 0.1 * (10 - j) seconds."""
    if j >= 10:
        raise ValueError("delay index must keep the delay positive")
    return 0.1 * (10 - j)


def _scan_position(char: str) -> tuple[int, int]:
    i = SCAN_KEYS.index(char)
    # completions occupy column 0; keys fill columns 1..5
    return i // SCAN_COLS, 1 + i % SCAN_COLS


def simulate_scanning(phrase: str, delay_d: float,
                      corpus_index: CorpusIndex | None = None,
                      use_completions: bool = False) -> tuple[int, float]:
    """Error-free row-column scanning agent over the 6x5 grid.

    Each selection costs two clicks (row, then column) and
    (rows-to-wait + cols-to-wait) * delay in time.  With completions on,
    the left column holds the six most frequent words for the current
    context; the agent takes one whenever it is consistent with the phrase.
    """
    text = ""
    clicks = 0
    seconds = 0.0
    while text != phrase:
        if not phrase.startswith(text):
            raise RuntimeError("scanning agent is error-free by construction")
        completion = None
        if use_completions and corpus_index is not None:
            ctx_start = len(text)
            while ctx_start > 0 and text[ctx_start - 1] in SCAN_KEYS[:26]:
                ctx_start -= 1
            ctx = text[ctx_start:]
            words = corpus_index.words_with_prefix(ctx) if ctx else []
            words.sort(key=lambda wc: (-wc[1], wc[0]))
            for slot, (word, _) in enumerate(words[:SCAN_COMPLETION_SLOTS]):
                candidate = text[:ctx_start] + word
                if len(candidate) > len(text) and phrase.startswith(candidate):
                    completion = (slot, candidate)
                    break
        if completion is not None:
            slot, new_text = completion
            row, col = slot, 0
            text = new_text
        else:
            ch = phrase[len(text)]
            if ch not in SCAN_KEYS:
                raise ValueError(f"character {ch!r} not on the scanning grid")
            row, col = _scan_position(ch)
            text += ch
        clicks += 2
        seconds += (row + col) * delay_d
    return clicks, seconds
