"""Writing-application state: layout, text editing, and per-round priors.

The keyboard offers the 26 letters (alphabetical, across then down on a
6x5 grid), an underscore for space, a period, character delete, and undo,
plus up to three word completions beside each letter.  Selecting a
completion emits the rest of that word (no trailing space).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .language_prior import (
    LETTERS,
    CorpusIndex,
    PriorConfig,
    extract_context,
    select_completions,
)

UNDERSCORE = "underscore"
PERIOD = "period"
DELETE = "delete"
UNDO = "undo"
SPECIAL_CLOCKS = (UNDERSCORE, PERIOD, DELETE, UNDO)

GRID_ROWS = 6
GRID_COLS = 5


def grid_layout() -> list[list[str]]:
    """6x5 key grid: a-z across then down, then the four specials."""
    keys = list(LETTERS) + list(SPECIAL_CLOCKS)
    return [keys[r * GRID_COLS:(r + 1) * GRID_COLS] for r in range(GRID_ROWS)]


def clock_label(clock_id: str) -> str:
    if clock_id.startswith("w:"):
        return clock_id[2:]
    return {UNDERSCORE: "_", PERIOD: ".", DELETE: "del", UNDO: "undo"}.get(
        clock_id, clock_id)


@dataclass
class KeyboardState:
    """Output text plus an undo stack of previous texts."""

    index: CorpusIndex | None
    prior_config: PriorConfig = field(default_factory=PriorConfig)
    text: str = ""
    _undo_stack: list[str] = field(default_factory=list)
    completions: list[tuple[str, int]] = field(default_factory=list)

    def __post_init__(self):
        self.refresh_completions()

    @property
    def context(self) -> str:
        return extract_context(self.text)

    def refresh_completions(self) -> None:
        if self.index is None:
            self.completions = []
        else:
            self.completions = select_completions(
                self.index, self.context, self.prior_config)

    def prior(self) -> dict[str, float]:
        """Clock priors for the next round, under the current context."""
        from .language_prior import compute_prior
        return compute_prior(self.index, self.prior_config,
                             self.context, self.completions)

    def apply_selection(self, clock_id: str) -> bool:
        """Mutate the text for a winning clock.

        Returns True when the selection was an undo (the caller must then
        drop the undone round from click learning).
        """
        if clock_id == UNDO:
            if self._undo_stack:
                self.text = self._undo_stack.pop()
            self.refresh_completions()
            return True
        self._undo_stack.append(self.text)
        if clock_id == UNDERSCORE:
            self.text += "_"
        elif clock_id == PERIOD:
            self.text += "."
        elif clock_id == DELETE:
            self.text = self.text[:-1]
        elif clock_id.startswith("w:"):
            word = clock_id[2:]
            self.text = self.text[:len(self.text) - len(self.context)] + word
        else:
            self.text += clock_id
        self.refresh_completions()
        return False
