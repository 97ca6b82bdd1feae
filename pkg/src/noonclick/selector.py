"""One selection round: phases, log-posterior updates, winner rule.

Every selectable option owns a clock with a phase inside the shared period.
Clicks update unnormalized log posteriors; a winner is declared when the
top clock's posterior exceeds ``alpha`` times the runner-up's.  Between
clicks the phases are re-dealt so that the currently plausible clocks sit
at maximally separated hand positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .click_model import ClickDensity

DEFAULT_ALPHA = 99.0
PERIOD_BASE = 2.0
PERIOD_RATIO = 0.9
PERIOD_INDEX_MIN = -4
PERIOD_INDEX_MAX = 18
MAX_CLICKS_PER_ROUND = 50


class PeriodRangeError(ValueError):
    """Requested period index outside the supported schedule."""


def period_for_index(j: int) -> float:
    """Rotation period schedule: 2.0 * 0.9^j seconds."""
    if not PERIOD_INDEX_MIN <= j <= PERIOD_INDEX_MAX:
        raise PeriodRangeError(
            f"period index {j} outside [{PERIOD_INDEX_MIN}, {PERIOD_INDEX_MAX}]")
    return PERIOD_BASE * PERIOD_RATIO ** j


def click_offset(click_time: float, phase: float, period_T: float) -> float:
    """Click time relative to a clock's noon, wrapped into [-1/2, 1/2)."""
    frac = ((click_time - phase) / period_T) % 1.0
    return frac - 1.0 if frac >= 0.5 else frac


def central_mass_width(density: ClickDensity, mass: float = 0.9) -> float:
    """Width of the central ``mass`` interval of the density.

    The grid is rotated so the circular mean sits mid-domain, then the
    interval between the symmetric tail quantiles is measured.  Used to
    size the number of distinguishable hand positions per period.
    """
    probs = density.normalized() / density.bin_count
    centers = np.arange(density.bin_count)
    angle = 2 * np.pi * (centers + 0.5) / density.bin_count
    mean_angle = math.atan2(float(np.sum(probs * np.sin(angle))),
                            float(np.sum(probs * np.cos(angle))))
    mean_bin = int((mean_angle / (2 * np.pi)) % 1.0 * density.bin_count)
    shift = density.bin_count // 2 - mean_bin
    rotated = np.roll(probs, shift)
    cdf = np.cumsum(rotated)
    lo_q, hi_q = (1.0 - mass) / 2.0, 1.0 - (1.0 - mass) / 2.0
    lo = int(np.searchsorted(cdf, lo_q))
    hi = int(np.searchsorted(cdf, hi_q))
    return max(hi - lo + 1, 1) / density.bin_count


def assign_phases(posterior: dict[str, float], density: ClickDensity,
                  period_T: float) -> dict[str, float]:
    """Deal clocks into slots, most probable first, maximally separated.

    The period is divided into m slots sized to the density's central 90%
    width; clocks ranked by posterior fill the slots round-robin, each later
    lap shifted by a sub-slot so no two clocks share a phase until the slot
    grid is exhausted.
    """
    w = central_mass_width(density)
    m = max(2, int(1.0 / w))
    ranked = sorted(posterior, key=lambda cid: (-posterior[cid], cid))
    phases = {}
    for k, cid in enumerate(ranked):
        phases[cid] = ((k % m) * (period_T / m)
                       + (k // m) * (period_T / (m * m))) % period_T
    return phases


@dataclass
class ClockSet:
    """The selectable options of one round, with priors and phases."""

    ids: list[str]
    priors: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("clock ids must be unique")
        if np.any(self.priors <= 0):
            raise ValueError("priors must be strictly positive")

    @classmethod
    def from_prior(cls, prior: dict[str, float]) -> "ClockSet":
        ids = list(prior)
        return cls(ids=ids,
                   priors=np.array([prior[c] for c in ids], dtype=float),
                   phases=np.zeros(len(ids)))

    def index_of(self, clock_id: str) -> int:
        return self.ids.index(clock_id)


@dataclass
class RoundState:
    """Log posteriors and click history for one selection round."""

    clocks: ClockSet
    density: ClickDensity
    period_T: float
    period_index_j: int = 0
    alpha: float = DEFAULT_ALPHA
    alpha_overrides: dict[str, float] = field(default_factory=dict)
    log_posterior: np.ndarray = field(init=False)
    clicks_so_far: int = 0
    click_offsets: list[np.ndarray] = field(init=False)

    def __post_init__(self):
        self.log_posterior = np.log(self.clocks.priors)
        self.click_offsets = []
        self._deal_phases()

    def set_period(self, j: int) -> float:
        """Adopt the period for schedule index j; rejects out-of-range j."""
        period = period_for_index(j)
        self.period_index_j = j
        self.period_T = period
        self._deal_phases()
        return period

    def posterior(self) -> dict[str, float]:
        """Normalized posterior, computed in log space."""
        logp = self.log_posterior - self.log_posterior.max()
        p = np.exp(logp)
        p /= p.sum()
        return dict(zip(self.clocks.ids, p))

    def register_click(self, click_time: float) -> None:
        """Fold one click's likelihood into every clock and re-deal phases."""
        offsets = np.array([
            click_offset(click_time, phase, self.period_T)
            for phase in self.clocks.phases
        ])
        self.click_offsets.append(offsets)
        self.log_posterior = self.log_posterior + np.log(
            self.density.likelihoods(offsets))
        self.clicks_so_far += 1
        self._deal_phases()

    def check_winner(self) -> str | None:
        """Top clock iff it beats the runner-up by a factor > alpha."""
        if len(self.clocks.ids) < 2:
            return self.clocks.ids[0] if self.clocks.ids else None
        order = self._ranked_indices()
        top, second = order[0], order[1]
        top_id = self.clocks.ids[top]
        alpha = self.alpha_overrides.get(top_id, self.alpha)
        if self.log_posterior[top] - self.log_posterior[second] > math.log(alpha):
            return top_id
        return None

    def winner_offsets(self, clock_id: str) -> list[float]:
        """The round's click offsets relative to the given clock's noon."""
        idx = self.clocks.index_of(clock_id)
        return [float(off[idx]) for off in self.click_offsets]

    def _ranked_indices(self) -> list[int]:
        return sorted(range(len(self.clocks.ids)),
                      key=lambda i: (-self.log_posterior[i], self.clocks.ids[i]))

    def _deal_phases(self) -> None:
        phases = assign_phases(self.posterior(), self.density, self.period_T)
        self.clocks.phases = np.array([phases[c] for c in self.clocks.ids])
