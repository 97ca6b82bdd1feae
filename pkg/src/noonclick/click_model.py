"""Adaptive estimate of the user's click-time distribution around noon.

Click offsets are kept in normalized units t/T on the circular domain
[-1/2, 1/2).  The estimate is an unnormalized Parzen-window accumulator
damped by a factor ``lambda`` per selection, so recent clicks dominate and
the model keeps tracking a user whose precision changes over time.
Selections only feed the estimate after a delay of ``n_delay`` further
selections, which leaves room for an undo to cancel a mistaken round.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

DEFAULT_BIN_COUNT = 80
DEFAULT_LAMBDA = 0.9
DEFAULT_N_DELAY = 2

# Initial guess: the user clicks a touch late (reaction time), with a broad
# spread.  In normalized units: Normal(0.05, 0.14^2), independent of period.
INIT_MEAN = 0.05
INIT_SD = 0.14

SIGMA_FLOOR = 0.005     # smallest allowed spread estimate (normalized units)
EPSILON_FLOOR = 1e-10   # added before normalization so likelihoods stay > 0

FORMAT_VERSION = 1


class ConfigurationError(ValueError):
    """Raised for invalid density or queue configuration."""


def bin_centers(bin_count: int) -> np.ndarray:
    """Centers of a uniform grid over [-1/2, 1/2)."""
    return -0.5 + (np.arange(bin_count) + 0.5) / bin_count


def wrapped_normal(centers: np.ndarray, mean: float, sd: float) -> np.ndarray:
    """Normal pdf wrapped onto the unit circle, sampled at ``centers``.

    Three images (mean, mean±1) suffice: further images carry < 1e-10 mass
    for any realistic sd.  The samples are rescaled so that the discrete
    integral (sum times bin width) is exactly 1.
    """
    width = 1.0 / len(centers)
    vals = np.zeros_like(centers)
    for image in (-1.0, 0.0, 1.0):
        z = (centers - mean - image) / sd
        vals += np.exp(-0.5 * z * z)
    vals /= vals.sum() * width
    return vals


def bandwidth(sigma_hat: float, effective_n: float) -> float:
    """Normal scale rule kernel width: 1.06 * n^(-0.2) * sigma."""
    return 1.06 * effective_n ** (-0.2) * sigma_hat


@dataclass
class PendingSelection:
    """A finished round whose clicks are not yet trusted for learning."""

    clock_id: str
    offsets: list[float]
    age: int = 0


@dataclass
class ClickDensity:
    """Unnormalized, damped accumulator for the click-offset density."""

    period_T: float
    bins: np.ndarray
    bin_count: int
    damping_lambda: float
    recent_offsets: deque = field(default_factory=deque)
    _pending: deque = field(default_factory=deque)
    n_delay: int = DEFAULT_N_DELAY

    @property
    def effective_n(self) -> float:
        return 1.0 / (1.0 - self.damping_lambda)

    # -- estimation -------------------------------------------------------

    def sigma_hat(self) -> float:
        """ML spread of the recently committed offsets, floored.

        With fewer than two samples there is nothing to estimate yet and we
        fall back to the initial density's spread.
        """
        if len(self.recent_offsets) < 2:
            return INIT_SD
        arr = np.asarray(self.recent_offsets)
        return max(float(np.sqrt(np.mean((arr - arr.mean()) ** 2))), SIGMA_FLOOR)

    def stage_selection(self, clock_id: str, offsets: list[float]) -> None:
        """Queue a finished selection; commit whatever has aged out."""
        for entry in self._pending:
            entry.age += 1
        self._pending.append(PendingSelection(clock_id, list(offsets)))
        while self._pending and self._pending[0].age >= self.n_delay:
            self.commit_update(self._pending.popleft())

    def discard_last(self) -> None:
        """Drop the newest pending selection (it was undone)."""
        if self._pending:
            self._pending.pop()

    def commit_update(self, selection: PendingSelection) -> None:
        """Damp the accumulator and add one unit-mass kernel per click.

        The kernel width comes from the spread of clicks committed *before*
        this round; the round's own offsets join ``recent_offsets`` after.
        """
        sigma_ns = bandwidth(self.sigma_hat(), self.effective_n)
        centers = bin_centers(self.bin_count)
        self.bins = self.damping_lambda * self.bins
        for t in selection.offsets:
            self.bins = self.bins + wrapped_normal(centers, t, sigma_ns)
        cap = int(np.ceil(self.effective_n))
        for t in selection.offsets:
            self.recent_offsets.append(t)
            while len(self.recent_offsets) > cap:
                self.recent_offsets.popleft()

    # -- evaluation -------------------------------------------------------

    def normalized(self) -> np.ndarray:
        """Density on the grid, strictly positive, integrating to 1."""
        width = 1.0 / self.bin_count
        vals = self.bins + EPSILON_FLOOR
        return vals / (vals.sum() * width)

    def likelihood(self, offset: float) -> float:
        """Density value at the bin containing ``offset`` (wrapped)."""
        idx = self._bin_index(offset)
        return float(self.normalized()[idx])

    def likelihoods(self, offsets: np.ndarray) -> np.ndarray:
        """Vectorized likelihood lookup for an array of offsets."""
        wrapped = (np.asarray(offsets) + 0.5) % 1.0
        idx = np.minimum((wrapped * self.bin_count).astype(int),
                         self.bin_count - 1)
        return self.normalized()[idx]

    def _bin_index(self, offset: float) -> int:
        wrapped = (offset + 0.5) % 1.0
        return min(int(wrapped * self.bin_count), self.bin_count - 1)

    def total_mass(self) -> float:
        """Discrete integral of the unnormalized accumulator."""
        return float(self.bins.sum() / self.bin_count)

    # -- persistence ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "period_T": self.period_T,
            "bin_count": self.bin_count,
            "damping_lambda": self.damping_lambda,
            "n_delay": self.n_delay,
            "bins": self.bins.tolist(),
            "recent_offsets": list(self.recent_offsets),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClickDensity":
        if data.get("version") != FORMAT_VERSION:
            raise ConfigurationError(
                f"unsupported density format version {data.get('version')!r}")
        density = cls(
            period_T=float(data["period_T"]),
            bins=np.asarray(data["bins"], dtype=float),
            bin_count=int(data["bin_count"]),
            damping_lambda=float(data["damping_lambda"]),
            n_delay=int(data.get("n_delay", DEFAULT_N_DELAY)),
        )
        density.recent_offsets.extend(float(x) for x in data["recent_offsets"])
        return density

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path: str) -> "ClickDensity":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def init_density(period_T: float,
                 bin_count: int = DEFAULT_BIN_COUNT,
                 damping_lambda: float = DEFAULT_LAMBDA,
                 n_delay: int = DEFAULT_N_DELAY) -> ClickDensity:
    """Fresh accumulator holding n_lambda copies of the initial guess.

    The n_lambda weighting keeps the initial estimate dominant over the
    first few selections; a single click's kernel has mass 1 against it.
    """
    if period_T <= 0:
        raise ConfigurationError(f"period must be positive, got {period_T}")
    if not 0.0 < damping_lambda < 1.0:
        raise ConfigurationError(
            f"damping factor must lie in (0, 1), got {damping_lambda}")
    if bin_count < 16:
        raise ConfigurationError(f"bin_count must be >= 16, got {bin_count}")
    if n_delay < 0:
        raise ConfigurationError(f"n_delay must be >= 0, got {n_delay}")
    n_lambda = 1.0 / (1.0 - damping_lambda)
    bins = n_lambda * wrapped_normal(bin_centers(bin_count), INIT_MEAN, INIT_SD)
    return ClickDensity(period_T=period_T, bins=bins, bin_count=bin_count,
                        damping_lambda=damping_lambda, n_delay=n_delay)
