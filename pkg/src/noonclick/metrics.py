"""Text-entry metrics: entropy, edit distance, error rate, entry rate."""

from __future__ import annotations

import numpy as np


def entropy_bits(posterior: dict[str, float] | np.ndarray) -> float:
    """Shannon entropy in bits, with 0*log(0) taken as 0."""
    if isinstance(posterior, dict):
        p = np.array(list(posterior.values()), dtype=float)
    else:
        p = np.asarray(posterior, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def density_bits_per_click(density) -> float:
    """Information a click carries relative to a uniform offset density.

    Negative differential entropy of the normalized click density over the
    unit offset domain: sum over bins of p*width*log2(p).
    """
    p = density.normalized()
    width = 1.0 / density.bin_count
    return float(np.sum(p * width * np.log2(p)))


def levenshtein(a: str, b: str) -> int:
    """Minimum number of insert/delete/substitute edits from a to b."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1,
                           cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[len(b)]


def error_rate(targets: list[str], outputs: list[str]) -> float:
    """Block error rate: summed edit distance over summed target length."""
    if len(targets) != len(outputs):
        raise ValueError("targets and outputs must have equal length")
    total_chars = sum(len(t) for t in targets)
    if total_chars == 0:
        raise ValueError("error rate undefined for empty targets")
    total_dist = sum(levenshtein(t, o) for t, o in zip(targets, outputs))
    return total_dist / total_chars


def words_per_minute(char_count: int, seconds: float) -> float:
    """Entry rate with a word defined as five consecutive characters."""
    if seconds <= 0:
        raise ValueError("elapsed time must be positive")
    return (char_count / 5.0) / (seconds / 60.0)
