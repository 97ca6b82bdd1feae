"""Word-frequency prior over keyboard clocks.

A prefix trie over a word-frequency list supplies context counts; the
prior splits a fixed mass among the four special options and Laplace-smooths
the leftover mass across the 26 letters and the on-screen word completions.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field

log = logging.getLogger(__name__)

LETTERS = "abcdefghijklmnopqrstuvwxyz"
ALLOWED_SINGLE_LETTER_WORDS = {"i", "a"}
MIN_WORD_FREQUENCY = 5          # words must appear strictly more often
COMPLETION_THRESHOLD = 0.001    # f_w / f(context) must strictly exceed this
MAX_COMPLETIONS_PER_LETTER = 3

INDEX_FORMAT_VERSION = 1

_NON_LETTER = re.compile(r"[^a-z]")


class CorpusError(ValueError):
    """Raised when a corpus cannot be built (e.g. empty after filtering)."""


class _TrieNode:
    __slots__ = ("children", "prefix_count", "word_count")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.prefix_count = 0
        self.word_count = 0


class CorpusIndex:
    """Immutable prefix-frequency index over a filtered word list."""

    def __init__(self, counts: dict[str, int]):
        if not counts:
            raise CorpusError("corpus is empty after filtering")
        self._counts = dict(counts)
        self.total_words = sum(counts.values())
        self._root = _TrieNode()
        self._root.prefix_count = self.total_words
        for word, count in counts.items():
            node = self._root
            for ch in word:
                node = node.children.setdefault(ch, _TrieNode())
                node.prefix_count += count
            node.word_count = count

    def _find(self, prefix: str) -> _TrieNode | None:
        node = self._root
        for ch in prefix:
            node = node.children.get(ch)
            if node is None:
                return None
        return node

    def prefix_count(self, prefix: str) -> int:
        """Total frequency of words having ``prefix`` as a prefix."""
        node = self._find(prefix)
        return node.prefix_count if node else 0

    def word_count(self, word: str) -> int:
        """Exact frequency of ``word``, 0 if absent."""
        node = self._find(word)
        return node.word_count if node else 0

    def words_with_prefix(self, prefix: str) -> list[tuple[str, int]]:
        """All (word, count) pairs under ``prefix``."""
        node = self._find(prefix)
        if node is None:
            return []
        out: list[tuple[str, int]] = []
        stack = [(prefix, node)]
        while stack:
            text, cur = stack.pop()
            if cur.word_count:
                out.append((text, cur.word_count))
            for ch, child in cur.children.items():
                stack.append((text + ch, child))
        return out

    def items(self) -> list[tuple[str, int]]:
        return sorted(self._counts.items())

    # -- persistence ------------------------------------------------------

    def to_dict(self) -> dict:
        return {"version": INDEX_FORMAT_VERSION, "words": self._counts}

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusIndex":
        if data.get("version") != INDEX_FORMAT_VERSION:
            raise CorpusError(
                f"unsupported index format version {data.get('version')!r}")
        return cls({str(w): int(c) for w, c in data["words"].items()})

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path: str) -> "CorpusIndex":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def build_index(records) -> CorpusIndex:
    """Filter and aggregate (word, count) records into a CorpusIndex.

    Words are lowercased and stripped of non a-z characters; counts for the
    same surviving word are summed.  Single-letter words other than "i" and
    "a" are dropped, as are words at or below the minimum frequency.
    Malformed records are skipped with a warning count.
    """
    raw: dict[str, int] = {}
    skipped = 0
    for record in records:
        try:
            word, count = record
            word = _NON_LETTER.sub("", str(word).lower())
            count = int(count)
            if not word or count < 0:
                raise ValueError(record)
        except (TypeError, ValueError):
            skipped += 1
            continue
        raw[word] = raw.get(word, 0) + count
    if skipped:
        log.warning("skipped %d malformed corpus records", skipped)
    counts = {
        w: c for w, c in raw.items()
        if c > MIN_WORD_FREQUENCY
        and (len(w) > 1 or w in ALLOWED_SINGLE_LETTER_WORDS)
    }
    return CorpusIndex(counts)


def load_word_frequencies(path: str):
    """Yield (word, count) records from a UTF-8 "word<TAB>count" file."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                yield (line, "malformed")
                continue
            yield parts[0], parts[1]


@dataclass(frozen=True)
class PriorConfig:
    """Fixed masses for the special options; the rest goes to language."""

    special_masses: dict = field(default_factory=lambda: {
        "underscore": 0.17,
        "period": 0.01,
        "delete": 0.03,
        "undo": 0.01,
    })
    completion_threshold: float = COMPLETION_THRESHOLD
    max_completions_per_letter: int = MAX_COMPLETIONS_PER_LETTER
    ideal_user: bool = False

    @property
    def p_alpha(self) -> float:
        return 1.0 - sum(self.special_masses.values())

    def __post_init__(self):
        for name, mass in self.special_masses.items():
            if not 0.0 < mass < 1.0:
                raise ValueError(f"special mass {name}={mass} not in (0,1)")
        if not 0.0 < self.p_alpha < 1.0:
            raise ValueError("special masses leave no room for letters")


def extract_context(output_text: str) -> str:
    """Trailing run of letters in the output; specials reset the context."""
    i = len(output_text)
    while i > 0 and output_text[i - 1] in LETTERS:
        i -= 1
    return output_text[i:]


def select_completions(index: CorpusIndex, context: str,
                       config: PriorConfig | None = None
                       ) -> list[tuple[str, int]]:
    """Up to three common completions per next letter.

    For each letter l', the highest-frequency words prefixed by context+l'
    whose share of the context frequency strictly exceeds the threshold.
    Ties break lexicographically.
    """
    config = config or PriorConfig()
    f_context = index.prefix_count(context) if context else index.total_words
    if f_context <= 0:
        return []
    out: list[tuple[str, int]] = []
    for letter in LETTERS:
        candidates = [
            (w, c) for w, c in index.words_with_prefix(context + letter)
            if c / f_context > config.completion_threshold
        ]
        candidates.sort(key=lambda wc: (-wc[1], wc[0]))
        out.extend(candidates[:config.max_completions_per_letter])
    return out


def compute_prior(index: CorpusIndex | None, config: PriorConfig,
                  context: str, onscreen_words: list[tuple[str, int]]
                  ) -> dict[str, float]:
    """Masses for the 26 letter clocks, the word clocks, and the specials.

    Letter clocks use Laplace-smoothed context-continuation counts; word
    clocks use the word's own frequency.  Clock keys are the letter itself,
    "w:<word>" for completions, and the special names.
    """
    f_context = index.prefix_count(context) if index else 0
    if index and not context:
        f_context = index.total_words
    f_on = sum(c for _, c in onscreen_words)
    c_on = len(onscreen_words) + len(LETTERS)
    prior: dict[str, float] = {}
    if config.ideal_user:
        denom = f_context + c_on
    else:
        denom = f_context + f_on + c_on
    for letter in LETTERS:
        numer = index.prefix_count(context + letter) if index else 0
        if config.ideal_user:
            numer -= sum(c for w, c in onscreen_words
                         if w.startswith(context + letter))
            numer = max(numer, 0)
        prior[letter] = config.p_alpha * (numer + 1) / denom
    for word, count in onscreen_words:
        prior["w:" + word] = config.p_alpha * (count + 1) / denom
    prior.update(config.special_masses)
    return prior
