"""Ranked word lists and elimination bookkeeping.

A ranking orders the whole vocabulary by some score; elimination always
removes from the head of the list. At elimination percentage p over a
vocabulary of size n, floor(p/100 * n) words are removed and the remaining
tail survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, IngestionError

__all__ = ["RankedWordList", "eliminate_count", "load_ranking"]


def eliminate_count(n: int, percentage: float) -> int:
    """floor(p/100 * n), guarded against float fuzz for integral inputs."""
    if not 0 <= percentage <= 100:
        raise ConfigError(f"elimination percentage must be in [0, 100], got {percentage}")
    if isinstance(percentage, int) or float(percentage).is_integer():
        return (int(percentage) * n) // 100
    return math.floor(percentage / 100.0 * n + 1e-9)


@dataclass
class RankedWordList:
    """Vocabulary ordered by a selector score, elimination order = list order.

    ``direction`` records whether scores run ascending or descending along
    the list; the head is always eliminated first either way.
    """

    method: str
    entries: list[tuple[str, float]]
    direction: str = "ascending"

    def __len__(self) -> int:
        return len(self.entries)

    def words(self) -> list[str]:
        return [w for w, _ in self.entries]

    def eliminated(self, percentage: float) -> list[str]:
        return self.words()[: eliminate_count(len(self.entries), percentage)]

    def survivors(self, percentage: float) -> list[str]:
        return self.words()[eliminate_count(len(self.entries), percentage):]

    @property
    def score_name(self) -> str:
        return "distance" if self.method.startswith("hyperplane") else "score"

    def save_csv(self, path) -> None:
        """Write ``rank,word,<score>`` with the method tagged in a comment."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# method={self.method} direction={self.direction}\n")
            fh.write(f"rank,word,{self.score_name}\n")
            for rank, (word, score) in enumerate(self.entries):
                fh.write(f"{rank},{word},{float(score)!r}\n")


def load_ranking(path) -> RankedWordList:
    """Read a ranking CSV written by :meth:`RankedWordList.save_csv`."""
    method = "unknown"
    direction = "ascending"
    entries: list[tuple[str, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    body_start = 0
    for line in lines:
        if line.startswith("#"):
            body_start += 1
            for part in line[1:].split():
                if part.startswith("method="):
                    method = part.split("=", 1)[1]
                elif part.startswith("direction="):
                    direction = part.split("=", 1)[1]
        else:
            break
    if body_start >= len(lines) or not lines[body_start].startswith("rank,word,"):
        raise IngestionError(f"{path}: missing ranking header")
    for lineno, line in enumerate(lines[body_start + 1:], start=body_start + 2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise IngestionError(f"{path}: malformed ranking row on line {lineno}")
        try:
            entries.append((parts[1], float(parts[2])))
        except ValueError:
            raise IngestionError(f"{path}: bad score on line {lineno}")
    return RankedWordList(method=method, entries=entries, direction=direction)
