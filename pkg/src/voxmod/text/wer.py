"""Word error rate via word-level Levenshtein alignment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class EmptyReference(ValueError):
    pass


@dataclass(frozen=True)
class WerResult:
    wer: float
    substitutions: int
    insertions: int
    deletions: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions


def compute_wer(reference: Sequence[str], hypothesis: Sequence[str]) -> WerResult:
    """(S + I + D) / |reference|; may exceed 1.0.

    The alignment DP treats substitution, insertion, and deletion at unit
    cost; among equally cheap alignments the backtrace prefers the diagonal
    step, then deletion, so the S/I/D split is deterministic (their sum is
    the DP distance either way).
    """
    ref = list(reference)
    hyp = list(hypothesis)
    if not ref:
        raise EmptyReference("reference must be non-empty")
    m, n = len(ref), len(hyp)
    dist = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        dist[i][0] = i
    for j in range(1, n + 1):
        dist[0][j] = j
    for i in range(1, m + 1):
        row = dist[i]
        prev = dist[i - 1]
        r = ref[i - 1]
        for j in range(1, n + 1):
            diag = prev[j - 1] + (0 if r == hyp[j - 1] else 1)
            up = prev[j] + 1
            left = row[j - 1] + 1
            row[j] = diag if diag <= up and diag <= left else (up if up <= left else left)
    subs = ins = dels = 0
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            cost = 0 if ref[i - 1] == hyp[j - 1] else 1
            if dist[i][j] == dist[i - 1][j - 1] + cost:
                subs += cost
                i -= 1
                j -= 1
                continue
        if i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            dels += 1
            i -= 1
            continue
        ins += 1
        j -= 1
    return WerResult(
        wer=(subs + ins + dels) / m, substitutions=subs, insertions=ins, deletions=dels
    )
