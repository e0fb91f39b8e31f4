"""Role retention and role-transition estimates over the window sequence."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

INACTIVE = None


@dataclass(frozen=True)
class StateSequence:
    account_id: str
    states: tuple[int | None, ...]


def build_sequences(assignments: Sequence[Mapping[str, int]], window_count: int | None = None) -> list[StateSequence]:
    """One state per window for every account assigned in window 0.

    Accounts with no assignment in a later window get the inactive marker.
    """
    window_count = window_count or len(assignments)
    if not assignments:
        return []
    out = []
    for acc in sorted(assignments[0]):
        states = tuple(assignments[w].get(acc, INACTIVE) if w < len(assignments) else INACTIVE
                       for w in range(window_count))
        out.append(StateSequence(acc, states))
    return out


def retention_span(states: Sequence[int | None]) -> int:
    if not states or states[0] is INACTIVE:
        return 0
    n = 1
    while n < len(states) and states[n] == states[0]:
        n += 1
    return n


@dataclass
class Retention:
    proportions: dict[int, np.ndarray]  # role -> proportion at span 1..window_count
    counts: dict[int, np.ndarray]
    excluded: int


def retention_distribution(sequences: Sequence[StateSequence], window_count: int | None = None) -> Retention:
    """Per starting role, the share of accounts keeping it for exactly 1..W windows."""
    if window_count is None:
        window_count = max((len(s.states) for s in sequences), default=0)
    counts: dict[int, np.ndarray] = {}
    excluded = 0
    for seq in sequences:
        span = retention_span(seq.states)
        if span == 0:
            excluded += 1
            continue
        counts.setdefault(seq.states[0], np.zeros(window_count, dtype=np.int64))[span - 1] += 1
    props = {r: c / c.sum() for r, c in sorted(counts.items())}
    return Retention(props, dict(sorted(counts.items())), excluded)


@dataclass
class TransitionMatrix:
    counts: np.ndarray
    probabilities: np.ndarray
    zero_rows: list[int] = field(default_factory=list)


def _normalize_counts(C: np.ndarray) -> TransitionMatrix:
    sums = C.sum(1, keepdims=True)
    P = np.divide(C, sums, out=np.zeros(C.shape), where=sums > 0)
    return TransitionMatrix(C, P, [int(i) for i in np.nonzero(sums.ravel() == 0)[0]])


def _state_index(s, k: int, inactive_state: bool) -> int | None:
    if s is INACTIVE:
        return k if inactive_state else None
    if not 0 <= s < k:
        raise ValueError(f"state {s} outside [0, {k})")
    return s


def transition_counts(sequences: Sequence[StateSequence], k: int, inactive_state: bool = False,
                      step: int | None = None) -> np.ndarray:
    size = k + 1 if inactive_state else k
    C = np.zeros((size, size), dtype=np.int64)
    for seq in sequences:
        pairs = zip(seq.states, seq.states[1:])
        for i, (a, b) in enumerate(pairs):
            if step is not None and i != step:
                continue
            ia, ib = _state_index(a, k, inactive_state), _state_index(b, k, inactive_state)
            if ia is None or ib is None:
                continue
            C[ia, ib] += 1
    return C


def transition_matrix(sequences: Sequence[StateSequence], k: int, inactive_state: bool = False) -> TransitionMatrix:
    """Maximum-likelihood transition probabilities pooled over all window pairs.

    Pairs touching an inactive window are skipped unless ``inactive_state``
    adds it as an extra state with index ``k``.
    """
    return _normalize_counts(transition_counts(sequences, k, inactive_state))


def transition_matrices_by_step(sequences: Sequence[StateSequence], k: int,
                                inactive_state: bool = False) -> list[TransitionMatrix]:
    steps = max((len(s.states) for s in sequences), default=1) - 1
    return [_normalize_counts(transition_counts(sequences, k, inactive_state, step=i)) for i in range(steps)]


def write_matrix_csv(path, M: np.ndarray, labels: Sequence[str], header_comment: str | None = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["from", *labels])
        for lab, row in zip(labels, M):
            w.writerow([lab, *(repr(float(v)) if M.dtype.kind == "f" else int(v) for v in row)])


def write_retention_csv(path, ret: Retention, labels: Mapping[int, str], header_comment: str | None = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if header_comment:
            fh.write(f"# {header_comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["role", "span", "proportion", "count"])
        for role, props in ret.proportions.items():
            for span, (p, c) in enumerate(zip(props, ret.counts[role]), 1):
                w.writerow([labels.get(role, f"role{role}"), span, repr(float(p)), int(c)])
