"""Age dynamics, cost accounting and per-run statistics.

Slot convention used across the package: at slot ``t`` the cost
``sum_i h_i(t)`` accrues first, then the slot-``t`` action is taken, its
outcome is realised within slot ``t`` and the ages advance into ``t + 1``.
Every UE starts at age 1.

UE, cell and slot indices are 0-based throughout the Python API.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class ConfigurationError(ValueError):
    """Raised for malformed inputs: bad indices, ragged arrays, bad ranges."""


def advance_age(h: Sequence[int], successes: Iterable[int]) -> tuple[int, ...]:
    """Return the next age vector: 1 for delivered UEs, ``h[i] + 1`` otherwise."""
    n = len(h)
    delivered = set(successes)
    for i in delivered:
        if not 0 <= i < n:
            raise ConfigurationError(f"UE index {i} out of range for N={n}")
    return tuple(1 if i in delivered else a + 1 for i, a in enumerate(h))


def accumulate_cost(per_slot_ages: Sequence[Sequence[int]]) -> int:
    """Total cost ``sum_t sum_i h_i(t)`` as an exact integer."""
    if len(per_slot_ages) == 0:
        raise ConfigurationError("empty age sequence")
    n = len(per_slot_ages[0])
    total = 0
    for ages in per_slot_ages:
        if len(ages) != n:
            raise ConfigurationError("ragged age sequence")
        total += sum(int(a) for a in ages)
    return total


@dataclass(frozen=True)
class RunStats:
    """Accounting for one simulated horizon.

    ``interval_lengths`` holds the completed inter-success intervals of a
    single-BS run and ``tail_length`` the final partial interval; together
    they sum to ``T``. Both are only populated for adversarial runs.
    """

    T: int
    N: int
    per_slot_age_sum: np.ndarray
    successes_per_ue: np.ndarray
    attempts_per_ue: np.ndarray
    nonempty_cells_per_slot: np.ndarray
    interval_lengths: tuple[int, ...] = ()
    tail_length: int = 0
    final_ages: tuple[int, ...] = field(default=())

    @property
    def total_cost(self) -> int:
        return int(self.per_slot_age_sum.sum(dtype=np.int64))

    @property
    def time_avg_aoi(self) -> Fraction:
        """Per-UE per-slot average age, exact."""
        return Fraction(self.total_cost, self.N * self.T)

    @property
    def time_avg_sum_aoi(self) -> Fraction:
        return Fraction(self.total_cost, self.T)

    @property
    def total_successes(self) -> int:
        return int(self.successes_per_ue.sum())

    def check(self) -> None:
        """Raise ``AssertionError`` if a bookkeeping invariant fails."""
        problems = []
        if len(self.per_slot_age_sum) != self.T:
            problems.append("per-slot record length != T")
        if np.any(self.successes_per_ue > self.attempts_per_ue):
            problems.append("more successes than attempts")
        if self.attempts_per_ue.sum() > self.nonempty_cells_per_slot.sum():
            problems.append("global balance violated")
        if (self.interval_lengths or self.tail_length) and sum(self.interval_lengths) + self.tail_length != self.T:
            problems.append("interval lengths do not cover the horizon")
        if self.time_avg_aoi < samplepath_aoi_bound(self):
            problems.append("sample-path bound violated")
        if problems:
            raise AssertionError("; ".join(problems))


def samplepath_aoi_bound(stats: RunStats) -> Fraction:
    """Lower bound on the per-UE time-averaged age of any sample path.

    Depends only on the horizon and the number of deliveries per UE:
    ``T/(2N) * sum_i 1/(N_i + 1) + 1/2``.
    """
    T, N = stats.T, stats.N
    acc = sum(Fraction(1, int(k) + 1) for k in stats.successes_per_ue)
    return Fraction(T, 2 * N) * acc + Fraction(1, 2)


def make_rng(root: int, replication: int | tuple[int, ...]) -> np.random.Generator:
    """PCG64 stream for one replication.

    Seeded by ``SeedSequence(root, spawn_key=key)`` where ``key`` is the
    replication index (or a tuple of indices for nested sweeps), so a
    replication draws the same numbers whether it runs alone, in a batch, or
    in a worker process.
    """
    if not 0 <= root < 2**64:
        raise ConfigurationError("seed must be a 64-bit unsigned integer")
    key = replication if isinstance(replication, tuple) else (replication,)
    ss = np.random.SeedSequence(root, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))
