"""Multi-cell stochastic world: mobile UEs, erasure channels, per-cell scheduling.

Replications are simulated in lockstep as rows of ``(R, N)`` arrays, but
every replication draws only from its own generator (``core.make_rng``), in
fixed-size chunks, so a replication's trajectory does not depend on which
other replications share the batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import ConfigurationError, RunStats, make_rng

# Slots drawn per generator call; part of the reproducibility contract.
CHUNK = 4096


class Policy(str, Enum):
    MMW = "MMW"
    RAND = "RAND"
    ROUND_ROBIN = "ROUND_ROBIN"
    MAX_AGE_PER_CELL = "MAX_AGE_PER_CELL"


class Mobility(str, Enum):
    IID_UNIFORM = "iid-uniform"
    RANDOM_WALK_RING = "random-walk-ring"


@dataclass(frozen=True)
class StochasticConfig:
    N: int
    M: int
    p: tuple[float, ...]
    T: int
    policy: Policy = Policy.MMW
    mobility: Mobility = Mobility.IID_UNIFORM
    replications: int = 1
    seed: int = 0
    burn_in: int = 0

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(x) for x in self.p))
        object.__setattr__(self, "policy", Policy(self.policy))
        object.__setattr__(self, "mobility", Mobility(self.mobility))
        if self.N < 1:
            raise ConfigurationError("N must be >= 1")
        if self.M < 1:
            raise ConfigurationError("M must be >= 1")
        if self.T < 1:
            raise ConfigurationError("T must be >= 1")
        if len(self.p) != self.N:
            raise ConfigurationError(f"p has {len(self.p)} entries, expected N={self.N}")
        if any(not 0 < x <= 1 for x in self.p):
            raise ConfigurationError("every p must lie in (0, 1]")
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        if not 0 <= self.burn_in < self.T:
            raise ConfigurationError("burn_in must lie in [0, T)")


# ---------------------------------------------------------------------------
# single-slot decisions (reference forms; the simulator uses the batched path)


def mmw_decide(h: Sequence[int], occ: Sequence[int], p: Sequence[float]) -> dict[int, int]:
    """Per non-empty cell, the UE maximising ``p_i h_i**2``; ties go to the lowest index.

    Returns ``{cell: ue}``.
    """
    best: dict[int, tuple[float, int]] = {}
    for i, (a, c) in enumerate(zip(h, occ)):
        w = p[i] * a * a
        if c not in best or w > best[c][0]:
            best[c] = (w, i)
    return {c: i for c, (_, i) in sorted(best.items())}


def rand_probabilities(occ: Sequence[int], p: Sequence[float]) -> dict[int, dict[int, float]]:
    """Per-cell selection law of RAND: weight ``1/sqrt(p_i)`` within each cell."""
    out: dict[int, dict[int, float]] = {}
    for i, c in enumerate(occ):
        out.setdefault(c, {})[i] = 1.0 / math.sqrt(p[i])
    for c, ws in out.items():
        z = sum(ws.values())
        out[c] = {i: w / z for i, w in ws.items()}
    return dict(sorted(out.items()))


def rand_decide(occ: Sequence[int], p: Sequence[float], rng: np.random.Generator) -> dict[int, int]:
    action = {}
    for c, law in rand_probabilities(occ, p).items():
        ues = list(law)
        action[c] = ues[int(rng.choice(len(ues), p=[law[i] for i in ues]))]
    return action


# ---------------------------------------------------------------------------
# batched simulation


class _Stream:
    """Chunked random inputs for one replication."""

    def __init__(self, cfg: StochasticConfig, rep: int):
        self.cfg = cfg
        self.rng = make_rng(cfg.seed, rep)
        if cfg.mobility is Mobility.RANDOM_WALK_RING:
            # start from the stationary (uniform) law
            self.pos = self.rng.integers(0, cfg.M, cfg.N)

    def draw(self, n: int):
        cfg, rng = self.cfg, self.rng
        if cfg.mobility is Mobility.IID_UNIFORM:
            cells = rng.integers(0, cfg.M, (n, cfg.N))
        else:
            steps = rng.integers(-1, 2, (n, cfg.N))
            # row k is the position at slot k of the chunk
            walk = self.pos + np.concatenate([np.zeros((1, cfg.N), dtype=np.int64), np.cumsum(steps[:-1], axis=0)])
            cells = np.mod(walk, cfg.M)
            self.pos = np.mod(walk[-1] + steps[-1], cfg.M)
        u_success = rng.random((n, cfg.N))
        u_rand = rng.random((n, cfg.M))
        return cells, u_success, u_rand


def _select(cfg: StochasticConfig, t: int, h: np.ndarray, cells: np.ndarray, u_rand: np.ndarray, inv_sqrt_p):
    """One UE per non-empty (replication, cell). Returns flat UE positions."""
    R, N = h.shape
    group = (cells + cfg.M * np.arange(R)[:, None]).ravel()
    if cfg.policy is Policy.RAND:
        order = np.argsort(group, kind="stable")
        g_sorted = group[order]
        w = np.broadcast_to(inv_sqrt_p, (R, N)).ravel()[order]
        start = np.r_[True, g_sorted[1:] != g_sorted[:-1]]
        csum = np.cumsum(w)
        base = np.repeat(csum[start] - w[start], np.diff(np.r_[np.flatnonzero(start), len(w)]))
        cum = csum - base
        prev = cum - w
        last = np.r_[g_sorted[1:] != g_sorted[:-1], True]
        total = cum[last]
        thr = np.repeat(u_rand.ravel()[g_sorted[start]] * total, np.diff(np.r_[np.flatnonzero(start), len(w)]))
        chosen = (prev <= thr) & ((cum > thr) | last)
        # keep the first hit per group if rounding produced two
        idx = np.flatnonzero(chosen)
        keep = np.r_[True, g_sorted[idx][1:] != g_sorted[idx][:-1]]
        return order[idx[keep]]
    if cfg.policy is Policy.MMW:
        key = np.asarray(cfg.p)[None, :] * h.astype(float) ** 2
    elif cfg.policy is Policy.MAX_AGE_PER_CELL:
        key = h.astype(float)
    else:
        # rotating priority: UE (t mod N) first, then t+1, ...
        key = -np.mod(np.arange(N) - t, N).astype(float)
        key = np.broadcast_to(key, (R, N))
    order = np.lexsort((-key.ravel(), group))
    g_sorted = group[order]
    first = np.r_[True, g_sorted[1:] != g_sorted[:-1]]
    return order[first]


def _simulate_batch(cfg: StochasticConfig, reps: Sequence[int]) -> list[RunStats]:
    R, N, T = len(reps), cfg.N, cfg.T
    streams = [_Stream(cfg, r) for r in reps]
    p = np.asarray(cfg.p)
    inv_sqrt_p = 1.0 / np.sqrt(p)
    h = np.ones((R, N), dtype=np.int64)
    age_sum = np.zeros((R, T), dtype=np.int64)
    nonempty = np.zeros((R, T), dtype=np.int64)
    succ = np.zeros((R, N), dtype=np.int64)
    att = np.zeros((R, N), dtype=np.int64)
    for t0 in range(0, T, CHUNK):
        n = min(CHUNK, T - t0)
        drawn = [s.draw(n) for s in streams]
        cells = np.stack([d[0] for d in drawn], axis=1)
        u_s = np.stack([d[1] for d in drawn], axis=1)
        u_r = np.stack([d[2] for d in drawn], axis=1)
        for k in range(n):
            t = t0 + k
            age_sum[:, t] = h.sum(axis=1)
            flat = _select(cfg, t, h, cells[k], u_r[k], inv_sqrt_p)
            r_idx, ue = np.divmod(flat, N)
            nonempty[:, t] = np.bincount(r_idx, minlength=R)
            np.add.at(att, (r_idx, ue), 1)
            ok = u_s[k][r_idx, ue] < p[ue]
            h += 1
            h[r_idx[ok], ue[ok]] = 1
            np.add.at(succ, (r_idx[ok], ue[ok]), 1)
    return [
        RunStats(
            T=T,
            N=N,
            per_slot_age_sum=age_sum[j],
            successes_per_ue=succ[j],
            attempts_per_ue=att[j],
            nonempty_cells_per_slot=nonempty[j],
            final_ages=tuple(int(a) for a in h[j]),
        )
        for j in range(R)
    ]


@dataclass
class StochasticResult:
    config: StochasticConfig
    runs: list[RunStats]
    mean_time_avg_aoi: float = field(init=False)
    max_time_avg_aoi: float = field(init=False)

    def __post_init__(self):
        vals = [float(r.time_avg_aoi) for r in self.runs]
        self.mean_time_avg_aoi = float(np.mean(vals))
        self.max_time_avg_aoi = float(np.max(vals))

    def burned_in_aoi(self, run: RunStats) -> float:
        """Per-UE average age over slots ``burn_in..T-1``."""
        b = self.config.burn_in
        return float(run.per_slot_age_sum[b:].sum() / (run.N * (run.T - b)))

    def empirical_g(self) -> float:
        tot = sum(int(r.nonempty_cells_per_slot.sum()) for r in self.runs)
        return tot / (self.config.T * len(self.runs))


def simulate_stochastic(cfg: StochasticConfig, batch: int = 64) -> StochasticResult:
    """Run ``cfg.replications`` independent replications and aggregate them.

    ``batch`` only controls how many replications advance together; results
    are identical for any value.
    """
    runs: list[RunStats] = []
    reps = list(range(cfg.replications))
    for i in range(0, len(reps), batch):
        runs.extend(_simulate_batch(cfg, reps[i : i + batch]))
    for r in runs:
        r.check()
    return StochasticResult(cfg, runs)


def empirical_g(cfg: StochasticConfig) -> float:
    """Time-averaged count of non-empty cells, pooled over replications."""
    return simulate_stochastic(cfg).empirical_g()


def mean_time_avg_aoi(result: StochasticResult) -> Fraction:
    return sum((r.time_avg_aoi for r in result.runs), Fraction(0)) / len(result.runs)
