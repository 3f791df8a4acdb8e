"""Experiment sweeps and their CSV tables.

Every sweep is a list of independent jobs keyed by replication (and N or w),
mapped in order, so the emitted CSV is byte-identical for any worker count.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import adversarial as adv
from .bounds import aoi_lower_bound, g_uniform, mmw_upper_bound
from .core import ConfigurationError, samplepath_aoi_bound
from .stochastic import StochasticConfig, StochasticResult, simulate_stochastic

FIG1A_NS = (2, 3, 4, 5, 6, 7, 8)
FIG1_T = 500
FIG1_REPLICATIONS = 50
FIG1A_W = 3
FIG1B_N = 5
FIG1B_WS = tuple(range(1, 11))


def num(x) -> str:
    """Full-precision decimal text for a CSV cell."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([c if isinstance(c, str) else num(c) for c in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Figure 1


def _fig1_job(args):
    N, T, rep, seed, policies = args
    spec = adv.AdversarySpec(adv.AdversaryKind.RANDOM_SUBSET, seed=seed)
    tr = adv.generate_trace(spec, N, T, replication=(N, rep)).trace
    out = []
    for pol in policies:
        st = adv.run_online(tr, pol)
        st.check()
        out.append(st.time_avg_aoi)
    return out


FIG1A_HEADER = ("N", "policy", "w", "worst_time_avg_aoi", "worst_time_avg_sum_aoi")


def reproduce_fig1a(
    Ns: Sequence[int] = FIG1A_NS,
    T: int = FIG1_T,
    replications: int = FIG1_REPLICATIONS,
    w: int = FIG1A_W,
    seed: int = 0,
    workers: int = 1,
) -> list[tuple]:
    """Worst-case (over replications) time-averaged AoI of MA and RHC(w).

    Each replication draws a RANDOM_SUBSET trace; both policies run on the
    same trace.
    """
    if any(N < 2 for N in Ns):
        raise ConfigurationError("every N must be >= 2")
    policies = (adv.MaxAge(), adv.RecedingHorizon(w))
    jobs = [(N, T, r, seed, policies) for N in Ns for r in range(replications)]
    res = adv.parallel_map(_fig1_job, jobs, workers)
    rows = []
    for k, N in enumerate(Ns):
        block = res[k * replications : (k + 1) * replications]
        for j, (name, ww) in enumerate((("MA", 0), ("RHC", w))):
            worst = max(b[j] for b in block)
            rows.append((N, name, ww, worst, worst * N))
    return rows


FIG1B_HEADER = ("w", "worst_time_avg_aoi", "worst_time_avg_sum_aoi")


def reproduce_fig1b(
    ws: Sequence[int] = FIG1B_WS,
    N: int = FIG1B_N,
    T: int = FIG1_T,
    replications: int = FIG1_REPLICATIONS,
    seed: int = 0,
    workers: int = 1,
) -> list[tuple]:
    """Worst-case time-averaged AoI of RHC(w) for each window size."""
    if N < 2 or any(w < 0 for w in ws):
        raise ConfigurationError("need N >= 2 and w >= 0")
    policies = tuple(adv.RecedingHorizon(w) for w in ws)
    jobs = [(N, T, r, seed, policies) for r in range(replications)]
    res = adv.parallel_map(_fig1_job, jobs, workers)
    rows = []
    for j, w in enumerate(ws):
        worst = max(b[j] for b in res)
        rows.append((w, worst, worst * N))
    return rows


def non_increasing(values: Sequence) -> bool:
    return all(b <= a for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# one-Good-per-slot (Yao) runs


@dataclass
class YaoRun:
    N: int
    T: int
    policy: str
    sum_costs: list[Fraction]
    cycle_lengths: np.ndarray
    cycle_costs: np.ndarray

    @property
    def mean_sum_cost(self) -> float:
        return float(np.mean([float(c) for c in self.sum_costs]))

    @property
    def stderr(self) -> float:
        v = [float(c) for c in self.sum_costs]
        if len(v) < 2:
            return math.nan
        return float(np.std(v, ddof=1) / math.sqrt(len(v)))


def _yao_job(args):
    N, T, rep, seed, policy = args
    spec = adv.AdversarySpec(adv.AdversaryKind.YAO_UNIFORM, seed=seed)
    tr = adv.generate_trace(spec, N, T, replication=(N, rep)).trace
    st, ages = adv.run_online(tr, policy, record_ages=True)
    st.check()
    L, C = adv.renewal_cycles(tr, ages)
    return st.time_avg_sum_aoi, L, C


def yao_experiment(policy, N: int, T: int, replications: int = 1, seed: int = 0, workers: int = 1) -> YaoRun:
    """Time-averaged sum cost and renewal cycles under one uniformly random Good channel per slot."""
    jobs = [(N, T, r, seed, policy) for r in range(replications)]
    res = adv.parallel_map(_yao_job, jobs, workers)
    return YaoRun(
        N,
        T,
        policy.name,
        [r[0] for r in res],
        np.concatenate([r[1] for r in res]),
        np.concatenate([r[2] for r in res]),
    )


YAO_HEADER = ("N", "T", "policy", "replications", "mean_time_avg_sum_aoi", "stderr", "mean_cycle_length", "mean_cycle_cost")


def yao_rows(runs: Sequence[YaoRun]) -> list[tuple]:
    return [
        (
            r.N,
            r.T,
            r.policy,
            len(r.sum_costs),
            r.mean_sum_cost,
            r.stderr,
            float(np.mean(r.cycle_lengths)),
            float(np.mean(r.cycle_costs)),
        )
        for r in runs
    ]


# ---------------------------------------------------------------------------
# tables for the run modes

STOCHASTIC_HEADER = (
    "replication",
    "N",
    "M",
    "policy",
    "mobility",
    "T",
    "time_avg_aoi",
    "time_avg_sum_aoi",
    "burned_in_time_avg_aoi",
    "empirical_g",
    "successes",
    "attempts",
    "samplepath_bound",
    "aoi_lower_bound",
    "mmw_upper_bound",
)


def stochastic_rows(result: StochasticResult) -> list[tuple]:
    cfg = result.config
    lb = aoi_lower_bound(cfg.p, g_uniform(cfg.M, cfg.N))
    ub = mmw_upper_bound(cfg.N, cfg.M, cfg.p[0]) if len(set(cfg.p)) == 1 else None
    rows = []
    for r, st in enumerate(result.runs):
        rows.append(
            (
                r,
                cfg.N,
                cfg.M,
                cfg.policy.value,
                cfg.mobility.value,
                cfg.T,
                st.time_avg_aoi,
                st.time_avg_sum_aoi,
                result.burned_in_aoi(st),
                st.nonempty_cells_per_slot.mean(),
                st.total_successes,
                int(st.attempts_per_ue.sum()),
                samplepath_aoi_bound(st),
                lb,
                ub,
            )
        )
    return rows


def run_stochastic(cfg: StochasticConfig) -> tuple[StochasticResult, str]:
    result = simulate_stochastic(cfg)
    return result, to_csv(STOCHASTIC_HEADER, stochastic_rows(result))


ADVERSARIAL_HEADER = (
    "replication",
    "N",
    "T",
    "policy",
    "w",
    "adversary",
    "online_cost",
    "time_avg_aoi",
    "time_avg_sum_aoi",
    "opt_cost_exact",
    "opt_cost_lower_bound",
    "ratio_vs_exact",
    "ratio_upper_estimate",
    "within_2n2_ceiling",
    "online_successes",
    "opt_successes",
)


def adversarial_rows(reports: Sequence[adv.CompetitiveReport], w: int) -> list[tuple]:
    return [
        (
            r.replication,
            r.N,
            r.T,
            r.policy,
            w,
            r.adversary,
            r.online_cost,
            Fraction(r.online_cost, r.N * r.T),
            Fraction(r.online_cost, r.T),
            r.opt_cost_exact,
            r.opt_cost_lower_bound,
            r.ratio_vs_exact,
            r.ratio_upper_estimate,
            r.within_ceiling,
            r.online_successes,
            r.opt_successes,
        )
        for r in reports
    ]
