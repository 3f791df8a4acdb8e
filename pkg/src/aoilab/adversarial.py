"""Single-BS world with adversarially chosen binary channels.

A trace is a ``(T, N)`` array of 0/1 values; ``trace[t, i] == 1`` means UE
``i`` has a Good channel in slot ``t`` and a transmission to it succeeds.

Slot convention (see ``core``): the cost of slot ``t`` is charged on the ages
*before* the slot-``t`` action, so the action of the last slot never affects
the cost and ``trace[T-1]`` is irrelevant to every cost computed here. The
offline DP below is the usual backward recursion with the decision at stage
``t`` reading row ``t`` of the trace.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import ConfigurationError, RunStats, make_rng

DEFAULT_STATE_BUDGET = 5_000_000


class InstanceTooLarge(RuntimeError):
    """The exact DP would exceed its state budget; use ``opt_interval_lower_bound``."""


# ---------------------------------------------------------------------------
# traces


def as_trace(states) -> np.ndarray:
    arr = np.asarray(states)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ConfigurationError("a trace must be a non-empty T x N matrix")
    if not np.all((arr == 0) | (arr == 1)):
        raise ConfigurationError("trace entries must be 0 or 1")
    return arr.astype(np.uint8)


def format_trace(trace) -> str:
    """Text form: ``N T`` header, then one line of N space-separated bits per slot."""
    trace = as_trace(trace)
    T, N = trace.shape
    lines = [f"{N} {T}"]
    lines.extend(" ".join(str(int(b)) for b in row) for row in trace)
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> np.ndarray:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigurationError("empty trace file")
    try:
        N, T = (int(x) for x in lines[0])
    except ValueError:
        raise ConfigurationError("trace header must be 'N T'") from None
    rows = lines[1:]
    if len(rows) != T:
        raise ConfigurationError(f"trace header says T={T} but {len(rows)} rows follow")
    for k, row in enumerate(rows, start=2):
        if len(row) != N or any(b not in ("0", "1") for b in row):
            raise ConfigurationError(f"line {k}: expected {N} bits")
    return as_trace([[int(b) for b in row] for row in rows])


def write_trace(path, trace) -> None:
    Path(path).write_text(format_trace(trace))


def read_trace(path) -> np.ndarray:
    return parse_trace(Path(path).read_text())


# ---------------------------------------------------------------------------
# policies


def ma_decide(h: Sequence[int]) -> int:
    """Max-Age: the oldest UE, lowest index on ties."""
    best = 0
    for i in range(1, len(h)):
        if h[i] > h[best]:
            best = i
    return best


def _serve(ages: tuple[int, ...], i: int | None) -> tuple[int, ...]:
    return tuple(1 if j == i else a + 1 for j, a in enumerate(ages))


def _window_cost(ages: tuple[int, ...], rows: tuple[tuple[int, ...], ...], k: int, memo: dict) -> int:
    """Minimum sum of the ages produced by steps ``k..len(rows)-1``."""
    key = (k, ages)
    hit = memo.get(key)
    if hit is not None:
        return hit
    good = [i for i, b in enumerate(rows[k]) if b]
    base = sum(ages) + len(ages)
    if k == len(rows) - 1:
        # last counted step: serve the oldest Good UE
        out = base - (max(ages[i] for i in good) if good else 0)
    elif not good:
        out = base + _window_cost(_serve(ages, None), rows, k + 1, memo)
    else:
        out = min(base - ages[i] + _window_cost(_serve(ages, i), rows, k + 1, memo) for i in good)
    memo[key] = out
    return out


def rhc_decide(h: Sequence[int], window, w: int | None = None, counted: int | None = None) -> int:
    """Receding-horizon action for the current slot.

    ``window`` holds the known channel rows for the current slot and the
    following ones (``w`` rows). The first action of a plan minimising the
    sum of the ages the window's actions produce is returned; equal-cost
    first actions go to the lowest UE index. ``counted`` limits how many of
    those resulting age vectors are charged (used at the end of a horizon).
    With ``w == 0``, or when no UE is Good now, the max-age UE is returned.
    """
    h = tuple(int(a) for a in h)
    rows = np.asarray(window, dtype=np.int64)
    if rows.size == 0:
        rows = rows.reshape(0, len(h))
    if rows.ndim != 2 or rows.shape[1] != len(h):
        raise ConfigurationError(f"window rows must have N={len(h)} entries")
    if w is not None and rows.shape[0] != w:
        raise ConfigurationError(f"window has {rows.shape[0]} rows, expected w={w}")
    if rows.shape[0] == 0:
        return ma_decide(h)
    good = [i for i, b in enumerate(rows[0]) if b]
    if not good:
        return ma_decide(h)
    n = rows.shape[0] if counted is None else min(counted, rows.shape[0])
    if n <= 0:
        return good[0]
    rows_t = tuple(tuple(int(b) for b in r) for r in rows[:n])
    memo: dict = {}
    best, best_cost = good[0], None
    for i in good:
        nxt = _serve(h, i)
        c = sum(nxt) + (_window_cost(nxt, rows_t, 1, memo) if n > 1 else 0)
        if best_cost is None or c < best_cost:
            best, best_cost = i, c
    return best


class MaxAge:
    name = "MA"
    lookahead = 0

    def decide(self, h, window, remaining):
        return ma_decide(h)


@dataclass(frozen=True)
class RecedingHorizon:
    w: int

    @property
    def name(self):
        return f"RHC{self.w}"

    @property
    def lookahead(self):
        return self.w

    def decide(self, h, window, remaining):
        # ages after the final slot of the horizon are never charged
        return rhc_decide(h, window, counted=remaining - 1)


class GoodChannelOracle:
    """Serves the oldest UE with a Good channel in the current slot.

    Offline-optimal whenever exactly one channel is Good per slot.
    """

    name = "ORACLE"
    lookahead = 1

    def decide(self, h, window, remaining):
        good = [i for i, b in enumerate(window[0]) if b] if len(window) else []
        if not good:
            return ma_decide(h)
        return max(good, key=lambda i: (h[i], -i))


def make_policy(name: str, w: int = 0):
    name = name.upper()
    if name == "MA":
        return MaxAge()
    if name == "RHC":
        if w < 0:
            raise ConfigurationError("w must be >= 0")
        return RecedingHorizon(w)
    if name in ("ORACLE", "OPT"):
        return GoodChannelOracle()
    raise ConfigurationError(f"unknown adversarial policy {name!r}")


# ---------------------------------------------------------------------------
# online execution


def run_online(trace, policy, h1: Sequence[int] | None = None, record_ages: bool = False):
    """Run ``policy`` against ``trace``.

    Returns ``RunStats``; with ``record_ages`` returns ``(RunStats, ages)``
    where ``ages[t]`` is the age vector charged at slot ``t``.
    """
    trace = as_trace(trace)
    T, N = trace.shape
    h = [1] * N if h1 is None else [int(a) for a in h1]
    if len(h) != N or min(h) < 1:
        raise ConfigurationError("initial ages must be N positive integers")
    look = policy.lookahead
    rows = [tuple(int(b) for b in r) for r in trace]
    age_sum = np.zeros(T, dtype=np.int64)
    succ = np.zeros(N, dtype=np.int64)
    att = np.zeros(N, dtype=np.int64)
    ages = np.zeros((T, N), dtype=np.int64) if record_ages else None
    intervals = []
    last = -1
    for t in range(T):
        age_sum[t] = sum(h)
        if record_ages:
            ages[t] = h
        window = rows[t : t + look] if look else ()
        i = policy.decide(h, window, T - t)
        att[i] += 1
        if rows[t][i]:
            succ[i] += 1
            intervals.append(t - last)
            last = t
            h = [a + 1 for a in h]
            h[i] = 1
        else:
            h = [a + 1 for a in h]
    stats = RunStats(
        T=T,
        N=N,
        per_slot_age_sum=age_sum,
        successes_per_ue=succ,
        attempts_per_ue=att,
        nonempty_cells_per_slot=np.ones(T, dtype=np.int64),
        interval_lengths=tuple(intervals),
        tail_length=T - 1 - last,
        final_ages=tuple(h),
    )
    return (stats, ages) if record_ages else stats


# ---------------------------------------------------------------------------
# offline optimum


def opt_exact(trace, h1: Sequence[int] | None = None, budget: int = DEFAULT_STATE_BUDGET):
    """Minimum total cost over all offline schedules, and one optimal schedule.

    Layered Bellman recursion over (slot, age vector) with states merged per
    slot. The slot-``t`` choice ranges over UEs Good in ``trace[t]``; when
    none is Good the slot idles (``None`` in the schedule). Returns
    ``(cost, actions)`` with ``len(actions) == T``.
    """
    trace = as_trace(trace)
    T, N = trace.shape
    start = tuple([1] * N if h1 is None else (int(a) for a in h1))
    if len(start) != N:
        raise ConfigurationError("initial ages must have N entries")
    layers: list[dict] = [{start: (sum(start), None, None)}]
    seen = 1
    for t in range(T - 1):
        good = [i for i in range(N) if trace[t, i]]
        choices = good if good else [None]
        nxt: dict = {}
        for ages, (cost, _, _) in layers[-1].items():
            for i in choices:
                a = _serve(ages, i)
                c = cost + sum(a)
                old = nxt.get(a)
                if old is None or c < old[0]:
                    nxt[a] = (c, ages, i)
        seen += len(nxt)
        if seen > budget:
            raise InstanceTooLarge(f"more than {budget} DP states; use opt_interval_lower_bound")
        layers.append(nxt)
    final, (cost, _, _) = min(layers[-1].items(), key=lambda kv: kv[1][0])
    actions: list[int | None] = []
    state = final
    for t in range(T - 1, 0, -1):
        _, parent, i = layers[t][state]
        actions.append(i)
        state = parent
    actions.reverse()
    last_good = [i for i in range(N) if trace[T - 1, i]]
    actions.append(last_good[0] if last_good else None)
    return cost, actions


def schedule_cost(trace, actions: Sequence[int | None], h1: Sequence[int] | None = None) -> int:
    """Cost of a fixed action sequence (``None`` idles)."""
    trace = as_trace(trace)
    T, N = trace.shape
    h = tuple([1] * N if h1 is None else h1)
    total = 0
    for t in range(T):
        total += sum(h)
        i = actions[t]
        h = _serve(h, i if i is not None and trace[t, i] else None)
    return total


def _all_intervals(stats: RunStats) -> list[int]:
    deltas = list(stats.interval_lengths)
    if stats.tail_length:
        deltas.append(stats.tail_length)
    return deltas


def opt_interval_lower_bound(ma_stats: RunStats, N: int | None = None) -> Fraction:
    """Lower bound on the offline optimum's cost from an MA run on the same trace.

    Within an MA interval of length ``D`` the persistently served UE has a
    Bad channel for its first ``D - 1`` slots, so any schedule charges it at
    least ``1 + 2 + ... + D``; every other UE costs at least 1 per slot.
    Sums ``D (D + 1) / 2 + (N - 1) D`` over all intervals, tail included.
    """
    N = ma_stats.N if N is None else N
    return sum((Fraction(d * (d + 1), 2) + (N - 1) * d for d in _all_intervals(ma_stats)), Fraction(0))


def naive_interval_bound(ma_stats: RunStats, N: int | None = None) -> Fraction:
    """``sum (D**2/2 + N D)`` over the MA intervals.

    Charges the served UE ``2 + 3 + ... + (D + 1)``, i.e. assumes its age is
    at least 2 when the interval opens. That fails when the optimum served
    it in the preceding slot, so this can exceed the true optimum; kept for
    comparison, see ``opt_interval_lower_bound`` for the valid form.
    """
    N = ma_stats.N if N is None else N
    return sum((Fraction(d * d, 2) + N * d for d in _all_intervals(ma_stats)), Fraction(0))


def ma_interval_cost_formula(delta_history: Sequence[int], N: int) -> int:
    """Exact MA cost of one interval from its length and the preceding ones.

    ``delta_history[0]`` is the current interval's length, ``delta_history[j]``
    the one ``j`` intervals earlier; missing entries count as 0.
    """
    d = list(delta_history) + [0] * N
    cur = d[0]
    tri = cur * (cur + 1) // 2
    total = tri
    for m in range(1, N):
        total += tri + cur * sum(d[1 : m + 1])
    return total


def ma_cost_from_intervals(stats: RunStats) -> int:
    """Sum of ``ma_interval_cost_formula`` over an MA run, tail included."""
    deltas = _all_intervals(stats)
    return sum(ma_interval_cost_formula(deltas[k::-1][: stats.N], stats.N) for k in range(len(deltas)))


# ---------------------------------------------------------------------------
# adversaries


class AdversaryKind(str, Enum):
    YAO_UNIFORM = "YAO_UNIFORM"
    RANDOM_SUBSET = "RANDOM_SUBSET"
    ADAPTIVE_THROUGHPUT = "ADAPTIVE_THROUGHPUT"
    EXPLICIT = "EXPLICIT"


@dataclass(frozen=True)
class AdversarySpec:
    kind: AdversaryKind
    seed: int = 0
    trace: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", AdversaryKind(self.kind))
        if self.kind is AdversaryKind.EXPLICIT and self.trace is None:
            raise ConfigurationError("EXPLICIT adversary needs a trace")


@dataclass
class GeneratedTrace:
    trace: np.ndarray
    online_successes: int | None = None
    offline_successes: int | None = None


def offline_max_successes(trace) -> int:
    """Best offline throughput: one success in every slot with any Good channel."""
    return int(np.count_nonzero(as_trace(trace).any(axis=1)))


def generate_trace(
    spec: AdversarySpec, N: int, T: int, policy=None, replication: int | tuple[int, ...] = 0
) -> GeneratedTrace:
    if N < 1 or T < 1:
        raise ConfigurationError("N and T must be positive")
    kind = spec.kind
    if kind is AdversaryKind.EXPLICIT:
        tr = as_trace(spec.trace)
        if tr.shape != (T, N):
            raise ConfigurationError(f"explicit trace is {tr.shape}, expected ({T}, {N})")
        return GeneratedTrace(tr)
    if kind is AdversaryKind.ADAPTIVE_THROUGHPUT:
        if N != 2:
            raise ConfigurationError("the adaptive throughput adversary is defined for N=2 only")
        policy = policy or MaxAge()
        if policy.lookahead:
            raise ConfigurationError("the adaptive adversary needs a policy without lookahead")
        tr = np.zeros((T, N), dtype=np.uint8)
        h = [1] * N
        for t in range(T):
            i = policy.decide(h, (), T - t)
            tr[t] = 1
            tr[t, i] = 0
            h = [a + 1 for a in h]
        online = run_online(tr, policy)
        return GeneratedTrace(tr, online.total_successes, offline_max_successes(tr))
    rng = make_rng(spec.seed, replication)
    tr = np.zeros((T, N), dtype=np.uint8)
    if kind is AdversaryKind.YAO_UNIFORM:
        tr[np.arange(T), rng.integers(0, N, T)] = 1
        return GeneratedTrace(tr)
    # RANDOM_SUBSET: k ~ U{1..N-1} Good channels, the k-subset uniform
    if N < 2:
        raise ConfigurationError("RANDOM_SUBSET needs N >= 2")
    ks = rng.integers(1, N, T)
    rank = np.argsort(np.argsort(rng.random((T, N)), axis=1), axis=1)
    tr[:] = rank < ks[:, None]
    return GeneratedTrace(tr)


# ---------------------------------------------------------------------------
# competitive-ratio harness


@dataclass
class CompetitiveReport:
    replication: int
    N: int
    T: int
    policy: str
    adversary: str
    online_cost: int
    opt_cost_exact: int | None
    opt_cost_lower_bound: Fraction
    online_successes: int
    opt_successes: int
    ceiling: int

    @property
    def ratio_vs_exact(self) -> Fraction | None:
        if self.opt_cost_exact is None:
            return None
        return Fraction(self.online_cost, self.opt_cost_exact)

    @property
    def ratio_upper_estimate(self) -> Fraction:
        return Fraction(self.online_cost) / self.opt_cost_lower_bound

    @property
    def within_ceiling(self) -> bool:
        r = self.ratio_vs_exact
        return (r if r is not None else self.ratio_upper_estimate) <= self.ceiling


def _one_report(args) -> CompetitiveReport:
    spec, policy, N, T, rep, exact, budget = args
    gen = generate_trace(spec, N, T, policy, rep)
    tr = gen.trace
    online = run_online(tr, policy)
    online.check()
    ma = online if isinstance(policy, MaxAge) else run_online(tr, MaxAge())
    lb = opt_interval_lower_bound(ma, N)
    opt = None
    if exact:
        try:
            opt, _ = opt_exact(tr, budget=budget)
        except InstanceTooLarge:
            opt = None
    return CompetitiveReport(
        replication=rep,
        N=N,
        T=T,
        policy=policy.name,
        adversary=spec.kind.value,
        online_cost=online.total_cost,
        opt_cost_exact=opt,
        opt_cost_lower_bound=lb,
        online_successes=online.total_successes,
        opt_successes=offline_max_successes(tr),
        ceiling=2 * N * N,
    )


def competitive_harness(
    spec: AdversarySpec,
    policy,
    N: int,
    T: int,
    replications: int = 1,
    exact: bool = True,
    budget: int = DEFAULT_STATE_BUDGET,
    workers: int = 1,
) -> list[CompetitiveReport]:
    """Online cost vs the offline optimum on ``replications`` generated traces.

    When the exact DP exceeds ``budget`` the report keeps only the interval
    lower bound, so its ratio is an upper estimate.
    """
    jobs = [(spec, policy, N, T, r, exact, budget) for r in range(replications)]
    return parallel_map(_one_report, jobs, workers)


def parallel_map(fn, jobs, workers: int = 1):
    """Ordered map; identical output for any worker count."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


# ---------------------------------------------------------------------------
# renewal statistics under one-Good-per-slot channels


def renewal_cycles(trace, ages) -> tuple[np.ndarray, np.ndarray]:
    """Complete renewal cycles of every UE.

    A cycle of UE ``i`` starts at a slot where its channel turns Good and
    lasts until the next such slot. Its cost is the sum of the ages that the
    cycle's slots hand on, ``ages[s+1] .. ages[s+len]``. Returns
    ``(lengths, costs)`` pooled over UEs.
    """
    trace = as_trace(trace)
    ages = np.asarray(ages)
    T, N = trace.shape
    lengths, costs = [], []
    for i in range(N):
        g = trace[:, i].astype(bool)
        starts = np.flatnonzero(g & np.r_[False, ~g[:-1]])
        csum = np.r_[0, np.cumsum(ages[:, i])]
        for s, e in zip(starts[:-1], starts[1:]):
            lengths.append(e - s)
            costs.append(csum[e + 1] - csum[s + 1])
    return np.asarray(lengths), np.asarray(costs)
