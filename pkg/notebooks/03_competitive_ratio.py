"""
Online scheduling against adversarial channels
==============================================

Max-Age and receding-horizon control compared with the exact offline
optimum, plus the two adversary constructions.
"""

# %%
import numpy as np

from aoilab.adversarial import (
    AdversaryKind,
    AdversarySpec,
    GoodChannelOracle,
    MaxAge,
    RecedingHorizon,
    competitive_harness,
    generate_trace,
    opt_exact,
    opt_interval_lower_bound,
    run_online,
)
from aoilab.bounds import adversarial_sum_lower_bound, yao_competitive_lower_bound
from aoilab.experiments import yao_experiment

# %% [markdown]
# Exact competitive ratios on short random traces.

# %%
spec = AdversarySpec(AdversaryKind.RANDOM_SUBSET, seed=7)
for N in (2, 3, 4):
    reports = competitive_harness(spec, MaxAge(), N, 8, replications=200)
    ratios = np.array([float(r.ratio_vs_exact) for r in reports])
    print(f"N={N}: MA ratio mean {ratios.mean():.3f} max {ratios.max():.3f} (ceiling {2 * N * N})")

# %% [markdown]
# A lookahead window closes most of the gap to the optimum.

# %%
tr = generate_trace(spec, 4, 12, replication=1).trace
opt, schedule = opt_exact(tr)
print("OPT", opt, "schedule", schedule)
for w in (0, 1, 2, 4, 12):
    print(f"RHC w={w:2d} cost {run_online(tr, RecedingHorizon(w)).total_cost}")
ma = run_online(tr, MaxAge())
print("interval lower bound", opt_interval_lower_bound(ma))

# %% [markdown]
# The adaptive adversary starves any lookahead-free policy of throughput.

# %%
g = generate_trace(AdversarySpec(AdversaryKind.ADAPTIVE_THROUGHPUT), 2, 100, MaxAge())
print("online successes", g.online_successes, "offline", g.offline_successes)

# %% [markdown]
# One uniformly random Good channel per slot: the oracle's sum cost is about
# N^2, MA pays at least (N^3 + N) / 2.

# %%
for N in (2, 4):
    o = yao_experiment(GoodChannelOracle(), N, 50_000)
    m = yao_experiment(MaxAge(), N, 50_000)
    print(
        f"N={N}: oracle {o.mean_sum_cost:.2f}  MA {m.mean_sum_cost:.2f}  "
        f"MA floor {float(adversarial_sum_lower_bound(N).best):.1f}  ratio floor {float(yao_competitive_lower_bound(N)):.3f}"
    )
