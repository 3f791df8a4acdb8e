"""
Closed-form bounds
==================

How the occupancy function g, the universal lower bound and the MMW upper
bound behave as users spread over more cells.
"""

# %%
import numpy as np

from aoilab.bounds import (
    aoi_lower_bound,
    bounds_report,
    g_uniform,
    g_uniform_sandwich,
    mmw_upper_bound,
    mobility_advantage,
)

# %% [markdown]
# With N users each uniform over M cells, g counts the cells expected to
# hold at least one user. The two exponentials bracket it.

# %%
N = 20
for M in (1, 2, 4, 8, 16, 32):
    g = g_uniform(M, N)
    sw = g_uniform_sandwich(M, N) if M > 1 else (1.0, 1.0)
    print(f"M={M:3d}  g={g:7.3f}  sandwich=[{sw[0]:7.3f}, {sw[1]:7.3f}]  regime={mobility_advantage(M, N).regime}")

# %% [markdown]
# Lower and upper bound on per-user AoI for identical p: the ratio never
# exceeds 2.

# %%
p = 0.6
Ms = np.array([1, 2, 4, 8, 16])
lb = np.array([aoi_lower_bound([p] * N, g_uniform(M, N)) for M in Ms])
ub = np.array([mmw_upper_bound(N, M, p) for M in Ms])
print(np.column_stack([Ms, lb, ub, ub / lb]).round(3))

# %%
for key, value in bounds_report([0.5, 0.5], 1).rows():
    print(f"{key:32s} {value}")
