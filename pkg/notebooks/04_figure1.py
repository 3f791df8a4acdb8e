"""
Worst-case AoI of MA and RHC
============================

Random-subset channels, T=500, worst over 50 traces. Panel (a) varies the
number of users at w=3; panel (b) varies the window at N=5.
"""

# %%
from aoilab.experiments import non_increasing, reproduce_fig1a, reproduce_fig1b

# %%
rows = reproduce_fig1a(Ns=(2, 3, 4, 5, 6, 7, 8))
for N, policy, w, worst, _ in rows:
    print(f"N={N}  {policy:4s} w={w}  worst AoI {float(worst):.3f}")

# %% [markdown]
# Panel (b) is slower: RHC at w=10 solves a ten-step DP in every slot.
# A shorter sweep keeps this script quick.

# %%
rows = reproduce_fig1b(ws=(1, 2, 3, 4, 5), replications=20)
for w, worst, _ in rows:
    print(f"w={w:2d}  worst AoI {float(worst):.4f}")
print("non-increasing in w:", non_increasing([r[1] for r in rows]))
