"""Independent reference computations used by the tests.

Nothing here imports the package's DP, simulator or closed forms.
"""

import itertools
from fractions import Fraction


def g_by_enumeration(psi):
    """Expected non-empty cells by enumerating every joint placement."""
    N, M = len(psi), len(psi[0])
    total = Fraction(0)
    for cells in itertools.product(range(M), repeat=N):
        prob = Fraction(1)
        for i, c in enumerate(cells):
            prob *= Fraction(psi[i][c])
        total += prob * len(set(cells))
    return total


def simulate_schedule(trace, actions, h1=None):
    """Cost and successes of a fixed schedule; one UE attempted per slot."""
    T, N = len(trace), len(trace[0])
    h = list(h1) if h1 else [1] * N
    cost = 0
    for t in range(T):
        cost += sum(h)
        i = actions[t]
        ok = i is not None and trace[t][i] == 1
        h = [a + 1 for a in h]
        if ok:
            h[i] = 1
    return cost


def brute_force_opt(trace, h1=None):
    """Minimum cost over every action sequence (all UEs allowed each slot)."""
    T, N = len(trace), len(trace[0])
    best = None
    # the last slot's action never changes the cost
    for plan in itertools.product(range(N), repeat=T - 1):
        c = simulate_schedule(trace, list(plan) + [0], h1)
        if best is None or c < best:
            best = c
    return best


def brute_force_rhc(h, window):
    """First action of the cheapest plan over ``window``, charging the ages each step produces."""
    N = len(h)
    best_cost, best_first = None, None
    for plan in itertools.product(range(N), repeat=len(window)):
        ages = list(h)
        cost = 0
        for row, i in zip(window, plan):
            ages = [a + 1 for a in ages]
            if row[i]:
                ages[i] = 1
            cost += sum(ages)
        if best_cost is None or cost < best_cost or (cost == best_cost and plan[0] < best_first):
            best_cost, best_first = cost, plan[0]
    return best_first


def max_age_run(trace):
    """Hand-rolled Max-Age run: (cost, successes)."""
    N = len(trace[0])
    h = [1] * N
    cost = succ = 0
    for row in trace:
        cost += sum(h)
        i = max(range(N), key=lambda k: (h[k], -k))
        h = [a + 1 for a in h]
        if row[i]:
            h[i] = 1
            succ += 1
    return cost, succ
