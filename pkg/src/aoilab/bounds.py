"""Closed-form AoI bounds and constants.

Floating-point evaluation is used for everything that involves roots or
exponentials; quantities that are rational in their inputs are returned as
``fractions.Fraction``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import ConfigurationError

# Constant of the upper exponential bound on the uniform occupancy function.
# ln 4 makes 1 - 1/M >= exp(-BETA/M) hold for every M >= 2.
BETA = math.log(4.0)

UNDERLOADED_BELOW = 0.25
OVERLOADED_ABOVE = 4.0


class DomainError(ValueError):
    """Input lies outside the region where a bound is defined."""


def _check_psi(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=float)
    if psi.ndim != 2 or psi.size == 0:
        raise ConfigurationError("psi must be a non-empty N x M matrix")
    if np.any(psi < 0) or np.any(psi > 1):
        raise ConfigurationError("psi entries must lie in [0, 1]")
    if np.any(np.abs(psi.sum(axis=1) - 1.0) > 1e-9):
        raise ConfigurationError("each row of psi must sum to 1")
    return psi


def uniform_psi(M: int, N: int) -> np.ndarray:
    return np.full((N, M), 1.0 / M)


def g_exact(psi) -> float:
    """Expected number of non-empty cells for independent UEs with marginals ``psi``."""
    psi = _check_psi(psi)
    return float(np.sum(1.0 - np.prod(1.0 - psi, axis=0)))


def g_uniform(M: int, N: int) -> float:
    """Expected number of non-empty cells when every UE is uniform over ``M`` cells."""
    if M < 1 or N < 1:
        raise DomainError("M and N must be positive")
    if M == 1:
        return 1.0
    # -expm1(N*log1p(-1/M)) keeps precision when N/M is small
    return float(-M * math.expm1(N * math.log1p(-1.0 / M)))


def g_uniform_sandwich(M: int, N: int) -> tuple[float, float]:
    if M < 2:
        raise DomainError("exponential sandwich requires M >= 2")
    lower = -M * math.expm1(-N / M)
    upper = -M * math.expm1(-BETA * N / M)
    return lower, upper


def _inverse_sqrt_sum_squared(p: Sequence[float]) -> float:
    """``(sum_i 1/sqrt(p_i))**2``, expanded so identical ``p`` gives an exact result."""
    p = [float(x) for x in p]
    if not p:
        raise ConfigurationError("need at least one success probability")
    for x in p:
        if x <= 0:
            raise DomainError("success probability 0 gives an infinite bound")
        if x > 1:
            raise ConfigurationError("success probabilities must be <= 1")
    terms = [1.0 / x for x in p]
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            terms.append(2.0 / math.sqrt(p[i] * p[j]))
    return math.fsum(terms)


def aoi_lower_bound(p: Sequence[float], g: float) -> float:
    """Per-UE average AoI lower bound for any policy, given ``g`` effective cells."""
    if g <= 0:
        raise DomainError("g must be positive")
    return _inverse_sqrt_sum_squared(p) / (2 * len(p) * g) + 0.5


def aoi_lower_bound_agnostic(p: Sequence[float], M: int, N: int | None = None) -> float:
    """Same bound with ``g`` replaced by ``min(M, N)``; needs no mobility statistics."""
    if N is None:
        N = len(p)
    if N != len(p):
        raise ConfigurationError("len(p) must equal N")
    return aoi_lower_bound(p, min(M, N))


def mmw_upper_bound(N: int, M: int, p: float) -> float:
    """MMW per-UE average AoI upper bound, identical ``p`` and uniform mobility."""
    if p <= 0:
        raise DomainError("p must be positive")
    if p > 1 or N < 1 or M < 1:
        raise ConfigurationError("need 0 < p <= 1, N >= 1, M >= 1")
    return N / (p * g_uniform(M, N))


@dataclass(frozen=True)
class SumLowerBound:
    general: Fraction
    improved: Fraction | None = None

    @property
    def best(self) -> Fraction:
        return self.improved if self.improved is not None else self.general


def adversarial_sum_lower_bound(N: int) -> SumLowerBound:
    """Time-averaged sum-AoI floor for any online policy under one-Good-per-slot channels."""
    if N < 1:
        raise DomainError("N must be positive")
    general = Fraction(N**3 + N, 2)
    return SumLowerBound(general, Fraction(6) if N == 2 else None)


def yao_competitive_lower_bound(N: int) -> Fraction:
    if N < 2:
        raise DomainError("the competitive-ratio floor needs N >= 2")
    if N == 2:
        return Fraction(3, 2)
    return Fraction(N, 2) + Fraction(1, 2 * N)


@dataclass(frozen=True)
class YaoRenewal:
    cycle_cost: Fraction
    cycle_length: Fraction
    per_ue_cost: Fraction
    total_cost: Fraction


def yao_renewal_quantities(N: int) -> YaoRenewal:
    """Renewal cycle statistics of the offline optimum when one uniform UE is Good per slot.

    A UE's cycle is a run of Good slots followed by a run of Bad slots, with
    ``q = 1/N`` the per-slot Good probability.
    """
    if N < 2:
        raise DomainError("N must be >= 2")
    q = Fraction(1, N)
    cost = 1 / (q * q * (1 - q))
    length = 1 / (q * (1 - q))
    per_ue = cost / length
    return YaoRenewal(cost, length, per_ue, N * per_ue)


@dataclass(frozen=True)
class MobilityAdvantage:
    alpha: float
    regime: str
    c_bracket: tuple[float, float] = (1.0, BETA)


def mobility_advantage(
    M: int,
    N: int,
    underloaded_below: float = UNDERLOADED_BELOW,
    overloaded_above: float = OVERLOADED_ABOVE,
) -> MobilityAdvantage:
    """Scale of the AoI reduction from spreading ``N`` UEs over ``M`` cells.

    ``alpha`` is the uniform-mobility ``g``; the true advantage is within a
    factor 2 of it either way. ``c_bracket`` is the range of the constant in
    ``alpha = M (1 - exp(-c N / M))``.
    """
    alpha = g_uniform(M, N)
    if M == 1:
        regime = "single-cell"
    else:
        density = N / M
        if density < underloaded_below:
            regime = "under-loaded"
        elif density > overloaded_above:
            regime = "over-loaded"
        else:
            regime = "constant-density"
    return MobilityAdvantage(alpha, regime)


@dataclass
class BoundsReport:
    N: int
    M: int
    p: tuple[float, ...]
    g_value: float
    aoi_lower: float
    aoi_lower_agnostic: float
    mmw_upper: float | None
    g_sandwich: tuple[float, float] | None
    mobility: MobilityAdvantage
    adversarial_sum_lower: SumLowerBound
    yao_ratio_lower: Fraction | None
    yao_opt_cost: Fraction | None
    notes: list[str] = field(default_factory=list)

    def rows(self) -> list[tuple[str, str]]:
        def dec(x) -> str:
            if x is None:
                return ""
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else repr(float(x))

        out = [
            ("N", str(self.N)),
            ("M", str(self.M)),
            ("g", repr(self.g_value)),
            ("aoi_lower", repr(self.aoi_lower)),
            ("aoi_lower_agnostic", repr(self.aoi_lower_agnostic)),
            ("mmw_upper", "" if self.mmw_upper is None else repr(self.mmw_upper)),
            ("g_sandwich_lower", "" if self.g_sandwich is None else repr(self.g_sandwich[0])),
            ("g_sandwich_upper", "" if self.g_sandwich is None else repr(self.g_sandwich[1])),
            ("mobility_alpha", repr(self.mobility.alpha)),
            ("mobility_regime", self.mobility.regime),
            ("adversarial_sum_lower", dec(self.adversarial_sum_lower.general)),
            ("adversarial_sum_lower_improved", dec(self.adversarial_sum_lower.improved)),
            ("yao_ratio_lower", dec(self.yao_ratio_lower)),
            ("yao_opt_sum_cost", dec(self.yao_opt_cost)),
        ]
        return out


def bounds_report(p: Sequence[float], M: int, psi=None) -> BoundsReport:
    """Evaluate every bound for one system.

    ``psi`` defaults to uniform occupancy. The MMW upper bound is only
    reported when all ``p`` are equal and occupancy is uniform, which is the
    regime where it is proven.
    """
    p = tuple(float(x) for x in p)
    N = len(p)
    if M < 1 or N < 1:
        raise ConfigurationError("need M >= 1 and at least one UE")
    notes = []
    if psi is None:
        uniform = True
        g = g_uniform(M, N)
    else:
        psi = _check_psi(psi)
        if psi.shape != (N, M):
            raise ConfigurationError(f"psi must have shape ({N}, {M})")
        uniform = bool(np.allclose(psi, 1.0 / M, rtol=0, atol=1e-12))
        g = g_exact(psi)
    identical = len(set(p)) == 1
    mmw = None
    if identical and uniform:
        mmw = mmw_upper_bound(N, M, p[0])
    else:
        notes.append("mmw_upper omitted: proven only for identical p and uniform occupancy")
    return BoundsReport(
        N=N,
        M=M,
        p=p,
        g_value=g,
        aoi_lower=aoi_lower_bound(p, g),
        aoi_lower_agnostic=aoi_lower_bound_agnostic(p, M, N),
        mmw_upper=mmw,
        g_sandwich=g_uniform_sandwich(M, N) if (M >= 2 and uniform) else None,
        mobility=mobility_advantage(M, N),
        adversarial_sum_lower=adversarial_sum_lower_bound(N),
        yao_ratio_lower=yao_competitive_lower_bound(N) if N >= 2 else None,
        yao_opt_cost=yao_renewal_quantities(N).total_cost if N >= 2 else None,
        notes=notes,
    )
