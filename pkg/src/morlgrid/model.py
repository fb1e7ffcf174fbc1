"""Economic and physical relations of the multi-microgrid system.

Every function here is pure. Quantities are per hourly step: energies in kWh,
prices in currency/kWh.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError

HOURS = 24
DEFAULT_PRICE_GRID = (1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0)


@dataclass(frozen=True)
class StorageSpec:
    capacity_max: float
    capacity_min: float
    ramp_max: float
    initial_level: float

    def __post_init__(self):
        if not 0 <= self.capacity_min < self.capacity_max:
            raise InvalidInputError(
                f"need 0 <= capacity_min < capacity_max, got {self.capacity_min}, {self.capacity_max}")
        if not 0 < self.ramp_max <= self.capacity_max:
            raise InvalidInputError(f"need 0 < ramp_max <= capacity_max, got {self.ramp_max}")
        if not self.capacity_min <= self.initial_level <= self.capacity_max:
            raise InvalidInputError(
                f"initial_level {self.initial_level} outside [{self.capacity_min}, {self.capacity_max}]")

    @classmethod
    def from_capacity(cls, capacity, min_fraction=0.3, ramp_fraction=0.1, initial_fraction=0.5):
        """Build a storage whose floor, ramp and starting level are fractions of capacity."""
        return cls(
            capacity_max=float(capacity),
            capacity_min=float(capacity * min_fraction),
            ramp_max=float(capacity * ramp_fraction),
            initial_level=float(capacity * initial_fraction),
        )


@dataclass(frozen=True)
class MicrogridSpec:
    id: int
    storage: Optional[StorageSpec] = None
    omega: tuple = (6.0,) * HOURS
    baseload: str = ""

    def __post_init__(self):
        omega = tuple(float(x) for x in np.broadcast_to(self.omega, (HOURS,)))
        if any(x <= 0 for x in omega):
            raise InvalidInputError(f"microgrid {self.id}: omega values must be strictly positive")
        object.__setattr__(self, "omega", omega)
        if not self.baseload:
            object.__setattr__(self, "baseload", f"mg{self.id}")


@dataclass(frozen=True)
class EconomicParams:
    alpha: float = 0.05
    a_g: float = 0.002
    b_g: float = 1.0
    c_g: float = 10.0
    elasticity_slope: float = 0.4
    lambda_ref: float = 3.0
    penalty_weight: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise InvalidInputError("alpha must be > 0")
        if self.a_g <= 0:
            raise InvalidInputError("a_g must be > 0")
        if self.b_g < 0 or self.c_g < 0:
            raise InvalidInputError("b_g and c_g must be >= 0")
        if self.elasticity_slope < 0:
            raise InvalidInputError("elasticity_slope must be >= 0")
        if self.lambda_ref <= 0:
            raise InvalidInputError("lambda_ref must be > 0")
        if self.penalty_weight < 0:
            raise InvalidInputError("penalty_weight must be >= 0")


@dataclass(frozen=True)
class SystemConfig:
    """Microgrids, economics and the discretization shared by the environment."""

    microgrids: tuple
    economics: EconomicParams = field(default_factory=EconomicParams)
    price_grid: tuple = DEFAULT_PRICE_GRID
    soc_low: float = 0.3
    soc_high: float = 1.0
    soc_levels: int = 8

    def __post_init__(self):
        object.__setattr__(self, "microgrids", tuple(self.microgrids))
        object.__setattr__(self, "price_grid", tuple(float(p) for p in self.price_grid))
        if not self.microgrids:
            raise InvalidInputError("at least one microgrid is required")
        ids = [mg.id for mg in self.microgrids]
        if len(set(ids)) != len(ids):
            raise InvalidInputError(f"duplicate microgrid ids {ids}")
        if not self.price_grid or any(p <= 0 for p in self.price_grid):
            raise InvalidInputError("price grid must be non-empty and strictly positive")
        if list(self.price_grid) != sorted(set(self.price_grid)):
            raise InvalidInputError("price grid must be strictly increasing")
        if not 0 <= self.soc_low < self.soc_high <= 1:
            raise InvalidInputError("need 0 <= soc_low < soc_high <= 1")
        if self.soc_levels < 1:
            raise InvalidInputError("soc_levels must be >= 1")

    @property
    def storages(self):
        return [mg.storage for mg in self.microgrids if mg.storage is not None]


def default_system(n_microgrids=3, capacities=(200.0, 250.0), omega=6.0, economics=None):
    """Three microgrids, the first two with 200 and 250 kWh storage."""
    mgs = []
    for i in range(n_microgrids):
        storage = StorageSpec.from_capacity(capacities[i]) if i < len(capacities) else None
        mgs.append(MicrogridSpec(id=i + 1, storage=storage, omega=(omega,) * HOURS))
    return SystemConfig(microgrids=tuple(mgs), economics=economics or EconomicParams())


@dataclass(frozen=True)
class ObjectiveVector:
    """Per-step or per-episode objective values, all "greater is better" except ``a``.

    ``a`` is the constraint penalty and is never negative; dominance treats
    the vector as ``(w, s, g, -a)`` under maximization.
    """

    w: float = 0.0
    s: float = 0.0
    g: float = 0.0
    a: float = 0.0

    def __post_init__(self):
        if self.a < 0:
            raise InvalidInputError(f"penalty must be >= 0, got {self.a}")

    def maximization(self):
        return np.array([self.w, self.s, self.g, 0.0 - self.a])

    @classmethod
    def from_maximization(cls, values):
        w, s, g, neg_a = (float(v) for v in values)
        return cls(w, s, g, max(0.0, -neg_a))

    def __add__(self, other):
        return ObjectiveVector(self.w + other.w, self.s + other.s, self.g + other.g, self.a + other.a)

    def as_tuple(self):
        return (self.w, self.s, self.g, self.a)


def elasticity(lam, params):
    """Fractional demand change at price ``lam``, clamped to +-50%."""
    h = -params.elasticity_slope * (lam - params.lambda_ref) / params.lambda_ref
    return min(max(h, -0.5), 0.5)


def demand(lam, baseload, params):
    if lam <= 0:
        raise InvalidInputError(f"price must be > 0, got {lam}")
    if baseload < 0:
        raise InvalidInputError(f"baseload must be >= 0, got {baseload}")
    return (1.0 + elasticity(lam, params)) * baseload


def user_utility(p_d, omega, alpha):
    """Quadratic utility, flat at ``omega**2 / (2 alpha)`` past the satiation point."""
    if p_d < 0:
        raise InvalidInputError(f"consumption must be >= 0, got {p_d}")
    if omega <= 0 or alpha <= 0:
        raise InvalidInputError("omega and alpha must be > 0")
    if p_d <= omega / alpha:
        return omega * p_d - 0.5 * alpha * p_d * p_d
    return omega * omega / (2.0 * alpha)


def user_cost(lam, p_d):
    return lam * p_d


def welfare(demands, lam, specs, hour, params):
    """Total user utility minus energy bills over all microgrids."""
    if len(demands) != len(specs):
        raise InvalidInputError(f"{len(demands)} demands for {len(specs)} microgrids")
    if not 0 <= hour < HOURS:
        raise InvalidInputError(f"hour must be in 0..23, got {hour}")
    total = 0.0
    for p_d, mg in zip(demands, specs):
        total += user_utility(p_d, mg.omega[hour], params.alpha) - user_cost(lam, p_d)
    return total


def welfare_optimal_demand(lam, omega, alpha):
    """Consumption at which marginal utility equals the price."""
    if lam <= 0:
        raise InvalidInputError(f"price must be > 0, got {lam}")
    return max(0.0, (omega - lam) / alpha)


def grid_power(demand, renewable, delta_s):
    """Import from the main grid (negative for export).

    Charging (``delta_s > 0``) adds to the import, discharging offsets it.
    """
    if demand < 0 or renewable < 0:
        raise InvalidInputError("demand and renewable must be >= 0")
    return demand + delta_s - renewable


def generation_cost(p_g, params):
    return params.a_g * p_g * p_g + params.b_g * p_g + params.c_g


def grid_profit(lam, p_g_total, params):
    # applied as-is for net export: the grid pays lam per kWh received
    if lam <= 0:
        raise InvalidInputError(f"price must be > 0, got {lam}")
    return lam * p_g_total - generation_cost(p_g_total, params)


def stored_energy_objective(levels):
    return float(sum(levels))


def constraint_penalty(levels_now, levels_prev, specs: Sequence[StorageSpec]):
    """Summed ramp, ceiling and floor violations; zero exactly on the feasible set."""
    if not len(levels_now) == len(levels_prev) == len(specs):
        raise InvalidInputError(
            f"length mismatch: {len(levels_now)} now, {len(levels_prev)} prev, {len(specs)} specs")
    total = 0.0
    for now, prev, sp in zip(levels_now, levels_prev, specs):
        total += max(abs(now - prev) - sp.ramp_max, 0.0)
        total += max(now - sp.capacity_max, 0.0)
        total += max(sp.capacity_min - now, 0.0)
    return total


def objective_vector(welfare, stored, profit, penalty):
    if penalty < 0:
        raise InvalidInputError(f"penalty must be >= 0, got {penalty}")
    return ObjectiveVector(float(welfare), float(stored), float(profit), float(penalty))
