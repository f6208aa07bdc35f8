"""Discrete power levels, nearest-level quantization, and register mapping.

Two ways to reach a discrete operating point: round a continuous solution
to the grid after the fact, or play the game natively on the grid with an
exhaustive per-node argmax.  Both are provided; they need not agree.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import DBM_OFFSET
from .game import StrategyProfile, _NodeEnvironment, potential
from .game import EquilibriumResult, GameParams
from .topology import INFEASIBLE, min_power_for_degree

DBM_FLOOR = -25.0
DBM_CEIL = 0.0


@dataclass(frozen=True)
class DiscreteLevelSet:
    """Strictly increasing dB levels within [-25, 0]."""

    levels_dbm: tuple = tuple(float(v) for v in range(-24, 1))

    def __post_init__(self):
        levels = tuple(float(v) for v in self.levels_dbm)
        if len(levels) == 0:
            raise ValueError("level set must be non-empty")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be strictly increasing")
        if levels[0] < DBM_FLOOR or levels[-1] > DBM_CEIL:
            raise ValueError(f"levels must lie within [{DBM_FLOOR}, {DBM_CEIL}]")
        object.__setattr__(self, "levels_dbm", levels)

    @classmethod
    def one_db_grid(cls, include_floor: bool = False) -> "DiscreteLevelSet":
        """1 dB grid over the transmit range: 25 values {-24..0} by default,
        26 values {-25..0} when the floor endpoint is included."""
        lo = -25 if include_floor else -24
        return cls(tuple(float(v) for v in range(lo, 1)))

    def to_json_dict(self) -> dict:
        return {"levels_dbm": list(self.levels_dbm)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "DiscreteLevelSet":
        return cls(tuple(float(v) for v in data["levels_dbm"]))


def quantize(dbm, levels: DiscreteLevelSet):
    """Nearest level to a dB value, ties toward the lower (cheaper) level.

    Inputs outside the transmit range are clamped before rounding.  Accepts
    scalars or arrays.
    """
    arr = np.clip(np.asarray(dbm, dtype=float), DBM_FLOOR, DBM_CEIL)
    grid = np.asarray(levels.levels_dbm)
    if grid.size == 1:
        out = np.full_like(arr, grid[0])
    else:
        # searchsorted against midpoints; side="left" sends exact midpoints
        # to the lower cell.
        mids = (grid[:-1] + grid[1:]) / 2.0
        idx = np.searchsorted(mids, arr, side="left")
        out = grid[idx]
    if np.ndim(dbm) == 0:
        return float(out)
    return out


def _usable_levels(levels: DiscreteLevelSet, s_min: float, s_max: float):
    usable = [v for v in levels.levels_dbm if s_min <= v + DBM_OFFSET <= s_max]
    if not usable:
        raise ValueError("no level is representable within the profile bounds")
    return usable


def discretize_profile(profile: StrategyProfile, levels: DiscreteLevelSet) -> StrategyProfile:
    """Per-node nearest-level rounding of a continuous profile."""
    usable = DiscreteLevelSet(tuple(_usable_levels(levels, profile.s_min, profile.s_max)))
    q = quantize(profile.dbm, usable)
    return StrategyProfile(np.asarray(q) + DBM_OFFSET, s_min=profile.s_min, s_max=profile.s_max)


def discrete_best_response(i: int, profile: StrategyProfile, gains: np.ndarray,
                           n0_mw: float, params: GameParams,
                           levels: DiscreteLevelSet) -> float:
    """Exhaustive utility argmax over the level set; ties pick the lower level."""
    env = _NodeEnvironment(i, profile, gains, n0_mw, params)
    best_dbm = None
    best_val = -math.inf
    for level in _usable_levels(levels, profile.s_min, profile.s_max):
        value = env.utility(level + DBM_OFFSET)
        if value > best_val:
            best_val = value
            best_dbm = level
    return float(best_dbm)


def solve_discrete(profile0: StrategyProfile, gains: np.ndarray, n0_mw: float,
                   params: GameParams, levels: DiscreteLevelSet) -> EquilibriumResult:
    """Sequential discrete best responses until no node changes level.

    A finite strategy space plus the exact potential makes this terminate;
    non-termination within n_iter_max sweeps is reported, not raised.
    """
    current = discretize_profile(profile0, levels)
    trace = [potential(current, gains, n0_mw, params)]
    profiles = [np.array(current.s)]
    converged = False
    sweeps = 0
    order = params.update_order if params.update_order is not None else range(current.n)
    for _ in range(params.n_iter_max):
        new_profile = current
        for i in order:
            dbm_star = discrete_best_response(i, new_profile, gains, n0_mw, params, levels)
            new_profile = new_profile.with_power(i, dbm_star + DBM_OFFSET)
        sweeps += 1
        trace.append(potential(new_profile, gains, n0_mw, params))
        profiles.append(np.array(new_profile.s))
        delta = float(np.max(np.abs(new_profile.s - current.s)))
        current = new_profile
        if delta < params.convergence_tol:
            converged = True
            break
    k = params.required_degree(current.n)
    feasible = [
        min_power_for_degree(i, current, gains, n0_mw, params.f_bytes,
                             params.epsilon_link, k, params.interference) != INFEASIBLE
        for i in range(current.n)
    ]
    return EquilibriumResult(
        profile=current,
        sweeps_used=sweeps,
        potential_trace=trace,
        converged=converged,
        per_node_feasible=feasible,
        nonunimodal_events=0,
        profile_trace=profiles,
    )


@dataclass(frozen=True)
class RegisterMap:
    """dB level -> transceiver register id, monotone in both columns."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((float(d), int(r)) for d, r in self.pairs)
        if len(pairs) == 0:
            raise ValueError("register map must be non-empty")
        dbms = [d for d, _ in pairs]
        ids = [r for _, r in pairs]
        if any(b <= a for a, b in zip(dbms, dbms[1:])):
            raise ValueError("register map dB values must be strictly increasing")
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise ValueError("register ids must be strictly increasing with dB")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def linear(cls, levels: DiscreteLevelSet, id_start: int = 0, id_step: int = 1) -> "RegisterMap":
        """Consecutive ids along the level grid."""
        return cls(tuple((v, id_start + k * id_step) for k, v in enumerate(levels.levels_dbm)))

    @classmethod
    def eight_level_default(cls) -> "RegisterMap":
        """Common 2.4 GHz transceiver PA table: 8 settings spanning -25..0 dBm."""
        dbms = (-25.0, -15.0, -10.0, -7.0, -5.0, -3.0, -1.0, 0.0)
        ids = (3, 7, 11, 15, 19, 23, 27, 31)
        return cls(tuple(zip(dbms, ids)))

    def to_json_dict(self) -> dict:
        return {"registers": [{"dbm": d, "id": r} for d, r in self.pairs]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "RegisterMap":
        return cls(tuple((row["dbm"], row["id"]) for row in data["registers"]))


def to_register(dbm: float, rmap: RegisterMap) -> int:
    """Register id for a dB level, snapping to the nearest table entry.

    Values outside the table's span are a configuration error.
    """
    value = float(dbm)
    dbms = [d for d, _ in rmap.pairs]
    if value < dbms[0] - 1e-12 or value > dbms[-1] + 1e-12:
        raise ValueError(f"{value} dB is outside the register map domain "
                         f"[{dbms[0]}, {dbms[-1]}]")
    snapped = quantize(value, DiscreteLevelSet(tuple(dbms)))
    for d, r in rmap.pairs:
        if d == snapped:
            return r
    raise AssertionError("unreachable: snapped level must be a table entry")