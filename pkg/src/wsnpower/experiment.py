"""Batch driver for the four-mode power control comparison.

Modes: continuous game, nearest-level rounding of the continuous solution,
the game played natively on the level grid, and an always-full-power
baseline.  One scenario in, plot-ready JSON/CSV out, byte deterministic.
"""

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import channel, game, packetsim, topology
from .quantize import (DiscreteLevelSet, RegisterMap, discretize_profile,
                       solve_discrete, to_register)

MODES = ("continuous", "discretized-posthoc", "discretized-game", "full-power")
RECEIVER_POLICIES = ("best-prr", "round-robin")


@dataclass
class ScenarioConfig:
    """Everything needed to reproduce one scenario end to end."""

    topology_spec: dict = field(default_factory=lambda: {"m": 80, "area": (100.0, 100.0), "seed": 0})
    path_loss: channel.PathLossModel = field(default_factory=channel.PathLossModel)
    noise: channel.NoiseFloor = field(default_factory=channel.NoiseFloor)
    game_params: game.GameParams = field(default_factory=game.GameParams)
    levels: DiscreteLevelSet = field(default_factory=DiscreteLevelSet)
    registers: RegisterMap = field(default_factory=RegisterMap.eight_level_default)
    traffic: packetsim.TrafficConfig = field(default_factory=packetsim.TrafficConfig)
    modes: tuple = MODES
    receiver_policy: str = "best-prr"

    def __post_init__(self):
        self.modes = tuple(self.modes)
        if not self.modes:
            raise ValueError("at least one mode must be selected")
        for mode in self.modes:
            if mode not in MODES:
                raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")
        if len(set(self.modes)) != len(self.modes):
            raise ValueError("duplicate modes")
        if self.receiver_policy not in RECEIVER_POLICIES:
            raise ValueError(f"receiver policy must be one of {RECEIVER_POLICIES}")
        spec = self.topology_spec
        if "file" not in spec:
            if not {"m", "area", "seed"} <= set(spec):
                raise ValueError("topology spec needs m/area/seed or a file path")

    def build_topology(self) -> topology.Topology:
        spec = self.topology_spec
        if "file" in spec:
            return topology.load_topology(spec["file"])
        return topology.random_topology(int(spec["m"]),
                                        area=tuple(spec["area"]),
                                        seed=int(spec["seed"]))

    def to_json_dict(self) -> dict:
        spec = dict(self.topology_spec)
        if "area" in spec:
            spec["area"] = list(spec["area"])
        gp = self.game_params
        return {
            "topology": spec,
            "path_loss": {
                "reference_distance_d0": self.path_loss.reference_distance_d0,
                "reference_gain_db": self.path_loss.reference_gain_db,
                "exponent": self.path_loss.exponent,
                "shadowing_sigma_db": self.path_loss.shadowing_sigma_db,
                "seed": self.path_loss.seed,
            },
            "noise_floor": {"n0_mw": self.noise.n0_mw},
            "game": {
                "ncr_scale": gp.ncr_scale,
                "cost_denominator": gp.cost_denominator,
                "log_base": gp.log_base,
                "f_bytes": gp.f_bytes,
                "epsilon_link": gp.epsilon_link,
                "degree_target": gp.degree_target,
                "degree_rule": gp.degree_rule,
                "smallworld_delta": gp.smallworld_delta,
                "n_iter_max": gp.n_iter_max,
                "convergence_tol": gp.convergence_tol,
                "br_tol": gp.br_tol,
                "prescan_samples": gp.prescan_samples,
                "ncr_denominator": gp.ncr_denominator,
                "interference": gp.interference,
            },
            "levels": self.levels.to_json_dict(),
            "registers": self.registers.to_json_dict(),
            "traffic": {
                "message_period_s": self.traffic.message_period_s,
                "messages_per_node": self.traffic.messages_per_node,
                "payload_f_bytes": self.traffic.payload_f_bytes,
                "max_retries": self.traffic.max_retries,
                "seed": self.traffic.seed,
            },
            "modes": list(self.modes),
            "receiver_policy": self.receiver_policy,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ScenarioConfig":
        kwargs = {}
        if "topology" in data:
            spec = dict(data["topology"])
            if "area" in spec:
                spec["area"] = tuple(float(v) for v in spec["area"])
            kwargs["topology_spec"] = spec
        if "path_loss" in data:
            kwargs["path_loss"] = channel.PathLossModel(**data["path_loss"])
        if "noise_floor" in data:
            kwargs["noise"] = channel.NoiseFloor(**data["noise_floor"])
        if "game" in data:
            kwargs["game_params"] = game.GameParams(**data["game"])
        if "levels" in data:
            kwargs["levels"] = DiscreteLevelSet.from_json_dict(data["levels"])
        if "registers" in data:
            kwargs["registers"] = RegisterMap.from_json_dict(data["registers"])
        if "traffic" in data:
            kwargs["traffic"] = packetsim.TrafficConfig(**data["traffic"])
        if "modes" in data:
            kwargs["modes"] = tuple(data["modes"])
        if "receiver_policy" in data:
            kwargs["receiver_policy"] = data["receiver_policy"]
        return cls(**kwargs)


def simulation_default() -> ScenarioConfig:
    """80 nodes on 100x100 m, 30 retries: the software-simulation preset."""
    return ScenarioConfig()


def testbed_default() -> ScenarioConfig:
    """Hardware-style preset: 3 retries, one message every 2 seconds."""
    return ScenarioConfig(traffic=packetsim.TrafficConfig.testbed())


def validate_config(data: dict):
    """(ok, message): parse a config dict without running anything."""
    try:
        ScenarioConfig.from_json_dict(data)
    except (ValueError, TypeError, KeyError) as exc:
        return False, f"{type(exc).__name__}: {exc}"
    return True, "ok"


def _topology_digest(topo: topology.Topology) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(topo.positions).tobytes())
    h.update(repr((topo.area, topo.seed)).encode())
    return h.hexdigest()[:16]


@dataclass
class ModeSection:
    mode: str
    topology_digest: str
    profile: game.StrategyProfile
    register_ids: list
    converged: bool
    sweeps_used: int
    potential_trace: list
    profile_trace: list
    per_node_feasible: list
    nonunimodal_events: int
    analytic_avg_prr: float
    analytic_link_prr: dict
    metrics: packetsim.Metrics
    connected_bfs: bool
    connected_spectral: bool

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "topology_digest": self.topology_digest,
            "powers": [
                {"id": i, "s": float(self.profile.s[i]), "dbm": float(self.profile.dbm[i]),
                 "mw": float(self.profile.mw[i]), "register_id": self.register_ids[i],
                 "feasible": bool(self.per_node_feasible[i])}
                for i in range(self.profile.n)
            ],
            "converged": self.converged,
            "sweeps_used": self.sweeps_used,
            "potential_trace": [float(v) for v in self.potential_trace],
            "nonunimodal_events": self.nonunimodal_events,
            "analytic_avg_prr": self.analytic_avg_prr,
            "analytic_link_prr": {f"{i}->{j}": v for (i, j), v in sorted(self.analytic_link_prr.items())},
            "metrics": self.metrics.to_json_dict(),
            "connected_bfs": self.connected_bfs,
            "connected_spectral": self.connected_spectral,
        }


@dataclass
class SimulationReport:
    config: ScenarioConfig
    topology_digest: str
    full_power_connected: bool
    sections: dict
    deltas: dict
    logs: dict = field(default_factory=dict, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "topology_digest": self.topology_digest,
            "full_power_connected": self.full_power_connected,
            "modes": {name: sec.to_json_dict() for name, sec in sorted(self.sections.items())},
            "deltas": self.deltas,
        }


def _analytic_summary(profile, gains, n0_mw, params):
    """Per-sender best-link analytic PRR; isolated senders count as 0.

    Returns the network average and the full analytic PRR matrix.
    """
    mat = channel.prr_matrix(profile.mw, gains, n0_mw, params.f_bytes, params.interference)
    best = mat.max(axis=1)
    avg = float(np.where(best >= params.epsilon_link, best, 0.0).mean())
    return avg, mat


def _feasibility(profile, gains, n0_mw, params):
    k = params.required_degree(profile.n)
    return [
        topology.min_power_for_degree(i, profile, gains, n0_mw, params.f_bytes,
                                      params.epsilon_link, k, params.interference)
        != topology.INFEASIBLE
        for i in range(profile.n)
    ]


def _run_mode(mode, config, gains, digest, continuous_result=None):
    params = config.game_params
    n0 = config.noise.n0_mw
    m = gains.shape[0]
    if mode == "continuous":
        diag = continuous_result
        profile = diag.profile
        potential_trace = list(diag.potential_trace)
        profile_trace = [np.array(p) for p in diag.profile_trace]
        converged, sweeps, flags = diag.converged, diag.sweeps_used, diag.nonunimodal_events
        feasible = diag.per_node_feasible
    elif mode == "discretized-posthoc":
        # The continuous run plus a final rounding step; the trace shows both.
        diag = continuous_result
        profile = discretize_profile(diag.profile, config.levels)
        potential_trace = list(diag.potential_trace)
        potential_trace.append(game.potential(profile, gains, n0, params))
        profile_trace = [np.array(p) for p in diag.profile_trace]
        profile_trace.append(np.array(profile.s))
        converged, sweeps, flags = diag.converged, diag.sweeps_used, diag.nonunimodal_events
        feasible = _feasibility(profile, gains, n0, params)
    elif mode == "discretized-game":
        diag = solve_discrete(game.StrategyProfile.full_power(m), gains, n0,
                                       params, config.levels)
        profile = diag.profile
        potential_trace = list(diag.potential_trace)
        profile_trace = [np.array(p) for p in diag.profile_trace]
        converged, sweeps, flags = diag.converged, diag.sweeps_used, diag.nonunimodal_events
        feasible = diag.per_node_feasible
    else:
        profile = game.StrategyProfile.full_power(m)
        potential_trace = [game.potential(profile, gains, n0, params)]
        profile_trace = [np.array(profile.s)]
        converged, sweeps, flags = True, 0, 0
        feasible = _feasibility(profile, gains, n0, params)

    avg, analytic_mat = _analytic_summary(profile, gains, n0, params)
    if config.receiver_policy == "round-robin":
        links = packetsim.round_robin_receivers(profile, gains, n0, params.f_bytes,
                                                params.epsilon_link,
                                                config.traffic.messages_per_node,
                                                params.interference)
    else:
        links = packetsim.best_prr_receivers(profile, gains, n0, params.f_bytes,
                                             params.epsilon_link, params.interference)
    log = packetsim.simulate(profile, gains, n0, config.traffic, links, params.interference)
    metrics = packetsim.build_metrics(log)
    chosen = {key: float(analytic_mat[key]) for key in sorted(metrics.per_link_prr)}
    adj = topology.adjacency(profile, gains, n0, params.f_bytes, params.epsilon_link,
                             params.interference)
    register_ids = [to_register(float(d), config.registers) for d in profile.dbm]
    return ModeSection(
        mode=mode,
        topology_digest=digest,
        profile=profile,
        register_ids=register_ids,
        converged=converged,
        sweeps_used=sweeps,
        potential_trace=list(potential_trace),
        profile_trace=[np.array(p) for p in profile_trace],
        per_node_feasible=list(feasible),
        nonunimodal_events=flags,
        analytic_avg_prr=avg,
        analytic_link_prr=chosen,
        metrics=metrics,
        connected_bfs=topology.is_connected_bfs(adj),
        connected_spectral=topology.is_connected_spectral(adj),
    ), log


def run_scenario(config: ScenarioConfig) -> SimulationReport:
    """Solve, quantize, and simulate every selected mode on one topology."""
    topo = config.build_topology()
    gains = channel.build_gain_matrix(topo.positions, config.path_loss)
    digest = _topology_digest(topo)
    params = config.game_params
    n0 = config.noise.n0_mw
    m = topo.node_count

    full = game.StrategyProfile.full_power(m)
    adj_full = topology.adjacency(full, gains, n0, params.f_bytes, params.epsilon_link,
                                  params.interference)
    full_connected = topology.is_connected_spectral(adj_full)

    needs_continuous = {"continuous", "discretized-posthoc"} & set(config.modes)
    continuous_result = None
    if needs_continuous:
        continuous_result = game.solve(full, gains, n0, params)

    sections = {}
    logs = {}
    for mode in config.modes:
        sections[mode], logs[mode] = _run_mode(mode, config, gains, digest, continuous_result)

    deltas = {}
    if "full-power" in sections:
        base = sections["full-power"]
        for mode in config.modes:
            if mode == "full-power":
                continue
            deltas[f"{mode}-vs-full-power"] = _delta(sections[mode], base)
    if {"discretized-posthoc", "continuous"} <= set(sections):
        deltas["discretized-posthoc-vs-continuous"] = _delta(
            sections["discretized-posthoc"], sections["continuous"])

    return SimulationReport(
        config=config,
        topology_digest=digest,
        full_power_connected=full_connected,
        sections=sections,
        deltas=deltas,
        logs=logs,
    )


def _delta(section_a: ModeSection, section_b: ModeSection) -> dict:
    if section_a.topology_digest != section_b.topology_digest:
        raise ValueError("cannot compare mode sections from different topologies")
    return {
        "delta_analytic_avg_prr_pp": (section_a.analytic_avg_prr - section_b.analytic_avg_prr) * 100.0,
        "delta_empirical_avg_prr_pp": (section_a.metrics.avg_prr - section_b.metrics.avg_prr) * 100.0,
        "delta_relative_energy": section_a.metrics.relative_energy - section_b.metrics.relative_energy,
    }


def compare(section_a: ModeSection, section_b: ModeSection) -> dict:
    """Pairwise mode deltas: PRR in percentage points, energy as a fraction."""
    return _delta(section_a, section_b)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(x: float) -> str:
    return repr(float(x))


def emit(report: SimulationReport, out_dir) -> list:
    """Write report.json plus the CSV tables; returns the created paths."""
    os.makedirs(out_dir, exist_ok=True)
    created = []

    path = os.path.join(out_dir, "report.json")
    with open(path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    created.append(path)

    rows = []
    for mode in report.config.modes:
        sec = report.sections[mode]
        for i in range(sec.profile.n):
            rows.append([i, mode, _fmt(sec.profile.s[i]), _fmt(sec.profile.dbm[i]),
                         _fmt(sec.profile.mw[i]), sec.register_ids[i]])
    path = os.path.join(out_dir, "powers.csv")
    _write_csv(path, ["node", "mode", "s", "dbm", "mw", "register_id"], rows)
    created.append(path)

    rows = []
    for mode in report.config.modes:
        sec = report.sections[mode]
        connected = sec.connected_bfs and sec.connected_spectral
        rows.append([mode, _fmt(sec.metrics.avg_prr), _fmt(sec.metrics.relative_energy),
                     int(connected)])
    path = os.path.join(out_dir, "summary.csv")
    _write_csv(path, ["mode", "avg_prr", "relative_energy", "connected"], rows)
    created.append(path)

    for mode in report.config.modes:
        sec = report.sections[mode]
        mode_dir = os.path.join(out_dir, mode)
        os.makedirs(mode_dir, exist_ok=True)

        rows = []
        for (i, j), emp in sorted(sec.metrics.per_link_prr.items()):
            analytic = sec.analytic_link_prr[(i, j)]
            if emp >= packetsim.GOOD_PRR:
                klass = "good"
            elif emp < packetsim.BAD_PRR:
                klass = "bad"
            else:
                klass = "intermediate"
            rows.append([i, j, _fmt(analytic), _fmt(emp), klass])
        path = os.path.join(mode_dir, "links.csv")
        _write_csv(path, ["i", "j", "analytic_prr", "empirical_prr", "class"], rows)
        created.append(path)

        rows = []
        for sweep, snapshot in enumerate(sec.profile_trace):
            for i, s in enumerate(snapshot):
                rows.append([sweep, i, _fmt(s)])
        path = os.path.join(mode_dir, "trace.csv")
        _write_csv(path, ["sweep", "node", "s"], rows)
        created.append(path)

        rows = [[_fmt(p), _fmt(c)] for p, c in sec.metrics.cdf_points]
        path = os.path.join(mode_dir, "cdf.csv")
        _write_csv(path, ["prr", "cumulative_fraction"], rows)
        created.append(path)
    return created