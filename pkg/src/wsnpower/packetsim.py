"""Seeded Bernoulli packet simulation over analytic link reception rates.

Each message is a run of independent attempts against the sender-receiver
link PRR, capped at one transmission plus max_retries.  Link quality is
measured on first attempts only; delivery ratio (which credits retries) is
reported separately.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .channel import strategy_to_mw, prr_matrix


@dataclass(frozen=True)
class TrafficConfig:
    message_period_s: float = 2.0
    messages_per_node: int = 100
    payload_f_bytes: int = 25
    max_retries: int = 30
    seed: int = 0

    def __post_init__(self):
        if self.message_period_s <= 0:
            raise ValueError("message period must be positive")
        if self.messages_per_node <= 0 or self.payload_f_bytes <= 0:
            raise ValueError("message and payload counts must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

    @classmethod
    def testbed(cls, **overrides) -> "TrafficConfig":
        """Hardware-style traffic: 3 retries, one message every 2 s."""
        merged = {"max_retries": 3, "message_period_s": 2.0}
        merged.update(overrides)
        return cls(**merged)


@dataclass(frozen=True)
class Transmission:
    sender: int
    receiver: int
    tx_dbm: float
    attempts_used: int
    delivered: bool
    send_time_s: float


@dataclass
class TransmissionLog:
    records: list
    max_retries: int
    empty_senders: tuple = ()

    def __post_init__(self):
        cap = self.max_retries + 1
        for rec in self.records:
            if not (1 <= rec.attempts_used <= cap):
                raise ValueError(f"attempts_used {rec.attempts_used} outside [1, {cap}]")


def best_prr_receivers(profile, gains: np.ndarray, n0_mw: float, f_bytes: int,
                       epsilon_link: float, interference: str = "none") -> np.ndarray:
    """Fixed receiver per sender: the highest analytic-PRR neighbor, -1 if none."""
    mat = prr_matrix(profile.mw, gains, n0_mw, f_bytes, interference)
    receivers = np.argmax(mat, axis=1).astype(int)
    best = mat[np.arange(mat.shape[0]), receivers]
    receivers[best < epsilon_link] = -1
    return receivers


def round_robin_receivers(profile, gains: np.ndarray, n0_mw: float, f_bytes: int,
                          epsilon_link: float, n_messages: int,
                          interference: str = "none") -> np.ndarray:
    """Per-message receiver matrix cycling through each sender's neighbors."""
    mat = prr_matrix(profile.mw, gains, n0_mw, f_bytes, interference)
    m = mat.shape[0]
    out = np.full((m, n_messages), -1, dtype=int)
    for i in range(m):
        neighbors = np.flatnonzero(mat[i] >= epsilon_link)
        if neighbors.size:
            out[i] = neighbors[np.arange(n_messages) % neighbors.size]
    return out


def simulate(profile, gains: np.ndarray, n0_mw: float, traffic: TrafficConfig,
             links: np.ndarray, interference: str = "none") -> TransmissionLog:
    """Run the per-message attempt process for every sender.

    links is either a per-sender receiver array (m,) or a per-message matrix
    (m, messages_per_node); receiver -1 marks a sender with no usable link,
    whose messages exhaust the full attempt budget undelivered.
    """
    m = gains.shape[0]
    links = np.asarray(links, dtype=int)
    if links.shape == (m,):
        links = np.repeat(links[:, None], traffic.messages_per_node, axis=1)
    if links.shape != (m, traffic.messages_per_node):
        raise ValueError("links must be (m,) or (m, messages_per_node)")
    mat = prr_matrix(profile.mw, gains, n0_mw, traffic.payload_f_bytes, interference)
    rng = np.random.default_rng(traffic.seed)
    cap = traffic.max_retries + 1
    records = []
    empty = []
    dbm = profile.dbm
    for i in range(m):
        receivers = links[i]
        if np.all(receivers < 0):
            empty.append(i)
        p_link = np.where(receivers >= 0, mat[i, np.clip(receivers, 0, m - 1)], 0.0)
        draws = rng.random((traffic.messages_per_node, cap))
        success = draws < p_link[:, None]
        any_success = success.any(axis=1)
        first = np.argmax(success, axis=1)
        attempts = np.where(any_success, first + 1, cap)
        for k in range(traffic.messages_per_node):
            records.append(Transmission(
                sender=i,
                receiver=int(receivers[k]),
                tx_dbm=float(dbm[i]),
                attempts_used=int(attempts[k]),
                delivered=bool(any_success[k]),
                send_time_s=float(k * traffic.message_period_s),
            ))
    return TransmissionLog(records=records, max_retries=traffic.max_retries,
                           empty_senders=tuple(empty))


def empirical_prr(log: TransmissionLog) -> dict:
    """Per-link first-attempt success ratio and its unweighted network mean."""
    if not log.records:
        raise ValueError("empty transmission log")
    counts = {}
    hits = {}
    for rec in log.records:
        if rec.receiver < 0:
            continue
        key = (rec.sender, rec.receiver)
        counts[key] = counts.get(key, 0) + 1
        if rec.attempts_used == 1 and rec.delivered:
            hits[key] = hits.get(key, 0) + 1
    per_link = {key: hits.get(key, 0) / counts[key] for key in sorted(counts)}
    avg = float(np.mean(list(per_link.values()))) if per_link else 0.0
    return {"per_link_prr": per_link, "avg_prr": avg}


def delivery_ratio(log: TransmissionLog) -> float:
    """Fraction of messages delivered within the attempt budget (retries count)."""
    if not log.records:
        raise ValueError("empty transmission log")
    return float(np.mean([rec.delivered for rec in log.records]))


def relative_energy(log: TransmissionLog) -> float:
    """Mean linear transmit power per attempt, normalized to the 0 dBm anchor."""
    if not log.records:
        raise ValueError("empty transmission log")
    total_mw = 0.0
    total_attempts = 0
    for rec in log.records:
        total_mw += rec.attempts_used * 10.0 ** (rec.tx_dbm / 10.0)
        total_attempts += rec.attempts_used
    return total_mw / total_attempts


GOOD_PRR = 0.8
BAD_PRR = 0.3


def link_cdf(per_link_prr: dict) -> dict:
    """Empirical CDF points plus (good, intermediate, bad) class fractions."""
    if not per_link_prr:
        raise ValueError("need at least one link")
    values = np.sort(np.asarray(list(per_link_prr.values()), dtype=float))
    n = values.size
    cdf_points = [(float(v), float((k + 1) / n)) for k, v in enumerate(values)]
    good = float(np.mean(values >= GOOD_PRR))
    bad = float(np.mean(values < BAD_PRR))
    intermediate = 1.0 - good - bad
    return {"cdf_points": cdf_points,
            "link_class_fractions": (good, intermediate, bad)}


@dataclass
class Metrics:
    avg_prr: float
    per_link_prr: dict
    relative_energy: float
    link_class_fractions: tuple
    cdf_points: list
    delivery_ratio: float
    empty_neighborhood_senders: tuple = field(default_factory=tuple)

    def to_json_dict(self) -> dict:
        return {
            "avg_prr": self.avg_prr,
            "per_link_prr": {f"{i}->{j}": v for (i, j), v in sorted(self.per_link_prr.items())},
            "relative_energy": self.relative_energy,
            "link_class_fractions": {
                "good": self.link_class_fractions[0],
                "intermediate": self.link_class_fractions[1],
                "bad": self.link_class_fractions[2],
            },
            "cdf_points": [[p, c] for p, c in self.cdf_points],
            "delivery_ratio": self.delivery_ratio,
            "empty_neighborhood_senders": list(self.empty_neighborhood_senders),
        }


def build_metrics(log: TransmissionLog) -> Metrics:
    prr_part = empirical_prr(log)
    if prr_part["per_link_prr"]:
        cdf_part = link_cdf(prr_part["per_link_prr"])
    else:
        cdf_part = {"cdf_points": [], "link_class_fractions": (0.0, 0.0, 1.0)}
    return Metrics(
        avg_prr=prr_part["avg_prr"],
        per_link_prr=prr_part["per_link_prr"],
        relative_energy=relative_energy(log),
        link_class_fractions=cdf_part["link_class_fractions"],
        cdf_points=cdf_part["cdf_points"],
        delivery_ratio=delivery_ratio(log),
        empty_neighborhood_senders=log.empty_senders,
    )


def write_log_csv(log: TransmissionLog, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sender", "receiver", "tx_dbm", "attempts", "delivered"])
        for rec in log.records:
            writer.writerow([rec.sender, rec.receiver, repr(rec.tx_dbm),
                             rec.attempts_used, int(rec.delivered)])