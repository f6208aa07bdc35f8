"""Radio link physics: log-distance path loss, SINR, bit errors, packet reception.

Power is carried in three equivalent views:

* strategy units ``s`` in [0, 25],
* transmit level in dBm, ``dbm = s - 25``,
* linear milliwatts, ``mw = 10 ** (dbm / 10)``,

so ``s = 25`` is 0 dBm which is 1 mW.
"""

import hashlib
import math
import struct
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

STRATEGY_MAX = 25.0
DBM_OFFSET = 25.0

INTERFERENCE_MODES = ("none", "full")


class Position(NamedTuple):
    """Planar node location in meters."""

    x: float
    y: float


def strategy_to_dbm(s):
    return np.asarray(s, dtype=float) - DBM_OFFSET


def dbm_to_strategy(dbm):
    return np.asarray(dbm, dtype=float) + DBM_OFFSET


def dbm_to_mw(dbm):
    return 10.0 ** (np.asarray(dbm, dtype=float) / 10.0)


def mw_to_dbm(mw):
    return 10.0 * np.log10(np.asarray(mw, dtype=float))


def strategy_to_mw(s):
    return dbm_to_mw(strategy_to_dbm(s))


@dataclass(frozen=True)
class TxPower:
    """A single transmit power expressed in strategy units."""

    strategy_units: float

    def __post_init__(self):
        s = float(self.strategy_units)
        if not math.isfinite(s) or s < 0.0 or s > STRATEGY_MAX:
            raise ValueError(f"strategy units must lie in [0, {STRATEGY_MAX}], got {s}")

    @property
    def dbm(self) -> float:
        return float(self.strategy_units) - DBM_OFFSET

    @property
    def linear_mw(self) -> float:
        return float(10.0 ** (self.dbm / 10.0))

    @classmethod
    def from_dbm(cls, dbm: float) -> "TxPower":
        return cls(float(dbm) + DBM_OFFSET)


@dataclass(frozen=True)
class NoiseFloor:
    """Receiver noise floor in linear milliwatts.

    The -100 dBm default keeps short indoor links deep in the saturated
    PRR region at 0 dBm transmit power while pushing the 1%-PRR edge of a
    full-power link out to roughly 33 m under the default path loss.
    """

    n0_mw: float = 1e-10

    def __post_init__(self):
        if not (self.n0_mw > 0.0) or not math.isfinite(self.n0_mw):
            raise ValueError(f"noise floor must be a positive finite mW value, got {self.n0_mw}")

    @property
    def dbm(self) -> float:
        return float(10.0 * math.log10(self.n0_mw))


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance path loss with optional log-normal shadowing.

    ``gain_db(d) = reference_gain_db - 10 * exponent * log10(max(d, d0) / d0) + X``
    where X is a zero-mean Gaussian shadowing term (sigma in dB) drawn once per
    node pair from the model seed, or zero when ``shadowing_sigma_db`` is 0.
    Distances below ``reference_distance_d0`` are clamped to the reference
    distance so the near-field is never extrapolated.
    """

    reference_distance_d0: float = 1.0
    reference_gain_db: float = -40.0
    exponent: float = 3.3
    shadowing_sigma_db: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (self.reference_distance_d0 > 0.0):
            raise ValueError("reference distance d0 must be positive")
        if self.reference_gain_db > 0.0:
            raise ValueError("reference gain must be a loss (<= 0 dB)")
        if not (self.exponent > 0.0):
            raise ValueError("path loss exponent must be positive")
        if self.shadowing_sigma_db < 0.0:
            raise ValueError("shadowing sigma must be >= 0 dB")


def _pair_shadowing_db(model: PathLossModel, a, b) -> float:
    # One reproducible draw per unordered pair: hash the canonically ordered
    # endpoint coordinates together with the model seed.
    pa, pb = sorted([(float(a[0]), float(a[1])), (float(b[0]), float(b[1]))])
    payload = struct.pack("<q4d", int(model.seed), *pa, *pb)
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "little"))
    return float(rng.normal(0.0, model.shadowing_sigma_db))


def gain(model: PathLossModel, a: Sequence[float], b: Sequence[float]) -> float:
    """Linear channel gain between two positions (dimensionless, in (0, 1])."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if not all(math.isfinite(v) for v in (ax, ay, bx, by)):
        raise ValueError("positions must be finite")
    d = math.hypot(bx - ax, by - ay)
    d_eff = max(d, model.reference_distance_d0)
    gain_db = model.reference_gain_db - 10.0 * model.exponent * math.log10(
        d_eff / model.reference_distance_d0
    )
    if model.shadowing_sigma_db > 0.0:
        gain_db += _pair_shadowing_db(model, (ax, ay), (bx, by))
    return float(10.0 ** (gain_db / 10.0))


def build_gain_matrix(positions, model: PathLossModel) -> np.ndarray:
    """All-pairs gain matrix; entry [i, j] is the gain from node i to node j.

    The diagonal is unused and set to zero.  The matrix is symmetric because
    the path (and any shadowing draw) is a property of the unordered pair.
    """
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 2:
        raise ValueError("positions must be an (M, 2) array")
    m = pos.shape[0]
    if m < 2:
        raise ValueError("need at least 2 nodes")
    h = np.zeros((m, m), dtype=float)
    for i in range(m):
        for j in range(i + 1, m):
            g = gain(model, pos[i], pos[j])
            h[i, j] = g
            h[j, i] = g
    return h


def sinr(i: int, j: int, powers_mw, gains: np.ndarray, n0_mw: float) -> float:
    """Signal-to-interference-plus-noise ratio of the link i -> j.

    Every node other than the sender i and the receiver j contributes
    interference at its own transmit power:

        SINR_ij = H_ij p_i / (sum_{t != i, j} H_tj p_t + N0)
    """
    p = np.asarray(powers_mw, dtype=float)
    if i == j:
        raise ValueError("sender and receiver must differ")
    m = p.shape[0]
    if not (0 <= i < m and 0 <= j < m):
        raise ValueError("node index out of range")
    if np.any(p < 0.0) or not np.all(np.isfinite(p)):
        raise ValueError("powers must be finite and non-negative")
    if not (n0_mw > 0.0):
        raise ValueError("noise floor must be positive")
    mask = np.ones(m, dtype=bool)
    mask[i] = False
    mask[j] = False
    interference = float(gains[mask, j] @ p[mask])
    return float(gains[i, j] * p[i] / (interference + n0_mw))


def ber(sinr_value):
    """Bit error rate 0.5 * (1 - sqrt(sinr / (1 + sinr))).

    Evaluated in the algebraically equivalent form
    ``0.5 / ((1 + sinr) * (1 + sqrt(sinr / (1 + sinr))))`` which stays
    accurate to full relative precision for large SINR, where the textbook
    form loses all significant digits to cancellation.
    """
    s = np.asarray(sinr_value, dtype=float)
    if np.any(s < 0.0):
        raise ValueError("SINR must be non-negative")
    out = 0.5 * (1.0 / (1.0 + s)) / (1.0 + np.sqrt(s / (1.0 + s)))
    return float(out) if np.isscalar(sinr_value) or np.ndim(sinr_value) == 0 else out


def prr(ber_value, f_bytes: int):
    """Packet reception ratio (1 - ber) ** (8 * f_bytes) for an f-byte payload."""
    b = np.asarray(ber_value, dtype=float)
    if np.any(b < 0.0) or np.any(b > 1.0):
        raise ValueError("BER must lie in [0, 1]")
    if int(f_bytes) != f_bytes or f_bytes < 1:
        raise ValueError("payload size must be a positive integer byte count")
    out = (1.0 - b) ** (8 * int(f_bytes))
    return float(out) if np.ndim(ber_value) == 0 else out


def link_prr(i: int, j: int, powers_mw, gains: np.ndarray, n0_mw: float, f_bytes: int) -> float:
    """Analytic packet reception ratio of the link i -> j at the given powers."""
    return prr(ber(sinr(i, j, powers_mw, gains, n0_mw)), f_bytes)


def sinr_for_prr(target_prr: float, f_bytes: int) -> float:
    """Invert the BER/PRR chain: the SINR at which the PRR equals the target.

    Returns 0 when any non-negative SINR already meets the target.
    """
    if not (0.0 < target_prr <= 1.0):
        raise ValueError("target PRR must lie in (0, 1]")
    b = 1.0 - target_prr ** (1.0 / (8 * int(f_bytes)))
    if b >= 0.5:
        return 0.0
    x = 1.0 - 2.0 * b  # equals sqrt(S / (1 + S)) at the threshold
    return float(x * x / (1.0 - x * x))


def _check_interference_mode(mode: str):
    if mode not in INTERFERENCE_MODES:
        raise ValueError(f"interference mode must be one of {INTERFERENCE_MODES}, got {mode!r}")


def interference_at(j: int, exclude: int, powers_mw, gains: np.ndarray, mode: str) -> float:
    """Interference power seen at receiver j, excluding the sender ``exclude``.

    Mode "full" models every other node as a concurrent transmitter at its
    current power; mode "none" models a clear channel (only the sender is on
    the air, as under a listen-before-talk MAC).
    """
    _check_interference_mode(mode)
    if mode == "none":
        return 0.0
    p = np.asarray(powers_mw, dtype=float)
    total = float(gains[:, j] @ p)  # diagonal gain is zero, so t == j drops out
    return max(total - float(gains[exclude, j] * p[exclude]), 0.0)


def prr_matrix(powers_mw, gains: np.ndarray, n0_mw: float, f_bytes: int,
               interference: str = "none") -> np.ndarray:
    """All-pairs analytic PRR; entry [i, j] is for the directed link i -> j.

    The diagonal is set to zero.
    """
    _check_interference_mode(interference)
    p = np.asarray(powers_mw, dtype=float)
    m = p.shape[0]
    received = gains * p[:, None]  # [t, j] = H_tj p_t
    if interference == "full":
        col_total = received.sum(axis=0)
        interf = np.maximum(col_total[None, :] - received, 0.0)
    else:
        interf = np.zeros((m, m))
    s = received / (interf + n0_mw)
    out = prr(ber(s), f_bytes)
    np.fill_diagonal(out, 0.0)
    return out
