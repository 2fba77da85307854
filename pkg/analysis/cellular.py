"""
Cellular Drop Module
Random user placement in a disk and the ON probabilities it induces

Model:
- Users uniform over a disk of radius R (radius R*sqrt(u), angle 2*pi*v)
- Mean received power P = tx_power * (max(r, r0) / r0)^(-exponent)
- Rayleigh fading: received power exponential with mean P, so
  p_i = P(received power >= threshold) = exp(-threshold / P)

Includes:
- CellularScenario (JSON round-trip)
- Drop generation on its own random sub-stream
- Proportional fair comparison of polling and extended candidate sets on a drop
- Noise tolerance for comparing the two throughput CDFs
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from core.model import ChannelParams, FrameConfig
from strategy.candidates import GreedyCandidateGenerator
from strategy.policy_runner import PolicySpec, run_policy
from utils.rng import CELLULAR_CHANNEL_STREAM, DROP_STREAM, make_rng

logger = logging.getLogger(__name__)

DEFAULT_N_USERS = 30
DEFAULT_CELL_RADIUS = 1000.0
DEFAULT_TX_POWER = 1.0
DEFAULT_PATH_LOSS_EXPONENT = 4.0
DEFAULT_THRESHOLD_DBM = 10.0
DEFAULT_REFERENCE_DISTANCE = 1.0
# CDF comparisons allow this many half-widths of Monte-Carlo noise
DOMINANCE_SIGMAS = 3.0


def dbm_to_watts(dbm: float) -> float:
    """10 dBm -> 0.01 W"""
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class CellularScenario:
    """One drop: constants of the cell and the user positions in meters"""
    n_users: int = DEFAULT_N_USERS
    cell_radius: float = DEFAULT_CELL_RADIUS
    tx_power: float = DEFAULT_TX_POWER
    path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT
    fade_margin_threshold: float = dbm_to_watts(DEFAULT_THRESHOLD_DBM)
    reference_distance: float = DEFAULT_REFERENCE_DISTANCE
    positions: Tuple[Tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        positions = tuple((float(x), float(y)) for x, y in self.positions)
        object.__setattr__(self, 'positions', positions)

        if self.n_users < 1:
            raise ValueError(f"n_users must be positive, got {self.n_users}")
        if self.cell_radius <= 0 or self.tx_power <= 0 or self.reference_distance <= 0:
            raise ValueError("cell_radius, tx_power and reference_distance must be positive")
        if self.path_loss_exponent <= 0:
            raise ValueError(f"path_loss_exponent must be positive, got {self.path_loss_exponent}")
        if self.fade_margin_threshold < 0:
            raise ValueError(f"Threshold must be non-negative, got {self.fade_margin_threshold}")
        if positions and len(positions) != self.n_users:
            raise ValueError(f"{len(positions)} positions for n_users={self.n_users}")
        for x, y in positions:
            if math.hypot(x, y) > self.cell_radius * (1 + 1e-12):
                raise ValueError(f"Position ({x:.1f}, {y:.1f}) lies outside the cell radius")

    @property
    def distances(self) -> np.ndarray:
        if not self.positions:
            raise ValueError("Scenario has no user positions")
        xy = np.asarray(self.positions, dtype=float)
        return np.hypot(xy[:, 0], xy[:, 1])

    def to_json(self, path: Optional[Union[str, Path]] = None) -> str:
        data = asdict(self)
        data['positions'] = [list(p) for p in self.positions]
        text = json.dumps(data, indent=2)
        if path is not None:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(text)
        return text

    @classmethod
    def from_json(cls, source: Union[str, Path]) -> 'CellularScenario':
        """Parse a JSON string or read it from a file path"""
        text = str(source)
        if not text.lstrip().startswith('{'):
            text = Path(source).read_text()
        data = json.loads(text)
        data['positions'] = tuple(tuple(p) for p in data.get('positions', ()))
        return cls(**data)

    def __str__(self):
        return (f"CellularScenario(N={self.n_users}, R={self.cell_radius:g} m, "
                f"P={self.tx_power:g} W, alpha={self.path_loss_exponent:g}, "
                f"threshold={self.fade_margin_threshold:.3g} W, r0={self.reference_distance:g} m)")


def sample_disk_positions(n: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """n points uniform over the disk, shape (n, 2)"""
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def generate_cellular_drop(seed: int,
                           n_users: int = DEFAULT_N_USERS,
                           cell_radius: float = DEFAULT_CELL_RADIUS,
                           tx_power: float = DEFAULT_TX_POWER,
                           path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT,
                           threshold_dbm: float = DEFAULT_THRESHOLD_DBM,
                           reference_distance: float = DEFAULT_REFERENCE_DISTANCE,
                           drop_index: int = 0) -> CellularScenario:
    """Drop n_users uniformly in the cell; same (seed, drop_index) gives the same drop"""
    rng = make_rng(seed, DROP_STREAM, drop_index)
    xy = sample_disk_positions(n_users, cell_radius, rng)
    scenario = CellularScenario(
        n_users=n_users,
        cell_radius=cell_radius,
        tx_power=tx_power,
        path_loss_exponent=path_loss_exponent,
        fade_margin_threshold=dbm_to_watts(threshold_dbm),
        reference_distance=reference_distance,
        positions=tuple(map(tuple, xy)),
    )
    logger.debug(f"Generated drop (seed={seed}): {scenario}")
    return scenario


def mean_received_power(scenario: CellularScenario) -> np.ndarray:
    """Path-loss mean power per user, distance clamped at the reference distance"""
    r = np.maximum(scenario.distances, scenario.reference_distance)
    return scenario.tx_power * (r / scenario.reference_distance) ** (-scenario.path_loss_exponent)


def cellular_on_probabilities(scenario: CellularScenario) -> ChannelParams:
    """p_i = exp(-threshold / mean received power)"""
    power = mean_received_power(scenario)
    p = np.exp(-scenario.fade_margin_threshold / power)
    return ChannelParams(tuple(float(x) for x in p))


def run_cellular_comparison(scenario: CellularScenario,
                            frame: FrameConfig,
                            n_frames: int,
                            seed: int,
                            ewma_weight: float,
                            floor: float,
                            refresh_every: int,
                            drop_index: int = 0) -> Dict[str, object]:
    """
    Proportional fair on one drop with polling and with extended candidates

    Both runs draw the channel from the same sub-stream of the seed, so they
    see the same channel realisations.

    Returns:
        {'polling': PolicyRunResult, 'extended': PolicyRunResult}
    """
    channel = cellular_on_probabilities(scenario)
    spec = PolicySpec.proportional_fair(ewma_weight, floor)

    results = {}
    for model in ('polling', 'extended'):
        generator = GreedyCandidateGenerator(channel, frame, model=model, refresh_every=refresh_every)
        results[model] = run_policy(spec, channel, frame, n_frames=n_frames, seed=seed,
                                    generator=generator,
                                    stream=(CELLULAR_CHANNEL_STREAM, drop_index))
    return results


def comparison_tolerance(results: Iterable[Dict[str, Any]],
                         sigmas: float = DOMINANCE_SIGMAS) -> float:
    """`sigmas` times the widest per-user 95% half-width over all drops and models"""
    widest = 0.0
    for by_model in results:
        for result in by_model.values():
            widest = max(widest, float(np.max(result.ci_halfwidth)))
    return sigmas * widest
