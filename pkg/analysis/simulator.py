"""
Frame Simulator Module
Monte-Carlo counterpart of the expected rate computations

Includes:
- I.i.d. ON/OFF channel sampling (per frame or in batches)
- Empirical per-user throughput of a static schedule with 95% half-widths
- Independent replications on counter-based sub-streams
- Monte-Carlo estimate of the expected idle slots of a polled set

Example:
    >>> result = simulate_schedule(Schedule.parse("1"), ChannelParams((0.3,)), FrameConfig(4),
    ...                            n_frames=100000, seed=7)
    >>> print(result)
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
import pandas as pd

from core.frame_engine import ChannelMatrix, execute_frames_batch
from core.model import ChannelParams, FrameConfig, RateVector, Schedule, require_valid
from utils.rng import CHANNEL_STREAM, IDLE_STREAM, REPLICATION_BASE, make_rng

logger = logging.getLogger(__name__)

# Frames sampled per batch in simulate_schedule
DEFAULT_CHUNK_FRAMES = 20000
Z_95 = 1.96


def binomial_halfwidth(rate: np.ndarray, n_frames: int) -> np.ndarray:
    """95% half-width of a mean of n_frames Bernoulli indicators"""
    rate = np.asarray(rate, dtype=float)
    return Z_95 * np.sqrt(rate * (1.0 - rate) / n_frames)


def sample_channel_matrix(channel: ChannelParams,
                          frame: FrameConfig,
                          rng: np.random.Generator) -> ChannelMatrix:
    """One frame of independent ON/OFF states, user i ON with probability p_i"""
    draws = rng.random((channel.n_users, frame.slots_per_frame))
    return ChannelMatrix(draws < channel.p[:, None])


def sample_channel_batch(channel: ChannelParams,
                         frame: FrameConfig,
                         n_frames: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Boolean array (frames, users, slots)"""
    draws = rng.random((n_frames, channel.n_users, frame.slots_per_frame))
    return draws < channel.p[None, :, None]


@dataclass
class SimulationResult:
    """Empirical throughput (packets per frame) and its 95% half-widths"""
    per_user_throughput: RateVector
    frames: int
    ci_halfwidth: np.ndarray
    successes: np.ndarray
    trajectory: Optional[pd.DataFrame] = None
    label: str = ""
    extras: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_counts(cls, successes: np.ndarray, frames: int, **kwargs) -> 'SimulationResult':
        successes = np.asarray(successes, dtype=np.int64)
        rates = successes / frames
        return cls(RateVector.from_array(rates), frames, binomial_halfwidth(rates, frames),
                   successes, **kwargs)

    def agrees_with(self, expected: RateVector, sigmas: float = 3.0) -> bool:
        """Every user within `sigmas` half-widths of the expected rate"""
        gap = np.abs(self.per_user_throughput.as_array() - expected.as_array())
        # Degenerate users (rate 0 or 1) have zero width
        return bool(np.all(gap <= sigmas * self.ci_halfwidth + 1e-12))

    def to_dict(self) -> dict:
        return {
            'label': self.label,
            'frames': self.frames,
            'throughput': list(self.per_user_throughput.rates),
            'ci_halfwidth': self.ci_halfwidth.tolist(),
            'successes': self.successes.tolist(),
            **self.extras,
        }

    def __str__(self):
        parts = ", ".join(f"{r:.4f}±{h:.4f}" for r, h in
                          zip(self.per_user_throughput.rates, self.ci_halfwidth))
        name = f" {self.label}" if self.label else ""
        return f"SimulationResult{name} ({self.frames} frames): ({parts})"


def _count_successes(schedule: Schedule,
                     channel: ChannelParams,
                     frame: FrameConfig,
                     n_frames: int,
                     rng: np.random.Generator,
                     chunk_frames: int) -> np.ndarray:
    counts = np.zeros(channel.n_users, dtype=np.int64)
    remaining = n_frames
    while remaining > 0:
        size = min(chunk_frames, remaining)
        on = sample_channel_batch(channel, frame, size, rng)
        counts += execute_frames_batch(schedule, on).sum(axis=0)
        remaining -= size
    return counts


def simulate_schedule(schedule: Schedule,
                      channel: ChannelParams,
                      frame: FrameConfig,
                      n_frames: int,
                      seed: int,
                      stream: int = CHANNEL_STREAM,
                      chunk_frames: int = DEFAULT_CHUNK_FRAMES) -> SimulationResult:
    """
    Empirical throughput of a static schedule over n_frames i.i.d. frames

    Same (seed, stream) gives bit-identical results.
    """
    require_valid(schedule, channel)
    if n_frames < 1:
        raise ValueError(f"n_frames must be >= 1, got {n_frames}")

    counts = _count_successes(schedule, channel, frame, n_frames, make_rng(seed, stream), chunk_frames)
    result = SimulationResult.from_counts(counts, n_frames, label=schedule.canonical())
    logger.debug(f"Simulated {result}")
    return result


def simulate_replications(schedule: Schedule,
                          channel: ChannelParams,
                          frame: FrameConfig,
                          n_frames: int,
                          seed: int,
                          replications: int,
                          max_workers: int = 1) -> SimulationResult:
    """
    Independent replications aggregated by summing success counts

    Replication r draws from sub-stream REPLICATION_BASE + r, so the total does
    not depend on max_workers or completion order.
    """
    require_valid(schedule, channel)
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    if n_frames < 1:
        raise ValueError(f"n_frames must be >= 1, got {n_frames}")

    def run(r: int) -> np.ndarray:
        rng = make_rng(seed, REPLICATION_BASE + r)
        return _count_successes(schedule, channel, frame, n_frames, rng, DEFAULT_CHUNK_FRAMES)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            per_replication = list(pool.map(run, range(replications)))
    else:
        per_replication = [run(r) for r in range(replications)]

    total = np.sum(per_replication, axis=0)
    result = SimulationResult.from_counts(
        total, n_frames * replications, label=schedule.canonical(),
        extras={'replications': replications})
    logger.info(f"{replications} replications of '{schedule}': {result}")
    return result


def estimate_idle_slots(subset: Iterable[int],
                        channel: ChannelParams,
                        frame: FrameConfig,
                        n_frames: int,
                        seed: int) -> Tuple[float, float]:
    """
    Monte-Carlo E[I_S]: slots left after polling every user of `subset` to success

    Returns:
        (mean, 95% half-width)
    """
    if n_frames < 2:
        raise ValueError(f"n_frames must be >= 2, got {n_frames}")
    users = sorted(set(subset))
    tau = frame.slots_per_frame
    rng = make_rng(seed, IDLE_STREAM)

    busy = np.zeros(n_frames)
    for user in users:
        p = channel.on_prob[user]
        if p == 0.0:
            busy[:] = np.inf
            break
        busy += rng.geometric(p, size=n_frames)

    idle = np.clip(tau - busy, 0.0, None)
    mean = float(idle.mean())
    halfwidth = float(Z_95 * idle.std(ddof=1) / np.sqrt(n_frames))
    return mean, halfwidth
