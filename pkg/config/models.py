"""
Experiment Configuration Models
All configuration dataclasses in one place
"""

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Type, TypeVar

from core.model import ChannelParams, FrameConfig, RateVector

MODELS = ('polling', 'extended')
POLICIES = ('maxweight', 'pf')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')

T = TypeVar('T')


class ConfigError(ValueError):
    """Invalid or unknown configuration value"""


def _section(cls: Type[T], data: Optional[Dict[str, Any]], name: str) -> T:
    """Build a section dataclass, rejecting keys it does not define"""
    data = data or {}
    if not isinstance(data, dict):
        raise ConfigError(f"Section '{name}' must be a mapping, got {type(data).__name__}")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Unknown key(s) {unknown} in section '{name}'")
    return cls(**data)


@dataclass
class ChannelSettings:
    """Per-user ON probabilities"""
    on_prob: List[float] = field(default_factory=lambda: [0.3, 0.2])

    @property
    def n_users(self) -> int:
        return len(self.on_prob)

    def to_dict(self) -> Dict[str, Any]:
        return {'on_prob': list(self.on_prob)}


@dataclass
class FrameSettings:
    """Frame length in slots"""
    slots_per_frame: int = 4

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ScheduleCaps:
    """Schedule enumeration limits"""
    max_len: Optional[int] = None          # polling schedules; None = N
    max_group_size: int = 2
    polling_user_cap: int = 8
    group_user_cap: int = 6
    allow_large: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class PolicyParameters:
    """Scheduler selection and parameters"""
    policy: str = 'maxweight'
    target: Optional[List[float]] = field(default_factory=lambda: [0.6, 0.5])  # packets/frame
    ewma_weight: float = 0.01
    floor: float = 1e-6
    sample_every: int = 100

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['target'] = None if self.target is None else list(self.target)
        return data


@dataclass
class SimulationParameters:
    """Monte-Carlo run length and seed"""
    frames: int = 100000
    seed: int = 2024
    replications: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class CellularParameters:
    """Cellular drop constants"""
    n_users: int = 30
    cell_radius: float = 1000.0            # meters
    tx_power: float = 1.0                  # watts
    path_loss_exponent: float = 4.0
    threshold_dbm: float = 10.0            # received-power decode threshold
    reference_distance: float = 1.0        # meters
    slots_per_frame: int = 30
    drops: int = 1
    frames: int = 20000
    refresh_every: int = 10

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class OutputSettings:
    """Where results and logs go"""
    out_dir: str = "results"
    log_dir: Optional[str] = None
    log_level: str = "INFO"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ExperimentConfig:
    """
    Complete configuration of one experiment run

    to_dict() output re-creates the same config through from_dict().
    """
    model: str = 'extended'
    channel: ChannelSettings = field(default_factory=ChannelSettings)
    frame: FrameSettings = field(default_factory=FrameSettings)
    caps: ScheduleCaps = field(default_factory=ScheduleCaps)
    policy: PolicyParameters = field(default_factory=PolicyParameters)
    simulation: SimulationParameters = field(default_factory=SimulationParameters)
    cellular: CellularParameters = field(default_factory=CellularParameters)
    output: OutputSettings = field(default_factory=OutputSettings)

    _SECTIONS = {
        'channel': ChannelSettings,
        'frame': FrameSettings,
        'caps': ScheduleCaps,
        'policy': PolicyParameters,
        'simulation': SimulationParameters,
        'cellular': CellularParameters,
        'output': OutputSettings,
    }

    def to_dict(self) -> Dict[str, Any]:
        """Convert to nested dictionary"""
        return {
            'model': self.model,
            'channel': self.channel.to_dict(),
            'frame': self.frame.to_dict(),
            'caps': self.caps.to_dict(),
            'policy': self.policy.to_dict(),
            'simulation': self.simulation.to_dict(),
            'cellular': self.cellular.to_dict(),
            'output': self.output.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        """Create from nested dictionary; unknown keys raise ConfigError"""
        if not isinstance(data, dict):
            raise ConfigError(f"Configuration must be a mapping, got {type(data).__name__}")
        unknown = sorted(set(data) - set(cls._SECTIONS) - {'model'})
        if unknown:
            raise ConfigError(f"Unknown top-level key(s) {unknown}")

        sections = {name: _section(section_cls, data.get(name), name)
                    for name, section_cls in cls._SECTIONS.items()}
        return cls(model=data.get('model', 'extended'), **sections)

    def validate(self, require_target: bool = False) -> 'ExperimentConfig':
        """
        Check every value against the module guards

        Args:
            require_target: The command needs a max-weight target of length N
        """
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got '{self.model}'")

        n = self.channel.n_users
        if n < 1:
            raise ConfigError("channel.on_prob needs at least one probability")
        for i, p in enumerate(self.channel.on_prob):
            if not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
                raise ConfigError(f"channel.on_prob[{i}] must be in [0, 1], got {p}")

        if int(self.frame.slots_per_frame) != self.frame.slots_per_frame or self.frame.slots_per_frame < 1:
            raise ConfigError(f"frame.slots_per_frame must be >= 1, got {self.frame.slots_per_frame}")

        caps = self.caps
        if caps.max_len is not None and not 0 <= caps.max_len <= n:
            raise ConfigError(f"caps.max_len must be in [0, {n}], got {caps.max_len}")
        if not 1 <= caps.max_group_size <= n:
            raise ConfigError(f"caps.max_group_size must be in [1, {n}], got {caps.max_group_size}")
        if caps.polling_user_cap < 1 or caps.group_user_cap < 1:
            raise ConfigError("Enumeration user caps must be >= 1")

        policy = self.policy
        if policy.policy not in POLICIES:
            raise ConfigError(f"policy.policy must be one of {POLICIES}, got '{policy.policy}'")
        if not 0.0 < policy.ewma_weight <= 1.0:
            raise ConfigError(f"policy.ewma_weight must be in (0, 1], got {policy.ewma_weight}")
        if policy.floor <= 0.0:
            raise ConfigError(f"policy.floor must be positive, got {policy.floor}")
        if policy.sample_every < 1:
            raise ConfigError(f"policy.sample_every must be >= 1, got {policy.sample_every}")
        if policy.target is not None:
            for i, d in enumerate(policy.target):
                if not 0.0 <= d <= 1.0:
                    raise ConfigError(f"policy.target[{i}] must be in [0, 1], got {d}")
        if require_target and policy.policy == 'maxweight':
            if policy.target is None or len(policy.target) != n:
                raise ConfigError(f"policy.target must have N={n} entries for max-weight")

        sim = self.simulation
        if sim.frames < 1:
            raise ConfigError(f"simulation.frames must be >= 1, got {sim.frames}")
        if sim.seed < 0:
            raise ConfigError(f"simulation.seed must be non-negative, got {sim.seed}")
        if sim.replications < 1:
            raise ConfigError(f"simulation.replications must be >= 1, got {sim.replications}")

        cell = self.cellular
        if cell.n_users < 1 or cell.drops < 1 or cell.frames < 1 or cell.slots_per_frame < 1:
            raise ConfigError("cellular n_users, drops, frames and slots_per_frame must be >= 1")
        if cell.cell_radius <= 0 or cell.tx_power <= 0 or cell.reference_distance <= 0:
            raise ConfigError("cellular radius, tx_power and reference_distance must be positive")
        if cell.path_loss_exponent <= 0:
            raise ConfigError(f"cellular.path_loss_exponent must be positive, got {cell.path_loss_exponent}")
        if cell.refresh_every < 1:
            raise ConfigError(f"cellular.refresh_every must be >= 1, got {cell.refresh_every}")

        if str(self.output.log_level).upper() not in LOG_LEVELS:
            raise ConfigError(f"output.log_level must be one of {LOG_LEVELS}, got '{self.output.log_level}'")
        return self

    # ========== DOMAIN VIEWS ==========

    def channel_params(self) -> ChannelParams:
        return ChannelParams(tuple(self.channel.on_prob))

    def frame_config(self) -> FrameConfig:
        return FrameConfig(self.frame.slots_per_frame)

    def target_vector(self) -> Optional[RateVector]:
        if self.policy.target is None:
            return None
        return RateVector(tuple(self.policy.target))
