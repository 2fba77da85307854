"""
Default Configuration Values
Single source of truth for all defaults

Two-user runs use p = (0.3, 0.2), tau = 4 and the target (0.6, 0.5) packets
per frame; the cellular drop uses 30 users in a 1 km cell, 1 W, path-loss
exponent 4, a 10 dBm decode threshold and 30-slot frames.
"""

from config.models import (
    CellularParameters,
    ChannelSettings,
    ExperimentConfig,
    FrameSettings,
    OutputSettings,
    PolicyParameters,
    ScheduleCaps,
    SimulationParameters,
)

DEFAULT_CONFIG_FILE = "asset/config/experiment.yaml"

# Environment variable -> dotted config key
ENV_OVERRIDES = {
    'RATEREGION_SEED': ('simulation.seed', int),
    'RATEREGION_FRAMES': ('simulation.frames', int),
    'RATEREGION_OUT_DIR': ('output.out_dir', str),
    'RATEREGION_LOG_LEVEL': ('output.log_level', str),
}


def get_default_experiment_config() -> ExperimentConfig:
    """Fresh default configuration"""
    return ExperimentConfig(
        model='extended',
        channel=ChannelSettings(on_prob=[0.3, 0.2]),
        frame=FrameSettings(slots_per_frame=4),
        caps=ScheduleCaps(
            max_len=None,
            max_group_size=2,
            polling_user_cap=8,
            group_user_cap=6,
            allow_large=False,
        ),
        policy=PolicyParameters(
            policy='maxweight',
            target=[0.6, 0.5],
            ewma_weight=0.01,
            floor=1e-6,
            sample_every=100,
        ),
        simulation=SimulationParameters(frames=100000, seed=2024, replications=1),
        cellular=CellularParameters(
            n_users=30,
            cell_radius=1000.0,
            tx_power=1.0,
            path_loss_exponent=4.0,
            threshold_dbm=10.0,
            reference_distance=1.0,
            slots_per_frame=30,
            drops=1,
            frames=20000,
            refresh_every=10,
        ),
        output=OutputSettings(out_dir="results", log_dir=None, log_level="INFO"),
    )
