"""
Main Application - Multi-access Rate Region Toolkit
Command-line front end for rate regions, admission control and scheduling runs

Subcommands:
- region        corner points of the polling / extended rate region
- admit         accept or reject a throughput target
- schedule-run  max-weight or proportional fair over the enumerated schedules
- cellular      proportional fair on random cellular drops, polling vs extended

Exit codes: 0 success/accept, 1 reject/infeasible target, 2 configuration or other error
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Ensure project root is in path (works even when imported from subdirectories)
project_root = Path(__file__).parent.resolve()
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

import pandas as pd  # noqa: E402

from analysis.cellular import (  # noqa: E402
    cellular_on_probabilities,
    comparison_tolerance,
    generate_cellular_drop,
    run_cellular_comparison,
)
from analysis.simulator import simulate_replications  # noqa: E402
from analysis.statistics import (  # noqa: E402
    cdf_dataframe,
    cdf_dominates,
    decile_values,
    offline_pf_optimum,
)
from config import ConfigError, ExperimentConfig, load_experiment_config  # noqa: E402
from core.enumeration import (  # noqa: E402
    EnumerationCapError,
    enumerate_group_schedules,
    enumerate_polling_schedules,
    group_schedule_count,
    polling_face_count,
    polling_schedule_count,
)
from core.model import FrameConfig, RateVector, Schedule  # noqa: E402
from models.rate_region import (  # noqa: E402
    LPSolverError,
    RateRegion,
    build_rate_region,
    export_region_csv,
    pareto_prune,
    region_contains,
)
from risk.admission_control import AdmissionController  # noqa: E402
from strategy.policy_runner import InfeasibleTargetError, PolicySpec, run_policy  # noqa: E402
from strategy.selection import CandidateSet  # noqa: E402
from utils.csv_export import write_json, write_table  # noqa: E402
from utils.logger import setup_logging  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_ERROR = 2


# ========== ARGUMENT PARSING ==========

def parse_vector(text: str) -> List[float]:
    """'0.6,0.5' -> [0.6, 0.5]"""
    try:
        values = [float(x) for x in text.replace(' ', '').split(',') if x != '']
    except ValueError as e:
        raise ConfigError(f"Malformed vector '{text}': {e}") from e
    if not values:
        raise ConfigError(f"Malformed vector '{text}': no values")
    return values


def read_vector_file(path: str) -> List[float]:
    """JSON list (or {"rates": [...]}) or a single comma-separated line"""
    text = Path(path).read_text().strip()
    if text.startswith('[') or text.startswith('{'):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get('rates')
        if not isinstance(data, list):
            raise ConfigError(f"Rates file {path} must hold a list")
        return [float(x) for x in data]
    return parse_vector(text.splitlines()[0])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='YAML or JSON config file (a run summary also works)')
    common.add_argument('--model', choices=['polling', 'extended'], help='Contention model')
    common.add_argument('--seed', type=int, help='Run seed')
    common.add_argument('--frames', type=int, help='Frames to simulate')
    common.add_argument('--out', help='Output directory')
    common.add_argument('--log-level', help='Console log level (DEBUG, INFO, ...)')

    channel = argparse.ArgumentParser(add_help=False)
    channel.add_argument('--probabilities', help="ON probabilities, e.g. '0.3,0.2'")
    channel.add_argument('--slots', type=int, help='Slots per frame')
    channel.add_argument('--max-group-size', type=int, help='Largest contention group')
    channel.add_argument('--max-len', type=int, help='Longest polling schedule')
    channel.add_argument('--allow-large', action='store_true', default=None,
                         help='Lift the enumeration user caps')

    parser = argparse.ArgumentParser(
        prog='rate-region',
        description='Rate regions, admission control and scheduling for deadline-constrained '
                    'traffic over ON/OFF wireless channels')
    sub = parser.add_subparsers(dest='command', required=True)

    region = sub.add_parser('region', parents=[common, channel], help='Compute rate region corner points')
    region.add_argument('--prune', action='store_true', help='Also write the Pareto-pruned corner points')
    region.add_argument('--simulate', action='store_true',
                        help='Cross-check every corner point by Monte-Carlo replications')
    region.add_argument('--replications', type=int, help='Independent replications per corner point')

    admit = sub.add_parser('admit', parents=[common, channel], help='Admission control for a target')
    rates = admit.add_mutually_exclusive_group()
    rates.add_argument('--rates', help="Target packets/frame, e.g. '0.6,0.5'")
    rates.add_argument('--rates-file', help='File holding the target vector')
    admit.add_argument('--exhaustive', action='store_true',
                       help='Polling model: check every subset condition')

    run = sub.add_parser('schedule-run', parents=[common, channel], help='Run a per-frame scheduler')
    run.add_argument('--policy', choices=['maxweight', 'pf'], help='Scheduling policy')
    run.add_argument('--target', help="Max-weight target packets/frame, e.g. '0.6,0.5'")

    cellular = sub.add_parser('cellular', parents=[common], help='Cellular drop experiment')
    cellular.add_argument('--drops', type=int, help='Independent drops')
    cellular.add_argument('--threshold-dbm', type=float, help='Received-power decode threshold')

    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """CLI flags as dotted config keys (None = not given)"""
    get = lambda name: getattr(args, name, None)  # noqa: E731

    overrides: Dict[str, Any] = {
        'model': get('model'),
        'simulation.seed': get('seed'),
        'simulation.replications': get('replications'),
        'output.out_dir': get('out'),
        'output.log_level': get('log_level'),
        'frame.slots_per_frame': get('slots'),
        'caps.max_group_size': get('max_group_size'),
        'caps.max_len': get('max_len'),
        'caps.allow_large': get('allow_large'),
        'policy.policy': get('policy'),
        'cellular.drops': get('drops'),
        'cellular.threshold_dbm': get('threshold_dbm'),
    }
    if get('probabilities'):
        overrides['channel.on_prob'] = parse_vector(args.probabilities)
    if get('target'):
        overrides['policy.target'] = parse_vector(args.target)
    if args.command == 'cellular':
        overrides['cellular.frames'] = get('frames')
    else:
        overrides['simulation.frames'] = get('frames')
    return overrides


# ========== SHARED HELPERS ==========

def enumerate_for(config: ExperimentConfig, model: str) -> List[Schedule]:
    n = config.channel.n_users
    caps = config.caps
    if model == 'polling':
        max_len = n if caps.max_len is None else caps.max_len
        return enumerate_polling_schedules(n, max_len, user_cap=caps.polling_user_cap,
                                           allow_large=caps.allow_large)
    return enumerate_group_schedules(n, caps.max_group_size, user_cap=caps.group_user_cap,
                                     allow_large=caps.allow_large)


def region_for(config: ExperimentConfig, model: str) -> RateRegion:
    return build_rate_region(enumerate_for(config, model), config.channel_params(), config.frame_config())


def simulate_corner_points(region: RateRegion, config: ExperimentConfig) -> List[Dict[str, Any]]:
    """Replicated simulation of every corner point against its expected rate (3 half-widths)"""
    sim = config.simulation
    checks = []
    for corner in region.corner_points:
        if not corner.schedule.groups:
            continue
        result = simulate_replications(corner.schedule, region.channel, region.frame,
                                       sim.frames, sim.seed, sim.replications)
        agrees = result.agrees_with(corner.rates)
        if not agrees:
            logger.warning(f"Simulation disagrees with expected rate: {corner} vs {result}")
        checks.append({**result.to_dict(), 'expected': list(corner.rates.rates), 'agrees': agrees})
    logger.info(f"Simulated {len(checks)} corner points, "
                f"{sim.replications} replication(s) of {sim.frames} frames each")
    return checks


def out_dir(config: ExperimentConfig) -> Path:
    path = Path(config.output.out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ========== COMMANDS ==========

def cmd_region(config: ExperimentConfig, prune: bool = False, simulate: bool = False) -> int:
    """Corner-point CSV of the configured model plus a summary JSON"""
    n = config.channel.n_users
    logger.info("=" * 60)
    logger.info(f"RATE REGION - {config.model} model, N={n}, tau={config.frame.slots_per_frame}")
    logger.info("=" * 60)

    schedules = enumerate_for(config, config.model)
    region = build_rate_region(schedules, config.channel_params(), config.frame_config())
    target_dir = out_dir(config)
    export_region_csv(region, target_dir / f"region_{config.model}.csv")
    if prune:
        export_region_csv(pareto_prune(region), target_dir / f"region_{config.model}_pruned.csv")

    summary: Dict[str, Any] = {
        'config': config.to_dict(),
        'model': config.model,
        'n_schedules': len(schedules),
        'n_corner_points': region.n_points,
        'census': {
            'polling_schedules': polling_schedule_count(n, n),
            'group_schedules': group_schedule_count(n, config.caps.max_group_size),
        },
        'reported_counts': {
            'polling_corner_points': polling_schedule_count(n, n),
            'polling_faces': polling_face_count(n),
        },
    }

    if config.model == 'extended':
        polling = region_for(config, 'polling')
        contains = region_contains(region, polling)
        outside = region_contains(polling, region).outside
        summary['containment'] = {
            'extended_contains_polling': contains.contained,
            'extended_outside_polling': [c.schedule.canonical() for c in outside],
        }
        logger.info(f"Extended region contains polling region: {contains.contained}")
        logger.info(f"Extended corners outside the polling hull: {len(outside)}")

    if simulate:
        summary['simulation_check'] = simulate_corner_points(region, config)

    write_json(summary, target_dir / f"region_{config.model}_summary.json")
    print(region)
    return EXIT_OK


def cmd_admit(config: ExperimentConfig, d: RateVector, exhaustive: bool = False) -> int:
    """Accept (0) or reject (1) a target; the report goes to stdout"""
    logger.info("=" * 60)
    logger.info(f"ADMISSION CONTROL - {config.model} model, target {d}")
    logger.info("=" * 60)

    region = region_for(config, 'extended') if config.model == 'extended' else None
    controller = AdmissionController(config.channel_params(), config.frame_config(),
                                     model=config.model, region=region, exhaustive=exhaustive)
    decision = controller.check(d)

    report = {
        'config': config.to_dict(),
        'target': list(d.rates),
        'accepted': decision.accepted,
        'method': decision.method,
        'checks': [str(c) for c in decision.checked],
        'binding': decision.binding.label() if decision.binding else None,
    }
    if decision.hull is not None:
        report['slack'] = decision.hull.slack
        if decision.hull.feasible:
            report['weights'] = {s.canonical(): w for s, w in decision.hull.support()}
        else:
            report['certificate'] = {
                'direction': decision.hull.certificate.direction.tolist(),
                'support': decision.hull.certificate.support,
                'gap': decision.hull.certificate.gap,
            }
    write_json(report, out_dir(config) / "admission.json")

    print(decision.report())
    return EXIT_OK if decision.accepted else EXIT_REJECT


def cmd_schedule_run(config: ExperimentConfig) -> int:
    """Trajectory CSV and summary JSON of one scheduler run"""
    config.validate(require_target=True)
    channel, frame = config.channel_params(), config.frame_config()

    logger.info("=" * 60)
    logger.info(f"SCHEDULE RUN - {config.policy.policy} over the {config.model} region")
    logger.info("=" * 60)

    region = region_for(config, config.model)
    candidates = CandidateSet.from_pairs([(c.schedule, c.rates) for c in region.corner_points])

    if config.policy.policy == 'maxweight':
        spec = PolicySpec.maxweight(config.target_vector())
    else:
        spec = PolicySpec.proportional_fair(config.policy.ewma_weight, config.policy.floor)

    try:
        result = run_policy(spec, channel, frame, candidates=candidates,
                            n_frames=config.simulation.frames, seed=config.simulation.seed,
                            sample_every=config.policy.sample_every)
    except InfeasibleTargetError as e:
        logger.error(f"Target rejected by admission control: {e}")
        print(f"REJECT: target {e.target} is outside the {config.model} rate region")
        print(f"  {e.hull}")
        return EXIT_REJECT

    target_dir = out_dir(config)
    write_table(result.trajectory, target_dir / f"trajectory_{config.policy.policy}.csv")
    if result.backlog_trajectory is not None:
        write_table(result.backlog_trajectory, target_dir / "backlog_maxweight.csv")

    summary = {'config': config.to_dict(), 'result': result.to_dict()}
    if spec.target is not None:
        summary['target'] = list(spec.target.rates)
    else:
        optimum = offline_pf_optimum(region)
        summary['offline_pf_optimum'] = {'rates': list(optimum.rates.rates), 'utility': optimum.utility}
    write_json(summary, target_dir / f"schedule_run_{config.policy.policy}_summary.json")

    print(result)
    return EXIT_OK


def cmd_cellular(config: ExperimentConfig) -> int:
    """Per-user throughput and CDF tables for polling vs extended candidate sets"""
    cell = config.cellular
    frame = FrameConfig(cell.slots_per_frame)
    seed = config.simulation.seed

    logger.info("=" * 60)
    logger.info(f"CELLULAR - {cell.drops} drop(s), N={cell.n_users}, tau={cell.slots_per_frame}, "
                f"{cell.frames} frames")
    logger.info("=" * 60)

    target_dir = out_dir(config)
    rows = []
    per_drop = []
    for k in range(cell.drops):
        scenario = generate_cellular_drop(
            seed, n_users=cell.n_users, cell_radius=cell.cell_radius, tx_power=cell.tx_power,
            path_loss_exponent=cell.path_loss_exponent, threshold_dbm=cell.threshold_dbm,
            reference_distance=cell.reference_distance, drop_index=k)
        scenario.to_json(target_dir / f"cellular_drop_{k}.json")

        results = run_cellular_comparison(scenario, frame, cell.frames, seed,
                                          config.policy.ewma_weight, config.policy.floor,
                                          cell.refresh_every, drop_index=k)
        per_drop.append(results)
        probs = cellular_on_probabilities(scenario).on_prob
        for i, distance in enumerate(scenario.distances):
            rows.append({
                'drop': k,
                'user': i + 1,
                'distance': float(distance),
                'on_prob': probs[i],
                'polling': results['polling'].per_user_throughput[i],
                'extended': results['extended'].per_user_throughput[i],
            })
        logger.info(f"Drop {k}: polling {results['polling']}")
        logger.info(f"Drop {k}: extended {results['extended']}")

    table = pd.DataFrame(rows)
    write_table(table, target_dir / "cellular_throughput.csv")
    for model in ('polling', 'extended'):
        write_table(cdf_dataframe(table[model]), target_dir / f"cellular_cdf_{model}.csv")

    tolerance = comparison_tolerance(per_drop)
    summary = {
        'config': config.to_dict(),
        'deciles': {m: decile_values(table[m]).tolist() for m in ('polling', 'extended')},
        'extended_dominates_polling': cdf_dominates(table['extended'], table['polling'], tolerance),
        'dominance_tolerance': tolerance,
    }
    write_json(summary, target_dir / "cellular_summary.json")

    print(f"Extended CDF weakly right of polling at every decile "
          f"(tolerance {tolerance:.4f}): {summary['extended_dominates_polling']}")
    return EXIT_OK


# ========== ENTRY POINT ==========

def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging("INFO")
    try:
        config = load_experiment_config(args.config, collect_overrides(args))
        setup_logging(config.output.log_level, config.output.log_dir)

        if args.command == 'region':
            return cmd_region(config, prune=args.prune, simulate=args.simulate)
        if args.command == 'admit':
            if args.rates:
                values = parse_vector(args.rates)
            elif args.rates_file:
                values = read_vector_file(args.rates_file)
            elif config.policy.target is not None:
                values = list(config.policy.target)
            else:
                raise ConfigError("No target given (--rates, --rates-file or policy.target)")
            if len(values) != config.channel.n_users:
                raise ConfigError(f"Target has {len(values)} entries, channel has N={config.channel.n_users}")
            return cmd_admit(config, RateVector(tuple(values)), exhaustive=args.exhaustive)
        if args.command == 'schedule-run':
            return cmd_schedule_run(config)
        if args.command == 'cellular':
            return cmd_cellular(config)
    except EnumerationCapError as e:
        logger.error(f"Enumeration guard: {e}")
        return EXIT_ERROR
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_ERROR
    except LPSolverError as e:
        logger.error(f"LP solver failure: {e}")
        return EXIT_ERROR
    except (ValueError, OSError) as e:
        logger.error(f"Error: {e}")
        return EXIT_ERROR

    parser.error(f"Unknown command {args.command}")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
