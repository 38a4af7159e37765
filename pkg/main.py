import argparse
import logging
import sys

from cli import REGIMES, Scenario, cmd_bench, cmd_check, cmd_cluster, cmd_decompose, cmd_design, cmd_simulate
from common.errors import ExistenceViolationError, GlocalError
from config.settings import settings

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VERDICT, EXIT_FAILURE = 0, 1, 2


def _add_scenario_arguments(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--network', metavar='FILE', help='network JSON file')
    source.add_argument('--benchmark', metavar='N0', type=int, help='built-in benchmark replicated N0 times')
    parser.add_argument('--perturb', metavar='MAG', type=float, default=0.0,
                        help='relative perturbation of inertia and damping (benchmark only)')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--clusters', metavar='FILE|auto|singletons', default=None,
                        help='cluster file; auto groups equal-I/O components and refines them until an '
                             'exact decomposition exists; singletons puts every component alone')
    parser.add_argument('--robust', action='store_true', help='use the robust decomposition')
    parser.add_argument('--horizon', type=float, default=settings.SIM_HORIZON)
    parser.add_argument('--step', type=float, default=settings.SIM_STEP)
    parser.add_argument('--out', metavar='DIR', default=settings.OUTPUT_DIR)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Hierarchical decomposition and glocal control of network systems')
    parser.add_argument('--log-level', default=settings.LOG_LEVEL)
    commands = parser.add_subparsers(dest='command', required=True)

    for name, text in (('check', 'existence of an exact hierarchical decomposition'),
                       ('decompose', 'exact or robust hierarchical decomposition'),
                       ('design', 'glocal controller synthesis')):
        _add_scenario_arguments(commands.add_parser(name, help=text))

    cluster = commands.add_parser('cluster', help='refine clusters until a decomposition exists')
    _add_scenario_arguments(cluster)
    cluster.add_argument('--extended', action='store_true', help='also enforce reachability between clusters')

    simulate = commands.add_parser('simulate', help='closed-loop responses to an initial disturbance')
    _add_scenario_arguments(simulate)
    for regime in REGIMES:
        simulate.add_argument(f'--{regime}', dest='regimes', action='append_const', const=regime)
    simulate.add_argument('--disturbance-cluster', type=int, default=1, metavar='I')
    simulate.add_argument('--disturbance', type=float, default=1.0, metavar='MAG')

    bench = commands.add_parser('bench', help='design and clustering timings')
    bench.add_argument('--n0', type=int, nargs='+', default=list(settings.BENCH_N0))
    bench.add_argument('--repetitions', type=int, default=settings.BENCH_REPETITIONS)
    bench.add_argument('--out', metavar='DIR', default=settings.OUTPUT_DIR)
    bench.add_argument('--skip-clustering', action='store_true')
    return parser


def scenario_from_args(args: argparse.Namespace) -> Scenario:
    return Scenario(
        network_file=args.network,
        benchmark_n0=args.benchmark,
        perturb=args.perturb,
        seed=args.seed,
        clusters=args.clusters,
        robust=args.robust,
        horizon=args.horizon,
        step=args.step,
        out=args.out,
        regimes=tuple(getattr(args, 'regimes', None) or REGIMES),
        disturbance_cluster=getattr(args, 'disturbance_cluster', 1),
        disturbance=getattr(args, 'disturbance', 1.0),
        extended=getattr(args, 'extended', False),
    )


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.INFO))

    try:
        if args.command == 'bench':
            if any(n0 < 1 for n0 in args.n0):
                logger.error(f"n0 values must be positive: {args.n0}")
                return EXIT_FAILURE
            design, _, slopes = cmd_bench(args.n0, args.repetitions, args.out, clustering=not args.skip_clustering)
            print(design.to_string(index=False))
            print(f"log-log slopes: glocal {slopes['glocal']:.2f}, centralized {slopes['centralized']:.2f}")
            return EXIT_OK

        scenario = scenario_from_args(args)
        if args.command == 'check':
            return EXIT_OK if cmd_check(scenario).overall else EXIT_VERDICT
        handler = {
            'cluster': cmd_cluster,
            'decompose': cmd_decompose,
            'design': cmd_design,
            'simulate': cmd_simulate,
        }[args.command]
        handler(scenario)
        return EXIT_OK
    except ExistenceViolationError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_VERDICT
    except GlocalError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(run())
