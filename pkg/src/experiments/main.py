import logging
import sys
import os

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

from src.engine.engine_module import ConfigurationError
from src.experiments.experiment_module import build_parser, config_from_args, run_experiment

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def run_test_suites() -> bool:
    from src.engine import test_engine
    from src.snake import test_snake
    from src.benchmarks import test_benchmarks
    from src.engineering import test_engineering
    from src.uav import test_uav
    from src.stats import test_stats
    from src.experiments import test_experiments

    suites = [test_engine, test_snake, test_benchmarks, test_engineering, test_uav, test_stats, test_experiments]
    failed = []
    for suite in suites:
        logger.info(f"Running {suite.__name__}")
        try:
            suite.run_all_tests()
        except Exception as e:
            logger.error(f"{suite.__name__} failed: {e}")
            failed.append(suite.__name__)
    if failed:
        logger.error(f"Failed suites: {', '.join(failed)}")
    return not failed


def main():
    parser = build_parser()
    args = parser.parse_args()
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    logger.info("Snake Optimizer Experiments")
    logger.info("=" * 70)
    try:
        if args.mode == 'test':
            if not run_test_suites():
                sys.exit(1)
        else:
            config = config_from_args(args)
            logger.info(f"Writing results to {config.output_dir}")
            summary = run_experiment(config)
            comparison = summary.get('versus_reference') or {}
            for algorithm, entry in comparison.items():
                logger.info(f"{algorithm} vs MISO (W|T|L): {entry['w_t_l']}")
            if summary.get('friedman'):
                for algorithm, rank in summary['friedman']['mean_ranks'].items():
                    logger.info(f"Friedman mean rank {algorithm}: {rank:.3f}")
    except ConfigurationError as e:
        logger.error(f"Invalid configuration: {e}")
        sys.exit(2)
    except Exception as e:
        logger.error(f"Error in main: {e}")
        sys.exit(1)
    logger.info("\nProgram completed successfully!")


if __name__ == "__main__":
    main()
