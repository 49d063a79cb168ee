"""Command line interface: ``pycirl run|validate|export-curriculum|demo-pool <config>``"""

import argparse
import logging
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from collections.abc import Sequence
from pathlib import Path

from .. import __version__
from ..common import IrlError, IrlException, save_environment_document
from ..teacher.curriculum import CurriculumContext, CurriculumStrategy, build_curriculum
from .config import ExperimentConfig
from .report import write_curriculum_csv
from .runner import prepare, run_experiment

__all__ = []

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURE = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", type=Path, help="experiment configuration (TOML)")
    common.add_argument("--seed", type=int, help="seed base, overrides [learner] seed")
    common.add_argument("--repeats", type=int, help="number of repeats per strategy")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument(
        "--mu-mode", choices=("exact", "mc"), help="learner feature expectation mode"
    )
    common.add_argument("--quiet", action="store_true", help="only log warnings and errors")

    parser = argparse.ArgumentParser(
        prog="pycirl", description="Curriculum and self-paced MaxEnt IRL experiments"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(
        "run", parents=[common], help="run every strategy and write CSV, JSON and SVG outputs"
    )
    commands.add_parser("validate", parents=[common], help="check a configuration")
    commands.add_parser(
        "export-curriculum",
        parents=[common],
        help="write the R-CIRL and P-CIRL orderings of the demonstration pool",
    )
    commands.add_parser(
        "demo-pool", parents=[common], help="write the environment and its demonstration pool"
    )
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    config = ExperimentConfig.from_file(args.config)
    return config.with_overrides(
        seed=args.seed, repeats=args.repeats, directory=args.out, mu_mode=args.mu_mode
    )


def command_run(config: ExperimentConfig):
    result = run_experiment(config)
    for name, runs in result.records.items():
        final = [run.steps[-1].feature_mismatch for run in runs]
        if all(value is not None for value in final):
            print(f"{name}: final mismatch {sum(final) / len(final):.6g} over {len(runs)} runs")
    print(f"results written to {config.output.directory}")


def command_validate(config: ExperimentConfig):
    setup = prepare(config)
    env = setup.env
    print(
        f"{config.source}: ok ({env.name}, {env.mdp.n_states} states, {len(setup.pool)} demos, "
        f"{len(config.strategy.names)} strategies, {config.learner.n_repeats} repeats)"
    )


def command_export_curriculum(config: ExperimentConfig):
    setup = prepare(config)
    context = CurriculumContext(
        setup.env.mdp, setup.env.w_star, setup.soft_expert, seed=config.learner.seed
    )
    for strategy in (CurriculumStrategy.r_cirl(), CurriculumStrategy.p_cirl()):
        curriculum = build_curriculum(setup.pool, strategy, context)
        path = Path(config.output.directory) / f"curriculum_{strategy.name}.csv"
        write_curriculum_csv(path, curriculum, setup.env, setup.pool)
        print(f"{strategy.name} curriculum written to {path}")


def command_demo_pool(config: ExperimentConfig):
    setup = prepare(config)
    path = Path(config.output.directory) / "demo_pool.json"
    save_environment_document(
        path,
        setup.env.mdp,
        setup.pool,
        name=setup.env.name,
        labels=list(setup.env.labels),
        w_star=setup.env.w_star.w.tolist(),
        absorbing=sorted(setup.env.absorbing),
    )
    print(f"{len(setup.pool)} demonstrations written to {path}")


COMMANDS = {
    "run": command_run,
    "validate": command_validate,
    "export-curriculum": command_export_curriculum,
    "demo-pool": command_demo_pool,
}


def main(argv: "Sequence[str] | None" = None) -> int:
    """Entry point of the ``pycirl`` command

    Returns
    -------
    int
        0 on success, 1 on a configuration error, 2 on any other failure
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args)
    except tomllib.TOMLDecodeError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IrlException as exc:
        print(exc.message, file=sys.stderr)
        return EXIT_CONFIG if exc.error_code == IrlError.INVALID_CONFIG else EXIT_FAILURE

    try:
        COMMANDS[args.command](config)
    except IrlException as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_CONFIG if exc.error_code == IrlError.INVALID_CONFIG else EXIT_FAILURE
    except Exception:
        logger.exception("%s failed", args.command)
        return EXIT_FAILURE
    return EXIT_OK


cli_main = main
