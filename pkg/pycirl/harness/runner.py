"""Seeded, repeated comparison of teaching and learning strategies"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..common import DemoPool, IrlError, IrlException, Metric
from ..learner.feature_expectations import FeatureExpectation, mu_policy_exact
from ..learner.maxent import LearnerState, train
from ..learner.record import RunRecord
from ..learner.self_paced import batch_train, spirl_train
from ..learner.soft_vi import SoftPolicy, soft_value_iteration
from ..teacher.curriculum import CurriculumContext, build_curriculum, schedule_minibatches
from ..teacher.environment import Environment, choose_demo_starts
from ..teacher.expert import ExpertPolicy, ExpertSpec, expert_policy, generate_demos
from .config import EnvironmentKind, ExperimentConfig, StrategyFamily, StrategySpec
from .metrics import metric_callbacks
from .report import write_report

__all__ = []

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEMOS = 100


@dataclass(frozen=True)
class ExperimentSetup:
    """Everything shared, read-only, by the runs of an experiment

    ``env.mdp.p0`` is the empirical distribution of the demonstration start states.
    """

    env: Environment
    pool: DemoPool
    expert: ExpertPolicy
    soft_expert: SoftPolicy
    expert_mu: FeatureExpectation


@dataclass(frozen=True)
class AggregateRow:
    """Mean and standard deviation of the metrics of one step over the repeats"""

    step: int
    strategy: str
    mean_mismatch: float
    std_mismatch: float
    mean_gap: float
    std_gap: float
    n: int


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    setup: ExperimentSetup
    records: dict[str, list[RunRecord]]
    """Runs of every strategy, ordered by repeat"""
    aggregate: list[AggregateRow]


def default_n_demos(config: ExperimentConfig, env: Environment) -> int:
    if config.expert.n_demos is not None:
        return config.expert.n_demos
    if config.environment.kind == EnvironmentKind.HANOI:
        return env.mdp.n_states
    return min(DEFAULT_MAX_DEMOS, len(env.non_absorbing))


def prepare(config: ExperimentConfig) -> ExperimentSetup:
    """Build the environment, the expert and the demonstration pool of an experiment

    The start states and the demonstration noise are drawn from ``expert.seed``.
    """
    env = config.environment.build()
    rng = np.random.default_rng(config.expert.seed)
    include_absorbing = config.environment.kind == EnvironmentKind.HANOI
    try:
        starts = choose_demo_starts(env, default_n_demos(config, env), rng, include_absorbing)
    except IrlException as exc:
        raise IrlException(f"{config.source}: {exc.message}", IrlError.INVALID_CONFIG) from exc
    env = env.with_initial_states(starts)

    expert = expert_policy(env.mdp, env.w_star)
    horizon = config.expert.horizon or env.default_horizon
    spec = ExpertSpec(env.w_star, tuple(starts), horizon, config.expert.noise_prob)
    pool = generate_demos(env.mdp, expert, spec, rng, env.absorbing)
    logger.info(
        "%s: %d states, %d demonstrations of at most %d steps",
        env.name,
        env.mdp.n_states,
        len(pool),
        horizon,
    )
    return ExperimentSetup(
        env=env,
        pool=pool,
        expert=expert,
        soft_expert=soft_value_iteration(
            env.mdp, env.w_star, config.learner.vi_tol, config.learner.vi_max_iter
        ),
        expert_mu=mu_policy_exact(env.mdp, expert.matrix(env.mdp.n_actions)),
    )


def run_single(
    config: ExperimentConfig, setup: ExperimentSetup, strategy: StrategySpec, repeat: int
) -> RunRecord:
    """One seeded training run of ``strategy``

    The seed ``learner.seed + repeat`` is split into independent streams for ``w_0``, the
    learner's Monte-Carlo estimates and the metrics, so every strategy starts from the same
    ``w_0`` for a given repeat.
    """
    seed = config.learner.seed + repeat
    init_seed, mc_seed, metric_seed = np.random.SeedSequence(seed).spawn(3)
    learner = config.learner
    estimator = learner.estimator()
    mdp = setup.env.mdp

    state = LearnerState.initial(
        mdp.feature_dim,
        np.random.default_rng(init_seed),
        learner.init_low,
        learner.init_high,
        mu_mode=estimator,
        vi_tol=learner.vi_tol,
        vi_max_iter=learner.vi_max_iter,
        rng=np.random.default_rng(mc_seed),
    )
    callbacks = metric_callbacks(
        config.output.metrics,
        setup.expert_mu,
        setup.expert,
        setup.env.w_star,
        estimator,
        np.random.default_rng(metric_seed),
    )
    pool = setup.pool.copy()

    if strategy.family == StrategyFamily.CURRICULUM:
        context = CurriculumContext(mdp, setup.env.w_star, setup.soft_expert, seed=seed)
        curriculum = build_curriculum(pool, strategy.curriculum, context)  # type: ignore[arg-type]
        schedule = schedule_minibatches(curriculum, pool, learner.batch_size)
        _, record = train(state, mdp, schedule, callbacks, seed)
    elif strategy.family == StrategyFamily.SPIRL:
        spirl = config.strategy.spirl(strategy.delta_lambda)  # type: ignore[arg-type]
        _, record = spirl_train(mdp, pool, state, spirl, config.strategy.steps, callbacks, seed)
    else:
        _, record = batch_train(mdp, pool, state, config.strategy.steps, callbacks, seed)

    if record.n_non_converged:
        logger.warning(
            "%s seed %d: soft value iteration did not converge on %d steps",
            strategy.name,
            seed,
            record.n_non_converged,
        )
    return record


def _run_task(task: tuple[ExperimentConfig, ExperimentSetup, StrategySpec, int]) -> RunRecord:
    return run_single(*task)


def aggregate(strategy: str, records: list[RunRecord]) -> list[AggregateRow]:
    """Per-step mean and population standard deviation of the metrics over ``records``

    A metric which was not recorded gives ``nan``.
    """
    if not records:
        return []
    n_steps = min(len(record) for record in records)
    rows = []
    for index in range(n_steps):
        steps = [record.steps[index] for record in records]
        mismatch = np.array([_value(step.feature_mismatch) for step in steps])
        gap = np.array([_value(step.reward_gap) for step in steps])
        rows.append(
            AggregateRow(
                step=steps[0].step,
                strategy=strategy,
                mean_mismatch=float(np.mean(mismatch)),
                std_mismatch=float(np.std(mismatch)),
                mean_gap=float(np.mean(gap)),
                std_gap=float(np.std(gap)),
                n=len(steps),
            )
        )
    return rows


def _value(value: "float | None") -> float:
    return np.nan if value is None else value


def run_experiment(
    config: ExperimentConfig, write: bool = True, workers: "int | None" = None
) -> ExperimentResult:
    """Run every strategy of ``config`` ``n_repeats`` times

    Parameters
    ----------
    config : ExperimentConfig
        Experiment description
    write : bool, optional
        Write the CSV files, the summary and the plots to ``config.output.directory``
    workers : int | None, optional
        Number of worker processes, by default ``config.learner.workers``

    Returns
    -------
    ExperimentResult
        Runs and aggregated curves, ordered as in the configuration
    """
    setup = prepare(config)
    workers = config.learner.workers if workers is None else workers
    repeats = range(config.learner.n_repeats)
    tasks = [(config, setup, strategy, r) for strategy in config.strategy.names for r in repeats]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outputs = list(executor.map(_run_task, tasks))
    else:
        outputs = [_run_task(task) for task in tasks]

    records: dict[str, list[RunRecord]] = {}
    for (_, _, strategy, _), record in zip(tasks, outputs):
        records.setdefault(strategy.name, []).append(record)
    for name, runs in records.items():
        final = [run.steps[-1].feature_mismatch for run in runs if run.steps]
        if all(value is not None for value in final):
            logger.info("%s: final mismatch %.4g", name, float(np.mean(final)))

    rows = [row for name, runs in records.items() for row in aggregate(name, runs)]
    result = ExperimentResult(config, setup, records, rows)
    if write:
        write_report(result)
    return result


def final_metric(result: ExperimentResult, strategy: str, metric: Metric) -> np.ndarray:
    """Last-step value of ``metric`` for every run of ``strategy``"""
    runs = result.records[strategy]
    return np.array([_value(getattr(run.steps[-1], metric.value)) for run in runs])
