"""Experiment configuration read from a TOML document

The document has the sections ``[environment]``, ``[expert]``, ``[learner]``, ``[strategy]`` and
``[output]``. Unknown sections or keys are errors, and every error names the line of the
offending key (``<path>:<line>: <message>``).
"""

import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from ..common import IrlError, IrlException, Metric, MuMethod
from ..learner.feature_expectations import MuEstimator
from ..learner.self_paced import GrowthTrigger, SpirlConfig
from ..teacher.curriculum import CurriculumStrategy
from ..teacher.environment import Environment
from ..teacher.gridworld import GridworldSpec, RewardMap, build_gridworld, goal_cells
from ..teacher.hanoi import HanoiSpec, build_hanoi

__all__ = []

logger = logging.getLogger(__name__)

_REQUIRED = object()
_HEADER = re.compile(r"^\s*\[\s*([A-Za-z0-9_.-]+)\s*\]")
_KEY = re.compile(r"^\s*([A-Za-z0-9_-]+)\s*=")

SECTIONS = ("environment", "expert", "learner", "strategy", "output")
GRIDWORLD_KEYS = (
    "kind",
    "width",
    "height",
    "reward_map",
    "rewards",
    "slip_prob",
    "absorbing_cells",
    "terminal_goals",
    "gamma",
)
HANOI_KEYS = ("kind", "n_disks", "n_rods", "gamma")
EXPERT_KEYS = ("noise_prob", "n_demos", "horizon", "seed")
LEARNER_KEYS = (
    "mu_mode",
    "n_rollouts",
    "mc_horizon",
    "vi_tol",
    "vi_max_iter",
    "batch_size",
    "init_low",
    "init_high",
    "n_repeats",
    "seed",
    "workers",
)
STRATEGY_KEYS = ("names", "lambda0", "steps", "growth_trigger")
OUTPUT_KEYS = ("directory", "metrics", "plot")


class EnvironmentKind(Enum):
    GRIDWORLD = "gridworld"
    HANOI = "hanoi"


class StrategyFamily(Enum):
    """How a strategy feeds the learner"""

    CURRICULUM = "curriculum"
    """Teacher ordering, each demonstration given once"""

    SPIRL = "spirl"
    """Self-paced selection over the whole pool"""

    BATCH = "batch"
    """Whole pool at every step"""


_CURRICULA = {
    "r_cirl": CurriculumStrategy.r_cirl,
    "p_cirl": CurriculumStrategy.p_cirl,
    "random": CurriculumStrategy.random,
    "anti_r": lambda: CurriculumStrategy.anti(CurriculumStrategy.r_cirl()),
    "anti_p": lambda: CurriculumStrategy.anti(CurriculumStrategy.p_cirl()),
}


@dataclass(frozen=True)
class StrategySpec:
    """One compared strategy, parsed from a token such as ``r_cirl`` or ``spirl:0.01``"""

    name: str
    family: StrategyFamily
    curriculum: "CurriculumStrategy | None" = None
    delta_lambda: "float | None" = None

    @staticmethod
    def parse(token: str) -> "StrategySpec":
        """Parse a strategy token

        Raises
        ------
        IrlException
            If the token is unknown or ``spirl`` has no valid ``delta_lambda``
        """
        token = token.strip()
        if token in _CURRICULA:
            return StrategySpec(token, StrategyFamily.CURRICULUM, curriculum=_CURRICULA[token]())
        if token == "batch":
            return StrategySpec(token, StrategyFamily.BATCH)
        if token.startswith("spirl:"):
            try:
                delta_lambda = float(token.split(":", 1)[1])
            except ValueError:
                delta_lambda = -1.0
            if not delta_lambda >= 0:
                raise IrlException(
                    f"invalid delta_lambda in strategy '{token}'", IrlError.INVALID_CONFIG
                )
            return StrategySpec(token, StrategyFamily.SPIRL, delta_lambda=delta_lambda)
        raise IrlException(
            f"unknown strategy '{token}', expected one of "
            f"{', '.join([*_CURRICULA, 'batch', 'spirl:<delta_lambda>'])}",
            IrlError.INVALID_CONFIG,
        )


@dataclass(frozen=True)
class EnvironmentConfig:
    kind: EnvironmentKind
    width: int = 5
    height: int = 5
    reward_map: "RewardMap | None" = None
    rewards: "tuple[float, ...] | None" = None
    slip_prob: float = 0.0
    absorbing_cells: tuple[tuple[int, int], ...] = ()
    terminal_goals: bool = False
    """Every positive cell leads to an absorbing exit, demonstrations end at the goals"""
    gamma: float = 0.9
    n_disks: int = 4
    n_rods: int = 3

    def spec(self) -> "GridworldSpec | HanoiSpec":
        """Builder spec of the environment, its constructor validates the values"""
        if self.kind == EnvironmentKind.HANOI:
            return HanoiSpec(self.n_disks, self.n_rods, self.gamma)
        kwargs = dict(
            slip_prob=self.slip_prob,
            absorbing_cells=frozenset(self.absorbing_cells),
            gamma=self.gamma,
        )
        if self.rewards is None:
            return GridworldSpec.preset(
                self.reward_map,
                self.width,
                self.height,
                terminal_goals=self.terminal_goals,
                **kwargs,
            )
        if self.terminal_goals and len(self.rewards) == self.width * self.height:
            rewards = np.reshape(self.rewards, (self.height, self.width))
            kwargs["terminal_cells"] = goal_cells(rewards)
        return GridworldSpec(self.width, self.height, self.rewards, **kwargs)

    @property
    def name(self) -> str:
        if self.kind == EnvironmentKind.HANOI:
            return f"hanoi-{self.n_disks}x{self.n_rods}"
        layout = self.reward_map.value if self.reward_map is not None else "custom"
        return f"{layout}-{self.width}x{self.height}"

    def build(self) -> Environment:
        spec = self.spec()
        if isinstance(spec, HanoiSpec):
            return build_hanoi(spec, self.name)
        return build_gridworld(spec, self.name)


@dataclass(frozen=True)
class ExpertConfig:
    noise_prob: float = 0.0
    n_demos: "int | None" = None
    """By default ``min(100, non-absorbing cells)`` for a gridworld, every state for Hanoi"""
    horizon: "int | None" = None
    seed: int = 0


@dataclass(frozen=True)
class LearnerConfig:
    mu_mode: MuMethod = MuMethod.EXACT
    n_rollouts: int = 50
    mc_horizon: "int | None" = None
    vi_tol: float = 1e-8
    vi_max_iter: int = 10_000
    batch_size: int = 1
    init_low: float = -1.0
    init_high: float = 1.0
    n_repeats: int = 20
    seed: int = 0
    workers: int = 1

    def estimator(self) -> MuEstimator:
        return MuEstimator(self.mu_mode, self.n_rollouts, self.mc_horizon)


@dataclass(frozen=True)
class StrategyConfig:
    names: tuple[StrategySpec, ...] = field(
        default_factory=lambda: tuple(
            StrategySpec.parse(token) for token in ("r_cirl", "p_cirl", "random")
        )
    )
    lambda0: "float | None" = None
    """``None`` stands for ``"auto"``: the smallest demonstration loss at ``w_0``"""
    steps: "int | None" = None
    growth_trigger: GrowthTrigger = GrowthTrigger.NOT_GROWING

    def spirl(self, delta_lambda: float) -> SpirlConfig:
        return SpirlConfig(delta_lambda, self.lambda0, self.growth_trigger)


@dataclass(frozen=True)
class OutputConfig:
    directory: Path = Path("out")
    metrics: tuple[Metric, ...] = (Metric.FEATURE_MISMATCH, Metric.REWARD_GAP)
    plot: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of an experiment"""

    environment: EnvironmentConfig
    expert: ExpertConfig = field(default_factory=ExpertConfig)
    learner: LearnerConfig = field(default_factory=LearnerConfig)
    strategy: StrategyConfig = field(default_factory=StrategyConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    source: str = "<config>"

    @staticmethod
    def from_file(path: "str | Path") -> "ExperimentConfig":
        """Helper function to create an ``ExperimentConfig`` from a TOML file

        Parameters
        ----------
        path : str | Path
            Path of the configuration file

        Returns
        -------
        ExperimentConfig
            The validated configuration

        Raises
        ------
        IrlException
            ``INVALID_CONFIG`` for a missing, unknown or invalid key, ``IO_FAILURE`` if the
            file can not be read
        tomllib.TOMLDecodeError
            If the document is not valid TOML
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise IrlException(f"unable to read '{path}': {exc}", IrlError.IO_FAILURE) from exc
        return ExperimentConfig.from_text(text, str(path))

    @staticmethod
    def from_text(text: str, source: str = "<config>") -> "ExperimentConfig":
        """Parse and validate a configuration document, see ``from_file``"""
        document = tomllib.loads(text)
        lines = _KeyLines(text)

        for name in document:
            if name not in SECTIONS:
                raise _error(source, lines.section(name), f"unknown section [{name}]")
        if "environment" not in document:
            raise _error(source, 1, "missing section [environment]")

        config = ExperimentConfig(
            environment=_read_environment(_Section("environment", document, lines, source)),
            expert=_read_expert(_Section("expert", document, lines, source)),
            learner=_read_learner(_Section("learner", document, lines, source)),
            strategy=_read_strategy(_Section("strategy", document, lines, source)),
            output=_read_output(_Section("output", document, lines, source)),
            source=source,
        )
        logger.debug("configuration %s: %s", source, config)
        return config

    def with_overrides(
        self,
        seed: "int | None" = None,
        repeats: "int | None" = None,
        directory: "str | Path | None" = None,
        mu_mode: "MuMethod | str | None" = None,
    ) -> "ExperimentConfig":
        """Copy with the command line overrides applied"""
        learner, output = self.learner, self.output
        if seed is not None:
            learner = replace(learner, seed=int(seed))
        if repeats is not None:
            if repeats < 1:
                raise IrlException(f"repeats must be >= 1, got {repeats}", IrlError.INVALID_CONFIG)
            learner = replace(learner, n_repeats=int(repeats))
        if mu_mode is not None:
            learner = replace(learner, mu_mode=MuMethod(mu_mode))
        if directory is not None:
            output = replace(output, directory=Path(directory))
        return replace(self, learner=learner, output=output)


class _KeyLines:
    """Line of every section header and key of a TOML document"""

    def __init__(self, text: str) -> None:
        self._sections: dict[str, int] = {}
        self._keys: dict[tuple[str, str], int] = {}
        current = ""
        for number, line in enumerate(text.splitlines(), start=1):
            header = _HEADER.match(line)
            if header:
                current = header.group(1)
                self._sections.setdefault(current, number)
                continue
            key = _KEY.match(line)
            if key:
                self._keys.setdefault((current, key.group(1)), number)

    def section(self, name: str) -> int:
        return self._sections.get(name, 1)

    def key(self, section: str, key: str) -> int:
        return self._keys.get((section, key), self.section(section))


def _error(source: str, line: int, message: str) -> IrlException:
    return IrlException(f"{source}:{line}: {message}", IrlError.INVALID_CONFIG)


class _Section:
    """Typed access to the keys of one section"""

    def __init__(self, name: str, document: dict, lines: _KeyLines, source: str) -> None:
        table = document.get(name, {})
        self._name = name
        self._lines = lines
        self._source = source
        if not isinstance(table, dict):
            raise self.error(f"[{name}] must be a table")
        self._table: dict[str, Any] = table

    def error(self, message: str, key: "str | None" = None) -> IrlException:
        line = self._lines.section(self._name) if key is None else self._lines.key(self._name, key)
        return _error(self._source, line, message)

    def check_keys(self, allowed: tuple[str, ...], context: str = ""):
        for key in self._table:
            if key not in allowed:
                raise self.error(f"unknown key '{key}' in [{self._name}]{context}", key)

    def __contains__(self, key: str) -> bool:
        return key in self._table

    def get(self, key: str, kind: "type | tuple[type, ...]", default: Any = _REQUIRED) -> Any:
        if key not in self._table:
            if default is _REQUIRED:
                raise self.error(f"missing key '{key}' in [{self._name}]")
            return default
        value = self._table[key]
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
            kinds = kind if isinstance(kind, tuple) else (kind,)
            expected = " or ".join(k.__name__ for k in kinds)
            raise self.error(
                f"'{key}' must be of type {expected}, got {type(value).__name__}", key
            )
        return value

    def enum(self, key: str, kind: type[Enum], default: Any = _REQUIRED) -> Any:
        if key not in self._table and default is not _REQUIRED:
            return default
        value = self.get(key, str)
        try:
            return kind(value)
        except ValueError:
            choices = ", ".join(member.value for member in kind)  # type: ignore[attr-defined]
            raise self.error(f"invalid {key} '{value}', expected one of {choices}", key) from None

    def positive(self, key: str, kind: type, default: Any = _REQUIRED, minimum=1) -> Any:
        value = self.get(key, kind, default)
        if key in self._table and value < minimum:
            raise self.error(f"'{key}' must be >= {minimum}, got {value}", key)
        return value

    def unit(self, key: str, default: float, upper_open: bool = True) -> float:
        """Probability-like value in ``[0, 1)`` or ``[0, 1]``"""
        value = self.get(key, float, default)
        if not (0.0 <= value < 1.0 if upper_open else 0.0 <= value <= 1.0):
            interval = "[0, 1)" if upper_open else "[0, 1]"
            raise self.error(f"'{key}' must be in {interval}, got {value}", key)
        return value


def _read_environment(section: _Section) -> EnvironmentConfig:
    kind = section.enum("kind", EnvironmentKind)
    gamma = section.unit("gamma", 0.9)
    if kind == EnvironmentKind.HANOI:
        section.check_keys(HANOI_KEYS, " for hanoi")
        config = EnvironmentConfig(
            kind,
            gamma=gamma,
            n_disks=section.positive("n_disks", int, 4),
            n_rods=section.positive("n_rods", int, 3, minimum=3),
        )
    else:
        section.check_keys(GRIDWORLD_KEYS, " for gridworld")
        if ("reward_map" in section) == ("rewards" in section):
            raise section.error("a gridworld needs exactly one of 'reward_map' or 'rewards'")
        rewards = None
        if "rewards" in section:
            values = section.get("rewards", list)
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
                raise section.error("'rewards' must be a list of numbers", "rewards")
            rewards = tuple(float(v) for v in values)
        cells = section.get("absorbing_cells", list, [])
        if not all(
            isinstance(cell, list) and len(cell) == 2 and all(isinstance(v, int) for v in cell)
            for cell in cells
        ):
            raise section.error(
                "'absorbing_cells' must be a list of [row, col] pairs", "absorbing_cells"
            )
        config = EnvironmentConfig(
            kind,
            width=section.positive("width", int, 5),
            height=section.positive("height", int, 5),
            reward_map=section.enum("reward_map", RewardMap, None),
            rewards=rewards,
            slip_prob=section.unit("slip_prob", 0.0),
            absorbing_cells=tuple((row, col) for row, col in cells),
            terminal_goals=section.get("terminal_goals", bool, False),
            gamma=gamma,
        )
    try:
        config.spec()
    except IrlException as exc:
        raise section.error(exc.message) from exc
    return config


def _read_expert(section: _Section) -> ExpertConfig:
    section.check_keys(EXPERT_KEYS)
    return ExpertConfig(
        noise_prob=section.unit("noise_prob", 0.0, upper_open=False),
        n_demos=section.positive("n_demos", int, None),
        horizon=section.positive("horizon", int, None),
        seed=section.get("seed", int, 0),
    )


def _read_learner(section: _Section) -> LearnerConfig:
    section.check_keys(LEARNER_KEYS)
    mu_mode = section.enum("mu_mode", MuMethod, MuMethod.EXACT)
    if mu_mode == MuMethod.EMPIRICAL:
        raise section.error("mu_mode must be 'exact' or 'mc'", "mu_mode")
    vi_tol = section.get("vi_tol", float, 1e-8)
    if not vi_tol > 0:
        raise section.error(f"'vi_tol' must be > 0, got {vi_tol}", "vi_tol")
    init_low = section.get("init_low", float, -1.0)
    init_high = section.get("init_high", float, 1.0)
    if not init_low <= init_high:
        raise section.error("'init_low' must be <= 'init_high'", "init_high")
    return LearnerConfig(
        mu_mode=mu_mode,
        n_rollouts=section.positive("n_rollouts", int, 50),
        mc_horizon=section.positive("mc_horizon", int, None),
        vi_tol=vi_tol,
        vi_max_iter=section.positive("vi_max_iter", int, 10_000),
        batch_size=section.positive("batch_size", int, 1),
        init_low=init_low,
        init_high=init_high,
        n_repeats=section.positive("n_repeats", int, 20),
        seed=section.get("seed", int, 0),
        workers=section.positive("workers", int, 1),
    )


def _read_strategy(section: _Section) -> StrategyConfig:
    section.check_keys(STRATEGY_KEYS)
    defaults = StrategyConfig()
    names = defaults.names
    if "names" in section:
        tokens = section.get("names", list)
        if not tokens or not all(isinstance(token, str) for token in tokens):
            raise section.error("'names' must be a non-empty list of strings", "names")
        try:
            names = tuple(StrategySpec.parse(token) for token in tokens)
        except IrlException as exc:
            raise section.error(exc.message, "names") from exc
        if len({spec.name for spec in names}) != len(names):
            raise section.error("'names' has duplicated strategies", "names")

    lambda0 = None
    if "lambda0" in section:
        value = section.get("lambda0", (str, int, float))
        if isinstance(value, str):
            if value not in ("auto", "inf"):
                raise section.error(f"invalid lambda0 '{value}'", "lambda0")
            lambda0 = None if value == "auto" else float("inf")
        elif isinstance(value, bool):
            raise section.error("'lambda0' must be a number or \"auto\"", "lambda0")
        else:
            lambda0 = float(value)

    return StrategyConfig(
        names=names,
        lambda0=lambda0,
        steps=section.positive("steps", int, None),
        growth_trigger=section.enum("growth_trigger", GrowthTrigger, GrowthTrigger.NOT_GROWING),
    )


def _read_output(section: _Section) -> OutputConfig:
    section.check_keys(OUTPUT_KEYS)
    metrics = OutputConfig().metrics
    if "metrics" in section:
        tokens = section.get("metrics", list)
        try:
            metrics = tuple(Metric(token) for token in tokens)
        except ValueError:
            choices = ", ".join(metric.value for metric in Metric)
            raise section.error(f"'metrics' entries must be among {choices}", "metrics") from None
        if not metrics:
            raise section.error("'metrics' is empty", "metrics")
    return OutputConfig(
        directory=Path(section.get("directory", str, "out")),
        metrics=metrics,
        plot=section.get("plot", bool, True),
    )
