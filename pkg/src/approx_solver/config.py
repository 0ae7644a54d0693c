"""
Config Module
Solver configuration and validation against a problem
"""
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional

from .errors import ConfigurationError
from .eso import StepsizeKind
from .losses import LossKind
from .sampling import SamplingKind, SamplingScheme


class SolverMode(str, Enum):
    APPROX = "approx"
    PCDM = "pcdm"


class Engine(str, Enum):
    EFFICIENT = "efficient"
    REFERENCE = "reference"


DEFAULT_WINDOW = 50
DEFAULT_RECOMPUTE_PERIOD = 1000


@dataclass(frozen=True)
class SolverConfig:
    """Every solver knob, with the CLI defaults"""
    tau: int = 1
    mode: SolverMode = SolverMode.APPROX
    engine: Engine = Engine.EFFICIENT
    sampling: SamplingKind = SamplingKind.TAU_NICE
    stepsizes: StepsizeKind = StepsizeKind.FR
    max_iters: int = 1000
    seed: int = 0
    log_period: int = 1
    tol: Optional[float] = None
    window: int = DEFAULT_WINDOW
    recompute_period: int = DEFAULT_RECOMPUTE_PERIOD
    threads: int = 1
    debug: bool = False
    progress: bool = False

    def __post_init__(self):
        # accept the CLI spellings
        object.__setattr__(self, "mode", SolverMode(self.mode))
        object.__setattr__(self, "engine", Engine(self.engine))
        object.__setattr__(self, "sampling", SamplingKind(self.sampling))
        object.__setattr__(self, "stepsizes", StepsizeKind(self.stepsizes))

    @property
    def scheme(self) -> SamplingScheme:
        return SamplingScheme(self.sampling, self.tau)

    def validate(self, problem) -> "SolverConfig":
        """Raise ConfigurationError for anything that cannot run on problem"""
        n = problem.n
        if not 1 <= self.tau <= n:
            raise ConfigurationError(f"tau must lie in [1, {n}], got {self.tau}")
        if self.max_iters < 0:
            raise ConfigurationError(f"max_iters must be nonnegative, got {self.max_iters}")
        if self.log_period < 1:
            raise ConfigurationError(f"log_period must be positive, got {self.log_period}")
        if self.window < 1:
            raise ConfigurationError(f"window must be positive, got {self.window}")
        if self.recompute_period < 0:
            raise ConfigurationError(
                f"recompute_period must be nonnegative, got {self.recompute_period}")
        if self.threads < 1:
            raise ConfigurationError(f"threads must be positive, got {self.threads}")
        if self.tol is not None and not self.tol >= 0:
            raise ConfigurationError(f"tol must be nonnegative, got {self.tol}")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be nonnegative, got {self.seed}")
        if self.stepsizes is StepsizeKind.NC:
            if not problem.partition.is_unit:
                raise ConfigurationError("nc stepsizes require unit blocks")
            if problem.loss.kind is not LossKind.SQUARE:
                raise ConfigurationError(
                    f"nc stepsizes require the square loss, got {problem.loss.kind.value}")
        if self.engine is Engine.REFERENCE and self.mode is SolverMode.PCDM:
            raise ConfigurationError("pcdm mode runs on the efficient engine only")
        return self

    def as_dict(self) -> dict:
        return {key: (value.value if isinstance(value, Enum) else value)
                for key, value in asdict(self).items()}
