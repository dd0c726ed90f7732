import threading
from enum import Enum
from typing import Dict, Optional, Any, ClassVar, Type, List
from marshmallow_dataclass import dataclass
from dataclasses import field

from marshmallow import Schema

from tno.p5_coloring.exceptions import InputError
from tno.p5_coloring.settings import EnvSettings, MAX_SUPPORTED_UNIVERSE

_STATS_LOCK = threading.Lock()


class RunStatus(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    ERROR = "ERROR"
    TIMEOUT = "TIMEOUT"
    OK = "OK"


class GraphFamily(str, Enum):
    SPLIT_GRAPH = "SplitGraph"
    COMPLETE_MULTIPARTITE = "CompleteMultipartite"
    REJECTION_SAMPLED = "RejectionSampled"


@dataclass
class SolveConfig:
    max_universe: int = MAX_SUPPORTED_UNIVERSE
    enable_parallel: bool = False
    trace: int = 0
    # wall-clock budget in seconds
    deadline: Optional[float] = None
    # stop at the first SAT member of an instance set
    short_circuit: bool = True
    workers: int = 4
    check_p5: bool = True

    Schema: ClassVar[Type[Schema]] = Schema  # type: ignore

    def __post_init__(self):
        if not 1 <= self.max_universe <= MAX_SUPPORTED_UNIVERSE:
            raise InputError(f"max_universe must lie in [1, {MAX_SUPPORTED_UNIVERSE}], got {self.max_universe}")
        if self.deadline is not None and self.deadline <= 0:
            raise InputError(f"deadline must be positive, got {self.deadline}")

    @classmethod
    def from_env(cls, **overrides) -> "SolveConfig":
        values: Dict[str, Any] = dict(
            max_universe=EnvSettings.max_universe(),
            workers=EnvSettings.workers(),
            deadline=EnvSettings.default_timeout(),
        )
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass
class BranchStats:
    instances_created: int = 0
    instances_pruned: int = 0
    recursion_depth: int = 0
    wall_time: float = 0.0

    Schema: ClassVar[Type[Schema]] = Schema  # type: ignore

    def created(self, count: int = 1):
        with _STATS_LOCK:
            self.instances_created += count

    def pruned(self, count: int = 1):
        with _STATS_LOCK:
            self.instances_pruned += count

    def reached_depth(self, depth: int):
        with _STATS_LOCK:
            self.recursion_depth = max(self.recursion_depth, depth)

    def add_time(self, seconds: float):
        with _STATS_LOCK:
            self.wall_time += seconds

    def as_dict(self) -> Dict[str, Any]:
        return BranchStats.Schema().dump(self)


@dataclass
class GenSpec:
    family: GraphFamily
    n: int
    edge_probability: float = 0.5
    parts: List[int] = field(default_factory=list)
    seed: int = 0
    list_density: float = 1.0
    # size of the clique side of a split graph, drawn at random when absent
    clique_size: Optional[int] = None

    Schema: ClassVar[Type[Schema]] = Schema  # type: ignore

    def __post_init__(self):
        if self.family == GraphFamily.COMPLETE_MULTIPARTITE:
            if not self.parts or any(p < 0 for p in self.parts):
                raise InputError("a complete multipartite graph needs a nonempty list of part sizes")
            self.n = sum(self.parts)
        if self.n < 1:
            raise InputError(f"n must be at least 1, got {self.n}")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise InputError(f"edge probability must lie in [0, 1], got {self.edge_probability}")
        if not 0.0 < self.list_density <= 1.0:
            raise InputError(f"list density must lie in (0, 1], got {self.list_density}")
        if self.clique_size is not None and not 0 <= self.clique_size <= self.n:
            raise InputError(f"clique size must lie in [0, n], got {self.clique_size}")
        if self.seed < 0:
            raise InputError(f"seed must be non-negative, got {self.seed}")


@dataclass
class RunReport:
    status: RunStatus
    command: str = "solve"
    coloring: Optional[Dict[str, int]] = None
    stats: Optional[BranchStats] = None
    elapsed_ms: float = 0.0
    k: Optional[int] = None
    p5_free: Optional[bool] = None
    witness: Optional[List[str]] = None
    chromatic_number: Optional[int] = None
    structures: Optional[List[Dict[str, Any]]] = None
    verified: Optional[bool] = None
    message: Optional[str] = None
    rows: Optional[List[Dict[str, Any]]] = None

    Schema: ClassVar[Type[Schema]] = Schema  # type: ignore
