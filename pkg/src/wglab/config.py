"""Experiment configuration shared by the command line and batch runs."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field

from .errors import InvalidArgument

COMMANDS = ("sieve", "count", "arcs", "expsum", "tau", "satotate", "twisted", "singular", "conjecture")
FORMATS = ("csv", "json")
THREADS_ENV = "WGLAB_THREADS"


@dataclass
class ExperimentConfig:
    command: str
    N: list[int] = field(default_factory=list)
    k: int = 1
    u: int | None = None
    j: int = 1
    P: int | None = None
    Q: int | None = None
    grid: int | None = None
    cutoff: int | None = None
    limit: int | None = None
    range: int | None = None
    kind: str | None = None
    mode: str = "sym"
    coeff: str = "one"
    interval: tuple[float, float] | None = None
    n_list: str | None = None
    out: str | None = None
    delta_hypothesis: float = 0.5
    epsilon1: float = 0.01
    format: str = "csv"
    threads: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidArgument(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise InvalidArgument(f"format must be one of {FORMATS}")
        if not 0.5 <= self.delta_hypothesis < 1:
            raise InvalidArgument("delta_hypothesis must lie in [1/2, 1)")
        if self.epsilon1 <= 0:
            raise InvalidArgument("epsilon1 must be positive")
        if self.threads is not None and self.threads < 1:
            raise InvalidArgument("threads must be >= 1")
        self.N = [int(n) for n in self.N]
        if self.interval is not None:
            self.interval = (float(self.interval[0]), float(self.interval[1]))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if d["interval"] is not None:
            d["interval"] = list(d["interval"])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise InvalidArgument(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"bad config JSON: {exc}") from exc
        return cls.from_dict(d)

    def worker_count(self) -> int:
        return resolve_threads(self.threads)


def resolve_threads(threads: int | None) -> int:
    """Explicit value, else ``WGLAB_THREADS``, else 1."""
    if threads is not None:
        return threads
    env = os.environ.get(THREADS_ENV)
    if env is None or env == "":
        return 1
    try:
        n = int(env)
    except ValueError as exc:
        raise InvalidArgument(f"{THREADS_ENV} must be an integer") from exc
    if n < 1:
        raise InvalidArgument(f"{THREADS_ENV} must be >= 1")
    return n
