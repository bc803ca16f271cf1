"""Experiment reports as JSON documents with a fixed schema version."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .. import _kernels

SCHEMA_VERSION = 1


class Verdict(str, Enum):
    CONFIRMED = "CONFIRMED"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"

    @property
    def exit_code(self) -> int:
        return {"CONFIRMED": 0, "REFUTED": 2, "INCONCLUSIVE": 3}[self.value]


@dataclass
class ExperimentReport:
    """Config echo, measurements, thresholds and verdict of one experiment.

    ``runtime_seconds`` is the only field that differs between reruns.
    """

    experiment: str
    config: dict[str, Any]
    measurements: dict[str, Any] = field(default_factory=dict)
    thresholds: dict[str, Any] = field(default_factory=dict)
    verdict: Verdict | None = None
    notes: list[str] = field(default_factory=list)
    runtime_seconds: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "experiment": self.experiment,
            "config": {**self.config, "rng": "xoshiro256**", "kernel_backend": _kernels.BACKEND},
            "thresholds": self.thresholds,
            "measurements": self.measurements,
            "verdict": self.verdict.value if self.verdict else None,
            "notes": self.notes,
            "runtime_seconds": round(self.runtime_seconds, 3),
        }

    def reproducible_part(self) -> dict[str, Any]:
        d = self.to_dict()
        del d["runtime_seconds"]
        d["config"].pop("kernel_backend")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False
