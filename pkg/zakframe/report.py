# zakframe/report.py
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

from . import state
from .errors import ConfigError

SCHEMA_VERSION = "1"


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    timestamp: str = field(default_factory=utc_now)
    schema_version: str = SCHEMA_VERSION

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "timestamp": self.timestamp,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return state.dumps(self.to_dict())

    def canonical_body(self) -> str:
        """Serialization without the timestamp; equal for equal runs."""
        body = self.to_dict()
        body.pop("timestamp")
        return state.dumps(body)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(f"unsupported report schema {data.get('schema_version')!r}")
        try:
            return cls(command=data["command"], inputs=data["inputs"], outputs=data["outputs"],
                       warnings=list(data["warnings"]), timestamp=data["timestamp"],
                       schema_version=data["schema_version"])
        except KeyError as e:
            raise ConfigError(f"report is missing the {e.args[0]!r} field") from e

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise ConfigError(f"report is not valid JSON: {e}") from e

    def save(self, path: str | Path) -> Path:
        return state.save_report(self.to_dict(), path)

    @classmethod
    def load(cls, path: str | Path) -> "RunReport":
        return cls.from_dict(state.load_report(path))
