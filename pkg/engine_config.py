"""
Engine configuration: a plain dict merged over the defaults of config_schema.json.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from exactla import ContactEngineError

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).resolve().parent / "config_schema.json"
OUTPUT_FORMATS = ("json", "markdown")


class ConfigError(ContactEngineError):
    """Unreadable or out-of-range configuration."""


@dataclass
class EngineConfig:
    max_degree: int = 4
    jacobi_degree: int = 3
    oracle_degree: int = 4
    bounded_check_degree: int = 3
    freeman_extra_steps: int = 2
    max_workers: int = 2
    output_format: str = "json"
    log_level: str = "INFO"
    n: int = 1
    signature: Tuple[int, int] = (1, 0)
    raw: Dict[str, Any] = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, config: Optional[Dict[str, Any]] = None) -> "EngineConfig":
        config = config or {}
        defaults = config.get("defaults", {})
        n = int(defaults.get("n", 1))
        result = cls(
            max_degree=int(config.get("max_degree", 4)),
            jacobi_degree=int(config.get("jacobi_degree", 3)),
            oracle_degree=int(config.get("oracle_degree", 4)),
            bounded_check_degree=int(config.get("bounded_check_degree", 3)),
            freeman_extra_steps=int(config.get("freeman_extra_steps", 2)),
            max_workers=int(config.get("max_workers", 2)),
            output_format=str(config.get("output_format", "json")),
            log_level=str(config.get("log_level", "INFO")).upper(),
            n=n,
            signature=tuple(defaults.get("signature", (n, 0))),
            raw=dict(config),
        )
        result.validate()
        return result

    def validate(self) -> None:
        if self.max_degree < 2:
            raise ConfigError(f"max_degree must be >= 2, got {self.max_degree}")
        if self.jacobi_degree < 0 or self.oracle_degree < 0:
            raise ConfigError("jacobi_degree and oracle_degree must be >= 0")
        if self.max_workers < 1:
            raise ConfigError("max_workers must be >= 1")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output_format must be one of {OUTPUT_FORMATS}")
        if len(self.signature) != 2 or sum(self.signature) != self.n or min(self.signature) < 0:
            raise ConfigError(f"signature {list(self.signature)} does not fit n = {self.n}")

    def context(self) -> Dict[str, Any]:
        return {"n": self.n, "signature": list(self.signature), "max_degree": self.max_degree}


def schema_defaults(path: Path = SCHEMA_PATH) -> Dict[str, Any]:
    """Default values declared in the configuration schema."""
    with open(path, encoding="utf-8") as handle:
        schema = json.load(handle)
    result: Dict[str, Any] = {}
    for key, entry in schema.get("properties", {}).items():
        if entry.get("type") == "object":
            nested = {k: v["default"] for k, v in entry.get("properties", {}).items() if "default" in v}
            if nested:
                result[key] = nested
        elif "default" in entry:
            result[key] = entry["default"]
    return result


def load_config(path: Optional[str] = None) -> EngineConfig:
    """Schema defaults, overridden by the JSON file at ``path`` when given."""
    config = schema_defaults()
    if path:
        try:
            with open(path, encoding="utf-8") as handle:
                overrides = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}")
        given = overrides.pop("defaults", {})
        defaults = dict(config.get("defaults", {}))
        if "n" in given and "signature" not in given:
            # the schema signature belongs to the schema n
            defaults.pop("signature", None)
        defaults.update(given)
        config.update(overrides)
        config["defaults"] = defaults
        logger.debug(f"Loaded config overrides from {path}: {sorted(overrides)}")
    return EngineConfig.from_dict(config)
