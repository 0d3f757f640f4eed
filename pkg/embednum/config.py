"""
Configuration management for embednum.
Computed results never depend on the environment: only debug logging is
read from it. Command-line flags override the remaining defaults.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv

DEFAULT_FACTS_PATH = Path(__file__).parent.parent / "data" / "facts.json"
OUTPUT_FORMATS = ("text", "json", "csv")


@dataclass
class Config:
    """Runtime configuration."""

    # Data
    facts_path: str

    # Logging
    debug_mode: bool

    # Output
    output_format: str = "text"
    table_max: int = 19

    @classmethod
    def from_env(cls, env_path: Optional[str] = None) -> "Config":
        """Load configuration; only EMBEDNUM_DEBUG is taken from the environment."""
        if env_path:
            load_dotenv(env_path)
        else:
            load_dotenv()

        return cls(
            facts_path=str(DEFAULT_FACTS_PATH),
            debug_mode=os.getenv("EMBEDNUM_DEBUG", "false").lower() == "true",
        )

    def validate(self) -> list[str]:
        """Validate configuration and return list of errors."""
        errors = []
        if not Path(self.facts_path).is_file():
            errors.append(f"facts file not found: {self.facts_path}")
        if self.output_format not in OUTPUT_FORMATS:
            errors.append(f"unknown output format {self.output_format!r}")
        if self.table_max < 2:
            errors.append(f"table_max must be at least 2, got {self.table_max}")
        return errors


# Global config instance (lazy loaded)
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = Config.from_env()
    return _config
