"""Configuration management for chipfire."""

import logging
import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

load_dotenv()

STRATEGIES = ("ascending", "descending")


@dataclass
class SearchConfig:
    """Exhaustive search settings.

    The budget is wall-clock seconds per search; a search that runs out of
    budget reports so and never claims a gonality value.
    """

    threads: int = field(default=1)
    budget_seconds: float = field(default=600.0)
    strategy: str = field(default="ascending")
    # Candidate divisors handed to a worker at a time
    chunk_size: int = field(default=512)


@dataclass
class ServerConfig:
    """HTTP service configuration."""

    host: str = field(default="127.0.0.1")
    port: int = field(default=8082)


@dataclass
class LoggingConfig:
    """Logging configuration."""

    level: str = field(default="INFO")


@dataclass
class Config:
    """Complete chipfire configuration."""

    search: SearchConfig = field(default_factory=SearchConfig)
    server: ServerConfig = field(default_factory=ServerConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables."""
        return cls(
            search=SearchConfig(
                threads=int(os.getenv("CHIPFIRE_THREADS", "1")),
                budget_seconds=float(os.getenv("CHIPFIRE_BUDGET", "600")),
                strategy=os.getenv("CHIPFIRE_STRATEGY", "ascending").lower(),
                chunk_size=int(os.getenv("CHIPFIRE_CHUNK_SIZE", "512")),
            ),
            server=ServerConfig(
                host=os.getenv("CHIPFIRE_HOST", "127.0.0.1"),
                port=int(os.getenv("CHIPFIRE_PORT", "8082")),
            ),
            logging=LoggingConfig(
                level=os.getenv("CHIPFIRE_LOG_LEVEL", "INFO").upper(),
            ),
        )

    def validate(self) -> None:
        """Validate configuration."""
        if self.search.threads < 1:
            raise ValueError("CHIPFIRE_THREADS must be at least 1")

        if self.search.budget_seconds <= 0:
            raise ValueError("CHIPFIRE_BUDGET must be positive")

        if self.search.strategy not in STRATEGIES:
            raise ValueError(
                f"CHIPFIRE_STRATEGY must be one of {', '.join(STRATEGIES)}"
            )

        if self.search.chunk_size < 1:
            raise ValueError("CHIPFIRE_CHUNK_SIZE must be at least 1")

        if not 1 <= self.server.port <= 65535:
            raise ValueError("CHIPFIRE_PORT must be between 1 and 65535")

        if not isinstance(logging.getLevelName(self.logging.level), int):
            raise ValueError(f"CHIPFIRE_LOG_LEVEL is not a log level: {self.logging.level}")
