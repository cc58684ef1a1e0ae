"""
Process-level settings read from the environment
"""

import os
from dataclasses import dataclass


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


@dataclass
class Settings:
    """Runtime settings that are not part of an experiment definition"""

    log_dir: str = "logs"
    data_dir: str = "data"
    threads: int = 1
    master_seed: int = 0
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Load settings from environment variables

        Variables use the GSMODAC_ prefix; a .env file is honoured when the
        entry point has called load_dotenv().

        Returns:
            Settings instance with values from environment
        """
        threads = _env_int("GSMODAC_THREADS", 1)
        if threads < 1:
            raise ValueError("GSMODAC_THREADS must be at least 1")

        return cls(
            log_dir=os.getenv("GSMODAC_LOG_DIR", "logs"),
            data_dir=os.getenv("GSMODAC_DATA_DIR", "data"),
            threads=threads,
            master_seed=_env_int("GSMODAC_SEED", 0),
            log_level=os.getenv("GSMODAC_LOG_LEVEL", "INFO").upper(),
        )
