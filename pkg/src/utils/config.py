import os
from dataclasses import dataclass, replace

from dotenv import load_dotenv

from src.core.errors import ConfigError

# Load environment variables
load_dotenv()

DEFAULT_ORDER_CAP = 2000


def _int_env(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    """
    Runtime configuration.
    Values come from the environment (and a .env file if present); CLI flags
    override them through `with_overrides`.
    """
    order_cap: int = DEFAULT_ORDER_CAP
    workers: int = 1
    l21_subgroup_limit: int = 60
    l21_sample: int = 60
    max_degree: int = 256
    database_url: str = "sqlite:///sigmalab.db"
    data_dir: str = "data"

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            order_cap=_int_env("SIGMALAB_ORDER_CAP", DEFAULT_ORDER_CAP),
            workers=_int_env("SIGMALAB_WORKERS", 1),
            l21_subgroup_limit=_int_env("SIGMALAB_L21_SUBGROUP_LIMIT", 60),
            l21_sample=_int_env("SIGMALAB_L21_SAMPLE", 60),
            max_degree=_int_env("SIGMALAB_MAX_DEGREE", 256),
            database_url=os.getenv("DATABASE_URL", "sqlite:///sigmalab.db"),
            data_dir=os.getenv("DATA_DIR", "data"),
        )

    def with_overrides(self, **overrides) -> "Settings":
        """Return a copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def get_settings() -> Settings:
    return Settings.from_env()
