from enum import Enum

from pydantic_settings import BaseSettings, SettingsConfigDict


class StateMode(str, Enum):
    """How a cooking action rewrites the state of a food class"""
    REPLACE = "replace"
    PREPEND = "prepend"


class LookAhead(str, Enum):
    """Which tentative insertees a host gives up for its own future insertion"""
    FLAT = "flat"
    DEPENDENTS = "dependents"


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(env_file=".env", env_prefix="RECIPE_", case_sensitive=True)

    PROJECT_NAME: str = "Recipe Planner"
    VERSION: str = "1.0.0"

    # Scheduling Settings
    ORDER_LIMIT: int = 100_000
    LOOKAHEAD: LookAhead = LookAhead.FLAT

    # Knowledge Base Settings
    STATE_MODE: StateMode = StateMode.REPLACE
    KB_FORMAT: int = 1

    # Oracle Settings
    ORACLE_MAX_ORDERS_SIZE: int = 8
    ORACLE_MAX_PLAN_SIZE: int = 7
    ARTIFACTS_DIR: str = "test-artifacts/oracle"

    # Logging Settings
    LOG_LEVEL: str = "WARNING"


# Create settings instance
settings = Settings()
