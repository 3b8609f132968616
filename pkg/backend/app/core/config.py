from pydantic import ConfigDict, Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings"""

    # App settings
    app_name: str = "Interval Coloring API"
    version: str = "0.1.0"
    debug: bool = False
    log_level: str = Field(default="INFO")

    # Database settings
    database_url: str = Field(default="sqlite+aiosqlite:///./kcolor.db")

    # API settings
    api_prefix: str = "/api/v1"
    cors_origins: list[str] = ["http://localhost:3000", "http://localhost:5173"]

    # Search settings
    search_workers: int = Field(default=1, ge=1)
    search_node_limit: int = Field(default=5_000_000, ge=1)
    search_time_limit: float = Field(default=600.0, gt=0)
    realize_attempt_nodes: int = Field(default=2_000, ge=1)

    # Bounds settings
    certify_max_n: int = Field(default=12, ge=1)

    model_config = ConfigDict(env_file=".env", extra="ignore")


settings = Settings()
