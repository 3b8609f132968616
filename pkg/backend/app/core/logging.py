import logging

from app.core.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | int | None = None) -> None:
    """Configure root logging for the CLI, scripts and the API process"""
    level = level if level is not None else settings.log_level
    if isinstance(level, str):
        level = level.upper()

    # basicConfig is a no-op once a handler exists, so the level is applied separately
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
