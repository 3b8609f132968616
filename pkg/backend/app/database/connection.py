import logging
from collections.abc import AsyncIterator
from contextlib import asynccontextmanager

from sqlalchemy.ext.asyncio import (
    AsyncEngine,
    AsyncSession,
    async_sessionmaker,
    create_async_engine,
)
from sqlalchemy.pool import StaticPool
from sqlmodel import SQLModel

from app.core.config import settings

logger = logging.getLogger(__name__)


def make_engine(url: str, *, echo: bool = False) -> AsyncEngine:
    """Async engine for the witness store"""
    if url.endswith(":memory:"):
        # One shared connection, otherwise every checkout sees an empty database
        return create_async_engine(url, echo=echo, poolclass=StaticPool)
    return create_async_engine(url, echo=echo)


def make_session_factory(bind: AsyncEngine) -> async_sessionmaker[AsyncSession]:
    return async_sessionmaker(bind=bind, class_=AsyncSession, expire_on_commit=False)


engine = make_engine(settings.database_url, echo=settings.debug)
AsyncSessionLocal = make_session_factory(engine)


async def create_tables(bind: AsyncEngine = engine) -> None:
    """Create the witness tables"""
    # Register the table models on SQLModel.metadata
    from app.models import witness  # noqa: F401

    async with bind.begin() as conn:
        await conn.run_sync(SQLModel.metadata.create_all)
    logger.info("witness store ready at %s", bind.url.render_as_string(hide_password=True))


@asynccontextmanager
async def session_scope(
    factory: async_sessionmaker[AsyncSession] = AsyncSessionLocal,
) -> AsyncIterator[AsyncSession]:
    """A session that commits when the block succeeds and rolls back when it raises"""
    async with factory() as session:
        try:
            yield session
            await session.commit()
        except Exception:
            await session.rollback()
            raise


async def get_db_session() -> AsyncIterator[AsyncSession]:
    """FastAPI dependency wrapping session_scope"""
    async with session_scope() as session:
        yield session
