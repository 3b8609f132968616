import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.core.config import settings
from app.core.exceptions import IntervalColoringError
from app.core.logging import configure_logging
from app.database.connection import create_tables, engine
from app.routers import bounds, colorings, constructions, witnesses

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(_app: FastAPI):
    """Application lifespan events"""
    configure_logging()
    await create_tables()
    yield
    await engine.dispose()


# Create FastAPI app
app = FastAPI(
    title=settings.app_name,
    version=settings.version,
    openapi_url=f"{settings.api_prefix}/openapi.json",
    lifespan=lifespan,
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(IntervalColoringError)
async def interval_coloring_error_handler(_request: Request, exc: IntervalColoringError):
    """Domain errors are client errors"""
    logger.debug("request rejected: %s", exc)
    return JSONResponse(
        status_code=422,
        content={"detail": str(exc), "error": type(exc).__name__},
    )


# Include routers
app.include_router(colorings.router, prefix=settings.api_prefix)
app.include_router(constructions.router, prefix=settings.api_prefix)
app.include_router(bounds.router, prefix=settings.api_prefix)
app.include_router(witnesses.router, prefix=settings.api_prefix)


@app.get("/")
async def root():
    """Service index"""
    return {
        "message": f"Welcome to {settings.app_name}",
        "version": settings.version,
        "status": "healthy",
        "resources": [
            f"{settings.api_prefix}/{name}"
            for name in ("colorings", "constructions", "bounds", "witnesses")
        ],
    }


@app.get("/health")
async def health_check():
    """Detailed health check"""
    return {"status": "healthy", "service": settings.app_name}
