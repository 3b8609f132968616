import pytest
import pytest_asyncio
from httpx import ASGITransport, AsyncClient
from sqlalchemy.ext.asyncio import AsyncSession
from sqlmodel import SQLModel

from app.database.connection import (
    create_tables,
    get_db_session,
    make_engine,
    make_session_factory,
    session_scope,
)
from app.main import app
from app.services import search
from app.services.constructions import construct_three_five, round_robin_factorization
from app.services.documents import coloring_to_document, factorization_to_document
from app.services.equivalence import factorization_to_coloring

# Test database URL - use in-memory SQLite for fast tests
TEST_DATABASE_URL = "sqlite+aiosqlite:///:memory:"

test_engine = make_engine(TEST_DATABASE_URL)
TestAsyncSessionLocal = make_session_factory(test_engine)


async def get_test_db_session():
    """Test database session dependency override"""
    async with session_scope(TestAsyncSessionLocal) as session:
        yield session


@pytest.fixture
def session_factory():
    """Session factory bound to the in-memory test engine"""
    return TestAsyncSessionLocal


@pytest_asyncio.fixture(scope="function")
async def db_session():
    """Create a test database session for each test"""
    await create_tables(test_engine)
    app.dependency_overrides[get_db_session] = get_test_db_session

    async with TestAsyncSessionLocal() as session:
        yield session

    app.dependency_overrides.clear()
    async with test_engine.begin() as conn:
        await conn.run_sync(SQLModel.metadata.drop_all)


@pytest_asyncio.fixture
async def client(db_session: AsyncSession):
    """Create a test client for making HTTP requests"""
    transport = ASGITransport(app=app)
    async with AsyncClient(transport=transport, base_url="http://testserver") as ac:
        yield ac


@pytest.fixture
def k6_factorization():
    """Labeled factorization of K6 with two splitted matchings (t = 7)"""
    return construct_three_five(3)


@pytest.fixture
def k6_coloring(k6_factorization):
    """Interval 7-coloring of K6"""
    return factorization_to_coloring(k6_factorization)


@pytest.fixture
def k10_coloring():
    """Interval 14-coloring of K10"""
    return factorization_to_coloring(construct_three_five(5))


@pytest.fixture
def k4_round_robin():
    """Interval 3-coloring of K4"""
    return factorization_to_coloring(round_robin_factorization(2))


@pytest.fixture
def k6_document(k6_coloring):
    """K6 coloring as a JSON-ready document"""
    return coloring_to_document(k6_coloring, method="three-five").model_dump(
        mode="json", exclude_none=True
    )


@pytest.fixture
def k4_factorization_document():
    """K4 labeled factorization (t = 4) as a JSON-ready document"""
    return factorization_to_document(construct_three_five(2)).model_dump(
        mode="json", exclude_none=True
    )


@pytest.fixture
def broken_k4_document():
    """K4 coloring whose spectrum at vertex 0 is {1, 2, 4}"""
    colors = {(0, 1): 1, (0, 2): 2, (0, 3): 4, (1, 2): 3, (1, 3): 2, (2, 3): 1}
    return {
        "format_version": 1,
        "n": 2,
        "t": 4,
        "edges": [{"a": a, "b": b, "color": color} for (a, b), color in colors.items()],
    }


class InterruptedPool:
    """Process pool stand-in that runs the first ``finished`` payloads inline, then sees Ctrl-C"""

    def __init__(self, finished: int):
        self.finished = finished

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        return False

    def imap(self, fn, payloads):
        for payload in list(payloads)[: self.finished]:
            yield fn(payload)
        raise KeyboardInterrupt


@pytest.fixture
def interrupted_pool(monkeypatch):
    """Replace the sigma search pool; call with how many subtrees finish before the interrupt"""

    def install(finished: int = 0) -> None:
        monkeypatch.setattr(search, "Pool", lambda processes: InterruptedPool(finished))

    return install
