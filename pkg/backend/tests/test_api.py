import asyncio
import threading

from httpx import AsyncClient
from sqlalchemy.ext.asyncio import AsyncSession

from app.models.witness import Witness
from app.routers import bounds as bounds_router


class TestColoringAPI:
    """Test coloring verification and conversion endpoints"""

    async def test_verify_valid(self, client: AsyncClient, k6_document):
        """Test verifying the 7-coloring of K6"""
        response = await client.post("/api/v1/colorings/verify", json=k6_document)

        assert response.status_code == 200
        data = response.json()
        assert data["valid"] is True
        assert data["t"] == 7
        assert data["failure"] is None

    async def test_verify_invalid(self, client: AsyncClient, broken_k4_document):
        """Test that a spectrum gap is reported, not raised"""
        response = await client.post("/api/v1/colorings/verify", json=broken_k4_document)

        assert response.status_code == 200
        data = response.json()
        assert data["valid"] is False
        assert data["failure"]["kind"] == "not_interval"
        assert data["failure"]["vertex"] == 0
        assert data["failure"]["color"] == 3

    async def test_verify_partial(self, client: AsyncClient, k6_document):
        """Test that a partial coloring is a 422 naming the field"""
        k6_document["edges"] = k6_document["edges"][:3]
        response = await client.post("/api/v1/colorings/verify", json=k6_document)

        assert response.status_code == 422
        data = response.json()
        assert data["error"] == "DocumentParseError"
        assert "edges" in data["detail"]

    async def test_shift(self, client: AsyncClient, k6_document):
        """Test the shift vector endpoint"""
        response = await client.post("/api/v1/colorings/shift", json=k6_document)

        assert response.status_code == 200
        assert response.json() == {"n": 3, "t": 7, "shift_vector": [1, 1], "total": 2}

    async def test_shift_of_invalid_coloring(self, client: AsyncClient, broken_k4_document):
        """Test that the shift vector needs an interval coloring"""
        response = await client.post("/api/v1/colorings/shift", json=broken_k4_document)

        assert response.status_code == 422
        assert response.json()["error"] == "PreconditionError"

    async def test_convert_round_trip(self, client: AsyncClient, k6_document):
        """Test coloring -> factorization -> coloring"""
        response = await client.post("/api/v1/colorings/convert", json=k6_document)
        assert response.status_code == 200
        factorization = response.json()
        assert len(factorization["matchings"]) == 5

        response = await client.post("/api/v1/factorizations/convert", json=factorization)
        assert response.status_code == 200
        coloring = response.json()
        assert coloring["t"] == 7
        assert coloring["metadata"]["shift_vector"] == [1, 1]


class TestConstructionAPI:
    """Test construction endpoints"""

    async def test_three_five(self, client: AsyncClient):
        """Test the 14-coloring of K10"""
        response = await client.get("/api/v1/constructions/three-five", params={"n": 5})

        assert response.status_code == 200
        data = response.json()
        assert data["t"] == 14
        assert len(data["edges"]) == 45
        assert data["metadata"]["method"] == "three-five"

    async def test_factorization_format(self, client: AsyncClient):
        """Test requesting a labeled factorization"""
        response = await client.get(
            "/api/v1/constructions/best", params={"n": 4, "format": "factorization"}
        )

        assert response.status_code == 200
        data = response.json()
        assert len(data["matchings"]) == 7
        assert sum(1 for entry in data["matchings"] if entry["label"] != "free") == 4

    async def test_unknown_method(self, client: AsyncClient):
        """Test that unknown methods fail validation"""
        response = await client.get("/api/v1/constructions/greedy", params={"n": 3})
        assert response.status_code == 422

    async def test_composite_by_name(self, client: AsyncClient):
        """Test that composite needs two input factorizations"""
        response = await client.get("/api/v1/constructions/composite", params={"n": 4})

        assert response.status_code == 422
        assert response.json()["error"] == "PreconditionError"

    async def test_composite(self, client: AsyncClient, k4_factorization_document):
        """Test the 11-coloring of K8 from two K4 factorizations"""
        response = await client.post(
            "/api/v1/constructions/composite",
            json={"left": k4_factorization_document, "right": k4_factorization_document},
        )

        assert response.status_code == 200
        data = response.json()
        assert data["n"] == 4
        assert data["t"] == 11


class TestBoundsAPI:
    """Test bound endpoints"""

    async def test_reference(self, client: AsyncClient):
        """Test the closed forms for K22"""
        response = await client.get("/api/v1/bounds/11")

        assert response.status_code == 200
        data = response.json()
        assert data["lower_bound"] == 37
        assert data["upper_bound"] == 37
        assert data["disproved"]["conjecture_log"] == 36

    async def test_certificate(self, client: AsyncClient):
        """Test the K14 certificate"""
        response = await client.get("/api/v1/bounds/7/certificate", params={"total": 9})

        assert response.status_code == 200
        data = response.json()
        assert data["empty"] is True
        assert data["claimed_bound"] == 21

    async def test_certified(self, client: AsyncClient):
        """Test the certified descent for K10"""
        response = await client.get("/api/v1/bounds/5/certified")

        assert response.status_code == 200
        data = response.json()
        assert data["bound"] == 14
        assert [entry["total"] for entry in data["certificates"]] == [7, 6, 5]

    async def test_certification_limit(self, client: AsyncClient):
        """Test that certification is refused above the configured size"""
        response = await client.get("/api/v1/bounds/20/certified")
        assert response.status_code == 422

    async def test_table(self, client: AsyncClient):
        """Test the first four columns"""
        response = await client.get("/api/v1/bounds/table", params={"max_n": 4})

        assert response.status_code == 200
        assert response.json() == [
            {"n": 1, "lower": 1, "exact": 1, "upper": 1},
            {"n": 2, "lower": 4, "exact": 4, "upper": 4},
            {"n": 3, "lower": 7, "exact": 7, "upper": 7},
            {"n": 4, "lower": 11, "exact": 11, "upper": 11},
        ]

    async def test_m_filter(self, client: AsyncClient):
        """Test m(3, 5)"""
        response = await client.get("/api/v1/bounds/m-filter", params={"k": 3, "r": 5})

        assert response.status_code == 200
        assert response.json() == {"k": 3, "r": 5, "value": 12, "vector": [1, 1, 3]}

    async def test_m_filter_infeasible(self, client: AsyncClient):
        """Test that an unattainable sum is a 404"""
        response = await client.get("/api/v1/bounds/m-filter", params={"k": 3, "r": 6})

        assert response.status_code == 404
        assert response.json()["detail"] == "No feasible prefix"

    async def test_table_does_not_block_health(self, client: AsyncClient, monkeypatch):
        """Test that a long table computation leaves other requests served"""
        started, release = threading.Event(), threading.Event()

        def slow_table(max_n, workers=1):
            started.set()
            release.wait(timeout=5)
            return []

        monkeypatch.setattr(bounds_router, "table_columns", slow_table)
        pending = asyncio.create_task(client.get("/api/v1/bounds/table", params={"max_n": 2}))
        async with asyncio.timeout(2):
            while not started.is_set():
                await asyncio.sleep(0.01)

        health = await asyncio.wait_for(client.get("/health"), timeout=2)
        assert health.status_code == 200
        assert not pending.done()

        release.set()
        response = await pending
        assert response.status_code == 200
        assert response.json() == []


class TestWitnessAPI:
    """Test the witness store"""

    async def test_create_witness(self, client: AsyncClient, db_session: AsyncSession, k6_document):
        """Test storing a verified coloring"""
        response = await client.post("/api/v1/witnesses", json={"document": k6_document})

        assert response.status_code == 200
        data = response.json()
        assert data["id"] is not None
        assert data["n"] == 3
        assert data["t"] == 7
        assert data["method"] == "three-five"
        assert data["shift_vector"] == "1,1"
        assert data["document"]["t"] == 7

    async def test_create_invalid_witness(
        self, client: AsyncClient, db_session: AsyncSession, broken_k4_document
    ):
        """Test that invalid colorings are not stored"""
        response = await client.post("/api/v1/witnesses", json={"document": broken_k4_document})
        assert response.status_code == 422

        response = await client.get("/api/v1/witnesses")
        assert response.json() == []

    async def test_list_witnesses(
        self, client: AsyncClient, db_session: AsyncSession, k6_document
    ):
        """Test listing, ordering and filtering by n"""
        k10 = await client.get("/api/v1/constructions/three-five", params={"n": 5})
        await client.post("/api/v1/witnesses", json={"document": k6_document})
        await client.post("/api/v1/witnesses", json={"document": k10.json(), "method": "manual"})

        response = await client.get("/api/v1/witnesses")
        assert response.status_code == 200
        data = response.json()
        assert [witness["t"] for witness in data] == [14, 7]
        assert data[0]["method"] == "manual"

        response = await client.get("/api/v1/witnesses", params={"n": 3})
        assert [witness["n"] for witness in response.json()] == [3]

    async def test_get_witness(self, client: AsyncClient, db_session: AsyncSession, k6_document):
        """Test fetching a witness by ID"""
        created = await client.post("/api/v1/witnesses", json={"document": k6_document})
        witness_id = created.json()["id"]

        response = await client.get(f"/api/v1/witnesses/{witness_id}")
        assert response.status_code == 200
        assert response.json()["id"] == witness_id

    async def test_get_missing_witness(self, client: AsyncClient, db_session: AsyncSession):
        """Test 404 for an unknown ID"""
        response = await client.get("/api/v1/witnesses/999")
        assert response.status_code == 404
        assert response.json()["detail"] == "Witness not found"

    async def test_delete_witness(
        self, client: AsyncClient, db_session: AsyncSession, k6_document
    ):
        """Test deleting a witness"""
        created = await client.post("/api/v1/witnesses", json={"document": k6_document})
        witness_id = created.json()["id"]

        response = await client.delete(f"/api/v1/witnesses/{witness_id}")
        assert response.status_code == 200
        assert response.json()["message"] == "Witness deleted successfully"

        assert await db_session.get(Witness, witness_id) is None
