"""
API tests for verification run endpoints (list, retrieve, stats, dispatch),
the example registry and the engine endpoints.
"""
import pytest

from shiftlab.adapters.django.services import (
    RunTracker,
    register_verification_run,
)
from shiftlab.biseq import finite_support, parse_biseq, seq_equal

pytestmark = [pytest.mark.api]

BASE_URL = "/api/v1/shiftlab"
RUNS_URL = f"{BASE_URL}/runs"

ONE_AT_ZERO = "left=const:0;center@0=[1];right=const:0"


@pytest.fixture
def run(user, db):
    return register_verification_run(
        run_id="api-run-001",
        example_id="arre",
        created_by=user,
        metadata={"seed": 5},
    )


@pytest.fixture
def second_run(db):
    created = register_verification_run(
        run_id="api-run-002", example_id="exam2"
    )
    RunTracker.update_run_status("api-run-002", "PASSED")
    return created


def _items(data):
    return data["results"] if "results" in data else data


class TestListRuns:
    def test_list_requires_auth(self, api_client):
        response = api_client.get(RUNS_URL + "/")
        assert response.status_code == 403

    def test_list_returns_runs(self, authenticated_client, run, second_run):
        response = authenticated_client.get(RUNS_URL + "/")
        assert response.status_code == 200
        data = response.json()
        assert data["count"] == 2
        assert {row["run_id"] for row in _items(data)} == {
            "api-run-001", "api-run-002",
        }
        assert "result" not in _items(data)[0]

    def test_list_filter_by_example(self, authenticated_client, run, second_run):
        response = authenticated_client.get(
            RUNS_URL + "/", {"example_id": "exam2"}
        )
        assert response.status_code == 200
        assert [row["run_id"] for row in _items(response.json())] == [
            "api-run-002"
        ]

    def test_list_filter_by_status(self, authenticated_client, run, second_run):
        response = authenticated_client.get(RUNS_URL + "/", {"status": "PENDING"})
        assert [row["run_id"] for row in _items(response.json())] == [
            "api-run-001"
        ]

    def test_list_filter_by_created_by(
        self, authenticated_client, user, run, second_run
    ):
        response = authenticated_client.get(
            RUNS_URL + "/", {"created_by": user.id}
        )
        assert [row["run_id"] for row in _items(response.json())] == [
            "api-run-001"
        ]

    def test_page_size(self, authenticated_client, run, second_run):
        response = authenticated_client.get(RUNS_URL + "/", {"page_size": 1})
        data = response.json()
        assert data["count"] == 2
        assert len(data["results"]) == 1


class TestRetrieveRun:
    def test_retrieve_requires_auth(self, api_client, run):
        response = api_client.get(f"{RUNS_URL}/{run.pk}/")
        assert response.status_code == 403

    def test_retrieve_returns_run(self, authenticated_client, user, run):
        response = authenticated_client.get(f"{RUNS_URL}/{run.pk}/")
        assert response.status_code == 200
        data = response.json()
        assert data["run_id"] == "api-run-001"
        assert data["example_id"] == "arre"
        assert data["status"] == "PENDING"
        assert data["metadata"] == {"seed": 5}
        assert data["created_by_username"] == user.username
        assert data["is_completed"] is False
        assert data["duration"] is None

    def test_retrieve_404_for_unknown_id(self, authenticated_client):
        response = authenticated_client.get(f"{RUNS_URL}/99999/")
        assert response.status_code == 404


class TestStatsAction:
    def test_stats_returns_counts(self, authenticated_client, run, second_run):
        response = authenticated_client.get(RUNS_URL + "/stats/")
        assert response.status_code == 200
        data = response.json()
        assert data["total"] == 2
        assert data["pending"] == 1
        assert data["passed"] == 1
        assert set(data["by_example"]) == {"arre", "exam2"}

    def test_stats_filter_by_example(self, authenticated_client, run, second_run):
        response = authenticated_client.get(
            RUNS_URL + "/stats/", {"example_id": "arre"}
        )
        assert response.json()["total"] == 1


class TestDispatchAction:
    def test_dispatch_requires_auth(self, api_client, db):
        response = api_client.post(
            RUNS_URL + "/dispatch/", {"example_id": "arre-ambiguity"},
            format="json",
        )
        assert response.status_code == 403

    def test_dispatch_runs_inline(self, authenticated_client, user):
        response = authenticated_client.post(
            RUNS_URL + "/dispatch/",
            {"example_id": "arre-ambiguity", "seed": 6},
            format="json",
        )
        assert response.status_code == 201
        data = response.json()
        assert data["example_id"] == "arre-ambiguity"
        assert data["status"] == "PASSED"
        assert data["created_by"] == user.id
        assert data["result"]["seed"] == 6
        assert data["result"]["summary"]["total"] == 4
        assert data["is_completed"] is True

    def test_dispatch_unknown_example(self, authenticated_client):
        response = authenticated_client.post(
            RUNS_URL + "/dispatch/", {"example_id": "nope"}, format="json",
        )
        assert response.status_code == 400
        assert "nope" in response.json()["example_id"]

    def test_dispatch_requires_example_id(self, authenticated_client):
        response = authenticated_client.post(
            RUNS_URL + "/dispatch/", {}, format="json",
        )
        assert response.status_code == 400


class TestExamples:
    def test_list_requires_auth(self, api_client):
        assert api_client.get(BASE_URL + "/examples/").status_code == 403

    def test_list(self, authenticated_client):
        response = authenticated_client.get(BASE_URL + "/examples/")
        assert response.status_code == 200
        ids = [row["example_id"] for row in response.json()]
        assert "arre-ambiguity" in ids
        assert ids == sorted(ids)


class TestEngineEndpoints:
    def test_sequence_eval(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/sequences/eval/",
            {"seq": "left=const:0;center@0=[1,2];right=const:0", "at": 1},
            format="json",
        )
        assert response.status_code == 200
        assert response.json() == {"position": 1, "symbol": 2}

    def test_sequence_eval_bad_text(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/sequences/eval/", {"seq": "garbage", "at": 0},
            format="json",
        )
        assert response.status_code == 400
        assert "error" in response.json()

    def test_morphism_window(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/morphisms/apply/",
            {"rule": "arre", "seq": ONE_AT_ZERO, "window_lo": -1, "window_hi": 1},
            format="json",
        )
        assert response.status_code == 200
        assert response.json() == {"window": [-1, 1], "word": [2, 1, 0]}

    def test_morphism_full_image(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/morphisms/apply/",
            {"rule": "arre", "seq": ONE_AT_ZERO},
            format="json",
        )
        assert response.status_code == 200
        image = parse_biseq(response.json()["seq"])
        assert seq_equal(image, finite_support([2, 1], -1))

    def test_morphism_full_image_unavailable(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/morphisms/apply/",
            {
                "rule": "arre",
                "seq": "left=arith:1,1;center@0=[0];right=arith:1,1",
            },
            format="json",
        )
        assert response.status_code == 422

    def test_morphism_rejects_table_rules(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/morphisms/apply/",
            {"rule": "windowed:/etc/passwd", "seq": ONE_AT_ZERO},
            format="json",
        )
        assert response.status_code == 400
        assert "rule" in response.json()

    def test_morphism_half_window(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/morphisms/apply/",
            {"rule": "arre", "seq": ONE_AT_ZERO, "window_lo": 0},
            format="json",
        )
        assert response.status_code == 400

    def test_invert_preimage(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/arre/invert/",
            {"seq": "left=const:0;center@-1=[2,1];right=const:0"},
            format="json",
        )
        assert response.status_code == 200
        data = response.json()
        assert data["result"] == "preimage"
        assert seq_equal(parse_biseq(data["seq"]), finite_support([1]))

    def test_invert_not_in_image(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/arre/invert/", {"seq": ONE_AT_ZERO}, format="json",
        )
        assert response.status_code == 200
        assert response.json()["result"] == "NOT-IN-IMAGE"

    def test_invert_inconclusive(self, authenticated_client):
        response = authenticated_client.post(
            BASE_URL + "/arre/invert/",
            {
                "seq": "left=const:0;center@-2=[16,16,8,4,1];right=const:0",
                "nmax": 1,
            },
            format="json",
        )
        assert response.status_code == 200
        data = response.json()
        assert data["result"] == "INCONCLUSIVE"
        assert seq_equal(
            parse_biseq(data["candidate"]), finite_support([8, 4, 2, 1], -1)
        )

    def test_engine_requires_auth(self, api_client):
        response = api_client.post(
            BASE_URL + "/arre/invert/", {"seq": ONE_AT_ZERO}, format="json",
        )
        assert response.status_code == 403
