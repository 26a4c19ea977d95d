import json
import urllib.request

import pytest

from tcmnn.grid import (GridError, GridPoint, GridRequest, evaluate_grid,
                        request_from_dict, response_to_dict)
from tcmnn.service import TcmService
from tcmnn.tcm import TcmConfig, build_cache, classify

from .conftest import make_dataset


def req(points, k=1, metric="euclidean", w=4, h=4) -> GridRequest:
    return GridRequest(points=tuple(GridPoint(*p) for p in points),
                       k=k, metric=metric, width=w, height=h)


TWO_POINTS = [(0.4, 0.5, 0), (0.6, 0.5, 1)]


class TestEvaluateGrid:
    def test_two_points_split_two_cells(self, backend):
        # anchors close together: each cell center is farther from both
        # anchors than they are from each other only on its own side, so the
        # halves split cleanly
        resp = evaluate_grid(req(TWO_POINTS, w=2, h=1))
        assert resp.cells[0][0].label == 0
        assert resp.cells[0][1].label == 1

    def test_far_apart_singletons_tie_to_lowest_class(self, backend):
        # a query between two isolated single-point classes is maximally
        # strange under both hypotheses: both p-values floor at 1/(l+1) and
        # the tie-break picks class 0
        resp = evaluate_grid(req([(0.05, 0.5, 0), (0.95, 0.5, 1)], w=2, h=1))
        for cell in resp.cells[0]:
            assert cell.label == 0
            assert cell.credibility == pytest.approx(1 / 3)

    def test_every_cell_matches_direct_classify(self, backend):
        points = [(0.2, 0.3, 0), (0.3, 0.8, 0), (0.7, 0.6, 1), (0.9, 0.2, 1)]
        r = req(points, w=5, h=3)
        resp = evaluate_grid(r)
        train = make_dataset([[p[0], p[1]] for p in points],
                             [p[2] for p in points])
        config = TcmConfig(k=1)
        cache = build_cache(train, config)
        for row in range(3):
            for col in range(5):
                x = (col + 0.5) / 5
                y = (row + 0.5) / 3
                pred, _ = classify(train, cache, config, [x, y])
                cell = resp.cells[row][col]
                assert cell.label == pred.label
                assert cell.confidence == pred.confidence
                assert cell.credibility == pred.credibility

    def test_scaling_points_keeps_labels(self, backend):
        points = [(0.3, 0.4, 0), (0.8, 0.9, 1), (0.2, 0.9, 1), (0.6, 0.1, 0)]
        half = [(x * 0.5, y * 0.5, lab) for x, y, lab in points]
        # matching grid geometry: compare the scaled request on a grid whose
        # cells cover the scaled points at the same relative positions
        r1 = evaluate_grid(req(points, w=8, h=8))
        r2 = evaluate_grid(req(half, w=16, h=16))
        for row in range(8):
            for col in range(8):
                # cell centers of the half-size grid at half coordinates
                assert r2.cells[row][col].label == r1.cells[row][col].label

    def test_cell_with_training_point_still_classified(self, backend):
        # training point exactly at a cell center
        points = [(0.25, 0.5, 0), (0.75, 0.5, 1)]
        resp = evaluate_grid(req(points, w=2, h=1))
        assert resp.cells[0][0].label == 0

    def test_k_too_large(self):
        with pytest.raises(GridError) as err:
            evaluate_grid(req(TWO_POINTS, k=2))
        assert err.value.code == "k_too_large"

    def test_missing_class(self):
        with pytest.raises(GridError) as err:
            evaluate_grid(req([(0.1, 0.1, 0), (0.9, 0.9, 2)]))
        assert err.value.code == "empty_class"

    def test_bad_metric(self):
        with pytest.raises(GridError) as err:
            evaluate_grid(req(TWO_POINTS, metric="hamming"))
        assert err.value.code == "bad_metric"

    def test_resolution_cap(self):
        with pytest.raises(GridError) as err:
            evaluate_grid(req(TWO_POINTS, w=513))
        assert err.value.code == "resolution_too_large"

    def test_point_outside_unit_square(self):
        with pytest.raises(GridError) as err:
            evaluate_grid(req([(1.2, 0.5, 0), (0.8, 0.5, 1)]))
        assert err.value.code == "bad_request"

    def test_request_parsing(self):
        body = {"points": [{"x": 0.2, "y": 0.7, "label": 0},
                           {"x": 0.9, "y": 0.1, "label": 1}],
                "config": {"k": 1, "metric": "euclidean"},
                "resolution": {"w": 3, "h": 2}}
        r = request_from_dict(body)
        assert r.width == 3 and r.height == 2 and r.k == 1
        with pytest.raises(GridError) as err:
            request_from_dict({"points": []})
        assert err.value.code == "bad_request"


@pytest.fixture(scope="module")
def service():
    svc = TcmService(port=0).start()
    yield svc
    svc.shutdown()


def _get(svc, path):
    with urllib.request.urlopen(f"http://127.0.0.1:{svc.port}{path}") as r:
        return r.status, json.loads(r.read())


def _post(svc, path, body):
    data = json.dumps(body).encode()
    req_ = urllib.request.Request(
        f"http://127.0.0.1:{svc.port}{path}", data=data,
        headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req_) as r:
            return r.status, json.loads(r.read())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read())


GRID_BODY = {
    "points": [{"x": 0.2, "y": 0.7, "label": 0},
               {"x": 0.9, "y": 0.1, "label": 1}],
    "config": {"k": 1, "metric": "euclidean"},
    "resolution": {"w": 6, "h": 5},
}


class TestService:
    def test_health(self, service):
        status, body = _get(service, "/api/health")
        assert status == 200
        assert body["status"] == "ok"
        assert "version" in body

    def test_grid_matches_library(self, service):
        status, body = _post(service, "/api/grid", GRID_BODY)
        assert status == 200
        expected = response_to_dict(evaluate_grid(request_from_dict(GRID_BODY)))
        assert body == json.loads(json.dumps(expected))
        assert len(body["cells"]) == 5
        assert len(body["cells"][0]) == 6

    def test_identical_bodies_identical_responses(self, service):
        r1 = _post(service, "/api/grid", GRID_BODY)
        r2 = _post(service, "/api/grid", GRID_BODY)
        assert r1 == r2

    def test_k_too_large_gives_400_with_code(self, service):
        body = dict(GRID_BODY, config={"k": 5, "metric": "euclidean"})
        status, payload = _post(service, "/api/grid", body)
        assert status == 400
        assert payload["error"]["code"] == "k_too_large"
        assert payload["error"]["message"]

    def test_malformed_json_gives_400(self, service):
        data = b"{not json"
        req_ = urllib.request.Request(
            f"http://127.0.0.1:{service.port}/api/grid", data=data,
            headers={"Content-Type": "application/json"})
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(req_)
        assert err.value.code == 400
        assert json.loads(err.value.read())["error"]["code"] == "bad_request"

    def test_predict_endpoint(self, service):
        body = {"points": GRID_BODY["points"],
                "config": {"k": 1, "metric": "euclidean"},
                "point": {"x": 0.25, "y": 0.65}}
        status, payload = _post(service, "/api/predict", body)
        assert status == 200
        assert payload["label"] == 0
        assert 0 <= payload["confidence"] <= 1
        assert 0 < payload["credibility"] <= 1
        assert len(payload["p"]) == 2

    def test_unknown_path_404(self, service):
        status, payload = _post(service, "/api/nope", {})
        assert status == 404

    def test_concurrent_requests(self, service):
        import concurrent.futures
        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
            futures = [pool.submit(_post, service, "/api/grid", GRID_BODY)
                       for _ in range(16)]
            results = [f.result() for f in futures]
        assert all(r == results[0] for r in results)


class TestMultiClassGrid:
    def test_three_class_request(self, backend):
        # the service supports more classes than the binary explorer exposes;
        # clusters spread out enough that their strangeness dominates queries
        points = [(0.1, 0.2, 0), (0.3, 0.4, 0), (0.7, 0.2, 1), (0.9, 0.4, 1),
                  (0.4, 0.8, 2), (0.6, 0.9, 2)]
        resp = evaluate_grid(req(points, w=6, h=6))
        labels = {c.label for row in resp.cells for c in row}
        assert labels == {0, 1, 2}
        assert resp.cells[1][1].label == 0   # upper left region
        assert resp.cells[1][4].label == 1   # upper right region
        assert resp.cells[5][2].label == 2   # bottom region
