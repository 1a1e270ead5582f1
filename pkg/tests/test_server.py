import io
import json
import threading
import urllib.error
import urllib.request

import pytest
from PIL import Image

from stemma.archive import open_store
from stemma.config import ServerConfig
from stemma.server import serve


def bits_blob(bits):
    return json.dumps({"bits": bits}, separators=(",", ":")).encode()


class Client:
    def __init__(self, port):
        self.base = f"http://127.0.0.1:{port}"

    def request(self, method, path, body=None, headers=None):
        data = None
        hdrs = dict(headers or {})
        if body is not None:
            data = json.dumps(body).encode()
            hdrs["Content-Type"] = "application/json"
        req = urllib.request.Request(self.base + path, data=data, method=method,
                                     headers=hdrs)
        try:
            with urllib.request.urlopen(req) as resp:
                return resp.status, dict(resp.headers), resp.read()
        except urllib.error.HTTPError as err:
            return err.code, dict(err.headers), err.read()

    def json(self, method, path, body=None, headers=None):
        status, hdrs, raw = self.request(method, path, body, headers)
        payload = json.loads(raw) if raw else None
        return status, payload


@pytest.fixture
def service(tmp_path):
    config = ServerConfig(storage_path=str(tmp_path / "store"), port=0)
    handle = serve(config)
    yield handle, Client(handle.port)
    handle.shutdown()


def seed_artifact(handle, bits="0" * 64, parents=()):
    return handle.archive.publish("bitstring", bits_blob(bits), parents)


class TestRoutes:
    def test_domains(self, service):
        _, client = service
        status, payload = client.json("GET", "/api/domains")
        assert status == 200
        assert [d["domain_id"] for d in payload] == ["bitstring", "cppn-picture"]
        assert payload[1]["default_render_size"] == [128, 128]

    def test_artifact_listing_and_fetch(self, service):
        handle, client = service
        rec = seed_artifact(handle)
        status, payload = client.json("GET", "/api/artifacts?domain_id=bitstring")
        assert status == 200
        assert payload["total"] == 1
        assert payload["items"][0]["artifact_id"] == rec.artifact_id
        assert "genome_blob" not in payload["items"][0]
        status, full = client.json("GET", f"/api/artifacts/{rec.artifact_id}")
        assert status == 200
        assert full["genome_blob"] == bits_blob("0" * 64).decode()

    def test_not_found_artifact(self, service):
        _, client = service
        status, payload = client.json("GET", "/api/artifacts/" + "ab" * 32)
        assert status == 404
        assert payload["error"]["code"] == "NOT_FOUND"

    def test_unknown_domain(self, service):
        _, client = service
        status, payload = client.json("GET", "/api/artifacts?domain_id=nope")
        assert status == 404
        assert payload["error"]["code"] == "UNKNOWN_DOMAIN"

    def test_ancestry_route(self, service):
        handle, client = service
        a = seed_artifact(handle, "0" * 64)
        b = seed_artifact(handle, "1" + "0" * 63, (a.artifact_id,))
        status, payload = client.json(
            "GET", f"/api/artifacts/{b.artifact_id}/ancestry?direction=up")
        assert status == 200
        assert payload["roots"] == [a.artifact_id]
        assert payload["edges"] == [[a.artifact_id, b.artifact_id]]

    def test_phylogeny_route(self, service):
        handle, client = service
        seed_artifact(handle)
        status, payload = client.json("GET", "/api/phylogeny?domain_id=bitstring")
        assert status == 200
        assert len(payload["nodes"]) == 1

    def test_render_endpoint(self, service):
        handle, client = service
        rec = seed_artifact(handle, "0" * 64)
        status, headers, raw = client.request(
            "GET", f"/api/artifacts/{rec.artifact_id}/phenotype.png?w=8&h=8")
        assert status == 200
        assert headers["Content-Type"] == "image/png"
        img = Image.open(io.BytesIO(raw))
        assert img.size == (8, 8)
        assert img.tobytes() == bytes(64)  # all-zero bits render black

    def test_render_identical_bodies(self, service):
        handle, client = service
        rec = seed_artifact(handle, "01" * 32)
        path = f"/api/artifacts/{rec.artifact_id}/phenotype.png?w=16&h=16"
        _, _, first = client.request("GET", path)
        _, _, second = client.request("GET", path)
        assert first == second

    def test_render_dimension_limit(self, service):
        handle, client = service
        rec = seed_artifact(handle)
        status, payload = client.json(
            "GET", f"/api/artifacts/{rec.artifact_id}/phenotype.png?w=2000")
        assert status == 400
        assert payload["error"]["code"] == "INVALID_ARGUMENT"

    def test_etag_and_304(self, service):
        handle, client = service
        rec = seed_artifact(handle)
        path = f"/api/artifacts/{rec.artifact_id}/phenotype.png?w=8&h=8"
        status, headers, _ = client.request("GET", path)
        etag = headers["ETag"]
        assert etag == f'"{rec.artifact_id}-8x8"'
        status, _, body = client.request("GET", path, headers={"If-None-Match": etag})
        assert status == 304 and body == b""

    def test_session_flow(self, service):
        _, client = service
        status, created = client.json(
            "POST", "/api/sessions",
            {"domain_id": "bitstring", "pop_size": 12, "rng_seed": 5})
        assert status == 201
        assert created["step"] == 0 and created["op_epoch"] == 0
        assert len(created["candidates"]) == 12
        sid = created["session_id"]

        status, _, raw = client.request(
            "GET", f"/api/sessions/{sid}/candidates/0/phenotype.png?w=8&h=8")
        assert status == 200

        status, stepped = client.json(
            "POST", f"/api/sessions/{sid}/select",
            {"op_epoch": 0, "selected": [0, 3]})
        assert status == 200
        assert stepped["step"] == 1 and stepped["op_epoch"] == 1

        status, rec = client.json(
            "POST", f"/api/sessions/{sid}/publish",
            {"candidate": 0, "author": "tester", "tags": ["demo"]})
        assert status == 200
        assert rec["generation"] == 0 and "genome_blob" not in rec

        status, full = client.json(
            "POST", f"/api/sessions/{sid}/publish?full=1", {"candidate": 0})
        assert status == 200 and "genome_blob" in full

        status, _, body = client.request("DELETE", f"/api/sessions/{sid}")
        assert status == 204 and body == b""
        status, payload = client.json(
            "POST", f"/api/sessions/{sid}/select", {"op_epoch": 1, "selected": [0]})
        assert status == 410
        assert payload["error"]["code"] == "SESSION_EXPIRED"

    def test_session_error_codes(self, service):
        handle, client = service
        status, payload = client.json("POST", "/api/sessions", {"domain_id": "nope"})
        assert (status, payload["error"]["code"]) == (404, "UNKNOWN_DOMAIN")

        status, payload = client.json(
            "POST", "/api/sessions", {"domain_id": "bitstring", "pop_size": 99})
        assert (status, payload["error"]["code"]) == (400, "INVALID_ARGUMENT")

        _, created = client.json(
            "POST", "/api/sessions", {"domain_id": "bitstring", "rng_seed": 1})
        sid = created["session_id"]
        status, payload = client.json(
            "POST", f"/api/sessions/{sid}/select", {"op_epoch": 0, "selected": []})
        assert (status, payload["error"]["code"]) == (400, "EMPTY_SELECTION")
        status, payload = client.json(
            "POST", f"/api/sessions/{sid}/select", {"op_epoch": 5, "selected": [0]})
        assert (status, payload["error"]["code"]) == (409, "STALE_EPOCH")

        rec = seed_artifact(handle)
        status, payload = client.json(
            "POST", "/api/sessions",
            {"domain_id": "cppn-picture", "seed_artifact_ids": [rec.artifact_id]})
        assert (status, payload["error"]["code"]) == (409, "CONFLICT")

    def test_body_validation(self, service):
        _, client = service
        status, payload = client.json("POST", "/api/sessions",
                                      {"domain_id": "bitstring", "bogus": 1})
        assert (status, payload["error"]["code"]) == (400, "INVALID_ARGUMENT")
        status, hdrs, raw = client.request("POST", "/api/sessions")
        payload = json.loads(raw)
        assert (status, payload["error"]["code"]) == (400, "INVALID_ARGUMENT")

    def test_unknown_route(self, service):
        _, client = service
        status, payload = client.json("GET", "/api/bogus")
        assert (status, payload["error"]["code"]) == (404, "NOT_FOUND")

    def test_root_without_static_dir(self, service):
        _, client = service
        status, _, body = client.request("GET", "/")
        assert status == 200 and b"stemma" in body


class TestRestartStability:
    def test_render_bytes_stable_across_restarts(self, tmp_path):
        config = ServerConfig(storage_path=str(tmp_path / "store"), port=0)
        handle = serve(config)
        rec = handle.archive.publish("bitstring", bits_blob("0110" * 16), [])
        client = Client(handle.port)
        path = f"/api/artifacts/{rec.artifact_id}/phenotype.png?w=32&h=32"
        _, _, first = client.request("GET", path)
        handle.shutdown()

        handle = serve(ServerConfig(storage_path=str(tmp_path / "store"), port=0))
        client = Client(handle.port)
        _, _, second = client.request("GET", path)
        handle.shutdown()
        assert first == second


class TestConcurrentPublish:
    def test_api_publishes_preserve_archive_invariants(self, tmp_path):
        config = ServerConfig(storage_path=str(tmp_path / "store"), port=0)
        handle = serve(config)
        client = Client(handle.port)
        sids = []
        for k in range(8):
            _, created = client.json(
                "POST", "/api/sessions",
                {"domain_id": "bitstring", "rng_seed": 1000 + k, "pop_size": 4})
            sids.append(created["session_id"])

        results = []

        def publisher(sid, k):
            status, rec = client.json("POST", f"/api/sessions/{sid}/publish",
                                      {"candidate": k % 4})
            results.append((status, rec))

        threads = [threading.Thread(target=publisher, args=(sid, k))
                   for k, sid in enumerate(sids)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(status == 200 for status, _ in results)
        records = handle.archive.scan()
        assert [r.seq for r in records] == list(range(1, len(records) + 1))
        assert handle.archive.validate() == []
        handle.shutdown()


class TestStaticServing:
    def test_static_dir(self, tmp_path):
        static = tmp_path / "ui"
        static.mkdir()
        (static / "index.html").write_text("<html>ui-home</html>")
        (static / "app.js").write_text("console.log(1)")
        config = ServerConfig(storage_path=str(tmp_path / "store"), port=0,
                              static_dir=str(static))
        handle = serve(config)
        client = Client(handle.port)
        status, _, body = client.request("GET", "/")
        assert status == 200 and b"ui-home" in body
        status, headers, _ = client.request("GET", "/app.js")
        assert status == 200 and "javascript" in headers["Content-Type"]
        # SPA fallback
        status, _, body = client.request("GET", "/some/route")
        assert status == 200 and b"ui-home" in body
        # traversal guarded
        status, _, _ = client.request("GET", "/../secret")
        assert status == 404
        handle.shutdown()
