from fastapi.testclient import TestClient

from acycle.service.app import app

client = TestClient(app)


def sample_text(n=6, d=2, seed=4):
    resp = client.post(
        "/sample",
        json={"process": {"kind": "linial-meshulam", "n": n, "d": d},
              "master_seed": seed, "trial": 0},
    )
    assert resp.status_code == 200
    return resp.json()["filtration"]


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


def test_sample_and_ph_round_trip():
    text = sample_text()
    resp = client.post("/ph", json={"filtration": text, "degree": 1})
    assert resp.status_code == 200
    body = resp.json()
    assert body["degree"] == 1
    assert all(p["death"] != "inf" for p in body["pairs"])
    assert "/" in body["lifetime_sum"]


def test_msa_and_verify_agree():
    text = sample_text()
    msa = client.post("/msa", json={"filtration": text, "degree": 2}).json()
    verify = client.post("/verify", json={"filtration": text, "degree": 2}).json()
    assert verify["equal"]
    assert msa["lifetime"] == verify["lifetime_by_msa"]["exact"]
    assert msa["certified"] and msa["gamma"] == 10  # C(5, 2)


def test_verify_k3_values():
    text = "\n".join(
        ["0 0/1", "1 0/1", "2 0/1", "0 1 1/4", "0 2 1/2", "1 2 3/4"]
    )
    out = client.post("/verify", json={"filtration": text, "degree": 1}).json()
    assert out["equal"] and out["lifetime_by_persistence"]["exact"] == "3/4"


def test_limit_endpoint():
    out = client.post("/limit", json={"d": 1, "tol": 1e-6}).json()
    assert abs(out["value"] - 1.2020569) < 1e-5
    assert out["c_star"] == 1.0 and not out["conjectural"]


def test_kalai_endpoint():
    out = client.post("/kalai", json={"n": 4, "d": 2}).json()
    assert out["total"] == out["expected"] == 4
    assert out["matches"] and out["max_torsion"] == 1


def test_rho_endpoint():
    out = client.post("/rho", json={"n": 6, "d": 2, "m": 0, "trials": 10, "seed": 1}).json()
    assert out["value"] == 1.0


def test_experiment_endpoint():
    req = {
        "process": {"kind": "linial-meshulam", "n": 7, "d": 2},
        "trials": 3,
        "master_seed": 12,
        "histogram": {"bins": 8, "range": 1.0},
    }
    out = client.post("/experiment", json=req).json()
    assert out["trials"] == 3
    assert len(out["records"]) == 3
    assert len(out["histogram"]) == 8
    assert out["histogram_mass"] > 0


def test_scaling_endpoint():
    req = {"process": "linial-meshulam", "d": 2, "n_list": [6, 7], "trials": 3,
           "master_seed": 5}
    out = client.post("/scaling", json=req).json()
    assert [r["n"] for r in out["rows"]] == [6, 7]


def test_morse_endpoint():
    text = sample_text()
    out = client.post("/morse", json={"filtration": text, "d": 2}).json()
    assert out["acyclic"]
    # every simplex is either critical or one side of a pairing
    assert 2 * out["paired"] + sum(out["critical_by_dim"].values()) == 41  # 6+15+20


def test_errors_map_to_422():
    # bad degree for the complex
    text = sample_text()
    resp = client.post("/msa", json={"filtration": text, "degree": 9})
    assert resp.status_code == 422
    # malformed filtration text
    resp = client.post("/ph", json={"filtration": "0 1 oops", "degree": 0})
    assert resp.status_code == 422
    # precondition failure: degree-2 acycle on a complex with a 1-hole
    hole = "\n".join(
        ["0 0/1", "1 0/1", "2 0/1", "3 0/1",
         "0 1 0/1", "0 2 0/1", "1 2 0/1", "0 3 0/1", "1 3 0/1",
         "0 1 2 0/1"]
    )
    resp = client.post("/msa", json={"filtration": hole, "degree": 2})
    assert resp.status_code == 422
