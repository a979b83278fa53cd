#!/usr/bin/env python3
# The HTTP service end to end, exercised in-process with a test client.
#
# In production you would run `gramdex serve --index corpus.koala` and point
# the web console at it; the endpoints and payloads are identical.

import json
import time

from fastapi.testclient import TestClient

from gramdex import build_fm_index, encode_corpus
from gramdex.service import IndexRegistry, ServiceConfig, create_app
from gramdex.textprep import TokenSequence

registry = IndexRegistry()
registry.register("stories", build_fm_index(encode_corpus([
    TokenSequence("s1", "once upon a time there was a small house".split()),
    TokenSequence("s2", "the house stood upon a hill".split()),
]), "stories"))

app = create_app(ServiceConfig(data_dir="/tmp/gramdex-demo"), registry=registry)
client = TestClient(app)

print("GET /corpora ->", client.get("/corpora").json())

r = client.get("/count", params={"q": "upon a"})
print("GET /count?q='upon a' ->", r.json())

# small n-gram files are answered synchronously by POST /overlap
ngram_file = b"once upon a time\nthe small house\nnever seen phrase\n"
report = client.post("/overlap", content=ngram_file).json()
print(f"POST /overlap -> {report['line_count']} lines; totals:",
      [row["total"] for row in report["rows"]])
print("  aggregate hit ratio k=1:", report["benchmark"]["hit_ratio"]["1"])

# anything bigger than 2 MiB must go through the batch-job queue
job_id = client.post("/jobs", content=ngram_file).json()["job_id"]
status = client.get(f"/jobs/{job_id}").json()
while status["status"] in ("queued", "running"):
    time.sleep(0.05)
    status = client.get(f"/jobs/{job_id}").json()
print(f"job {job_id[:8]}... ->", status["status"])
result = client.get(status["result_url"]).json()
print("  batch result equals live result:", result == report)

r = client.post("/novelty", json={"text": "they lived upon a hill forever",
                                  "min_len": 2, "threshold": 1})
print("POST /novelty ->", json.dumps(r.json()["spans"]))
