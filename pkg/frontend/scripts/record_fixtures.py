#!/usr/bin/env python3
"""Record real service responses as JSON fixtures for the UI contract tests.

Run from the repository root after installing the Python package:

    python3 frontend/scripts/record_fixtures.py
"""

import json
import time
from pathlib import Path

from fastapi.testclient import TestClient

from gramdex import build_fm_index, encode_corpus
from gramdex.service import IndexRegistry, ServiceConfig, create_app
from gramdex.textprep import TokenSequence

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def corpus_of(corpus_id, *texts):
    docs = [TokenSequence(f"{corpus_id}-{i}", t.split()) for i, t in enumerate(texts)]
    return build_fm_index(encode_corpus(docs), corpus_id)


def main():
    registry = IndexRegistry()
    registry.register("web", corpus_of(
        "web",
        "plastic bags floating in the ocean are a common pollutant",
        "the ocean is warming and the ice is melting",
        "bags of rice floating down the river",
        "in the ocean in the ocean in the ocean",
    ), size_bytes=2048)
    registry.register("books", corpus_of(
        "books",
        "she stared at the ocean for hours thinking about the letter",
        "floating in the water he felt weightless",
    ), size_bytes=1024)

    import tempfile

    app = create_app(ServiceConfig(data_dir=tempfile.mkdtemp()), registry=registry)
    client = TestClient(app)
    FIXTURES.mkdir(parents=True, exist_ok=True)

    def save(name, payload):
        (FIXTURES / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {name}")

    save("corpora.json", client.get("/corpora").json())

    query = "plastic bags floating in the ocean"
    count = client.get("/count", params={"q": query}).json()
    save("count.json", count)

    # the query console's 21-window grid: one window per line, n ascending
    tokens = count["query_tokens"]
    windows = [
        " ".join(tokens[i : i + n])
        for n in range(1, len(tokens) + 1)
        for i in range(len(tokens) - n + 1)
    ]
    assert len(windows) == 21
    grid = client.post("/overlap", content="\n".join(windows).encode()).json()
    save("overlap_grid_21.json", grid)

    # a benchmark file: short instances, so high ks aggregate to null (n/a)
    benchmark_lines = (
        "plastic bags floating in the ocean\n"
        "the ocean is warming\n"
        "rice pudding recipe\n"
        "ocean\n"
    )
    save("overlap_benchmark.json",
         client.post("/overlap", content=benchmark_lines.encode()).json())

    job_id = client.post("/jobs", content=benchmark_lines.encode()).json()["job_id"]
    for _ in range(100):
        status = client.get(f"/jobs/{job_id}").json()
        if status["status"] in ("done", "failed"):
            break
        time.sleep(0.02)
    save("job_done.json", status)

    save("novelty.json", client.post("/novelty", json={
        "text": "the ocean is vast xyzzy plastic bags floating nearby",
        "min_len": 2,
        "threshold": 1,
    }).json())

    save("error_404.json", client.get("/count", params={"q": "x", "corpus": "nope"}).json())


if __name__ == "__main__":
    main()
