import json
from datetime import datetime, timezone

import pytest


@pytest.fixture
def tiny_jsonl(tmp_path):
    """Nine tweets by three authors across three months of 2021, plus quirks."""
    rows = [
        {"id": 1, "author": "ada", "created_at": "2021-01-05T10:00:00+00:00",
         "text": "The future of #AI is here! https://t.co/x @user"},
        {"id": 2, "author": "bob", "created_at": "2021-01-31T23:59:59Z",
         "text": "remote work culture office conversation"},
        {"id": 3, "author": "ada", "created_at": "2021-02-01T00:00:00Z",
         "text": "#RemoteWork #remotework future office"},
        {"id": 4, "author": "cyd", "created_at": "2021-02-14T08:30:00Z",
         "text": "robots robots robots future"},
        {"id": 5, "author": "bob", "created_at": "2021-03-01T12:00:00Z",
         "text": "quantum computing future machines"},
        # alternate key spelling
        {"id": 6, "user": "ada", "date": "2021-03-02T12:00:00Z",
         "content": "digital twins and the future of work"},
        {"id": 7, "author": "cyd", "created_at": "2021-03-20T17:45:00Z",
         "text": "metaverse office culture conversation"},
        {"id": 8, "author": "ada", "created_at": "2021-03-21T17:45:00Z",
         "text": "big data analytics future trends"},
        {"id": 9, "author": "bob", "created_at": "2021-03-30T09:00:00Z",
         "text": "automation reshapes work and culture"},
    ]
    path = tmp_path / "tweets.jsonl"
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row) + "\n")
    return path


@pytest.fixture
def tiny_store(tiny_jsonl, tmp_path):
    from tweetopics import corpus

    out = tmp_path / "corpus"
    corpus.ingest_jsonl(tiny_jsonl, out, "2021-01-01", "2021-12-31")
    return corpus.CorpusStore(out)


def utc(y, m, d, hh=0, mm=0, ss=0):
    return int(datetime(y, m, d, hh, mm, ss, tzinfo=timezone.utc).timestamp())
