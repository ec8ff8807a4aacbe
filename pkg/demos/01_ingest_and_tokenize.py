"""Ingest a small tweet JSONL file, audit the counters, and build a vocabulary.

Run from the repo root:  python demos/01_ingest_and_tokenize.py
Artifacts land in demo_out/ingest/.
"""

import json
from pathlib import Path

from tweetopics import corpus, textprep

out = Path("demo_out/ingest")
out.mkdir(parents=True, exist_ok=True)

# A tiny archive: one duplicate id, one malformed line, one out-of-window date.
rows = [
    {"id": 1, "author": "ada", "created_at": "2021-01-05T10:00:00Z",
     "text": "The future of #AI is here! https://t.co/x @user"},
    {"id": 2, "author": "bob", "created_at": "2021-02-11T09:30:00Z",
     "text": "Remote work culture is the new office culture #remotework"},
    {"id": 2, "author": "bob", "created_at": "2021-02-11T09:31:00Z",
     "text": "duplicate gets dropped"},
    {"id": 3, "author": "cyd", "created_at": "2019-05-01T00:00:00Z",
     "text": "too old for the window"},
    {"id": 4, "author": "ada", "created_at": "2021-03-20T17:45:00Z",
     "text": "Digital twins will reshape manufacturing #digitaltwin"},
]
with open(out / "tweets.jsonl", "w", encoding="utf-8") as f:
    for row in rows:
        f.write(json.dumps(row) + "\n")
with open(out / "tweets.jsonl", "a", encoding="utf-8") as f:
    f.write("{this line is not json\n")

stats = corpus.ingest_jsonl(out / "tweets.jsonl", out / "corpus",
                            since="2021-01-01", until="2023-03-31")
print("ingest stats:", stats.as_dict())
assert stats.lines_read == stats.records_kept + stats.duplicates_dropped \
    + stats.malformed_dropped + stats.out_of_range_dropped

store = corpus.CorpusStore(out / "corpus")
print("\nstreamed back in stable order:")
for batch in corpus.stream_corpus(store, batch_size=2):
    for rec in batch:
        print(f"  {rec.id}  @{rec.author:<4}  {rec.text[:48]}")

# Tweet-aware tokenization: URLs and mentions vanish, hashtags survive with '#'.
print("\ntokenized:")
for rec in store.iter_records():
    print(f"  {rec.id}: {textprep.normalize_tweet(rec.text)}")

vocab = textprep.build_vocabulary(
    (textprep.normalize_tweet(rec.text) for rec in store.iter_records()),
    min_df=1, max_df_ratio=1.0,
)
vocab.save(out / "vocab.json")
print(f"\nvocabulary: {len(vocab)} terms, saved to {out / 'vocab.json'}")

# Month buckets cover the whole span, including empty months in between.
buckets = corpus.time_buckets(store, "month")
print("month buckets:", [(b.bucket_start, len(b.doc_ids)) for b in buckets])
