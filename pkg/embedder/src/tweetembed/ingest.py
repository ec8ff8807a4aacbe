"""Tweet JSONL reading with the same keep/drop rules as the training toolkit:
both key spellings are accepted, unparseable lines are skipped, text must be
non-empty after trimming, and the first occurrence of an id wins."""

import json
import logging
from datetime import datetime, timezone

logger = logging.getLogger(__name__)

_KEYS = {
    "id": ("id",),
    "created_at": ("created_at", "date"),
    "author": ("author", "user"),
    "text": ("text", "content"),
}


def _extract(obj, logical):
    for key in _KEYS[logical]:
        if key in obj:
            return obj[key]
    raise KeyError(logical)


def _parse_date(value):
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, (int, float)):
        return int(value)
    if isinstance(value, str):
        s = value.strip().replace("Z", "+00:00")
        dt = datetime.fromisoformat(s)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return int(dt.timestamp())
    raise ValueError(f"unsupported timestamp type: {type(value).__name__}")


def iter_kept_tweets(path):
    """Yield (id, text) for every kept record, in input order."""
    seen = set()
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.decode("utf-8").strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                tweet_id = int(_extract(obj, "id"))
                if tweet_id < 0:
                    raise ValueError("negative id")
                _parse_date(_extract(obj, "created_at"))
                text = str(_extract(obj, "text"))
                if not text.strip():
                    raise ValueError("empty text")
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as e:
                logger.warning("line %d skipped: %s", lineno, e)
                continue
            if tweet_id in seen:
                continue
            seen.add(tweet_id)
            yield tweet_id, text
