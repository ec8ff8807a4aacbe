"""Writer for the FSEM v1 binary embedding container.

Shared contract with the training toolkit (normative byte layout):

    magic   4 bytes  b"FSEM"
    version u32 LE   = 1
    dim     u32 LE
    count   u64 LE
    records: tweet_id u64 LE, then dim float32 LE values

File size is exactly 20 + count * (8 + 4*dim) bytes; vectors must be finite.
"""

import struct

import numpy as np

MAGIC = b"FSEM"
VERSION = 1
_HEADER = struct.Struct("<4sIIQ")


def write(records, dim: int, path) -> int:
    """Write (tweet_id, vector) pairs; returns bytes written."""
    count = 0
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, VERSION, dim, 0))
        for tweet_id, vector in records:
            vec = np.asarray(vector, dtype="<f4")
            if vec.shape != (dim,):
                raise ValueError(
                    f"dimension mismatch at record {count}: got {vec.shape}, expected ({dim},)"
                )
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"non-finite embedding at record {count}")
            f.write(struct.pack("<Q", int(tweet_id)))
            f.write(vec.tobytes())
            count += 1
        f.seek(0)
        f.write(_HEADER.pack(MAGIC, VERSION, dim, count))
    return _HEADER.size + count * (8 + 4 * dim)
