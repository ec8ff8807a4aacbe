"""Bit-exact binary container for precomputed sentence embeddings.

File layout (normative; see docs/formats.md):

    magic   4 bytes  b"FSEM"
    version u32 LE   = 1
    dim     u32 LE
    count   u64 LE
    then `count` records, each:
        tweet_id u64 LE
        vector   dim * float32 LE

Total size is exactly 20 + count * (8 + 4*dim) bytes. Vectors must be finite.
Readers are streaming: memory use is one record regardless of count.
"""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "EmbeddingFileHeader",
    "AlignmentReport",
    "read_embeddings",
    "iter_embeddings",
    "write_embeddings",
    "validate_alignment",
    "HEADER_SIZE",
    "MAGIC",
    "VERSION",
]

MAGIC = b"FSEM"
VERSION = 1
HEADER_SIZE = 20
_HEADER = struct.Struct("<4sIIQ")


@dataclass(frozen=True)
class EmbeddingFileHeader:
    dim: int
    count: int

    def record_size(self) -> int:
        return 8 + 4 * self.dim

    def file_size(self) -> int:
        return HEADER_SIZE + self.count * self.record_size()


def _read_header(f, path) -> EmbeddingFileHeader:
    raw = f.read(HEADER_SIZE)
    if len(raw) < HEADER_SIZE:
        raise IOError(f"truncated file: {path}")
    magic, version, dim, count = _HEADER.unpack(raw)
    if magic != MAGIC or version != VERSION:
        raise IOError(f"unsupported format: {path}")
    return EmbeddingFileHeader(dim=dim, count=count)


def read_embeddings(path):
    """Open an embedding file; returns (header, record iterator).

    The iterator yields (tweet_id, vector) with vector a float32 array of
    length header.dim. Raises on bad magic/version, size mismatch, or
    non-finite entries (with the offending record index).
    """
    path = Path(path)
    with open(path, "rb") as f:
        header = _read_header(f, path)
    actual = path.stat().st_size
    if actual != header.file_size():
        raise IOError(f"truncated file: {path} ({actual} bytes, expected {header.file_size()})")
    return header, iter_embeddings(path, header)


def iter_embeddings(path, header: EmbeddingFileHeader):
    rec_size = header.record_size()
    with open(path, "rb") as f:
        f.seek(HEADER_SIZE)
        for index in range(header.count):
            raw = f.read(rec_size)
            if len(raw) < rec_size:
                raise IOError(f"truncated file: {path}")
            (tweet_id,) = struct.unpack_from("<Q", raw)
            vector = np.frombuffer(raw, dtype="<f4", count=header.dim, offset=8)
            if not np.all(np.isfinite(vector)):
                raise ValueError(f"non-finite embedding at record {index} in {path}")
            yield tweet_id, vector


def write_embeddings(records, dim: int, path) -> int:
    """Write (tweet_id, vector) pairs; returns bytes written.

    Round-trips bit-exactly through read_embeddings. The header count is
    patched after the stream is exhausted, so `records` may be a generator.
    """
    path = Path(path)
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
    return HEADER_SIZE + count * (8 + 4 * dim)


@dataclass
class AlignmentReport:
    missing_from_embeddings: int
    missing_from_corpus: int
    ordered: bool

    @property
    def aligned(self) -> bool:
        """Exact id-set equality; order mismatches are joinable, set mismatches are not."""
        return self.missing_from_embeddings == 0 and self.missing_from_corpus == 0

    def as_dict(self) -> dict:
        return {
            "missing_from_embeddings": self.missing_from_embeddings,
            "missing_from_corpus": self.missing_from_corpus,
            "ordered": self.ordered,
            "aligned": self.aligned,
        }


def validate_alignment(corpus_ids, embedding_path) -> AlignmentReport:
    """Compare corpus ids against an embedding file's ids (report-only)."""
    corpus_ids = list(corpus_ids)
    header, records = read_embeddings(embedding_path)
    emb_ids = [tweet_id for tweet_id, _ in records]
    corpus_set = set(corpus_ids)
    emb_set = set(emb_ids)
    return AlignmentReport(
        missing_from_embeddings=len(corpus_set - emb_set),
        missing_from_corpus=len(emb_set - corpus_set),
        ordered=emb_ids == corpus_ids,
    )


def build_offset_index(path):
    """Map tweet_id -> byte offset of its record, for id-keyed joins of
    complete-but-misordered files. Compact arrays, one file scan."""
    path = Path(path)
    with open(path, "rb") as f:
        header = _read_header(f, path)
    rec_size = header.record_size()
    ids = np.empty(header.count, dtype=np.uint64)
    with open(path, "rb") as f:
        f.seek(HEADER_SIZE)
        for i in range(header.count):
            raw = f.read(rec_size)
            if len(raw) < rec_size:
                raise IOError(f"truncated file: {path}")
            ids[i] = struct.unpack_from("<Q", raw)[0]
    offsets = HEADER_SIZE + np.arange(header.count, dtype=np.int64) * rec_size
    order = np.argsort(ids, kind="stable")
    return header, ids[order], offsets[order]


def read_by_ids(path, wanted_ids, batch_size: int = 4096):
    """Yield (ids_batch, matrix) in the order of wanted_ids via the offset index.

    Requires every wanted id to be present in the file.
    """
    header, sorted_ids, sorted_offsets = build_offset_index(path)
    rec_size = header.record_size()
    wanted = np.asarray(list(wanted_ids), dtype=np.uint64)
    pos = np.searchsorted(sorted_ids, wanted)
    bad = (pos >= len(sorted_ids)) | (sorted_ids[np.minimum(pos, len(sorted_ids) - 1)] != wanted)
    if np.any(bad):
        missing = wanted[bad][0]
        raise KeyError(f"id {int(missing)} not present in {path}")
    offsets = sorted_offsets[pos]
    with open(path, "rb") as f:
        for start in range(0, len(wanted), batch_size):
            batch_ids = wanted[start : start + batch_size]
            batch_off = offsets[start : start + batch_size]
            mat = np.empty((len(batch_ids), header.dim), dtype=np.float32)
            for row, off in enumerate(batch_off):
                f.seek(int(off))
                raw = f.read(rec_size)
                mat[row] = np.frombuffer(raw, dtype="<f4", count=header.dim, offset=8)
            if not np.all(np.isfinite(mat)):
                raise ValueError(f"non-finite embedding in {path}")
            yield batch_ids, mat
