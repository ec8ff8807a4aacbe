"""Offline tweet encoder writing the FSEM v1 embedding container."""

from .encoder import DEFAULT_MODEL, EmbedderConfig, encode_corpus, make_backend

__version__ = "0.1.0"

__all__ = ["DEFAULT_MODEL", "EmbedderConfig", "encode_corpus", "make_backend"]
