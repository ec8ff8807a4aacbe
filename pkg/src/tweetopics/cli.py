"""Subcommand front-end for the full workflow.

Subcommands: ingest, vocab, embed-validate, lda train|sweep, bertopic train,
topics represent|reduce, coherence, dynamics, report. Option precedence is
flags > --config JSON > built-in defaults, and every run writes a
resolved-config JSON (all final values, including defaults) into the workdir
so the run can be reproduced from that file alone.

Exit codes: 0 success, 1 operational failure, 2 usage error.
"""

import argparse
import json
import sys
from pathlib import Path

import jsonschema

from . import cluster, coherence, corpus, ctfidf, dynamics, embedstore, hierarchy, lda, report, textprep

DEFAULTS = {
    "seed": 42,
    "threads": 1,
    "min_df": 5,
    "max_df_ratio": 0.5,
    "batch": 4096,
    "passes": 1,
    "alpha": None,  # None means 1/k
    "eta": None,
    "tau0": 64.0,
    "kappa": 0.7,
    "pca_dims": 5,
    "normalize": False,
    "top_n": 10,
    "window": 110,
    "metric": "c_v",
    "granularity": "month",
    "target": None,
}


class CliError(Exception):
    """Operational failure; reported on stderr with exit code 1."""


def _resolve(args: argparse.Namespace, keys, workdir: Path = Path(".")) -> dict:
    """flags > config > defaults, recorded per key."""
    config = {}
    if args.config is not None:
        try:
            with open(_path(workdir, args.config), encoding="utf-8") as f:
                config = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise CliError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(config, dict):
            raise CliError(f"config {args.config} must hold a flat JSON object")
    resolved = {}
    for key in keys:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in config:
            resolved[key] = config[key]
        else:
            resolved[key] = DEFAULTS.get(key)
    return resolved


def _write_resolved(workdir: Path, command: str, resolved: dict) -> None:
    workdir.mkdir(parents=True, exist_ok=True)
    payload = {"command": command, **resolved}
    path = workdir / f"resolved-config.{command}.json"
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, sort_keys=True, indent=2)
        f.write("\n")


def _path(workdir: Path, value) -> Path:
    p = Path(value)
    return p if p.is_absolute() else workdir / p


def _store(workdir, value) -> corpus.CorpusStore:
    try:
        return corpus.CorpusStore(_path(workdir, value))
    except (OSError, ValueError) as e:
        raise CliError(str(e)) from e


def _token_stream(store):
    for rec in store.iter_records():
        yield rec.id, textprep.normalize_tweet(rec.text)


def _bow_batches(store, vocab, batch_size):
    for batch in corpus.stream_corpus(store, batch_size):
        yield [
            textprep.encode_bow(textprep.normalize_tweet(rec.text), vocab, doc_id=rec.id)
            for rec in batch
        ]


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_ingest(args, workdir):
    keys = ("input", "out", "since", "until")
    r = _resolve(args, keys, workdir)
    for key in keys:
        if r[key] is None:
            raise CliError(f"missing required option --{key.replace('_', '-')}")
    _write_resolved(workdir, "ingest", r)
    try:
        stats = corpus.ingest_jsonl(
            _path(workdir, r["input"]), _path(workdir, r["out"]), r["since"], r["until"]
        )
    except (IOError, ValueError) as e:
        raise CliError(str(e)) from e
    print(json.dumps(stats.as_dict(), sort_keys=True))
    return 0


def _cmd_vocab(args, workdir):
    r = _resolve(args, ("corpus", "out", "min_df", "max_df_ratio"), workdir)
    if r["corpus"] is None or r["out"] is None:
        raise CliError("missing required option --corpus/--out")
    _write_resolved(workdir, "vocab", r)
    store = _store(workdir, r["corpus"])
    try:
        vocab = textprep.build_vocabulary(
            (tokens for _, tokens in _token_stream(store)),
            min_df=int(r["min_df"]),
            max_df_ratio=float(r["max_df_ratio"]),
        )
    except ValueError as e:
        raise CliError(str(e)) from e
    vocab.save(_path(workdir, r["out"]))
    print(json.dumps({"terms": len(vocab), "total_docs": vocab.total_docs}, sort_keys=True))
    return 0


def _cmd_embed_validate(args, workdir):
    r = _resolve(args, ("corpus", "embeddings"), workdir)
    if r["corpus"] is None or r["embeddings"] is None:
        raise CliError("missing required option --corpus/--embeddings")
    _write_resolved(workdir, "embed-validate", r)
    store = _store(workdir, r["corpus"])
    ids = [rec.id for rec in store.iter_records()]
    try:
        rep = embedstore.validate_alignment(ids, _path(workdir, r["embeddings"]))
    except (IOError, ValueError) as e:
        raise CliError(str(e)) from e
    print(json.dumps(rep.as_dict(), sort_keys=True))
    return 0


def _lda_common(r, workdir):
    store = _store(workdir, r["corpus"])
    vocab = textprep.Vocabulary.load(_path(workdir, r["vocab"]))
    return store, vocab


def _cmd_lda_train(args, workdir):
    r = _resolve(args, ("corpus", "vocab", "k", "batch", "passes", "seed",
                        "alpha", "eta", "tau0", "kappa", "threads", "out"), workdir)
    for key in ("corpus", "vocab", "k", "out"):
        if r[key] is None:
            raise CliError(f"missing required option --{key}")
    _write_resolved(workdir, "lda-train", r)
    store, vocab = _lda_common(r, workdir)
    if store.n_records == 0:
        raise CliError("corpus is empty")
    try:
        model = lda.fit_stream(
            lambda: _bow_batches(store, vocab, int(r["batch"])),
            n_docs=store.n_records,
            vocab_size=len(vocab),
            k=int(r["k"]),
            alpha=r["alpha"],
            eta=r["eta"],
            tau0=float(r["tau0"]),
            kappa=float(r["kappa"]),
            passes=int(r["passes"]),
            seed=int(r["seed"]),
            threads=int(r["threads"]),
        )
    except ValueError as e:
        raise CliError(str(e)) from e
    lda.save_model(model, _path(workdir, r["out"]))
    print(json.dumps({"k": model.k, "updates": model.updates_seen}, sort_keys=True))
    return 0


def _parse_k_grid(spec: str):
    """'a:b:c' = a, a+c, ... up to b inclusive; or comma-separated values."""
    try:
        if ":" in spec:
            parts = [int(x) for x in spec.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            if step < 1 or stop < start:
                raise ValueError
            return list(range(start, stop + 1, step))
        return [int(x) for x in spec.split(",")]
    except ValueError:
        raise CliError(f"bad k-grid {spec!r}; expected start:stop[:step] or k1,k2,...") from None


def _cmd_lda_sweep(args, workdir):
    r = _resolve(args, ("corpus", "vocab", "k_grid", "metric", "batch", "passes",
                        "seed", "threads", "top_n", "window", "out"), workdir)
    for key in ("corpus", "vocab", "k_grid", "out"):
        if r[key] is None:
            raise CliError(f"missing required option --{key.replace('_', '-')}")
    if r["metric"] != "c_v":
        raise CliError(f"unsupported metric {r['metric']!r}; only c_v is available")
    _write_resolved(workdir, "lda-sweep", r)
    store, vocab = _lda_common(r, workdir)
    grid = _parse_k_grid(str(r["k_grid"]))
    id_to_term = vocab.id_to_term
    cfg = coherence.CoherenceConfig(window_size=int(r["window"]), top_n=int(r["top_n"]))

    def trainer(k):
        return lda.fit_stream(
            lambda: _bow_batches(store, vocab, int(r["batch"])),
            n_docs=store.n_records,
            vocab_size=len(vocab),
            k=k,
            passes=int(r["passes"]),
            seed=int(r["seed"]),
            threads=int(r["threads"]),
        )

    def topic_words(model):
        return [
            [id_to_term[tid] for tid, _ in lda.topic_top_terms(model, t, cfg.top_n)]
            for t in range(model.k)
        ]

    result = coherence.sweep(
        lambda: (tokens for _, tokens in _token_stream(store)), grid, trainer, topic_words, cfg
    )
    payload = result.as_dict()
    report.validate_artifact("sweep", payload)
    out = _path(workdir, r["out"])
    with open(out, "w", encoding="utf-8") as f:
        json.dump(payload, f, sort_keys=True, indent=2)
        f.write("\n")
    print(json.dumps({"argmax_k": result.argmax_k}, sort_keys=True))
    return 0


def _cmd_bertopic_train(args, workdir):
    r = _resolve(args, ("corpus", "embeddings", "k", "pca_dims", "seed", "batch",
                        "normalize", "threads", "out"), workdir)
    for key in ("corpus", "embeddings", "k", "out"):
        if r[key] is None:
            raise CliError(f"missing required option --{key}")
    _write_resolved(workdir, "bertopic-train", r)
    store = _store(workdir, r["corpus"])
    ids = [rec.id for rec in store.iter_records()]
    try:
        _, _, doc_ids, labels = cluster.fit_pipeline(
            _path(workdir, r["embeddings"]),
            n_components=int(r["pca_dims"]),
            k=int(r["k"]),
            seed=int(r["seed"]),
            corpus_ids=ids,
            batch_size=int(r["batch"]),
            normalize=bool(r["normalize"]),
        )
    except (IOError, ValueError, KeyError) as e:
        raise CliError(str(e)) from e
    cluster.write_labels(doc_ids, labels, _path(workdir, r["out"]))
    print(json.dumps({"docs": len(doc_ids), "k": int(r["k"])}, sort_keys=True))
    return 0


def _load_labeled_matrix(store, vocab, labels_path, k=None):
    doc_ids, labels = cluster.read_labels(labels_path)
    by_doc = {int(d): int(l) for d, l in zip(doc_ids, labels)}
    if k is None:
        k = max(labels) + 1 if labels else 0
    bows = (
        textprep.encode_bow(tokens, vocab, doc_id=doc_id)
        for doc_id, tokens in _token_stream(store)
    )
    matrix = ctfidf.class_term_counts(bows, by_doc, k=k, vocab_size=len(vocab))
    return matrix, doc_ids, labels


def _topics_payload(reps, id_to_term):
    return [
        {
            "topic_id": rep.topic_id,
            "size": rep.size,
            "terms": [[id_to_term[tid], weight] for tid, weight in rep.terms],
        }
        for rep in reps
    ]


def _write_artifact(kind, payload, path):
    report.validate_artifact(kind, payload)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, sort_keys=True, indent=2, ensure_ascii=False)
        f.write("\n")


def _lda_representations(store, vocab, model_path, top_n):
    """LDA-track stand-in for cluster representations: term probabilities as
    weights, topic size = documents whose strongest topic is this one, and
    normalized topic-term rows as the vectors behind maps and dendrograms."""
    model = lda.load_model(model_path)
    sizes = [0] * model.k
    for batch in corpus.stream_corpus(store, 4096):
        bows = [
            textprep.encode_bow(textprep.normalize_tweet(rec.text), vocab, doc_id=rec.id)
            for rec in batch
        ]
        thetas = lda.infer_theta_batch(model, bows)
        for theta in thetas:
            sizes[int(theta.argmax())] += 1
    rows = model.topic_distributions()
    reps = []
    for t in range(model.k):
        reps.append(
            ctfidf.TopicRepresentation(
                topic_id=t,
                size=sizes[t],
                terms=lda.topic_top_terms(model, t, top_n),
                ctfidf_vector=rows[t],
            )
        )
    return reps


def _cmd_topics_represent(args, workdir):
    r = _resolve(args, ("corpus", "vocab", "labels", "model", "top_n", "out",
                        "dendrogram_out", "map_out"), workdir)
    for key in ("corpus", "vocab", "out"):
        if r[key] is None:
            raise CliError(f"missing required option --{key}")
    if (r["labels"] is None) == (r["model"] is None):
        raise CliError("exactly one of --labels or --model is required")
    _write_resolved(workdir, "topics-represent", r)
    store = _store(workdir, r["corpus"])
    vocab = textprep.Vocabulary.load(_path(workdir, r["vocab"]))
    try:
        if r["labels"] is not None:
            matrix, _, _ = _load_labeled_matrix(store, vocab, _path(workdir, r["labels"]))
            reps = ctfidf.build_representations(matrix, top_n=int(r["top_n"]))
        else:
            reps = _lda_representations(store, vocab, _path(workdir, r["model"]),
                                        int(r["top_n"]))
    except (IOError, ValueError) as e:
        raise CliError(str(e)) from e
    id_to_term = vocab.id_to_term
    _write_artifact("topics", _topics_payload(reps, id_to_term), _path(workdir, r["out"]))
    if r["dendrogram_out"] is not None or r["map_out"] is not None:
        if len(reps) < 2:
            raise CliError("hierarchy artifacts need at least 2 topics")
        if r["dendrogram_out"] is not None:
            dendro = hierarchy.build_dendrogram(hierarchy.similarity_matrix(reps))
            _write_artifact("dendrogram", dendro.as_dict(), _path(workdir, r["dendrogram_out"]))
        if r["map_out"] is not None:
            topic_map = hierarchy.intertopic_map(reps, terms=id_to_term)
            _write_artifact("map2d", topic_map.as_dict(), _path(workdir, r["map_out"]))
    print(json.dumps({"topics": len(reps)}, sort_keys=True))
    return 0


def _cmd_topics_reduce(args, workdir):
    r = _resolve(args, ("corpus", "vocab", "labels", "target", "top_n", "out",
                        "out_labels", "dendrogram_out", "map_out"), workdir)
    for key in ("corpus", "vocab", "labels", "target", "out", "out_labels"):
        if r[key] is None:
            raise CliError(f"missing required option --{key.replace('_', '-')}")
    _write_resolved(workdir, "topics-reduce", r)
    store = _store(workdir, r["corpus"])
    vocab = textprep.Vocabulary.load(_path(workdir, r["vocab"]))
    try:
        matrix, doc_ids, labels = _load_labeled_matrix(store, vocab, _path(workdir, r["labels"]))
        reps = ctfidf.build_representations(matrix, top_n=int(r["top_n"]))
        if len(reps) < 2:
            raise CliError("reduction needs at least 2 topics")
        dendro = hierarchy.build_dendrogram(hierarchy.similarity_matrix(reps))
        new_labels, new_matrix, new_reps, _ = hierarchy.reduce_topics(
            labels, matrix, dendro, int(r["target"]), top_n=int(r["top_n"])
        )
    except (IOError, ValueError) as e:
        raise CliError(str(e)) from e
    id_to_term = vocab.id_to_term
    cluster.write_labels(doc_ids, new_labels, _path(workdir, r["out_labels"]))
    _write_artifact("topics", _topics_payload(new_reps, id_to_term), _path(workdir, r["out"]))
    if r["dendrogram_out"] is not None:
        _write_artifact("dendrogram", dendro.as_dict(), _path(workdir, r["dendrogram_out"]))
    if r["map_out"] is not None:
        topic_map = hierarchy.intertopic_map(new_reps, terms=id_to_term)
        _write_artifact("map2d", topic_map.as_dict(), _path(workdir, r["map_out"]))
    print(json.dumps({"topics": len(new_reps)}, sort_keys=True))
    return 0


def _cmd_coherence(args, workdir):
    r = _resolve(args, ("topics", "corpus", "top_n", "window", "out"), workdir)
    if r["topics"] is None or r["corpus"] is None:
        raise CliError("missing required option --topics/--corpus")
    _write_resolved(workdir, "coherence", r)
    store = _store(workdir, r["corpus"])
    try:
        with open(_path(workdir, r["topics"]), encoding="utf-8") as f:
            topics_payload = json.load(f)
        report.validate_artifact("topics", topics_payload)
    except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as e:
        raise CliError(f"cannot read topics file: {e}") from e
    word_lists = [[term for term, _ in t["terms"][: int(r["top_n"])]] for t in topics_payload]
    cfg = coherence.CoherenceConfig(window_size=int(r["window"]), top_n=int(r["top_n"]))
    try:
        scores, mean = coherence.cv_model(
            lambda: (tokens for _, tokens in _token_stream(store)), word_lists, cfg
        )
    except ValueError as e:
        raise CliError(str(e)) from e
    payload = {"per_topic": scores, "mean": mean}
    if r["out"] is not None:
        _write_artifact("coherence", payload, _path(workdir, r["out"]))
    print(json.dumps(payload, sort_keys=True))
    return 0


def _cmd_dynamics(args, workdir):
    r = _resolve(args, ("corpus", "labels", "model", "vocab", "granularity", "out"), workdir)
    if r["corpus"] is None or r["out"] is None:
        raise CliError("missing required option --corpus/--out")
    if (r["labels"] is None) == (r["model"] is None):
        raise CliError("exactly one of --labels or --model is required")
    if r["model"] is not None and r["vocab"] is None:
        raise CliError("--model requires --vocab to encode documents")
    _write_resolved(workdir, "dynamics", r)
    store = _store(workdir, r["corpus"])
    try:
        buckets = corpus.time_buckets(store, r["granularity"])
        if r["labels"] is not None:
            doc_ids, labels = cluster.read_labels(_path(workdir, r["labels"]))
            n_topics = max(labels) + 1 if labels else 0
            weights = dynamics.one_hot_weights(doc_ids, labels, n_topics)
        else:
            model = lda.load_model(_path(workdir, r["model"]))
            vocab = textprep.Vocabulary.load(_path(workdir, r["vocab"]))
            weights = {}
            for batch in corpus.stream_corpus(store, 4096):
                bows = [
                    textprep.encode_bow(textprep.normalize_tweet(rec.text), vocab, doc_id=rec.id)
                    for rec in batch
                ]
                thetas = lda.infer_theta_batch(model, bows)
                for rec, theta in zip(batch, thetas):
                    weights[rec.id] = theta
            n_topics = model.k
        matrix = dynamics.topic_time_matrix(weights, buckets, n_topics)
    except (IOError, ValueError) as e:
        raise CliError(str(e)) from e
    _write_artifact("dynamics", matrix.as_dict(), _path(workdir, r["out"]))
    print(json.dumps({"buckets": len(buckets), "topics": n_topics}, sort_keys=True))
    return 0


def _cmd_report(args, workdir):
    r = _resolve(args, ("out", "topics", "coherence", "dynamics", "dendrogram",
                        "map2d", "sweep", "seed"), workdir)
    if r["out"] is None:
        raise CliError("missing required option --out")
    _write_resolved(workdir, "report", r)

    def load(kind):
        value = r[kind]
        if value is None:
            return None
        path = _path(workdir, value)
        try:
            with open(path, encoding="utf-8") as f:
                payload = json.load(f)
            report.validate_artifact(kind, payload)
            return payload
        except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as e:
            raise CliError(f"malformed artifact {path}: {e}") from e

    artifacts = {kind: load(kind) for kind in report.ARTIFACT_FILES}
    if all(v is None for v in artifacts.values()):
        raise CliError("no artifacts given; pass at least one of "
                       "--topics/--coherence/--dynamics/--dendrogram/--map2d/--sweep")
    out = _path(workdir, r["out"])
    try:
        report.emit_json(out, config=r, seeds={"seed": r["seed"]}, **artifacts)
        pages = report.emit_html(out)
    except (OSError, ValueError) as e:
        raise CliError(str(e)) from e
    print(json.dumps({"pages": sorted(pages)}, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _add_common(p):
    p.add_argument("--config", help="flat JSON file of option values")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--workdir", default=".", help="base directory for relative paths")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tweetopics",
        description="Streaming topic modelling over short-text corpora",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest tweet JSONL into a corpus store")
    p.add_argument("--input")
    p.add_argument("--out")
    p.add_argument("--since", help="YYYY-MM-DD (UTC, inclusive)")
    p.add_argument("--until", help="YYYY-MM-DD (UTC, inclusive)")
    _add_common(p)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("vocab", help="build the vocabulary from a corpus store")
    p.add_argument("--corpus")
    p.add_argument("--out")
    p.add_argument("--min-df", dest="min_df", type=int)
    p.add_argument("--max-df-ratio", dest="max_df_ratio", type=float)
    _add_common(p)
    p.set_defaults(func=_cmd_vocab)

    p = sub.add_parser("embed-validate", help="check embedding/corpus alignment")
    p.add_argument("--corpus")
    p.add_argument("--embeddings")
    _add_common(p)
    p.set_defaults(func=_cmd_embed_validate)

    lda_p = sub.add_parser("lda", help="online LDA commands")
    lda_sub = lda_p.add_subparsers(dest="subcommand", required=True)
    p = lda_sub.add_parser("train", help="train online LDA")
    p.add_argument("--corpus")
    p.add_argument("--vocab")
    p.add_argument("--k", type=int)
    p.add_argument("--batch", type=int)
    p.add_argument("--passes", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--tau0", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_lda_train)
    p = lda_sub.add_parser("sweep", help="coherence sweep over topic counts")
    p.add_argument("--corpus")
    p.add_argument("--vocab")
    p.add_argument("--k-grid", dest="k_grid", help="start:stop[:step] or k1,k2,...")
    p.add_argument("--metric", choices=["c_v"])
    p.add_argument("--batch", type=int)
    p.add_argument("--passes", type=int)
    p.add_argument("--top-n", dest="top_n", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_lda_sweep)

    bert_p = sub.add_parser("bertopic", help="embedding-cluster pipeline commands")
    bert_sub = bert_p.add_subparsers(dest="subcommand", required=True)
    p = bert_sub.add_parser("train", help="PCA + k-means over precomputed embeddings")
    p.add_argument("--corpus")
    p.add_argument("--embeddings")
    p.add_argument("--k", type=int)
    p.add_argument("--pca-dims", dest="pca_dims", type=int)
    p.add_argument("--batch", type=int)
    p.add_argument("--normalize", action="store_const", const=True, default=None)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_bertopic_train)

    topics_p = sub.add_parser("topics", help="topic representation commands")
    topics_sub = topics_p.add_subparsers(dest="subcommand", required=True)
    p = topics_sub.add_parser("represent", help="topic representations (c-TF-IDF or LDA)")
    p.add_argument("--corpus")
    p.add_argument("--vocab")
    p.add_argument("--labels", help="labels table (cluster track)")
    p.add_argument("--model", help="trained model file (LDA track)")
    p.add_argument("--top-n", dest="top_n", type=int)
    p.add_argument("--out")
    p.add_argument("--dendrogram-out", dest="dendrogram_out")
    p.add_argument("--map-out", dest="map_out")
    _add_common(p)
    p.set_defaults(func=_cmd_topics_represent)
    p = topics_sub.add_parser("reduce", help="merge topics down to a target count")
    p.add_argument("--corpus")
    p.add_argument("--vocab")
    p.add_argument("--labels")
    p.add_argument("--target", type=int)
    p.add_argument("--top-n", dest="top_n", type=int)
    p.add_argument("--out")
    p.add_argument("--out-labels", dest="out_labels")
    p.add_argument("--dendrogram-out", dest="dendrogram_out")
    p.add_argument("--map-out", dest="map_out")
    _add_common(p)
    p.set_defaults(func=_cmd_topics_reduce)

    p = sub.add_parser("coherence", help="C_V coherence of topic word lists")
    p.add_argument("--topics")
    p.add_argument("--corpus")
    p.add_argument("--top-n", dest="top_n", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_coherence)

    p = sub.add_parser("dynamics", help="topic share per time bucket")
    p.add_argument("--corpus")
    p.add_argument("--labels")
    p.add_argument("--model")
    p.add_argument("--vocab")
    p.add_argument("--granularity", choices=["day", "week", "month"])
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=_cmd_dynamics)

    p = sub.add_parser("report", help="emit JSON artifacts and static HTML pages")
    p.add_argument("--out")
    p.add_argument("--topics")
    p.add_argument("--coherence")
    p.add_argument("--dynamics")
    p.add_argument("--dendrogram")
    p.add_argument("--map2d")
    p.add_argument("--sweep")
    _add_common(p)
    p.set_defaults(func=_cmd_report)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    workdir = Path(args.workdir)
    try:
        return args.func(args, workdir)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # unexpected: still an operational failure, not a crash
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
