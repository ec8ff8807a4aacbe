"""Machine-readable result emission and static HTML figures.

emit_json writes whichever artifacts a run produced (topics, coherence,
dynamics, dendrogram, 2-D map, sweep) with stable key order, validates each
against its bundled schema, and records a manifest with the resolved-config
hash, seeds, and per-file sizes and content hashes. Two identical runs emit
byte-identical files.

emit_html renders the JSON artifacts into self-contained pages (inline SVG,
no scripts, no network fetches): keyword tables, the coherence-vs-k curve,
a stacked dynamics chart, the inter-topic distance map and the dendrogram.
"""

import hashlib
import html
import json
from importlib import resources
from pathlib import Path

import jsonschema

__all__ = ["config_hash", "emit_json", "emit_html", "validate_artifact"]

ARTIFACT_FILES = {
    "topics": "topics.json",
    "coherence": "coherence.json",
    "dynamics": "dynamics.json",
    "dendrogram": "dendrogram.json",
    "map2d": "map2d.json",
    "sweep": "sweep.json",
}


def _schema(name: str) -> dict:
    ref = resources.files("tweetopics").joinpath(f"schemas/{name}-v1.schema.json")
    return json.loads(ref.read_text(encoding="utf-8"))


def validate_artifact(kind: str, payload) -> None:
    jsonschema.validate(payload, _schema(kind))


def _dump(payload) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def emit_json(out_dir, *, config: dict, seeds: dict | None = None, topics=None,
              coherence=None, dynamics=None, dendrogram=None, map2d=None,
              sweep=None) -> dict:
    """Write present artifacts plus the run manifest; returns the manifest."""
    artifacts = {
        "topics": topics,
        "coherence": coherence,
        "dynamics": dynamics,
        "dendrogram": dendrogram,
        "map2d": map2d,
        "sweep": sweep,
    }
    if all(v is None for v in artifacts.values()):
        raise ValueError("no artifacts to emit")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    sections = {}
    for kind, payload in artifacts.items():
        sections[kind] = payload is not None
        if payload is None:
            continue
        validate_artifact(kind, payload)
        blob = _dump(payload)
        name = ARTIFACT_FILES[kind]
        (out / name).write_bytes(blob)
        files[name] = {"bytes": len(blob), "sha256": hashlib.sha256(blob).hexdigest()}
    manifest = {
        "schema_version": 1,
        "config_hash": config_hash(config),
        "seeds": seeds or {},
        "files": files,
        "sections": sections,
    }
    validate_artifact("manifest", manifest)
    (out / "manifest.json").write_bytes(_dump(manifest))
    return manifest


def _load_artifact(out_dir: Path, kind: str):
    path = out_dir / ARTIFACT_FILES[kind]
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        validate_artifact(kind, payload)
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        raise ValueError(f"malformed artifact {path}: {e}") from e
    return payload


# ---------------------------------------------------------------------------
# SVG helpers. Charts are emitted as plain markup so pages stay self-contained.

_PALETTE = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
    "#fabfd2", "#b6992d", "#499894", "#79706e",
]


def _color(i: int) -> str:
    return _PALETTE[i % len(_PALETTE)]


def _page(title: str, body: str) -> str:
    return (
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
        f"<title>{html.escape(title)}</title>"
        "<style>body{font-family:sans-serif;margin:2em;max-width:960px}"
        "table{border-collapse:collapse}td,th{border:1px solid #ccc;padding:4px 8px}"
        "h1{font-size:1.4em}figure{margin:1em 0}</style>"
        f"</head><body><h1>{html.escape(title)}</h1>\n{body}\n</body></html>\n"
    )


def _scale(values, lo_px, hi_px):
    vmin, vmax = min(values), max(values)
    span = (vmax - vmin) or 1.0
    return lambda v: lo_px + (v - vmin) / span * (hi_px - lo_px)


def _topics_html(topics) -> str:
    rows = []
    for topic in topics:
        terms = ", ".join(f"{html.escape(t)} ({w:.4f})" for t, w in topic["terms"])
        rows.append(
            f"<tr><td>{topic['topic_id']}</td><td>{topic['size']}</td><td>{terms}</td></tr>"
        )
    table = (
        "<table><tr><th>topic</th><th>docs</th><th>top terms (weight)</th></tr>"
        + "".join(rows)
        + "</table>"
    )
    return _page("Topic keywords", table)


def _sweep_html(sweep) -> str:
    pts = [(k, s) for k, s in sweep["table"] if s is not None]
    if not pts:
        return _page("Coherence sweep", "<p>No scored configurations.</p>")
    w, h, pad = 720, 400, 50
    sx = _scale([k for k, _ in pts], pad, w - pad)
    sy = _scale([s for _, s in pts], h - pad, pad)
    poly = " ".join(f"{sx(k):.1f},{sy(s):.1f}" for k, s in pts)
    marks = "".join(
        f'<circle cx="{sx(k):.1f}" cy="{sy(s):.1f}" r="4" fill="{_color(0)}"/>' for k, s in pts
    )
    best = sweep.get("argmax_k")
    star = ""
    if best is not None:
        best_s = dict(pts).get(best)
        if best_s is not None:
            star = (
                f'<circle cx="{sx(best):.1f}" cy="{sy(best_s):.1f}" r="8" fill="none" '
                f'stroke="{_color(2)}" stroke-width="3"/>'
                f'<text x="{sx(best) + 10:.1f}" y="{sy(best_s) - 10:.1f}">argmax k={best}</text>'
            )
    labels = "".join(
        f'<text x="{sx(k):.1f}" y="{h - pad + 20}" text-anchor="middle">{k}</text>' for k, _ in pts
    )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">'
        f'<polyline points="{poly}" fill="none" stroke="{_color(0)}" stroke-width="2"/>'
        f"{marks}{star}{labels}"
        f'<text x="{w / 2}" y="{h - 8}" text-anchor="middle">number of topics</text>'
        "</svg>"
    )
    return _page("Coherence sweep", f"<figure>{svg}</figure>")


def _dynamics_html(dynamics) -> str:
    buckets = dynamics["buckets"]
    shares = dynamics["shares"]
    topics = dynamics["topics"]
    if not buckets:
        return _page("Topic dynamics", "<p>No buckets.</p>")
    w, h, pad = 760, 420, 50
    xs = [pad + i * (w - 2 * pad) / max(1, len(buckets) - 1) for i in range(len(buckets))]
    bands = []
    base = [0.0] * len(buckets)
    for col, topic in enumerate(topics):
        top = [base[i] + shares[i][col] for i in range(len(buckets))]
        upper = [
            f"{xs[i]:.1f},{h - pad - top[i] * (h - 2 * pad):.1f}" for i in range(len(buckets))
        ]
        lower = [
            f"{xs[i]:.1f},{h - pad - base[i] * (h - 2 * pad):.1f}"
            for i in reversed(range(len(buckets)))
        ]
        bands.append(
            f'<polygon points="{" ".join(upper + lower)}" fill="{_color(col)}" '
            f'stroke="none" opacity="0.85"><title>topic {topic}</title></polygon>'
        )
        base = top
    legend = "".join(
        f'<rect x="{pad + i * 90}" y="8" width="12" height="12" fill="{_color(i)}"/>'
        f'<text x="{pad + i * 90 + 16}" y="19">topic {t}</text>'
        for i, t in enumerate(topics[:8])
    )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">'
        + "".join(bands)
        + legend
        + f'<text x="{w / 2}" y="{h - 8}" text-anchor="middle">time buckets '
        f"({len(buckets)} total)</text></svg>"
    )
    return _page("Topic dynamics", f"<figure>{svg}</figure>")


def _map2d_html(map2d) -> str:
    entries = map2d["entries"]
    if not entries:
        return _page("Inter-topic distance map", "<p>No topics.</p>")
    w, h, pad = 720, 560, 60
    sx = _scale([e["x"] for e in entries], pad, w - pad)
    sy = _scale([e["y"] for e in entries], h - pad, pad)
    max_size = max(e["size"] for e in entries) or 1
    dots = []
    for i, e in enumerate(entries):
        r = 4 + 26 * (e["size"] / max_size) ** 0.5  # marker area tracks topic size
        dots.append(
            f'<circle cx="{sx(e["x"]):.1f}" cy="{sy(e["y"]):.1f}" r="{r:.1f}" '
            f'fill="{_color(i)}" opacity="0.6"><title>{html.escape(e["label"])} '
            f'({e["size"]} docs)</title></circle>'
            f'<text x="{sx(e["x"]):.1f}" y="{sy(e["y"]):.1f}" font-size="10" '
            f'text-anchor="middle">{e["topic_id"]}</text>'
        )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">'
        + "".join(dots)
        + "</svg>"
    )
    table = "".join(
        f"<tr><td>{e['topic_id']}</td><td>{e['size']}</td><td>{html.escape(e['label'])}</td></tr>"
        for e in entries
    )
    body = (
        f"<figure>{svg}</figure><table><tr><th>topic</th><th>docs</th><th>label</th></tr>"
        f"{table}</table>"
    )
    return _page("Inter-topic distance map", body)


def _dendrogram_html(dendrogram) -> str:
    n = dendrogram["n_leaves"]
    merges = dendrogram["merges"]
    w = 720
    h = 24 * n + 80
    pad = 40
    # leaf order: walk the final tree left-to-right
    children = {m[3]: (m[0], m[1]) for m in merges}
    root = merges[-1][3] if merges else 0
    order = []

    def walk(node):
        if node in children:
            left, right = children[node]
            walk(left)
            walk(right)
        else:
            order.append(node)

    walk(root)
    ys = {leaf: 40 + i * 24 for i, leaf in enumerate(order)}
    max_h = max((m[2] for m in merges), default=1.0) or 1.0
    sx = lambda height: pad + (height / max_h) * (w - 2 * pad)
    xs = {leaf: sx(0.0) for leaf in order}
    parts = [
        f'<text x="{pad - 6}" y="{ys[leaf] + 4}" text-anchor="end" font-size="11">{leaf}</text>'
        for leaf in order
    ]
    for left, right, height, new_id in merges:
        x = sx(height)
        y1, y2 = ys[left], ys[right]
        parts.append(
            f'<path d="M {xs[left]:.1f} {y1:.1f} H {x:.1f} V {y2:.1f} H {xs[right]:.1f}" '
            f'fill="none" stroke="#555" stroke-width="1.5"/>'
        )
        ys[new_id] = (y1 + y2) / 2
        xs[new_id] = x
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">'
        + "".join(parts)
        + f'<text x="{w / 2}" y="{h - 8}" text-anchor="middle">merge distance →</text></svg>'
    )
    return _page("Topic hierarchy", f"<figure>{svg}</figure>")


def emit_html(out_dir) -> list:
    """Render every artifact present in out_dir to a static page; returns the page names."""
    out = Path(out_dir)
    renderers = {
        "topics": _topics_html,
        "sweep": _sweep_html,
        "coherence": None,  # folded into index
        "dynamics": _dynamics_html,
        "map2d": _map2d_html,
        "dendrogram": _dendrogram_html,
    }
    pages = []
    links = []
    coherence = _load_artifact(out, "coherence")
    for kind, render in renderers.items():
        if render is None:
            continue
        payload = _load_artifact(out, kind)
        if payload is None:
            continue
        name = f"{kind}.html"
        (out / name).write_text(render(payload), encoding="utf-8")
        pages.append(name)
        links.append(f'<li><a href="{name}">{kind}</a></li>')
    summary = ""
    if coherence is not None:
        scored = [s for s in coherence["per_topic"] if s is not None]
        summary = (
            f"<p>Mean topic coherence: <b>{coherence['mean']:.4f}</b> over "
            f"{len(scored)} topics.</p>"
        )
    index = _page("Topic modelling report", summary + "<ul>" + "".join(links) + "</ul>")
    (out / "index.html").write_text(index, encoding="utf-8")
    pages.append("index.html")
    return pages
