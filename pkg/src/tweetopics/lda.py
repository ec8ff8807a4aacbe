"""Online variational-Bayes LDA trained on mini-batches with constant memory.

Update equations (standard stochastic variational inference):

  E step, per document, to convergence:
      phi_dwk  proportional to  exp(psi(gamma_dk)) * exp(psi(lambda_kw) - psi(sum_w lambda_kw))
      gamma_dk = alpha + sum_w n_dw * phi_dwk
  stopping when the mean absolute per-topic change of gamma drops below 1e-3,
  or after 100 iterations.

  M step, once per mini-batch of S documents out of a corpus of D:
      rho_t  = (tau0 + t) ** (-kappa)
      lambda <- (1 - rho_t) * lambda + rho_t * (eta + (D / S) * sstats)
      t      <- t + 1

The E step is data-parallel: each mini-batch is cut into fixed-size chunks of
documents, chunks may be computed by worker processes, and chunk results are
reduced in chunk order. Because the chunk size never depends on the worker
count, the reduction order (hence every float) is identical for any number of
workers.
"""

import json
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import psi

__all__ = [
    "LdaModel",
    "EStepResult",
    "e_step_doc",
    "e_step_batch",
    "m_step_batch",
    "fit_stream",
    "topic_top_terms",
    "infer_theta",
    "save_model",
    "load_model",
]

E_STEP_TOL = 1e-3
E_STEP_MAX_ITER = 100
E_STEP_CHUNK = 256  # docs per parallel work unit; fixed so reductions are thread-count invariant

_MODEL_MAGIC = b"TLDA"
_MODEL_VERSION = 1
_MODEL_HEADER = struct.Struct("<4sIIIddddQQq")


def _dirichlet_expectation(alpha):
    """E[log theta] for theta ~ Dir(alpha), rows of a 2-D array or a 1-D vector."""
    if alpha.ndim == 1:
        return psi(alpha) - psi(alpha.sum())
    return psi(alpha) - psi(alpha.sum(axis=1))[:, np.newaxis]


class LdaModel:
    """Topic-term variational parameters plus the online-update schedule state."""

    def __init__(self, k, vocab_size, *, alpha=None, eta=None, tau0=64.0,
                 kappa=0.7, corpus_size=0, seed=42):
        if k < 1:
            raise ValueError("k must be >= 1")
        if vocab_size < 1:
            raise ValueError("vocab_size must be >= 1")
        if not (0.5 < kappa <= 1.0):
            raise ValueError("kappa must lie in (0.5, 1]")
        if tau0 <= 0:
            raise ValueError("tau0 must be positive")
        self.k = int(k)
        self.vocab_size = int(vocab_size)
        self.alpha = float(alpha) if alpha is not None else 1.0 / k
        self.eta = float(eta) if eta is not None else 1.0 / k
        self.tau0 = float(tau0)
        self.kappa = float(kappa)
        self.updates_seen = 0
        self.corpus_size = int(corpus_size)
        self.seed = int(seed)
        rng = np.random.default_rng(self.seed)
        self.lam = rng.gamma(100.0, 0.01, (self.k, self.vocab_size))
        self._refresh_cache()

    def _refresh_cache(self):
        self._exp_elog_beta = np.exp(_dirichlet_expectation(self.lam))

    @property
    def exp_elog_beta(self):
        return self._exp_elog_beta

    def topic_distributions(self):
        """Rows of lambda normalized to probability distributions."""
        return self.lam / self.lam.sum(axis=1, keepdims=True)

    def state_bytes(self) -> int:
        """Size of the persistent model state; independent of corpus length."""
        return _MODEL_HEADER.size + self.lam.nbytes


@dataclass
class EStepResult:
    """Per-document gamma plus the batch accumulation sum_d n_dw * phi_dwk."""

    gamma: np.ndarray  # batch_size x K
    sstats: np.ndarray  # K x V


def _docs_to_arrays(bows):
    docs = []
    for bow in bows:
        counts = bow.counts if hasattr(bow, "counts") else bow
        if counts:
            ids = np.fromiter(counts.keys(), dtype=np.int64, count=len(counts))
            cts = np.fromiter(counts.values(), dtype=np.float64, count=len(counts))
            order = np.argsort(ids)
            docs.append((ids[order], cts[order]))
        else:
            docs.append((np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64)))
    return docs


def _e_step_chunk(exp_elog_beta, alpha, docs):
    """Run the E step on one chunk of docs.

    Returns (gamma, union_ids, sstats_sub) where sstats_sub is the K x len(union_ids)
    accumulation sum_d n_dw * expElogtheta_dk / phinorm_dw, i.e. the batch sstats
    before the final elementwise multiply by expElogbeta.
    """
    k = exp_elog_beta.shape[0]
    b = len(docs)
    if b == 0:
        return np.zeros((0, k)), np.empty(0, dtype=np.int64), np.zeros((k, 0))
    nonempty = [ids for ids, _ in docs if ids.size]
    union_ids = np.unique(np.concatenate(nonempty)) if nonempty else np.empty(0, dtype=np.int64)
    counts = np.zeros((b, union_ids.size))
    for row, (ids, cts) in enumerate(docs):
        if ids.size:
            counts[row, np.searchsorted(union_ids, ids)] = cts
    beta_sub = exp_elog_beta[:, union_ids]  # K x U

    gamma = np.ones((b, k))
    exp_elog_theta = np.exp(_dirichlet_expectation(gamma))
    phinorm = exp_elog_theta @ beta_sub + 1e-100
    active = np.arange(b)
    for _ in range(E_STEP_MAX_ITER):
        last = gamma[active]
        g = alpha + exp_elog_theta[active] * ((counts[active] / phinorm[active]) @ beta_sub.T)
        gamma[active] = g
        exp_elog_theta[active] = np.exp(_dirichlet_expectation(g))
        phinorm[active] = exp_elog_theta[active] @ beta_sub + 1e-100
        meanchange = np.abs(g - last).mean(axis=1)
        active = active[meanchange >= E_STEP_TOL]
        if active.size == 0:
            break
    sstats_sub = exp_elog_theta.T @ (counts / phinorm)
    return gamma, union_ids, sstats_sub


def e_step_batch(model: LdaModel, bows, threads: int = 1, pool=None) -> EStepResult:
    """E step over a mini-batch; chunk results are reduced in document order."""
    docs = _docs_to_arrays(bows)
    chunks = [docs[i : i + E_STEP_CHUNK] for i in range(0, len(docs), E_STEP_CHUNK)]
    gamma = np.zeros((len(docs), model.k))
    sstats = np.zeros((model.k, model.vocab_size))
    if threads > 1 and len(chunks) > 1 and pool is not None:
        results = pool.map(_e_step_chunk_star,
                           [(model.exp_elog_beta, model.alpha, chunk) for chunk in chunks])
    else:
        results = (_e_step_chunk(model.exp_elog_beta, model.alpha, chunk) for chunk in chunks)
    row = 0
    for chunk_gamma, union_ids, sstats_sub in results:
        gamma[row : row + len(chunk_gamma)] = chunk_gamma
        if union_ids.size:
            sstats[:, union_ids] += sstats_sub
        row += len(chunk_gamma)
    sstats *= model.exp_elog_beta
    return EStepResult(gamma=gamma, sstats=sstats)


def _e_step_chunk_star(args):
    return _e_step_chunk(*args)


def e_step_doc(model: LdaModel, bow):
    """Converged gamma and phi-weighted counts for one document.

    An empty document yields the all-prior gamma (alpha in every topic) and
    zero sstats.
    """
    result = e_step_batch(model, [bow])
    return result.gamma[0], result.sstats


def m_step_batch(model: LdaModel, batch_sstats, batch_doc_count: int) -> LdaModel:
    """One online update of lambda from a batch's sufficient statistics."""
    if batch_doc_count < 1:
        raise ValueError("batch_doc_count must be >= 1")
    rho = learning_rate(model.tau0, model.updates_seen, model.kappa)
    scale = model.corpus_size / batch_doc_count if model.corpus_size else 1.0
    model.lam = (1.0 - rho) * model.lam + rho * (model.eta + scale * batch_sstats)
    model.updates_seen += 1
    model._refresh_cache()
    return model


def learning_rate(tau0: float, t: int, kappa: float) -> float:
    """rho_t = (tau0 + t) ** (-kappa); strictly decreasing in t."""
    return (tau0 + t) ** (-kappa)


def fit_stream(batches, n_docs: int, vocab_size: int, k: int, *, alpha=None,
               eta=None, tau0=64.0, kappa=0.7, passes: int = 1, seed: int = 42,
               threads: int = 1) -> LdaModel:
    """Fit online LDA over a restartable stream of BowDoc batches.

    `batches` is a zero-argument callable returning a fresh iterator of
    mini-batches (lists of BowDoc); it is called once per pass. `n_docs` is
    the corpus size D used by the M-step scaling term and stays fixed across
    passes. Model state size is O(K*V), independent of corpus length.
    """
    if n_docs < 1:
        raise ValueError("corpus is empty")
    model = LdaModel(k, vocab_size, alpha=alpha, eta=eta, tau0=tau0,
                     kappa=kappa, corpus_size=n_docs, seed=seed)
    pool = None
    try:
        if threads > 1:
            pool = ProcessPoolExecutor(max_workers=threads)
        for _ in range(passes):
            saw_docs = False
            for batch in batches():
                if not batch:
                    continue
                saw_docs = True
                result = e_step_batch(model, batch, threads=threads, pool=pool)
                m_step_batch(model, result.sstats, len(batch))
            if not saw_docs:
                raise ValueError("corpus is empty")
    finally:
        if pool is not None:
            pool.shutdown()
    return model


def topic_top_terms(model: LdaModel, topic_id: int, n: int):
    """Ranked (term_id, probability) pairs for one topic.

    Sorted by normalized lambda descending; ties broken by term id ascending.
    Asking for more terms than the vocabulary holds returns all of them.
    """
    if not (0 <= topic_id < model.k):
        raise ValueError(f"topic_id {topic_id} out of range [0, {model.k})")
    row = model.lam[topic_id]
    probs = row / row.sum()
    order = np.lexsort((np.arange(model.vocab_size), -probs))
    top = order[: min(n, model.vocab_size)]
    return [(int(i), float(probs[i])) for i in top]


def infer_theta(model: LdaModel, bow):
    """Normalized document-topic proportions gamma / sum(gamma)."""
    gamma, _ = e_step_doc(model, bow)
    return gamma / gamma.sum()


def infer_theta_batch(model: LdaModel, bows):
    """Row-normalized gammas for a batch of documents."""
    result = e_step_batch(model, bows)
    return result.gamma / result.gamma.sum(axis=1, keepdims=True)


def save_model(model: LdaModel, path) -> None:
    """Binary model file (fixed header + row-major float64 LE lambda) plus JSON summary."""
    path = Path(path)
    header = _MODEL_HEADER.pack(
        _MODEL_MAGIC, _MODEL_VERSION, model.k, model.vocab_size,
        model.alpha, model.eta, model.tau0, model.kappa,
        model.updates_seen, model.corpus_size, model.seed,
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(model.lam, dtype="<f8").tobytes())
    summary = {
        "k": model.k,
        "vocab_size": model.vocab_size,
        "alpha": model.alpha,
        "eta": model.eta,
        "tau0": model.tau0,
        "kappa": model.kappa,
        "updates_seen": model.updates_seen,
        "corpus_size": model.corpus_size,
        "seed": model.seed,
    }
    with open(path.with_suffix(path.suffix + ".json"), "w", encoding="utf-8") as f:
        json.dump(summary, f, sort_keys=True, indent=2)
        f.write("\n")


def load_model(path) -> LdaModel:
    path = Path(path)
    with open(path, "rb") as f:
        raw = f.read(_MODEL_HEADER.size)
        if len(raw) < _MODEL_HEADER.size:
            raise IOError(f"truncated model file: {path}")
        magic, version, k, v, alpha, eta, tau0, kappa, t, d, seed = _MODEL_HEADER.unpack(raw)
        if magic != _MODEL_MAGIC or version != _MODEL_VERSION:
            raise IOError(f"unsupported model format: {path}")
        lam = np.frombuffer(f.read(k * v * 8), dtype="<f8")
        if lam.size != k * v:
            raise IOError(f"truncated model file: {path}")
    model = LdaModel.__new__(LdaModel)
    model.k = k
    model.vocab_size = v
    model.alpha = alpha
    model.eta = eta
    model.tau0 = tau0
    model.kappa = kappa
    model.updates_seen = t
    model.corpus_size = d
    model.seed = seed
    model.lam = lam.reshape(k, v).copy()
    model._refresh_cache()
    return model
