"""Corpus-to-embedding pipeline.

Entropy-weighted term-document matrix, truncated SVD word embeddings,
embedding truncation, and n-gram embedding assembly by concatenation.
Tokenization and lemmatization are upstream responsibilities: the corpus
loader ingests pre-tokenized documents.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import svds

from .core import InvalidArgumentError, PointCloud


class SvdConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Corpus:
    """Pre-tokenized documents with a first-occurrence-ordered vocabulary."""

    documents: tuple
    vocabulary: tuple

    def __post_init__(self):
        docs = tuple(tuple(doc) for doc in self.documents)
        if len(docs) < 2:
            raise InvalidArgumentError("corpus needs at least 2 documents")
        if any(len(doc) == 0 for doc in docs):
            raise InvalidArgumentError("corpus contains an empty document")
        object.__setattr__(self, "documents", docs)
        object.__setattr__(self, "vocabulary", tuple(self.vocabulary))

    @property
    def N(self) -> int:
        return len(self.documents)

    @property
    def M(self) -> int:
        return len(self.vocabulary)

    @classmethod
    def from_documents(cls, documents, stopwords=()) -> "Corpus":
        stop = set(stopwords)
        filtered = []
        for doc in documents:
            toks = [t for t in doc if t not in stop]
            if toks:
                filtered.append(toks)
        if len(filtered) < 2:
            raise InvalidArgumentError("fewer than 2 nonempty documents after filtering")
        vocab = {}
        for doc in filtered:
            for t in doc:
                if t not in vocab:
                    vocab[t] = len(vocab)
        return cls(tuple(filtered), tuple(vocab))


def load_corpus(path, stopwords=()) -> "Corpus":
    """Directory of whitespace-token text files (one document each) or a
    JSONL file of {"id": ..., "tokens": [...]} records."""
    path = Path(path)
    docs = []
    if path.is_dir():
        for f in sorted(path.glob("*.txt")):
            docs.append(f.read_text(encoding="utf-8").split())
    else:
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    docs.append(json.loads(line)["tokens"])
    return Corpus.from_documents(docs, stopwords)


def load_stopwords(path) -> set:
    return {
        line.strip()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    }


@dataclass(frozen=True)
class CountMatrix:
    """M x N sparse word-by-document counts with row/column totals."""

    counts: sp.csr_matrix
    vocabulary: tuple
    row_totals: np.ndarray
    col_totals: np.ndarray


@dataclass(frozen=True)
class EmbeddingTable:
    tokens: tuple
    vectors: np.ndarray  # len(tokens) x d
    singular_values: np.ndarray
    oov_skipped: int = 0
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        vec = np.asarray(self.vectors, dtype=np.float64)
        sv = np.asarray(self.singular_values, dtype=np.float64)
        if vec.shape[0] != len(self.tokens):
            raise InvalidArgumentError("token/vector count mismatch")
        if np.any(np.diff(sv) > 0) or np.any(sv < 0):
            raise InvalidArgumentError("singular values must be nonincreasing and >= 0")
        object.__setattr__(self, "vectors", vec)
        object.__setattr__(self, "singular_values", sv)
        object.__setattr__(self, "index", {t: i for i, t in enumerate(self.tokens)})

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    def vector(self, token: str) -> np.ndarray:
        return self.vectors[self.index[token]]

    def as_cloud(self) -> PointCloud:
        return PointCloud(self.vectors, {"generator": "embedding_table", "d": self.d})


def count_matrix(corpus: Corpus, stopwords=()) -> CountMatrix:
    """Token counts per document; stopwords are removed, the surviving
    vocabulary keeps first-occurrence order."""
    if stopwords:
        corpus = Corpus.from_documents(corpus.documents, stopwords)
    vocab = {t: i for i, t in enumerate(corpus.vocabulary)}
    rows, cols, vals = [], [], []
    for j, doc in enumerate(corpus.documents):
        seen = {}
        for t in doc:
            seen[vocab[t]] = seen.get(vocab[t], 0) + 1
        rows.extend(seen.keys())
        cols.extend([j] * len(seen))
        vals.extend(seen.values())
    counts = sp.csr_matrix(
        (vals, (rows, cols)), shape=(corpus.M, corpus.N), dtype=np.float64
    )
    return CountMatrix(
        counts=counts,
        vocabulary=corpus.vocabulary,
        row_totals=np.asarray(counts.sum(axis=1)).ravel(),
        col_totals=np.asarray(counts.sum(axis=0)).ravel(),
    )


def entropy_weights(counts: CountMatrix) -> np.ndarray:
    """Normalized entropy of each word's distribution over documents."""
    n_docs = counts.counts.shape[1]
    if n_docs < 2:
        raise InvalidArgumentError("entropy normalization needs N >= 2")
    c = counts.counts.tocoo()
    p = c.data / counts.row_totals[c.row]
    terms = -p * np.log(p)
    eps = np.zeros(counts.counts.shape[0])
    np.add.at(eps, c.row, terms)
    eps /= np.log(n_docs)
    return np.clip(eps, 0.0, 1.0)


def weight_matrix(counts: CountMatrix, eps: np.ndarray) -> sp.csr_matrix:
    """Entropy-weighted, document-length-normalized count matrix."""
    if eps.shape[0] != counts.counts.shape[0]:
        raise InvalidArgumentError("entropy vector length mismatch")
    c = counts.counts.tocoo()
    data = (1.0 - eps[c.row]) * c.data / counts.col_totals[c.col]
    w = sp.csr_matrix((data, (c.row, c.col)), shape=counts.counts.shape)
    w.eliminate_zeros()
    return w


def _fix_signs(u: np.ndarray, vt: np.ndarray):
    """Largest-magnitude entry of each left singular vector made positive."""
    for k in range(u.shape[1]):
        col = u[:, k]
        j = int(np.argmax(np.abs(col)))
        if col[j] < 0:
            u[:, k] = -col
            vt[k, :] = -vt[k, :]
    return u, vt


def truncated_svd(w, d: int, vocabulary=None, maxiter: int | None = None):
    """Top-d singular triplets of the weighted matrix.

    Uses ARPACK's implicitly restarted Lanczos bidiagonalization for
    sparse inputs (dense LAPACK for tiny ones).  Returns an
    EmbeddingTable of the left factor rows plus the right factor for
    diagnostics.
    """
    m, n = w.shape
    d = int(d)
    if not 1 <= d <= min(m, n):
        raise InvalidArgumentError(f"need 1 <= d <= min(M, N) = {min(m, n)}, got {d}")
    if vocabulary is None:
        vocabulary = tuple(f"w{i}" for i in range(m))
    if d >= min(m, n) - 1 or min(m, n) <= 32:
        dense = w.toarray() if sp.issparse(w) else np.asarray(w, dtype=np.float64)
        uu, ss, vvt = np.linalg.svd(dense, full_matrices=False)
        u, s, vt = uu[:, :d], ss[:d], vvt[:d, :]
    else:
        try:
            u, s, vt = svds(sp.csr_matrix(w), k=d, maxiter=maxiter, random_state=0)
        except Exception as exc:  # ArpackNoConvergence and friends
            raise SvdConvergenceError(f"truncated SVD failed to converge: {exc}") from exc
        order = np.argsort(s)[::-1]
        u, s, vt = u[:, order], s[order], vt[order, :]
    u, vt = _fix_signs(np.ascontiguousarray(u), np.ascontiguousarray(vt))
    table = EmbeddingTable(tokens=tuple(vocabulary), vectors=u, singular_values=s)
    return table, vt


def truncate_embeddings(table: EmbeddingTable, d2: int) -> EmbeddingTable:
    """Keep the first d2 coordinates and singular values."""
    d2 = int(d2)
    if not 1 <= d2 <= table.d:
        raise InvalidArgumentError(f"need 1 <= d2 <= {table.d}, got {d2}")
    return EmbeddingTable(
        tokens=table.tokens,
        vectors=table.vectors[:, :d2].copy(),
        singular_values=table.singular_values[:d2].copy(),
        oov_skipped=table.oov_skipped,
    )


def ngram_embeddings(corpus: Corpus, table: EmbeddingTable, n: int) -> EmbeddingTable:
    """Concatenated embeddings of unique within-document consecutive n-grams.

    Out-of-vocabulary n-grams are skipped; the skip count is reported on
    the resulting table.
    """
    n = int(n)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    idx = table.index
    grams = {}
    skipped = 0
    for doc in corpus.documents:
        for start in range(len(doc) - n + 1):
            gram = doc[start : start + n]
            key = " ".join(gram)
            if key in grams:
                continue
            if all(t in idx for t in gram):
                grams[key] = np.concatenate([table.vectors[idx[t]] for t in gram])
            else:
                grams[key] = None
                skipped += 1
    kept = {k: v for k, v in grams.items() if v is not None}
    if not kept:
        raise InvalidArgumentError("no in-vocabulary n-grams found")
    vectors = np.vstack(list(kept.values()))
    return EmbeddingTable(
        tokens=tuple(kept),
        vectors=vectors,
        singular_values=np.repeat(table.singular_values, n),
        oov_skipped=skipped,
    )


# ---------------------------------------------------------------------------
# Embedding table file format: TSV with a '#dim=d #sigma=...' header line.


def write_embedding_table(table: EmbeddingTable, path) -> None:
    path = Path(path)
    sig = ",".join(format(s, ".17g") for s in table.singular_values)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#dim={table.d} #sigma={sig}\n")
        for tok, vec in zip(table.tokens, table.vectors):
            fh.write(tok + "\t" + "\t".join(format(v, ".17g") for v in vec) + "\n")


def read_embedding_table(path) -> EmbeddingTable:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#dim="):
            raise InvalidArgumentError(f"{path}: missing '#dim=' header")
        parts = header.split()
        d = int(parts[0][len("#dim=") :])
        sigma = np.zeros(d)
        for p in parts[1:]:
            if p.startswith("#sigma="):
                sigma = np.array([float(s) for s in p[len("#sigma=") :].split(",")])
        tokens, rows = [], []
        for line in fh:
            fields = line.rstrip("\n").split("\t")
            if len(fields) != d + 1:
                raise InvalidArgumentError(f"{path}: row has {len(fields) - 1} values, want {d}")
            tokens.append(fields[0])
            rows.append([float(v) for v in fields[1:]])
    return EmbeddingTable(
        tokens=tuple(tokens), vectors=np.array(rows), singular_values=sigma
    )
