"""Stochastic-label annotation: domain types, the labeling simulator, selector
statistics, and the dataset file format.

Conventions used throughout the package:

* Class labels are 1-based: ``1..K``.  The value ``K + 1`` is the reserved
  "None" selector, meaning the candidate set shown to the annotator did not
  contain the true label.
* Candidate sets are strictly increasing tuples of distinct labels.
* Randomness comes from a seeded ``numpy.random.Generator``.  Subset sampling
  performs a partial Fisher-Yates shuffle over ``1..K`` and consumes exactly
  ``l`` integer draws, so generation is reproducible from the seed alone.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DatasetParseError

NONE_OFFSET = 1  # selector K + NONE_OFFSET encodes "true label not shown"


@dataclass(frozen=True)
class LabeledExample:
    """A single ordinarily labeled instance.

    ``features`` is a 1-D float vector; ``label`` lies in ``1..K``.
    """

    features: np.ndarray
    label: int


@dataclass(frozen=True)
class LabeledDataset:
    """A fully labeled dataset with a fixed class count ``K``."""

    K: int
    examples: list[LabeledExample]

    def __post_init__(self):
        for i, ex in enumerate(self.examples):
            if not 1 <= ex.label <= self.K:
                raise ValueError(f"example {i}: label {ex.label} outside 1..{self.K}")

    def __len__(self):
        return len(self.examples)

    @property
    def d(self) -> int:
        return len(self.examples[0].features)

    def feature_matrix(self) -> np.ndarray:
        return np.stack([ex.features for ex in self.examples])

    def labels(self) -> np.ndarray:
        return np.array([ex.label for ex in self.examples], dtype=np.int64)


@dataclass(frozen=True)
class StochasticSample:
    """One annotated instance: features, shown candidate set, and outcome.

    ``selector <= K`` means the annotator identified the true label
    ``selector`` inside ``candidate_set``; ``selector == K + 1`` means the
    true label was not among the candidates ("None").  ``features`` may be
    ``None`` for samples parsed from a file that stores features externally
    (join them back with :func:`attach_features`).
    """

    features: np.ndarray | None
    candidate_set: tuple[int, ...]
    selector: int

    def validate(self, K: int, l: int) -> None:
        cs = self.candidate_set
        if len(cs) != l or len(set(cs)) != l:
            raise ValueError(f"candidate set {cs} is not {l} distinct labels")
        if any(not 1 <= c <= K for c in cs):
            raise ValueError(f"candidate set {cs} outside 1..{K}")
        if tuple(sorted(cs)) != cs:
            raise ValueError(f"candidate set {cs} is not sorted ascending")
        if not 1 <= self.selector <= K + NONE_OFFSET:
            raise ValueError(f"selector {self.selector} outside 1..{K + 1}")
        if self.selector <= K and self.selector not in cs:
            raise ValueError(f"selector {self.selector} not in candidate set {cs}")


@dataclass(frozen=True)
class StochasticDataset:
    """An annotated dataset: shared ``K`` and candidate-set size ``l``.

    ``seed`` records the generator seed used to produce the annotation (0 when
    unknown); it is provenance only and does not affect computations.
    """

    K: int
    l: int
    samples: list[StochasticSample]
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.l <= self.K:
            raise ValueError(f"candidate-set size l={self.l} outside 1..K={self.K}")
        for i, s in enumerate(self.samples):
            try:
                s.validate(self.K, self.l)
            except ValueError as e:
                raise ValueError(f"sample {i}: {e}") from None

    def __len__(self):
        return len(self.samples)

    @property
    def none_selector(self) -> int:
        return self.K + NONE_OFFSET

    @property
    def d(self) -> int | None:
        f = self.samples[0].features if self.samples else None
        return None if f is None else len(f)

    def feature_matrix(self) -> np.ndarray:
        if any(s.features is None for s in self.samples):
            raise ValueError("dataset has feature-less samples; attach features first")
        return np.stack([s.features for s in self.samples])


@dataclass(frozen=True)
class SelectorStats:
    """Empirical selector distribution over ``1..K+1``.

    ``counts[z - 1]`` and ``probs[z - 1]`` belong to selector value ``z``;
    use :meth:`prob` to avoid the off-by-one.
    """

    counts: np.ndarray
    probs: np.ndarray

    @property
    def K(self) -> int:
        return len(self.counts) - NONE_OFFSET

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def prob(self, selector: int) -> float:
        return float(self.probs[selector - 1])

    @property
    def none_prob(self) -> float:
        return float(self.probs[-1])


def sample_subset(rng: np.random.Generator, K: int, l: int) -> tuple[int, ...]:
    """Draw a uniform size-``l`` subset of ``{1..K}``, returned sorted ascending.

    Partial Fisher-Yates: the pool ``1..K`` is swapped into place for the
    first ``l`` positions, consuming exactly ``l`` draws from ``rng``.  Each
    of the C(K, l) subsets has equal probability.
    """
    if not 1 <= l <= K:
        raise ValueError(f"subset size l={l} outside 1..K={K}")
    pool = np.arange(1, K + 1)
    for i in range(l):
        j = int(rng.integers(i, K))
        pool[i], pool[j] = pool[j], pool[i]
    return tuple(int(v) for v in sorted(pool[:l]))


def annotate(example: LabeledExample, rng: np.random.Generator, K: int, l: int) -> StochasticSample:
    """Simulate one annotation round for ``example``.

    A candidate set is drawn with :func:`sample_subset`; the selector is the
    true label when it appears among the candidates and ``K + 1`` otherwise.
    """
    if not 1 <= example.label <= K:
        raise ValueError(f"label {example.label} outside 1..{K}")
    candidates = sample_subset(rng, K, l)
    selector = example.label if example.label in candidates else K + NONE_OFFSET
    return StochasticSample(example.features, candidates, selector)


def annotate_dataset(data: LabeledDataset, l: int, seed: int) -> StochasticDataset:
    """Annotate every example of ``data`` with a fresh generator seeded by ``seed``.

    Repeated calls with the same arguments produce identical datasets.
    """
    rng = np.random.default_rng(seed)
    samples = [annotate(ex, rng, data.K, l) for ex in data.examples]
    return StochasticDataset(data.K, l, samples, seed=seed)


def selector_stats(dataset: StochasticDataset) -> SelectorStats:
    """Empirical selector frequencies: counts and counts / N over ``1..K+1``."""
    if len(dataset) == 0:
        raise ValueError("selector stats of an empty dataset are undefined")
    counts = np.zeros(dataset.K + NONE_OFFSET, dtype=np.int64)
    for s in dataset.samples:
        counts[s.selector - 1] += 1
    probs = counts / counts.sum()
    return SelectorStats(counts=counts, probs=probs)


# ---------------------------------------------------------------------------
# File format
#
#   #stochlab v1 K=<int> l=<int> N=<int> seed=<uint64>
#   <index>,<selector>,<c1;c2;...;cl>[,<f1>,<f2>,...]
#
# <index> is the row's position in the external feature source (0-based).
# Feature columns are optional; when omitted, features are re-attached by
# indexing that source.  Floats are written with repr(), which round-trips
# float64 exactly.
# ---------------------------------------------------------------------------

_HEADER_PREFIX = "#stochlab v1"


def write_dataset(dataset: StochasticDataset, path, source_indices=None) -> None:
    """Serialize ``dataset`` to the text format above.

    ``source_indices`` maps each sample to its row in an external feature
    source; by default samples are numbered 0..N-1.  Features are written
    inline whenever the samples carry them.
    """
    if source_indices is None:
        source_indices = range(len(dataset))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{_HEADER_PREFIX} K={dataset.K} l={dataset.l} N={len(dataset)} seed={dataset.seed}\n")
        for idx, s in zip(source_indices, dataset.samples):
            cands = ";".join(str(c) for c in s.candidate_set)
            row = f"{idx},{s.selector},{cands}"
            if s.features is not None:
                row += "," + ",".join(repr(float(v)) for v in s.features)
            fh.write(row + "\n")


def read_dataset(path) -> StochasticDataset:
    """Parse a stochastic dataset file.

    Raises :class:`DatasetParseError` naming the offending line for any
    malformed header or row.  Row indices into an external feature source are
    exposed by :func:`read_dataset_indexed`.
    """
    return read_dataset_indexed(path)[0]


def read_dataset_indexed(path) -> tuple[StochasticDataset, list[int]]:
    """Like :func:`read_dataset` but also returns per-row source indices."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(_HEADER_PREFIX):
        raise DatasetParseError(path, 1, "missing '#stochlab v1' header")
    header = lines[0][len(_HEADER_PREFIX):].split()
    try:
        fields = dict(kv.split("=", 1) for kv in header)
        K = int(fields["K"])
        l = int(fields["l"])
        n = int(fields["N"])
        seed = int(fields["seed"])
    except (ValueError, KeyError):
        raise DatasetParseError(path, 1, f"malformed header {lines[0]!r}") from None
    if not 1 <= l <= K:
        raise DatasetParseError(path, 1, f"header declares l={l} outside 1..K={K}")

    samples: list[StochasticSample] = []
    indices: list[int] = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) < 3:
            raise DatasetParseError(path, line_no, f"expected at least 3 fields, got {len(parts)}")
        try:
            idx = int(parts[0])
            selector = int(parts[1])
            cands = tuple(int(c) for c in parts[2].split(";"))
        except ValueError:
            raise DatasetParseError(path, line_no, f"non-integer index/selector/candidates in {line!r}") from None
        if len(cands) != l:
            raise DatasetParseError(path, line_no, f"row has {len(cands)} candidates, header declares l={l}")
        features = None
        if len(parts) > 3:
            try:
                features = np.array([float(v) for v in parts[3:]], dtype=np.float64)
            except ValueError:
                raise DatasetParseError(path, line_no, "malformed feature value") from None
        sample = StochasticSample(features, cands, selector)
        try:
            sample.validate(K, l)
        except ValueError as e:
            raise DatasetParseError(path, line_no, str(e)) from None
        samples.append(sample)
        indices.append(idx)
    if len(samples) != n:
        raise DatasetParseError(path, len(lines), f"header declares N={n} rows, file has {len(samples)}")
    return StochasticDataset(K, l, samples, seed=seed), indices


def attach_features(dataset: StochasticDataset, indices: list[int], source: LabeledDataset) -> StochasticDataset:
    """Join feature-less samples with their external source rows by index."""
    if dataset.K != source.K:
        raise ValueError(f"dataset K={dataset.K} does not match source K={source.K}")
    samples = []
    for s, idx in zip(dataset.samples, indices):
        if not 0 <= idx < len(source):
            raise ValueError(f"source index {idx} outside 0..{len(source) - 1}")
        feats = s.features if s.features is not None else source.examples[idx].features
        samples.append(StochasticSample(feats, s.candidate_set, s.selector))
    return StochasticDataset(dataset.K, dataset.l, samples, seed=dataset.seed)
