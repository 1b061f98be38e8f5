"""Center/context node-pair generation from trajectory corpora."""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .corpus import TrajectoryCorpus


class PairStream:
    """Ordered (center, context) pair multiset with a symmetric window.

    Iteration is deterministic: paths in corpus order, center positions
    ascending, contexts left to right within the window.  A repeated node in
    one path can put the center node inside its own window; such degenerate
    center==context pairs are skipped.

    ``counts[i]`` is the number of corpus positions at which node i is the
    center, i.e. its occurrence count in the corpus; negative sampling uses
    it as the unigram distribution.
    """

    def __init__(self, corpus: TrajectoryCorpus, window: int):
        if window < 1:
            raise ValueError("window must be >= 1")
        self.window = int(window)
        self.n_nodes = corpus.n_nodes
        self._paths = corpus.paths
        counts = np.zeros(corpus.n_nodes, dtype=np.int64)
        for path in corpus.paths:
            for v in path:
                counts[v] += 1
        self.counts = counts
        self._array: np.ndarray | None = None

    def __iter__(self) -> Iterator[tuple[int, int]]:
        w = self.window
        for path in self._paths:
            length = len(path)
            for c in range(length):
                center = path[c]
                for k in range(max(0, c - w), min(length, c + w + 1)):
                    if k == c:
                        continue
                    ctx = path[k]
                    if ctx != center:
                        yield center, ctx

    def to_array(self) -> np.ndarray:
        """All pairs as an (n_pairs, 2) int array (cached)."""
        if self._array is None:
            flat = [ij for pair in self for ij in pair]
            self._array = np.asarray(flat, dtype=np.int64).reshape(-1, 2)
        return self._array

    def __len__(self) -> int:
        return len(self.to_array())


def generate_pairs(corpus: TrajectoryCorpus, window: int) -> PairStream:
    """Pair every path position with the nodes within `window` hops of it."""
    return PairStream(corpus, window)


def write_pairs_tsv(pairs: PairStream, path) -> None:
    """Debug dump: one "center<TAB>context" line per pair."""
    with open(path, "w", encoding="utf-8") as fh:
        for center, ctx in pairs:
            fh.write(f"{center}\t{ctx}\n")
