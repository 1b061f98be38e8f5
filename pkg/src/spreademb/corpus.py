"""Trajectory-path corpora shared by the spreading and walk samplers."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TrajectoryCorpus:
    """Node sequences produced by a sampler, with budget accounting.

    ``total_length`` is the number of nodes summed over all paths; samplers
    stop at the first path that reaches their budget B = n_nodes * X, so
    B <= total_length < B + max path length.
    """

    paths: list[list[int]]
    total_length: int
    n_nodes: int

    def __post_init__(self):
        if self.total_length != sum(len(p) for p in self.paths):
            raise ValueError("total_length does not match the paths")


def save_corpus(corpus: TrajectoryCorpus, path, labels=None) -> None:
    """Write one path per line, space-separated, for offline training."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in corpus.paths:
            if labels is None:
                fh.write(" ".join(str(v) for v in p))
            else:
                fh.write(" ".join(labels[v] for v in p))
            fh.write("\n")
