"""Temporal contact networks, their static aggregation, and path counting."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import EmptyNetworkError, ParseError


@dataclass(frozen=True)
class EdgeListFormat:
    """Column layout of a contact edge-list file.

    ``columns`` is one of ``"ijt"`` (default), ``"tij"`` or ``"ijwt"``; the
    weight column of ``"ijwt"`` is ignored.  Only the ``"ijt"`` layout allows
    a missing time column (static input, every contact gets t=0).  Fields may
    be separated by whitespace or commas; lines starting with one of
    ``comment_prefixes`` are skipped.
    """

    columns: str = "ijt"
    comment_prefixes: tuple[str, ...] = ("#", "%")

    def __post_init__(self):
        if self.columns not in ("ijt", "tij", "ijwt"):
            raise ValueError(f"unsupported column layout {self.columns!r}")


class TemporalNetwork:
    """A set of time-stamped contacts over dense integer node ids.

    Contacts are bidirectional, sorted by timestamp, and may repeat:
    duplicate (i, j, t) entries occur in real data and are preserved.
    Instances are immutable after construction and safe to share across
    threads.
    """

    __slots__ = ("n_nodes", "src", "dst", "times", "labels", "label_to_id",
                 "_idx_bounds", "_idx_times", "_idx_partners")

    def __init__(self, n_nodes, src, dst, times, labels=None):
        src = np.ascontiguousarray(src, dtype=np.int64)
        dst = np.ascontiguousarray(dst, dtype=np.int64)
        times = np.ascontiguousarray(times, dtype=np.int64)
        if not (src.shape == dst.shape == times.shape) or src.ndim != 1:
            raise ValueError("src, dst and times must be 1-d arrays of equal length")
        if n_nodes < 1:
            raise ValueError("n_nodes must be positive")
        if len(src):
            if min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n_nodes:
                raise ValueError("contact endpoints outside [0, n_nodes)")
            if np.any(src == dst):
                raise ValueError("self-loop contact")
            if times.min() < 0:
                raise ValueError("negative timestamp")
            if np.any(np.diff(times) < 0):
                raise ValueError("contacts must be sorted by timestamp")
        if labels is None:
            labels = tuple(str(i) for i in range(n_nodes))
        else:
            labels = tuple(labels)
            if len(labels) != n_nodes:
                raise ValueError("labels length must equal n_nodes")
        self.n_nodes = int(n_nodes)
        self.src = src
        self.dst = dst
        self.times = times
        self.labels = labels
        self.label_to_id = {lab: i for i, lab in enumerate(labels)}
        self._build_index()

    def _build_index(self):
        # Per-node contact lists (both directions), sorted by time.
        node = np.concatenate([self.src, self.dst])
        partner = np.concatenate([self.dst, self.src])
        t2 = np.concatenate([self.times, self.times])
        order = np.lexsort((t2, node))
        self._idx_bounds = np.searchsorted(node[order], np.arange(self.n_nodes + 1))
        self._idx_times = t2[order]
        self._idx_partners = partner[order]

    @classmethod
    def from_contacts(cls, contacts: Iterable[tuple[int, int, int]],
                      n_nodes: int | None = None, labels=None) -> "TemporalNetwork":
        """Build a network from (i, j, t) triples, sorting them by time."""
        triples = list(contacts)
        if triples:
            arr = np.asarray(triples, dtype=np.int64)
            order = np.argsort(arr[:, 2], kind="stable")
            arr = arr[order]
            src, dst, times = arr[:, 0], arr[:, 1], arr[:, 2]
            inferred = int(max(src.max(), dst.max())) + 1
        else:
            src = dst = times = np.empty(0, dtype=np.int64)
            inferred = 1
        if n_nodes is None:
            n_nodes = inferred
        return cls(n_nodes, src, dst, times, labels=labels)

    @property
    def n_contacts(self) -> int:
        return len(self.times)

    @property
    def horizon(self) -> int:
        """Largest timestamp T (0 for a contact-free network)."""
        return int(self.times[-1]) if len(self.times) else 0

    @property
    def n_timestamps(self) -> int:
        """Number of distinct contact timestamps."""
        return len(np.unique(self.times))

    @property
    def contacts(self) -> Iterator[tuple[int, int, int]]:
        for a, b, t in zip(self.src, self.dst, self.times):
            yield int(a), int(b), int(t)

    def contact_index(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """(times, partners) of node i's contacts, sorted by time."""
        lo, hi = self._idx_bounds[i], self._idx_bounds[i + 1]
        return self._idx_times[lo:hi], self._idx_partners[lo:hi]

    def contact_times(self, i: int) -> np.ndarray:
        return self.contact_index(i)[0]


class StaticNetwork:
    """Unweighted undirected simple graph with CSR adjacency.

    ``members`` lists the node ids that actually belong to the graph; by
    default every id in [0, n_nodes) is a member.  Non-member ids simply
    have empty neighborhoods, which keeps id spaces aligned between a full
    network and sub-networks derived from it.
    """

    __slots__ = ("n_nodes", "members", "edges", "degree", "_indptr", "_nbrs")

    def __init__(self, n_nodes, edges, members=None):
        n_nodes = int(n_nodes)
        if n_nodes < 1:
            raise ValueError("n_nodes must be positive")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64)
        if e.size == 0:
            e = e.reshape(0, 2)
        if e.ndim != 2 or e.shape[1] != 2:
            raise ValueError("edges must be an (m, 2) array")
        if len(e):
            if e.min() < 0 or e.max() >= n_nodes:
                raise ValueError("edge endpoints outside [0, n_nodes)")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loop edge")
            lo = np.minimum(e[:, 0], e[:, 1])
            hi = np.maximum(e[:, 0], e[:, 1])
            e = np.unique(np.stack([lo, hi], axis=1), axis=0)
        self.n_nodes = n_nodes
        self.edges = e
        if members is None:
            self.members = np.arange(n_nodes, dtype=np.int64)
        else:
            self.members = np.unique(np.asarray(members, dtype=np.int64))
            if len(self.members) and (self.members[0] < 0 or self.members[-1] >= n_nodes):
                raise ValueError("member ids outside [0, n_nodes)")
        ends = np.concatenate([e[:, 0], e[:, 1]]) if len(e) else np.empty(0, np.int64)
        nbrs = np.concatenate([e[:, 1], e[:, 0]]) if len(e) else np.empty(0, np.int64)
        order = np.lexsort((nbrs, ends))
        self._indptr = np.searchsorted(ends[order], np.arange(n_nodes + 1))
        self._nbrs = nbrs[order]
        self.degree = np.diff(self._indptr)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted neighbor ids of node i (a view, do not mutate)."""
        return self._nbrs[self._indptr[i]:self._indptr[i + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return k < len(nb) and nb[k] == v


@dataclass(frozen=True)
class NetworkStats:
    """The summary statistics reported for each dataset."""

    n_nodes: int
    n_timestamps: int
    n_contacts: int
    n_edges: int
    link_density: float
    avg_degree: float
    clustering_coefficient: float

    CSV_HEADER = ("dataset,n_nodes,n_timestamps,n_contacts,n_edges,"
                  "link_density,avg_degree,clustering_coefficient")

    def csv_row(self, dataset: str) -> str:
        return (f"{dataset},{self.n_nodes},{self.n_timestamps},{self.n_contacts},"
                f"{self.n_edges},{self.link_density:.4f},{self.avg_degree:.2f},"
                f"{self.clustering_coefficient:.4f}")


def _parse_time(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        x = float(token)
    except ValueError:
        raise ParseError(f"timestamp {token!r} is not a number", line) from None
    if x != int(x):
        raise ParseError(f"timestamp {token!r} is not an integer", line)
    return int(x)


def load_temporal(source, fmt: EdgeListFormat | None = None) -> TemporalNetwork:
    """Load a temporal network from an edge-list stream or file path.

    Node labels are remapped to dense ids in order of first appearance,
    self-loop contacts are dropped, and contacts are sorted by timestamp.
    Duplicate (i, j, t) contacts are kept.

    Raises ParseError (with the offending line number) on malformed input
    and EmptyNetworkError when no usable contact remains.
    """
    fmt = fmt or EdgeListFormat()
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
    else:
        with open(os.fspath(source), "rb") as fh:
            data = fh.read().decode("utf-8")

    triples: list[tuple[str, str, int]] = []
    for line_no, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(fmt.comment_prefixes):
            continue
        tokens = line.replace(",", " ").split()
        if fmt.columns == "ijt":
            if len(tokens) == 2:
                li, lj, t = tokens[0], tokens[1], 0
            elif len(tokens) == 3:
                li, lj = tokens[0], tokens[1]
                t = _parse_time(tokens[2], line_no)
            else:
                raise ParseError(f"expected 2 or 3 fields, got {len(tokens)}", line_no)
        elif fmt.columns == "tij":
            if len(tokens) != 3:
                raise ParseError(f"expected 3 fields, got {len(tokens)}", line_no)
            t = _parse_time(tokens[0], line_no)
            li, lj = tokens[1], tokens[2]
        else:  # ijwt
            if len(tokens) != 4:
                raise ParseError(f"expected 4 fields, got {len(tokens)}", line_no)
            li, lj = tokens[0], tokens[1]
            t = _parse_time(tokens[3], line_no)
        if t < 0:
            raise ParseError(f"negative timestamp {t}", line_no)
        if li == lj:
            continue  # self-loop contact
        triples.append((li, lj, t))

    if not triples:
        raise EmptyNetworkError("no contacts after cleaning")

    label_to_id: dict[str, int] = {}
    for li, lj, _ in triples:
        label_to_id.setdefault(li, len(label_to_id))
        label_to_id.setdefault(lj, len(label_to_id))
    labels = tuple(label_to_id)
    src = np.fromiter((label_to_id[li] for li, _, _ in triples), np.int64, len(triples))
    dst = np.fromiter((label_to_id[lj] for _, lj, _ in triples), np.int64, len(triples))
    times = np.fromiter((t for _, _, t in triples), np.int64, len(triples))
    order = np.argsort(times, kind="stable")
    return TemporalNetwork(len(labels), src[order], dst[order], times[order], labels=labels)


def aggregate(tn: TemporalNetwork) -> StaticNetwork:
    """Static aggregation: nodes i, j are linked iff they share >=1 contact."""
    if tn.n_contacts == 0:
        return StaticNetwork(tn.n_nodes, np.empty((0, 2), np.int64))
    lo = np.minimum(tn.src, tn.dst)
    hi = np.maximum(tn.src, tn.dst)
    return StaticNetwork(tn.n_nodes, np.stack([lo, hi], axis=1))


def local_clustering(g: StaticNetwork, i: int) -> float:
    """Fraction of neighbor pairs of i that are themselves linked."""
    nbrs = g.neighbors(i)
    k = len(nbrs)
    if k < 2:
        return 0.0
    links = 0
    for u in nbrs:
        links += len(np.intersect1d(nbrs, g.neighbors(u), assume_unique=True))
    return links / (k * (k - 1))  # each triangle edge counted twice


def average_clustering(g: StaticNetwork) -> float:
    if len(g.members) == 0:
        return 0.0
    return float(np.mean([local_clustering(g, int(i)) for i in g.members]))


def stats(tn: TemporalNetwork, g: StaticNetwork) -> NetworkStats:
    """Dataset summary row; g must be the static aggregation of tn."""
    n = g.n_nodes
    if n < 2:
        raise ValueError("density undefined for fewer than 2 nodes")
    m = g.n_edges
    return NetworkStats(
        n_nodes=n,
        n_timestamps=tn.n_timestamps,
        n_contacts=tn.n_contacts,
        n_edges=m,
        link_density=2.0 * m / (n * (n - 1)),
        avg_degree=2.0 * m / n,
        clustering_coefficient=average_clustering(g),
    )


def walk_counts_from(g: StaticNetwork, i: int, length: int) -> np.ndarray:
    """Number of length-`length` walks from node i to every node.

    Equals row i of the adjacency matrix raised to the given power, computed
    by sparse frontier propagation in O(length * |E|).
    """
    v = np.zeros(g.n_nodes, dtype=np.int64)
    v[i] = 1
    for _ in range(length):
        nxt = np.zeros(g.n_nodes, dtype=np.int64)
        for u in np.nonzero(v)[0]:
            nxt[g.neighbors(u)] += v[u]
        v = nxt
    return v


def count_l_paths(g: StaticNetwork, i: int, j: int, l: int) -> int:
    """Number of l-link connections between i and j (walk count, A^l entry).

    For l=2 this is exactly the number of common neighbors.
    """
    if l not in (2, 3, 4):
        raise ValueError(f"l must be one of 2, 3, 4; got {l}")
    if i == j:
        raise ValueError("endpoints must differ")
    if not (0 <= i < g.n_nodes and 0 <= j < g.n_nodes):
        raise ValueError("node id outside [0, n_nodes)")
    return int(walk_counts_from(g, i, l)[j])
