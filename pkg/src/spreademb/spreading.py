"""SI spreading on static and temporal networks, and trajectory-path sampling.

An SI process starts from a single infected seed; infected nodes attempt to
infect susceptible neighbors with probability beta per opportunity.  The
recorded who-infected-whom tree is sampled into root-to-leaf paths until a
total-length budget is met.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import TrajectoryCorpus
from .graphs import StaticNetwork, TemporalNetwork, aggregate

MAX_SPREAD_STEPS = 100_000

SPREAD_MODES = ("sine", "tsine1", "tsine2")


@dataclass(frozen=True)
class SpreadConfig:
    beta: float
    budget_multiplier: int = 10      # X in B = N * X
    quota_scale: int | None = None   # default 10 * n_nodes at sampling time
    max_path_len: int = 20
    rng_seed: int = 0
    tsine1_distinct_times: bool = False

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("beta must be in (0, 1]")
        if self.budget_multiplier < 1:
            raise ValueError("budget_multiplier must be >= 1")
        if self.max_path_len < 2:
            raise ValueError("max_path_len must be >= 2")
        if self.quota_scale is not None and self.quota_scale < 1:
            raise ValueError("quota_scale must be >= 1")


class TrajectoryTree:
    """Infection tree of one spreading run.

    ``parent`` maps every non-root infected node to (infector, time); the
    infector was infected strictly earlier.  ``order`` lists infected nodes
    in order of infection, root first.
    """

    __slots__ = ("root", "parent", "order")

    def __init__(self, root: int, parent: dict[int, tuple[int, int]], order: list[int]):
        self.root = root
        self.parent = parent
        self.order = order

    def __len__(self) -> int:
        return len(self.order)

    @property
    def infected_set(self) -> set[int]:
        return set(self.order)

    def leaves(self) -> list[int]:
        """Infected nodes that infected nobody, in infection order."""
        if not self.parent:
            return [self.root]
        inner = {p for p, _ in self.parent.values()}
        return [v for v in self.order if v not in inner]


def si_spread_static(g: StaticNetwork, seed: int, beta: float,
                     rng: np.random.Generator,
                     max_steps: int = MAX_SPREAD_STEPS) -> TrajectoryTree:
    """Synchronous SI spreading from `seed`, run until the susceptible
    frontier empties (or max_steps as a safety valve).

    Each step, every infected-susceptible adjacency transmits independently
    with probability beta.  A node with k infected neighbors is therefore
    infected with probability 1-(1-beta)^k, and by exchangeability of the
    per-edge trials its parent is uniform over those k neighbors.
    """
    if not 0 <= seed < g.n_nodes:
        raise ValueError("seed outside [0, n_nodes)")
    infected = np.zeros(g.n_nodes, dtype=bool)
    infected[seed] = True
    parent: dict[int, tuple[int, int]] = {}
    order = [seed]
    boundary: dict[int, int] = {}
    for w in g.neighbors(seed).tolist():
        boundary[w] = 1
    step = 0
    while boundary and step < max_steps:
        step += 1
        n_b = len(boundary)
        nodes = np.fromiter(boundary.keys(), dtype=np.intp, count=n_b)
        ks = np.fromiter(boundary.values(), dtype=np.float64, count=n_b)
        hits = rng.random(n_b) < 1.0 - (1.0 - beta) ** ks
        newly = nodes[hits].tolist()
        for v in newly:
            nbrs = g.neighbors(v)
            cand = nbrs[infected[nbrs]]
            parent[v] = (int(cand[int(rng.integers(len(cand)))]), step)
        for v in newly:
            del boundary[v]
            infected[v] = True
            order.append(v)
        for v in newly:
            nbrs = g.neighbors(v)
            for w in nbrs[~infected[nbrs]].tolist():
                boundary[w] = boundary.get(w, 0) + 1
    return TrajectoryTree(seed, parent, order)


def si_spread_temporal(tn: TemporalNetwork, seed: int, t_start: int, beta: float,
                       rng: np.random.Generator) -> TrajectoryTree:
    """SI spreading along time-stamped contacts, stopping at the horizon T.

    The seed is infected at t_start and may transmit from t_start onwards.
    Contacts sharing a timestamp are processed as one batch against the
    pre-batch infected set, so a node infected at time t never transmits
    through another contact at the same t.  When several same-batch contacts
    infect one node, its parent is uniform over the successful infectors.
    """
    if not 0 <= seed < tn.n_nodes:
        raise ValueError("seed outside [0, n_nodes)")
    if not 0 <= t_start <= tn.horizon:
        raise ValueError(f"t_start {t_start} outside [0, {tn.horizon}]")
    infected = {seed}
    parent: dict[int, tuple[int, int]] = {}
    order = [seed]
    times, src, dst = tn.times, tn.src, tn.dst
    n_contacts = len(times)
    i = int(np.searchsorted(times, t_start, side="left"))
    while i < n_contacts:
        t = times[i]
        j = int(np.searchsorted(times, t, side="right"))
        pending: dict[int, list[int]] = {}
        for c in range(i, j):
            a = int(src[c])
            b = int(dst[c])
            a_inf = a in infected
            if a_inf == (b in infected):
                continue
            u, v = (a, b) if a_inf else (b, a)
            if rng.random() < beta:
                pending.setdefault(v, []).append(u)
        for v, infectors in pending.items():
            parent[v] = (infectors[int(rng.integers(len(infectors)))], int(t))
            infected.add(v)
            order.append(v)
        i = j
    return TrajectoryTree(seed, parent, order)


def seed_time_tsine1(tn: TemporalNetwork, i: int, rng: np.random.Generator,
                     distinct_times: bool = False) -> int:
    """Start time drawn uniformly from node i's contact times.

    By default the draw is over the multiset of contact times (a time with
    two contacts is twice as likely); ``distinct_times`` switches to the set
    of distinct times.
    """
    times = tn.contact_times(i)
    if len(times) == 0:
        raise ValueError(f"node {i} has no contacts")
    if distinct_times:
        times = np.unique(times)
    return int(times[int(rng.integers(len(times)))])


def seed_time_tsine2(tn: TemporalNetwork, i: int) -> int:
    """Start time of node i's first contact (deterministic)."""
    times = tn.contact_times(i)
    if len(times) == 0:
        raise ValueError(f"node {i} has no contacts")
    return int(times[0])


def path_quota(g: StaticNetwork, i: int, quota_scale: int) -> int:
    """Per-seed path count: max(1, round(degree share * quota_scale)).

    Rounding is nearest-integer with ties up, so the quotas sum to roughly
    quota_scale.  An edgeless graph degenerates to a quota of 1.
    """
    if quota_scale < 1:
        raise ValueError("quota_scale must be >= 1")
    total = int(g.degree.sum())
    if total == 0:
        return 1
    return max(1, int(np.floor(float(g.degree[i]) * quota_scale / total + 0.5)))


def extract_paths(tree: TrajectoryTree, n_paths: int, max_path_len: int,
                  rng: np.random.Generator) -> list[list[int]]:
    """n_paths root-to-leaf paths, leaves drawn uniformly with replacement;
    paths longer than max_path_len keep only their first max_path_len nodes.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    leaves = tree.leaves()
    paths = []
    for _ in range(n_paths):
        v = leaves[int(rng.integers(len(leaves)))]
        rev = [v]
        while v != tree.root:
            v = tree.parent[v][0]
            rev.append(v)
        rev.reverse()
        paths.append(rev[:max_path_len])
    return paths


def sample_corpus(net, cfg: SpreadConfig, mode: str) -> TrajectoryCorpus:
    """Run seeded spreading processes until the corpus reaches B = N * X nodes.

    ``mode`` selects the process: "sine" runs on a StaticNetwork; "tsine1"
    and "tsine2" run on a TemporalNetwork with the respective start-time
    protocol.  Path quotas always use degrees of the static aggregation.
    Emission stops at the first path that crosses the budget.
    """
    if mode not in SPREAD_MODES:
        raise ValueError(f"mode must be one of {SPREAD_MODES}")
    if mode == "sine":
        if not isinstance(net, StaticNetwork):
            raise TypeError("sine mode requires a StaticNetwork")
        g, tn = net, None
    else:
        if not isinstance(net, TemporalNetwork):
            raise TypeError(f"{mode} mode requires a TemporalNetwork")
        tn = net
        g = aggregate(tn)
    n = g.n_nodes
    quota_scale = cfg.quota_scale if cfg.quota_scale is not None else 10 * n
    budget = n * cfg.budget_multiplier
    rng = np.random.default_rng(cfg.rng_seed)
    paths: list[list[int]] = []
    total = 0
    while total < budget:
        seed = int(rng.integers(n))
        if mode == "sine":
            tree = si_spread_static(g, seed, cfg.beta, rng)
        elif len(tn.contact_times(seed)) == 0:
            # isolated in this (training) network: a bare singleton tree
            tree = TrajectoryTree(seed, {}, [seed])
        else:
            if mode == "tsine1":
                t0 = seed_time_tsine1(tn, seed, rng, cfg.tsine1_distinct_times)
            else:
                t0 = seed_time_tsine2(tn, seed)
            tree = si_spread_temporal(tn, seed, t0, cfg.beta, rng)
        quota = path_quota(g, seed, quota_scale)
        for path in extract_paths(tree, quota, cfg.max_path_len, rng):
            paths.append(path)
            total += len(path)
            if total >= budget:
                break
    return TrajectoryCorpus(paths, total, n)
