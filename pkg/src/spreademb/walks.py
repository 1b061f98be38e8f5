"""Random-walk corpus samplers: uniform, biased (p/q) and temporal walks.

All samplers share the budget accounting of the spreading sampler, so any
corpus can feed the same downstream pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import TrajectoryCorpus
from .graphs import StaticNetwork, TemporalNetwork


@dataclass(frozen=True)
class WalkConfig:
    walk_length: int = 20            # nodes per walk, matches max_path_len
    budget_multiplier: int = 10      # X in B = N * X
    p: float = 1.0                   # return parameter (biased walks)
    q: float = 1.0                   # in-out parameter (biased walks)
    rng_seed: int = 0
    exp_time_bias: bool = False      # temporal walks: favor near-future contacts

    def __post_init__(self):
        if self.walk_length < 2:
            raise ValueError("walk_length must be >= 2")
        if self.budget_multiplier < 1:
            raise ValueError("budget_multiplier must be >= 1")
        if self.p <= 0 or self.q <= 0:
            raise ValueError("p and q must be positive")


def uniform_walk(g: StaticNetwork, start: int, length: int,
                 rng: np.random.Generator) -> list[int]:
    """Uniform random walk of `length` nodes; stops early only when stuck."""
    walk = [start]
    while len(walk) < length:
        nbrs = g.neighbors(walk[-1])
        if len(nbrs) == 0:
            break
        walk.append(int(nbrs[int(rng.integers(len(nbrs)))]))
    return walk


def deepwalk_corpus(g: StaticNetwork, cfg: WalkConfig) -> TrajectoryCorpus:
    """Classic uniform random walks from uniform-random start nodes."""
    budget = g.n_nodes * cfg.budget_multiplier
    rng = np.random.default_rng(cfg.rng_seed)
    paths: list[list[int]] = []
    total = 0
    while total < budget:
        walk = uniform_walk(g, int(rng.integers(g.n_nodes)), cfg.walk_length, rng)
        paths.append(walk)
        total += len(walk)
    return TrajectoryCorpus(paths, total, g.n_nodes)


def biased_step(g: StaticNetwork, prev: int, cur: int, p: float, q: float,
                rng: np.random.Generator) -> int:
    """One second-order step: weight 1/p to return to prev, 1 to a common
    neighbor of prev and cur, 1/q to a node two hops from prev."""
    nbrs = g.neighbors(cur)
    w = np.ones(len(nbrs))
    near = np.isin(nbrs, g.neighbors(prev), assume_unique=True)
    w[~near] = 1.0 / q
    w[nbrs == prev] = 1.0 / p
    w /= w.sum()
    return int(nbrs[int(rng.choice(len(nbrs), p=w))])


def node2vec_corpus(g: StaticNetwork, cfg: WalkConfig) -> TrajectoryCorpus:
    """Biased second-order walks; the first step is uniform."""
    budget = g.n_nodes * cfg.budget_multiplier
    rng = np.random.default_rng(cfg.rng_seed)
    paths: list[list[int]] = []
    total = 0
    while total < budget:
        start = int(rng.integers(g.n_nodes))
        walk = [start]
        nbrs = g.neighbors(start)
        if len(nbrs):
            walk.append(int(nbrs[int(rng.integers(len(nbrs)))]))
            while len(walk) < cfg.walk_length:
                walk.append(biased_step(g, walk[-2], walk[-1], cfg.p, cfg.q, rng))
        paths.append(walk)
        total += len(walk)
    return TrajectoryCorpus(paths, total, g.n_nodes)


def temporal_walk(tn: TemporalNetwork, first: int, second: int, t: int,
                  length: int, rng: np.random.Generator,
                  exp_time_bias: bool = False) -> tuple[list[int], list[int]]:
    """Continue a temporal walk from its start contact (first, second, t).

    The successor is drawn from the multiset of the current node's contacts
    with a strictly larger timestamp; uniformly by default, or weighted by
    exp(-(gap - min gap)) when exp_time_bias is set.  Returns the node walk
    and the contact times along it.
    """
    walk = [first, second]
    tvals = [t]
    cur = second
    while len(walk) < length:
        times, partners = tn.contact_index(cur)
        k = int(np.searchsorted(times, tvals[-1], side="right"))
        if k == len(times):
            break
        if exp_time_bias:
            gaps = (times[k:] - tvals[-1]).astype(np.float64)
            w = np.exp(-(gaps - gaps.min()))
            w /= w.sum()
            idx = k + int(rng.choice(len(w), p=w))
        else:
            idx = k + int(rng.integers(len(times) - k))
        cur = int(partners[idx])
        walk.append(cur)
        tvals.append(int(times[idx]))
    return walk, tvals


def ctdne_corpus(tn: TemporalNetwork, cfg: WalkConfig) -> TrajectoryCorpus:
    """Temporal walks whose start contact is uniform over all contacts.

    The walk begins with the contact's two endpoints (orientation uniform)
    and each subsequent contact has a strictly larger timestamp.  Walks
    shorter than 2 nodes would be pair-free and are discarded; they cannot
    occur here because a start contact always contributes two nodes.
    """
    if tn.n_contacts == 0:
        raise ValueError("temporal network has no contacts")
    budget = tn.n_nodes * cfg.budget_multiplier
    rng = np.random.default_rng(cfg.rng_seed)
    paths: list[list[int]] = []
    total = 0
    while total < budget:
        c = int(rng.integers(tn.n_contacts))
        u, v, t = int(tn.src[c]), int(tn.dst[c]), int(tn.times[c])
        if rng.random() < 0.5:
            u, v = v, u
        walk, _ = temporal_walk(tn, u, v, t, cfg.walk_length, rng, cfg.exp_time_bias)
        if len(walk) < 2:
            continue
        paths.append(walk)
        total += len(walk)
    return TrajectoryCorpus(paths, total, tn.n_nodes)
