import numpy as np
import pytest

from helpers import brute_force_auc, er_graph, planted_partition_temporal, random_temporal
from spreademb import (EmbeddingMatrix, InsufficientNegativesError,
                       StaticNetwork, TemporalNetwork, auc,
                       dot_product_histogram, generate_pairs, make_split,
                       pcc_dot_vs_lpath, pearson, run_experiment,
                       sampled_network, score_dot, score_lpath)
from spreademb.corpus import TrajectoryCorpus
from spreademb.evaluation import contacted_pairs, resolve_params, split_seed_for


def test_make_split_invariants():
    tn = random_temporal(30, 300, 50, seed=0)
    split = make_split(tn, 123)
    full = {tuple(p) for p in contacted_pairs(tn)}
    train = {tuple(p) for p in contacted_pairs(split.train_temporal)}
    n_pairs = len(full)
    assert len(train) == int(0.75 * n_pairs)
    pos = split.pairs[split.labels == 1]
    neg = split.pairs[split.labels == 0]
    assert len(pos) == len(neg) == n_pairs - int(0.75 * n_pairs)
    for i, j in pos:
        assert (min(i, j), max(i, j)) in full
        assert (min(i, j), max(i, j)) not in train
    for i, j in neg:
        assert (min(i, j), max(i, j)) not in full
    for i, j in split.pairs:
        assert not split.train_static.has_edge(int(i), int(j))
    # node set retained even when training isolates nodes
    assert split.train_temporal.n_nodes == tn.n_nodes
    assert split.train_static.n_nodes == tn.n_nodes
    # train network keeps every contact of every training pair
    kept = {tuple(p) for p in contacted_pairs(split.train_temporal)}
    n_kept = sum(1 for a, b, _ in tn.contacts if (min(a, b), max(a, b)) in kept)
    assert split.train_temporal.n_contacts == n_kept


def test_make_split_four_pair_toy():
    tn = TemporalNetwork.from_contacts(
        [(0, 1, 0), (1, 2, 1), (2, 3, 2), (0, 3, 3), (0, 1, 4)])
    split = make_split(tn, 7)
    assert len(contacted_pairs(split.train_temporal)) == 3
    assert int(split.labels.sum()) == 1
    assert len(split.labels) == 2


def test_make_split_seed_changes_positives():
    tn = random_temporal(40, 500, 50, seed=1)
    a = make_split(tn, 1)
    b = make_split(tn, 2)
    pos_a = {tuple(p) for p in a.pairs[a.labels == 1]}
    pos_b = {tuple(p) for p in b.pairs[b.labels == 1]}
    assert pos_a != pos_b


def test_make_split_deterministic():
    tn = random_temporal(25, 200, 30, seed=2)
    a = make_split(tn, 9)
    b = make_split(tn, 9)
    assert np.array_equal(a.pairs, b.pairs)
    assert np.array_equal(a.labels, b.labels)


def test_make_split_insufficient_negatives():
    contacts = [(i, j, 0) for i in range(6) for j in range(i + 1, 6)]
    tn = TemporalNetwork.from_contacts(contacts)
    with pytest.raises(InsufficientNegativesError):
        make_split(tn, 3)


def test_auc_reference_cases():
    assert auc([1.0, 0.9, 0.1, 0.2], [1, 1, 0, 0]) == 1.0
    assert auc([0.5, 0.5, 0.5, 0.5], [1, 1, 0, 0]) == 0.5
    assert auc([0.9, 0.4, 0.6, 0.1], [1, 1, 0, 0]) == 0.75
    with pytest.raises(ValueError):
        auc([0.1, 0.2], [1, 1])


def test_auc_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(2, 60))
        scores = rng.choice([0.0, 0.25, 0.5, 1.0, 2.0], size=n)
        labels = rng.integers(0, 2, size=n)
        if labels.min() == labels.max():
            labels[0] = 1 - labels[0]
        assert abs(auc(scores, labels) - brute_force_auc(scores, labels)) <= 1e-12


def test_auc_properties():
    rng = np.random.default_rng(4)
    scores = rng.permutation(50) / 7.0  # unique scores
    labels = rng.integers(0, 2, size=50)
    labels[:2] = [0, 1]
    a = auc(scores, labels)
    assert auc(-scores, labels) == pytest.approx(1.0 - a, abs=1e-12)
    assert auc(np.exp(3 * scores), labels) == pytest.approx(a, abs=1e-12)


def test_score_dot_against_dense_product():
    rng = np.random.default_rng(5)
    u = rng.normal(size=(5, 3))
    em = EmbeddingMatrix(u)
    pairs = np.array([(i, j) for i in range(5) for j in range(5) if i != j])
    scores = score_dot(em, pairs)
    gram = u @ u.T
    for (i, j), s in zip(pairs, scores):
        assert abs(s - gram[i, j]) < 1e-12


def test_score_dot_orthogonal_and_identical():
    em = EmbeddingMatrix(np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]))
    assert score_dot(em, [(0, 1)])[0] == 0.0
    assert score_dot(em, [(0, 2)])[0] == 1.0


def test_score_lpath_common_neighbors_and_matrix_power():
    g = er_graph(30, 0.2, seed=6)
    pairs = np.array([(i, j) for i in range(30) for j in range(i + 1, 30)])
    l2 = score_lpath(g, pairs, 2)
    for (i, j), s in zip(pairs, l2):
        cn = len(np.intersect1d(g.neighbors(i), g.neighbors(j), assume_unique=True))
        assert s == cn
    cyc = StaticNetwork(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    # dense matrix-power oracle: A^3[0,1] on the 4-cycle is 4
    assert score_lpath(cyc, [(0, 1)], 3)[0] == 4
    with pytest.raises(ValueError):
        score_lpath(g, pairs, 5)


def test_score_lpath_dense_path_matches_propagation():
    from spreademb import count_l_paths
    g = er_graph(300, 0.05, seed=17)
    pairs = np.array([(i, j) for i in range(300) for j in range(i + 1, i + 4)
                      if j < 300])
    for l in (2, 3, 4):
        dense = score_lpath(g, pairs, l)  # batch large enough for the dense route
        for (i, j), s in zip(pairs[::37], dense[::37]):
            assert s == count_l_paths(g, int(i), int(j), l)


def test_run_experiment_random_scores_control():
    tn = random_temporal(30, 300, 50, seed=7)

    def random_scorer(split, rng):
        return rng.random(len(split.pairs))

    result = run_experiment(tn, random_scorer, n_splits=5, n_runs=10, master_seed=0)
    assert len(result.reports) == 50
    assert abs(result.mean_auc - 0.5) < 0.02


def test_run_experiment_deterministic_scorer_zero_variance():
    tn = random_temporal(30, 300, 50, seed=8)
    result = run_experiment(tn, "l2", n_splits=3, n_runs=4, master_seed=1)
    for s in range(3):
        aucs = [r.auc for r in result.reports if r.split_index == s]
        assert np.std(aucs) == 0.0


def test_run_experiment_reproducible():
    tn = random_temporal(25, 250, 40, seed=9)
    params = {"beta": 0.5, "x": 2, "dim": 8, "epochs": 1}
    a = run_experiment(tn, "sine", params, n_splits=2, n_runs=2, master_seed=5)
    b = run_experiment(tn, "sine", params, n_splits=2, n_runs=2, master_seed=5)
    assert [r.auc for r in a.reports] == [r.auc for r in b.reports]


def test_run_experiment_all_algorithms_produce_scores():
    tn = random_temporal(25, 300, 40, seed=10)
    params = {"beta": 0.5, "x": 1, "dim": 4, "epochs": 1, "l_max": 8}
    for algo in ("sine", "tsine1", "tsine2", "deepwalk", "node2vec", "ctdne",
                 "l2", "l3", "l4"):
        result = run_experiment(tn, algo, params, n_splits=1, n_runs=1, master_seed=2)
        assert len(result.reports) == 1
        assert 0.0 <= result.reports[0].auc <= 1.0


def test_split_seeds_shared_across_algorithms():
    tn = random_temporal(25, 250, 40, seed=11)
    a = run_experiment(tn, "l2", n_splits=2, n_runs=1, master_seed=3)
    b = run_experiment(tn, "l3", n_splits=2, n_runs=1, master_seed=3)
    assert [r.split_seed for r in a.reports] == [r.split_seed for r in b.reports]
    assert a.reports[0].split_seed == split_seed_for(3, 0)


def test_dot_product_histogram_properties():
    em = EmbeddingMatrix(np.array([[2.0, 0.0], [1.5, 0.0], [-2.0, 0.0], [-1.5, 0.0]]))
    pairs = np.array([(0, 1), (2, 3), (0, 2), (1, 3)])
    labels = np.array([1, 1, 0, 0])
    pos, neg, edges = dot_product_histogram(em, pairs, labels, n_bins=4)
    assert pos.sum() == 2 and neg.sum() == 2
    assert len(edges) == 5
    assert not np.any((pos > 0) & (neg > 0))  # separated scores do not share bins
    same = dot_product_histogram(em, pairs, np.ones(4, dtype=int), n_bins=4)[0]
    assert same.sum() == 4
    with pytest.raises(ValueError):
        dot_product_histogram(em, pairs, labels, n_bins=1)


def test_sampled_network_triangle_and_empty():
    corpus = TrajectoryCorpus([[0, 1, 2]], 3, 5)
    g_s = sampled_network(generate_pairs(corpus, 2))
    assert sorted(map(tuple, g_s.edges)) == [(0, 1), (0, 2), (1, 2)]
    assert g_s.members.tolist() == [0, 1, 2]
    empty = sampled_network(generate_pairs(TrajectoryCorpus([[0], [4]], 2, 5), 2))
    assert empty.n_edges == 0
    assert empty.members.tolist() == [0, 4]


def test_pearson_reference_values():
    x = np.arange(20, dtype=float)
    assert pearson(x, 2 * x + 1) == pytest.approx(1.0, abs=1e-12)
    assert pearson(x, -0.5 * x + 3) == pytest.approx(-1.0, abs=1e-12)
    assert pearson([1, 2, 3], [2, 4, 5]) == pytest.approx(0.9819805, abs=1e-6)
    rng = np.random.default_rng(12)
    assert abs(pearson(rng.normal(size=10000), rng.normal(size=10000))) < 0.05
    with pytest.raises(ValueError):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


def test_pcc_dot_vs_lpath_runs():
    tn = planted_partition_temporal(n=60, seed=13)
    split = make_split(tn, 14)
    params = resolve_params({"beta": 0.5, "x": 2, "dim": 8, "epochs": 1})
    from spreademb.evaluation import embed_split
    em, _ = embed_split("sine", split, params, 15)
    pos = split.pairs[split.labels == 1]
    r = pcc_dot_vs_lpath(em, split.train_static, pos, 2)
    assert -1.0 <= r <= 1.0


def test_resolve_params_rejects_unknown():
    with pytest.raises(ValueError):
        resolve_params({"gamma": 1.0})
