import math

import numpy as np
import pytest

from app.models.dataset_model import SplitDataset
from app.schemas.reports import MetricsReport
from app.utils.exceptions import EvaluationError
from app.utils.metrics import (
    group_report_from,
    metrics,
    rank_items,
    recall_ndcg,
    tail_recall,
    uniformity_report,
)


def brute_force(split: SplitDataset, embeddings: np.ndarray, k: int):
    """Ranking completo con sorted() y fórmulas directas"""
    recalls, ndcgs = [], []
    for u in range(split.num_users):
        relevant = {int(i) for uu, i in split.test if uu == u}
        if not relevant:
            continue
        seen = {int(i) for uu, i in np.concatenate([split.train, split.val]) if uu == u}
        scores = {
            i: float(sum(embeddings[u, c] * embeddings[split.num_users + i, c] for c in range(embeddings.shape[1])))
            for i in range(split.num_items) if i not in seen
        }
        ranked = sorted(scores, key=lambda i: (-scores[i], i))[:k]
        hits = [1.0 if i in relevant else 0.0 for i in ranked]
        dcg = sum(h / math.log2(pos + 2) for pos, h in enumerate(hits))
        idcg = sum(1.0 / math.log2(pos + 2) for pos in range(min(len(relevant), k)))
        recalls.append(sum(hits) / len(relevant))
        ndcgs.append(dcg / idcg)
    return float(np.mean(recalls)), float(np.mean(ndcgs))


def random_split(rng: np.random.Generator) -> SplitDataset:
    num_users, num_items = 5, 8
    parts = {"train": [], "val": [], "test": []}
    for u in range(num_users):
        items = rng.permutation(num_items)[:int(rng.integers(2, 7))]
        n_test = int(rng.integers(1, 3))
        parts["test"].extend((u, int(i)) for i in items[:n_test])
        parts["val"].extend((u, int(i)) for i in items[n_test:n_test + 1])
        parts["train"].extend((u, int(i)) for i in items[n_test + 1:])
    as_array = lambda rows: np.array(rows, dtype=np.int64).reshape(-1, 2)
    return SplitDataset(
        num_users=num_users,
        num_items=num_items,
        train=as_array(parts["train"]),
        val=as_array(parts["val"]),
        test=as_array(parts["test"]),
        user_ids=[str(u) for u in range(num_users)],
        item_ids=[str(i) for i in range(num_items)],
    )


def fake_report(num_users: int, rng: np.random.Generator) -> MetricsReport:
    recalls = rng.random(num_users)
    return MetricsReport(
        k=20,
        recall=float(recalls.mean()),
        ndcg=float(recalls.mean()),
        evaluated_users=num_users,
        users=list(range(num_users)),
        per_user_recall=recalls.tolist(),
        per_user_ndcg=recalls.tolist(),
    )


class TestRanking:

    def test_top_two(self):
        np.testing.assert_array_equal(rank_items(np.array([0.9, 0.1, 0.5]), None, 2), [0, 2])

    def test_exclusions_and_ties(self):
        ranked = rank_items(np.array([0.5, 0.5, 0.9, 0.5]), [2], 3)
        np.testing.assert_array_equal(ranked, [0, 1, 3])

    def test_never_returns_excluded(self, rng):
        for _ in range(50):
            scores = rng.normal(size=10)
            excluded = rng.choice(10, size=4, replace=False)
            ranked = rank_items(scores, excluded, 10)
            assert len(ranked) == 6
            assert not set(ranked) & set(excluded)

    def test_invalid_k(self):
        with pytest.raises(EvaluationError):
            rank_items(np.zeros(3), None, 0)


class TestRecallNdcg:

    def test_single_hit_at_top(self):
        assert recall_ndcg(np.array([4, 1, 2]), np.array([4]), 20) == (1.0, 1.0)

    def test_hits_at_one_and_three(self):
        recall, ndcg = recall_ndcg(np.array([7, 0, 5, 3]), np.array([7, 5]), 20)
        assert recall == 1.0
        assert ndcg == pytest.approx(1.5 / (1.0 + 1.0 / math.log2(3)), rel=1e-12)
        assert ndcg == pytest.approx(0.9197, abs=1e-4)

    def test_no_hits(self):
        assert recall_ndcg(np.array([1, 2]), np.array([9]), 2) == (0.0, 0.0)

    def test_empty_relevant(self):
        with pytest.raises(EvaluationError):
            recall_ndcg(np.array([1]), np.array([], dtype=np.int64), 1)


class TestFullRankingMetrics:

    def test_matches_brute_force(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            split = random_split(rng)
            embeddings = rng.normal(size=(split.num_users + split.num_items, 3))
            k = int(rng.integers(1, split.num_items + 1))
            report = metrics(split, embeddings, k=k, phase="test", batch_users=2)
            recall, ndcg = brute_force(split, embeddings, k)
            assert abs(report.recall - recall) <= 1e-12
            assert abs(report.ndcg - ndcg) <= 1e-12

    def test_val_phase_excludes_only_train(self, toy_split, rng):
        embeddings = rng.normal(size=(toy_split.num_users + toy_split.num_items, 3))
        report = metrics(toy_split, embeddings, k=5, phase="val")
        assert report.evaluated_users == len(np.unique(toy_split.val[:, 0]))

    def test_k_larger_than_catalog(self, toy_split):
        with pytest.raises(EvaluationError):
            metrics(toy_split, np.zeros((22, 2)), k=11)

    def test_no_evaluable_users(self, toy_split):
        empty = SplitDataset(
            num_users=toy_split.num_users,
            num_items=toy_split.num_items,
            train=toy_split.train,
            val=toy_split.val,
            test=np.empty((0, 2), dtype=np.int64),
            user_ids=toy_split.user_ids,
            item_ids=toy_split.item_ids,
        )
        with pytest.raises(EvaluationError):
            metrics(empty, np.zeros((22, 2)), k=3)


class TestDegreeGroups:

    def test_equal_groups(self, rng):
        report = fake_report(100, rng)
        grouped = group_report_from(report, rng.integers(1, 50, size=100), 10)
        assert [row.users for row in grouped.groups] == [10] * 10

    def test_uneven_sizes_differ_by_one(self, rng):
        report = fake_report(101, rng)
        sizes = [row.users for row in group_report_from(report, rng.integers(1, 50, size=101), 10).groups]
        assert sum(sizes) == 101
        assert max(sizes) - min(sizes) <= 1

    def test_groups_ascend_by_degree(self, rng):
        degrees = rng.zipf(2.1, size=200).clip(max=500)
        grouped = group_report_from(fake_report(200, rng), degrees, 10)
        means = [row.mean_degree for row in grouped.groups]
        assert means == sorted(means)
        assert means[0] < means[-1]

    def test_too_few_users(self, rng):
        with pytest.raises(EvaluationError):
            group_report_from(fake_report(5, rng), np.ones(5), 10)

    def test_tail_recall_is_bottom_three_mean(self, rng):
        report = fake_report(30, rng)
        degrees = np.arange(30)
        expected = float(np.mean(report.per_user_recall[:9]))
        assert tail_recall(report, degrees) == pytest.approx(expected, rel=1e-12)


class TestUniformity:

    def test_identical_rows(self):
        report = uniformity_report(np.tile([[0.3, -1.2, 0.5]], (50, 1)), sample_pairs=1000)
        assert report.statistic == pytest.approx(0.0, abs=1e-12)

    def test_antipodal_pair(self):
        report = uniformity_report(np.array([[1.0, 0.0], [-2.0, 0.0]]), sample_pairs=500)
        assert report.statistic == pytest.approx(-8.0, abs=1e-9)

    def test_uniform_beats_cluster(self, rng):
        sphere = rng.normal(size=(2000, 8))
        cluster = np.ones((2000, 8)) + 0.05 * rng.normal(size=(2000, 8))
        spread = uniformity_report(sphere, sample_pairs=20_000).statistic
        packed = uniformity_report(cluster, sample_pairs=20_000).statistic
        assert spread < packed

    def test_histogram_counts_rows(self, rng):
        X = rng.normal(size=(300, 5))
        X[:7] = 0.0
        report = uniformity_report(X, sample_pairs=100)
        assert report.sample_count == 293
        assert sum(report.histogram) == 293
        assert len(report.histogram) == report.bins

    def test_deterministic(self, rng):
        X = rng.normal(size=(100, 4))
        assert uniformity_report(X, 500, seed=3) == uniformity_report(X, 500, seed=3)

    def test_needs_two_rows(self):
        with pytest.raises(EvaluationError):
            uniformity_report(np.array([[1.0, 2.0], [0.0, 0.0]]), sample_pairs=10)
