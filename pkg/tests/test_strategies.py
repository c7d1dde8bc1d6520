import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from explicat import strategies as st
from explicat.errors import EmptyPool, NoPositives


def _rng(seed=0):
    return random.Random(seed)


def _scores(values):
    return {f"p{i:03d}": v for i, v in enumerate(values)}


class TestHighConfidencePositives:
    def test_threshold_filter(self):
        scores = _scores([0.95, 0.8, 0.79, 0.2, 0.81])
        got = st.high_confidence_positives(sorted(scores), scores, 0.8, 10, _rng())
        assert got == ["p000", "p001", "p004"]

    def test_samples_when_over_budget(self):
        scores = _scores([0.9] * 50)
        got = st.high_confidence_positives(sorted(scores), scores, 0.8, 10, _rng())
        assert len(got) == 10
        assert len(set(got)) == 10
        assert all(scores[i] >= 0.8 for i in got)

    @given(hst.lists(hst.floats(0, 1), min_size=1, max_size=60), hst.integers(0, 20))
    def test_oracle_subset(self, values, n):
        scores = _scores(values)
        got = st.high_confidence_positives(sorted(scores), scores, 0.8, n, _rng(1))
        eligible = {i for i in scores if scores[i] >= 0.8}
        assert set(got) <= eligible
        assert len(got) == min(n, len(eligible))
        assert len(set(got)) == len(got)


class TestEmbeddingClusters:
    def _blob_pool(self, seed=0, n_clusters=4, per=30, dim=8):
        rs = np.random.RandomState(seed)
        centers = rs.normal(size=(n_clusters, dim)) * 10
        embeddings, truth = {}, {}
        for c in range(n_clusters):
            for j in range(per):
                pid = f"c{c}p{j:02d}"
                embeddings[pid] = centers[c] + rs.normal(size=dim) * 0.1
                truth[pid] = c
        return embeddings, truth

    def test_returns_requested_unique(self):
        embeddings, _ = self._blob_pool()
        got = st.embedding_clusters(sorted(embeddings), embeddings, 4, 12, _rng())
        assert len(got) == 12
        assert len(set(got)) == 12

    def test_covers_well_separated_blobs(self):
        hits = 0
        for trial in range(20):
            embeddings, truth = self._blob_pool(seed=trial)
            got = st.embedding_clusters(sorted(embeddings), embeddings, 12, 12, _rng(trial))
            if {truth[i] for i in got} == {0, 1, 2, 3}:
                hits += 1
        assert hits >= 19

    def test_small_pool(self):
        embeddings = {"a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])}
        got = st.embedding_clusters(["a", "b"], embeddings, 20, 5, _rng())
        assert sorted(got) == ["a", "b"]

    def test_empty_pool(self):
        assert st.embedding_clusters([], {}, 4, 5, _rng()) == []


def _unit(theta):
    return np.array([np.cos(theta), np.sin(theta)])


class TestDiverseSeedExpansion:
    def test_requires_positives(self):
        with pytest.raises(NoPositives):
            st.diverse_seed_expansion(["a"], {"a": _unit(0)}, {}, 3)

    def test_anchor_neighbors_selected(self):
        # two positive anchors in opposite directions; pool points near each
        positives = {"pos_a": _unit(0.0), "pos_b": _unit(np.pi)}
        embeddings = {
            "near_a1": _unit(0.05),
            "near_a2": _unit(0.1),
            "near_b1": _unit(np.pi - 0.05),
            "far": _unit(np.pi / 2),
        }
        got = st.diverse_seed_expansion(sorted(embeddings), embeddings, positives, 2)
        # n=2 -> ceil(2/5)=1 anchor; round-robin starts at the chosen anchor
        assert len(got) == 2
        assert set(got) <= set(embeddings)

    def test_diversity_cutoff_skips_near_duplicates(self):
        positives = {"pos": _unit(0.0)}
        embeddings = {
            "dup1": _unit(0.01),
            "dup2": _unit(0.011),  # nearly identical to dup1
            "other": _unit(0.6),
        }
        got = st.diverse_seed_expansion(
            sorted(embeddings), embeddings, positives, 2, diversity_cutoff=0.95
        )
        assert got == ["dup1", "other"]

    def test_budget_and_uniqueness(self):
        rs = np.random.RandomState(3)
        embeddings = {f"x{i:02d}": rs.normal(size=4) for i in range(30)}
        positives = {f"q{i}": rs.normal(size=4) for i in range(6)}
        got = st.diverse_seed_expansion(sorted(embeddings), embeddings, positives, 10)
        assert len(got) == len(set(got)) <= 10


class TestNearestPositiveNeighbors:
    def test_requires_positives(self):
        with pytest.raises(NoPositives):
            st.nearest_positive_neighbors(["a"], {"a": _unit(0)}, {}, 3)

    def test_brute_force_oracle(self):
        rs = np.random.RandomState(7)
        embeddings = {f"x{i:02d}": rs.normal(size=5) for i in range(40)}
        positives = {f"q{i}": rs.normal(size=5) for i in range(4)}
        got = st.nearest_positive_neighbors(sorted(embeddings), embeddings, positives, 8)
        # oracle: compute every distance explicitly, rank, take 8
        def key(pid):
            d = min(
                1.0 - float(np.dot(v, embeddings[pid]))
                / (np.linalg.norm(v) * np.linalg.norm(embeddings[pid]))
                for v in positives.values()
            )
            return (d, pid)

        oracle = sorted(embeddings, key=key)[:8]
        assert got == oracle


class TestScoreRankings:
    @given(hst.lists(hst.floats(0, 1), min_size=1, max_size=40), hst.integers(0, 15))
    def test_low_confidence_oracle(self, values, n):
        scores = _scores(values)
        got = st.low_confidence(sorted(scores), scores, n)
        oracle = sorted(scores, key=lambda i: (max(scores[i], 1 - scores[i]), i))[:n]
        assert got == oracle

    @given(hst.lists(hst.floats(0, 1), min_size=1, max_size=40), hst.integers(0, 15))
    def test_uncertainty_oracle(self, values, n):
        scores = _scores(values)
        got = st.uncertainty(sorted(scores), scores, n)
        oracle = sorted(scores, key=lambda i: (abs(scores[i] - 0.5), i))[:n]
        assert got == oracle

    def test_hand_case(self):
        # a and d tie at confidence 0.51 / margin 0.01; ties break by id
        scores = {"a": 0.51, "b": 0.1, "c": 0.92, "d": 0.49}
        assert st.uncertainty(sorted(scores), scores, 2) == ["a", "d"]
        assert st.low_confidence(sorted(scores), scores, 2) == ["a", "d"]


class TestComposeBatch:
    def test_quota_split(self):
        assert st.split_quotas(100, 3) == [34, 33, 33]
        assert st.split_quotas(100, 2) == [50, 50]
        assert st.split_quotas(50, 1) == [50]
        assert st.split_quotas(7, 3) == [3, 2, 2]

    def test_equal_quotas_applied(self):
        pool = [f"p{i:03d}" for i in range(300)]
        outputs = [
            (st.HCP, pool[:50]),
            (st.CLUST, pool[50:150]),
            (st.DIVERSE, pool[150:250]),
        ]
        batch = st.compose_batch(1, 100, outputs, pool, _rng())
        assert len(batch.ids) == 100
        by_strategy = {}
        for i in batch.ids:
            by_strategy.setdefault(batch.provenance[i], []).append(i)
        assert len(by_strategy[st.HCP]) == 34
        assert len(by_strategy[st.CLUST]) == 33
        assert len(by_strategy[st.DIVERSE]) == 33

    def test_duplicate_keeps_first_provenance(self):
        pool = [f"p{i:03d}" for i in range(10)]
        outputs = [(st.HCP, ["p000", "p001"]), (st.NPN, ["p000", "p002"])]
        batch = st.compose_batch(2, 4, outputs, pool, _rng())
        assert batch.provenance["p000"] == st.HCP
        assert batch.provenance["p002"] == st.NPN
        assert len(batch.ids) == len(set(batch.ids)) == 4

    def test_random_backfill(self):
        pool = [f"p{i:03d}" for i in range(20)]
        outputs = [(st.HCP, ["p000"]), (st.LOWCONF, ["p001"])]
        batch = st.compose_batch(3, 10, outputs, pool, _rng())
        assert len(batch.ids) == 10
        fills = [i for i in batch.ids if batch.provenance[i] == st.RANDOM]
        assert len(fills) == 8
        assert set(batch.ids) <= set(pool)

    def test_ignores_ids_outside_pool(self):
        pool = ["a", "b", "c"]
        batch = st.compose_batch(0, 2, [(st.HCP, ["zz", "a"])], pool, _rng())
        assert "zz" not in batch.ids
        assert batch.provenance["a"] == st.HCP

    def test_pool_smaller_than_request(self):
        batch = st.compose_batch(0, 10, [], ["a", "b"], _rng())
        assert sorted(batch.ids) == ["a", "b"]

    def test_empty_pool(self):
        with pytest.raises(EmptyPool):
            st.compose_batch(0, 5, [], [], _rng())

    @settings(max_examples=30)
    @given(hst.integers(0, 2**32 - 1))
    def test_batch_always_unique_and_within_pool(self, seed):
        rng = random.Random(seed)
        pool = [f"p{i:03d}" for i in range(50)]
        outputs = [
            (st.HCP, rng.sample(pool, 20)),
            (st.CLUST, rng.sample(pool, 20)),
        ]
        batch = st.compose_batch(1, 30, outputs, pool, rng)
        assert len(batch.ids) == 30
        assert len(set(batch.ids)) == 30
        assert set(batch.ids) <= set(pool)
        assert set(batch.provenance) == set(batch.ids)
