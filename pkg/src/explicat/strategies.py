"""Query strategies for pool-based active learning and per-round batch composition.

Five combined-phase strategies (high-confidence positives, embedding
clustering, diverse seed expansion, nearest positive neighbors,
low-confidence) plus uncertainty sampling for the late rounds. All selection
is deterministic given inputs and the supplied RNG.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import EmptyPool, NoPositives

Embeddings = Mapping[str, np.ndarray]
Scores = Mapping[str, float]


@dataclass(frozen=True)
class StrategyConfig:
    confidence_threshold: float = 0.8
    k_clusters: int = 20
    knn_k: int = 5
    diversity_cutoff: float = 0.95
    rng_seed: int = 0


@dataclass
class QueryBatch:
    round_index: int
    ids: tuple[str, ...]
    provenance: dict[str, str]


# strategy names used in provenance and rotation schedules
HCP = "high_confidence_positives"
CLUST = "embedding_clusters"
DIVERSE = "diverse_seed_expansion"
NPN = "nearest_positive_neighbors"
LOWCONF = "low_confidence"
UNCERTAIN = "uncertainty"
RANDOM = "random"

# default per-round rotation for the combined phase, cycled over rounds
DEFAULT_ROTATION: tuple[tuple[str, ...], ...] = (
    (HCP, CLUST, DIVERSE),
    (NPN, LOWCONF),
    (HCP, NPN),
    (CLUST, LOWCONF),
)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 1.0 - cosine_similarity(a, b)


def high_confidence_positives(
    pool_ids: Sequence[str], scores: Scores, tau: float, n: int, rng: random.Random
) -> list[str]:
    """Uniform random sample from instances scoring at or above the threshold."""
    eligible = sorted(i for i in pool_ids if scores[i] >= tau)
    if len(eligible) <= n:
        return eligible
    return rng.sample(eligible, n)


def embedding_clusters(
    pool_ids: Sequence[str],
    embeddings: Embeddings,
    k: int,
    n: int,
    rng: random.Random,
    n_iter: int = 50,
    batch_size: int = 256,
) -> list[str]:
    """Mini-batch k-means over pool embeddings; pick the point nearest each centroid.

    Centroids are initialized by uniform sampling. If the unique
    representatives fall short of n, clusters are revisited in size order and
    contribute their next-nearest points.
    """
    ids = sorted(pool_ids)
    if not ids:
        return []
    X = np.stack([np.asarray(embeddings[i], dtype=float) for i in ids])
    k_eff = min(k, len(ids))
    centroids = X[rng.sample(range(len(ids)), k_eff)].copy()
    counts = np.zeros(k_eff)
    bsz = min(batch_size, len(ids))
    for _ in range(n_iter):
        batch = [rng.randrange(len(ids)) for _ in range(bsz)]
        B = X[batch]
        assign = np.argmin(
            ((B[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2), axis=1
        )
        for point, c in zip(B, assign):
            counts[c] += 1
            eta = 1.0 / counts[c]
            centroids[c] = (1.0 - eta) * centroids[c] + eta * point

    dists = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    assign_all = np.argmin(dists, axis=1)
    sizes = np.bincount(assign_all, minlength=k_eff)
    cluster_order = sorted(range(k_eff), key=lambda c: (-sizes[c], c))
    # per-cluster ranking of all pool points by distance to that centroid
    ranked = {c: list(np.argsort(dists[:, c], kind="stable")) for c in range(k_eff)}
    cursor = {c: 0 for c in range(k_eff)}

    selected: list[str] = []
    chosen: set[int] = set()
    budget = min(n, len(ids))
    while len(selected) < budget:
        progressed = False
        for c in cluster_order:
            if len(selected) >= budget:
                break
            while cursor[c] < len(ids) and ranked[c][cursor[c]] in chosen:
                cursor[c] += 1
            if cursor[c] < len(ids):
                idx = ranked[c][cursor[c]]
                chosen.add(idx)
                selected.append(ids[idx])
                progressed = True
        if not progressed:
            break
    return selected


def _mean_cosine_distance_to_others(
    pid: str, positives: Mapping[str, np.ndarray]
) -> float:
    others = [v for k, v in positives.items() if k != pid]
    if not others:
        return 0.0
    vec = positives[pid]
    return sum(cosine_distance(vec, o) for o in others) / len(others)


def diverse_seed_expansion(
    pool_ids: Sequence[str],
    embeddings: Embeddings,
    positives: Mapping[str, np.ndarray],
    n: int,
    diversity_cutoff: float = 0.95,
) -> list[str]:
    """Expand around the most isolated labeled positives with diverse neighbors.

    Anchors are the ceil(n/5) positives with greatest mean cosine distance to
    the other positives. Anchors contribute their nearest pool neighbors in
    round-robin order; a candidate is skipped when its cosine similarity to an
    already-selected candidate exceeds the diversity cutoff.
    """
    if not positives:
        raise NoPositives("diverse_seed_expansion requires labeled positives")
    ids = sorted(pool_ids)
    if not ids or n <= 0:
        return []
    n_anchors = max(1, math.ceil(n / 5))
    anchors = sorted(
        positives,
        key=lambda p: (-_mean_cosine_distance_to_others(p, positives), p),
    )[:n_anchors]

    neighbor_lists = {
        a: sorted(ids, key=lambda i: (cosine_distance(positives[a], embeddings[i]), i))
        for a in anchors
    }
    cursor = {a: 0 for a in anchors}
    selected: list[str] = []
    chosen: set[str] = set()
    while len(selected) < n:
        progressed = False
        for a in anchors:
            if len(selected) >= n:
                break
            while cursor[a] < len(ids):
                cand = neighbor_lists[a][cursor[a]]
                cursor[a] += 1
                if cand in chosen:
                    continue
                if any(
                    cosine_similarity(embeddings[cand], embeddings[s]) > diversity_cutoff
                    for s in selected
                ):
                    chosen.add(cand)  # redundant with an already-selected point
                    continue
                chosen.add(cand)
                selected.append(cand)
                progressed = True
                break
        if not progressed:
            break
    return selected


def nearest_positive_neighbors(
    pool_ids: Sequence[str],
    embeddings: Embeddings,
    positives: Mapping[str, np.ndarray],
    n: int,
) -> list[str]:
    """Pool instances ranked by min-over-positives cosine distance; ties by id."""
    if not positives:
        raise NoPositives("nearest_positive_neighbors requires labeled positives")
    pos_vecs = list(positives.values())
    ranked = sorted(
        pool_ids,
        key=lambda i: (min(cosine_distance(p, embeddings[i]) for p in pos_vecs), i),
    )
    return ranked[:n]


def low_confidence(pool_ids: Sequence[str], scores: Scores, n: int) -> list[str]:
    """Instances with the smallest model confidence max(p, 1-p); ties by id."""
    ranked = sorted(pool_ids, key=lambda i: (max(scores[i], 1.0 - scores[i]), i))
    return ranked[:n]


def uncertainty(pool_ids: Sequence[str], scores: Scores, n: int) -> list[str]:
    """Instances with posterior closest to 0.5; ties by id."""
    ranked = sorted(pool_ids, key=lambda i: (abs(scores[i] - 0.5), i))
    return ranked[:n]


def split_quotas(size: int, n_strategies: int) -> list[int]:
    """Equal split with the remainder on the first strategy."""
    base = size // n_strategies
    quotas = [base] * n_strategies
    quotas[0] += size - base * n_strategies
    return quotas


def compose_batch(
    round_index: int,
    requested_size: int,
    strategy_outputs: Sequence[tuple[str, Sequence[str]]],
    pool_ids: Sequence[str],
    rng: random.Random,
) -> QueryBatch:
    """Merge strategy outputs into one deduplicated batch of the requested size.

    Duplicates keep first-strategy provenance; any shortfall is backfilled by
    uniform random sampling from the rest of the pool.
    """
    if not pool_ids:
        raise EmptyPool(f"round {round_index}: empty pool")
    pool_set = set(pool_ids)
    quotas = split_quotas(requested_size, len(strategy_outputs)) if strategy_outputs else []
    selected: list[str] = []
    provenance: dict[str, str] = {}
    for (name, ids), quota in zip(strategy_outputs, quotas):
        taken = 0
        for i in ids:
            if taken >= quota:
                break
            if i in provenance or i not in pool_set:
                continue
            provenance[i] = name
            selected.append(i)
            taken += 1
    if len(selected) < requested_size:
        remainder = sorted(pool_set - set(selected))
        fill = min(requested_size - len(selected), len(remainder))
        for i in rng.sample(remainder, fill):
            provenance[i] = RANDOM
            selected.append(i)
    return QueryBatch(round_index=round_index, ids=tuple(selected), provenance=provenance)
