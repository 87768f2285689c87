"""Pilot-assignment strategies and the diversity objective they optimize.

Strategies, by registered name:

* ``random``: balanced random partition (shuffle, deal round-robin).
* ``greedy``: iteratively moves the minimum-rate UE to the least-contaminating
  pilot; may leave the partition unbalanced.
* ``repulsive``: swap-based local search that maximizes within-cluster
  dissimilarity under balanced cluster sizes.
* ``optimal-repulsive``: exact maximizer of the same objective by enumerating
  every balanced partition (small instances only).
* ``exhaustive``: exact sum-rate maximizer over every assignment, balanced or
  not (small instances only).
* ``oracle``: idealized contamination-free assignment (upper bound).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.random import default_rng

from .chanest import PilotAssignment, estimation_quality
from .config import SimConfig
from .errors import BudgetExceededError, ConfigError, ConstraintViolationError
from .rate_model import uplink_sinr
from .topology import NetworkRealization, pilot_snr, uplink_snr

# Strict-improvement margin for accepting a swap; guards against float cycling.
SWAP_TOLERANCE = 1e-12
# Independent local-search starts for the repulsive heuristic; single starts
# land in sub-optimal 1-swap local optima on roughly a third of instances.
DEFAULT_RESTARTS = 8
# Guards for the exact searches.
OPTIMAL_REPULSIVE_MAX_UES = 12
EXHAUSTIVE_BUDGET = 2_000_000
_ENUM_CHUNK = 1 << 17
_TABLE_CHUNK = 1 << 13


def group_size_bounds(num_ues, num_clusters):
    """Allowed per-cluster size range for a balanced partition."""
    low = num_ues // num_clusters
    return low, low + 1


@dataclass(frozen=True)
class ClusterMatrix:
    """Binary UE-by-cluster association matrix with balance constraints.

    Every row must select exactly one cluster and every column-sum must lie
    in the balanced range; violations raise ``ConstraintViolationError``.
    """

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x)
        if x.ndim != 2:
            raise ConstraintViolationError("association matrix must be 2-D")
        if not np.isin(x, (0, 1)).all():
            raise ConstraintViolationError("association matrix entries must be 0 or 1")
        x = x.astype(int)
        if np.any(x.sum(axis=1) != 1):
            raise ConstraintViolationError("each UE must belong to exactly one cluster")
        low, high = group_size_bounds(*x.shape)
        col = x.sum(axis=0)
        if np.any(col < low) or np.any(col > high):
            raise ConstraintViolationError(
                f"cluster sizes {col.tolist()} outside balanced range [{low}, {high}]")
        object.__setattr__(self, "x", x)

    @classmethod
    def from_labels(cls, labels, num_clusters):
        labels = np.asarray(labels, dtype=int)
        x = np.zeros((labels.size, num_clusters), dtype=int)
        x[np.arange(labels.size), labels] = 1
        return cls(x)

    def labels(self):
        return self.x.argmax(axis=1)


def euclidean(u, w):
    """Default pairwise repulsion: Euclidean distance between feature vectors."""
    return float(np.linalg.norm(np.asarray(u, dtype=float) - np.asarray(w, dtype=float)))


@dataclass(frozen=True)
class RepulsionFunction:
    """Symmetric non-negative pairwise dissimilarity over UE feature vectors."""

    features: np.ndarray
    metric: Callable = euclidean

    def __post_init__(self):
        feats = np.atleast_2d(np.asarray(self.features, dtype=float))
        if feats.shape[0] == 1 and np.asarray(self.features).ndim == 1:
            feats = feats.T  # a 1-D feature list means one scalar feature per UE
        object.__setattr__(self, "features", feats)

    @property
    def num_ues(self):
        return self.features.shape[0]

    def __call__(self, k, k2):
        return self.metric(self.features[k], self.features[k2])

    def matrix(self):
        """Dense pairwise score matrix (symmetric, zero diagonal)."""
        n = self.num_ues
        if self.metric is euclidean:
            diff = self.features[:, None, :] - self.features[None, :, :]
            return np.sqrt((diff ** 2).sum(axis=-1))
        out = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                out[i, j] = out[j, i] = self.metric(self.features[i], self.features[j])
        return out


def repulsion_score(x, repulsion: RepulsionFunction):
    """Total within-cluster dissimilarity of a balanced association matrix."""
    if not isinstance(x, ClusterMatrix):
        x = ClusterMatrix(x)
    scores = repulsion.matrix()
    total = 0.0
    for col in range(x.x.shape[1]):
        members = np.flatnonzero(x.x[:, col])
        total += scores[np.ix_(members, members)].sum() / 2.0
    return float(total)


def random_assignment(num_ues, num_pilots, seed) -> PilotAssignment:
    """Balanced random partition: shuffle the UEs and deal them round-robin."""
    if num_ues < 1 or num_pilots < 1:
        raise ValueError("num_ues and num_pilots must be >= 1")
    rng = default_rng(seed)
    labels = np.empty(num_ues, dtype=int)
    labels[rng.permutation(num_ues)] = np.arange(num_ues) % num_pilots
    return PilotAssignment(labels)


def greedy_assignment(realization: NetworkRealization, cfg: SimConfig, seed,
                      iterations=None) -> PilotAssignment:
    """Iteratively reseat the minimum-rate UE on the least-contaminating pilot.

    Rates are evaluated at full power; each round moves the worst UE to the
    pilot whose current co-pilot UEs have the smallest total gain summed over
    all APs. Stops early once the chosen UE would keep its pilot (the state
    can never change afterwards). Defaults to 2K rounds.
    """
    beta = realization.beta
    k = realization.num_ues
    if iterations is None:
        iterations = 2 * k
    rho_p = pilot_snr(cfg)
    rho_u = uplink_snr(cfg)
    eta = np.ones(k)
    ue_gain = beta.sum(axis=0)
    labels = random_assignment(k, cfg.num_pilots, seed).p.copy()
    for _ in range(iterations):
        assignment = PilotAssignment(labels)
        gamma = estimation_quality(beta, assignment, cfg.num_pilots, rho_p).gamma
        sinr = uplink_sinr(beta, gamma, assignment, eta, rho_u)
        worst = int(np.argmin(sinr))
        per_pilot = np.bincount(labels, weights=ue_gain, minlength=cfg.num_pilots)
        per_pilot[labels[worst]] -= ue_gain[worst]
        target = int(np.argmin(per_pilot))
        if target == labels[worst]:
            break
        labels[worst] = target
    return PilotAssignment(labels)


def _swap_gain(scores, labels, u, w):
    """Objective change from exchanging the clusters of UEs u and w."""
    members_u = np.flatnonzero(labels == labels[u])
    members_w = np.flatnonzero(labels == labels[w])
    gain = (scores[w, members_u] - scores[u, members_u]).sum()
    gain += (scores[u, members_w] - scores[w, members_w]).sum()
    return gain - 2.0 * scores[u, w]


def _sweep_pair(scores, labels, first, second):
    """Exhaust improving swaps between two clusters; True if any was accepted.

    Evaluates all cross-pair gains against the current memberships, applies
    the first improving swap in UE index order, and re-scans the pair until
    none is left. The batched gains equal the one-at-a-time deltas exactly.
    """
    accepted = False
    while True:
        idx1 = np.flatnonzero(labels == first)
        idx2 = np.flatnonzero(labels == second)
        s1 = scores[:, idx1].sum(axis=1)
        s2 = scores[:, idx2].sum(axis=1)
        gains = (s1[idx2][None, :] - s1[idx1][:, None]
                 + s2[idx1][:, None] - s2[idx2][None, :]
                 - 2.0 * scores[np.ix_(idx1, idx2)])
        hits = np.argwhere(gains > SWAP_TOLERANCE)
        if hits.size == 0:
            return accepted
        u, w = idx1[hits[0, 0]], idx2[hits[0, 1]]
        labels[u], labels[w] = second, first
        accepted = True


def _local_search(scores, labels, num_pilots):
    """Sweep cluster pairs lexicographically until a full sweep accepts no swap."""
    improved = True
    while improved:
        improved = False
        for first in range(num_pilots - 1):
            for second in range(first + 1, num_pilots):
                if _sweep_pair(scores, labels, first, second):
                    improved = True
    return labels


def repulsive_heuristic(features, num_pilots, seed=0, repulsion=None,
                        init=None, restarts=DEFAULT_RESTARTS) -> PilotAssignment:
    """Swap-based local search for a balanced, maximally diverse partition.

    Each start begins from a balanced random partition and sweeps all cluster
    pairs in lexicographic order and all cross-pair UE pairs in index order,
    exchanging two UEs whenever that strictly increases the total
    within-cluster dissimilarity; a start terminates when a full sweep
    accepts no swap. The best of ``restarts`` such runs is returned (ties
    keep the earliest), so the result is balanced, 1-swap locally optimal,
    and deterministic given the seed. Passing ``init`` runs a single search
    from that partition instead.
    """
    repulsion = repulsion if repulsion is not None else RepulsionFunction(features)
    k = repulsion.num_ues
    if k < num_pilots:
        raise ValueError("need at least one UE per cluster")
    scores = repulsion.matrix()
    if init is not None:
        ClusterMatrix.from_labels(init.p, num_pilots)  # balance check
        labels = _local_search(scores, np.asarray(init.p, dtype=int).copy(), num_pilots)
        return PilotAssignment(labels)
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = default_rng(seed)
    best_labels = None
    best_score = -1.0
    for _ in range(restarts):
        labels = np.empty(k, dtype=int)
        labels[rng.permutation(k)] = np.arange(k) % num_pilots
        _local_search(scores, labels, num_pilots)
        same = labels[:, None] == labels[None, :]
        score = float((scores * same).sum())
        if score > best_score:
            best_score = score
            best_labels = labels
    return PilotAssignment(best_labels)


def _balanced_partitions(num_ues, capacities):
    """Yield canonical label vectors of every partition with the given sizes.

    Clusters are opened in first-touched order (so labels are canonical:
    cluster i appears before cluster j for i < j), and empty clusters of
    equal capacity are interchangeable, which removes label symmetry.
    """
    labels = np.zeros(num_ues, dtype=int)
    counts = []
    caps = []
    remaining = sorted(capacities, reverse=True)

    def place(ue):
        if ue == num_ues:
            yield labels
            return
        for idx in range(len(caps)):
            if counts[idx] < caps[idx]:
                counts[idx] += 1
                labels[ue] = idx
                yield from place(ue + 1)
                counts[idx] -= 1
        seen = set()
        for pos, cap in enumerate(remaining):
            if cap == 0 or cap in seen:
                continue
            seen.add(cap)
            caps.append(cap)
            counts.append(1)
            del remaining[pos]
            labels[ue] = len(caps) - 1
            yield from place(ue + 1)
            remaining.insert(pos, cap)
            caps.pop()
            counts.pop()

    yield from place(0)


def optimal_repulsive(features, num_pilots, repulsion=None) -> PilotAssignment:
    """Exact maximally diverse balanced partition by full enumeration.

    Guarded to ``OPTIMAL_REPULSIVE_MAX_UES`` UEs; ties are broken toward the
    lexicographically smallest canonical label vector.
    """
    repulsion = repulsion if repulsion is not None else RepulsionFunction(features)
    k = repulsion.num_ues
    if k > OPTIMAL_REPULSIVE_MAX_UES:
        raise BudgetExceededError(
            f"optimal-repulsive enumeration supports at most {OPTIMAL_REPULSIVE_MAX_UES} UEs, got {k}",
            guard="optimal-repulsive enumeration")
    if k < num_pilots:
        raise ValueError("need at least one UE per cluster")
    scores = repulsion.matrix()
    low, _ = group_size_bounds(k, num_pilots)
    capacities = [low + 1] * (k % num_pilots) + [low] * (num_pilots - k % num_pilots)
    best_score = -1.0
    best = None
    for labels in _balanced_partitions(k, capacities):
        same = labels[:, None] == labels[None, :]
        score = float((scores * same).sum()) / 2.0
        if score > best_score or (score == best_score and tuple(labels) < best):
            best_score = score
            best = tuple(labels)
    return PilotAssignment(np.array(best, dtype=int))


def _group_rate_table(beta, num_pilots, rho_p, rho_u):
    """Sum of per-UE rates inside one co-pilot group, for every UE subset.

    At full power a UE's SINR depends only on the set of UEs sharing its
    pilot, so the sum rate of any assignment is the sum of this table over
    its groups. Index: bitmask of group members. Cost O(2^K * M * K^2).
    """
    m, k = beta.shape
    train = num_pilots * rho_p
    beta_sq = beta ** 2
    total_gain = beta.sum(axis=1)                     # per-AP gain over all UEs
    table = np.zeros(1 << k)
    bits = np.arange(k)
    for start in range(0, 1 << k, _TABLE_CHUNK):
        codes = np.arange(start, min(start + _TABLE_CHUNK, 1 << k), dtype=np.int64)
        member = ((codes[:, None] >> bits) & 1).astype(float)       # (C, K)
        load = member @ beta.T                                      # (C, M)
        damp = 1.0 / (train * load + 1.0)
        totals = train * (damp @ beta_sq)                           # (C, K) sum_m gamma
        cross = train * (damp @ (beta_sq * total_gain[:, None]))    # (C, K)
        pair = train * np.einsum("cm,mk,ml->ckl", damp, beta, beta, optimize=True)
        pair_sq = pair ** 2
        copilot = np.einsum("ckl,cl->ck", pair_sq, member)
        copilot -= np.einsum("ckk->ck", pair_sq)
        # copilot/denominator are only meaningful for UEs inside the subset.
        denom = rho_u * copilot + rho_u * cross + totals
        sinr = np.where(member > 0, rho_u * totals ** 2 / np.where(denom > 0, denom, 1.0), 0.0)
        table[codes] = np.log2(1.0 + sinr).sum(axis=1)
    return table


def exhaustive_sum_rate(realization: NetworkRealization, cfg: SimConfig) -> PilotAssignment:
    """Exact full-power sum-rate maximizer over every pilot assignment.

    Enumerates all ``num_pilots ** K`` assignments (no balance constraint) in
    lexicographic order and returns the first maximizer, so ties break toward
    the lexicographically smallest assignment. Guarded by
    ``EXHAUSTIVE_BUDGET`` total assignments.
    """
    beta = realization.beta
    k = realization.num_ues
    num_pilots = cfg.num_pilots
    total = num_pilots ** k
    if total > EXHAUSTIVE_BUDGET:
        raise BudgetExceededError(
            f"exhaustive search over {total} assignments exceeds the budget of {EXHAUSTIVE_BUDGET}",
            guard="exhaustive enumeration")
    if num_pilots == 1:
        return PilotAssignment(np.zeros(k, dtype=int))
    table = _group_rate_table(beta, num_pilots, pilot_snr(cfg), uplink_snr(cfg))
    weights = num_pilots ** np.arange(k - 1, -1, -1, dtype=np.int64)  # p[0] most significant
    pow2 = (np.int64(1) << np.arange(k, dtype=np.int64))
    best_score = -np.inf
    best_code = 0
    for start in range(0, total, _ENUM_CHUNK):
        codes = np.arange(start, min(start + _ENUM_CHUNK, total), dtype=np.int64)
        digits = (codes[:, None] // weights) % num_pilots
        scores = np.zeros(codes.size)
        for pilot in range(num_pilots):
            masks = (digits == pilot).astype(np.int64) @ pow2
            scores += table[masks]
        idx = int(np.argmax(scores))
        if scores[idx] > best_score:
            best_score = scores[idx]
            best_code = codes[idx]
    labels = (best_code // weights) % num_pilots
    return PilotAssignment(labels.astype(int))


def oracle_assignment(num_ues) -> PilotAssignment:
    """Idealized contamination-free assignment: all cross-correlations are zero."""
    return PilotAssignment(np.zeros(num_ues, dtype=int), oracle=True)


def assign(strategy, realization: NetworkRealization, cfg: SimConfig, seed=0) -> PilotAssignment:
    """Dispatch a registered strategy name on one network realization."""
    if strategy == "random":
        return random_assignment(cfg.num_ues, cfg.num_pilots, seed)
    if strategy == "greedy":
        return greedy_assignment(realization, cfg, seed)
    if strategy == "repulsive":
        return repulsive_heuristic(realization.ue_positions, cfg.num_pilots, seed)
    if strategy == "optimal-repulsive":
        return optimal_repulsive(realization.ue_positions, cfg.num_pilots)
    if strategy == "exhaustive":
        return exhaustive_sum_rate(realization, cfg)
    if strategy == "oracle":
        return oracle_assignment(cfg.num_ues)
    raise ConfigError(f"unknown strategy {strategy!r}")
