"""Optimal and near-optimal path structures over a weight matrix.

A path's score is ``root[first] + sum of arc[prev, next]`` along the order.
Three solvers:

* ``solve_path_exact``: dynamic program over vertex subsets (state =
  (visited set, last vertex)), O(2^n * n^2) time and O(2^n * n) memory,
  refused above a configurable vertex limit.
* ``solve_path_brute``: scores every permutation; cross-check for tiny n.
* ``solve_path_heuristic``: greedy construction from every start vertex
  plus seeded random restarts, polished by first-improvement relocation
  and segment-reversal moves. No optimality guarantee.

Every result carries the optimal-forest score as an upper bound; the gap
is how far below that bound the returned path landed (0 does not certify
optimality, since the best forest need not be a path).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import SolverLimitError
from .structures import PathStructure
from .tree_learn import WeightMatrix, learn_optimal_branching

EXACT_DEFAULT_LIMIT = 20
BRUTE_DEFAULT_LIMIT = 9


@dataclass(frozen=True)
class PathSearchResult:
    """Outcome of a path search: the path, its score, and bound context."""

    best_path: PathStructure
    best_score: float
    upper_bound: float
    gap: float
    exact: bool


def path_score(weights: WeightMatrix, order: Sequence[int]) -> float:
    """Score of the path visiting ``order`` under ``weights``.

    Exactly rounded, so reversing an order with symmetric arc weights and
    equal root weights reproduces the identical float.
    """
    terms = [float(weights.root[order[0]])]
    terms.extend(float(weights.arc[u, v]) for u, v in zip(order, order[1:]))
    return math.fsum(terms)


def _finish(
    weights: WeightMatrix, order: Sequence[int], exact: bool
) -> PathSearchResult:
    # The reported score is recomputed from the order so it matches
    # score_structure on the induced parent map bit for bit; the solver's
    # internal running sums only steer the search.
    score = path_score(weights, order)
    _, upper = learn_optimal_branching(weights)
    # Paths are a subset of forests, so the bound dominates the score; any
    # negative residue is float noise.
    gap = max(upper - score, 0.0)
    return PathSearchResult(
        best_path=PathStructure(tuple(int(v) for v in order)),
        best_score=float(score),
        upper_bound=float(upper),
        gap=float(gap),
        exact=exact,
    )


def solve_path_exact(
    weights: WeightMatrix, limit: int = EXACT_DEFAULT_LIMIT
) -> PathSearchResult:
    """Provably optimal path via the subset dynamic program."""
    n = weights.num_variables
    if n > limit:
        raise SolverLimitError(
            f"exact path search limited to {limit} vertices, got {n}; "
            "use the heuristic for larger instances"
        )
    full = 1 << n
    dp = np.full((full, n), -np.inf)
    back = np.full((full, n), -1, dtype=np.int8)
    for v in range(n):
        dp[1 << v, v] = weights.root[v]
    for mask in range(1, full):
        members = [v for v in range(n) if mask & (1 << v)]
        if len(members) == n:
            break
        # Extend every path ending inside `mask` by one outside vertex.
        candidates = dp[mask, members][:, None] + weights.arc[members, :]
        best = candidates.max(axis=0)
        origin = candidates.argmax(axis=0)
        for v in range(n):
            if mask & (1 << v):
                continue
            grown = mask | (1 << v)
            if best[v] > dp[grown, v]:
                dp[grown, v] = best[v]
                back[grown, v] = members[origin[v]]
    full_mask = full - 1
    end = int(np.argmax(dp[full_mask]))
    order: List[int] = []
    mask, v = full_mask, end
    while v != -1:
        order.append(v)
        prev = int(back[mask, v])
        mask ^= 1 << v
        v = prev
    order.reverse()
    return _finish(weights, order, exact=True)


def solve_path_brute(
    weights: WeightMatrix, limit: int = BRUTE_DEFAULT_LIMIT
) -> PathSearchResult:
    """Optimal path by scoring all n! orders; only for cross-checks."""
    n = weights.num_variables
    if n > limit:
        raise SolverLimitError(
            f"brute-force path search limited to {limit} vertices, got {n}"
        )
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    scores = weights.root[perms[:, 0]].copy()
    if n > 1:
        scores += weights.arc[perms[:, :-1], perms[:, 1:]].sum(axis=1)
    idx = int(np.argmax(scores))
    return _finish(weights, perms[idx].tolist(), exact=True)


def _greedy_order(weights: WeightMatrix, start: int) -> List[int]:
    n = weights.num_variables
    order = [start]
    remaining = [v for v in range(n) if v != start]
    while remaining:
        last = order[-1]
        best = remaining[0]
        for v in remaining[1:]:
            if weights.arc[last, v] > weights.arc[last, best]:
                best = v
        order.append(best)
        remaining.remove(best)
    return order


def _relocate_once(weights: WeightMatrix, order: List[int], score: float):
    n = len(order)
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            trial = list(order)
            v = trial.pop(i)
            trial.insert(j, v)
            trial_score = path_score(weights, trial)
            if trial_score > score:
                return trial, trial_score
    return None


def _reverse_once(weights: WeightMatrix, order: List[int], score: float):
    n = len(order)
    for i in range(n - 1):
        for j in range(i + 1, n):
            trial = order[:i] + order[i:j + 1][::-1] + order[j + 1:]
            trial_score = path_score(weights, trial)
            if trial_score > score:
                return trial, trial_score
    return None


def _local_search(weights: WeightMatrix, order: List[int]) -> Tuple[List[int], float]:
    score = path_score(weights, order)
    while True:
        moved = _relocate_once(weights, order, score)
        if moved is None:
            moved = _reverse_once(weights, order, score)
        if moved is None:
            return order, score
        order, score = moved


def solve_path_heuristic(
    weights: WeightMatrix, restarts: int = 8, seed: int = 0
) -> PathSearchResult:
    """Best path found by greedy starts plus seeded random restarts.

    Deterministic for a fixed (weights, restarts, seed). The returned
    result has ``exact=False`` even if it happens to be optimal.
    """
    if restarts < 1:
        raise ValueError("restarts must be a positive integer")
    n = weights.num_variables
    rng = random.Random(seed)
    starts: List[List[int]] = [_greedy_order(weights, s) for s in range(n)]
    for _ in range(restarts):
        shuffled = list(range(n))
        rng.shuffle(shuffled)
        starts.append(shuffled)
    best_order: List[int] = []
    best_score = -np.inf
    for start in starts:
        order, score = _local_search(weights, list(start))
        if score > best_score:
            best_order, best_score = order, score
    return _finish(weights, best_order, exact=False)
