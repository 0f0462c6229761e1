"""Co-Bongartz completion of clusters by filtered mutation replay."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import permutations
from typing import Any

from .errors import ColumnNotFound, PostconditionViolation, PreconditionError, TheoremViolation
from .gsystem import transition
from .laurent import LaurentPoly, LaurentSeed, laurent_seed_at
from .matrix import (
    ExchangeMatrix,
    MatrixSeed,
    Vector,
    apply_sequence,
    check_index,
    column,
    columns,
    from_columns,
    reduce_sequence,
    seed_at,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompletionRequest:
    """Complete the cluster reached by ``seq`` at the initial positions ``u`` (1-based)."""

    b0: ExchangeMatrix
    seq: tuple[int, ...]
    u: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "seq", tuple(self.seq))
        object.__setattr__(self, "u", frozenset(self.u))
        for k in self.seq:
            check_index(k, self.b0.n)
        for j in self.u:
            check_index(j, self.b0.n)


@dataclass(frozen=True)
class CompletionResult:
    retained_cvectors: tuple[Vector, ...]
    replay_seq: tuple[int, ...]
    seed: MatrixSeed
    cluster: LaurentSeed | None = None

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "retained": [list(c) for c in self.retained_cvectors],
            "replay": list(self.replay_seq),
            "seed": self.seed.to_dict(),
        }
        if self.cluster is not None:
            payload["cluster"] = self.cluster.texts()
        return payload


def collect_cvectors(b0: ExchangeMatrix, seq: Sequence[int]) -> list[Vector]:
    """c_i is column k_i of the C-matrix just before the i-th mutation."""
    trace = apply_sequence(b0, seq)
    return [column(trace[i].c, k - 1) for i, k in enumerate(seq)]


def filter_cvectors(cvectors: Iterable[Vector], u: Iterable[int]) -> list[Vector]:
    """Drop every c-vector with a nonzero entry at a position of ``u``."""
    positions = sorted(u)
    return [c for c in cvectors if all(c[j - 1] == 0 for j in positions)]


def replay(b0: ExchangeMatrix, retained: Sequence[Vector]) -> CompletionResult:
    """Mutate at whichever column of the current C-matrix equals each retained vector."""
    seed = MatrixSeed.initial(b0)
    for vector in retained:
        matches = [j for j, c in enumerate(seed.c_vectors()) if c == tuple(vector)]
        if not matches:
            raise ColumnNotFound(
                f"c-vector {tuple(vector)} is not a column of C after {seed.history}",
                witness={"vector": list(vector), "history": list(seed.history)},
            )
        if len(matches) > 1:
            raise TheoremViolation(f"c-vector {tuple(vector)} matches columns {[j + 1 for j in matches]}")
        logger.debug("replay matched %s at column %d", vector, matches[0] + 1)
        seed = seed.mutate(matches[0] + 1)
    return CompletionResult(tuple(tuple(v) for v in retained), seed.history, seed)


def satisfies_completion_rows(g_t: Sequence[Vector], g_target: Sequence[Vector], u: Iterable[int]) -> bool:
    """Completion criterion on g-vectors.

    Every e_j (j ∈ u) is a g-vector of the target, and in
    (g_t) = (g_target)·R each row of R at a target vector other than those
    e_j is nonnegative.
    """
    n = len(g_target)
    basis = {tuple(1 if i == j - 1 else 0 for i in range(n)) for j in u}
    if not basis <= set(g_target):
        return False
    r = transition(from_columns(g_target), from_columns(g_t))
    return all(
        all(x >= 0 for x in r.row(i)) for i, g in enumerate(g_target) if tuple(g) not in basis
    )


def complete(request: CompletionRequest, with_cluster: bool = False) -> CompletionResult:
    """Collect, filter and replay; verify the completion postconditions."""
    cvectors = collect_cvectors(request.b0, request.seq)
    retained = filter_cvectors(cvectors, request.u)
    result = replay(request.b0, retained)
    logger.debug(
        "completion of %s at %s keeps %d of %d c-vectors",
        request.seq,
        sorted(request.u),
        len(retained),
        len(cvectors),
    )

    g_t = columns(seed_at(request.b0, request.seq).g)
    if not satisfies_completion_rows(g_t, result.seed.g_vectors(), request.u):
        raise PostconditionViolation(
            f"replay {result.replay_seq} does not complete {request.seq} at {sorted(request.u)}",
            witness=result.to_dict(),
        )
    if with_cluster:
        cluster = laurent_seed_at(request.b0, result.replay_seq)
        missing = [j for j in request.u if LaurentPoly.variable(j, request.b0.n) not in cluster.cluster]
        if missing:
            raise PostconditionViolation(f"completed cluster lacks initial variables {missing}")
        result = CompletionResult(result.retained_cvectors, result.replay_seq, result.seed, cluster)
    return result


def replay_avoids_initial(b0: ExchangeMatrix, result: CompletionResult, u: Iterable[int]) -> bool:
    """No replay step mutates a position currently holding x_j, j ∈ u."""
    n = b0.n
    basis = {tuple(1 if i == j - 1 else 0 for i in range(n)) for j in u}
    seed = MatrixSeed.initial(b0)
    for k in result.replay_seq:
        if column(seed.g, k - 1) in basis:
            return False
        seed = seed.mutate(k)
    return True


def _positions_of_initial(cluster: LaurentSeed, u: Iterable[int]) -> frozenset[int]:
    positions = set()
    for j in u:
        variable = LaurentPoly.variable(j, cluster.n)
        try:
            positions.add(cluster.cluster.index(variable) + 1)
        except ValueError:
            raise PreconditionError(f"x{j} is not in the cluster reached by {cluster.history}") from None
    return frozenset(positions)


def check_initial_seed_independence(
    b0: ExchangeMatrix,
    seq_to_t: Sequence[int],
    u: Iterable[int],
    seq_to_v: Sequence[int],
) -> bool:
    """Completing from t0 and from a re-rooted seed v yields the same cluster."""
    u = frozenset(u)
    root_v = laurent_seed_at(b0, seq_to_v)
    u_at_v = _positions_of_initial(root_v, u)

    direct = complete(CompletionRequest(b0, tuple(seq_to_t), u), with_cluster=True)
    assert direct.cluster is not None

    path = reduce_sequence([*reversed(seq_to_v), *seq_to_t])
    rerooted = complete(CompletionRequest(root_v.b, path, u_at_v))
    cluster = LaurentSeed(root_v.cluster, root_v.b)
    for k in rerooted.replay_seq:
        cluster = cluster.mutate(k)

    same = set(direct.cluster.cluster) == set(cluster.cluster)
    if not same:
        logger.debug("completion of %s at %s differs when rooted at %s", seq_to_t, sorted(u), seq_to_v)
    return same


def check_elementary_factorization(b0: ExchangeMatrix, seq: Sequence[int], u: Iterable[int]) -> bool:
    """𝒯_U equals the composite of its elementary completions in every order."""
    u = frozenset(u)
    if len(u) < 2:
        return True
    target = frozenset(complete(CompletionRequest(b0, tuple(seq), u)).seed.g_vectors())
    for order in permutations(sorted(u)):
        current = tuple(seq)
        for j in order:
            current = complete(CompletionRequest(b0, current, {j})).replay_seq
        if frozenset(seed_at(b0, current).g_vectors()) != target:
            logger.debug("order %s disagrees for %s", order, seq)
            return False
    return True
